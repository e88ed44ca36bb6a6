"""Seeded Erdős–Rényi Max-Cut instances and cut evaluation.

Instances are G(n, p) graphs generated from a named, reproducible PRNG:
NumPy's PCG64 bit generator seeded directly with the instance seed. The
n*(n-1)/2 candidate edges are visited in lexicographic (i, j) order, each
consuming one uniform double from the stream and included when it is < p.
The same (n, p, seed) triple therefore always yields the same edge set,
on any machine with the same NumPy major line.

Graph file format (text, newline terminated):

    n m
    # seed=<u64> p=<num>/<den>     (optional metadata line)
    i j                            (m edge lines, 0 <= i < j < n)

The metadata line is written by :func:`serialize_graph` and ignored when
absent; any other line starting with ``#`` is also skipped.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "GraphInstance",
    "GraphParseError",
    "generate_er_graph",
    "cut_cost",
    "serialize_graph",
    "parse_graph",
]

_MAX_SEED = 2**64 - 1

# Candidate edges are drawn row by row; one row of uniforms at a time keeps
# memory O(n) while preserving the documented lexicographic stream order.


class GraphParseError(ValueError):
    """Malformed graph text; carries the 1-based line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


@dataclass(frozen=True, eq=False)
class GraphInstance:
    """An undirected simple graph over vertices 0..n-1.

    ``edges`` is an (m, 2) int64 array with rows (i, j), i < j, sorted
    lexicographically and free of duplicates. ``seed`` and
    ``edge_probability`` record how the instance was generated; both are
    None for graphs parsed from files without the metadata line.
    """

    n: int
    edges: np.ndarray
    seed: int | None = None
    edge_probability: Fraction | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("vertex count must be >= 1")
        edges = np.asarray(self.edges, dtype=np.int64)
        if edges.size == 0:
            edges = edges.reshape(0, 2)
        if edges.ndim != 2 or edges.shape[1] != 2:
            raise ValueError("edges must be an (m, 2) array")
        if edges.size:
            if edges.min() < 0 or edges.max() >= self.n:
                raise ValueError("edge endpoint out of range")
            if not (edges[:, 0] < edges[:, 1]).all():
                raise ValueError("edges must satisfy i < j (no self-loops)")
            order = np.lexsort((edges[:, 1], edges[:, 0]))
            edges = edges[order]
            if _has_duplicate_rows(edges):
                raise ValueError("duplicate edges")
        edges.setflags(write=False)
        object.__setattr__(self, "edges", edges)
        if self.seed is not None and not (0 <= int(self.seed) <= _MAX_SEED):
            raise ValueError("seed must fit in 64 bits")

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    def degrees(self) -> np.ndarray:
        """Vertex degrees as an int64 array of length n."""
        if not self.num_edges:
            return np.zeros(self.n, dtype=np.int64)
        return (
            np.bincount(self.edges[:, 0], minlength=self.n)
            + np.bincount(self.edges[:, 1], minlength=self.n)
        ).astype(np.int64)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GraphInstance):
            return NotImplemented
        return (
            self.n == other.n
            and self.seed == other.seed
            and self.edge_probability == other.edge_probability
            and np.array_equal(self.edges, other.edges)
        )

    __hash__ = None  # mutable-adjacent value type; not hashable

    def __repr__(self) -> str:
        return (
            f"GraphInstance(n={self.n}, m={self.num_edges}, "
            f"seed={self.seed}, p={self.edge_probability})"
        )


def _has_duplicate_rows(sorted_edges: np.ndarray) -> bool:
    if sorted_edges.shape[0] < 2:
        return False
    same = (np.diff(sorted_edges[:, 0]) == 0) & (np.diff(sorted_edges[:, 1]) == 0)
    return bool(same.any())


def generate_er_graph(n: int, p: float | Fraction, seed: int) -> GraphInstance:
    """Generate a G(n, p) instance from (n, p, seed), reproducibly.

    Each candidate edge (i, j), visited in lexicographic order, is included
    iff the next uniform double from PCG64(seed) is < p. Generation is a
    pure function of its arguments.
    """
    if n < 1:
        raise ValueError("vertex count must be >= 1")
    p_frac = p if isinstance(p, Fraction) else Fraction(p)
    if not (0 <= p_frac <= 1):
        raise ValueError("edge probability must lie in [0, 1]")
    seed = int(seed)
    if not (0 <= seed <= _MAX_SEED):
        raise ValueError("seed must fit in 64 bits")

    p_float = float(p_frac)
    rng = np.random.Generator(np.random.PCG64(seed))
    rows = []
    for i in range(n - 1):
        draws = rng.random(n - 1 - i)
        hits = np.nonzero(draws < p_float)[0]
        if hits.size:
            row = np.empty((hits.size, 2), dtype=np.int64)
            row[:, 0] = i
            row[:, 1] = hits + i + 1
            rows.append(row)
    edges = np.concatenate(rows) if rows else np.empty((0, 2), dtype=np.int64)
    return GraphInstance(n=n, edges=edges, seed=seed, edge_probability=p_frac)


def cut_cost(g: GraphInstance, assignment) -> int:
    """Number of edges whose endpoints fall on different sides of the cut."""
    a = np.asarray(assignment)
    if a.ndim != 1 or a.shape[0] != g.n:
        raise ValueError(f"assignment length {a.shape} does not match n={g.n}")
    if a.size and not np.isin(a, (0, 1)).all():
        raise ValueError("assignment must be binary (0/1)")
    if g.num_edges == 0:
        return 0
    return int(np.count_nonzero(a[g.edges[:, 0]] != a[g.edges[:, 1]]))


def serialize_graph(g: GraphInstance) -> str:
    """Render a graph in the text format described in the module docstring."""
    lines = [f"{g.n} {g.num_edges}"]
    if g.seed is not None and g.edge_probability is not None:
        p = g.edge_probability
        lines.append(f"# seed={g.seed} p={p.numerator}/{p.denominator}")
    lines.extend(f"{i} {j}" for i, j in g.edges)
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> GraphInstance:
    """Inverse of :func:`serialize_graph`; raises GraphParseError on bad input."""
    lines = text.splitlines()
    if not lines:
        raise GraphParseError(1, "empty input, expected header 'n m'")

    header = lines[0].split()
    if len(header) != 2:
        raise GraphParseError(1, f"expected header 'n m', got {lines[0]!r}")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise GraphParseError(1, f"non-integer header {lines[0]!r}") from None
    if n < 1:
        raise GraphParseError(1, f"vertex count must be >= 1, got {n}")
    if m < 0:
        raise GraphParseError(1, f"edge count must be >= 0, got {m}")

    seed: int | None = None
    p: Fraction | None = None
    edges = np.empty((m, 2), dtype=np.int64)
    count = 0
    for line_no, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            parsed = _parse_metadata(line)
            if parsed is not None:
                seed, p = parsed
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(line_no, f"expected edge 'i j', got {raw!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphParseError(line_no, f"non-integer edge {raw!r}") from None
        if i == j:
            raise GraphParseError(line_no, f"self-loop {i} {j}")
        if not (0 <= i < j < n):
            raise GraphParseError(line_no, f"edge {i} {j} out of range for n={n} (need 0 <= i < j < n)")
        if count >= m:
            raise GraphParseError(line_no, f"more than the declared {m} edges")
        edges[count] = (i, j)
        count += 1
    if count != m:
        raise GraphParseError(len(lines), f"declared {m} edges but found {count}")

    keys = edges[:, 0] * n + edges[:, 1]
    if np.unique(keys).size != m:
        raise GraphParseError(len(lines), "duplicate edges")
    return GraphInstance(n=n, edges=edges, seed=seed, edge_probability=p)


def _parse_metadata(line: str) -> tuple[int, Fraction] | None:
    # "# seed=<u64> p=<num>/<den>"; any other comment is skipped silently
    parts = line.lstrip("#").split()
    if len(parts) != 2 or not parts[0].startswith("seed=") or not parts[1].startswith("p="):
        return None
    try:
        seed = int(parts[0][len("seed="):])
        num, den = parts[1][len("p="):].split("/")
        p = Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError):
        return None
    if not (0 <= seed <= _MAX_SEED) or not (0 <= p <= 1):
        return None
    return seed, p
