"""Upper-triangular QUBO models, Max-Cut conversion,- and fast flip deltas.

A QUBO here is ``constant + sum_{i<=j} coeff(i,j) * x_i * x_j`` over binary
variables; diagonal keys (i, i) are the linear terms. Coefficients are kept
as given (Python ints for Max-Cut derived models, floats otherwise), so
energies of integral models are exact integers.

Max-Cut maps onto this form with diagonal -deg(i) and off-diagonal +2 per
edge: every crossing edge then contributes -1, so energy(x) == -cut(x) and
minimising the QUBO maximises the cut.

For local search, :class:`NeighborhoodCache` maintains per-variable running
sums of active couplings so that the energy change of flipping one bit costs
O(deg) instead of O(#terms).
"""

from __future__ import annotations

import json
from typing import Iterable, Mapping

import numpy as np
from numba import njit

from .graphs import GraphInstance

__all__ = [
    "Qubo",
    "NeighborhoodCache",
    "maxcut_to_qubo",
    "energy",
    "flip_delta",
    "extract_subqubo",
    "qubo_to_json",
    "qubo_from_json",
]


class Qubo:
    """Immutable quadratic form over n binary variables.

    ``terms`` maps (i, j) with i <= j to a nonzero coefficient; the full
    off-diagonal coefficient lives on the single i < j entry (no symmetric
    halving). ``constant`` is an additive offset.

    Internally either the term dict or the array view may exist first; the
    other is derived on demand. Max-Cut conversions start from the arrays,
    since instances at benchmark sizes have millions of couplings and the
    solvers only ever read the arrays.
    """

    __slots__ = ("n", "constant", "_terms", "_arrays", "_integral")

    def __init__(self, n: int, terms: Mapping[tuple[int, int], float] | None = None, constant: float = 0):
        if n < 1:
            raise ValueError("variable count must be >= 1")
        self.n = int(n)
        self.constant = constant
        clean: dict[tuple[int, int], float] = {}
        for (i, j), c in (terms or {}).items():
            i, j = int(i), int(j)
            if not (0 <= i <= j < n):
                raise ValueError(f"term index ({i}, {j}) out of range for n={n}")
            if (i, j) in clean:
                raise ValueError(f"duplicate term key ({i}, {j})")
            if c != 0:
                clean[(i, j)] = c
        self._terms = clean
        self._arrays = None
        self._integral = None

    @classmethod
    def _from_arrays(cls, n: int, arrays: "_QuboArrays", constant: float = 0, integral: bool | None = None) -> "Qubo":
        # trusted constructor: invariants hold by construction
        self = cls.__new__(cls)
        self.n = int(n)
        self.constant = constant
        self._terms = None
        self._arrays = arrays
        self._integral = integral
        return self

    def _term_dict(self) -> dict[tuple[int, int], float]:
        if self._terms is None:
            self._terms = self._arrays.to_terms(integral=bool(self._integral))
        return self._terms

    @property
    def terms(self) -> dict[tuple[int, int], float]:
        return dict(self._term_dict())

    @property
    def num_terms(self) -> int:
        if self._terms is None:
            arr = self._arrays
            return int(arr.pair_i.size + np.count_nonzero(arr.diag))
        return len(self._terms)

    @property
    def is_integral(self) -> bool:
        if self._integral is None:
            self._integral = isinstance(self.constant, (int, np.integer)) and all(
                isinstance(c, (int, np.integer)) for c in self._term_dict().values()
            )
        return self._integral

    def coefficient(self, i: int, j: int) -> float:
        """Coefficient of the unordered pair {i, j} (or the linear term if i == j)."""
        a, b = (i, j) if i <= j else (j, i)
        return self._term_dict().get((a, b), 0)

    def arrays(self) -> "_QuboArrays":
        """CSR-style float64 view used by the solvers; built once, then cached."""
        if self._arrays is None:
            self._arrays = _QuboArrays.from_terms(self.n, self._terms)
        return self._arrays

    def energy(self, assignment) -> float:
        """Exact quadratic-form value at a binary assignment.

        Returns a Python int for integral models. All intermediates stay far
        below 2**53, so the float64 accumulation is exact in that case.
        """
        x = _check_assignment(self.n, assignment)
        arr = self.arrays()
        xf = x.astype(np.float64)
        total = float(self.constant)
        if arr.pair_i.size:
            total += float(np.dot(arr.pair_c, xf[arr.pair_i] * xf[arr.pair_j]))
        if arr.diag.any():
            total += float(np.dot(arr.diag, xf))
        if self.is_integral:
            return int(round(total))
        return total

    def __eq__(self, other) -> bool:
        if not isinstance(other, Qubo):
            return NotImplemented
        return self.n == other.n and self.constant == other.constant and self._term_dict() == other._term_dict()

    def __repr__(self) -> str:
        return f"Qubo(n={self.n}, terms={self.num_terms}, constant={self.constant})"


class _QuboArrays:
    """Dense diagonal + symmetric CSR of the off-diagonal couplings."""

    __slots__ = ("diag", "indptr", "indices", "weights", "pair_i", "pair_j", "pair_c")

    @classmethod
    def from_terms(cls, n: int, terms: Mapping[tuple[int, int], float]) -> "_QuboArrays":
        diag = np.zeros(n, dtype=np.float64)
        off = [(i, j, float(c)) for (i, j), c in terms.items() if i != j]
        for (i, j), c in terms.items():
            if i == j:
                diag[i] = float(c)
        if off:
            oi = np.fromiter((t[0] for t in off), count=len(off), dtype=np.int64)
            oj = np.fromiter((t[1] for t in off), count=len(off), dtype=np.int64)
            oc = np.fromiter((t[2] for t in off), count=len(off), dtype=np.float64)
        else:
            oi = oj = np.empty(0, dtype=np.int64)
            oc = np.empty(0, dtype=np.float64)
        return cls._build(n, diag, oi, oj, oc)

    @classmethod
    def from_maxcut_edges(cls, n: int, edges: np.ndarray, degrees: np.ndarray) -> "_QuboArrays":
        diag = -degrees.astype(np.float64)
        oi = edges[:, 0].astype(np.int64) if edges.size else np.empty(0, dtype=np.int64)
        oj = edges[:, 1].astype(np.int64) if edges.size else np.empty(0, dtype=np.int64)
        oc = np.full(oi.shape, 2.0)
        return cls._build(n, diag, oi, oj, oc)

    @classmethod
    def _build(cls, n, diag, oi, oj, oc) -> "_QuboArrays":
        self = cls.__new__(cls)
        self.diag = diag
        self.pair_i, self.pair_j, self.pair_c = oi, oj, oc
        # symmetric expansion: each coupling appears in both endpoint rows
        self.indptr, self.indices, self.weights = _symmetric_csr(n, oi, oj, oc)
        return self

    def to_terms(self, integral: bool = False) -> dict[tuple[int, int], float]:
        terms: dict[tuple[int, int], float] = {}
        cast = int if integral else float
        for i in np.flatnonzero(self.diag):
            terms[(int(i), int(i))] = cast(self.diag[i])
        ii, jj, cc = self.pair_i.tolist(), self.pair_j.tolist(), self.pair_c.tolist()
        for i, j, c in zip(ii, jj, cc):
            if c != 0:
                terms[(i, j) if i <= j else (j, i)] = cast(c)
        return terms

    def neighbor_sums(self, x: np.ndarray) -> np.ndarray:
        """s[i] = sum of couplings from i into variables currently set to 1."""
        active = np.flatnonzero(x)
        s = np.zeros(self.diag.shape[0], dtype=np.float64)
        for i in active:
            lo, hi = self.indptr[i], self.indptr[i + 1]
            np.add.at(s, self.indices[lo:hi], self.weights[lo:hi])
        return s


@njit(cache=True)
def _symmetric_csr(n, oi, oj, oc):
    # counting sort of the couplings into per-vertex rows, both directions
    m = oi.shape[0]
    indptr = np.zeros(n + 1, dtype=np.int64)
    for k in range(m):
        indptr[oi[k] + 1] += 1
        indptr[oj[k] + 1] += 1
    for v in range(n):
        indptr[v + 1] += indptr[v]
    fill = indptr[:-1].copy()
    indices = np.empty(2 * m, dtype=np.int32)
    weights = np.empty(2 * m, dtype=np.float64)
    for k in range(m):
        a, b, c = oi[k], oj[k], oc[k]
        p = fill[a]
        indices[p] = b
        weights[p] = c
        fill[a] = p + 1
        p = fill[b]
        indices[p] = a
        weights[p] = c
        fill[b] = p + 1
    return indptr, indices, weights


def _check_assignment(n: int, assignment) -> np.ndarray:
    x = np.asarray(assignment)
    if x.ndim != 1 or x.shape[0] != n:
        raise ValueError(f"assignment length {x.shape} does not match n={n}")
    if x.size and not np.isin(x, (0, 1)).all():
        raise ValueError("assignment must be binary (0/1)")
    return x.astype(np.uint8)


def maxcut_to_qubo(g: GraphInstance) -> Qubo:
    """Minimising the result is equivalent to maximising the cut of ``g``.

    Diagonal -deg(i), off-diagonal +2 per edge, constant 0, so that
    energy(maxcut_to_qubo(g), x) == -cut_cost(g, x) as an exact integer
    identity for every binary assignment x. Built straight into array form;
    the term dict materialises only if asked for.
    """
    arrays = _QuboArrays.from_maxcut_edges(g.n, g.edges, g.degrees())
    return Qubo._from_arrays(g.n, arrays, constant=0, integral=True)


def energy(q: Qubo, assignment) -> float:
    """Functional alias for :meth:`Qubo.energy`."""
    return q.energy(assignment)


class NeighborhoodCache:
    """Single-owner incremental state for single-flip local search.

    Tracks the assignment, per-variable sums of couplings into active
    variables, and the current energy. ``delta(i)`` is O(1); ``flip(i)``
    applies the move and refreshes the sums in O(deg(i)).
    """

    def __init__(self, q: Qubo, assignment):
        self.qubo = q
        self.x = _check_assignment(q.n, assignment).copy()
        arr = q.arrays()
        self._arr = arr
        self.s = arr.neighbor_sums(self.x)
        self._energy = q.energy(self.x)

    @property
    def energy(self) -> float:
        return self._energy

    def delta(self, i: int) -> float:
        """Energy change of flipping bit i, without applying it."""
        if not (0 <= i < self.qubo.n):
            raise IndexError(f"variable {i} out of range")
        d = (1.0 - 2.0 * self.x[i]) * (self._arr.diag[i] + self.s[i])
        return int(round(d)) if self.qubo.is_integral else float(d)

    def all_deltas(self) -> np.ndarray:
        """Vector of single-flip deltas for every variable (float64)."""
        return (1.0 - 2.0 * self.x) * (self._arr.diag + self.s)

    def flip(self, i: int) -> float:
        """Apply the flip of bit i; returns its delta."""
        d = self.delta(i)
        sign = 1.0 - 2.0 * self.x[i]
        lo, hi = self._arr.indptr[i], self._arr.indptr[i + 1]
        np.add.at(self.s, self._arr.indices[lo:hi], sign * self._arr.weights[lo:hi])
        self.x[i] ^= 1
        self._energy += d
        return d

    def validate(self) -> None:
        """Debug check that the incremental state matches a fresh evaluation."""
        fresh = self._arr.neighbor_sums(self.x)
        if not np.allclose(fresh, self.s):
            raise AssertionError("stale neighborhood sums")
        if self.qubo.energy(self.x) != self._energy:
            raise AssertionError("stale cached energy")


def flip_delta(q: Qubo, assignment, i: int, cache: NeighborhoodCache | None = None) -> float:
    """Energy(q, x with bit i flipped) - energy(q, x).

    With a cache consistent with (q, assignment) this is O(1); without one,
    a throwaway cache is built (O(#terms)) for convenience.
    """
    if cache is None:
        cache = NeighborhoodCache(q, assignment)
    return cache.delta(i)


def extract_subqubo(q: Qubo, variables: Iterable[int], x_fixed) -> Qubo:
    """Clamp everything outside ``variables`` and fold it into a smaller QUBO.

    Sub-variables are re-indexed by ascending original index. For every
    sub-assignment y, energy(sub, y) equals energy(q, x_fixed overwritten
    with y on ``variables``): couplings to clamped variables fold into the
    linear terms and clamped-clamped terms fold into the constant.
    """
    chosen = sorted(set(int(v) for v in variables))
    if not chosen:
        raise ValueError("variable subset must be non-empty")
    if chosen[0] < 0 or chosen[-1] >= q.n:
        raise ValueError("variable subset out of range")
    x = _check_assignment(q.n, x_fixed)
    pos = {v: a for a, v in enumerate(chosen)}

    integral = q.is_integral
    zero = 0 if integral else 0.0
    terms: dict[tuple[int, int], float] = {}
    constant = q.constant if integral else float(q.constant)
    lin = [zero] * len(chosen)
    for (i, j), c in q.terms.items():
        ii, jj = pos.get(i), pos.get(j)
        if i == j:
            if ii is not None:
                lin[ii] += c
            elif x[i]:
                constant += c
        elif ii is not None and jj is not None:
            terms[(ii, jj)] = c
        elif ii is not None:
            if x[j]:
                lin[ii] += c
        elif jj is not None:
            if x[i]:
                lin[jj] += c
        elif x[i] and x[j]:
            constant += c
    for a, c in enumerate(lin):
        if c != 0:
            terms[(a, a)] = c
    return Qubo(len(chosen), terms, constant)


def qubo_to_json(q: Qubo) -> str:
    """Wire form: {"n": int, "constant": number, "terms": [[i, j, coeff], ...]}."""
    items = sorted(q.terms.items())
    payload = {
        "n": q.n,
        "constant": q.constant,
        "terms": [[i, j, c] for (i, j), c in items],
    }
    return json.dumps(payload)


def qubo_from_json(text: str | bytes | dict) -> Qubo:
    """Parse the wire form produced by :func:`qubo_to_json`."""
    obj = text if isinstance(text, dict) else json.loads(text)
    try:
        n = int(obj["n"])
        constant = obj.get("constant", 0)
        raw_terms = obj.get("terms", [])
        terms = {}
        for entry in raw_terms:
            i, j, c = entry
            terms[(int(i), int(j))] = c
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed QUBO JSON: {exc}") from exc
    return Qubo(n, terms, constant)
