"""Shared fixtures and the independent brute-force oracles.

The oracles here deliberately avoid every fast path in the package: cuts are
counted edge by edge over explicitly enumerated assignments, and energies
are evaluated by looping over the term dict. Tests compare the package
against these, never against itself.
"""

from __future__ import annotations

import numpy as np
import pytest

from qscore_bench import GraphInstance


def brute_force_maxcut(g: GraphInstance) -> int:
    """Maximum cut by enumerating all 2^n assignments, no symmetry tricks."""
    n = g.n
    edges = [(int(i), int(j)) for i, j in g.edges]
    best = 0
    for code in range(1 << n):
        cut = 0
        for i, j in edges:
            if ((code >> i) ^ (code >> j)) & 1:
                cut += 1
        if cut > best:
            best = cut
    return best


def brute_force_min_energy(q) -> float:
    """Minimum QUBO energy over all assignments, via the term dict."""
    best = None
    for code in range(1 << q.n):
        x = [(code >> i) & 1 for i in range(q.n)]
        e = dict_energy(q, x)
        if best is None or e < best:
            best = e
    return best


def dict_energy(q, x) -> float:
    """Plain-Python energy: constant + sum of coeff * x_i * x_j."""
    total = q.constant
    for (i, j), c in q.terms.items():
        total += c * x[i] * x[j]
    return total


def all_assignments(n: int):
    for code in range(1 << n):
        yield np.array([(code >> i) & 1 for i in range(n)], dtype=np.uint8)


@pytest.fixture
def triangle() -> GraphInstance:
    return GraphInstance(3, np.array([[0, 1], [0, 2], [1, 2]]))


@pytest.fixture
def k4() -> GraphInstance:
    return GraphInstance(4, np.array([[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]))


@pytest.fixture
def empty6() -> GraphInstance:
    return GraphInstance(6, np.empty((0, 2), dtype=np.int64))
