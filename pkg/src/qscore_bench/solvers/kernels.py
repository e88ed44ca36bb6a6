"""Numba kernels for the solver inner loops.

All kernels work on the CSR view of a QUBO (diag, indptr, indices, weights)
plus the per-variable active-coupling sums s, and keep energies in float64.
Integral models stay exact: every intermediate is an integer far below 2**53.

First use of each kernel pays a JIT compile; ``cache=True`` persists the
compiled code next to this file so later processes skip it.
"""

from __future__ import annotations

import numpy as np
from numba import njit

__all__ = [
    "neighbor_sums",
    "sa_sweep",
    "gray_enumerate",
    "build_dense_subproblem",
    "tabu_improve",
]


@njit(cache=True)
def neighbor_sums(indptr, indices, weights, x):
    """s[i] = sum of couplings from i into variables with x == 1."""
    n = x.shape[0]
    s = np.zeros(n, dtype=np.float64)
    for i in range(n):
        if x[i]:
            for p in range(indptr[i], indptr[i + 1]):
                s[indices[p]] += weights[p]
    return s


@njit(cache=True)
def sa_sweep(indptr, indices, weights, diag, x, s, temperature, urand, idx, accepted):
    """One Metropolis sweep: len(idx) single-flip proposals at one temperature.

    Mutates x and s in place and records accepted flips in ``accepted`` so the
    caller can replay the prefix that achieved the best energy seen mid-sweep.
    Returns (energy delta at sweep end, #accepted, best delta seen, accepted
    count at that best point).
    """
    e = 0.0
    best = 0.0
    best_k = 0
    acc = 0
    for k in range(idx.shape[0]):
        i = idx[k]
        d = (1.0 - 2.0 * x[i]) * (diag[i] + s[i])
        if d <= 0.0 or urand[k] < np.exp(-d / temperature):
            sign = 1.0 - 2.0 * x[i]
            x[i] = 1 - x[i]
            for p in range(indptr[i], indptr[i + 1]):
                s[indices[p]] += sign * weights[p]
            e += d
            accepted[acc] = i
            acc += 1
            if e < best:
                best = e
                best_k = acc
    return e, acc, best, best_k


@njit(cache=True)
def gray_enumerate(indptr, indices, weights, diag, x, s, state, best_x, t_start, t_end):
    """Walk assignments t_start..t_end-1 of a binary-reflected Gray code.

    Step t flips variable 1 + ctz(t); variable 0 stays fixed at 0 (the cut is
    invariant under a global flip, halving the space). ``state`` holds
    (current energy, best energy) and is updated in place, as are x, s and
    best_x.
    """
    e = state[0]
    best_e = state[1]
    n = x.shape[0]
    for t in range(t_start, t_end):
        tt = t
        i = 1
        while tt & 1 == 0:
            tt >>= 1
            i += 1
        d = (1.0 - 2.0 * x[i]) * (diag[i] + s[i])
        sign = 1.0 - 2.0 * x[i]
        x[i] = 1 - x[i]
        for p in range(indptr[i], indptr[i + 1]):
            s[indices[p]] += sign * weights[p]
        e += d
        if e < best_e:
            best_e = e
            for j in range(n):
                best_x[j] = x[j]
    state[0] = e
    state[1] = best_e


@njit(cache=True)
def build_dense_subproblem(indptr, indices, weights, diag, s, x, chosen, marker):
    """Dense (W, d) for the subset ``chosen`` with everything else clamped.

    ``marker`` must be an int64 scratch array of length n filled with -1; it
    is used and restored in place. W is the symmetric coupling matrix within
    the subset (zero diagonal); d[a] carries the original linear term plus the
    fold of couplings into clamped active variables.
    """
    k = chosen.shape[0]
    for a in range(k):
        marker[chosen[a]] = a
    W = np.zeros((k, k), dtype=np.float64)
    d = np.empty(k, dtype=np.float64)
    for a in range(k):
        i = chosen[a]
        inside = 0.0
        for p in range(indptr[i], indptr[i + 1]):
            j = indices[p]
            b = marker[j]
            if b >= 0:
                W[a, b] = weights[p]
                if x[j]:
                    inside += weights[p]
            # clamped-active couplings stay inside s[i]
        d[a] = diag[i] + (s[i] - inside)
    for a in range(k):
        marker[chosen[a]] = -1
    return W, d


@njit(cache=True)
def tabu_improve(W, d, y, iterations, tenure, aspiration_gain):
    """Single-flip tabu search on a dense subproblem, minimising energy.

    Best-improvement moves (the move taken may worsen the energy, which is
    how tabu search leaves local optima). A variable flipped at iteration t
    is forbidden for the next ``tenure`` iterations, unless flipping it would
    beat the best energy known overall; ``aspiration_gain`` seeds that bound,
    expressed relative to the starting assignment (<= 0).

    Mutates y to the best assignment visited (the start, if nothing beat it)
    and returns (best gain relative to the start, iterations performed).
    """
    k = y.shape[0]
    sums = np.zeros(k, dtype=np.float64)
    for a in range(k):
        for b in range(k):
            if y[b]:
                sums[a] += W[a, b]
    delta = np.empty(k, dtype=np.float64)
    for a in range(k):
        delta[a] = (1.0 - 2.0 * y[a]) * (d[a] + sums[a])

    last_flip = np.full(k, -(10**12), dtype=np.int64)
    gain = 0.0
    asp = aspiration_gain if aspiration_gain < 0.0 else 0.0
    local_best = 0.0
    best_y = y.copy()
    performed = 0

    for it in range(iterations):
        pick = -1
        pick_d = 0.0
        for a in range(k):
            da = delta[a]
            if (it - last_flip[a]) <= tenure and not (gain + da < asp):
                continue
            if pick < 0 or da < pick_d:
                pick = a
                pick_d = da
        if pick < 0:
            break
        sign = 1.0 - 2.0 * y[pick]
        y[pick] = 1 - y[pick]
        gain += pick_d
        last_flip[pick] = it
        for a in range(k):
            if a != pick:
                sums[a] += sign * W[a, pick]
                delta[a] = (1.0 - 2.0 * y[a]) * (d[a] + sums[a])
        delta[pick] = -pick_d
        performed = it + 1
        if gain < local_best:
            local_best = gain
            for a in range(k):
                best_y[a] = y[a]
        if gain < asp:
            asp = gain

    for a in range(k):
        y[a] = best_y[a]
    return local_best, performed
