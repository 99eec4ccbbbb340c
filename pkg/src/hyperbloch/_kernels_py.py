"""Pure-Python Fock-space kernels.

Occupation vectors of ``n`` bosons in ``M`` modes are ordered
lexicographically with the largest leading occupation first, so
``(n, 0, ..., 0)`` is state 0.
"""

import math

import numpy as np


def binomial_table(n, modes):
    """``table[a, b]`` counts compositions of ``a`` into ``b`` non-negative parts."""
    table = np.zeros((n + 1, modes + 1), dtype=np.int64)
    table[0, 0] = 1
    for a in range(n + 1):
        for b in range(1, modes + 1):
            table[a, b] = math.comb(a + b - 1, b - 1)
    return table


def occupation_basis(modes, n):
    """All occupation vectors with total ``n``, shape ``(count, modes)``."""
    states = []

    def fill(prefix, remaining, left):
        if left == 1:
            states.append(prefix + [remaining])
            return
        for v in range(remaining, -1, -1):
            fill(prefix + [v], remaining - v, left - 1)

    if modes == 0:
        return np.zeros((0, 0), dtype=np.int64)
    fill([], n, modes)
    return np.array(states, dtype=np.int64)


def occupation_rank(occ, table):
    """Position of one occupation vector in :func:`occupation_basis` order."""
    modes = len(occ)
    remaining = int(sum(occ))
    rank = 0
    for i in range(modes - 1):
        parts = modes - i - 1
        for v in range(int(occ[i]) + 1, remaining + 1):
            rank += int(table[remaining - v, parts])
        remaining -= int(occ[i])
    return rank


def one_body_coo(occ, mat):
    """Sparse triplets of ``sum_ij mat[i, j] a_i^dag a_j`` on the basis ``occ``.

    Returns ``(rows, cols, vals)`` with duplicate entries already summed.
    """
    occ = np.asarray(occ, dtype=np.int64)
    mat = np.asarray(mat, dtype=np.complex128)
    count, modes = occ.shape
    n = int(occ[0].sum()) if count else 0
    table = binomial_table(n, modes)
    nz = [(i, j, mat[i, j]) for i in range(modes) for j in range(modes) if mat[i, j] != 0]
    entries = {}
    for col in range(count):
        state = [int(v) for v in occ[col]]
        for i, j, m in nz:
            nj = state[j]
            if nj == 0:
                continue
            state[j] -= 1
            ni = state[i]
            state[i] += 1
            row = occupation_rank(state, table)
            key = (row, col)
            entries[key] = entries.get(key, 0.0) + m * np.sqrt(nj * (ni + 1.0))
            state[i] -= 1
            state[j] += 1
    rows = np.fromiter((k[0] for k in entries), dtype=np.int64, count=len(entries))
    cols = np.fromiter((k[1] for k in entries), dtype=np.int64, count=len(entries))
    vals = np.fromiter(entries.values(), dtype=np.complex128, count=len(entries))
    return rows, cols, vals
