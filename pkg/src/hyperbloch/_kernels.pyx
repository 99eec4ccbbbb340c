# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Fock-space kernels; same contract as ``_kernels_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

from ._kernels_py import binomial_table, occupation_basis


cdef inline long long _rank(long long[::1] state, long long[:, ::1] table, int modes, long long total) noexcept nogil:
    cdef long long rank = 0
    cdef long long remaining = total
    cdef int i
    cdef long long v
    for i in range(modes - 1):
        for v in range(state[i] + 1, remaining + 1):
            rank += table[remaining - v, modes - i - 1]
        remaining -= state[i]
    return rank


def occupation_rank(occ, table):
    cdef long long[::1] state = np.ascontiguousarray(occ, dtype=np.int64)
    cdef long long[:, ::1] tab = np.ascontiguousarray(table, dtype=np.int64)
    cdef long long total = 0
    cdef int i
    for i in range(state.shape[0]):
        total += state[i]
    return _rank(state, tab, state.shape[0], total)


def one_body_coo(occ, mat):
    cdef long long[:, ::1] basis = np.ascontiguousarray(occ, dtype=np.int64)
    cdef double complex[:, ::1] m = np.ascontiguousarray(mat, dtype=np.complex128)
    cdef int count = basis.shape[0]
    cdef int modes = basis.shape[1]
    cdef long long total = 0
    cdef int i, j, p, col
    if count == 0:
        return (np.zeros(0, np.int64), np.zeros(0, np.int64), np.zeros(0, np.complex128))
    for i in range(modes):
        total += basis[0, i]
    cdef long long[:, ::1] table = binomial_table(int(total), modes)

    pairs_i = []
    pairs_j = []
    for i in range(modes):
        for j in range(modes):
            if m[i, j] != 0:
                pairs_i.append(i)
                pairs_j.append(j)
    cdef int npairs = len(pairs_i)
    cdef int[::1] pi = np.array(pairs_i, dtype=np.int32)
    cdef int[::1] pj = np.array(pairs_j, dtype=np.int32)

    cdef long long cap = <long long>count * max(npairs, 1)
    rows_arr = np.empty(cap, dtype=np.int64)
    cols_arr = np.empty(cap, dtype=np.int64)
    vals_arr = np.empty(cap, dtype=np.complex128)
    cdef long long[::1] rows = rows_arr
    cdef long long[::1] cols = cols_arr
    cdef double complex[::1] vals = vals_arr
    cdef long long[::1] state = np.empty(modes, dtype=np.int64)
    cdef long long nnz = 0
    cdef long long ni, nj

    with nogil:
        for col in range(count):
            for i in range(modes):
                state[i] = basis[col, i]
            for p in range(npairs):
                i = pi[p]
                j = pj[p]
                nj = state[j]
                if nj == 0:
                    continue
                state[j] -= 1
                ni = state[i]
                state[i] += 1
                rows[nnz] = _rank(state, table, modes, total)
                cols[nnz] = col
                vals[nnz] = m[i, j] * sqrt(<double>(nj * (ni + 1)))
                nnz += 1
                state[i] -= 1
                state[j] += 1

    # duplicates only arise from diagonal pairs (i == j) landing on one entry
    rows_arr = rows_arr[:nnz]
    cols_arr = cols_arr[:nnz]
    vals_arr = vals_arr[:nnz]
    key = rows_arr * count + cols_arr
    uniq, inverse = np.unique(key, return_inverse=True)
    summed = np.zeros(len(uniq), dtype=np.complex128)
    np.add.at(summed, inverse, vals_arr)
    return uniq // count, uniq % count, summed
