# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled statevector kernels: tight C loops over amplitude pairs.

Same contracts as uccvqe.kernels._py; selected automatically at import when
this module compiled successfully. Loops are written block-outer /
contiguous-inner so the C compiler can vectorize the amplitude runs, and
pair/quad indices are enumerated by bit insertion to avoid variable-step
ranges (required for nogil).
"""
import numpy as np

cimport numpy as cnp

ctypedef double complex dcomplex

cdef extern from *:
    int __builtin_parityll(unsigned long long) nogil


def apply_1q(cnp.ndarray[dcomplex, ndim=1] state, int n, int q,
             dcomplex m00, dcomplex m01, dcomplex m10, dcomplex m11):
    cdef Py_ssize_t dim = state.shape[0]
    cdef Py_ssize_t half = dim >> (q + 1)
    cdef Py_ssize_t nblocks = dim >> (n - q)  # 2**q
    cdef Py_ssize_t b, base, i, i1
    cdef dcomplex a0, a1
    cdef dcomplex* s = <dcomplex*> state.data
    with nogil:
        for b in range(nblocks):
            base = b * (half << 1)
            for i in range(base, base + half):
                i1 = i + half
                a0 = s[i]
                a1 = s[i1]
                s[i] = m00 * a0 + m01 * a1
                s[i1] = m10 * a0 + m11 * a1


def apply_phase(cnp.ndarray[dcomplex, ndim=1] state, int n, int q,
                dcomplex p0, dcomplex p1):
    cdef Py_ssize_t dim = state.shape[0]
    cdef Py_ssize_t half = dim >> (q + 1)
    cdef Py_ssize_t nblocks = dim >> (n - q)
    cdef Py_ssize_t b, base, i
    cdef dcomplex* s = <dcomplex*> state.data
    with nogil:
        for b in range(nblocks):
            base = b * (half << 1)
            for i in range(base, base + half):
                s[i] = s[i] * p0
                s[i + half] = s[i + half] * p1


def apply_cnot(cnp.ndarray[dcomplex, ndim=1] state, int n, int control, int target):
    cdef Py_ssize_t dim = state.shape[0]
    cdef int c_pos = n - 1 - control
    cdef int t_pos = n - 1 - target
    cdef int hi = c_pos if c_pos > t_pos else t_pos
    cdef int lo = c_pos if c_pos < t_pos else t_pos
    cdef unsigned long long cbit = 1ULL << c_pos
    cdef unsigned long long tbit = 1ULL << t_pos
    cdef unsigned long long lo_mask = (1ULL << lo) - 1
    cdef unsigned long long mid_mask = (1ULL << (hi - 1)) - 1 - lo_mask
    cdef unsigned long long k, i, j
    cdef Py_ssize_t quads = dim >> 2
    cdef dcomplex tmp
    cdef dcomplex* s = <dcomplex*> state.data
    with nogil:
        for k in range(<unsigned long long> quads):
            # spread k over the index bits excluding c_pos and t_pos
            i = (k & lo_mask) | ((k & mid_mask) << 1) | ((k & ~(lo_mask | mid_mask)) << 2)
            i |= cbit
            j = i | tbit
            tmp = s[i]
            s[i] = s[j]
            s[j] = tmp


def pauli_expectation(cnp.ndarray[dcomplex, ndim=1] state, int n,
                      unsigned long long x_bits, unsigned long long z_bits):
    cdef Py_ssize_t dim = state.shape[0]
    cdef unsigned long long i
    cdef dcomplex acc = 0
    cdef double sign
    cdef dcomplex* s = <dcomplex*> state.data
    with nogil:
        for i in range(<unsigned long long> dim):
            sign = -1.0 if __builtin_parityll(i & z_bits) else 1.0
            acc = acc + sign * s[i ^ x_bits].conjugate() * s[i]
    return complex(acc)


def apply_pauli_sum(cnp.ndarray[dcomplex, ndim=1] vec, int n, table):
    cdef Py_ssize_t dim = vec.shape[0]
    cdef cnp.ndarray[dcomplex, ndim=1] out = np.zeros(dim, dtype=np.complex128)
    cdef unsigned long long i, src, x_bits, z_bits
    cdef dcomplex coeff
    cdef double sign
    cdef dcomplex* v = <dcomplex*> vec.data
    cdef dcomplex* o = <dcomplex*> out.data
    for x_py, z_py, c_py in table:
        x_bits = x_py
        z_bits = z_py
        coeff = c_py
        with nogil:
            for i in range(<unsigned long long> dim):
                src = i ^ x_bits
                sign = -1.0 if __builtin_parityll(src & z_bits) else 1.0
                o[i] = o[i] + coeff * sign * v[src]
    return out
