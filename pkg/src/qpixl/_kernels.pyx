# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops: scaled Walsh-Hadamard butterflies, in-place Gray
permutation and statevector gate kernels.

Every function here has a twin with the same signature in
``_numpy_kernels``; callers never import this module directly.
"""
from libc.stdlib cimport calloc, free
from libc.stdint cimport uint8_t

NAME = "compiled"


def sfwht(double[::1] v, bint forward):
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t h = 1, base, i
    cdef double x, y
    if forward:
        while h < n:
            for base in range(0, n, 2 * h):
                for i in range(base, base + h):
                    x = v[i]
                    y = v[i + h]
                    v[i] = 0.5 * (x + y)
                    v[i + h] = 0.5 * (x - y)
            h <<= 1
    else:
        while h < n:
            for base in range(0, n, 2 * h):
                for i in range(base, base + h):
                    x = v[i]
                    y = v[i + h]
                    v[i] = x + y
                    v[i + h] = x - y
            h <<= 1


cdef inline Py_ssize_t _gray(Py_ssize_t k) nogil:
    return k ^ (k >> 1)


def gray_permute(double[::1] v, bint forward):
    """Cycle-leader permutation with an N-bit visited bitmap.

    forward:  out[gray(i)] = in[i]
    inverse:  out[i] = in[gray(i)]
    """
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t s, j, nxt
    cdef double carry, tmp
    cdef uint8_t* seen = <uint8_t*> calloc((n >> 3) + 1, 1)
    if seen == NULL:
        raise MemoryError("cannot allocate visited bitmap")
    try:
        for s in range(n):
            if seen[s >> 3] & (1 << (s & 7)):
                continue
            seen[s >> 3] |= 1 << (s & 7)
            j = _gray(s)
            if j == s:
                continue
            if forward:
                carry = v[s]
                while j != s:
                    tmp = v[j]
                    v[j] = carry
                    carry = tmp
                    seen[j >> 3] |= 1 << (j & 7)
                    j = _gray(j)
                v[s] = carry
            else:
                carry = v[s]
                j = s
                while True:
                    nxt = _gray(j)
                    if nxt == s:
                        v[j] = carry
                        break
                    v[j] = v[nxt]
                    seen[nxt >> 3] |= 1 << (nxt & 7)
                    j = nxt
    finally:
        free(seen)


cdef inline Py_ssize_t _insert_zero(Py_ssize_t m, Py_ssize_t bit) nogil:
    # spread m apart so that position ``bit`` (a power of two) reads 0
    return ((m & ~(bit - 1)) << 1) | (m & (bit - 1))


def apply_1q(double complex[::1] state, int num_qubits, int qubit,
             double m00, double m01, double m10, double m11):
    # Real matrix entries act on real and imaginary parts independently, so
    # work on the interleaved doubles and skip C complex multiplication.
    cdef Py_ssize_t half = state.shape[0] >> 1
    cdef Py_ssize_t stride = (<Py_ssize_t> 1) << (num_qubits - 1 - qubit)
    cdef Py_ssize_t m, i, j
    cdef double* x = <double*> &state[0]
    cdef double ar, ai, br, bi
    with nogil:
        for m in range(half):
            i = 2 * _insert_zero(m, stride)
            j = i + 2 * stride
            ar = x[i]
            ai = x[i + 1]
            br = x[j]
            bi = x[j + 1]
            x[i] = m00 * ar + m01 * br
            x[i + 1] = m00 * ai + m01 * bi
            x[j] = m10 * ar + m11 * br
            x[j + 1] = m10 * ai + m11 * bi


def apply_cnot(double complex[::1] state, int num_qubits, int control, int target):
    cdef Py_ssize_t quarter = state.shape[0] >> 2
    cdef Py_ssize_t cbit = (<Py_ssize_t> 1) << (num_qubits - 1 - control)
    cdef Py_ssize_t tbit = (<Py_ssize_t> 1) << (num_qubits - 1 - target)
    cdef Py_ssize_t lo = cbit if cbit < tbit else tbit
    cdef Py_ssize_t hi = cbit ^ tbit ^ lo
    cdef Py_ssize_t m, i
    cdef double complex tmp
    with nogil:
        for m in range(quarter):
            i = _insert_zero(_insert_zero(m, lo), hi) | cbit
            tmp = state[i]
            state[i] = state[i | tbit]
            state[i | tbit] = tmp
