# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled IEEE binary16 emulation (hot-path backend).

Bit-identical twin of ``consmax._half_py``: double<->half conversion with
round-to-nearest-even (sticky bit on the subnormal shift), canonical NaN,
and the widen-multiply-round product. Scalar ops plus batch kernels for
the exhaustive LUT sweeps.
"""

from libc.string cimport memcpy
from libc.stdint cimport uint16_t, uint32_t, uint64_t

import numpy as np

BACKEND = "cython"

cdef uint64_t EXP_MASK = 0x7FF0000000000000ULL
cdef uint64_t SIG_MASK = 0x000FFFFFFFFFFFFFULL
cdef uint64_t ROUND_MASK = 0x000007FFFFFFFFFFULL
cdef uint64_t HALF_ULP = 0x0000020000000000ULL
cdef uint16_t NAN_H = 0x7E00


cdef inline uint64_t _dbits(double x) nogil:
    cdef uint64_t u
    memcpy(&u, &x, 8)
    return u


cdef inline double _dval(uint64_t u) nogil:
    cdef double x
    memcpy(&x, &u, 8)
    return x


cdef uint16_t c_d2h(double x) nogil:
    cdef uint64_t d = _dbits(x)
    cdef uint64_t sign = (d >> 48) & 0x8000ULL
    cdef uint64_t d_exp = d & EXP_MASK
    cdef uint64_t d_sig = d & SIG_MASK
    cdef uint64_t sig, shift

    if d_exp == EXP_MASK:
        if d_sig:
            return NAN_H
        return <uint16_t> (sign | 0x7C00ULL)
    if d_exp >= 0x40F0000000000000ULL:
        return <uint16_t> (sign | 0x7C00ULL)
    if d_exp >= 0x3F10000000000000ULL:
        sig = d_sig
        if (sig & ROUND_MASK) != HALF_ULP:
            sig += HALF_ULP
        return <uint16_t> (sign | ((sig >> 42) + ((d_exp - 0x3F00000000000000ULL) >> 42)))
    if d_exp < 0x3E60000000000000ULL:
        return <uint16_t> sign
    shift = 1009 - (d_exp >> 52)
    sig = 0x0010000000000000ULL | d_sig
    if sig & ((1ULL << shift) - 1ULL):
        sig = (sig >> shift) | 1ULL
    else:
        sig = sig >> shift
    if (sig & ROUND_MASK) != HALF_ULP:
        sig += HALF_ULP
    return <uint16_t> (sign | (sig >> 42))


cdef double c_h2d(uint16_t bits) nogil:
    cdef uint64_t sign = (<uint64_t> (bits & 0x8000ULL)) << 48
    cdef uint32_t exp = (bits >> 10) & 0x1F
    cdef uint64_t frac = bits & 0x03FF
    cdef uint64_t d
    cdef int k

    if exp == 0x1F:
        if frac:
            return _dval(0x7FF8000000000000ULL)  # canonical quiet NaN, no sign
        return _dval(sign | EXP_MASK)
    if exp == 0:
        if frac == 0:
            return _dval(sign)
        # normalize the subnormal significand: frac in [1, 0x3FF]
        k = 0
        while not (frac & 0x400ULL):
            frac <<= 1
            k += 1
        d = sign | ((<uint64_t> (1008 - k)) << 52) | ((frac & 0x3FFULL) << 42)
        return _dval(d)
    d = sign | ((<uint64_t> (exp + 1008)) << 52) | (frac << 42)
    return _dval(d)


cdef inline uint16_t c_hmul(uint16_t a, uint16_t b) nogil:
    return c_d2h(c_h2d(a) * c_h2d(b))


def d2h(double x):
    """Round a double to binary16 (RNE); returns the 16-bit pattern."""
    return c_d2h(x)


def h2d(bits):
    """Exact value of a binary16 bit pattern as a double."""
    return c_h2d(<uint16_t> bits)


def hmul(a, b):
    """Correctly rounded (RNE) binary16 product of two bit patterns."""
    return c_hmul(<uint16_t> a, <uint16_t> b)


def d2h_array(x):
    x = np.ascontiguousarray(x, dtype=np.float64)
    out = np.empty(x.shape, dtype=np.uint16)
    cdef double[::1] xv = x.ravel()
    cdef uint16_t[::1] ov = out.ravel()
    cdef Py_ssize_t i, n = xv.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = c_d2h(xv[i])
    return out


def h2d_array(bits):
    bits = np.ascontiguousarray(bits, dtype=np.uint16)
    out = np.empty(bits.shape, dtype=np.float64)
    cdef uint16_t[::1] bv = bits.ravel()
    cdef double[::1] ov = out.ravel()
    cdef Py_ssize_t i, n = bv.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = c_h2d(bv[i])
    return out


def hmul_array(a, b):
    a = np.ascontiguousarray(a, dtype=np.uint16)
    b = np.ascontiguousarray(b, dtype=np.uint16)
    if a.shape != b.shape:
        raise ValueError("shape mismatch")
    out = np.empty(a.shape, dtype=np.uint16)
    cdef uint16_t[::1] av = a.ravel()
    cdef uint16_t[::1] bv = b.ravel()
    cdef uint16_t[::1] ov = out.ravel()
    cdef Py_ssize_t i, n = av.shape[0]
    with nogil:
        for i in range(n):
            ov[i] = c_hmul(av[i], bv[i])
    return out
