"""Pure-Python IEEE binary16 emulation (reference backend).

All routines operate on raw bit patterns (ints / uint16 arrays) so results
are identical on every host, independent of any native half-precision
support. The compiled backend in ``_half_cy`` implements the same
algorithms; ``consmax.half`` picks whichever is available at import time.

Conversion double -> half follows the classic field-arithmetic scheme of
numpy's halffloat.c: round-to-nearest-even with a sticky bit for the
subnormal shift, overflow to infinity, gradual underflow. NaNs are
canonicalized to 0x7E00 so that outputs are bit-deterministic.
"""

from __future__ import annotations

import math
import struct

import numpy as np

BACKEND = "python"

_EXP_MASK = 0x7FF0000000000000
_SIG_MASK = 0x000FFFFFFFFFFFFF
# Bits of the double significand that lie below the half significand.
_ROUND_MASK = 0x000007FFFFFFFFFF  # low 43 bits (guard + round + sticky)
_HALF_ULP = 0x0000020000000000  # bit 41: half an ulp of the half target
_NAN_H = 0x7E00


def d2h(x: float) -> int:
    """Round a double to binary16 (RNE); returns the 16-bit pattern."""
    d = struct.unpack("<Q", struct.pack("<d", x))[0]
    sign = (d >> 48) & 0x8000
    d_exp = d & _EXP_MASK
    d_sig = d & _SIG_MASK

    if d_exp == _EXP_MASK:  # inf or nan
        if d_sig:
            return _NAN_H
        return sign | 0x7C00
    if d_exp >= 0x40F0000000000000:  # |x| >= 2^16: overflow to inf
        return sign | 0x7C00
    if d_exp >= 0x3F10000000000000:  # |x| >= 2^-14: normal half range
        if (d_sig & _ROUND_MASK) != _HALF_ULP:
            d_sig += _HALF_ULP
        h = (d_sig >> 42) + ((d_exp - 0x3F00000000000000) >> 42)
        return sign | h  # mantissa carry may bump the exponent, up to inf
    if d_exp < 0x3E60000000000000:  # |x| < 2^-25: underflow to signed zero
        return sign
    # Subnormal half: shift the (implicit-1) significand into place,
    # folding shifted-out bits into a sticky bit so RNE ties stay exact.
    shift = 1009 - (d_exp >> 52)
    sig = 0x0010000000000000 | d_sig
    sticky = 1 if (sig & ((1 << shift) - 1)) else 0
    sig = (sig >> shift) | sticky
    if (sig & _ROUND_MASK) != _HALF_ULP:
        sig += _HALF_ULP
    return sign | (sig >> 42)


def h2d(bits: int) -> float:
    """Exact value of a binary16 bit pattern as a double."""
    sign = -1.0 if bits & 0x8000 else 1.0
    exp = (bits >> 10) & 0x1F
    frac = bits & 0x03FF
    if exp == 0x1F:
        if frac:
            return math.nan
        return sign * math.inf
    if exp == 0:
        return sign * math.ldexp(frac, -24)
    return sign * math.ldexp(1024 + frac, exp - 25)


def hmul(a: int, b: int) -> int:
    """Correctly rounded (RNE) binary16 product of two bit patterns.

    The double product of two binary16 values is exact (<= 22 significant
    bits, exponent range well inside double), so one d2h rounding yields
    the IEEE result.
    """
    return d2h(h2d(a) * h2d(b))


# ---------------------------------------------------------------------------
# Vectorized variants. Same bit algorithms on uint64 lanes; used by the LUT
# sweeps and the benchmark. Results are bit-identical to the scalar ops.
# ---------------------------------------------------------------------------


def d2h_array(x: np.ndarray) -> np.ndarray:
    x = np.ascontiguousarray(x, dtype="<f8")
    d = x.view("<u8")
    sign = ((d >> 48) & 0x8000).astype(np.uint64)
    d_exp = d & np.uint64(_EXP_MASK)
    d_sig = d & np.uint64(_SIG_MASK)

    out = np.empty(x.shape, dtype=np.uint64)

    is_nan = (d_exp == _EXP_MASK) & (d_sig != 0)
    is_inf = (d_exp == _EXP_MASK) & (d_sig == 0)
    is_over = (d_exp >= 0x40F0000000000000) & (d_exp != _EXP_MASK)
    is_norm = (d_exp >= 0x3F10000000000000) & (d_exp < 0x40F0000000000000)
    is_zero = d_exp < 0x3E60000000000000
    is_sub = ~(is_nan | is_inf | is_over | is_norm | is_zero)

    # normal path
    sig = d_sig.copy()
    round_up = (sig & np.uint64(_ROUND_MASK)) != _HALF_ULP
    sig = np.where(round_up, sig + np.uint64(_HALF_ULP), sig)
    norm = (sig >> np.uint64(42)) + ((d_exp - np.uint64(0x3F00000000000000)) >> np.uint64(42))

    # subnormal path (shift is only valid there; clip to keep lanes legal)
    shift = np.uint64(1009) - (d_exp >> np.uint64(52))
    shift = np.clip(shift, 1, 63).astype(np.uint64)
    ssig = np.uint64(0x0010000000000000) | d_sig
    sticky = (ssig & ((np.uint64(1) << shift) - np.uint64(1))) != 0
    ssig = (ssig >> shift) | sticky.astype(np.uint64)
    round_up = (ssig & np.uint64(_ROUND_MASK)) != _HALF_ULP
    ssig = np.where(round_up, ssig + np.uint64(_HALF_ULP), ssig)
    sub = ssig >> np.uint64(42)

    out = np.where(is_norm, sign | norm, np.uint64(0))
    out = np.where(is_sub, sign | sub, out)
    out = np.where(is_zero, sign, out)
    out = np.where(is_inf | is_over, sign | np.uint64(0x7C00), out)
    out = np.where(is_nan, np.uint64(_NAN_H), out)
    return out.astype(np.uint16)


def h2d_array(bits: np.ndarray) -> np.ndarray:
    b = np.asarray(bits, dtype=np.uint16)
    sign = np.where(b & 0x8000, -1.0, 1.0)
    exp = ((b >> 10) & 0x1F).astype(np.int64)
    frac = (b & 0x03FF).astype(np.int64)
    normal = np.ldexp((1024 + frac).astype(np.float64), exp - 25)
    sub = np.ldexp(frac.astype(np.float64), -24)
    out = np.where(exp == 0, sub, normal)
    out = np.where((exp == 0x1F) & (frac == 0), np.inf, out)
    out = sign * out
    # NaN keeps no sign, matching the scalar path.
    return np.where((exp == 0x1F) & (frac != 0), np.nan, out)


def hmul_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return d2h_array(h2d_array(a) * h2d_array(b))
