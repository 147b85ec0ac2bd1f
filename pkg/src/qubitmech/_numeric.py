"""Extended-precision helpers shared by the amplitude solvers.

Amplitude sums are carried out in ``np.longdouble`` (80-bit on x86) and only
rounded to double precision when a :class:`ComplexAmplitude` is produced.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

LD = np.longdouble
CLD = np.clongdouble

_LN_FACT_TABLE_SIZE = 4096
_HALF_LN_2PI = LD("0.918938533204672741780329736405617639861")


@lru_cache(maxsize=1)
def _ln_factorial_table() -> np.ndarray:
    logs = np.log(np.arange(1, _LN_FACT_TABLE_SIZE, dtype=LD))
    return np.concatenate([np.zeros(1, dtype=LD), np.cumsum(logs)])


def ln_factorial(n: int) -> np.longdouble:
    """ln(n!) in extended precision. Table lookup below 4096, Stirling series above."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n < _LN_FACT_TABLE_SIZE:
        return _ln_factorial_table()[n]
    x = LD(n + 1)
    inv = 1 / x
    inv2 = inv * inv
    series = inv * (LD(1) / 12 - inv2 * (LD(1) / 360 - inv2 * (LD(1) / 1260 - inv2 / 1680)))
    return (x - LD("0.5")) * np.log(x) - x + _HALF_LN_2PI + series


def make_cld(re, im) -> np.clongdouble:
    out = np.zeros((), dtype=CLD)
    out.real = re
    out.imag = im
    return out[()]


def times_neg_i_pow(z, n: int) -> np.clongdouble:
    """Multiply ``z`` by (-i)**n exactly; a quarter-turn swaps components without rounding."""
    z = CLD(z)
    re, im = z.real, z.imag
    r = n % 4
    if r == 0:
        return z
    if r == 1:
        return make_cld(im, -re)
    if r == 2:
        return make_cld(-re, -im)
    return make_cld(-im, re)


def to_complex(z) -> complex:
    """Round an extended-precision complex scalar to a Python complex."""
    with np.errstate(over="ignore", under="ignore"):
        return complex(float(np.real(z)), float(np.imag(z)))


def safe_log(x) -> float:
    with np.errstate(divide="ignore"):
        return float(np.log(LD(x)))


def phase_of(z) -> float:
    return math.atan2(float(np.imag(z)), float(np.real(z)))
