"""Closed-form pathway amplitudes for piecewise-constant single-qubit controls.

The general solver works over subsets S of {1, ..., M-1}, each encoded as a
bit mask (bit k-1 set iff pulse k is in S). For every S it forms the signed
width tau_S (pulses in S negated) and a composite phase phi_S, then

    U^N = (-i/2)^N / N! / 2^(M-1) * sum_S tau_S^N * [H e^{i phi}]_S

where H is the +-1 Hadamard matrix (-1)^popcount(S & S'), applied with a fast
Walsh-Hadamard transform. The order N only enters through tau_S^N, which is
evaluated relative to the total width so nothing over- or underflows.

Only U10 (odd N) and U00 (even N) are evaluated directly; U01 and U11
follow from the conjugation relations.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._numeric import CLD, LD, ln_factorial, make_cld
from .core import (
    ComplexAmplitude,
    PathwayQuery,
    Pulse,
    PulseSequence,
    amplitude_from_scaled,
    conjugate_amplitudes,
    scaled_to_ld,
)
from .errors import CapacityExceeded, LengthNotPowerOfTwo

DEFAULT_MAX_PULSES = 24
HARD_MAX_PULSES = 30


@dataclass(frozen=True)
class SubsetIndex:
    """A subset of {1, ..., M-1} encoded as a bit mask."""

    mask: int

    @classmethod
    def from_members(cls, members) -> "SubsetIndex":
        mask = 0
        for k in members:
            if k < 1:
                raise ValueError("subset members start at 1")
            mask |= 1 << (k - 1)
        return cls(mask)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(k + 1 for k in range(self.mask.bit_length()) if self.mask >> k & 1)

    @property
    def size(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, k: int) -> bool:
        return k >= 1 and bool(self.mask >> (k - 1) & 1)


def _parity_bit(order_parity) -> int:
    if order_parity in ("even", "odd"):
        return int(order_parity == "odd")
    if isinstance(order_parity, (int, np.integer)) and not isinstance(order_parity, bool):
        return int(order_parity) % 2
    raise ValueError(f"order_parity must be 'even', 'odd' or an integer order, got {order_parity!r}")


def _check_capacity(m: int, max_pulses: int) -> None:
    limit = min(max_pulses, HARD_MAX_PULSES)
    if m > limit:
        raise CapacityExceeded(f"{m} pulses exceeds the configured ceiling of {limit}")


def build_tau_table(seq: PulseSequence, *, dtype=np.float64, max_pulses: int = DEFAULT_MAX_PULSES) -> np.ndarray:
    """Signed width sums tau_S for every subset mask; entry 0 is the total width."""
    _check_capacity(seq.m, max_pulses)
    taus = np.array([p.tau for p in seq], dtype=dtype)
    table = taus[-1:].copy()
    for k in range(seq.m - 1):
        table = np.concatenate([table + taus[k], table - taus[k]])
    return table


def build_phase_table(
    seq: PulseSequence, order_parity, *, dtype=np.float64, max_pulses: int = DEFAULT_MAX_PULSES
) -> np.ndarray:
    """Composite phases phi_S for every subset mask.

    Members of S contribute with alternating signs in ascending order; the last
    pulse's phase is added when |S| is even and N odd, subtracted when |S| is
    odd and N even.
    """
    _check_capacity(seq.m, max_pulses)
    odd_order = _parity_bit(order_parity)
    phis = np.array([p.phi for p in seq], dtype=dtype)
    table = np.zeros(1, dtype=dtype)
    size = np.zeros(1, dtype=np.int64)
    for k in range(seq.m - 1):
        sign = np.where(size % 2 == 0, 1, -1).astype(dtype)
        table = np.concatenate([table, table + sign * phis[k]])
        size = np.concatenate([size, size + 1])
    even_size = size % 2 == 0
    if odd_order:
        table = np.where(even_size, table + phis[-1], table)
    else:
        table = np.where(even_size, table, table - phis[-1])
    return table


@dataclass(frozen=True)
class SubsetTables:
    tau_s: np.ndarray
    phase_s: np.ndarray
    m: int
    order_parity: str


def build_subset_tables(
    seq: PulseSequence, order_parity, *, dtype=np.float64, max_pulses: int = DEFAULT_MAX_PULSES
) -> SubsetTables:
    parity = "odd" if _parity_bit(order_parity) else "even"
    return SubsetTables(
        tau_s=build_tau_table(seq, dtype=dtype, max_pulses=max_pulses),
        phase_s=build_phase_table(seq, parity, dtype=dtype, max_pulses=max_pulses),
        m=seq.m,
        order_parity=parity,
    )


def fwht_in_place(v):
    """Unnormalized Walsh-Hadamard transform, w[i] = sum_j (-1)^popcount(i & j) v[j].

    A contiguous numpy array is overwritten and returned; anything else is
    copied into a new array first.
    """
    if not isinstance(v, np.ndarray) or not v.flags.c_contiguous:
        v = np.array(v)
    n = v.shape[0]
    if v.ndim != 1 or n == 0 or n & (n - 1):
        raise LengthNotPowerOfTwo(f"length {n} is not a power of two")
    h = 1
    while h < n:
        blocks = v.reshape(-1, 2, h)
        upper = blocks[:, 0, :].copy()
        lower = blocks[:, 1, :]
        blocks[:, 0, :] += lower
        np.subtract(upper, lower, out=blocks[:, 1, :])
        h *= 2
    return v


def _direct_scaled(seq: PulseSequence, order: int, max_pulses: int):
    """(s, log_scale) with U_{b0}^N = (-i)^N * exp(log_scale) * s, b = N mod 2."""
    tables = build_subset_tables(seq, order, dtype=LD, max_pulses=max_pulses)
    tau_s = tables.tau_s
    total = tau_s[0]
    if total == 0:
        return make_cld(0, 0), LD(0)
    w = np.empty(tau_s.shape, dtype=CLD)
    w.real = np.cos(tables.phase_s)
    w.imag = np.sin(tables.phase_s)
    fwht_in_place(w)
    with np.errstate(under="ignore"):
        weights = (tau_s / total) ** order
    terms = (weights * w)[np.argsort(np.abs(tau_s), kind="stable")]
    s = np.sum(terms) / LD(2) ** (seq.m - 1)
    log_scale = order * np.log(total / 2) - ln_factorial(order)
    return s, log_scale


def _trivial(q: PathwayQuery) -> ComplexAmplitude | None:
    if not q.parity_ok:
        return ComplexAmplitude.zero()
    if q.order == 0:
        return ComplexAmplitude(1 + 0j, 0.0, 0.0)
    return None


def _from_direct(q: PathwayQuery, direct) -> ComplexAmplitude:
    """Map the start-in-|0> amplitude to the requested transition."""
    if q.initial == 0:
        return direct
    zero = ComplexAmplitude.zero()
    if q.order % 2 == 0:
        return conjugate_amplitudes(direct, zero)[0]
    return conjugate_amplitudes(zero, direct)[1]


def amplitude_general(seq: PulseSequence, q: PathwayQuery, *, max_pulses: int = DEFAULT_MAX_PULSES) -> ComplexAmplitude:
    """Pathway amplitude U_ba^N for any M-pulse sequence in O(M 2^M) time."""
    _check_capacity(seq.m, max_pulses)
    trivial = _trivial(q)
    if trivial is not None:
        return trivial
    s, log_scale = _direct_scaled(seq, q.order, max_pulses)
    return _from_direct(q, amplitude_from_scaled(s, log_scale, q.order))


def amplitude_extended(seq: PulseSequence, q: PathwayQuery, *, max_pulses: int = DEFAULT_MAX_PULSES) -> np.clongdouble:
    """Same value as :func:`amplitude_general`, returned before rounding to double."""
    _check_capacity(seq.m, max_pulses)
    if not q.parity_ok:
        return make_cld(0, 0)
    if q.order == 0:
        return make_cld(1, 0)
    s, log_scale = _direct_scaled(seq, q.order, max_pulses)
    direct = scaled_to_ld(s, log_scale, q.order)
    if q.initial == 0:
        return direct
    return np.conj(direct) if q.order % 2 == 0 else -np.conj(direct)


def _expi(angle) -> np.clongdouble:
    angle = LD(angle)
    return make_cld(np.cos(angle), np.sin(angle))


def two_pulse_amplitude(p1: Pulse, p2: Pulse, q: PathwayQuery) -> ComplexAmplitude:
    """Two-pulse closed form in terms of phi+- = (phi1 +- phi2)/2 and tau+- = tau2 +- tau1.

    U10 = c e^{i phi+} [tau+^N cos phi- - i tau-^N sin phi-] for odd N,
    U00 = c e^{i phi-} [same bracket] for even N, with c = (-i/2)^N / N!.
    """
    trivial = _trivial(q)
    if trivial is not None:
        return trivial
    n = q.order
    tau_plus = LD(p1.tau) + LD(p2.tau)
    if tau_plus == 0:
        return ComplexAmplitude.zero()
    tau_minus = LD(p2.tau) - LD(p1.tau)
    phi_plus = (LD(p1.phi) + LD(p2.phi)) / 2
    phi_minus = (LD(p1.phi) - LD(p2.phi)) / 2
    with np.errstate(under="ignore"):
        ratio = (tau_minus / tau_plus) ** n
    bracket = make_cld(np.cos(phi_minus), -ratio * np.sin(phi_minus))
    prefactor = _expi(phi_plus if n % 2 else phi_minus)
    log_scale = n * np.log(tau_plus / 2) - ln_factorial(n)
    return _from_direct(q, amplitude_from_scaled(prefactor * bracket, log_scale, n))


def three_pulse_amplitude(p1: Pulse, p2: Pulse, p3: Pulse, q: PathwayQuery) -> ComplexAmplitude:
    """Three-pulse closed form: four signed widths against four phase combinations."""
    trivial = _trivial(q)
    if trivial is not None:
        return trivial
    n = q.order
    t1, t2, t3 = LD(p1.tau), LD(p2.tau), LD(p3.tau)
    f1, f2, f3 = LD(p1.phi), LD(p2.phi), LD(p3.phi)
    total = t1 + t2 + t3
    if total == 0:
        return ComplexAmplitude.zero()
    if n % 2:
        e_none, e_1, e_2, e_12 = _expi(f3), _expi(f1), _expi(f2), _expi(f1 - f2 + f3)
    else:
        e_none, e_1, e_2, e_12 = make_cld(1, 0), _expi(f1 - f3), _expi(f2 - f3), _expi(f1 - f2)
    with np.errstate(under="ignore"):
        r_1 = ((-t1 + t2 + t3) / total) ** n
        r_2 = ((t1 - t2 + t3) / total) ** n
        r_12 = ((-t1 - t2 + t3) / total) ** n
    s = (
        (e_none + e_1 + e_2 + e_12)
        + r_1 * (e_none - e_1 + e_2 - e_12)
        + r_2 * (e_none + e_1 - e_2 - e_12)
        + r_12 * (e_none - e_1 - e_2 + e_12)
    ) / 4
    log_scale = n * np.log(total / 2) - ln_factorial(n)
    return _from_direct(q, amplitude_from_scaled(s, log_scale, n))
