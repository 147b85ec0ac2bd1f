"""Brute-force reference computations of pathway amplitudes.

None of these routines touch the subset tables or the Hadamard transform:

* :func:`enumerate_amplitude` multiplies single-pulse mechanisms over every
  split (n_1, ..., n_M) of the order among the pulses.
* :func:`dyson_quadrature_amplitude` integrates the time-ordered Dyson term
  numerically with nested Gauss-Legendre rules.
* :func:`partial_sum_series` sums orders so the result can be compared with
  the exact propagator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from ._numeric import CLD, LD, make_cld, times_neg_i_pow
from .core import ComplexAmplitude, PathwayQuery, Pulse, PulseSequence, amplitude_from_scaled
from .engine import DEFAULT_MAX_PULSES, amplitude_extended
from .errors import CapacityExceeded, OrderTooHigh, QuadratureBudgetExceeded

MAX_ENUMERATION_ORDER = 40
MAX_ENUMERATION_PULSES = 12
MAX_COMPOSITIONS = 10**8
_BLOCK = 1 << 18


@dataclass(frozen=True)
class Composition:
    """Per-pulse orders (n_1, ..., n_M) summing to the total order."""

    parts: tuple[int, ...]

    @property
    def order(self) -> int:
        return sum(self.parts)

    @property
    def odd_mask(self) -> int:
        """Subset of {1..M-1} whose parts are odd, as a bit mask."""
        return sum(1 << k for k, n in enumerate(self.parts[:-1]) if n % 2)

    def states(self, initial: int) -> list[int]:
        """State occupied at the start of each pulse, then the final state."""
        out = [initial]
        for n in self.parts:
            out.append(out[-1] ^ (n % 2))
        return out


def count_compositions(m: int, n: int) -> int:
    return math.comb(n + m - 1, m - 1)


def iter_compositions(m: int, n: int) -> Iterator[Composition]:
    if m == 1:
        yield Composition((n,))
        return
    for first in range(n + 1):
        for rest in iter_compositions(m - 1, n - first):
            yield Composition((first,) + rest.parts)


@lru_cache(maxsize=64)
def _composition_array(m: int, n: int) -> np.ndarray:
    if m == 1:
        return np.array([[n]], dtype=np.int64)
    blocks = []
    for first in range(n + 1):
        rest = _composition_array(m - 1, n - first)
        blocks.append(np.hstack([np.full((rest.shape[0], 1), first, dtype=np.int64), rest]))
    out = np.vstack(blocks)
    out.flags.writeable = False
    return out


def _composition_blocks(m: int, n: int) -> Iterator[np.ndarray]:
    if count_compositions(m, n) <= _BLOCK:
        yield _composition_array(m, n)
        return
    for first in range(n + 1):
        for rest in _composition_blocks(m - 1, n - first):
            yield np.hstack([np.full((rest.shape[0], 1), first, dtype=np.int64), rest])


def _segment_powers(seq: PulseSequence, n: int) -> np.ndarray:
    """table[k, j] = (tau_k / 2)^j / j!, built by repeated multiplication."""
    table = np.ones((seq.m, n + 1), dtype=LD)
    half = np.array([p.tau for p in seq], dtype=LD) / 2
    for j in range(1, n + 1):
        table[:, j] = table[:, j - 1] * half / j
    return table


def _enumerate_extended(seq: PulseSequence, q: PathwayQuery) -> np.clongdouble:
    m, n = seq.m, q.order
    if not q.parity_ok:
        return make_cld(0, 0)
    if n > MAX_ENUMERATION_ORDER or m > MAX_ENUMERATION_PULSES:
        raise CapacityExceeded(f"enumeration limited to N <= {MAX_ENUMERATION_ORDER}, M <= {MAX_ENUMERATION_PULSES}")
    if count_compositions(m, n) > MAX_COMPOSITIONS:
        raise CapacityExceeded(f"{count_compositions(m, n)} compositions exceeds {MAX_COMPOSITIONS}")
    powers = _segment_powers(seq, n)
    phis = np.array([p.phi for p in seq], dtype=LD)
    up = np.empty(m, dtype=CLD)
    up.real, up.imag = np.cos(phis), np.sin(phis)
    down = np.conj(up)
    rows = np.arange(m)
    total = make_cld(0, 0)
    for parts in _composition_blocks(m, n):
        magnitude = np.prod(powers[rows, parts], axis=1)
        flips = parts % 2
        state = (q.initial + np.cumsum(flips, axis=1) - flips) % 2
        factor = np.where(flips == 0, make_cld(1, 0), np.where(state == 0, up, down))
        total += np.sum(magnitude * np.prod(factor, axis=1))
    return times_neg_i_pow(total, n)


def enumerate_amplitude(seq: PulseSequence, q: PathwayQuery) -> ComplexAmplitude:
    """Sum of products of single-pulse amplitudes over all compositions of the order.

    The walk starts in ``q.initial``; a pulse with odd n_m flips the state and
    picks up e^{+i phi_m} (0->1) or e^{-i phi_m} (1->0).
    """
    if not q.parity_ok:
        return ComplexAmplitude.zero()
    return amplitude_from_scaled(_enumerate_extended(seq, q), 0, 0)


@dataclass(frozen=True)
class QuadratureConfig:
    points_per_dimension: int = 32
    max_order: int = 4
    max_evaluations: int = 50_000_000
    scheme: str = "gauss-legendre"

    def __post_init__(self):
        if not 2 <= self.points_per_dimension <= 64:
            raise ValueError("points_per_dimension must be in [2, 64]")
        if not 0 <= self.max_order <= 4:
            raise ValueError("max_order must be in [0, 4]")
        if self.scheme != "gauss-legendre":
            raise ValueError(f"unsupported scheme {self.scheme!r}")


def _quadrature_cost(cells: int, points: int, order: int) -> int:
    width = cells * points
    return sum(width**j for j in range(1, order + 1))


def dyson_quadrature_amplitude(
    seq: PulseSequence, q: PathwayQuery, cfg: QuadratureConfig = QuadratureConfig()
) -> ComplexAmplitude:
    """Numerically integrate the order-N time-ordered Dyson term.

    Time runs over [0, sum tau] at unit Rabi frequency, so pulse k occupies a
    window of length tau_k. The innermost-first recursion

        f_j(t) = int_0^t v_j(s) f_{j-1}(s) ds,   f_0 = 1

    is evaluated with Gauss-Legendre nodes on every sub-interval of [0, t]
    cut at pulse boundaries, so each cell sees a constant coupling
    v_10 = -(i/2) e^{i phi_k} or v_01 = -(i/2) e^{-i phi_k}.
    """
    n = q.order
    if n > cfg.max_order:
        raise OrderTooHigh(f"order {n} exceeds quadrature max_order {cfg.max_order}")
    if not q.parity_ok:
        return ComplexAmplitude.zero()
    if n == 0:
        return ComplexAmplitude(1 + 0j, 0.0, 0.0)
    active = [p for p in seq if p.tau > 0]
    if not active:
        return ComplexAmplitude.zero()
    cost = _quadrature_cost(len(active), cfg.points_per_dimension, n)
    if cost > cfg.max_evaluations:
        raise QuadratureBudgetExceeded(f"{cost} integrand evaluations exceeds budget {cfg.max_evaluations}")

    edges = np.concatenate([[0.0], np.cumsum([p.tau for p in active])])
    phis = np.array([p.phi for p in active])
    x, w = np.polynomial.legendre.leggauss(cfg.points_per_dimension)
    # coupling[c] for a step leaving state 0 (0->1) and leaving state 1 (1->0)
    leave0 = -0.5j * np.exp(1j * phis)
    leave1 = -0.5j * np.exp(-1j * phis)

    def level(j: int, t: np.ndarray) -> np.ndarray:
        """f_j evaluated at upper limits ``t`` (any shape)."""
        if j == 0:
            return np.ones(t.shape, dtype=complex)
        lo = np.minimum(edges[:-1], t[..., None])
        hi = np.minimum(edges[1:], t[..., None])
        half = (hi - lo) / 2
        nodes = (lo + half)[..., None] + half[..., None] * x
        inner = level(j - 1, nodes)
        state = (q.initial + j - 1) % 2
        coupling = leave0 if state == 0 else leave1
        return np.einsum("...cq,q,...c,c->...", inner, w, half, coupling)

    value = complex(level(n, np.array(edges[-1])))
    return ComplexAmplitude(value)


def partial_sum_series(
    seq: PulseSequence, a: int, b: int, n_max: int, *, max_pulses: int = DEFAULT_MAX_PULSES
) -> list[ComplexAmplitude]:
    """Cumulative sums of U_ba^N for N = 0..n_max, accumulated in extended precision."""
    if not 0 <= n_max <= 200:
        raise ValueError("n_max must be in [0, 200]")
    out = []
    running = make_cld(0, 0)
    for n in range(n_max + 1):
        running = running + amplitude_extended(seq, PathwayQuery(a, b, n), max_pulses=max_pulses)
        out.append(amplitude_from_scaled(running, 0, 0))
    return out


def series_order_for(seq: PulseSequence, tail: float = 1e-18, limit: int = 200) -> int | None:
    """Smallest order past which every series term is below ``tail``; None if beyond ``limit``."""
    half = seq.total_width / 2
    if half == 0:
        return 1
    log_term = 0.0
    for n in range(1, limit + 1):
        log_term += math.log(half / n)
        if n > half and log_term < math.log(tail):
            return n
    return None


def random_sequence(rng: np.random.Generator, m_min: int = 1, m_max: int = 6, tau_max: float = 2 * math.pi) -> PulseSequence:
    m = int(rng.integers(m_min, m_max + 1))
    taus = rng.uniform(0, tau_max, m)
    phis = rng.uniform(0, 2 * math.pi, m)
    return PulseSequence(tuple(Pulse(float(t), float(p)) for t, p in zip(taus, phis)))
