"""Domain types, the single-pulse mechanism and exact SU(2) propagators.

Conventions: hbar = 1 and a pulse is described only by its area ``tau``
(duration times Rabi frequency) and its drive phase ``phi``. Matrix element
``(b, a)`` is <b|U|a>, so row ``b`` and column ``a``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from ._numeric import LD, ln_factorial, make_cld, phase_of, times_neg_i_pow, to_complex

TWO_PI = 2.0 * math.pi

TRANSITIONS = ("00", "01", "10", "11")


@dataclass(frozen=True)
class Pulse:
    """One constant segment of the control: area ``tau`` and phase ``phi`` (radians).

    ``phi`` is kept exactly as given; ``canonical_phi`` is its reduction to
    [0, 2pi) for display and comparison.
    """

    tau: float
    phi: float = 0.0

    def __post_init__(self):
        tau, phi = float(self.tau), float(self.phi)
        if not math.isfinite(tau) or not math.isfinite(phi):
            raise ValueError(f"pulse values must be finite, got tau={tau}, phi={phi}")
        if tau < 0:
            raise ValueError(f"pulse width must be nonnegative, got tau={tau}")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "phi", phi)

    @property
    def canonical_phi(self) -> float:
        r = math.fmod(self.phi, TWO_PI)
        if r < 0:
            r += TWO_PI
        return 0.0 if r >= TWO_PI else r

    def equivalent(self, other: "Pulse") -> bool:
        return self.tau == other.tau and self.canonical_phi == other.canonical_phi


@dataclass(frozen=True)
class PulseSequence:
    """Ordered pulses; pulse 1 acts first."""

    pulses: tuple[Pulse, ...]

    def __post_init__(self):
        pulses = tuple(self.pulses)
        if not pulses:
            raise ValueError("a pulse sequence needs at least one pulse")
        for p in pulses:
            if not isinstance(p, Pulse):
                raise TypeError(f"expected Pulse, got {type(p).__name__}")
        object.__setattr__(self, "pulses", pulses)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[float]]) -> "PulseSequence":
        return cls(tuple(Pulse(t, p) for t, p in pairs))

    def __len__(self) -> int:
        return len(self.pulses)

    def __iter__(self) -> Iterator[Pulse]:
        return iter(self.pulses)

    def __getitem__(self, k: int) -> Pulse:
        return self.pulses[k]

    @property
    def m(self) -> int:
        return len(self.pulses)

    @property
    def taus(self) -> np.ndarray:
        return np.array([p.tau for p in self.pulses], dtype=float)

    @property
    def phis(self) -> np.ndarray:
        return np.array([p.phi for p in self.pulses], dtype=float)

    @property
    def total_width(self) -> float:
        return math.fsum(p.tau for p in self.pulses)

    def split(self, k: int, fraction: float = 0.5) -> "PulseSequence":
        """Replace pulse ``k`` (0-based) by two adjacent same-phase pulses."""
        p = self.pulses[k]
        first = p.tau * fraction
        parts = (Pulse(first, p.phi), Pulse(p.tau - first, p.phi))
        return PulseSequence(self.pulses[:k] + parts + self.pulses[k + 1:])


@dataclass(frozen=True)
class PathwayQuery:
    """The unique pathway of order ``order`` from ``initial`` to ``final``."""

    initial: int
    final: int
    order: int

    def __post_init__(self):
        if self.initial not in (0, 1) or self.final not in (0, 1):
            raise ValueError("state labels must be 0 or 1")
        if int(self.order) != self.order or self.order < 0:
            raise ValueError(f"order must be a nonnegative integer, got {self.order}")
        object.__setattr__(self, "order", int(self.order))

    @classmethod
    def from_label(cls, transition: str, order: int) -> "PathwayQuery":
        """``transition`` is "ba": final state first, as in U_ba."""
        if transition not in TRANSITIONS:
            raise ValueError(f"transition must be one of {TRANSITIONS}, got {transition!r}")
        return cls(initial=int(transition[1]), final=int(transition[0]), order=order)

    @property
    def label(self) -> str:
        return f"{self.final}{self.initial}"

    @property
    def parity_ok(self) -> bool:
        return (self.initial ^ self.final) == self.order % 2


@dataclass(frozen=True)
class ComplexAmplitude:
    """A pathway amplitude.

    ``log_magnitude`` holds ln|U| and stays finite when ``value`` under- or
    overflows double precision. ``phase`` is the argument of the amplitude.
    """

    value: complex
    log_magnitude: float | None = None
    phase: float | None = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))
        if self.phase is None:
            object.__setattr__(self, "phase", math.atan2(self.value.imag, self.value.real))
        if self.log_magnitude is None and self.value != 0 and math.isfinite(abs(self.value)):
            object.__setattr__(self, "log_magnitude", math.log(abs(self.value)))

    @classmethod
    def zero(cls) -> "ComplexAmplitude":
        return cls(0j, -math.inf, 0.0)

    @property
    def real(self) -> float:
        return self.value.real

    @property
    def imag(self) -> float:
        return self.value.imag

    @property
    def magnitude(self) -> float:
        return abs(self.value)

    def __complex__(self) -> complex:
        return self.value


def amplitude_from_scaled(s, log_scale, order: int) -> ComplexAmplitude:
    """Build an amplitude equal to (-i)**order * exp(log_scale) * s.

    ``s`` is an extended-precision complex, ``log_scale`` a real log factor.
    """
    s = times_neg_i_pow(s, order)
    mag = abs(s)
    if mag == 0:
        return ComplexAmplitude.zero()
    with np.errstate(over="ignore", under="ignore"):
        value = np.exp(LD(log_scale)) * s
    return ComplexAmplitude(to_complex(value), float(LD(log_scale) + np.log(mag)), phase_of(s))


def scaled_to_ld(s, log_scale, order: int):
    """Same quantity as :func:`amplitude_from_scaled`, kept in extended precision."""
    with np.errstate(over="ignore", under="ignore"):
        return times_neg_i_pow(s, order) * np.exp(LD(log_scale))


@dataclass(frozen=True)
class Unitary2:
    """2x2 matrix stored row-major: (u00, u01, u10, u11)."""

    u00: complex
    u01: complex
    u10: complex
    u11: complex

    @classmethod
    def from_array(cls, a: np.ndarray) -> "Unitary2":
        return cls(complex(a[0, 0]), complex(a[0, 1]), complex(a[1, 0]), complex(a[1, 1]))

    @classmethod
    def identity(cls) -> "Unitary2":
        return cls(1 + 0j, 0j, 0j, 1 + 0j)

    def as_array(self) -> np.ndarray:
        return np.array([[self.u00, self.u01], [self.u10, self.u11]], dtype=complex)

    def element(self, b: int, a: int) -> complex:
        return complex(self.as_array()[b, a])

    def __matmul__(self, other: "Unitary2") -> "Unitary2":
        return Unitary2.from_array(self.as_array() @ other.as_array())

    def unitarity_error(self) -> float:
        u = self.as_array()
        return float(np.max(np.abs(u @ u.conj().T - np.eye(2))))

    def determinant(self) -> complex:
        return self.u00 * self.u11 - self.u01 * self.u10


@dataclass(frozen=True)
class LabFrameField:
    eps_x: float
    eps_y: float
    omega0: float
    t: float


def to_interaction_frame(f: LabFrameField) -> tuple[float, float]:
    """Rotate lab-frame drive amplitudes into the frame co-rotating at ``omega0``."""
    theta = f.omega0 * f.t
    c, s = math.cos(theta), math.sin(theta)
    return (f.eps_x * c + f.eps_y * s, f.eps_y * c - f.eps_x * s)


def single_pulse_amplitude(p: Pulse, q: PathwayQuery) -> ComplexAmplitude:
    """Order-N pathway amplitude of one constant pulse.

    (1/N!) (-i/2)^N tau^N, times e^{i phi} for 0->1 and e^{-i phi} for 1->0.
    """
    n = q.order
    if not q.parity_ok:
        return ComplexAmplitude.zero()
    if n == 0:
        return ComplexAmplitude(1 + 0j, 0.0, 0.0)
    if p.tau == 0:
        return ComplexAmplitude.zero()
    log_scale = n * np.log(LD(p.tau) / 2) - ln_factorial(n)
    if q.initial == q.final:
        unit = make_cld(1, 0)
    else:
        sign = 1 if q.final == 1 else -1
        unit = make_cld(np.cos(LD(p.phi)), sign * np.sin(LD(p.phi)))
    return amplitude_from_scaled(unit, log_scale, n)


def pulse_unitary(p: Pulse) -> Unitary2:
    """exp(-i tau sigma_phi / 2) in closed form."""
    c = math.cos(p.tau / 2)
    s = math.sin(p.tau / 2)
    e = cmath.exp(1j * p.phi)
    return Unitary2(complex(c, 0.0), -1j * s * e.conjugate(), -1j * s * e, complex(c, 0.0))


def sequence_unitary(seq: PulseSequence) -> Unitary2:
    u = np.eye(2, dtype=complex)
    for p in seq:
        u = pulse_unitary(p).as_array() @ u
    return Unitary2.from_array(u)


def conjugate_amplitudes(
    u00: ComplexAmplitude, u10: ComplexAmplitude
) -> tuple[ComplexAmplitude, ComplexAmplitude]:
    """Return (U11, U01) = (conj(U00), -conj(U10)) for the same sequence and order."""
    u11 = ComplexAmplitude(u00.value.conjugate(), u00.log_magnitude, -u00.phase if u00.value else 0.0)
    u01 = ComplexAmplitude(-u10.value.conjugate(), u10.log_magnitude, _wrap(math.pi - u10.phase) if u10.value else 0.0)
    return u11, u01


def _wrap(angle: float) -> float:
    return angle - TWO_PI if angle > math.pi else angle


def parity_allows(a: int, b: int, n: int) -> bool:
    return (a ^ b) == n % 2

