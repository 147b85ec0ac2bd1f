"""Exact pathway amplitudes (control mechanism) for a single qubit under piecewise-constant control."""

from .core import (
    ComplexAmplitude,
    LabFrameField,
    PathwayQuery,
    Pulse,
    PulseSequence,
    Unitary2,
    conjugate_amplitudes,
    pulse_unitary,
    sequence_unitary,
    single_pulse_amplitude,
    to_interaction_frame,
)
from .engine import (
    SubsetIndex,
    SubsetTables,
    amplitude_general,
    build_phase_table,
    build_subset_tables,
    build_tau_table,
    fwht_in_place,
    three_pulse_amplitude,
    two_pulse_amplitude,
)
from .errors import (
    CapacityExceeded,
    LengthNotPowerOfTwo,
    MechanismError,
    OrderTooHigh,
    QuadratureBudgetExceeded,
    SequenceFileError,
)
from .oracles import (
    Composition,
    QuadratureConfig,
    dyson_quadrature_amplitude,
    enumerate_amplitude,
    partial_sum_series,
)

__version__ = "0.1.0"
