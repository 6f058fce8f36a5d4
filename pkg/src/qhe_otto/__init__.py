"""Qubit quantum Otto engine driven by Landau-Zener and invariant-based shortcut protocols."""

from .cycle import CycleConfig, CycleResult, fidelity_pair, run_cycle
from .pauli import PauliVector, eigensystem, fidelity, frobenius_sq, step_unitary
from .propagator import DriveProtocol, evolve, evolve_oracle, reverse
from .protocols import (
    InvariantParams,
    LZParams,
    ZProtocolKind,
    invariant_boundaries,
    invariant_drive,
    lz_drive,
    lz_endpoints,
    lz_Z_from_invariant,
    z_protocol,
)
from .thermo import (
    BathPair,
    HeatForm,
    Regime,
    classify,
    clausius_ok,
    cost,
    cost_ratio,
    heats_closed_form,
    heats_trace_oracle,
    quasi_static,
    thermal_state,
    work_total,
    zero_work_fidelity,
)

__version__ = "0.1.0"
