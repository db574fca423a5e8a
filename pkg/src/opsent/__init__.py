"""Entanglement of the three-photon polarisation state from ortho-positronium decay."""

from .kinematics import classify_region, energy_fractions, max_energy_fraction
from .luopt import OptimizerConfig, StateKind, WitnessReport, optimize, sweep
from .measures import concurrence_mixed, concurrence_pure, monogamy_gap, tangle
from .states import DecayAngles, DegenerateKinematics, base_state, mixed_state, pure_state
from .witnesses import q_generic, q_ghz, q_sep, q_w

__version__ = "0.1.0"

__all__ = [
    "DecayAngles",
    "DegenerateKinematics",
    "OptimizerConfig",
    "StateKind",
    "WitnessReport",
    "base_state",
    "classify_region",
    "concurrence_mixed",
    "concurrence_pure",
    "energy_fractions",
    "max_energy_fraction",
    "mixed_state",
    "monogamy_gap",
    "optimize",
    "pure_state",
    "q_generic",
    "q_ghz",
    "q_sep",
    "q_w",
    "sweep",
    "tangle",
]
