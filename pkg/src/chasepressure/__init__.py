"""Pressure-index modeling for T20 run chases.

Computes an over-by-over pressure index for the team batting second,
models its evolution with discretized order-k Markov chains backed by
phase-wise gamma fits, and turns the result into zone recommendations,
a CLI, and a live-session HTTP service.
"""

from .phases import DEATH, DEFAULT_PHASES, MIDDLE, POWERPLAY, Phase, phase_of_over
from .pressure import (
    ChaseContext,
    InningsState,
    PiSequence,
    WicketWeights,
    compute_crrr,
    compute_irrr,
    compute_pi,
    pi_sequence,
)
from .resources import ResourceTable

__all__ = [
    "ChaseContext",
    "InningsState",
    "PiSequence",
    "WicketWeights",
    "ResourceTable",
    "Phase",
    "DEFAULT_PHASES",
    "POWERPLAY",
    "MIDDLE",
    "DEATH",
    "phase_of_over",
    "compute_pi",
    "compute_irrr",
    "compute_crrr",
    "pi_sequence",
]

__version__ = "0.1.0"
