"""Exact simulation of Feynman checkers with an absorbing vertical line."""

from .arith import (
    DyadicRational,
    GaussianInt,
    HalfPowerAmplitude,
    ParityMismatch,
    amp,
    amp_add,
    amp_mul,
    amp_mul_unit,
    amp_norm_sq,
    amp_scale_sqrt2,
    amp_to_float,
)
from .closed_form import (
    IdentityReport,
    catalan,
    theorem1_amplitude,
    theorem1_induction_check,
    verify_lemma1,
    verify_lemma2,
    verify_lemma3,
    verify_lemma4,
    verify_proposition1,
)
from .engine import (
    FREE,
    AbsorptionConfig,
    WalkState,
    amplitude,
    bypass,
    initial_state,
    probability,
    run,
    step,
    survival_mass,
)
from .oracle import PathRecord, enumerate_paths, oracle_amplitude
from .series import (
    SeriesReport,
    partial_sum_closed,
    partial_sum_engine,
    tail_bound,
    term,
)

__version__ = "0.1.0"
