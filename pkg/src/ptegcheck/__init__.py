"""Exact max-plus algebra and consistency checks for P-time event graphs."""

from .maxplus import (
    NEG_INF,
    POS_INF,
    Circuit,
    MaxPlusError,
    MaxPlusMatrix,
    NonegsetVerdict,
    ext,
    in_nonegset,
    kleene_plus,
    kleene_star,
    mat_oplus,
    mat_otimes,
    oplus,
    otimes,
    positive_circuit,
)
from .periodic import PeriodicKind, PeriodicVerdict, StaticGraph, detect_inf_weight_N
from .precedence import cantor_index, has_solution, phi_closure, phi_step, phi_trace
from .pteg import (
    PTEG,
    CharacteristicMatrices,
    ConsistencyReport,
    InconsistentNetError,
    Interval,
    NetError,
    Place,
    Semantics,
    Trajectory,
    characteristic_matrices,
    check,
    check_loose,
    check_strict,
    lcr_matrices,
    normalize_marking,
    validate_trajectory,
    witness_prefix,
)
from .ultimate import UltimateKind, UltimatelyPeriodicSpec, UltimateVerdict, detect_inf_weight_U

__all__ = [name for name in dir() if not name.startswith("_")]
