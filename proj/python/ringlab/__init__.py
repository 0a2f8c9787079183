"""Capacity potentials on ring domains and level-set convexity checks."""

from ._ringlab import (
    ConfigError,
    ConstraintError,
    DegeneracyError,
    Field,
    GeometryError,
    HypothesisViolation,
    RinglabError,
    SolverAccuracyError,
    build_rotation,
    check_psi_admissible,
    eval_Q,
    extremize_Q,
    run,
    scan_min_du_kappa1,
    solve,
)

__all__ = [
    "ConfigError",
    "ConstraintError",
    "DegeneracyError",
    "Field",
    "GeometryError",
    "HypothesisViolation",
    "RinglabError",
    "SolverAccuracyError",
    "build_rotation",
    "check_psi_admissible",
    "eval_Q",
    "extremize_Q",
    "run",
    "scan_min_du_kappa1",
    "solve",
]
