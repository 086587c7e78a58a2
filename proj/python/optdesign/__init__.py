"""Local, Bayesian and standardized maximin D-optimal designs."""

from ._core import (
    Certificate,
    DegenerateDesignError,
    DesignMeasure,
    DomainError,
    InfeasibleError,
    Model,
    SingularityError,
    Solution,
    UsageError,
    __version__,
    bayes_criterion,
    canonical_merge,
    construct_lower_bound_design,
    gram_determinant,
    growth_study,
    information_matrix,
    log_det,
    maximin_criterion,
    model,
    q_efficiency,
    solve_bayes,
    solve_local,
    solve_maximin,
    support_count,
    verify_lower_bounds,
)

__all__ = [
    "Certificate",
    "DegenerateDesignError",
    "DesignMeasure",
    "DomainError",
    "InfeasibleError",
    "Model",
    "SingularityError",
    "Solution",
    "UsageError",
    "__version__",
    "bayes_criterion",
    "canonical_merge",
    "construct_lower_bound_design",
    "gram_determinant",
    "growth_study",
    "information_matrix",
    "log_det",
    "maximin_criterion",
    "model",
    "q_efficiency",
    "solve_bayes",
    "solve_local",
    "solve_maximin",
    "support_count",
    "verify_lower_bounds",
]
