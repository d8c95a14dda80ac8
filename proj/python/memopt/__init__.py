"""Memory-assisted BBO, KHA and TEO for truss size and shape optimization."""

from ._memopt import (
    ConfigError,
    EvaluationError,
    MemoptError,
    Problem,
    list_algorithms,
    list_problems,
    make_problem,
    replicate_seed,
    run,
    run_plan,
)

__all__ = [
    "ConfigError",
    "EvaluationError",
    "MemoptError",
    "Problem",
    "list_algorithms",
    "list_problems",
    "make_problem",
    "replicate_seed",
    "run",
    "run_plan",
]
