"""Batch-parallel streaming triangle count estimation."""

from ._core import (
    Edge,
    Engine,
    Estimator,
    aggregate_estimate,
    exact_triangle_count,
    generate_gnp,
    generate_powerlaw,
    mean_coarse_estimate,
    rank_all,
    required_estimators,
)

__all__ = [
    "Edge",
    "Engine",
    "Estimator",
    "aggregate_estimate",
    "exact_triangle_count",
    "generate_gnp",
    "generate_powerlaw",
    "mean_coarse_estimate",
    "rank_all",
    "required_estimators",
]
