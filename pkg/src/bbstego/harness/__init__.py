"""Experiment harness: bound calculators, exact oracles, estimators and experiments."""

from .adversary import nonsupport_detector
from .bounds import (
    BoundParams,
    lemma_tail_bound,
    lower_bound_queries,
    lower_bound_queries_bounded,
    se2_fail_bound,
    stl_insecurity_bound,
    stl_unreliability_bound,
)
from .counting import count_low_weight, enumerate_low_weight, weight
from .estimators import estimate_reliability, estimate_tv_distance
from .exact import FAIL
from .hybrid import hybrid_encoder

__all__ = [
    "BoundParams",
    "FAIL",
    "count_low_weight",
    "enumerate_low_weight",
    "estimate_reliability",
    "estimate_tv_distance",
    "hybrid_encoder",
    "lemma_tail_bound",
    "lower_bound_queries",
    "lower_bound_queries_bounded",
    "nonsupport_detector",
    "se2_fail_bound",
    "stl_insecurity_bound",
    "stl_unreliability_bound",
    "weight",
]
