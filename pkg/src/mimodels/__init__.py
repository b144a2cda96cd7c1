"""Marginal independence models on partial set partitions."""

from .closure import SplitClosedIdeal, StatementSet, closure, closure_bruteforce, member
from .partitions import ParseError, Partition, leq, parse, rank
from .tensors import StateShape, cdf_to_prob, prob_to_cdf

__all__ = [
    "ParseError",
    "Partition",
    "SplitClosedIdeal",
    "StateShape",
    "StatementSet",
    "cdf_to_prob",
    "closure",
    "closure_bruteforce",
    "leq",
    "member",
    "parse",
    "prob_to_cdf",
    "rank",
]
