"""Exact rational arithmetic modulo the limit shock-polar circle."""
from .poly import PolyQ, RatQ, proportionality, rat_eq, reduce
from .suite import TARGETS, ItemResult, SuiteReport, reset_targets, run_identity_suite

__all__ = ["PolyQ", "RatQ", "rat_eq", "reduce", "proportionality", "TARGETS",
           "ItemResult", "SuiteReport", "run_identity_suite", "reset_targets"]
