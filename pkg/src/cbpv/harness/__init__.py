"""Generators and property checks for the CBV/CBN relationship."""

from .checks import (
    check_commutativity, check_converse_premise, check_corollary, check_four_equivalences,
    check_galois, check_lax_idempotent, check_ltr_rtl, check_main_theorem,
    check_maps_interpretation, check_side_effect_axioms, repro,
)
from .gen import GALOIS_TYPES, GenConfig, Instance, corpus, gen_expr
from .suite import SuiteResult, run_suite

__all__ = [
    "GALOIS_TYPES", "GenConfig", "Instance", "SuiteResult", "check_commutativity",
    "check_converse_premise", "check_corollary", "check_four_equivalences", "check_galois",
    "check_lax_idempotent", "check_ltr_rtl", "check_main_theorem", "check_maps_interpretation",
    "check_side_effect_axioms", "corpus", "gen_expr", "repro", "run_suite",
]
