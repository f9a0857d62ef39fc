"""Toolkit for Dutch relative-clause disambiguation experiments.

Builds selectional-preference triples from a parsed corpus, generates
grounded disambiguation test sets, and evaluates symbolic taggers under
two parse-encoding regimes: type-logical supertags with proof-net style
linking, and dependency trees as relative part-of-speech labels.
"""

__version__ = "0.1.0"

from .typelogic import Formula, Reading, parse_formula, format_formula
from .udencoding import DepTree, RelPosLabel, encode, decode
from .selpref import ReversibilityClass, SemanticClass, SvoTriple
from .clausegen import Order, PriorOrder, TestItem, generate_items, split_by_verb
from .models import BiasProfile, FeatureTagger, Regime, biased_baseline, grounding_tagger
from .evalharness import ExperimentReport, Scenario, run_scenario

__all__ = [
    "Formula", "Reading", "parse_formula", "format_formula",
    "DepTree", "RelPosLabel", "encode", "decode",
    "ReversibilityClass", "SemanticClass", "SvoTriple",
    "Order", "PriorOrder", "TestItem", "generate_items", "split_by_verb",
    "BiasProfile", "FeatureTagger", "Regime", "biased_baseline", "grounding_tagger",
    "ExperimentReport", "Scenario", "run_scenario",
]
