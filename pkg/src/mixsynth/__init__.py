"""Synthesis of mixin pipelines by bounded inhabitation in combinatory logic."""

from .inhabitation import Apply, Leaf, SearchConfig, check_inhabitant, inhabit
from .sources import load
from .syntax import parse_pipeline, parse_source, parse_term, parse_tt, parse_ttc

__all__ = [
    "Apply",
    "Leaf",
    "SearchConfig",
    "check_inhabitant",
    "inhabit",
    "load",
    "parse_pipeline",
    "parse_source",
    "parse_term",
    "parse_tt",
    "parse_ttc",
]
