"""Geometric nontermination arguments for conjunctive linear lasso programs."""

from gnta.model import (
    GNTA,
    ContractError,
    LassoProgram,
    LinearRelation,
    RecurrenceSet,
    WitnessPrefix,
    closure,
    relation_member,
)
from gnta.parser import ParseError, parse, render

__all__ = [
    "GNTA",
    "ContractError",
    "LassoProgram",
    "LinearRelation",
    "ParseError",
    "RecurrenceSet",
    "WitnessPrefix",
    "closure",
    "parse",
    "relation_member",
    "render",
]

__version__ = "0.1.0"
