"""Problem definitions: the playout interface, TSPTW, toys, and the oracle."""

from .base import PrimaryObjectiveView, SequenceProblem
from .oracle import MAX_ORACLE_CITIES, brute_force_front, enumerate_tours, oracle_evaluations
from .synth import synthesize_instance
from .toy import ToyTreeProblem, toy_line_problem
from .tsptw import (
    PENALTY,
    InstanceParseError,
    MoTsptwInstance,
    MoTsptwProblem,
    TourState,
    generate_secondary_costs,
    parse_classic_instance,
    parse_instance,
    serialize_instance,
)

__all__ = [
    "MAX_ORACLE_CITIES",
    "PENALTY",
    "InstanceParseError",
    "MoTsptwInstance",
    "MoTsptwProblem",
    "PrimaryObjectiveView",
    "SequenceProblem",
    "TourState",
    "ToyTreeProblem",
    "brute_force_front",
    "enumerate_tours",
    "generate_secondary_costs",
    "oracle_evaluations",
    "parse_classic_instance",
    "parse_instance",
    "serialize_instance",
    "synthesize_instance",
    "toy_line_problem",
]
