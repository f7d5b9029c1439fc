"""Parallel evaluator for interaction nets in the lightweight calculus."""

from .core import (
    Agent,
    Configuration,
    EqClass,
    Equation,
    FreshIdAllocator,
    Rule,
    RuleSet,
    Symbol,
    Var,
    alpha_equal,
    classify,
    instantiate,
    validate,
)
from .engine import EngineConfig, EvalResult, evaluate, finalize
from .lang import parse_program, print_configuration
from .oracle import Strategy, applicable_steps, check_diamond, normalize, step
from .profile import LoopStats, RunProfile, record

__all__ = [
    "Agent",
    "Configuration",
    "EqClass",
    "Equation",
    "EngineConfig",
    "EvalResult",
    "FreshIdAllocator",
    "LoopStats",
    "Rule",
    "RuleSet",
    "RunProfile",
    "Strategy",
    "Symbol",
    "Var",
    "alpha_equal",
    "applicable_steps",
    "check_diamond",
    "classify",
    "evaluate",
    "finalize",
    "instantiate",
    "normalize",
    "parse_program",
    "print_configuration",
    "record",
    "step",
    "validate",
]

__version__ = "0.1.0"
