"""Containment and equivalence of data-exchange schema mappings with LAV TGDs."""
from .chase import (
    ChaseConfig,
    ChaseMode,
    ChaseResult,
    ChaseStatus,
    Trigger,
    chase,
    chase_step,
    chase_to_level,
    default_level_bound,
    is_weakly_acyclic,
)
from .containment import ContainmentConfig, EquivalenceVerdict, Outcome, Verdict, check_containment, check_equivalence
from .dsl import DslError, SourceText, parse_instance, parse_mapping, parse_query, serialize_instance
from .dummies import DummySet, dummy_instances
from .hom import Homomorphism, find_homomorphism, hom_equivalent, is_isomorphic, verify_homomorphism
from .model import (
    TGD,
    Atom,
    ConjunctiveQuery,
    Constant,
    Fact,
    Instance,
    Null,
    NullGenerator,
    Schema,
    SchemaMapping,
    ValidationReport,
    Variable,
    fresh_null,
    validate_mapping,
)
from .oracle import AnswerSet, certain_answers, evaluate_query, oracle_containment, separating_query

__version__ = "0.1.0"

__all__ = [
    "AnswerSet",
    "Atom",
    "certain_answers",
    "chase_step",
    "chase_to_level",
    "chase",
    "ChaseConfig",
    "ChaseMode",
    "ChaseResult",
    "ChaseStatus",
    "check_containment",
    "check_equivalence",
    "ConjunctiveQuery",
    "Constant",
    "ContainmentConfig",
    "default_level_bound",
    "DslError",
    "dummy_instances",
    "DummySet",
    "EquivalenceVerdict",
    "evaluate_query",
    "Fact",
    "find_homomorphism",
    "fresh_null",
    "hom_equivalent",
    "Homomorphism",
    "Instance",
    "is_isomorphic",
    "is_weakly_acyclic",
    "Null",
    "NullGenerator",
    "oracle_containment",
    "Outcome",
    "parse_instance",
    "parse_mapping",
    "parse_query",
    "Schema",
    "SchemaMapping",
    "separating_query",
    "serialize_instance",
    "SourceText",
    "TGD",
    "Trigger",
    "validate_mapping",
    "ValidationReport",
    "Variable",
    "Verdict",
    "verify_homomorphism",
]
