"""Information-quality analysis over goal models.

:func:`analyze_all` evaluates the Datalog axioms; :mod:`wfav.iq.direct`
holds an independent procedural implementation used as a cross-check.
"""

from .facts import extract_facts
from .provenance import ProvenanceChain, ProvenanceEvent, provenance_chain
from .rules import (
    analyze_all,
    axiom_program,
    check_accessibility,
    check_accuracy,
    check_believability,
    check_completeness,
    check_consistency,
    check_timeliness,
    check_trustworthiness,
    evaluate_model,
)
from .verdicts import Dimension, InconsistentTimestamps, IqVerdict

__all__ = [
    "Dimension",
    "InconsistentTimestamps",
    "IqVerdict",
    "ProvenanceChain",
    "ProvenanceEvent",
    "analyze_all",
    "axiom_program",
    "check_accessibility",
    "check_accuracy",
    "check_believability",
    "check_completeness",
    "check_consistency",
    "check_timeliness",
    "check_trustworthiness",
    "evaluate_model",
    "extract_facts",
    "provenance_chain",
]
