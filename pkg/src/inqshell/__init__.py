"""inqshell: a rule-based expert-system shell with certainty factors.

Knowledge bases are written in the `.ekb` text format, consulted through a
backward-chaining engine, and shipped with a sample base covering the
eQETIC quality model's didactic-pedagogical entity at the sufficient level.
"""

from .model import (
    Arity,
    Certainty,
    Comparator,
    Conclusion,
    Condition,
    ConditionLeaf,
    ConditionNode,
    Connective,
    Diagnostic,
    Entity,
    Goal,
    KnowledgeBase,
    Level,
    PromptKind,
    PromptSpec,
    Rule,
    Severity,
    Variable,
    validate,
)
from .dsl import ParseResult, SourceSpan, lint, parse, serialize
from .inference import (
    Engine,
    Fact,
    WorkingMemory,
    cf_and,
    cf_attenuate,
    cf_merge,
    cf_or,
    eval_condition,
    explain_how,
    forward_fixpoint,
    resolve,
)
from .session import (
    Answer,
    DiagnosisReport,
    Finished,
    Question,
    Selection,
    Session,
    kb_hash,
    render_structured,
    render_text,
    start,
)

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "Arity",
    "Certainty",
    "Comparator",
    "Conclusion",
    "Condition",
    "ConditionLeaf",
    "ConditionNode",
    "Connective",
    "Diagnostic",
    "DiagnosisReport",
    "Engine",
    "Entity",
    "Fact",
    "Finished",
    "Goal",
    "KnowledgeBase",
    "Level",
    "ParseResult",
    "PromptKind",
    "PromptSpec",
    "Question",
    "Rule",
    "Selection",
    "Session",
    "Severity",
    "SourceSpan",
    "Variable",
    "WorkingMemory",
    "cf_and",
    "cf_attenuate",
    "cf_merge",
    "cf_or",
    "eval_condition",
    "explain_how",
    "forward_fixpoint",
    "kb_hash",
    "lint",
    "parse",
    "render_structured",
    "render_text",
    "resolve",
    "serialize",
    "start",
    "validate",
]
