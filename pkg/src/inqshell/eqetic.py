"""The shipped sample knowledge base: diagnosis of the eQETIC quality
model's didactic-pedagogical entity at the sufficient improvement level.

The canonical source lives in ``data/eqetic-sufficient-didactic.ekb`` and is
loaded through the regular DSL path, so every use exercises the parser.
"""

from __future__ import annotations

from importlib import resources

from . import dsl
from .model import Entity, KnowledgeBase, Level

KB_RESOURCE = "eqetic-sufficient-didactic.ekb"


def source_text() -> str:
    """The canonical `.ekb` text of the shipped knowledge base."""
    return (
        resources.files("inqshell.data").joinpath(KB_RESOURCE).read_text("utf-8")
    )


def build() -> KnowledgeBase:
    """Parse the embedded knowledge base; 38 variables, 47 rules, 16 goals."""
    result = dsl.parse(source_text(), filename=KB_RESOURCE)
    if not result.ok:
        raise RuntimeError(
            "embedded knowledge base failed to parse: "
            + "; ".join(str(d) for d in result.diagnostics)
        )
    return result.kb  # type: ignore[return-value]


def coverage_matrix(kb: KnowledgeBase) -> dict[tuple[Entity, Level], int]:
    """Rule counts over the full 6x3 entity/level grid (18 cells)."""
    matrix = {
        (entity, level): 0 for entity in Entity for level in Level
    }
    for rule in kb.rules:
        for tag in rule.tags:
            matrix[tag] += 1
    return matrix


def best_practice_answers(kb: KnowledgeBase) -> dict[str, list[tuple[str, float | None]]]:
    """A full 'all practices implemented' answer assignment: the strongest
    choice for every askable variable at full certainty."""
    best = {
        "objectives-documented": [("yes", None)],
        "objectives-measurable": [("yes", None)],
        "syllabus-published": [("yes", None)],
        "prerequisites-stated": [("yes", None)],
        "content-expert-review": [("yes", None)],
        "review-frequency": [("each-offering", None)],
        "errata-process": [("yes", None)],
        "media-types": [
            ("text", None),
            ("video", None),
            ("audio", None),
            ("interactive", None),
        ],
        "activity-variety": [("high", None)],
        "assessment-mapping": [("full", None)],
        "feedback-turnaround": [("within-two-days", None)],
        "discussion-forum": [("yes", None)],
        "accessibility-conformance": [("full", None)],
        "plain-language-check": [("yes", None)],
        "tutor-training": [("complete", None)],
        "welcome-guide": [("yes", None)],
        "study-roadmap": [("yes", None)],
        "improvement-meetings": [("regular", None)],
        "feedback-channels": [
            ("surveys", 1.0),
            ("interviews", 1.0),
            ("analytics", 1.0),
        ],
        "navigation-consistent": [("yes", None)],
    }
    missing = [
        v.id
        for v in kb.variables.values()
        if v.askable and v.key not in {k.casefold() for k in best}
    ]
    if missing:
        raise RuntimeError(f"fixture misses askable variables: {missing}")
    return best
