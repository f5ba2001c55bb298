"""Core domain types for knowledge bases, plus the whole-KB validator.

Identifiers (variable ids, value labels, rule ids) are case-preserving but
compared case-insensitively; ``ident_key`` produces the comparison key used
throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Optional, Union


class Certainty(float):
    """A confidence weight in the closed interval [0, 1].

    Shown to users as a percentage; stored as a plain real number so the
    combination algebra stays readable.
    """

    __slots__ = ()

    def __new__(cls, value: float) -> "Certainty":
        v = float(value)
        if not (0.0 <= v <= 1.0):
            raise ValueError(f"certainty must be in [0, 1], got {value!r}")
        return super().__new__(cls, v)

    def as_percent(self) -> str:
        return f"{float(self) * 100:g}%"

    def __repr__(self) -> str:
        return f"Certainty({float(self)!r})"


CERTAIN = Certainty(1.0)
IMPOSSIBLE = Certainty(0.0)

#: Default truth threshold: facts below it do not satisfy conditions.
DEFAULT_TRUTH_THRESHOLD = Certainty(0.2)


def ident_key(name: str) -> str:
    """Comparison key for identifiers (case-insensitive, case-preserving)."""
    return name.casefold()


class Arity(str, Enum):
    UNIVALUED = "univalued"
    MULTIVALUED = "multivalued"


class PromptKind(str, Enum):
    MULTICHOICE = "multichoice"
    FORCEDCHOICE = "forcedchoice"
    CHOICE = "choice"
    ALLCHOICE = "allchoice"

    @property
    def multiple(self) -> bool:
        return self in (PromptKind.MULTICHOICE, PromptKind.ALLCHOICE)


class Entity(str, Enum):
    DIDACTIC_PEDAGOGICAL = "didactic-pedagogical"
    TECHNOLOGY = "technology"
    MANAGEMENT = "management"
    SUPPORT = "support"
    TUTORING = "tutoring"
    EVALUATION = "evaluation"


class Level(str, Enum):
    SUFFICIENT = "sufficient"
    INTERMEDIATE = "intermediate"
    GLOBAL = "global"


class Comparator(str, Enum):
    IS = "is"
    IS_NOT = "is-not"


class Connective(str, Enum):
    AND = "and"
    OR = "or"


@dataclass(frozen=True)
class PromptSpec:
    question_text: str
    kind: PromptKind
    allow_cf_input: bool = False
    help_text: Optional[str] = None


@dataclass(frozen=True)
class Variable:
    id: str
    arity: Arity
    domain: tuple[str, ...] = ()
    prompt: Optional[PromptSpec] = None
    span: object = field(default=None, compare=False, repr=False)

    @property
    def askable(self) -> bool:
        return self.prompt is not None

    @property
    def key(self) -> str:
        return ident_key(self.id)

    def domain_keys(self) -> set[str]:
        return {ident_key(v) for v in self.domain}


@dataclass(frozen=True)
class ConditionLeaf:
    variable: str
    comparator: Comparator
    value: str
    span: object = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class ConditionNode:
    connective: Connective
    children: tuple["Condition", ...]

    def __post_init__(self) -> None:
        if not self.children:
            raise ValueError("condition node needs at least one child")


Condition = Union[ConditionLeaf, ConditionNode]


def condition_leaves(cond: Condition) -> Iterator[ConditionLeaf]:
    if isinstance(cond, ConditionLeaf):
        yield cond
    else:
        for child in cond.children:
            yield from condition_leaves(child)


@dataclass(frozen=True)
class Conclusion:
    variable: str
    value: str
    attenuation: Certainty = CERTAIN
    span: object = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Rule:
    id: str
    antecedent: Condition
    consequents: tuple[Conclusion, ...]
    tags: frozenset[tuple[Entity, Level]] = frozenset()
    description: Optional[str] = None
    span: object = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.consequents:
            raise ValueError(f"rule {self.id!r} needs at least one conclusion")

    @property
    def key(self) -> str:
        return ident_key(self.id)


@dataclass(frozen=True)
class Goal:
    variable: str
    priority: int = 0
    report_threshold: Optional[Certainty] = None
    span: object = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        if self.priority < 0:
            raise ValueError("goal priority must be >= 0")


@dataclass(frozen=True)
class KnowledgeBase:
    """A validated, immutable container of variables, rules and goals.

    ``variables`` is keyed by ``ident_key`` and preserves declaration order;
    rule order is the source order and is never reordered at runtime.
    """

    name: str
    version: str = "0"
    variables: dict[str, Variable] = field(default_factory=dict)
    rules: tuple[Rule, ...] = ()
    goals: tuple[Goal, ...] = ()
    default_threshold: Certainty = DEFAULT_TRUTH_THRESHOLD
    truth_threshold: Certainty = DEFAULT_TRUTH_THRESHOLD

    __hash__ = None  # type: ignore[assignment]

    def variable(self, name: str) -> Variable:
        return self.variables[ident_key(name)]

    def has_variable(self, name: str) -> bool:
        return ident_key(name) in self.variables

    def rules_concluding(self, name: str) -> list[Rule]:
        vk = ident_key(name)
        return [
            r
            for r in self.rules
            if any(ident_key(c.variable) == vk for c in r.consequents)
        ]

    def concluded_values(self, name: str) -> list[str]:
        """Values assigned to ``name`` by any rule, in source order, deduplicated."""
        vk = ident_key(name)
        seen: dict[str, str] = {}
        for r in self.rules:
            for c in r.consequents:
                if ident_key(c.variable) == vk:
                    seen.setdefault(ident_key(c.value), c.value)
        return list(seen.values())

    def effective_domain_keys(self, name: str) -> set[str]:
        var = self.variable(name)
        keys = var.domain_keys()
        keys.update(ident_key(v) for v in self.concluded_values(name))
        return keys

    def goal_report_threshold(self, goal: Goal) -> Certainty:
        if goal.report_threshold is not None:
            return goal.report_threshold
        return self.default_threshold

    def ordered_goals(self) -> list[Goal]:
        """Goals in evaluation order: priority ascending, then source order."""
        return [
            g
            for _, _, g in sorted(
                (g.priority, i, g) for i, g in enumerate(self.goals)
            )
        ]


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    message: str
    location: str = ""
    span: object = field(default=None, compare=False, repr=False)

    def __str__(self) -> str:
        where = f" [{self.location}]" if self.location else ""
        return f"{self.severity.value}: {self.message}{where}"


def _error(message: str, location: str = "", span: object = None) -> Diagnostic:
    return Diagnostic(Severity.ERROR, message, location, span)


def _warning(message: str, location: str = "", span: object = None) -> Diagnostic:
    return Diagnostic(Severity.WARNING, message, location, span)


def validate(kb: KnowledgeBase) -> list[Diagnostic]:
    """Check every knowledge-base invariant; diagnostics are data, not exceptions.

    An empty error list means the KB is safe to consult. Warnings flag
    smells that do not stop a consultation (unreachable rules, unused
    variables, shadowed duplicate goals).
    """
    out: list[Diagnostic] = []

    concludable: set[str] = set()
    for rule in kb.rules:
        for concl in rule.consequents:
            concludable.add(ident_key(concl.variable))

    # Variable-level invariants.
    for var in kb.variables.values():
        loc = f"variable {var.id}"
        seen_vals: set[str] = set()
        for val in var.domain:
            valk = ident_key(val)
            if valk in seen_vals:
                out.append(_error(f"duplicate domain value {val!r}", loc, var.span))
            seen_vals.add(valk)
        if var.askable:
            if not var.domain:
                out.append(
                    _error("askable variable needs a non-empty domain", loc, var.span)
                )
            kind = var.prompt.kind  # type: ignore[union-attr]
            if kind.multiple and var.arity is not Arity.MULTIVALUED:
                out.append(
                    _error(
                        f"prompt kind {kind.value!r} requires a multivalued variable",
                        loc,
                        var.span,
                    )
                )
            if not kind.multiple and var.arity is not Arity.UNIVALUED:
                out.append(
                    _error(
                        f"prompt kind {kind.value!r} requires a univalued variable",
                        loc,
                        var.span,
                    )
                )

    # Rule-level invariants.
    seen_rules: set[str] = set()
    for rule in kb.rules:
        loc = f"rule {rule.id}"
        if rule.key in seen_rules:
            out.append(_error(f"duplicate rule id {rule.id!r}", loc, rule.span))
        seen_rules.add(rule.key)
        for leaf in condition_leaves(rule.antecedent):
            if not kb.has_variable(leaf.variable):
                out.append(
                    _error(
                        f"undeclared variable {leaf.variable!r}", loc, leaf.span
                    )
                )
                continue
            if ident_key(leaf.value) not in kb.effective_domain_keys(leaf.variable):
                out.append(
                    _error(
                        f"value {leaf.value!r} is not in the domain of "
                        f"{leaf.variable!r}",
                        loc,
                        leaf.span,
                    )
                )
        for concl in rule.consequents:
            if not kb.has_variable(concl.variable):
                out.append(
                    _error(
                        f"undeclared variable {concl.variable!r}", loc, concl.span
                    )
                )
                continue
            target = kb.variable(concl.variable)
            if target.domain and ident_key(concl.value) not in target.domain_keys():
                out.append(
                    _error(
                        f"value {concl.value!r} is not in the domain of "
                        f"{concl.variable!r}",
                        loc,
                        concl.span,
                    )
                )

    # Goal-level invariants.
    if not kb.goals:
        out.append(_error("knowledge base declares no goals", "goals"))
    best_goal: dict[str, Goal] = {}
    for goal in kb.goals:
        loc = f"goal {goal.variable}"
        if not kb.has_variable(goal.variable):
            out.append(
                _error(f"undeclared variable {goal.variable!r}", loc, goal.span)
            )
            continue
        vk = ident_key(goal.variable)
        if vk not in concludable:
            out.append(
                _error("no rule concludes this goal variable", loc, goal.span)
            )
        if vk in best_goal:
            out.append(
                _warning(
                    "duplicate goal shadowed by an earlier goal on the same "
                    "variable",
                    loc,
                    goal.span,
                )
            )
        else:
            best_goal[vk] = goal

    # Reachability / usage warnings.
    used: set[str] = set()
    for rule in kb.rules:
        for leaf in condition_leaves(rule.antecedent):
            used.add(ident_key(leaf.variable))
        for concl in rule.consequents:
            used.add(ident_key(concl.variable))
    goal_vars = {ident_key(g.variable) for g in kb.goals}

    for rule in kb.rules:
        loc = f"rule {rule.id}"
        for leaf in condition_leaves(rule.antecedent):
            vk = ident_key(leaf.variable)
            if vk not in kb.variables:
                continue
            var = kb.variables[vk]
            if not var.askable and vk not in concludable:
                out.append(
                    _warning(
                        f"unreachable rule: {leaf.variable!r} is neither askable "
                        "nor concluded by any rule",
                        loc,
                        leaf.span,
                    )
                )

    for var in kb.variables.values():
        if var.key not in used and var.key not in goal_vars:
            out.append(
                _warning("unused variable", f"variable {var.id}", var.span)
            )

    return out


def errors_of(diagnostics: Iterable[Diagnostic]) -> list[Diagnostic]:
    return [d for d in diagnostics if d.severity is Severity.ERROR]
