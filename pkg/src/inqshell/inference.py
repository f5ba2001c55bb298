"""Certainty-factor algebra and the backward-chaining engine.

``forward_fixpoint`` is the data-driven counterpart used as a test oracle:
given a full answer assignment, both chainers must agree on every goal
certainty.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence, Union

from .model import (
    Arity,
    Certainty,
    Comparator,
    Conclusion,
    Condition,
    ConditionLeaf,
    ConditionNode,
    Connective,
    KnowledgeBase,
    Rule,
    Variable,
    ident_key,
)

# -- certainty-factor algebra ----------------------------------------------


def cf_and(cs: Sequence[float]) -> Certainty:
    """Conjunctive combination: the weakest link wins."""
    if not cs:
        raise ValueError("cf_and needs at least one certainty")
    return Certainty(min(cs))


def cf_or(cs: Sequence[float]) -> Certainty:
    """Disjunctive combination: the strongest branch wins."""
    if not cs:
        raise ValueError("cf_or needs at least one certainty")
    return Certainty(max(cs))


def cf_attenuate(antecedent: float, rule_cf: float) -> Certainty:
    """Scale an antecedent certainty by the rule's own confidence."""
    return Certainty(float(antecedent) * float(rule_cf))


def cf_merge(a: float, b: float) -> Certainty:
    """Combine parallel evidence for the same fact: a + b - a*b.

    Commutative; 0 is the identity, 1 absorbs; the result never drops
    below either input.
    """
    v = (float(a) + float(b)) - float(a) * float(b)
    v = max(v, float(a), float(b))
    return Certainty(min(v, 1.0))


# -- working memory --------------------------------------------------------

ANSWERED = "answered"
DEFAULTED = "defaulted"


@dataclass(frozen=True)
class Fact:
    variable: str
    value: str
    certainty: Certainty
    provenance: str  # "answered" | "defaulted" | "inferred:<rule id>"

    @staticmethod
    def inferred_by(rule_id: str) -> str:
        return f"inferred:{rule_id}"


@dataclass
class WorkingMemory:
    facts: dict[tuple[str, str], Fact] = field(default_factory=dict)
    asked: set[str] = field(default_factory=set)
    exhausted: set[str] = field(default_factory=set)

    def resolved(self, variable: str) -> bool:
        vk = ident_key(variable)
        return vk in self.asked or vk in self.exhausted

    def fact(self, variable: str, value: str) -> Optional[Fact]:
        return self.facts.get((ident_key(variable), ident_key(value)))

    def facts_for(self, variable: str) -> list[Fact]:
        vk = ident_key(variable)
        return [f for (fk, _), f in self.facts.items() if fk == vk]

    def established_value(
        self, variable: str, threshold: float
    ) -> Optional[Fact]:
        """Strongest fact for the variable at or above the threshold."""
        candidates = [
            f for f in self.facts_for(variable) if f.certainty >= threshold
        ]
        if not candidates:
            return None
        return max(candidates, key=lambda f: f.certainty)


# -- condition evaluation --------------------------------------------------


@dataclass(frozen=True)
class Satisfied:
    certainty: Certainty


@dataclass(frozen=True)
class Failed:
    pass


@dataclass(frozen=True)
class Unknown:
    needed: frozenset[str]


TriState = Union[Satisfied, Failed, Unknown]


def eval_condition(
    cond: Condition, wm: WorkingMemory, truth_threshold: float
) -> TriState:
    """Three-valued evaluation against the working memory.

    A leaf is unknown until its variable has been answered or exhausted;
    unknown results carry the variables still needed.
    """
    if isinstance(cond, ConditionLeaf):
        fact = wm.fact(cond.variable, cond.value)
        present = fact is not None and fact.certainty >= truth_threshold
        if cond.comparator is Comparator.IS:
            if present:
                return Satisfied(fact.certainty)  # type: ignore[union-attr]
            if wm.resolved(cond.variable):
                return Failed()
            return Unknown(frozenset({ident_key(cond.variable)}))
        # is-not
        if present:
            return Failed()
        if wm.resolved(cond.variable):
            return Satisfied(Certainty(1.0))
        return Unknown(frozenset({ident_key(cond.variable)}))

    results = [eval_condition(c, wm, truth_threshold) for c in cond.children]
    if cond.connective is Connective.AND:
        if any(isinstance(r, Failed) for r in results):
            return Failed()
        needed = frozenset().union(
            *[r.needed for r in results if isinstance(r, Unknown)]
        )
        if needed:
            return Unknown(needed)
        return Satisfied(cf_and([r.certainty for r in results]))  # type: ignore[union-attr]
    # or
    sats = [r.certainty for r in results if isinstance(r, Satisfied)]
    if sats:
        return Satisfied(cf_or(sats))
    needed = frozenset().union(
        *[r.needed for r in results if isinstance(r, Unknown)]
    )
    if needed:
        return Unknown(needed)
    return Failed()


def pending_variables(
    cond: Condition, wm: WorkingMemory, truth_threshold: float
) -> list[str]:
    """Unresolved variables that can still change the condition's outcome
    or certainty, in document order.

    Differences from ``Unknown.needed``: a failed conjunct removes the whole
    conjunction's demand, and a disjunct satisfied at full certainty stops
    the disjunction from demanding its siblings.
    """
    out: list[str] = []
    seen: set[str] = set()

    def visit(c: Condition) -> None:
        if isinstance(c, ConditionLeaf):
            state = eval_condition(c, wm, truth_threshold)
            if isinstance(state, Satisfied) and float(state.certainty) >= 1.0:
                return
            vk = ident_key(c.variable)
            if not wm.resolved(c.variable) and vk not in seen:
                seen.add(vk)
                out.append(c.variable)
            return
        states = [eval_condition(ch, wm, truth_threshold) for ch in c.children]
        if c.connective is Connective.AND:
            if any(isinstance(s, Failed) for s in states):
                return
            for child in c.children:
                visit(child)
        else:
            if any(
                isinstance(s, Satisfied) and float(s.certainty) >= 1.0
                for s in states
            ):
                return
            for child, state in zip(c.children, states):
                if isinstance(state, Failed):
                    continue
                visit(child)

    visit(cond)
    return out


# -- proofs ----------------------------------------------------------------


@dataclass(frozen=True)
class AnswerLeaf:
    fact: Fact


@dataclass(frozen=True)
class AbsenceLeaf:
    """A satisfied `is-not`: the value stayed absent after resolution."""

    variable: str
    value: str


@dataclass(frozen=True)
class RuleApplication:
    rule_id: str
    antecedent_certainty: Certainty
    contribution: Certainty
    supports: tuple["ProofNode", ...]
    fact: Fact


ProofNode = Union[AnswerLeaf, AbsenceLeaf, RuleApplication]


def _satisfied_supports(
    cond: Condition, wm: WorkingMemory, truth_threshold: float,
    proofs: Mapping[tuple[str, str], list[ProofNode]],
) -> list[ProofNode]:
    """Proof nodes for every leaf that contributed to a satisfied condition."""
    out: list[ProofNode] = []
    if isinstance(cond, ConditionLeaf):
        state = eval_condition(cond, wm, truth_threshold)
        if not isinstance(state, Satisfied):
            return out
        key = (ident_key(cond.variable), ident_key(cond.value))
        if cond.comparator is Comparator.IS_NOT:
            out.append(AbsenceLeaf(cond.variable, cond.value))
        else:
            fact = wm.facts[key]
            contribs = proofs.get(key)
            if contribs:
                out.extend(contribs)
            else:
                out.append(AnswerLeaf(fact))
        return out
    for child in cond.children:
        state = eval_condition(child, wm, truth_threshold)
        if isinstance(state, Satisfied):
            out.extend(_satisfied_supports(child, wm, truth_threshold, proofs))
    return out


# -- backward chaining -----------------------------------------------------


class InferenceError(Exception):
    pass


class CycleError(InferenceError):
    def __init__(self, stack: Sequence[str]):
        super().__init__(
            "rule-dependency cycle at runtime: " + " -> ".join(stack)
        )
        self.stack = tuple(stack)


#: An answer provider maps an askable Variable to its selections:
#: (value, certainty-or-None); None means the user left the certainty blank
#: and it defaults to 1.0.
AnswerProvider = Callable[[Variable], Sequence[tuple[str, Optional[float]]]]


class Engine:
    """One backward-chaining consultation over an immutable KB.

    Single-threaded and single-use; run several engines concurrently over
    one shared KnowledgeBase if parallel consultations are needed.
    """

    def __init__(
        self,
        kb: KnowledgeBase,
        answer_provider: Optional[AnswerProvider] = None,
        wm: Optional[WorkingMemory] = None,
        truth_threshold: Optional[float] = None,
    ):
        self.kb = kb
        self.answer_provider = answer_provider
        self.wm = wm if wm is not None else WorkingMemory()
        self.truth_threshold = Certainty(
            kb.truth_threshold if truth_threshold is None else truth_threshold
        )
        self.proofs: dict[tuple[str, str], list[ProofNode]] = {}
        self.rule_outcomes: dict[str, bool] = {}  # rule key -> satisfied?
        self._stack: list[str] = []
        self._done: set[str] = set()

    # -- public -----------------------------------------------------------
    def resolve(self, variable: str) -> None:
        """Depth-first resolution of one variable (typically a goal)."""
        vk = ident_key(variable)
        if vk in self._done:
            return
        if vk in self._stack:
            raise CycleError(self._stack + [vk])
        if vk not in self.kb.variables:
            raise InferenceError(f"undeclared variable {variable!r}")
        self._stack.append(vk)
        try:
            var = self.kb.variables[vk]
            for rule in self.kb.rules_concluding(vk):
                self._try_rule(rule)
            if var.askable and vk not in self.wm.asked:
                self._ask(var)
        finally:
            self._stack.pop()
        self.wm.exhausted.add(vk)
        self._done.add(vk)

    # -- internals ---------------------------------------------------------
    def _try_rule(self, rule: Rule) -> None:
        if rule.key in self.rule_outcomes:
            return
        while True:
            pending = pending_variables(
                rule.antecedent, self.wm, self.truth_threshold
            )
            if not pending:
                break
            self.resolve(pending[0])
        state = eval_condition(rule.antecedent, self.wm, self.truth_threshold)
        if isinstance(state, Satisfied):
            self.rule_outcomes[rule.key] = True
            supports = tuple(
                _satisfied_supports(
                    rule.antecedent, self.wm, self.truth_threshold, self.proofs
                )
            )
            for concl in rule.consequents:
                self._assert_conclusion(rule, concl, state.certainty, supports)
        else:
            # No variables left pending, so the state is definitive.
            self.rule_outcomes[rule.key] = False

    def _assert_conclusion(
        self,
        rule: Rule,
        concl: Conclusion,
        antecedent_cf: Certainty,
        supports: tuple[ProofNode, ...],
    ) -> None:
        vk = ident_key(concl.variable)
        valk = ident_key(concl.value)
        var = self.kb.variables[vk]
        if var.arity is Arity.UNIVALUED:
            established = self.wm.established_value(vk, self.truth_threshold)
            if established is not None and ident_key(established.value) != valk:
                return  # first established value wins; conflicting evidence dropped
        contribution = cf_attenuate(antecedent_cf, concl.attenuation)
        key = (vk, valk)
        existing = self.wm.facts.get(key)
        if existing is None:
            certainty = contribution
            provenance = Fact.inferred_by(rule.id)
        else:
            certainty = cf_merge(existing.certainty, contribution)
            provenance = existing.provenance
        fact = Fact(var.id, concl.value, certainty, provenance)
        self.wm.facts[key] = fact
        self.proofs.setdefault(key, []).append(
            RuleApplication(
                rule_id=rule.id,
                antecedent_certainty=antecedent_cf,
                contribution=contribution,
                supports=supports,
                fact=fact,
            )
        )

    def _ask(self, var: Variable) -> None:
        if self.answer_provider is None:
            raise InferenceError(
                f"variable {var.id!r} needs an answer but no provider is set"
            )
        selections = self.answer_provider(var)
        self.record_answer(var, selections)

    def record_answer(
        self, var: Variable, selections: Sequence[tuple[str, Optional[float]]]
    ) -> None:
        vk = var.key
        self.wm.asked.add(vk)
        for value, cf in selections:
            valk = ident_key(value)
            provenance = DEFAULTED if cf is None else ANSWERED
            certainty = Certainty(1.0 if cf is None else cf)
            key = (vk, valk)
            if var.arity is Arity.UNIVALUED:
                established = self.wm.established_value(vk, self.truth_threshold)
                if (
                    established is not None
                    and ident_key(established.value) != valk
                ):
                    continue
            existing = self.wm.facts.get(key)
            if existing is None:
                fact = Fact(var.id, value, certainty, provenance)
            else:
                fact = Fact(
                    var.id,
                    existing.value,
                    cf_merge(existing.certainty, certainty),
                    existing.provenance,
                )
            self.wm.facts[key] = fact
            self.proofs.setdefault(key, []).append(AnswerLeaf(fact))


def resolve(
    kb: KnowledgeBase,
    goal_variable: str,
    answer_provider: AnswerProvider,
    wm: Optional[WorkingMemory] = None,
    truth_threshold: Optional[float] = None,
) -> tuple[WorkingMemory, dict[tuple[str, str], list[ProofNode]]]:
    """Convenience wrapper: resolve one goal variable and return the
    resulting working memory and proofs."""
    engine = Engine(kb, answer_provider, wm, truth_threshold)
    engine.resolve(goal_variable)
    return engine.wm, engine.proofs


# -- forward-chaining fixpoint (test oracle) -------------------------------

FIXPOINT_EPSILON = 1e-12


def forward_fixpoint(
    kb: KnowledgeBase,
    full_answers: Mapping[str, Sequence[tuple[str, Optional[float]]]],
    truth_threshold: Optional[float] = None,
) -> WorkingMemory:
    """Fire every satisfiable rule to a fixpoint, starting from a complete
    answer assignment. Used to cross-check the backward chainer.
    """
    truth = Certainty(
        kb.truth_threshold if truth_threshold is None else truth_threshold
    )
    provided = {ident_key(k): v for k, v in full_answers.items()}
    wm = WorkingMemory()
    answered_cf: dict[tuple[str, str], Certainty] = {}

    for var in kb.variables.values():
        if not var.askable:
            continue
        if var.key not in provided:
            raise InferenceError(
                f"forward_fixpoint needs an answer for {var.id!r}"
            )
        wm.asked.add(var.key)
        for value, cf in provided[var.key]:
            certainty = Certainty(1.0 if cf is None else cf)
            key = (var.key, ident_key(value))
            if key in answered_cf:
                certainty = cf_merge(answered_cf[key], certainty)
            answered_cf[key] = certainty

    contributions: dict[str, dict[tuple[str, str], Certainty]] = {}
    rule_index = {rule.key: i for i, rule in enumerate(kb.rules)}

    def recompute(key: tuple[str, str]) -> None:
        parts: list[tuple[int, Certainty]] = []
        if key in answered_cf:
            parts.append((-1, answered_cf[key]))
        for rk, per_rule in contributions.items():
            if key in per_rule:
                parts.append((rule_index[rk], per_rule[key]))
        if not parts:
            wm.facts.pop(key, None)
            return
        parts.sort()
        cert = parts[0][1]
        for _, c in parts[1:]:
            cert = cf_merge(cert, c)
        var = kb.variables[key[0]]
        prov = ANSWERED if key in answered_cf else "inferred:*"
        wm.facts[key] = Fact(var.id, _display_value(kb, key), cert, prov)

    for key in answered_cf:
        recompute(key)

    total_values = sum(
        max(len(v.domain), len(kb.concluded_values(v.id)), 1)
        for v in kb.variables.values()
    )
    max_passes = len(kb.rules) * total_values + 8

    def one_sweep() -> float:
        worst = 0.0
        for rule in kb.rules:
            state = eval_condition(rule.antecedent, wm, truth)
            per_rule = contributions.setdefault(rule.key, {})
            if not isinstance(state, Satisfied):
                continue
            for concl in rule.consequents:
                key = (ident_key(concl.variable), ident_key(concl.value))
                var = kb.variables[key[0]]
                if var.arity is Arity.UNIVALUED:
                    established = wm.established_value(key[0], truth)
                    if (
                        established is not None
                        and ident_key(established.value) != key[1]
                    ):
                        continue
                contribution = cf_attenuate(state.certainty, concl.attenuation)
                old = per_rule.get(key)
                if old is None or abs(contribution - old) > 0.0:
                    delta = abs(contribution - (old or 0.0))
                    worst = max(worst, delta)
                    per_rule[key] = contribution
                    recompute(key)
        return worst

    passes = 0
    while True:
        passes += 1
        if passes > max_passes:
            raise InferenceError(
                "forward chaining did not reach a fixpoint "
                f"in {max_passes} passes (cycle with attenuation 1.0?)"
            )
        if one_sweep() <= FIXPOINT_EPSILON:
            break

    # Second phase: every variable now counts as fully explored, which lets
    # is-not leaves over derived variables fire.
    wm.exhausted.update(kb.variables)
    while True:
        passes += 1
        if passes > max_passes + len(kb.rules) + 8:
            raise InferenceError(
                "forward chaining did not reach a fixpoint after exhaustion"
            )
        if one_sweep() <= FIXPOINT_EPSILON:
            break

    return wm


def _display_value(kb: KnowledgeBase, key: tuple[str, str]) -> str:
    var = kb.variables[key[0]]
    for v in var.domain:
        if ident_key(v) == key[1]:
            return v
    for v in kb.concluded_values(var.id):
        if ident_key(v) == key[1]:
            return v
    return key[1]


# -- explanation -----------------------------------------------------------


def explain_how(
    proofs: Mapping[tuple[str, str], list[ProofNode]],
    variable: str,
    value: Optional[str] = None,
) -> list[str]:
    """Render a human-readable derivation for a concluded fact.

    Recomputing the certainties shown on each line reproduces the fact's
    certainty exactly (merge of the rule contributions in firing order).
    """
    vk = ident_key(variable)
    keys = [
        k
        for k in proofs
        if k[0] == vk and (value is None or k[1] == ident_key(value))
    ]
    if not keys:
        return [f"no recorded derivation for {variable!r}"]
    lines: list[str] = []
    for key in keys:
        for node in proofs[key]:
            _render(node, lines, 0)
    return lines


def _render(node: ProofNode, lines: list[str], depth: int) -> None:
    pad = "  " * depth
    if isinstance(node, AnswerLeaf):
        f = node.fact
        lines.append(
            f"{pad}you stated {f.variable} is {f.value} "
            f"({f.certainty.as_percent()})"
        )
    elif isinstance(node, AbsenceLeaf):
        lines.append(
            f"{pad}{node.variable} was never established as {node.value}"
        )
    else:
        f = node.fact
        lines.append(
            f"{pad}rule {node.rule_id} concluded {f.variable} is {f.value} "
            f"(antecedent {node.antecedent_certainty.as_percent()}, "
            f"contributed {node.contribution.as_percent()})"
        )
        for child in node.supports:
            _render(child, lines, depth + 1)


def proof_depth(node: ProofNode) -> int:
    if isinstance(node, (AnswerLeaf, AbsenceLeaf)):
        return 1
    if not node.supports:
        return 1
    return 1 + max(proof_depth(c) for c in node.supports)
