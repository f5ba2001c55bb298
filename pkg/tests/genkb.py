"""Seeded random knowledge-base generator shared by the property suites.

Generated KBs are acyclic by construction (derived variables are layered),
negation is restricted to askable variables, and univalued derived
variables are only ever concluded with a single value, so backward and
forward chaining must agree exactly on every goal.
"""

from __future__ import annotations

import random
from typing import Optional

from inqshell.model import (
    Arity,
    Certainty,
    Comparator,
    Conclusion,
    Condition,
    ConditionLeaf,
    ConditionNode,
    Connective,
    Goal,
    KnowledgeBase,
    PromptKind,
    PromptSpec,
    Rule,
    Variable,
)

VALUE_POOL = ["alpha", "beta", "gamma"]


def random_kb(
    rng: random.Random,
    max_vars: int = 12,
    max_rules: int = 20,
) -> KnowledgeBase:
    n_ask = rng.randint(2, 5)
    n_derived = rng.randint(1, min(5, max_vars - n_ask))

    variables: dict[str, Variable] = {}
    askables: list[Variable] = []
    for i in range(n_ask):
        multivalued = rng.random() < 0.35
        domain = tuple(VALUE_POOL[: rng.randint(2, 3)])
        if multivalued:
            kind = rng.choice([PromptKind.MULTICHOICE, PromptKind.ALLCHOICE])
        else:
            kind = rng.choice([PromptKind.FORCEDCHOICE, PromptKind.CHOICE])
        var = Variable(
            id=f"ask{i}",
            arity=Arity.MULTIVALUED if multivalued else Arity.UNIVALUED,
            domain=domain,
            prompt=PromptSpec(
                question_text=f"State ask{i}.",
                kind=kind,
                allow_cf_input=rng.random() < 0.7,
                help_text="pick what applies" if rng.random() < 0.3 else None,
            ),
        )
        variables[var.key] = var
        askables.append(var)

    derived: list[Variable] = []
    layer_of: dict[str, int] = {}
    for i in range(n_derived):
        multivalued = rng.random() < 0.3
        if multivalued:
            domain = tuple(VALUE_POOL[: rng.randint(2, 3)])
            arity = Arity.MULTIVALUED
        else:
            domain = (VALUE_POOL[0],)
            arity = Arity.UNIVALUED
        var = Variable(id=f"mid{i}", arity=arity, domain=domain)
        variables[var.key] = var
        derived.append(var)
        layer_of[var.key] = i  # strict layering keeps the rule graph acyclic

    def leaf_for(var: Variable) -> ConditionLeaf:
        comparator = Comparator.IS
        if var.askable and rng.random() < 0.2:
            comparator = Comparator.IS_NOT
        return ConditionLeaf(var.id, comparator, rng.choice(var.domain))

    def condition_below(layer: int) -> Condition:
        sources = askables + [d for d in derived if layer_of[d.key] < layer]
        n_leaves = rng.randint(1, 3)
        leaves: list[Condition] = [
            leaf_for(rng.choice(sources)) for _ in range(n_leaves)
        ]
        if len(leaves) == 1:
            return leaves[0]
        if rng.random() < 0.25:
            connective = Connective.OR
            inner = ConditionNode(Connective.AND, tuple(leaves[:2]))
            rest = leaves[2:] or [leaf_for(rng.choice(sources))]
            return ConditionNode(connective, tuple([inner] + rest))
        return ConditionNode(
            rng.choice([Connective.AND, Connective.OR]), tuple(leaves)
        )

    rules: list[Rule] = []
    n_rules = rng.randint(n_derived, max_rules)
    covered: set[str] = set()
    for i in range(n_rules):
        if len(covered) < n_derived:
            target = derived[len(covered)]
            covered.add(target.key)
        else:
            target = rng.choice(derived)
        conclusions = [
            Conclusion(
                target.id,
                target.domain[0]
                if target.arity is Arity.UNIVALUED
                else rng.choice(target.domain),
                Certainty(round(rng.uniform(0.3, 1.0), 3)),
            )
        ]
        if rng.random() < 0.2:
            other = rng.choice(derived)
            if other.key != target.key:
                conclusions.append(
                    Conclusion(
                        other.id,
                        other.domain[0]
                        if other.arity is Arity.UNIVALUED
                        else rng.choice(other.domain),
                        Certainty(round(rng.uniform(0.3, 1.0), 3)),
                    )
                )
        min_layer = min(layer_of[ck] for ck in
                        (c.variable.casefold() for c in conclusions))
        rules.append(
            Rule(
                id=f"r{i}",
                antecedent=condition_below(min_layer),
                consequents=tuple(conclusions),
            )
        )

    goal_vars = rng.sample(derived, rng.randint(1, len(derived)))
    goals = tuple(
        Goal(v.id, priority=rng.randint(0, 2)) for v in goal_vars
    )
    return KnowledgeBase(
        name=f"generated-{rng.randint(0, 10**6)}",
        version="1",
        variables=variables,
        rules=tuple(rules),
        goals=goals,
    )


def random_full_answers(
    rng: random.Random, kb: KnowledgeBase
) -> dict[str, list[tuple[str, Optional[float]]]]:
    answers: dict[str, list[tuple[str, Optional[float]]]] = {}
    for var in kb.variables.values():
        if not var.askable:
            continue
        if var.arity is Arity.UNIVALUED:
            value = rng.choice(var.domain)
            cf = None if rng.random() < 0.5 else round(rng.uniform(0.0, 1.0), 3)
            answers[var.id] = [(value, cf)]
        else:
            picked = [v for v in var.domain if rng.random() < 0.6]
            answers[var.id] = [
                (v, None if rng.random() < 0.5 else round(rng.uniform(0.0, 1.0), 3))
                for v in picked
            ]
    return answers


def conformant_answers(
    rng: random.Random, kb: KnowledgeBase
) -> dict[str, list[tuple[str, Optional[float]]]]:
    """Full answers that also satisfy the prompt-kind cardinality rules."""
    answers = random_full_answers(rng, kb)
    for var in kb.variables.values():
        if not var.askable:
            continue
        kind = var.prompt.kind  # type: ignore[union-attr]
        current = answers[var.id]
        if kind is PromptKind.ALLCHOICE:
            answers[var.id] = [
                (v, round(rng.uniform(0.0, 1.0), 3)) for v in var.domain
            ]
        elif kind is PromptKind.MULTICHOICE and not current:
            answers[var.id] = [(rng.choice(var.domain), None)]
    return answers
