"""Parser, canonical serializer and linter for the `.ekb` knowledge-base text.

The grammar is line-friendly but not line-sensitive: statements are
self-delimiting, so long rules may wrap across lines. ``docs/grammar.md``
holds the normative EBNF. Comments run from ``#`` to end of line.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional

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
    condition_leaves,
    errors_of,
    ident_key,
    validate,
)

STATEMENT_KEYWORDS = {
    "kb",
    "threshold",
    "truth-threshold",
    "var",
    "prompt",
    "rule",
    "goal",
}

RESERVED = STATEMENT_KEYWORDS | {
    "if",
    "then",
    "and",
    "or",
    "is",
    "is-not",
    "cf",
    "version",
    "priority",
    "help",
    "desc",
    "cf-input",
    "univalued",
    "multivalued",
    "derived",
}


@dataclass(frozen=True)
class SourceSpan:
    file: str
    line: int
    column: int
    start: int
    end: int

    def __post_init__(self) -> None:
        if self.end < self.start:
            raise ValueError("span end precedes start")

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


def _describe(tok: "Token") -> str:
    return repr(tok.value) if tok.value else tok.kind


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "string" | "number" | "punct" | "eof"
    value: str
    span: SourceSpan


class ParseFailure(Exception):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


@dataclass
class ParseResult:
    kb: Optional[KnowledgeBase]
    diagnostics: list[Diagnostic] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.kb is not None


_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_")
_IDENT_CONT = _IDENT_START | set("0123456789-.")
_DIGITS = set("0123456789")
_PUNCT = set("():,%=")


def tokenize(text: str, filename: str = "<kb>") -> list[Token]:
    """Turn source text into tokens; malformed input raises ParseFailure."""
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)

    def span(start: int, start_line: int, start_col: int, end: int) -> SourceSpan:
        return SourceSpan(filename, start_line, start_col, start, end)

    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start, start_line, start_col = i, line, col
        if ch == '"':
            i += 1
            col += 1
            buf: list[str] = []
            while i < n and text[i] != '"':
                if text[i] == "\n":
                    raise ParseFailure(
                        Diagnostic(
                            Severity.ERROR,
                            "unterminated string literal",
                            str(span(start, start_line, start_col, i)),
                            span(start, start_line, start_col, i),
                        )
                    )
                if text[i] == "\\" and i + 1 < n and text[i + 1] in '"\\':
                    buf.append(text[i + 1])
                    i += 2
                    col += 2
                    continue
                buf.append(text[i])
                i += 1
                col += 1
            if i >= n:
                raise ParseFailure(
                    Diagnostic(
                        Severity.ERROR,
                        "unterminated string literal",
                        str(span(start, start_line, start_col, i)),
                        span(start, start_line, start_col, i),
                    )
                )
            i += 1
            col += 1
            tokens.append(
                Token("string", "".join(buf), span(start, start_line, start_col, i))
            )
            continue
        if ch in _DIGITS or (
            ch == "." and i + 1 < n and text[i + 1] in _DIGITS
        ):
            j = i
            seen_dot = False
            while j < n and (text[j] in _DIGITS or (text[j] == "." and not seen_dot)):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            lexeme = text[i:j]
            col += j - i
            i = j
            tokens.append(
                Token("number", lexeme, span(start, start_line, start_col, i))
            )
            continue
        if ch in _IDENT_START:
            j = i
            while j < n and text[j] in _IDENT_CONT:
                j += 1
            # Idents never end with '-' or '.'; give trailing punctuation back.
            while text[j - 1] in "-.":
                j -= 1
            lexeme = text[i:j]
            col += j - i
            i = j
            tokens.append(
                Token("ident", lexeme, span(start, start_line, start_col, i))
            )
            continue
        if ch in _PUNCT:
            i += 1
            col += 1
            tokens.append(Token("punct", ch, span(start, start_line, start_col, i)))
            continue
        raise ParseFailure(
            Diagnostic(
                Severity.ERROR,
                f"unexpected character {ch!r}",
                str(span(start, start_line, start_col, i + 1)),
                span(start, start_line, start_col, i + 1),
            )
        )
    tokens.append(Token("eof", "", SourceSpan(filename, line, col, n, n)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token], filename: str):
        self.tokens = tokens
        self.pos = 0
        self.filename = filename
        self.diagnostics: list[Diagnostic] = []
        self.name = "untitled"
        self.version = "0"
        self.default_threshold: Optional[Certainty] = None
        self.truth_threshold: Optional[Certainty] = None
        self.variables: dict[str, Variable] = {}
        self.prompts: dict[str, PromptSpec] = {}
        self.rules: list[Rule] = []
        self.goals: list[Goal] = []

    # -- token plumbing ----------------------------------------------------
    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at_ident(self, *values: str) -> bool:
        tok = self.peek()
        return tok.kind == "ident" and ident_key(tok.value) in {
            ident_key(v) for v in values
        }

    def fail(self, message: str, tok: Optional[Token] = None) -> ParseFailure:
        tok = tok or self.peek()
        return ParseFailure(
            Diagnostic(Severity.ERROR, message, str(tok.span), tok.span)
        )

    def expect_ident(self, what: str = "identifier") -> Token:
        tok = self.peek()
        if tok.kind != "ident":
            raise self.fail(f"expected {what}, found {_describe(tok)}")
        return self.advance()

    def expect_name(self, what: str) -> Token:
        tok = self.expect_ident(what)
        if ident_key(tok.value) in RESERVED:
            raise self.fail(f"reserved word {tok.value!r} cannot be {what}", tok)
        return tok

    def expect_keyword(self, word: str) -> Token:
        tok = self.peek()
        if not self.at_ident(word):
            raise self.fail(f"expected {word!r}, found {_describe(tok)}")
        return self.advance()

    def expect_punct(self, ch: str) -> Token:
        tok = self.peek()
        if tok.kind != "punct" or tok.value != ch:
            raise self.fail(f"expected {ch!r}, found {_describe(tok)}")
        return self.advance()

    def expect_string(self, what: str = "string") -> Token:
        tok = self.peek()
        if tok.kind != "string":
            raise self.fail(f"expected {what}, found {_describe(tok)}")
        return self.advance()

    def parse_cf_literal(self) -> Certainty:
        tok = self.peek()
        if tok.kind != "number":
            raise self.fail(f"expected number, found {_describe(tok)}")
        self.advance()
        value = float(tok.value)
        if self.peek().kind == "punct" and self.peek().value == "%":
            self.advance()
            value /= 100.0
        try:
            return Certainty(value)
        except ValueError as exc:
            raise self.fail(str(exc), tok) from exc

    def parse_int(self) -> int:
        tok = self.peek()
        if tok.kind != "number" or "." in tok.value:
            raise self.fail(f"expected integer, found {_describe(tok)}")
        self.advance()
        return int(tok.value)

    # -- statements --------------------------------------------------------
    def run(self) -> None:
        while self.peek().kind != "eof":
            try:
                self.statement()
            except ParseFailure as exc:
                self.diagnostics.append(exc.diagnostic)
                self.recover()

    def recover(self) -> None:
        """Skip to the next statement keyword at the start of a line."""
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                return
            if (
                tok.kind == "ident"
                and tok.span.column == 1
                and ident_key(tok.value) in STATEMENT_KEYWORDS
            ):
                return
            self.advance()

    def statement(self) -> None:
        tok = self.peek()
        if tok.kind != "ident":
            raise self.fail(
                f"expected a statement, found {_describe(tok)}"
            )
        word = ident_key(tok.value)
        if word == "kb":
            self.kb_decl()
        elif word == "threshold":
            self.advance()
            self.default_threshold = self.parse_cf_literal()
        elif word == "truth-threshold":
            self.advance()
            self.truth_threshold = self.parse_cf_literal()
        elif word == "var":
            self.var_decl()
        elif word == "prompt":
            self.prompt_decl()
        elif word == "rule":
            self.rule_decl()
        elif word == "goal":
            self.goal_decl()
        else:
            raise self.fail(f"unknown statement {tok.value!r}")

    def kb_decl(self) -> None:
        self.advance()
        self.name = self.expect_string("knowledge-base name").value
        if self.at_ident("version"):
            self.advance()
            self.version = self.expect_string("version").value

    def var_decl(self) -> None:
        self.advance()
        name_tok = self.expect_name("a variable name")
        vk = ident_key(name_tok.value)
        if vk in self.variables:
            raise self.fail(
                f"duplicate declaration of variable {name_tok.value!r}", name_tok
            )
        self.expect_punct(":")
        arity_tok = self.expect_ident("'univalued' or 'multivalued'")
        try:
            arity = Arity(ident_key(arity_tok.value))
        except ValueError:
            raise self.fail(
                f"expected 'univalued' or 'multivalued', found "
                f"{arity_tok.value!r}",
                arity_tok,
            ) from None
        domain: list[str] = []
        if self.peek().kind == "punct" and self.peek().value == "(":
            self.advance()
            while True:
                domain.append(self.expect_name("a domain value").value)
                if self.peek().kind == "punct" and self.peek().value == ",":
                    self.advance()
                    continue
                break
            self.expect_punct(")")
        self.variables[vk] = Variable(
            id=name_tok.value,
            arity=arity,
            domain=tuple(domain),
            span=name_tok.span,
        )

    def prompt_decl(self) -> None:
        self.advance()
        name_tok = self.expect_name("a variable name")
        vk = ident_key(name_tok.value)
        if vk in self.prompts:
            raise self.fail(
                f"duplicate prompt for variable {name_tok.value!r}", name_tok
            )
        self.expect_punct(":")
        kind_tok = self.expect_ident("a prompt kind")
        try:
            kind = PromptKind(ident_key(kind_tok.value))
        except ValueError:
            raise self.fail(
                f"unknown prompt kind {kind_tok.value!r}", kind_tok
            ) from None
        question = self.expect_string("the question text").value
        allow_cf = False
        help_text: Optional[str] = None
        while True:
            if self.at_ident("cf-input"):
                self.advance()
                allow_cf = True
            elif self.at_ident("help"):
                self.advance()
                help_text = self.expect_string("help text").value
            else:
                break
        if vk not in self.variables:
            raise self.fail(
                f"prompt for undeclared variable {name_tok.value!r}", name_tok
            )
        self.prompts[vk] = PromptSpec(
            question_text=question,
            kind=kind,
            allow_cf_input=allow_cf,
            help_text=help_text,
        )

    def rule_decl(self) -> None:
        self.advance()
        id_tok = self.expect_name("a rule id")
        if any(r.key == ident_key(id_tok.value) for r in self.rules):
            raise self.fail(f"duplicate rule id {id_tok.value!r}", id_tok)
        tags: set[tuple[Entity, Level]] = set()
        if self.peek().kind == "punct" and self.peek().value == "(":
            self.advance()
            while True:
                ent_tok = self.expect_ident("an entity tag")
                try:
                    entity = Entity(ident_key(ent_tok.value))
                except ValueError:
                    raise self.fail(
                        f"unknown entity {ent_tok.value!r}", ent_tok
                    ) from None
                self.expect_punct(",")
                lvl_tok = self.expect_ident("a level tag")
                try:
                    level = Level(ident_key(lvl_tok.value))
                except ValueError:
                    raise self.fail(
                        f"unknown level {lvl_tok.value!r}", lvl_tok
                    ) from None
                tags.add((entity, level))
                if self.peek().kind == "punct" and self.peek().value == ",":
                    # A second tag pair would continue here; entity follows.
                    self.advance()
                    continue
                break
            self.expect_punct(")")
        self.expect_punct(":")
        self.expect_keyword("if")
        antecedent = self.condition()
        self.expect_keyword("then")
        consequents = [self.conclusion()]
        while self.at_ident("and"):
            self.advance()
            consequents.append(self.conclusion())
        description: Optional[str] = None
        if self.at_ident("desc"):
            self.advance()
            description = self.expect_string("description").value
        self.rules.append(
            Rule(
                id=id_tok.value,
                antecedent=antecedent,
                consequents=tuple(consequents),
                tags=frozenset(tags),
                description=description,
                span=id_tok.span,
            )
        )

    def condition(self) -> Condition:
        return self.or_expr()

    def or_expr(self) -> Condition:
        children = [self.and_expr()]
        while self.at_ident("or"):
            self.advance()
            children.append(self.and_expr())
        if len(children) == 1:
            return children[0]
        return ConditionNode(Connective.OR, tuple(children))

    def and_expr(self) -> Condition:
        children = [self.atom()]
        while self.at_ident("and"):
            self.advance()
            children.append(self.atom())
        if len(children) == 1:
            return children[0]
        return ConditionNode(Connective.AND, tuple(children))

    def atom(self) -> Condition:
        if self.peek().kind == "punct" and self.peek().value == "(":
            self.advance()
            inner = self.or_expr()
            self.expect_punct(")")
            return inner
        var_tok = self.expect_name("a variable name")
        cmp_tok = self.peek()
        if self.at_ident("is-not"):
            self.advance()
            comparator = Comparator.IS_NOT
        elif self.at_ident("is"):
            self.advance()
            comparator = Comparator.IS
        else:
            raise self.fail(
                f"expected 'is' or 'is-not', found {_describe(cmp_tok)}"
            )
        value_tok = self.expect_name("a value")
        return ConditionLeaf(
            variable=var_tok.value,
            comparator=comparator,
            value=value_tok.value,
            span=var_tok.span,
        )

    def conclusion(self) -> Conclusion:
        var_tok = self.expect_name("a variable name")
        self.expect_keyword("is")
        value_tok = self.expect_name("a value")
        attenuation = Certainty(1.0)
        if self.at_ident("cf"):
            self.advance()
            attenuation = self.parse_cf_literal()
        return Conclusion(
            variable=var_tok.value,
            value=value_tok.value,
            attenuation=attenuation,
            span=var_tok.span,
        )

    def goal_decl(self) -> None:
        self.advance()
        name_tok = self.expect_name("a variable name")
        priority = 0
        threshold: Optional[Certainty] = None
        while True:
            if self.at_ident("priority"):
                self.advance()
                priority = self.parse_int()
            elif self.at_ident("threshold"):
                self.advance()
                threshold = self.parse_cf_literal()
            else:
                break
        self.goals.append(
            Goal(
                variable=name_tok.value,
                priority=priority,
                report_threshold=threshold,
                span=name_tok.span,
            )
        )

    def build(self) -> KnowledgeBase:
        variables: dict[str, Variable] = {}
        for vk, var in self.variables.items():
            prompt = self.prompts.get(vk)
            if prompt is not None:
                var = Variable(
                    id=var.id,
                    arity=var.arity,
                    domain=var.domain,
                    prompt=prompt,
                    span=var.span,
                )
            variables[vk] = var
        default_threshold = (
            self.default_threshold
            if self.default_threshold is not None
            else Certainty(0.2)
        )
        truth_threshold = (
            self.truth_threshold
            if self.truth_threshold is not None
            else Certainty(0.2)
        )
        return KnowledgeBase(
            name=self.name,
            version=self.version,
            variables=variables,
            rules=tuple(self.rules),
            goals=tuple(self.goals),
            default_threshold=default_threshold,
            truth_threshold=truth_threshold,
        )


def parse(text: str, filename: str = "<kb>") -> ParseResult:
    """Parse `.ekb` text; returns a validated KB or the blocking diagnostics.

    Never raises on malformed input: any byte string yields either a KB or a
    non-empty diagnostic list.
    """
    try:
        tokens = tokenize(text, filename)
    except ParseFailure as exc:
        return ParseResult(None, [exc.diagnostic])
    parser = _Parser(tokens, filename)
    parser.run()
    if errors_of(parser.diagnostics):
        return ParseResult(None, parser.diagnostics)
    try:
        kb = parser.build()
    except ValueError as exc:
        return ParseResult(
            None, [Diagnostic(Severity.ERROR, str(exc), filename)]
        )
    diagnostics = parser.diagnostics + validate(kb)
    if errors_of(diagnostics):
        return ParseResult(None, diagnostics)
    return ParseResult(kb, diagnostics)


# -- serialization ---------------------------------------------------------


def _format_cf(value: float) -> str:
    return format(float(value), ".12g")


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _needs_parens(child: Condition, parent: Connective) -> bool:
    return (
        isinstance(child, ConditionNode)
        and parent is Connective.AND
        and child.connective is Connective.OR
    )


def format_condition(cond: Condition) -> str:
    if isinstance(cond, ConditionLeaf):
        return f"{cond.variable} {cond.comparator.value} {cond.value}"
    sep = f" {cond.connective.value} "
    parts = []
    for child in cond.children:
        text = format_condition(child)
        if _needs_parens(child, cond.connective):
            text = f"({text})"
        parts.append(text)
    return sep.join(parts)


def _format_conclusion(concl: Conclusion) -> str:
    text = f"{concl.variable} is {concl.value}"
    if float(concl.attenuation) != 1.0:
        text += f" cf {_format_cf(concl.attenuation)}"
    return text


def serialize(kb: KnowledgeBase) -> str:
    """Canonical `.ekb` text: stable section order, LF endings, normalized
    whitespace. ``parse(serialize(kb))`` reproduces ``kb`` structurally."""
    lines: list[str] = []
    header = f"kb {_quote(kb.name)}"
    if kb.version != "0":
        header += f" version {_quote(kb.version)}"
    lines.append(header)
    if float(kb.default_threshold) != 0.2:
        lines.append(f"threshold {_format_cf(kb.default_threshold)}")
    if float(kb.truth_threshold) != 0.2:
        lines.append(f"truth-threshold {_format_cf(kb.truth_threshold)}")
    lines.append("")

    for var in kb.variables.values():
        decl = f"var {var.id}: {var.arity.value}"
        if var.domain:
            decl += " (" + ", ".join(var.domain) + ")"
        lines.append(decl)
    lines.append("")

    for rule in kb.rules:
        head = f"rule {rule.id}"
        if rule.tags:
            tag_text = ", ".join(
                f"{e.value}, {l.value}"
                for e, l in sorted(rule.tags, key=lambda t: (t[0].value, t[1].value))
            )
            head += f" ({tag_text})"
        head += ":"
        lines.append(head)
        lines.append(f"  if {format_condition(rule.antecedent)}")
        concl_text = " and ".join(_format_conclusion(c) for c in rule.consequents)
        tail = f"  then {concl_text}"
        if rule.description:
            tail += f" desc {_quote(rule.description)}"
        lines.append(tail)
    lines.append("")

    for var in kb.variables.values():
        if var.prompt is None:
            continue
        p = var.prompt
        decl = f"prompt {var.id}: {p.kind.value} {_quote(p.question_text)}"
        if p.allow_cf_input:
            decl += " cf-input"
        if p.help_text is not None:
            decl += f" help {_quote(p.help_text)}"
        lines.append(decl)
    lines.append("")

    for goal in kb.goals:
        decl = f"goal {goal.variable}"
        if goal.priority != 0:
            decl += f" priority {goal.priority}"
        if goal.report_threshold is not None:
            decl += f" threshold {_format_cf(goal.report_threshold)}"
        lines.append(decl)

    return "\n".join(lines) + "\n"


# -- lint ------------------------------------------------------------------

#: Exhaustive unreachable-goal checking is used up to this many answer
#: combinations; larger KBs fall back to seeded sampling.
EXHAUSTIVE_COMBINATION_LIMIT = 20
LINT_SAMPLE_COUNT = 2000
LINT_SAMPLE_SEED = 0x5EED


def _dependency_edges(kb: KnowledgeBase) -> dict[str, set[tuple[str, str]]]:
    """Map antecedent variable -> {(consequent variable, rule id)}."""
    edges: dict[str, set[tuple[str, str]]] = {}
    for rule in kb.rules:
        sources = {ident_key(l.variable) for l in condition_leaves(rule.antecedent)}
        targets = {ident_key(c.variable) for c in rule.consequents}
        for src in sources:
            for dst in targets:
                edges.setdefault(src, set()).add((dst, rule.id))
    return edges


def _find_cycles(kb: KnowledgeBase) -> list[Diagnostic]:
    edges = _dependency_edges(kb)
    out: list[Diagnostic] = []
    reported: set[frozenset[str]] = set()

    for start in kb.variables:
        # DFS from each variable looking for a path back to itself.
        stack: list[tuple[str, tuple[str, ...]]] = [(start, ())]
        seen: set[str] = set()
        while stack:
            node, rules_on_path = stack.pop()
            for dst, rule_id in sorted(edges.get(node, ())):
                path = rules_on_path + (rule_id,)
                if dst == start:
                    cycle_key = frozenset(path)
                    if cycle_key not in reported:
                        reported.add(cycle_key)
                        out.append(
                            Diagnostic(
                                Severity.WARNING,
                                "rule-dependency cycle through "
                                + " -> ".join(path),
                                f"variable {kb.variables[start].id}",
                            )
                        )
                elif dst not in seen:
                    seen.add(dst)
                    stack.append((dst, path))
    return out


def _combination_count(kb: KnowledgeBase) -> int:
    count = 1
    for var in kb.variables.values():
        if not var.askable:
            continue
        if var.arity is Arity.UNIVALUED:
            count *= max(len(var.domain), 1)
        else:
            count *= 2 ** len(var.domain)
        if count > 10**9:
            break
    return count


def _goal_reachability(kb: KnowledgeBase) -> tuple[set[str], bool]:
    """Return (reachable goal-variable keys, exhaustive?)."""
    from .inference import forward_fixpoint  # local import: avoid cycle

    askables = [v for v in kb.variables.values() if v.askable]
    goal_keys = {ident_key(g.variable) for g in kb.goals}
    reachable: set[str] = set()

    def check(assignment: dict[str, list[tuple[str, Optional[float]]]]) -> None:
        wm = forward_fixpoint(kb, assignment)
        for gk in goal_keys - reachable:
            if any(
                vk == gk and f.certainty >= kb.truth_threshold
                for (vk, _), f in wm.facts.items()
            ):
                reachable.add(gk)

    total = _combination_count(kb)
    if total <= EXHAUSTIVE_COMBINATION_LIMIT:
        per_var: list[list[list[tuple[str, Optional[float]]]]] = []
        for var in askables:
            if var.arity is Arity.UNIVALUED:
                per_var.append([[(v, None)] for v in var.domain])
            else:
                subsets = []
                for r in range(len(var.domain) + 1):
                    for combo in itertools.combinations(var.domain, r):
                        subsets.append([(v, None) for v in combo])
                per_var.append(subsets)
        for combo in itertools.product(*per_var):
            assignment = {
                var.id: list(sel) for var, sel in zip(askables, combo)
            }
            check(assignment)
            if reachable >= goal_keys:
                break
        return reachable, True

    rng = random.Random(LINT_SAMPLE_SEED)
    for _ in range(LINT_SAMPLE_COUNT):
        assignment = {}
        for var in askables:
            if var.arity is Arity.UNIVALUED:
                assignment[var.id] = [(rng.choice(var.domain), None)]
            else:
                picked = [v for v in var.domain if rng.random() < 0.5]
                assignment[var.id] = [(v, None) for v in picked]
        check(assignment)
        if reachable >= goal_keys:
            break
    return reachable, False


def lint(kb: KnowledgeBase) -> list[Diagnostic]:
    """Deeper static checks on a validated KB: dependency cycles,
    unreachable goals, dead domain values."""
    out: list[Diagnostic] = []
    out.extend(_find_cycles(kb))

    if not any(d.severity is Severity.WARNING and "cycle" in d.message for d in out):
        reachable, exhaustive = _goal_reachability(kb)
        for goal in kb.goals:
            gk = ident_key(goal.variable)
            if gk in reachable:
                continue
            if exhaustive:
                out.append(
                    Diagnostic(
                        Severity.WARNING,
                        "unreachable goal: no answer assignment concludes it",
                        f"goal {goal.variable}",
                    )
                )
            else:
                out.append(
                    Diagnostic(
                        Severity.WARNING,
                        "possibly-unreachable goal: no sampled answer "
                        "assignment concluded it",
                        f"goal {goal.variable}",
                    )
                )

    mentioned: set[tuple[str, str]] = set()
    for rule in kb.rules:
        for leaf in condition_leaves(rule.antecedent):
            mentioned.add((ident_key(leaf.variable), ident_key(leaf.value)))
        for concl in rule.consequents:
            mentioned.add((ident_key(concl.variable), ident_key(concl.value)))
    for var in kb.variables.values():
        if var.askable:
            continue  # a prompt presents the whole domain
        for value in var.domain:
            if (var.key, ident_key(value)) not in mentioned:
                out.append(
                    Diagnostic(
                        Severity.WARNING,
                        f"dead value {value!r}: never mentioned by any rule "
                        "or prompt",
                        f"variable {var.id}",
                    )
                )
    return out
