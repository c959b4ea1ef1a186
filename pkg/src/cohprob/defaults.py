"""Default rules: consistency, entailment, and the inference-rule harness.

A default rule "H => E" reads "if H then usually E" and stands for the
conditional event E|H assessed at value 1.  A knowledge base is a finite
set of such rules, optionally embedded in a larger assessment with entries
at arbitrary values.  Consistency of a pure-rule base can be decided two
independent ways: a Boolean criterion quantified over rule subsets, and
coherence of the all-ones assessment.  Entailment of a further rule means
1 is the only coherent value for its conditional event.

The harness at the bottom instantiates named inference-rule schemas over
concrete formulas and reports whether each instance behaves as the schema
predicts: the eight entailing schemas always transmit entailment, the three
failing ones admit counterexamples, and the three cs-schemas ("coherent
setting" rationality rules) block entailment of their conclusion whenever
both negative premises pin their conditional events strictly below 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Optional, Sequence

from .coherence import (
    CoherenceError,
    ConditionalAssessment,
    ConditionalEvent,
    Coherent,
    Entry,
    check_coherence,
)
from .extension import (
    CoherentInterval,
    coherent_interval,
    interval_lower_bound,
    interval_upper_bound,
)
from .logic import (
    And,
    Formula,
    Implies,
    Not,
    Or,
    Prop,
    Universe,
    format_formula,
)


class InconsistentKB(CoherenceError):
    """Entailment was queried against a knowledge base with no agreeing class."""


# ---------------------------------------------------------------------------
# Knowledge bases


@dataclass(frozen=True)
class DefaultRule:
    """One rule "antecedent => consequent"; the event consequent|antecedent at 1."""

    antecedent: Formula
    consequent: Formula

    def event(self) -> ConditionalEvent:
        return ConditionalEvent(self.consequent, self.antecedent)

    def __str__(self) -> str:
        return (f"{format_formula(self.antecedent)} => "
                f"{format_formula(self.consequent)}")


class DefaultKB:
    """A finite rule set over one universe, plus optional extra assessed entries."""

    def __init__(self, universe: Universe, rules: Sequence[DefaultRule],
                 extra: Sequence[Entry] = ()):
        self.universe = universe
        self.rules = tuple(rules)
        self.extra = tuple(extra)
        for rule in self.rules:
            if not universe.possible(rule.antecedent):
                raise CoherenceError(
                    f"rule antecedent "
                    f"{format_formula(rule.antecedent)!r} is impossible"
                )

    @property
    def axioms(self) -> list[Formula]:
        return list(self.universe.axioms)

    def assessment(self) -> ConditionalAssessment:
        entries = [Entry(rule.event(), Fraction(1)) for rule in self.rules]
        entries.extend(self.extra)
        return ConditionalAssessment(self.universe, entries)


@dataclass(frozen=True)
class Consistent:
    """Positive consistency verdict; truthy."""

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Violated:
    """Negative consistency verdict; falsy.

    `subset` carries a minimum-size violating rule subset when the Boolean
    criterion produced the verdict; `layer` carries the failing layer index
    when the coherence check did.
    """

    subset: Optional[tuple[int, ...]] = None
    layer: Optional[int] = None

    def __bool__(self) -> bool:
        return False


Verdict = Consistent | Violated


def consistent_boolean(kb: DefaultKB) -> Verdict:
    """Subset criterion for a pure rule base.

    The base is consistent iff for every nonempty subset of rules some
    admissible world lies inside the union of the verifying events (E and H)
    and outside the union of the falsifying events (not-E and H).  Subsets
    are scanned in ascending size, so a violation is reported through a
    minimum-cardinality subset.
    """
    if kb.extra:
        raise ValueError(
            "the subset criterion covers only bases where every entry "
            "is a rule at value 1"
        )
    u = kb.universe
    pos = [u.world_mask(And(r.consequent, r.antecedent)) for r in kb.rules]
    neg = [u.world_mask(And(Not(r.consequent), r.antecedent)) for r in kb.rules]
    indices = range(len(kb.rules))
    for size in range(1, len(kb.rules) + 1):
        for subset in combinations(indices, size):
            inside = 0
            outside = 0
            for i in subset:
                inside |= pos[i]
                outside |= neg[i]
            if inside & ~outside == 0:
                return Violated(subset=subset)
    return Consistent()


def consistent_coherence(kb: DefaultKB) -> Verdict:
    """Consistency as coherence of the assessment with every rule at 1."""
    result = check_coherence(kb.assessment())
    if isinstance(result, Coherent):
        return Consistent()
    return Violated(layer=result.layer)


def entails(kb: DefaultKB, rule: DefaultRule) -> bool:
    """Whether every agreeing class forces the rule's event to value 1.

    Equivalent to the coherent interval for consequent|antecedent being the
    single point 1; since no coherent value exceeds 1, checking the certified
    lower endpoint suffices.
    """
    if not consistent_coherence(kb):
        raise InconsistentKB("the knowledge base admits no agreeing class")
    return interval_lower_bound(kb.assessment(), rule.event()) == 1


# ---------------------------------------------------------------------------
# Inference-rule schemas

ENTAILING = "entailing"
FAILING = "failing"
CS = "cs"


@dataclass(frozen=True)
class RuleSchema:
    """A named inference pattern over slot propositions.

    Premises and conclusion are (antecedent, consequent) formula templates
    over the slots; `axioms` are side conditions imposed on the universe.
    For cs-kind schemas the premises are negative: each one demands that its
    conditional event is *not* pinned to 1 by the base (upper bound < 1).
    """

    name: str
    kind: str
    slots: tuple[str, ...]
    premises: tuple[tuple[Formula, Formula], ...]
    conclusion: tuple[Formula, Formula]
    axioms: tuple[Formula, ...] = ()


_TEMPLATES = Universe(max_props=3)
_TEMPLATES.declare("A", "B", "C")


def _t(text: str) -> Formula:
    return _TEMPLATES.parse(text)


def _rule_t(antecedent: str, consequent: str) -> tuple[Formula, Formula]:
    return (_t(antecedent), _t(consequent))


SCHEMAS: dict[str, RuleSchema] = {
    s.name: s for s in (
        RuleSchema("Reflexivity", ENTAILING, ("A",),
                   premises=(),
                   conclusion=_rule_t("A", "A")),
        RuleSchema("LeftLogicalEquivalence", ENTAILING, ("A", "B", "C"),
                   premises=(_rule_t("A", "C"),),
                   conclusion=_rule_t("B", "C"),
                   axioms=(_t("(A -> B) & (B -> A)"),)),
        RuleSchema("RightWeakening", ENTAILING, ("A", "B", "C"),
                   premises=(_rule_t("C", "A"),),
                   conclusion=_rule_t("C", "B"),
                   axioms=(_t("A -> B"),)),
        RuleSchema("Cut", ENTAILING, ("A", "B", "C"),
                   premises=(_rule_t("A & B", "C"), _rule_t("A", "B")),
                   conclusion=_rule_t("A", "C")),
        RuleSchema("CautiousMonotonicity", ENTAILING, ("A", "B", "C"),
                   premises=(_rule_t("A", "B"), _rule_t("A", "C")),
                   conclusion=_rule_t("A & B", "C")),
        RuleSchema("Equivalence", ENTAILING, ("A", "B", "C"),
                   premises=(_rule_t("A", "B"), _rule_t("B", "A"),
                             _rule_t("A", "C")),
                   conclusion=_rule_t("B", "C")),
        RuleSchema("And", ENTAILING, ("A", "B", "C"),
                   premises=(_rule_t("A", "B"), _rule_t("A", "C")),
                   conclusion=_rule_t("A", "B & C")),
        RuleSchema("Or", ENTAILING, ("A", "B", "C"),
                   premises=(_rule_t("A", "C"), _rule_t("B", "C")),
                   conclusion=_rule_t("A v B", "C")),
        RuleSchema("Monotonicity", FAILING, ("A", "B", "C"),
                   premises=(_rule_t("B", "C"),),
                   conclusion=_rule_t("A", "C"),
                   axioms=(_t("A -> B"),)),
        RuleSchema("Transitivity", FAILING, ("A", "B", "C"),
                   premises=(_rule_t("A", "B"), _rule_t("B", "C")),
                   conclusion=_rule_t("A", "C")),
        RuleSchema("Contraposition", FAILING, ("A", "B"),
                   premises=(_rule_t("A", "B"),),
                   conclusion=_rule_t("~B", "~A")),
        RuleSchema("NegationRationality", CS, ("A", "B", "C"),
                   premises=(_rule_t("A & C", "B"), _rule_t("A & ~C", "B")),
                   conclusion=_rule_t("A", "B")),
        RuleSchema("DisjunctiveRationality", CS, ("A", "B", "C"),
                   premises=(_rule_t("A", "C"), _rule_t("B", "C")),
                   conclusion=_rule_t("A v B", "C")),
        RuleSchema("RationalMonotonicity", CS, ("A", "B", "C"),
                   premises=(_rule_t("A & B", "C"), _rule_t("A", "~B")),
                   conclusion=_rule_t("A", "C")),
    )
}

_CS_NOTE = ("negative premises are read against the base: "
            "each premise event's coherent band must stay below 1")


def _substitute(f: Formula, env: dict[str, Formula]) -> Formula:
    if isinstance(f, Prop):
        return env[f.name]
    if isinstance(f, Not):
        return Not(_substitute(f.child, env))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(_substitute(f.left, env), _substitute(f.right, env))
    return f


def _extended_universe(u: Universe, extra_axioms: Sequence[Formula]) -> Universe:
    out = Universe(max_props=u.max_props)
    out.declare(*u.props)
    for axiom in u.axioms:
        out.add_axiom(axiom)
    for axiom in extra_axioms:
        out.add_axiom(axiom)
    return out


@dataclass(frozen=True)
class SchemaReport:
    """Outcome of one schema instance.

    `as_expected` answers the kind-specific question: did an entailing
    schema transmit entailment (or fail vacuously), did a failing schema's
    instance witness the failure, did a cs-schema block the conclusion when
    its negative premises held?
    """

    schema: str
    kind: str
    premises: tuple[DefaultRule, ...]
    conclusion: DefaultRule
    applicable: bool
    reason: str = ""
    premises_consistent: Optional[bool] = None
    premises_hold: Optional[bool] = None
    premise_intervals: tuple[CoherentInterval, ...] = ()
    entailed: Optional[bool] = None
    interval: Optional[CoherentInterval] = None
    note: str = ""

    @property
    def as_expected(self) -> bool:
        if not self.applicable:
            return True
        if self.kind == ENTAILING:
            return not self.premises_consistent or bool(self.entailed)
        if self.kind == FAILING:
            return bool(self.premises_consistent) and self.entailed is False
        return not self.premises_hold or self.entailed is False


def check_rule_schema(schema: RuleSchema | str, kb: DefaultKB,
                      mapping: dict[str, Formula],
                      with_interval: bool = False) -> SchemaReport:
    """Instantiate a schema over the base kb and evaluate its claim.

    Entailing and failing schemas add their instantiated premises to the
    base as rules (side-condition axioms extend the universe) and ask
    whether the conclusion is entailed.  cs-schemas leave the base alone,
    check that each negative premise's event has upper bound < 1, and ask
    that the conclusion not be entailed.  `with_interval` additionally
    reports the conclusion's full coherent interval.
    """
    if isinstance(schema, str):
        try:
            schema = SCHEMAS[schema]
        except KeyError:
            raise ValueError(
                f"unknown schema {schema!r}; choose from "
                + ", ".join(sorted(SCHEMAS))
            ) from None
    missing = [s for s in schema.slots if s not in mapping]
    if missing:
        raise ValueError(f"mapping is missing slots: {', '.join(missing)}")
    env = {s: mapping[s] for s in schema.slots}

    u = kb.universe
    if schema.axioms:
        u = _extended_universe(u, [_substitute(a, env) for a in schema.axioms])
    premises = tuple(
        DefaultRule(_substitute(h, env), _substitute(e, env))
        for h, e in schema.premises
    )
    conclusion = DefaultRule(_substitute(schema.conclusion[0], env),
                             _substitute(schema.conclusion[1], env))

    conditioning = [r.antecedent for r in kb.rules]
    conditioning.extend(e.event.conditioning for e in kb.extra)
    conditioning.extend(r.antecedent for r in premises)
    conditioning.append(conclusion.antecedent)
    if not all(u.possible(h) for h in conditioning):
        return SchemaReport(
            schema.name, schema.kind, premises, conclusion, applicable=False,
            reason="a conditioning event is impossible under this instance",
        )

    if schema.kind == CS:
        base = DefaultKB(u, kb.rules, kb.extra)
        if not consistent_coherence(base):
            return SchemaReport(
                schema.name, schema.kind, premises, conclusion,
                applicable=False, reason="the knowledge base is inconsistent",
            )
        assessment = base.assessment()
        if with_interval:
            intervals = tuple(
                coherent_interval(assessment, r.event()) for r in premises
            )
            hold = all(iv.hi < 1 for iv in intervals)
            interval = coherent_interval(assessment, conclusion.event())
            entailed = interval.lo == 1
        else:
            hold = all(
                interval_upper_bound(assessment, r.event()) < 1
                for r in premises
            )
            intervals = ()
            interval = None
            entailed = (
                interval_lower_bound(assessment, conclusion.event()) == 1
            )
        return SchemaReport(
            schema.name, schema.kind, premises, conclusion, applicable=True,
            premises_consistent=True, premises_hold=hold,
            premise_intervals=intervals, entailed=entailed,
            interval=interval, note=_CS_NOTE,
        )

    extended = DefaultKB(u, kb.rules + premises, kb.extra)
    if not consistent_coherence(extended):
        return SchemaReport(
            schema.name, schema.kind, premises, conclusion, applicable=True,
            premises_consistent=False,
        )
    assessment = extended.assessment()
    if with_interval:
        interval = coherent_interval(assessment, conclusion.event())
        entailed = interval.lo == 1
    else:
        interval = None
        entailed = interval_lower_bound(assessment, conclusion.event()) == 1
    return SchemaReport(
        schema.name, schema.kind, premises, conclusion, applicable=True,
        premises_consistent=True, entailed=entailed, interval=interval,
    )


# ---------------------------------------------------------------------------
# Instantiation helpers


def universe_literals(u: Universe) -> list[Formula]:
    """Every proposition and negated proposition of the universe, in order."""
    out: list[Formula] = []
    for name in u.props:
        out.append(Prop(name))
        out.append(Not(Prop(name)))
    return out


def literal_mappings(u: Universe, slots: Sequence[str]):
    """All mappings of the slots to ordered tuples of distinct literals."""
    for combo in permutations(universe_literals(u), len(slots)):
        yield dict(zip(slots, combo))
