"""Layered coherence checking against worked cases and the brute-force oracle."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cohprob.coherence import (
    AgreeingClass,
    Coherent,
    ConditionalAssessment,
    ConditionalEvent,
    Entry,
    ImpossibleConditioningEvent,
    INFINITY,
    Incoherent,
    ValueOutOfRange,
    check_coherence,
)
from cohprob.logic import Universe

from oracles import oracle_coherent

F = Fraction


def assessment(u, *triples):
    entries = [
        Entry(ConditionalEvent(u.parse(e), u.parse(h)), F(p))
        for e, h, p in triples
    ]
    return ConditionalAssessment(u, entries)


def two_prop_universe():
    u = Universe()
    u.declare("a", "b")
    return u


def test_validation_errors():
    u = two_prop_universe()
    with pytest.raises(ValueOutOfRange):
        assessment(u, ("a", "b", F(3, 2)))
    with pytest.raises(ImpossibleConditioningEvent):
        assessment(u, ("a", "b & ~b", 1))


def test_conflicting_certainties_incoherent_at_layer_zero():
    u = two_prop_universe()
    a = assessment(u, ("a", "b", 1), ("~a", "b", 1))
    verdict = check_coherence(a)
    assert isinstance(verdict, Incoherent)
    assert verdict.layer == 0


def test_single_certainty_gives_one_layer():
    # One entry P(E|H) = 1 with E^c & H possible: mass sits on E & H, the
    # complement keeps rank one step above the class's only layer.
    u = Universe()
    u.declare("e", "h")
    a = assessment(u, ("e", "h", 1))
    verdict = check_coherence(a)
    assert isinstance(verdict, Coherent)
    cls = verdict.agreeing_class
    assert len(cls.layers) == 1
    assert cls.zero_layer(u.parse("e & h")) == 0
    assert cls.zero_layer(u.parse("~e & h")) == 1
    ce = ConditionalEvent(u.parse("e"), u.parse("h"))
    assert cls.conditional_zero_layer(ce) == 0
    ce_neg = ConditionalEvent(u.parse("~e"), u.parse("h"))
    assert cls.conditional_zero_layer(ce_neg) == 1
    assert cls.zero_layer(u.parse("e & ~h & h")) is INFINITY


def test_contraposition_assessment_two_layers():
    u = two_prop_universe()
    a = assessment(u, ("b", "a", 1), ("~a", "~b", F(1, 4)))
    verdict = check_coherence(a)
    assert isinstance(verdict, Coherent)
    cls = verdict.agreeing_class
    assert len(cls.layers) == 2
    assert cls.resolution == {0: 0, 1: 1}
    # second layer lives on the ~b atoms and splits mass 3/4 : 1/4
    not_b = cls.atom_indices(u.parse("~b"))
    assert cls.layer_mass(1, not_b) == 1
    assert cls.layer_mass(1, cls.atom_indices(u.parse("~a & ~b"))) == F(1, 4)


def logically_independent_pair():
    u = Universe()
    u.declare("h1", "h2")
    return u


@pytest.mark.parametrize("alpha", [F(1, 4), F(1, 3), F(1, 2)])
def test_two_certainties_and_a_free_parameter(alpha):
    # P(h1&h2 | h1) = P(~h1&h2 | h2) = 1 and P(~h1&~h2 | true) = alpha force
    # the layer-0 masses (0, 0, 1-alpha, alpha) on the four atoms; the first
    # entry's conditioning event only resolves at layer 1.
    u = logically_independent_pair()
    a = assessment(
        u,
        ("h1 & h2", "h1", 1),
        ("~h1 & h2", "h2", 1),
        ("~h1 & ~h2", "true", alpha),
    )
    verdict = check_coherence(a)
    assert isinstance(verdict, Coherent)
    cls = verdict.agreeing_class
    assert cls.layer_mass(0, cls.atom_indices(u.parse("~h1 & ~h2"))) == alpha
    assert cls.layer_mass(0, cls.atom_indices(u.parse("~h1 & h2"))) == 1 - alpha
    assert cls.layer_mass(0, cls.atom_indices(u.parse("h1"))) == 0
    assert cls.resolution[1] == 0 and cls.resolution[2] == 0
    assert cls.resolution[0] == 1
    assert cls.zero_layer(u.parse("h1")) == 1


def test_fresh_proposition_split_becomes_incoherent():
    # Certainty on h1&h2 given h1 plus near-certainty on ~h1&h2 given h2
    # forces zero mass on h1&~h2 at every level, so pinning both a fresh
    # a and its complement as certain there must fail at layer 1.
    u = Universe()
    u.declare("h1", "h2", "a")
    u.add_axiom(u.parse("a -> h1 & ~h2"))
    a = assessment(
        u,
        ("h1 & h2", "h1", 1),
        ("~h1 & h2", "h2", F(9, 10)),
        ("a", "h1 & ~h2", 1),
        ("~a", "h1 & ~h2", 1),
    )
    verdict = check_coherence(a)
    assert isinstance(verdict, Incoherent)
    assert verdict.layer == 1


def tweety_assessment():
    u = Universe()
    u.declare("tweety", "penguin", "bird", "fly")
    u.add_axiom(u.parse("tweety -> penguin"))
    u.add_axiom(u.parse("penguin -> bird"))
    return assessment(
        u,
        ("bird", "penguin", 1),
        ("penguin", "tweety", 1),
        ("~fly", "penguin", 1),
    )


def test_tweety_premises_coherent():
    verdict = check_coherence(tweety_assessment())
    assert isinstance(verdict, Coherent)
    cls = verdict.agreeing_class
    u = cls.universe
    # flying penguins never acquire mass
    assert cls.zero_layer(u.parse("penguin & fly")) == len(cls.layers)


def test_rank_laws_on_the_canonical_class():
    u = logically_independent_pair()
    a = assessment(
        u,
        ("h1 & h2", "h1", 1),
        ("~h1 & h2", "h2", 1),
        ("~h1 & ~h2", "true", F(1, 3)),
    )
    cls = check_coherence(a).agreeing_class
    pool = [
        u.parse(s)
        for s in ("h1", "h2", "~h1", "~h2", "h1 & h2", "h1 v h2", "true")
    ]
    from cohprob.logic import Not, Or

    for x in pool:
        assert min(cls.zero_layer(x), cls.zero_layer(Not(x))) == 0
        for y in pool:
            union = cls.zero_layer(Or(x, y))
            assert union == min(cls.zero_layer(x), cls.zero_layer(y))


def test_agreeing_class_determinism():
    a = tweety_assessment()
    c1 = check_coherence(a).agreeing_class
    c2 = check_coherence(a).agreeing_class
    assert c1.layers == c2.layers
    assert c1.resolution == c2.resolution


# --- oracle agreement ----------------------------------------------------------

_VALUES = [F(0), F(1, 4), F(1, 2), F(3, 4), F(1), F(2, 7), F(5, 6)]
_FORMULAS = ["a", "b", "~a", "a & b", "a v b", "~a v b", "~(a & b)"]


@st.composite
def random_assessments(draw):
    u = two_prop_universe()
    n = draw(st.integers(1, 3))
    triples = []
    for _ in range(n):
        e = draw(st.sampled_from(_FORMULAS))
        h = draw(st.sampled_from(_FORMULAS))
        p = draw(st.sampled_from(_VALUES))
        triples.append((e, h, p))
    return assessment(u, *triples)


@settings(max_examples=120, deadline=None)
@given(random_assessments())
def test_matches_layer_assignment_oracle(a):
    verdict = check_coherence(a)
    assert isinstance(verdict, Coherent) == oracle_coherent(a)
