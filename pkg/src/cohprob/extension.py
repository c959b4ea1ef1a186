"""Coherent extension intervals for a new conditional event.

Given a coherent assessment, the values q that keep it coherent after adding
P(E|H) = q form a closed rational interval.  The endpoints are computed by a
layer sweep: an agreeing class of the augmented assessment resolves H at some
layer, and at that point the active constraints are exactly those of the base
entries whose conditioning events are still mass-free.  The sweep therefore
defers H as long as possible - at each state it solves the two fractional
programs

    min / max  (mass under E & H)   subject to the unresolved entries'
    homogeneous constraints, with the mass under H normalized to one
    (the usual change of variable that makes a ratio objective linear)

and then advances one layer with an added "H keeps zero mass" constraint,
resolving a maximal set of base entries, until that deferral becomes
infeasible or no entries remain.  Deferring resolves entries as fast as
possible, and any slower agreeing class leaves a superset of entries
unresolved, whose stage program is more constrained; so the union of the
swept ranges covers every coherent value, while every swept stage is
realizable by construction.  Both endpoints and two interior probes are
nevertheless re-certified through the full coherence checker; a certification
failure would mean an internal bug and raises AssertionError.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coherence import (
    CoherenceError,
    Coherent,
    ConditionalAssessment,
    ConditionalEvent,
    ImpossibleConditioningEvent,
    check_coherence,
)
from .logic import format_formula
from .ratlp import (
    EQ,
    OPTIMAL,
    Constraint,
    feasible_point_with_max_support,
    program,
    solve,
)


class IncoherentBase(CoherenceError):
    """The assessment being extended is itself incoherent."""


@dataclass(frozen=True)
class CoherentInterval:
    lo: Fraction
    hi: Fraction

    @property
    def degenerate(self) -> bool:
        """Only one coherent value: the target is determined by the base."""
        return self.lo == self.hi

    def __contains__(self, q) -> bool:
        return self.lo <= q <= self.hi

    def __str__(self) -> str:
        return (
            f"[{self.lo.numerator}/{self.lo.denominator}, "
            f"{self.hi.numerator}/{self.hi.denominator}]"
        )


def _augmented_coherent(assessment: ConditionalAssessment,
                        target: ConditionalEvent, q: Fraction) -> bool:
    verdict = check_coherence(assessment.augmented(target, q))
    return isinstance(verdict, Coherent)


def is_coherent_value(assessment: ConditionalAssessment,
                      target: ConditionalEvent, q) -> bool:
    """True iff adding P(target) = q keeps the assessment coherent."""
    q = Fraction(q)
    if not (0 <= q <= 1):
        return False
    if _augmented_coherent(assessment, target, q):
        return True
    if not isinstance(check_coherence(assessment), Coherent):
        raise IncoherentBase("the base assessment is incoherent")
    return False


def _candidate_values(assessment: ConditionalAssessment,
                      target: ConditionalEvent,
                      senses: tuple[str, ...]) -> list[Fraction]:
    """Stage optima along the H-deferral sweep, in the requested senses."""
    u = assessment.universe
    entries = assessment.entries
    n = len(entries)
    events = assessment.event_list() + [target.consequent, target.conditioning]
    atoms = u.atoms(events)
    eh = [
        [a.signature[2 * i] and a.signature[2 * i + 1] for a in atoms]
        for i in range(n)
    ]
    h = [[a.signature[2 * i + 1] for a in atoms] for i in range(n)]
    te = [a.signature[2 * n] and a.signature[2 * n + 1] for a in atoms]
    th = [a.signature[2 * n + 1] for a in atoms]

    candidates: list[Fraction] = []
    unresolved = list(range(n))
    while True:
        # stage program: H resolves now, normalized to unit mass
        var_atoms = [
            r for r in range(len(atoms))
            if th[r] or any(h[i][r] for i in unresolved)
        ]
        cons = []
        for i in unresolved:
            p = entries[i].value
            row = [
                (Fraction(1) if eh[i][r] else Fraction(0))
                - (p if h[i][r] else Fraction(0))
                for r in var_atoms
            ]
            cons.append(Constraint(tuple(row), EQ, Fraction(0)))
        cons.append(Constraint(
            tuple(Fraction(1) if th[r] else Fraction(0) for r in var_atoms),
            EQ, Fraction(1),
        ))
        objective = [Fraction(1) if te[r] else Fraction(0) for r in var_atoms]
        for sense in senses:
            sol = solve(program(len(var_atoms), cons, objective, sense))
            if sol.status == OPTIMAL:
                candidates.append(sol.value)

        if not unresolved:
            break
        # advance one layer while H keeps zero mass
        avoid_vars = [
            r for r in range(len(atoms)) if any(h[i][r] for i in unresolved)
        ]
        col = {r: k for k, r in enumerate(avoid_vars)}
        cons2 = []
        for i in unresolved:
            p = entries[i].value
            row = [
                (Fraction(1) if eh[i][r] else Fraction(0))
                - (p if h[i][r] else Fraction(0))
                for r in avoid_vars
            ]
            cons2.append(Constraint(tuple(row), EQ, Fraction(0)))
        cons2.append(Constraint(
            tuple(Fraction(1) for _ in avoid_vars), EQ, Fraction(1)))
        cons2.append(Constraint(
            tuple(Fraction(1) if th[r] else Fraction(0) for r in avoid_vars),
            EQ, Fraction(0),
        ))
        groups = [[col[r] for r in avoid_vars if h[i][r]] for i in unresolved]
        got = feasible_point_with_max_support(len(avoid_vars), cons2, groups)
        if got is None:
            break
        _, positive = got
        newly = {unresolved[gi] for gi in positive}
        assert newly, "deferral layer resolved nothing"
        unresolved = [i for i in unresolved if i not in newly]
    return candidates


def coherent_interval(assessment: ConditionalAssessment,
                      target: ConditionalEvent) -> CoherentInterval:
    """The exact closed interval of coherent values for the target event."""
    u = assessment.universe
    if not u.possible(target.conditioning):
        raise ImpossibleConditioningEvent(
            f"conditioning event "
            f"{format_formula(target.conditioning)!r} is impossible"
        )
    if not isinstance(check_coherence(assessment), Coherent):
        raise IncoherentBase("the base assessment is incoherent")

    candidates = _candidate_values(assessment, target, ("min", "max"))
    assert candidates, "extension sweep produced no feasible stage"
    lo, hi = min(candidates), max(candidates)
    # certify both endpoints and two interior probes against the checker
    for probe in (lo, hi, lo + (hi - lo) / 3, lo + 2 * (hi - lo) / 3):
        assert _augmented_coherent(assessment, target, probe), (
            f"stage sweep produced a non-coherent value {probe}"
        )
    return CoherentInterval(lo, hi)


def _one_sided_bound(assessment: ConditionalAssessment,
                     target: ConditionalEvent, sense: str) -> Fraction:
    if not assessment.universe.possible(target.conditioning):
        raise ImpossibleConditioningEvent(
            f"conditioning event "
            f"{format_formula(target.conditioning)!r} is impossible"
        )
    candidates = _candidate_values(assessment, target, (sense,))
    assert candidates, "extension sweep produced no feasible stage"
    bound = min(candidates) if sense == "min" else max(candidates)
    assert _augmented_coherent(assessment, target, bound), (
        f"stage sweep produced a non-coherent value {bound}"
    )
    return bound


def interval_lower_bound(assessment: ConditionalAssessment,
                         target: ConditionalEvent) -> Fraction:
    """Certified lower endpoint only; the caller must know the base coheres.

    Entailment checks only need to know whether the lower endpoint equals
    one, so this skips the max-side programs and spares half the LP work.
    """
    return _one_sided_bound(assessment, target, "min")


def interval_upper_bound(assessment: ConditionalAssessment,
                         target: ConditionalEvent) -> Fraction:
    """Certified upper endpoint only; the caller must know the base coheres."""
    return _one_sided_bound(assessment, target, "max")
