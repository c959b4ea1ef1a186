"""Coherence of conditional probability assessments via layered systems.

An assessment puts rational values on finitely many conditional events
E_i|H_i.  It is coherent exactly when there is an agreeing class of layer
distributions over the atoms generated by the assessed events: layer 0
distributes mass over the atoms under the union of all conditioning events;
every conditioning event left with zero total mass is retried at the next
layer, restricted to the atoms under the still-unresolved conditioning
events; and at the layer where an entry's conditioning event first gets
positive mass, the entry's value must equal the conditional mass ratio.

The checker realizes one layer after another as a small exact LP: the
unresolved entries contribute homogeneous constraints

    sum of mass under E_i & H_i  =  value_i * (sum of mass under H_i)

plus a normalization over the layer's atoms.  Taking a maximal-support
solution per layer (every conditioning event that can get positive mass does)
resolves as many entries as possible; if some layer system is infeasible the
assessment is incoherent, and otherwise the stacked solutions form the
canonical agreeing class.

Zero-layers generalize "probability zero" to a rank: the first layer at which
an event carries positive mass (the layer count for events that never do,
infinity for the impossible event).  They behave like ranking functions:
the rank of a disjunction is the minimum rank, an event or its negation has
rank 0, and conditional ranks subtract.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .logic import And, Atom, Formula, Universe, format_conditional, format_formula
from .ratlp import EQ, Constraint, feasible_point_with_max_support


class CoherenceError(ValueError):
    """Invalid assessment input."""


class ImpossibleConditioningEvent(CoherenceError):
    """A conditioning event has no admissible world."""


class ValueOutOfRange(CoherenceError):
    """An assessed value lies outside [0, 1]."""


class _Infinity:
    """Rank of the impossible event; compares above every integer."""

    _instance: Optional["_Infinity"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("infinity minus infinity")
        return self

    def __repr__(self):
        return "inf"


INFINITY = _Infinity()

Rank = Union[int, _Infinity]


@dataclass(frozen=True)
class ConditionalEvent:
    consequent: Formula
    conditioning: Formula

    def __str__(self) -> str:
        return format_conditional(self.consequent, self.conditioning)


@dataclass(frozen=True)
class Entry:
    event: ConditionalEvent
    value: Fraction


class ConditionalAssessment:
    """Finitely many conditional events with rational values in [0, 1]."""

    def __init__(self, universe: Universe, entries: Sequence[Entry]):
        for entry in entries:
            if not (0 <= entry.value <= 1):
                raise ValueOutOfRange(
                    f"P({entry.event}) = {entry.value} is outside [0, 1]"
                )
            if not universe.possible(entry.event.conditioning):
                raise ImpossibleConditioningEvent(
                    f"conditioning event "
                    f"{format_formula(entry.event.conditioning)!r} is impossible"
                )
        self.universe = universe
        self.entries = list(entries)

    def event_list(self) -> list[Formula]:
        """Flat (E_1, H_1, E_2, H_2, ...) list defining atom signatures."""
        out: list[Formula] = []
        for e in self.entries:
            out.append(e.event.consequent)
            out.append(e.event.conditioning)
        return out

    def augmented(self, event: ConditionalEvent, value: Fraction
                  ) -> "ConditionalAssessment":
        return ConditionalAssessment(
            self.universe, self.entries + [Entry(event, Fraction(value))]
        )


@dataclass
class AgreeingClass:
    """The canonical layer distributions witnessing coherence.

    layers[a][r] is the mass layer a puts on atom r; supports[a] lists the
    atom indices eligible at layer a (those under a still-unresolved
    conditioning event); resolution maps each entry index to the layer at
    which its conditioning event first carries positive mass.
    """

    universe: Universe
    entries: list[Entry]
    atoms: list[Atom]
    layers: list[tuple[Fraction, ...]]
    supports: list[tuple[int, ...]]
    resolution: dict[int, int]

    def atom_indices(self, f: Formula) -> list[int]:
        """Atoms on which the formula holds; raises if not algebra-constant."""
        truth = self.universe.atom_truth(self.atoms, f)
        return [r for r, t in enumerate(truth) if t]

    def layer_mass(self, layer: int, indices: Sequence[int]) -> Fraction:
        row = self.layers[layer]
        return sum((row[r] for r in indices), Fraction(0))

    def zero_layer(self, f: Formula) -> Rank:
        """First layer giving the event positive mass; layer count when none
        does but the event is possible; infinity for the impossible event."""
        indices = self.atom_indices(f)
        if not indices:
            return INFINITY
        for a in range(len(self.layers)):
            if self.layer_mass(a, indices) > 0:
                return a
        return len(self.layers)

    def conditional_zero_layer(self, event: ConditionalEvent) -> Rank:
        """Rank of E|H: rank(E & H) - rank(H).  H must be possible."""
        h = self.zero_layer(event.conditioning)
        if h is INFINITY:
            raise ImpossibleConditioningEvent(
                f"conditioning event "
                f"{format_formula(event.conditioning)!r} is impossible"
            )
        eh = self.zero_layer(And(event.consequent, event.conditioning))
        if eh is INFINITY:
            return INFINITY
        return eh - h

    def verify(self) -> None:
        """Exact re-substitution of every entry into its resolving layer."""
        u = self.universe
        for i, entry in enumerate(self.entries):
            e, h = entry.event.consequent, entry.event.conditioning
            h_idx = self.atom_indices(h)
            eh_idx = [r for r in h_idx if r in set(self.atom_indices(e))]
            layer = self.resolution[i]
            for earlier in range(layer):
                assert self.layer_mass(earlier, h_idx) == 0, (
                    f"entry {i} already had mass before layer {layer}"
                )
            mh = self.layer_mass(layer, h_idx)
            meh = self.layer_mass(layer, eh_idx)
            assert mh > 0, f"entry {i} unresolved at its resolution layer"
            assert meh == entry.value * mh, (
                f"entry {i} does not re-substitute exactly: "
                f"{meh} != {entry.value} * {mh}"
            )
        for a in range(1, len(self.supports)):
            cur, prev = set(self.supports[a]), set(self.supports[a - 1])
            assert cur < prev, "layer supports must shrink strictly"
            for earlier in range(a):
                row = self.layers[earlier]
                assert all(row[r] == 0 for r in cur), (
                    "later-layer atoms must carry no earlier mass"
                )
        total_mass = [sum(row, Fraction(0)) for row in self.layers]
        assert all(t == 1 for t in total_mass), "layers must be normalized"


@dataclass(frozen=True)
class Coherent:
    agreeing_class: AgreeingClass

    def __bool__(self) -> bool:
        return True


@dataclass(frozen=True)
class Incoherent:
    layer: int

    def __bool__(self) -> bool:
        return False


Verdict = Union[Coherent, Incoherent]


def _layer_constraints(
    entries: Sequence[Entry],
    unresolved: Sequence[int],
    eh_truth: Sequence[Sequence[bool]],
    h_truth: Sequence[Sequence[bool]],
    var_atoms: Sequence[int],
) -> list[Constraint]:
    cons = []
    for i in unresolved:
        p = entries[i].value
        row = []
        for r in var_atoms:
            c = Fraction(0)
            if eh_truth[i][r]:
                c += 1
            if h_truth[i][r]:
                c -= p
            row.append(c)
        cons.append(Constraint(tuple(row), EQ, Fraction(0)))
    cons.append(
        Constraint(tuple(Fraction(1) for _ in var_atoms), EQ, Fraction(1))
    )
    return cons


def check_coherence(assessment: ConditionalAssessment) -> Verdict:
    """Decide coherence, building the canonical agreeing class on success."""
    u = assessment.universe
    entries = assessment.entries
    n = len(entries)
    events = assessment.event_list()
    atoms = u.atoms(events)
    # per-entry atom truth straight off the signatures
    eh_truth = [
        [a.signature[2 * i] and a.signature[2 * i + 1] for a in atoms]
        for i in range(n)
    ]
    h_truth = [[a.signature[2 * i + 1] for a in atoms] for i in range(n)]

    unresolved = list(range(n))
    layers: list[tuple[Fraction, ...]] = []
    supports: list[tuple[int, ...]] = []
    resolution: dict[int, int] = {}
    while unresolved:
        var_atoms = [
            r for r in range(len(atoms))
            if any(h_truth[i][r] for i in unresolved)
        ]
        col = {r: k for k, r in enumerate(var_atoms)}
        cons = _layer_constraints(entries, unresolved, eh_truth, h_truth, var_atoms)
        groups = [
            [col[r] for r in var_atoms if h_truth[i][r]] for i in unresolved
        ]
        got = feasible_point_with_max_support(len(var_atoms), cons, groups)
        if got is None:
            return Incoherent(len(layers))
        point, positive = got
        newly = [unresolved[gi] for gi in sorted(positive)]
        # every variable atom sits under some unresolved conditioning event,
        # so a normalized solution must give one of them positive mass
        assert newly, "feasible layer resolved nothing"
        full = [Fraction(0)] * len(atoms)
        for r, k in col.items():
            full[r] = point[k]
        layers.append(tuple(full))
        supports.append(tuple(var_atoms))
        here = len(layers) - 1
        for i in newly:
            resolution[i] = here
        unresolved = [i for i in unresolved if i not in resolution]

    cls = AgreeingClass(u, list(entries), atoms, layers, supports, resolution)
    cls.verify()
    return Coherent(cls)
