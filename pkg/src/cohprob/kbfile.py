"""Knowledge-base files: a small line grammar over the library objects.

    # Tweety, the classic.
    prop tweety penguin bird fly
    axiom tweety -> penguin
    assess "bird | penguin" = 1
    default "penguin => ~fly"
    query "fly | tweety"

`prop` declares propositions, `axiom` restricts the admissible worlds,
`assess` fixes the probability of a conditional event, `default` abbreviates
an assessment at value 1 written rule-style, and `query` records conditional
events of interest to extension commands.  Values are rationals written as
`n` or `n/d`, or the placeholder `alpha` resolved when the file is loaded.
Text after `#` is ignored.  Every diagnostic carries its line number.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .coherence import ConditionalAssessment, ConditionalEvent, Entry
from .defaults import DefaultKB, DefaultRule
from .logic import LogicError, Universe, format_formula


class KBFileError(ValueError):
    """A malformed knowledge-base file; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class KnowledgeBase:
    """Everything a file describes, in both assessment and rule form.

    `assessment` lists the entries in file order; `default_kb` splits them
    into value-1 rules and lower-valued extras for the rule-based commands.
    """

    universe: Universe
    assessment: ConditionalAssessment
    default_kb: DefaultKB
    queries: list[ConditionalEvent]
    alpha_used: bool


_QUOTED_EQ_RE = re.compile(r'^"([^"]*)"\s*=\s*(\S+)$')
_QUOTED_RE = re.compile(r'^"([^"]*)"$')

_KEYWORDS = ("prop", "axiom", "assess", "default", "query")


def _parse_value(token: str, alpha: Optional[Fraction],
                 line: int) -> tuple[Fraction, bool]:
    if token == "alpha":
        if alpha is None:
            raise KBFileError(
                "this file is parameterized: supply a value for alpha", line
            )
        return alpha, True
    try:
        value = Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise KBFileError(
            f"{token!r} is not a rational value (write n, n/d, or alpha)",
            line,
        ) from None
    return value, False


def parse_kb(text: str, max_props: int = 16,
             alpha: Optional[Fraction] = None) -> KnowledgeBase:
    """Parse a knowledge-base file into resolved library structures.

    Duplicate assessments of one conditional event are dropped when the
    values agree and rejected when they differ (the comparison is syntactic,
    on the written formulas).  Conditioning events must be possible under
    the file's axioms; this is checked once the whole file has been read,
    so axiom order does not matter.
    """
    if alpha is not None and not 0 <= alpha <= 1:
        raise KBFileError("alpha must lie in [0, 1]", 0)
    u = Universe(max_props=max_props)
    entries: list[tuple[int, Entry]] = []
    seen: dict[tuple, tuple[int, Fraction]] = {}
    queries: list[tuple[int, ConditionalEvent]] = []
    alpha_used = False

    def add_entry(line: int, event: ConditionalEvent, value: Fraction) -> None:
        if not 0 <= value <= 1:
            raise KBFileError("assessed values must lie in [0, 1]", line)
        key = (event.consequent, event.conditioning)
        if key in seen:
            old_line, old_value = seen[key]
            if old_value != value:
                raise KBFileError(
                    f"{event} was already assessed at {old_value} "
                    f"on line {old_line}", line,
                )
            return
        seen[key] = (line, value)
        entries.append((line, Entry(event, value)))

    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        keyword, _, rest = stripped.partition(" ")
        rest = rest.strip()
        try:
            if keyword == "prop":
                if not rest:
                    raise KBFileError("prop needs at least one name", number)
                u.declare(*rest.split())
            elif keyword == "axiom":
                u.add_axiom(u.parse(rest))
            elif keyword == "assess":
                m = _QUOTED_EQ_RE.match(rest)
                if m is None:
                    raise KBFileError(
                        'expected: assess "<E> | <H>" = <value>', number
                    )
                consequent, conditioning = u.parse_conditional(m.group(1))
                value, used = _parse_value(m.group(2), alpha, number)
                alpha_used = alpha_used or used
                add_entry(number, ConditionalEvent(consequent, conditioning),
                          value)
            elif keyword == "default":
                m = _QUOTED_RE.match(rest)
                if m is None:
                    raise KBFileError(
                        'expected: default "<H> => <E>"', number
                    )
                conditioning, consequent = u.parse_default(m.group(1))
                add_entry(number, ConditionalEvent(consequent, conditioning),
                          Fraction(1))
            elif keyword == "query":
                m = _QUOTED_RE.match(rest)
                if m is None:
                    raise KBFileError('expected: query "<E> | <H>"', number)
                consequent, conditioning = u.parse_conditional(m.group(1))
                queries.append(
                    (number, ConditionalEvent(consequent, conditioning))
                )
            else:
                raise KBFileError(
                    f"unknown keyword {keyword!r} "
                    f"(expected one of: {', '.join(_KEYWORDS)})", number,
                )
        except LogicError as exc:
            raise KBFileError(str(exc), number) from None

    if alpha is not None and not alpha_used:
        raise KBFileError(
            "alpha was supplied but the file never uses it", 0
        )

    for line, entry in entries:
        if not u.possible(entry.event.conditioning):
            raise KBFileError(
                f"conditioning event "
                f"{format_formula(entry.event.conditioning)!r} is impossible",
                line,
            )
    for line, event in queries:
        if not u.possible(event.conditioning):
            raise KBFileError(
                f"conditioning event "
                f"{format_formula(event.conditioning)!r} is impossible",
                line,
            )

    ordered = [entry for _, entry in entries]
    assessment = ConditionalAssessment(u, ordered)
    rules = [
        DefaultRule(e.event.conditioning, e.event.consequent)
        for e in ordered if e.value == 1
    ]
    extra = [e for e in ordered if e.value != 1]
    default_kb = DefaultKB(u, rules, extra)
    return KnowledgeBase(
        universe=u,
        assessment=assessment,
        default_kb=default_kb,
        queries=[event for _, event in queries],
        alpha_used=alpha_used,
    )


def load_kb(path: str, max_props: int = 16,
            alpha: Optional[Fraction] = None) -> KnowledgeBase:
    with open(path, encoding="utf-8") as handle:
        return parse_kb(handle.read(), max_props=max_props, alpha=alpha)
