"""Propositional foundations: formulas, parsing, worlds and atoms.

Events are propositional formulas over a finite table of named propositions.
A world is one truth assignment to the whole table, encoded as a bitmask.
Background axioms restrict the admissible worlds; everything downstream
(possibility, implication, atom enumeration) is relative to those axioms.

Atoms are the minimal elements of the algebra generated by a finite list of
event formulas: equivalence classes of admissible worlds that agree on every
listed event.  Each atom keeps its witness worlds so that arbitrary formulas
can later be tested for membership in the generated algebra.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Sequence, Union


class LogicError(ValueError):
    """Anything the propositional layer can reject."""


class FormulaSyntaxError(LogicError):
    """Malformed formula or conditional text; carries the byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class UnknownPropositionError(LogicError):
    """A formula referenced a proposition that was never declared."""


class PropositionLimitError(LogicError):
    """Declaring more propositions than the world-enumeration bound allows."""


# ---------------------------------------------------------------------------
# Formula AST


@dataclass(frozen=True)
class Prop:
    name: str


@dataclass(frozen=True)
class Not:
    child: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Const:
    value: bool


Formula = Union[Prop, Not, And, Or, Implies, Const]

TRUE = Const(True)
FALSE = Const(False)

# Reserved words of the concrete syntax.  `v` is the disjunction operator
# (the pipe is taken by conditioning), so none of these can name a proposition.
RESERVED_WORDS = ("v", "true", "false")

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def land(*parts: Formula) -> Formula:
    """Left-folded conjunction of the given formulas (TRUE when empty)."""
    if not parts:
        return TRUE
    acc = parts[0]
    for p in parts[1:]:
        acc = And(acc, p)
    return acc


def lor(*parts: Formula) -> Formula:
    """Left-folded disjunction of the given formulas (FALSE when empty)."""
    if not parts:
        return FALSE
    acc = parts[0]
    for p in parts[1:]:
        acc = Or(acc, p)
    return acc


# ---------------------------------------------------------------------------
# Lexer / parser
#
# Grammar (loosest binding first):
#   implication := disjunction ('->' implication)?        right associative
#   disjunction := conjunction ('v' conjunction)*         left associative
#   conjunction := negation ('&' negation)*               left associative
#   negation    := '~' negation | primary
#   primary     := '(' implication ')' | 'true' | 'false' | ident


@dataclass(frozen=True)
class _Token:
    kind: str  # 'not' 'and' 'or' 'implies' 'lparen' 'rparen' 'const' 'ident' 'end'
    text: str
    offset: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c == "~":
            tokens.append(_Token("not", c, i))
            i += 1
        elif c == "&":
            tokens.append(_Token("and", c, i))
            i += 1
        elif c == "(":
            tokens.append(_Token("lparen", c, i))
            i += 1
        elif c == ")":
            tokens.append(_Token("rparen", c, i))
            i += 1
        elif c == "-":
            if text[i : i + 2] != "->":
                raise FormulaSyntaxError("expected '->'", i)
            tokens.append(_Token("implies", "->", i))
            i += 2
        else:
            m = _IDENT_RE.match(text, i)
            if m is None:
                raise FormulaSyntaxError(f"unexpected character {c!r}", i)
            word = m.group(0)
            if word == "v":
                tokens.append(_Token("or", word, i))
            elif word in ("true", "false"):
                tokens.append(_Token("const", word, i))
            else:
                tokens.append(_Token("ident", word, i))
            i = m.end()
    tokens.append(_Token("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, known: Optional[set[str]]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.known = known  # None disables the registration check

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def take(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> Formula:
        f = self.implication()
        tok = self.peek()
        if tok.kind != "end":
            raise FormulaSyntaxError(f"unexpected {tok.text!r}", tok.offset)
        return f

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek().kind == "implies":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek().kind == "or":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.negation()
        while self.peek().kind == "and":
            self.take()
            f = And(f, self.negation())
        return f

    def negation(self) -> Formula:
        if self.peek().kind == "not":
            self.take()
            return Not(self.negation())
        return self.primary()

    def primary(self) -> Formula:
        tok = self.take()
        if tok.kind == "lparen":
            f = self.implication()
            closing = self.take()
            if closing.kind != "rparen":
                raise FormulaSyntaxError("expected ')'", closing.offset)
            return f
        if tok.kind == "const":
            return TRUE if tok.text == "true" else FALSE
        if tok.kind == "ident":
            if self.known is not None and tok.text not in self.known:
                raise UnknownPropositionError(
                    f"proposition {tok.text!r} is not declared"
                )
            return Prop(tok.text)
        raise FormulaSyntaxError("expected a formula", tok.offset)


def parse_formula(text: str, known: Optional[set[str]] = None) -> Formula:
    """Parse a formula; names must be in `known` when a set is given."""
    return _Parser(text, known).parse()


def split_conditional(text: str) -> tuple[str, str]:
    """Split ``"E | H"`` on its single bar, returning the two raw sides."""
    first = text.find("|")
    if first < 0:
        raise FormulaSyntaxError("conditional needs a '|'", len(text))
    if text.find("|", first + 1) >= 0:
        raise FormulaSyntaxError(
            "conditional needs exactly one '|'", text.find("|", first + 1)
        )
    return text[:first], text[first + 1 :]


def split_default(text: str) -> tuple[str, str]:
    """Split ``"H => E"`` on its single arrow, returning (antecedent, consequent)."""
    first = text.find("=>")
    if first < 0:
        raise FormulaSyntaxError("default rule needs '=>'", len(text))
    if text.find("=>", first + 2) >= 0:
        raise FormulaSyntaxError(
            "default rule needs exactly one '=>'", text.find("=>", first + 2)
        )
    return text[:first], text[first + 2 :]


# Pretty printing.  Precedence mirrors the parser; parentheses are emitted
# exactly where re-parsing would otherwise change the tree shape.

_PREC_IMPLIES, _PREC_OR, _PREC_AND, _PREC_NOT, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(f: Formula) -> int:
    if isinstance(f, Implies):
        return _PREC_IMPLIES
    if isinstance(f, Or):
        return _PREC_OR
    if isinstance(f, And):
        return _PREC_AND
    if isinstance(f, Not):
        return _PREC_NOT
    return _PREC_ATOM


def format_formula(f: Formula) -> str:
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, Const):
        return "true" if f.value else "false"
    if isinstance(f, Not):
        child = format_formula(f.child)
        if _prec(f.child) < _PREC_NOT:
            child = f"({child})"
        return "~" + child
    if isinstance(f, And):
        op, prec = "&", _PREC_AND
    elif isinstance(f, Or):
        op, prec = "v", _PREC_OR
    else:
        op, prec = "->", _PREC_IMPLIES
    left = format_formula(f.left)
    right = format_formula(f.right)
    if isinstance(f, Implies):
        # right associative: parenthesize an implication on the left only
        if _prec(f.left) <= prec:
            left = f"({left})"
        if _prec(f.right) < prec:
            right = f"({right})"
    else:
        if _prec(f.left) < prec:
            left = f"({left})"
        if _prec(f.right) <= prec:
            right = f"({right})"
    return f"{left} {op} {right}"


def format_conditional(consequent: Formula, conditioning: Formula) -> str:
    return f"{format_formula(consequent)} | {format_formula(conditioning)}"


# ---------------------------------------------------------------------------
# Worlds and atoms


@dataclass(frozen=True)
class Atom:
    """One signature class: truth values over the event list plus witnesses."""

    signature: tuple[bool, ...]
    worlds: tuple[int, ...]


class Universe:
    """A proposition table with background axioms and cached world structure."""

    def __init__(self, max_props: int = 16):
        self.max_props = max_props
        self.props: list[str] = []
        self._index: dict[str, int] = {}
        self.axioms: list[Formula] = []
        self._worlds: Optional[list[int]] = None
        self._world_pos: dict[int, int] = {}
        self._mask_cache: dict[Formula, int] = {}
        self._atom_cache: dict[tuple[Formula, ...], list[Atom]] = {}

    # -- vocabulary ---------------------------------------------------------

    def declare(self, *names: str) -> None:
        for name in names:
            if name in self._index:
                continue
            if name in RESERVED_WORDS:
                raise LogicError(f"{name!r} is a reserved word")
            if _IDENT_RE.fullmatch(name) is None:
                raise LogicError(f"{name!r} is not a valid proposition name")
            if len(self.props) >= self.max_props:
                raise PropositionLimitError(
                    f"more than {self.max_props} propositions "
                    "(raise the bound to allow this)"
                )
            self._index[name] = len(self.props)
            self.props.append(name)
            self._invalidate()

    def add_axiom(self, formula: Formula) -> None:
        self.axioms.append(formula)
        self._invalidate()

    def _invalidate(self) -> None:
        self._worlds = None
        self._world_pos.clear()
        self._mask_cache.clear()
        self._atom_cache.clear()

    # -- parsing ------------------------------------------------------------

    def parse(self, text: str) -> Formula:
        return parse_formula(text, set(self._index))

    def parse_conditional(self, text: str) -> tuple[Formula, Formula]:
        raw_e, raw_h = split_conditional(text)
        return self.parse(raw_e), self.parse(raw_h)

    def parse_default(self, text: str) -> tuple[Formula, Formula]:
        """Returns (antecedent H, consequent E) of a ``H => E`` rule."""
        raw_h, raw_e = split_default(text)
        return self.parse(raw_h), self.parse(raw_e)

    # -- world structure ----------------------------------------------------

    def evaluate(self, f: Formula, world: int) -> bool:
        if isinstance(f, Prop):
            return bool(world >> self._index[f.name] & 1)
        if isinstance(f, Not):
            return not self.evaluate(f.child, world)
        if isinstance(f, And):
            return self.evaluate(f.left, world) and self.evaluate(f.right, world)
        if isinstance(f, Or):
            return self.evaluate(f.left, world) or self.evaluate(f.right, world)
        if isinstance(f, Implies):
            return (not self.evaluate(f.left, world)) or self.evaluate(f.right, world)
        return f.value

    def worlds(self) -> list[int]:
        """Ascending assignments (bitmasks) satisfying every axiom."""
        if self._worlds is None:
            candidates = range(1 << len(self.props))
            out = []
            for w in candidates:
                if all(self.evaluate(a, w) for a in self.axioms):
                    out.append(w)
            self._worlds = out
            self._world_pos = {w: i for i, w in enumerate(out)}
        return self._worlds

    def world_mask(self, f: Formula) -> int:
        """Bitmask over positions of self.worlds() where the formula holds."""
        cached = self._mask_cache.get(f)
        if cached is not None:
            return cached
        ws = self.worlds()
        full = (1 << len(ws)) - 1
        if isinstance(f, Prop):
            bit = self._index[f.name]
            m = 0
            for i, w in enumerate(ws):
                if w >> bit & 1:
                    m |= 1 << i
        elif isinstance(f, Not):
            m = full ^ self.world_mask(f.child)
        elif isinstance(f, And):
            m = self.world_mask(f.left) & self.world_mask(f.right)
        elif isinstance(f, Or):
            m = self.world_mask(f.left) | self.world_mask(f.right)
        elif isinstance(f, Implies):
            m = (full ^ self.world_mask(f.left)) | self.world_mask(f.right)
        else:
            m = full if f.value else 0
        self._mask_cache[f] = m
        return m

    def possible(self, f: Formula) -> bool:
        """Satisfiable together with the axioms."""
        return self.world_mask(f) != 0

    def implies(self, a: Formula, b: Formula) -> bool:
        """Entailment relative to the axioms: every a-world is a b-world."""
        ma = self.world_mask(a)
        return ma & self.world_mask(b) == ma

    def equivalent(self, a: Formula, b: Formula) -> bool:
        return self.world_mask(a) == self.world_mask(b)

    # -- atoms ----------------------------------------------------------------

    def atoms(self, events: Sequence[Formula]) -> list[Atom]:
        """Signature classes of admissible worlds over the event list.

        Sorted by signature (False before True, leftmost event most
        significant) so the ordering is reproducible run to run.
        """
        key = tuple(events)
        cached = self._atom_cache.get(key)
        if cached is not None:
            return cached
        ws = self.worlds()
        masks = [self.world_mask(e) for e in events]
        groups: dict[tuple[bool, ...], list[int]] = {}
        for i, w in enumerate(ws):
            sig = tuple(bool(m >> i & 1) for m in masks)
            groups.setdefault(sig, []).append(w)
        out = [
            Atom(sig, tuple(wlist)) for sig, wlist in sorted(groups.items())
        ]
        self._atom_cache[key] = out
        return out

    def atom_truth(self, atoms: Sequence[Atom], f: Formula) -> list[bool]:
        """Truth of an arbitrary formula on each atom.

        The formula must be constant across every atom, i.e. lie in the
        algebra the atoms generate; otherwise this raises LogicError.
        """
        m = self.world_mask(f)
        pos = self._world_pos
        out = []
        for atom in atoms:
            vals = {bool(m >> pos[w] & 1) for w in atom.worlds}
            if len(vals) != 1:
                raise LogicError(
                    f"event {format_formula(f)!r} is not in the algebra "
                    "generated by the assessed events"
                )
            out.append(vals.pop())
        return out
