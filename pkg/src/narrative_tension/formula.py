"""Time-indexed propositional formulas.

Atoms are written ``name@t``. The concrete syntax uses ``!``, ``&``, ``|``,
``->`` (right associative) and ``<->`` plus the constants ``true`` and
``false``. Binding strength, tightest first: ``!``, ``&``, ``|``, ``->``,
``<->``.

The printer emits a fully parenthesized canonical form, so that
``parse(str(f)) == f`` for every formula ``f``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator, Mapping

NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")

DEFAULT_MODEL_CAP = 24


class ParseError(ValueError):
    """Raised on malformed formula text. ``pos`` is a 0-based offset."""

    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}" + (f" in {text!r}" if text else ""))


class HorizonError(ValueError):
    """A time index falls outside ``[0, N]``."""


class ModelCapExceeded(ValueError):
    pass


@dataclass(frozen=True, order=True)
class TimedAtom:
    name: str
    t: int

    def __post_init__(self):
        if not NAME_RE.match(self.name):
            raise ValueError(f"invalid variable name {self.name!r}")
        if self.t < 0:
            raise HorizonError(f"negative time index in {self.name}@{self.t}")

    def __str__(self):
        return f"{self.name}@{self.t}"


class Formula:
    """Base class of the formula AST. Subclasses are frozen dataclasses."""

    __slots__ = ()

    def children(self) -> tuple[Formula, ...]:
        return ()

    # operator sugar, handy in tests and scripts
    def __invert__(self) -> Formula:
        return Not(self)

    def __and__(self, other: Formula) -> Formula:
        return And(self, other)

    def __or__(self, other: Formula) -> Formula:
        return Or(self, other)

    def __rshift__(self, other: Formula) -> Formula:
        return Implies(self, other)


@dataclass(frozen=True)
class Top(Formula):
    def __str__(self):
        return "true"


@dataclass(frozen=True)
class Bottom(Formula):
    def __str__(self):
        return "false"


@dataclass(frozen=True)
class Atom(Formula):
    atom: TimedAtom

    def __str__(self):
        return str(self.atom)


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)

    def __str__(self):
        return f"!{self.arg}"


@dataclass(frozen=True)
class _Binary(Formula):
    left: Formula
    right: Formula
    symbol = ""

    def children(self):
        return (self.left, self.right)

    def __str__(self):
        return f"({self.left} {self.symbol} {self.right})"


@dataclass(frozen=True)
class And(_Binary):
    symbol = "&"


@dataclass(frozen=True)
class Or(_Binary):
    symbol = "|"


@dataclass(frozen=True)
class Implies(_Binary):
    symbol = "->"


@dataclass(frozen=True)
class Iff(_Binary):
    symbol = "<->"


TOP = Top()
BOTTOM = Bottom()


def atom(name: str, t: int) -> Atom:
    return Atom(TimedAtom(name, t))


def conj(formulas: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``true``."""
    formulas = list(formulas)
    if not formulas:
        return TOP
    return reduce(And, formulas)


def disj(formulas: Iterable[Formula]) -> Formula:
    formulas = list(formulas)
    if not formulas:
        return BOTTOM
    return reduce(Or, formulas)


def negate(f: Formula) -> Formula:
    """Negation that does not stack ``!!``."""
    return f.arg if isinstance(f, Not) else Not(f)


def subformulas(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(g.children()))


def atoms_of(f: Formula) -> frozenset[TimedAtom]:
    """Timed atoms occurring in ``f``."""
    return frozenset(g.atom for g in subformulas(f) if isinstance(g, Atom))


def names_of(f: Formula) -> frozenset[str]:
    """Variable symbols occurring in ``f``, time stripped."""
    return frozenset(a.name for a in atoms_of(f))


def max_time(f: Formula) -> int:
    """Largest time index in ``f``; -1 for a formula without atoms."""
    return max((a.t for a in atoms_of(f)), default=-1)


def min_time(f: Formula) -> int | None:
    return min((a.t for a in atoms_of(f)), default=None)


def shift(f: Formula, dt: int) -> Formula:
    """Re-index every atom of ``f`` by ``dt`` time steps."""
    if isinstance(f, Atom):
        return Atom(TimedAtom(f.atom.name, f.atom.t + dt))
    if isinstance(f, Not):
        return Not(shift(f.arg, dt))
    if isinstance(f, _Binary):
        return type(f)(shift(f.left, dt), shift(f.right, dt))
    return f


def check_horizon(f: Formula, horizon: int) -> None:
    for a in atoms_of(f):
        if not 0 <= a.t <= horizon:
            raise HorizonError(f"time index of {a} outside [0, {horizon}]")


def evaluate(f: Formula, assignment: Mapping[TimedAtom, bool]) -> bool:
    if isinstance(f, Atom):
        return assignment[f.atom]
    if isinstance(f, Top):
        return True
    if isinstance(f, Bottom):
        return False
    if isinstance(f, Not):
        return not evaluate(f.arg, assignment)
    left = evaluate(f.left, assignment)
    right = evaluate(f.right, assignment)
    if isinstance(f, And):
        return left and right
    if isinstance(f, Or):
        return left or right
    if isinstance(f, Implies):
        return (not left) or right
    if isinstance(f, Iff):
        return left == right
    raise TypeError(f"not a formula: {f!r}")


@dataclass(frozen=True)
class Interpretation:
    """Total truth assignment over a finite vocabulary of timed atoms."""

    values: tuple[tuple[TimedAtom, bool], ...]

    @classmethod
    def from_mapping(cls, mapping: Mapping[TimedAtom, bool]) -> Interpretation:
        return cls(tuple(sorted(mapping.items())))

    @property
    def vocabulary(self) -> frozenset[TimedAtom]:
        return frozenset(a for a, _ in self.values)

    def as_dict(self) -> dict[TimedAtom, bool]:
        return dict(self.values)

    def satisfies(self, f: Formula) -> bool:
        return evaluate(f, self.as_dict())

    def __str__(self):
        return "(" + ", ".join(str(a) if v else f"!{a}" for a, v in self.values) + ")"


def models(f: Formula | Iterable[Formula], vocab: Iterable[TimedAtom],
           cap: int = DEFAULT_MODEL_CAP) -> set[Interpretation]:
    """All interpretations over ``vocab`` satisfying ``f`` (or a set of formulas).

    Brute-force enumeration; only meant for small vocabularies and as a test
    oracle for the SAT-based routines.
    """
    formulas = [f] if isinstance(f, Formula) else list(f)
    vocab = sorted(set(vocab))
    missing = set().union(*(atoms_of(g) for g in formulas)) - set(vocab) if formulas else set()
    if missing:
        raise ValueError(f"atoms {sorted(map(str, missing))} not in vocabulary")
    if len(vocab) > cap:
        raise ModelCapExceeded(f"{len(vocab)} atoms exceeds brute-force cap {cap}")
    result = set()
    for bits in itertools.product((False, True), repeat=len(vocab)):
        assignment = dict(zip(vocab, bits))
        if all(evaluate(g, assignment) for g in formulas):
            result.add(Interpretation(tuple(zip(vocab, bits))))
    return result


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<atom>[A-Za-z][A-Za-z0-9_]*@[0-9]+)"
    r"|(?P<word>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<op><->|->|[!&|()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        value = m.group(kind)
        tokens.append((kind, value, m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, horizon: int | None):
        self.text = text
        self.horizon = horizon
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, value: str | None = None):
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            found = tok[1] or "end of input"
            raise ParseError(f"expected {value!r}, found {found!r}", self.text, tok[2])
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {value!r}", self.text, pos)
        return f

    def iff(self):
        left = self.implies()
        while self.peek()[1] == "<->":
            self.take()
            left = Iff(left, self.implies())
        return left

    def implies(self):
        left = self.disjunction()
        if self.peek()[1] == "->":
            self.take()
            return Implies(left, self.implies())
        return left

    def disjunction(self):
        left = self.conjunction()
        while self.peek()[1] == "|":
            self.take()
            left = Or(left, self.conjunction())
        return left

    def conjunction(self):
        left = self.unary()
        while self.peek()[1] == "&":
            self.take()
            left = And(left, self.unary())
        return left

    def unary(self):
        kind, value, pos = self.peek()
        if value == "!":
            self.take()
            return Not(self.unary())
        if value == "(":
            self.take()
            f = self.iff()
            self.take(")")
            return f
        if kind == "atom":
            self.take()
            name, t = value.split("@")
            t = int(t)
            if self.horizon is not None and t > self.horizon:
                raise HorizonError(
                    f"time index of {value} outside [0, {self.horizon}] at position {pos}")
            return Atom(TimedAtom(name, t))
        if kind == "word":
            self.take()
            if value == "true":
                return TOP
            if value == "false":
                return BOTTOM
            raise ParseError(f"atom {value!r} lacks a time index (write {value}@t)", self.text, pos)
        found = value or "end of input"
        raise ParseError(f"unexpected {found!r}", self.text, pos)


def parse(text: str, horizon: int | None = None) -> Formula:
    """Parse formula text; with ``horizon`` given, indices above it are rejected."""
    return _Parser(text, horizon).parse()
