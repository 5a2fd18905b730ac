"""Lexicographic inference from a stratified default base.

A subbase is lex-preferred when no other subbase consistent with the same
context keeps more rules of the first stratum where the two differ, strata
being scanned from the most specific one. Inference is skeptical: a
conclusion follows when it follows from every lex-preferred subbase.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

from .defaults import DefaultRule, StratifiedBase
from .formula import TOP, Formula
from .sat import Solver

log = logging.getLogger(__name__)

DEFAULT_SUBBASE_CAP = 10_000


class ExplosionLimit(RuntimeError):
    """Too many partial subbases retained during the preferred-subbase search."""


class InconsistentContext(ValueError):
    pass


def lex_compare(a: Iterable[DefaultRule], b: Iterable[DefaultRule], base: StratifiedBase) -> int:
    """1 if ``a`` is lex-preferred to ``b``, -1 if the converse holds, 0 on a tie."""
    va, vb = base.vector(a), base.vector(b)
    return (va > vb) - (va < vb)


@dataclass(frozen=True)
class SubbaseFamily:
    """All lex-preferred subbases for one context; they share ``vector``."""

    subbases: tuple[frozenset[DefaultRule], ...]
    vector: tuple[int, ...]

    def __len__(self):
        return len(self.subbases)

    def __iter__(self):
        return iter(self.subbases)


class LexReasoner:
    """Lex-preferred subbases of ``base`` w.r.t. a fixed context, and the
    skeptical entailment they induce.

    One SAT solver is built per reasoner; each rule's material counterpart is
    encoded once and switched on through an assumption literal.
    """

    def __init__(self, base: StratifiedBase, context: Iterable[Formula],
                 cap: int = DEFAULT_SUBBASE_CAP):
        self.base = base
        self.context = tuple(context)
        self.cap = cap
        self.solver = Solver()
        for f in self.context:
            self.solver.add_formula(f)
        self.selector = {r: self.solver.lit(r.material()) for r in base.rules}
        self.consistent = self.solver.solve()
        self._family: SubbaseFamily | None = None
        self._memo: dict[frozenset[int], bool] = {}
        self._cores: list[frozenset[int]] = []

    def _check(self, lits: frozenset[int]) -> bool:
        known = self._memo.get(lits)
        if known is not None:
            return known
        if any(core <= lits for core in self._cores):
            ok = False
        else:
            ok = self.solver.solve(lits)
            if not ok:
                self._cores.append(self.solver.core)
        self._memo[lits] = ok
        return ok

    @property
    def family(self) -> SubbaseFamily:
        if self._family is None:
            self._family = self._search()
        return self._family

    def _search(self) -> SubbaseFamily:
        if not self.consistent:
            raise InconsistentContext("context is inconsistent; no subbase is consistent with it")
        partials: list[tuple[frozenset[DefaultRule], frozenset[int]]] = [(frozenset(), frozenset())]
        vector = []
        for stratum in self.base.strata:
            options = []
            for chosen, lits in partials:
                usable = [r for r in stratum if self._check(lits | {self.selector[r]})]
                options.append((chosen, lits, usable))
            found = []
            k = max(len(usable) for _, _, usable in options)
            while not found:
                for chosen, lits, usable in options:
                    if len(usable) < k:
                        continue
                    for combo in combinations(usable, k):
                        extended = lits | {self.selector[r] for r in combo}
                        if self._check(extended):
                            found.append((chosen | frozenset(combo), extended))
                            if len(found) > self.cap:
                                raise ExplosionLimit(
                                    f"more than {self.cap} partial subbases retained")
                if not found:
                    k -= 1
            partials = found
            vector.append(k)
        return SubbaseFamily(tuple(chosen for chosen, _ in partials), tuple(vector))

    def entails(self, conclusion: Formula) -> bool:
        """Skeptical consequence; false whenever the context is inconsistent."""
        if not self.consistent:
            return False
        neg = -self.solver.lit(conclusion)
        for subbase in self.family:
            if self.solver.solve([self.selector[r] for r in subbase] + [neg]):
                return False
        return True


def lex_preferred_subbases(base: StratifiedBase, context: Iterable[Formula],
                           cap: int = DEFAULT_SUBBASE_CAP) -> SubbaseFamily:
    return LexReasoner(base, context, cap).family


def lex_entails(base: StratifiedBase, premise: Formula, conclusion: Formula,
                cap: int = DEFAULT_SUBBASE_CAP) -> bool:
    """``premise |=_base conclusion`` under lexicographic inference."""
    return LexReasoner(base, [premise], cap).entails(conclusion)


def state_reasoner(state, premise: Formula = TOP) -> LexReasoner:
    """Reasoner for an epistemic state with context ``{premise} | F | B_L``."""
    context: Sequence[Formula] = (premise, *state.facts, *state.strict)
    return LexReasoner(state.base, context, state.subbase_cap)


def entails_B(state, premise: Formula, conclusion: Formula) -> bool:
    """Inference relation of an epistemic state.

    False when facts and strict rules are jointly inconsistent (the relation
    is undefined there) or when the premise contradicts them.
    """
    if not state.facts_consistent:
        log.warning("facts and strict rules are inconsistent; every query answers False")
        return False
    if premise == TOP:
        return state.beliefs.entails(conclusion)
    return state_reasoner(state, premise).entails(conclusion)
