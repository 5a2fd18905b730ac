"""The listener model: awareness, curiosity, suspense and surprise."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .formula import (TOP, Atom, Formula, HorizonError, Not, TimedAtom, check_horizon, conj, names_of,
                      shift)
from .lex import entails_B
from .sat import Solver
from .state import EpistemicState

__all__ = [
    "EpistemicState", "FluentQuery", "SuspenseWitness", "WitnessSearchConfig", "aware_names",
    "aware_of", "curious", "iter_suspense_witnesses", "surprised", "suspense", "until",
]


def until(state: EpistemicState, t: int) -> EpistemicState:
    return state.until(t)


def aware_names(state: EpistemicState) -> frozenset[str]:
    """Variable symbols the agent is aware of.

    Names occurring in facts seed the set; any strict rule or material default
    mentioning an aware name makes all of its names aware, up to a fixpoint.
    """
    aware = set()
    for f in state.facts:
        aware |= names_of(f)
    pool = [names_of(f) for f in state.strict]
    pool += [names_of(r.material()) for r in state.defaults]
    pool = [ns for ns in pool if ns]
    changed = bool(aware)
    while changed:
        changed = False
        rest = []
        for ns in pool:
            if ns & aware:
                if not ns <= aware:
                    aware |= ns
                    changed = True
            else:
                rest.append(ns)
        pool = rest
    return frozenset(aware)


def aware_of(state: EpistemicState, phi: Formula) -> bool:
    return names_of(phi) <= aware_names(state)


def curious(state: EpistemicState, phi: Formula, t: int) -> bool:
    """Aware of ``phi`` at ``t`` without being able to infer it or its negation,
    everything judged from the state restricted to time ``t``."""
    restricted = state.until(t)
    if not restricted.well_formed or not aware_of(restricted, phi):
        return False
    beliefs = restricted.beliefs
    return not beliefs.entails(phi) and not beliefs.entails(Not(phi))


@dataclass(frozen=True)
class FluentQuery:
    """A formula with a movable time slot.

    ``template`` is written with offsets relative to the slot, e.g. ``empty@0``
    for the fluent ``empty`` itself; ``instantiate(t)`` shifts it to ``t``.
    """

    template: Formula

    @classmethod
    def of(cls, name: str) -> FluentQuery:
        return cls(Atom(TimedAtom(name, 0)))

    def instantiate(self, t: int, horizon: int | None = None) -> Formula:
        f = shift(self.template, t)
        if horizon is not None:
            check_horizon(f, horizon)
        return f

    def __str__(self):
        return str(self.template)


@dataclass(frozen=True)
class WitnessSearchConfig:
    """Search space for the future disclosure of a suspense witness.

    Candidates are conjunctions of at most ``max_size`` literals over atoms
    ``v@t'`` with ``v`` aware at ``t`` and ``t < t' <= N``. They are tried by
    largest time index, then size, then printed form. ``report_all`` asks
    reports to list every admissible witness instead of the first one.
    """

    max_size: int = 2
    report_all: bool = False

    def candidates(self, names: frozenset[str], t: int, horizon: int) -> list[Formula]:
        atoms = [TimedAtom(n, tt) for tt in range(t + 1, horizon + 1) for n in sorted(names)]
        found = []
        for size in range(1, self.max_size + 1):
            for group in itertools.combinations(atoms, size):
                group = sorted(group, key=lambda a: (a.t, a.name))
                for signs in itertools.product((True, False), repeat=size):
                    lits = [Atom(a) if s else Not(Atom(a)) for a, s in zip(group, signs)]
                    psi = conj(lits)
                    found.append(((max(a.t for a in group), size, str(psi)), psi))
        found.sort(key=lambda item: item[0])
        return [psi for _, psi in found]


@dataclass(frozen=True)
class SuspenseWitness:
    psi: Formula
    t_prime: int
    settled: Formula
    polarity: bool

    def as_dict(self) -> dict:
        return {"psi": str(self.psi), "t_prime": self.t_prime,
                "settled": str(self.settled), "polarity": self.polarity}


def iter_suspense_witnesses(state: EpistemicState, query: FluentQuery, t: int,
                            search: WitnessSearchConfig = WitnessSearchConfig()
                            ) -> Iterator[SuspenseWitness]:
    """Every admissible witness in search order; nothing when not curious at ``t``."""
    horizon = state.horizon
    try:
        current = query.instantiate(t, horizon)
    except HorizonError:
        return
    if not curious(state, current, t):
        return
    restricted = state.until(t)
    solver = Solver()
    for f in restricted.facts + state.strict:
        solver.add_formula(f)
    for psi in search.candidates(aware_names(restricted), t, horizon):
        if not solver.solve([solver.lit(psi)]):
            continue
        disclosed = state.with_facts(psi)
        if not disclosed.facts_consistent:
            continue
        for t_prime in range(t + 1, horizon + 1):
            try:
                target = query.instantiate(t_prime, horizon)
            except HorizonError:
                continue
            if disclosed.beliefs.entails(target):
                yield SuspenseWitness(psi, t_prime, target, True)
                break
            if disclosed.beliefs.entails(Not(target)):
                yield SuspenseWitness(psi, t_prime, Not(target), False)
                break


def suspense(state: EpistemicState, query: FluentQuery, t: int,
             search: WitnessSearchConfig = WitnessSearchConfig()) -> SuspenseWitness | None:
    """First witness of suspense about ``query`` at ``t``, or None."""
    return next(iter_suspense_witnesses(state, query, t, search), None)


def surprised(state: EpistemicState, phi: Formula, t: int) -> bool:
    """``phi`` is a fact known by ``t``, the state up to ``t`` is consistent, and
    the facts known before ``t`` (with rules up to ``t``) predicted ``!phi``."""
    if t < 0:
        raise ValueError("surprise needs t >= 0")
    restricted = state.until(t)
    if phi not in restricted.facts or not restricted.well_formed:
        return False
    prior = restricted.with_facts_replaced(state.until(t - 1).facts)
    return entails_B(prior, TOP, Not(phi))
