"""Default rules, their material counterparts, tolerance and System Z strata."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

from .formula import Bottom, Formula, Not, Or, atom, negate
from .sat import Solver

log = logging.getLogger(__name__)


class InconsistentDefaultBase(ValueError):
    """No remaining rule is tolerated by the others; the base has no Z-ordering."""

    def __init__(self, remaining: Sequence[DefaultRule]):
        self.remaining = tuple(remaining)
        shown = ", ".join(str(r) for r in self.remaining[:5])
        more = "" if len(self.remaining) <= 5 else f", ... ({len(self.remaining)} rules)"
        super().__init__(f"default base cannot be stratified; stuck on {shown}{more}")


@dataclass(frozen=True)
class DefaultRule:
    """``antecedent ~> consequent``: when the antecedent holds, the consequent
    is more plausible than its negation."""

    antecedent: Formula
    consequent: Formula

    def __post_init__(self):
        if isinstance(self.antecedent, Bottom):
            raise ValueError("a default rule with antecedent 'false' can never fire")

    def material(self) -> Formula:
        """The material counterpart ``!antecedent | consequent``."""
        return Or(negate(self.antecedent), self.consequent)

    def __str__(self):
        return f"{self.antecedent} ~> {self.consequent}"


def strict(rules: Iterable[DefaultRule]) -> list[Formula]:
    """Material counterparts of ``rules``, in input order."""
    return [r.material() for r in rules]


def unique_rules(rules: Iterable[DefaultRule]) -> tuple[DefaultRule, ...]:
    """Drop structural duplicates, keeping first occurrences."""
    seen = {}
    for r in rules:
        if r in seen:
            log.warning("duplicate default rule collapsed: %s", r)
            continue
        seen[r] = None
    return tuple(seen)


def tolerated(rule: DefaultRule, others: Iterable[DefaultRule]) -> bool:
    """Whether ``rule`` can fire (antecedent and consequent true) while every
    rule of ``others`` is satisfied materially."""
    solver = Solver()
    solver.add_formula(rule.antecedent)
    solver.add_formula(rule.consequent)
    for r in others:
        solver.add_formula(r.material())
    return solver.solve()


@dataclass(frozen=True)
class StratifiedBase:
    """Strata ordered from the most specific (index 0) to the least specific."""

    strata: tuple[tuple[DefaultRule, ...], ...]

    @property
    def n(self) -> int:
        return len(self.strata)

    @property
    def rules(self) -> tuple[DefaultRule, ...]:
        return tuple(r for stratum in self.strata for r in stratum)

    def rank(self, rule: DefaultRule) -> int:
        """1-based stratum index of ``rule``."""
        for i, stratum in enumerate(self.strata, start=1):
            if rule in stratum:
                return i
        raise KeyError(rule)

    def vector(self, subbase: Iterable[DefaultRule]) -> tuple[int, ...]:
        """Per-stratum cardinalities of ``subbase``."""
        chosen = set(subbase)
        return tuple(sum(1 for r in stratum if r in chosen) for stratum in self.strata)

    def check(self) -> bool:
        """Re-verify the tolerance invariant of every stratum.

        A rule of stratum ``i`` must be tolerated by the rules of strata
        ``1..i``: those were all still present when its layer was peeled.
        """
        for i, stratum in enumerate(self.strata):
            below = [r for s in self.strata[:i + 1] for r in s]
            for r in stratum:
                if not tolerated(r, [o for o in below if o != r]):
                    return False
        return True


def stratify(rules: Iterable[DefaultRule]) -> StratifiedBase:
    """System Z partition of a default base.

    Layers tolerated by all remaining rules are peeled off repeatedly; the
    first layer peeled is the least specific, so the result is reversed.
    Within a stratum rules keep their input order.
    """
    remaining = list(unique_rules(rules))
    layers = []
    while remaining:
        # a single solver holds every remaining material rule behind a selector
        solver = Solver()
        selectors = [solver.lit(r.material()) for r in remaining]
        layer = []
        for i, r in enumerate(remaining):
            assume = [solver.lit(r.antecedent), solver.lit(r.consequent)]
            assume += [s for j, s in enumerate(selectors) if j != i]
            if solver.solve(assume):
                layer.append(r)
        if not layer:
            raise InconsistentDefaultBase(remaining)
        layers.append(tuple(layer))
        chosen = set(layer)
        remaining = [r for r in remaining if r not in chosen]
    return StratifiedBase(tuple(reversed(layers)))


def persistence_rules(name: str, horizon: int) -> list[DefaultRule]:
    """Frame defaults ``v@t ~> v@t+1`` and ``!v@t ~> !v@t+1`` for t < horizon."""
    rules = []
    for t in range(horizon):
        rules.append(DefaultRule(atom(name, t), atom(name, t + 1)))
        rules.append(DefaultRule(Not(atom(name, t)), Not(atom(name, t + 1))))
    return rules

