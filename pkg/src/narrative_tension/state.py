from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable

from .defaults import DefaultRule, InconsistentDefaultBase, StratifiedBase, stratify, unique_rules
from .formula import Formula, check_horizon, max_time
from .lex import DEFAULT_SUBBASE_CAP, LexReasoner, state_reasoner
from .sat import is_consistent


def _dedupe(items: Iterable) -> tuple:
    return tuple(dict.fromkeys(items))


@dataclass(frozen=True)
class EpistemicState:
    """A listener's beliefs: facts, strict rules and default rules over ``[0, horizon]``.

    Derived data (the System Z strata, the lex reasoner of the state itself)
    is computed lazily and cached on the instance.
    """

    facts: tuple[Formula, ...]
    strict: tuple[Formula, ...]
    defaults: tuple[DefaultRule, ...]
    horizon: int
    subbase_cap: int = field(default=DEFAULT_SUBBASE_CAP, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "facts", _dedupe(self.facts))
        object.__setattr__(self, "strict", _dedupe(self.strict))
        object.__setattr__(self, "defaults", unique_rules(self.defaults))
        if self.horizon < 0:
            raise ValueError("horizon must be non-negative")
        for f in self.facts + self.strict:
            check_horizon(f, self.horizon)
        for r in self.defaults:
            check_horizon(r.material(), self.horizon)

    @cached_property
    def base(self) -> StratifiedBase:
        """System Z strata of the default rules; raises InconsistentDefaultBase."""
        return stratify(self.defaults)

    @cached_property
    def facts_consistent(self) -> bool:
        return is_consistent(self.facts + self.strict)

    @cached_property
    def defaults_consistent(self) -> bool:
        try:
            self.base
        except InconsistentDefaultBase:
            return False
        return True

    @property
    def well_formed(self) -> bool:
        return self.facts_consistent and self.defaults_consistent

    @cached_property
    def beliefs(self) -> LexReasoner:
        """Reasoner for the context F | B_L (premise ``true``)."""
        return state_reasoner(self)

    def with_facts(self, *facts: Formula) -> EpistemicState:
        return self.with_facts_replaced(self.facts + facts)

    def with_facts_replaced(self, facts: Iterable[Formula]) -> EpistemicState:
        new = replace(self, facts=tuple(facts))
        if "base" in self.__dict__:
            # same defaults, same strata
            new.__dict__["base"] = self.base
        return new

    def until(self, t: int) -> EpistemicState:
        """Keep only the formulas and rules whose atoms are all indexed <= t.

        ``t = -1`` keeps only time-free formulas. When nothing is dropped the
        state itself is returned, cached strata and beliefs included.
        """
        if t >= self.horizon:
            return self
        facts = tuple(f for f in self.facts if max_time(f) <= t)
        strict = tuple(f for f in self.strict if max_time(f) <= t)
        defaults = tuple(r for r in self.defaults if max_time(r.material()) <= t)
        if (len(facts), len(strict), len(defaults)) == (
                len(self.facts), len(self.strict), len(self.defaults)):
            return self
        return replace(self, facts=facts, strict=strict, defaults=defaults)
