"""Causal graphs and emotion intensities."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .agent import curious, surprised
from .formula import Atom, Formula, TimedAtom, atoms_of
from .sat import Solver
from .state import EpistemicState


class NotCurious(ValueError):
    pass


class NotSurprised(ValueError):
    pass


class NoViolatedRule(ValueError):
    """A surprise that violates no default rule has no intensity."""


@dataclass(frozen=True)
class EdgeFilterConfig:
    """Which strict-rule edges enter the causal graph.

    ``non_vacuous`` drops premises inconsistent with the facts and targets the
    facts entail on their own. ``forward_only`` keeps strict edges that go
    forward in time. Turning both off gives the unfiltered construction.
    """

    strict_edges: bool = True
    non_vacuous: bool = True
    forward_only: bool = True


RAW_EDGES = EdgeFilterConfig(non_vacuous=False, forward_only=False)


def _label(a: TimedAtom) -> str:
    return f"{a.name}_{a.t}"


@dataclass(frozen=True)
class CausalGraph:
    nodes: frozenset[TimedAtom]
    edges: frozenset[tuple[TimedAtom, TimedAtom]] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "edges", frozenset(e for e in self.edges if e[0] != e[1]))
        stray = {a for e in self.edges for a in e} - self.nodes
        if stray:
            raise ValueError(f"edges mention unknown nodes {sorted(map(str, stray))}")

    def with_edges(self, edges: Iterable[tuple[TimedAtom, TimedAtom]]) -> CausalGraph:
        edges = set(edges)
        nodes = self.nodes | {a for e in edges for a in e}
        return CausalGraph(nodes, self.edges | edges)

    def degree(self, v: TimedAtom) -> int:
        return degree(self, v)

    def to_dot(self, name: str = "causal") -> str:
        lines = [f"digraph {name} {{"]
        for label in sorted(_label(a) for a in self.nodes):
            lines.append(f'  "{label}";')
        for src, dst in sorted((_label(a), _label(b)) for a, b in self.edges):
            lines.append(f'  "{src}" -> "{dst}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def degree(graph: CausalGraph, v: TimedAtom) -> int:
    """In-degree plus out-degree of ``v``."""
    if v not in graph.nodes:
        raise KeyError(f"{v} is not a node of the graph")
    return sum((a == v) + (b == v) for a, b in graph.edges)


def rule_edges(state: EpistemicState) -> set[tuple[TimedAtom, TimedAtom]]:
    edges = set()
    for r in state.defaults:
        for a in atoms_of(r.antecedent):
            for b in atoms_of(r.consequent):
                edges.add((a, b))
    return edges


def causal_graph(state: EpistemicState, config: EdgeFilterConfig = EdgeFilterConfig()) -> CausalGraph:
    """Graph over the timed atoms of the state.

    Every default rule links each antecedent atom to each consequent atom.
    Strict edges link ``v_t`` to ``w_t'`` when some literal on ``v_t``, added
    to the facts and strict rules, classically entails a literal on ``w_t'``.
    """
    nodes = set()
    for f in state.facts + state.strict:
        nodes |= atoms_of(f)
    for r in state.defaults:
        nodes |= atoms_of(r.material())
    edges = rule_edges(state)
    if config.strict_edges:
        edges |= _strict_edges(state, sorted(nodes), config)
    return CausalGraph(frozenset(nodes), frozenset(edges))


def _strict_edges(state: EpistemicState, nodes: list[TimedAtom], config: EdgeFilterConfig):
    solver = Solver()
    for f in state.facts + state.strict:
        solver.add_formula(f)
    lits = {a: solver.lit(Atom(a)) for a in nodes}
    already = set()
    if config.non_vacuous:
        for a in nodes:
            for lit in (lits[a], -lits[a]):
                if not solver.solve([-lit]):
                    already.add(lit)
    edges = set()
    for src in nodes:
        for premise in (lits[src], -lits[src]):
            if config.non_vacuous and not solver.solve([premise]):
                continue
            for dst in nodes:
                if dst == src or (src, dst) in edges:
                    continue
                if config.forward_only and not src.t < dst.t:
                    continue
                for target in (lits[dst], -lits[dst]):
                    if target in already:
                        continue
                    if not solver.solve([premise, -target]):
                        edges.add((src, dst))
                        break
    return edges


def curiosity_intensity(state: EpistemicState, phi: Formula, t: int,
                        graph: CausalGraph | None = None, require_curious: bool = True) -> int:
    """Sum of causal-graph degrees of the atoms of ``phi``.

    The graph defaults to that of the whole state, not of its restriction to
    ``t``. Atoms absent from the graph contribute 0.
    """
    if require_curious and not curious(state, phi, t):
        raise NotCurious(f"not curious about {phi} at {t}")
    if graph is None:
        graph = causal_graph(state)
    return sum(degree(graph, a) for a in atoms_of(phi) if a in graph.nodes)


@dataclass(frozen=True)
class SuspenseProfile:
    """Trapezoid suspense curve: rise over ``alpha``, plateau ``beta`` at
    ``smax``, descent over ``gamma``."""

    alpha: float
    beta: float
    gamma: float
    smax: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.gamma > 0 and self.beta >= 0 and self.smax >= 0):
            raise ValueError(f"invalid suspense profile {self}")


def suspense_intensity(profile: SuspenseProfile, c: float, t0: float, t: float) -> float:
    """Suspense felt at ``t`` when curiosity of intensity ``c`` started at ``t0``."""
    if c < 0:
        raise ValueError("curiosity intensity must be non-negative")
    a, b, g, smax = profile.alpha, profile.beta, profile.gamma, profile.smax
    if t < t0:
        return 0.0
    if t <= t0 + a:
        return (smax - c) / a * (t - t0) + c
    if t <= t0 + a + b:
        return float(smax)
    if t <= t0 + a + b + g:
        return -smax / g * (t - t0 - a - b) + smax
    return 0.0


def violated_rules(state: EpistemicState, phi: Formula):
    """Yield ``(stratum index, rule)`` for rules whose antecedent, together with
    ``phi`` and the facts, consistently entails the negated consequent."""
    solver = Solver()
    for f in state.facts + state.strict:
        solver.add_formula(f)
    p = solver.lit(phi)
    for i, stratum in enumerate(state.base.strata, start=1):
        for r in stratum:
            premise = [p, solver.lit(r.antecedent)]
            if solver.solve(premise) and not solver.solve(premise + [solver.lit(r.consequent)]):
                yield i, r


def surprise_intensity(state: EpistemicState, phi: Formula, t: int) -> int:
    """``n - i`` for the most specific stratum ``i`` holding a rule ``phi`` violates."""
    if not surprised(state, phi, t):
        raise NotSurprised(f"not surprised about {phi} at {t}")
    for i, _ in violated_rules(state, phi):
        return state.base.n - i
    raise NoViolatedRule(f"no default rule is violated by {phi}")


__all__ = [
    "CausalGraph", "EdgeFilterConfig", "NoViolatedRule", "NotCurious", "NotSurprised",
    "RAW_EDGES", "SuspenseProfile", "causal_graph", "curiosity_intensity", "degree",
    "rule_edges", "surprise_intensity", "suspense_intensity", "violated_rules",
]
