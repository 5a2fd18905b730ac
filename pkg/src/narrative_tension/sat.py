"""CDCL SAT solving over Tseitin-encoded formulas.

Literals are non-zero ints in DIMACS style. ``Solver.lit`` maps a formula to
a literal equivalent to it (full Tseitin definitions, so any formula can later
be assumed true or false). Solving under assumptions leaves the clause
database untouched, which lets one solver answer many consistency questions
about subsets of a rule base. When the assumptions are contradictory, the
responsible subset is available from ``Solver.core``.
"""

from __future__ import annotations

import heapq
from typing import Iterable

from .formula import (And, Atom, Bottom, Formula, Iff, Implies, Not, Or, TimedAtom, Top,
                      negate)


class Solver:
    def __init__(self):
        self._nvars = 0
        self._value = [0]           # per var: 1 true, -1 false, 0 unassigned
        self._level = [0]
        self._reason: list[list[int] | None] = [None]
        self._activity = [0.0]
        self._phase = [False]
        self._watches: dict[int, list[list[int]]] = {}
        self._trail: list[int] = []
        self._trail_lim: list[int] = []
        self._qhead = 0
        self._heap: list[tuple[float, int]] = []
        self._var_inc = 1.0
        self._ok = True
        self._cache: dict[Formula, int] = {}
        self._atom_vars: dict[TimedAtom, int] = {}
        self._true: int | None = None
        self._model: list[int] | None = None
        self.core: frozenset[int] = frozenset()
        self.conflicts = 0

    # -- variables and clauses ------------------------------------------

    def new_var(self) -> int:
        self._nvars += 1
        v = self._nvars
        self._value.append(0)
        self._level.append(0)
        self._reason.append(None)
        self._activity.append(0.0)
        self._phase.append(False)
        self._watches[v] = []
        self._watches[-v] = []
        heapq.heappush(self._heap, (0.0, v))
        return v

    def _lit_value(self, lit: int) -> int:
        v = self._value[abs(lit)]
        return v if lit > 0 else -v

    def add_clause(self, lits: Iterable[int]) -> None:
        if not self._ok:
            return
        assert not self._trail_lim, "clauses may only be added at decision level 0"
        clause = []
        for lit in dict.fromkeys(lits):
            if -lit in clause:
                return
            val = self._lit_value(lit)
            if val == 1:
                return
            if val == 0:
                clause.append(lit)
        if not clause:
            self._ok = False
        elif len(clause) == 1:
            self._enqueue(clause[0], None)
            if self._propagate() is not None:
                self._ok = False
        else:
            self._watches[clause[0]].append(clause)
            self._watches[clause[1]].append(clause)

    def atom_var(self, a: TimedAtom) -> int:
        v = self._atom_vars.get(a)
        if v is None:
            v = self._atom_vars[a] = self.new_var()
        return v

    def lit(self, f: Formula) -> int:
        """A literal constrained to be equivalent to ``f``."""
        cached = self._cache.get(f)
        if cached is not None:
            return cached
        if isinstance(f, Atom):
            result = self.atom_var(f.atom)
        elif isinstance(f, Top):
            if self._true is None:
                self._true = self.new_var()
                self.add_clause([self._true])
            result = self._true
        elif isinstance(f, Bottom):
            result = -self.lit(Top())
        elif isinstance(f, Not):
            result = -self.lit(f.arg)
        else:
            a = self.lit(f.left)
            b = self.lit(f.right)
            if isinstance(f, Implies):
                a = -a
            v = self.new_var()
            if isinstance(f, And):
                self.add_clause([-v, a])
                self.add_clause([-v, b])
                self.add_clause([v, -a, -b])
            elif isinstance(f, (Or, Implies)):
                self.add_clause([-v, a, b])
                self.add_clause([v, -a])
                self.add_clause([v, -b])
            elif isinstance(f, Iff):
                self.add_clause([-v, -a, b])
                self.add_clause([-v, a, -b])
                self.add_clause([v, a, b])
                self.add_clause([v, -a, -b])
            else:
                raise TypeError(f"not a formula: {f!r}")
            result = v
        self._cache[f] = result
        return result

    def add_formula(self, f: Formula) -> None:
        """Assert ``f``; top-level conjunctions and disjunctions become clauses directly."""
        if isinstance(f, And):
            self.add_formula(f.left)
            self.add_formula(f.right)
        elif isinstance(f, Or):
            self.add_clause([self.lit(f.left), self.lit(f.right)])
        elif isinstance(f, Implies):
            self.add_clause([self.lit(negate(f.left)), self.lit(f.right)])
        else:
            self.add_clause([self.lit(f)])

    # -- search ------------------------------------------------------------

    def _enqueue(self, lit: int, reason: list[int] | None) -> None:
        v = abs(lit)
        self._value[v] = 1 if lit > 0 else -1
        self._level[v] = len(self._trail_lim)
        self._reason[v] = reason
        self._trail.append(lit)

    def _propagate(self) -> list[int] | None:
        value = self._value
        watches = self._watches
        while self._qhead < len(self._trail):
            lit = self._trail[self._qhead]
            self._qhead += 1
            false_lit = -lit
            ws = watches[false_lit]
            kept = []
            i = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                fv = value[first] if first > 0 else -value[-first]
                if fv == 1:
                    kept.append(c)
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if (value[lk] if lk > 0 else -value[-lk]) != -1:
                        c[1], c[k] = lk, c[1]
                        watches[lk].append(c)
                        break
                else:
                    kept.append(c)
                    if fv == -1:
                        kept.extend(ws[i:])
                        ws[:] = kept
                        self._qhead = len(self._trail)
                        return c
                    self._enqueue(first, c)
            ws[:] = kept
        return None

    def _bump(self, v: int) -> None:
        self._activity[v] += self._var_inc
        if self._activity[v] > 1e100:
            for u in range(1, self._nvars + 1):
                self._activity[u] *= 1e-100
            self._var_inc *= 1e-100
            self._heap = [(-self._activity[u], u) for u in range(1, self._nvars + 1)
                          if self._value[u] == 0]
            heapq.heapify(self._heap)
        elif self._value[v] == 0:
            heapq.heappush(self._heap, (-self._activity[v], v))

    def _analyze(self, confl: list[int]) -> tuple[list[int], int]:
        level = self._level
        current = len(self._trail_lim)
        seen = set()
        learnt = [0]
        counter = 0
        p = 0
        idx = len(self._trail) - 1
        clause = confl
        while True:
            for q in clause:
                v = abs(q)
                if v == abs(p) or v in seen or level[v] == 0:
                    continue
                seen.add(v)
                self._bump(v)
                if level[v] >= current:
                    counter += 1
                else:
                    learnt.append(q)
            while abs(self._trail[idx]) not in seen:
                idx -= 1
            p = self._trail[idx]
            idx -= 1
            counter -= 1
            if counter == 0:
                break
            clause = self._reason[abs(p)]
        learnt[0] = -p
        if len(learnt) == 1:
            return learnt, 0
        best = max(range(1, len(learnt)), key=lambda j: level[abs(learnt[j])])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, level[abs(learnt[1])]

    def _analyze_final(self, p: int) -> frozenset[int]:
        """Assumptions responsible for ``p`` (itself an assumption) being false."""
        core = {p}
        if not self._trail_lim:
            return frozenset(core)
        seen = {abs(p)}
        for lit in reversed(self._trail[self._trail_lim[0]:]):
            v = abs(lit)
            if v not in seen:
                continue
            reason = self._reason[v]
            if reason is None:
                core.add(lit)
            else:
                for q in reason:
                    if self._level[abs(q)] > 0:
                        seen.add(abs(q))
        return frozenset(core)

    def _cancel_until(self, lvl: int) -> None:
        if len(self._trail_lim) <= lvl:
            return
        start = self._trail_lim[lvl]
        for lit in self._trail[start:]:
            v = abs(lit)
            self._phase[v] = lit > 0
            self._value[v] = 0
            self._reason[v] = None
            heapq.heappush(self._heap, (-self._activity[v], v))
        del self._trail[start:]
        del self._trail_lim[lvl:]
        self._qhead = len(self._trail)

    def _pick_branch(self) -> int:
        heap = self._heap
        while heap:
            neg_act, v = heapq.heappop(heap)
            if self._value[v] == 0 and -neg_act == self._activity[v]:
                return v if self._phase[v] else -v
        for v in range(1, self._nvars + 1):
            if self._value[v] == 0:
                return v if self._phase[v] else -v
        return 0

    def solve(self, assumptions: Iterable[int] = ()) -> bool:
        """Satisfiability of the clause database under ``assumptions``."""
        assumptions = list(dict.fromkeys(assumptions))
        self._model = None
        self.core = frozenset()
        if not self._ok:
            return False
        if self._propagate() is not None:
            self._ok = False
            return False
        restart_limit = 100
        conflicts_here = 0
        try:
            while True:
                confl = self._propagate()
                if confl is not None:
                    self.conflicts += 1
                    conflicts_here += 1
                    if not self._trail_lim:
                        self._ok = False
                        return False
                    learnt, back = self._analyze(confl)
                    self._cancel_until(back)
                    if len(learnt) == 1:
                        self._enqueue(learnt[0], None)
                    else:
                        self._watches[learnt[0]].append(learnt)
                        self._watches[learnt[1]].append(learnt)
                        self._enqueue(learnt[0], learnt)
                    self._var_inc /= 0.95
                    continue
                if conflicts_here >= restart_limit:
                    conflicts_here = 0
                    restart_limit = int(restart_limit * 1.5)
                    self._cancel_until(0)
                    continue
                lit = 0
                while len(self._trail_lim) < len(assumptions):
                    a = assumptions[len(self._trail_lim)]
                    val = self._lit_value(a)
                    if val == 1:
                        self._trail_lim.append(len(self._trail))
                    elif val == -1:
                        self.core = self._analyze_final(a)
                        return False
                    else:
                        lit = a
                        break
                if lit == 0:
                    lit = self._pick_branch()
                    if lit == 0:
                        self._model = self._value[:]
                        return True
                self._trail_lim.append(len(self._trail))
                self._enqueue(lit, None)
        finally:
            self._cancel_until(0)

    def value(self, f: Formula) -> bool:
        """Truth value of an already-encoded formula in the last model."""
        if self._model is None:
            raise RuntimeError("no model available")
        lit = self._cache[f]
        v = self._model[abs(lit)]
        return (v > 0) == (lit > 0)

    def model(self) -> dict[TimedAtom, bool]:
        if self._model is None:
            raise RuntimeError("no model available")
        return {a: self._model[v] > 0 for a, v in self._atom_vars.items()}


def is_consistent(formulas: Iterable[Formula]) -> bool:
    """Whether the conjunction of ``formulas`` is satisfiable."""
    solver = Solver()
    for f in formulas:
        solver.add_formula(f)
    return solver.solve()


def entails(premises: Iterable[Formula], conclusion: Formula) -> bool:
    """Classical entailment: premises plus the negated conclusion is unsatisfiable."""
    solver = Solver()
    for f in premises:
        solver.add_formula(f)
    return not solver.solve([-solver.lit(conclusion)])
