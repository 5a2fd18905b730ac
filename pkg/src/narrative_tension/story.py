"""Story files: a knowledge base plus a disclosure schedule and queries.

A story is a YAML document::

    horizon: 3
    variables: [box, A, E, C, empty, visible]
    persist: [box, empty, visible]          # frame defaults for these fluents
    defaults:
      - rule: "(A@t | E@t) & !box@t ~> box@t+1"
        over: 0..2                          # expands the @t / @t+k template
    strict:
      - cwa: box                            # (!box@t & box@t+1) -> trigger
        trigger: "A@t | E@t"
      - "A@0 -> !E@0"
    facts:
      - {formula: "box@1", reveal: 1}       # learned at step 1
    queries:
      - {kind: curiosity, formula: "A@0"}
      - {kind: suspense, formula: "empty@t"}
      - {kind: surprise, formula: "box@1"}
    profile: {alpha: 2, beta: 1, gamma: 1, smax: 10}
    search: {max_size: 2}
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

import yaml

from .agent import (FluentQuery, WitnessSearchConfig, aware_names, curious,
                    iter_suspense_witnesses, surprised)
from .defaults import DefaultRule, InconsistentDefaultBase, persistence_rules, unique_rules
from .formula import (TOP, And, Formula, HorizonError, Implies, Not, ParseError, atom, atoms_of,
                      names_of, parse)
from .lex import ExplosionLimit, entails_B
from .metrics import (NoViolatedRule, SuspenseProfile, causal_graph, curiosity_intensity,
                      suspense_intensity, violated_rules)
from .state import EpistemicState

SCHEMA_VERSION = 1
QUERY_KINDS = ("curiosity", "suspense", "surprise")
DEFAULT_PROFILE = SuspenseProfile(alpha=2, beta=1, gamma=1, smax=10)
ENGINE_ERRORS = (InconsistentDefaultBase, ExplosionLimit)

_SLOT_RE = re.compile(r"@t(?:\s*([+-])\s*(\d+))?(?![A-Za-z0-9_])")
_RANGE_RE = re.compile(r"^\s*(\d+)\s*\.\.\s*(\d+)\s*$")


class StoryError(ValueError):
    """Invalid story file; carries the offending field and source line."""

    def __init__(self, message: str, field: str = "", line: int | None = None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field:
            where.append(field)
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


@dataclass(frozen=True)
class Query:
    kind: str
    formula: Formula
    text: str
    fluent: FluentQuery | None = None

    @property
    def label(self) -> str:
        return f"{self.kind}:{self.text}"


@dataclass(frozen=True)
class Fact:
    formula: Formula
    reveal: int


@dataclass(frozen=True)
class StoryFile:
    horizon: int
    variables: tuple[str, ...]
    defaults: tuple[DefaultRule, ...]
    strict: tuple[Formula, ...]
    facts: tuple[Fact, ...] = ()
    queries: tuple[Query, ...] = ()
    persist: tuple[str, ...] = ()
    profile: SuspenseProfile = DEFAULT_PROFILE
    search: WitnessSearchConfig = field(default_factory=WitnessSearchConfig)
    name: str = "story"

    def state(self, step: int | None = None) -> EpistemicState:
        """Epistemic state once every fact revealed at or before ``step`` is known."""
        if step is None:
            step = self.horizon
        facts = tuple(f.formula for f in self.facts if f.reveal <= step)
        return EpistemicState(facts, self.strict, self.defaults, self.horizon)


# ---------------------------------------------------------------------------
# loading


def _plain(node: yaml.Node, path: str, lines: dict[str, int]) -> Any:
    """Convert a composed YAML node to Python data, recording source lines by path."""
    lines[path] = node.start_mark.line + 1
    if isinstance(node, yaml.MappingNode):
        out = {}
        for key_node, value_node in node.value:
            key = key_node.value
            out[key] = _plain(value_node, f"{path}.{key}" if path else key, lines)
        return out
    if isinstance(node, yaml.SequenceNode):
        return [_plain(item, f"{path}[{i}]", lines) for i, item in enumerate(node.value)]
    return _scalar(node)


def _scalar(node: yaml.ScalarNode) -> Any:
    loader = yaml.SafeLoader("")
    try:
        return loader.construct_object(node, deep=True)
    finally:
        loader.dispose()


class _Loader:
    def __init__(self, data: dict, lines: dict[str, int]):
        self.data = data
        self.lines = lines

    def error(self, message: str, path: str) -> StoryError:
        line = self.lines.get(path)
        probe = path
        while line is None and probe:
            probe = re.sub(r"(\.[^.\[]+|\[\d+\])$", "", probe)
            line = self.lines.get(probe)
        return StoryError(message, path, line)

    def formula(self, text: Any, path: str, horizon: int, variables: set[str]) -> Formula:
        if not isinstance(text, str):
            raise self.error("expected a formula string", path)
        try:
            f = parse(text, horizon)
        except (ParseError, HorizonError, ValueError) as exc:
            raise self.error(str(exc), path) from None
        unknown = names_of(f) - variables
        if unknown:
            raise self.error(f"undeclared variable(s) {', '.join(sorted(unknown))}", path)
        return f

    def expand(self, text: str, over: Any, path: str, horizon: int) -> list[tuple[int | None, str]]:
        """Instantiate ``@t`` slots over the ``over`` range; plain text passes through."""
        if not _SLOT_RE.search(text):
            if over is not None:
                raise self.error("'over' given but the formula has no @t slot", path)
            return [(None, text)]
        if over is None:
            lo, hi = 0, horizon - 1
        else:
            m = _RANGE_RE.match(str(over))
            if not m:
                raise self.error(f"range must look like 'a..b', got {over!r}", path)
            lo, hi = int(m.group(1)), int(m.group(2))
        out = []
        for t in range(lo, hi + 1):
            def fill(m, t=t):
                k = int(m.group(2) or 0)
                idx = t + k if m.group(1) != "-" else t - k
                if idx < 0:
                    raise self.error(f"slot resolves to negative time {idx} at t={t}", path)
                return f"@{idx}"
            out.append((t, _SLOT_RE.sub(fill, text)))
        return out


def loads(text: str, name: str = "story") -> StoryFile:
    """Parse and validate story text."""
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise StoryError(f"YAML syntax error: {getattr(exc, 'problem', exc)}", "",
                         mark.line + 1 if mark else None) from None
    if root is None:
        raise StoryError("empty story file")
    lines: dict[str, int] = {}
    data = _plain(root, "", lines)
    if not isinstance(data, dict):
        raise StoryError("top level must be a mapping", "", 1)
    ld = _Loader(data, lines)

    known = {"horizon", "variables", "persist", "defaults", "strict", "facts", "queries",
             "profile", "search", "name"}
    for key in data:
        if key not in known:
            raise ld.error(f"unknown field {key!r}", key)

    horizon = data.get("horizon")
    if not isinstance(horizon, int) or isinstance(horizon, bool) or horizon < 0:
        raise ld.error("horizon must be a non-negative integer", "horizon")
    variables = data.get("variables")
    if not isinstance(variables, list) or not variables:
        raise ld.error("variables must be a non-empty list", "variables")
    for i, v in enumerate(variables):
        if not isinstance(v, str) or not re.fullmatch(r"[A-Za-z][A-Za-z0-9_]*", v):
            raise ld.error(f"invalid variable name {v!r}", f"variables[{i}]")
        if v in ("true", "false"):
            raise ld.error(f"{v!r} is reserved", f"variables[{i}]")
    declared = set(variables)

    persist = data.get("persist") or []
    defaults: list[DefaultRule] = []
    for i, v in enumerate(persist):
        if v not in declared:
            raise ld.error(f"undeclared variable {v!r}", f"persist[{i}]")
        defaults += persistence_rules(v, horizon)

    for i, entry in enumerate(data.get("defaults") or []):
        path = f"defaults[{i}]"
        if isinstance(entry, str):
            text, over = entry, None
        elif isinstance(entry, dict) and "rule" in entry:
            text, over = entry["rule"], entry.get("over")
            path += ".rule"
        else:
            raise ld.error("expected a rule string or a mapping with 'rule'", path)
        if not isinstance(text, str) or text.count("~>") != 1:
            raise ld.error("a default rule is written 'antecedent ~> consequent'", path)
        for _, inst in ld.expand(text, over, path, horizon):
            left, right = inst.split("~>")
            ante = ld.formula(left, path, horizon, declared)
            cons = ld.formula(right, path, horizon, declared)
            try:
                defaults.append(DefaultRule(ante, cons))
            except ValueError as exc:
                raise ld.error(str(exc), path) from None

    strict: list[Formula] = []
    for i, entry in enumerate(data.get("strict") or []):
        path = f"strict[{i}]"
        if isinstance(entry, str):
            for _, inst in ld.expand(entry, None, path, horizon):
                strict.append(ld.formula(inst, path, horizon, declared))
        elif isinstance(entry, dict) and "cwa" in entry:
            fluent = entry["cwa"]
            if fluent not in declared:
                raise ld.error(f"undeclared variable {fluent!r}", path + ".cwa")
            trigger = entry.get("trigger")
            if not isinstance(trigger, str):
                raise ld.error("cwa needs a 'trigger' formula", path + ".trigger")
            for t, inst in ld.expand(trigger, entry.get("over"), path + ".trigger", horizon):
                ts = range(horizon) if t is None else [t]
                trig = ld.formula(inst, path + ".trigger", horizon, declared)
                for tt in ts:
                    change = And(Not(atom(fluent, tt)), atom(fluent, tt + 1))
                    strict.append(Implies(change, trig))
        elif isinstance(entry, dict) and "formula" in entry:
            for _, inst in ld.expand(entry["formula"], entry.get("over"), path + ".formula", horizon):
                strict.append(ld.formula(inst, path + ".formula", horizon, declared))
        else:
            raise ld.error("expected a formula, {formula, over} or {cwa, trigger}", path)

    facts = []
    for i, entry in enumerate(data.get("facts") or []):
        path = f"facts[{i}]"
        if isinstance(entry, str):
            text, reveal = entry, None
        elif isinstance(entry, dict) and "formula" in entry:
            text, reveal = entry["formula"], entry.get("reveal")
        else:
            raise ld.error("expected a formula or {formula, reveal}", path)
        f = ld.formula(text, path, horizon, declared)
        if reveal is None:
            reveal = max(0, max((a.t for a in atoms_of(f)), default=0))
        if not isinstance(reveal, int) or not 0 <= reveal <= horizon:
            raise ld.error(f"reveal must be an integer in [0, {horizon}]", path + ".reveal")
        facts.append(Fact(f, reveal))

    queries = []
    for i, entry in enumerate(data.get("queries") or []):
        path = f"queries[{i}]"
        if not isinstance(entry, dict):
            raise ld.error("expected {kind, formula}", path)
        kind = entry.get("kind")
        if kind not in QUERY_KINDS:
            raise ld.error(f"kind must be one of {', '.join(QUERY_KINDS)}", path + ".kind")
        text = entry.get("formula")
        if not isinstance(text, str):
            raise ld.error("expected a formula string", path + ".formula")
        if kind == "suspense":
            if not _SLOT_RE.search(text) or re.search(r"@t\s*-", text):
                raise ld.error("a suspense query is a template over @t / @t+k", path + ".formula")
            template = ld.formula(_SLOT_RE.sub(lambda m: f"@{int(m.group(2) or 0)}", text),
                                  path + ".formula", None, declared)
            fluent = FluentQuery(template)
            queries.append(Query(kind, template, text, fluent))
        else:
            queries.append(Query(kind, ld.formula(text, path + ".formula", horizon, declared), text))

    profile = DEFAULT_PROFILE
    if "profile" in data:
        p = data["profile"]
        try:
            profile = SuspenseProfile(**{k: float(p[k]) for k in ("alpha", "beta", "gamma", "smax")})
        except (KeyError, TypeError, ValueError) as exc:
            raise ld.error(f"profile needs numeric alpha, beta, gamma, smax ({exc})", "profile") from None
    search = WitnessSearchConfig()
    if "search" in data:
        opts = data["search"] or {}
        if not isinstance(opts, dict) or set(opts) - {"max_size", "report_all"}:
            raise ld.error("search takes max_size and report_all", "search")
        k = opts.get("max_size", 2)
        if not isinstance(k, int) or isinstance(k, bool) or k < 1:
            raise ld.error("max_size must be a positive integer", "search.max_size")
        report_all = opts.get("report_all", False)
        if not isinstance(report_all, bool):
            raise ld.error("report_all must be true or false", "search.report_all")
        search = WitnessSearchConfig(max_size=k, report_all=report_all)

    return StoryFile(
        horizon=horizon,
        variables=tuple(variables),
        defaults=unique_rules(defaults),
        strict=tuple(dict.fromkeys(strict)),
        facts=tuple(facts),
        queries=tuple(queries),
        persist=tuple(persist),
        profile=profile,
        search=search,
        name=str(data.get("name", name)),
    )


def load(path: str | Path) -> StoryFile:
    path = Path(path)
    return loads(path.read_text(encoding="utf-8"), name=path.stem)


def bundled(name: str = "box") -> StoryFile:
    """A story shipped with the package (``box`` is the box-on-the-desk story)."""
    text = resources.files("narrative_tension").joinpath("data", f"{name}.story").read_text("utf-8")
    return loads(text, name=name)


# ---------------------------------------------------------------------------
# replay


def _engine_error(exc: Exception) -> str:
    return f"{type(exc).__name__}: {exc}"


def _inference(step: int, until: int, facts_until: int | None, conclusion: Formula,
               verdict: bool) -> dict:
    return {"step": step, "until": until, "facts_until": facts_until, "premise": "true",
            "conclusion": str(conclusion), "verdict": verdict}


def replay(story: StoryFile) -> dict:
    """Run every query at every step of the telling and collect a report.

    At step ``s`` the listener knows the facts revealed at or before ``s``.
    Detectors are evaluated at time ``s``. Engine errors are recorded in the
    affected record instead of aborting the replay.
    """
    n = story.horizon
    states = [story.state(s) for s in range(n + 1)]
    graphs: dict[int, Any] = {}

    def graph(s):
        if s not in graphs:
            graphs[s] = causal_graph(states[s])
        return graphs[s]

    steps = []
    for s, st in enumerate(states):
        steps.append({
            "step": s,
            "facts": [str(f) for f in st.facts],
            "aware": sorted(aware_names(st.until(s))),
        })

    records = []
    for qi, q in enumerate(story.queries):
        onset: tuple[int, int] | None = None
        for s, st in enumerate(states):
            rec: dict[str, Any] = {"query": qi, "kind": q.kind, "formula": q.text, "t": s}
            try:
                if q.kind == "curiosity":
                    _curiosity_record(rec, st, q.formula, s, graph)
                elif q.kind == "surprise":
                    _surprise_record(rec, st, q.formula, s)
                else:
                    onset = _suspense_record(rec, story, st, q, s, graph, onset)
            except ENGINE_ERRORS as exc:
                rec["error"] = _engine_error(exc)
            records.append(rec)

    return {
        "schema_version": SCHEMA_VERSION,
        "story": story.name,
        "horizon": n,
        "profile": {"alpha": story.profile.alpha, "beta": story.profile.beta,
                    "gamma": story.profile.gamma, "smax": story.profile.smax},
        "steps": steps,
        "records": records,
    }


def _curiosity_record(rec, st, phi, s, graph):
    restricted = st.until(s)
    verdict = curious(st, phi, s)
    rec["verdict"] = verdict
    rec["curiosity"] = curiosity_intensity(st, phi, s, graph(s), require_curious=False) \
        if verdict else 0
    if restricted.well_formed:
        rec["inferences"] = [
            _inference(s, s, None, phi, restricted.beliefs.entails(phi)),
            _inference(s, s, None, Not(phi), restricted.beliefs.entails(Not(phi))),
        ]


def _surprise_record(rec, st, phi, s):
    verdict = surprised(st, phi, s)
    rec["verdict"] = verdict
    rec["surprise"] = 0
    if verdict:
        try:
            i = next(i for i, _ in violated_rules(st, phi))
            rec["surprise"] = st.base.n - i
        except StopIteration:
            rec["surprise"] = None
            rec["note"] = f"NoViolatedRule: no default rule is violated by {phi}"
        prior = st.until(s).with_facts_replaced(st.until(s - 1).facts)
        rec["inferences"] = [_inference(s, s, s - 1, Not(phi), entails_B(prior, TOP, Not(phi)))]


def _suspense_record(rec, story, st, q, s, graph, onset):
    current = q.fluent.instantiate(s)
    rec["formula_at_t"] = str(current)
    in_range = max((a.t for a in atoms_of(current)), default=0) <= story.horizon
    is_curious = in_range and curious(st, current, s)
    rec["curious"] = is_curious
    c_now = curiosity_intensity(st, current, s, graph(s), require_curious=False) if is_curious else 0
    rec["curiosity"] = c_now
    if is_curious and onset is None:
        onset = (s, c_now)
    witnesses = iter_suspense_witnesses(st, q.fluent, s, story.search) if is_curious else iter(())
    if story.search.report_all:
        found = list(witnesses)
        rec["witnesses"] = [w.as_dict() for w in found]
    else:
        found = list(itertools.islice(witnesses, 1))
    rec["verdict"] = bool(found)
    rec["witness"] = found[0].as_dict() if found else None
    rec["suspense"] = suspense_intensity(story.profile, onset[1], onset[0], s) if onset else 0.0
    rec["onset"] = onset[0] if onset else None
    return onset

