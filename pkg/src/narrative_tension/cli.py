"""Command-line entry point: ``narrative-tension <command> <story> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

from .formula import HorizonError, ParseError, parse
from .lex import InconsistentContext, state_reasoner
from .metrics import RAW_EDGES, EdgeFilterConfig, causal_graph
from .story import ENGINE_ERRORS, StoryError, load, replay

log = logging.getLogger("narrative_tension")


def _state(story, step, until, facts_until=None):
    state = story.state(step)
    if until is not None:
        state = state.until(until)
    if facts_until is not None:
        state = state.with_facts_replaced(story.state(step).until(facts_until).facts)
    return state


def cmd_stratify(args, out):
    story = load(args.story)
    base = story.state().base
    out.write(f"n = {base.n}\n")
    for i, stratum in enumerate(base.strata, start=1):
        out.write(f"stratum {i} ({len(stratum)} rules)\n")
        for r in stratum:
            out.write(f"  {r}\n")


def cmd_infer(args, out):
    story = load(args.story)
    state = _state(story, args.step, args.until, args.facts_until)
    premise = parse(args.premise, story.horizon)
    conclusion = parse(args.conclusion, story.horizon)
    result = {"premise": str(premise), "conclusion": str(conclusion)}
    if not state.facts_consistent:
        result.update(verdict=False, vector=None, subbases=0,
                      note="facts and strict rules are inconsistent")
    else:
        reasoner = state_reasoner(state, premise)
        if not reasoner.consistent:
            result.update(verdict=False, vector=None, subbases=0,
                          note="premise inconsistent with facts and strict rules")
        else:
            family = reasoner.family
            result.update(verdict=reasoner.entails(conclusion), vector=list(family.vector),
                          subbases=len(family))
    json.dump(result, out, indent=2)
    out.write("\n")


def cmd_emotions(args, out):
    report = replay(load(args.story))
    json.dump(report, out, indent=2)
    out.write("\n")
    return 1 if any("error" in rec for rec in report["records"]) else 0


def cmd_graph(args, out):
    story = load(args.story)
    state = _state(story, args.step, args.until)
    config = RAW_EDGES if args.raw_edges else EdgeFilterConfig()
    out.write(causal_graph(state, config).to_dot())


def cmd_tension(args, out):
    report = replay(load(args.story))
    labels = {}
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["query", "t", "curiosity", "suspense", "surprise"])
    for rec in report["records"]:
        label = labels.setdefault(rec["query"], f"{rec['kind']}:{rec['formula']}")
        writer.writerow([
            label, rec["t"],
            _cell(rec.get("curiosity")), _cell(rec.get("suspense")), _cell(rec.get("surprise")),
        ])
    return 1 if any("error" in rec for rec in report["records"]) else 0


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:g}"
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="narrative-tension",
        description="Curiosity, suspense and surprise of a story listener.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stratify", help="print the System Z strata of the default rules")
    p.add_argument("story")
    p.set_defaults(func=cmd_stratify)

    p = sub.add_parser("infer", help="decide premise |~ conclusion for the listener")
    p.add_argument("story")
    p.add_argument("--premise", default="true")
    p.add_argument("--conclusion", required=True)
    p.add_argument("--step", type=int, default=None,
                   help="use facts revealed up to this step (default: all)")
    p.add_argument("--until", type=int, default=None,
                   help="restrict the state to formulas indexed up to this time")
    p.add_argument("--facts-until", type=int, default=None,
                   help="further restrict the facts only")
    p.set_defaults(func=cmd_infer)

    p = sub.add_parser("emotions", help="replay the story and print a JSON report")
    p.add_argument("story")
    p.set_defaults(func=cmd_emotions)

    p = sub.add_parser("graph", help="print the causal graph in DOT")
    p.add_argument("story")
    p.add_argument("--step", type=int, default=None)
    p.add_argument("--until", type=int, default=None)
    p.add_argument("--raw-edges", action="store_true",
                   help="unfiltered strict edges, including vacuous entailments")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("tension", help="CSV time series of emotion intensities")
    p.add_argument("story")
    p.set_defaults(func=cmd_tension)
    return parser


def main(argv=None, out=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    out = out if out is not None else sys.stdout
    try:
        return args.func(args, out) or 0
    except (StoryError, ParseError, HorizonError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (*ENGINE_ERRORS, InconsistentContext) as exc:
        print(f"engine error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


def run(argv) -> tuple[int, str]:
    """Run the CLI in-process and capture stdout."""
    buf = io.StringIO()
    code = main(argv, buf)
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
