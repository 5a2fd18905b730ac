"""Curiosity, suspense and surprise of a story listener.

A listener is an epistemic state: facts, strict rules and default rules over
time-indexed propositional variables. Defaults are ranked by System Z and
reasoned with by lexicographic inference; the emotion detectors and their
intensities are built on top.
"""

from .agent import (FluentQuery, SuspenseWitness, WitnessSearchConfig, aware_names, aware_of,
                    curious, iter_suspense_witnesses, surprised, suspense, until)
from .defaults import (DefaultRule, InconsistentDefaultBase, StratifiedBase, persistence_rules,
                       stratify, strict, tolerated)
from .formula import (BOTTOM, TOP, And, Atom, Formula, HorizonError, Iff, Implies, Interpretation,
                      Not, Or, ParseError, TimedAtom, atom, conj, disj, models, parse)
from .lex import (ExplosionLimit, LexReasoner, SubbaseFamily, entails_B, lex_compare,
                  lex_entails, lex_preferred_subbases)
from .metrics import (RAW_EDGES, CausalGraph, EdgeFilterConfig, SuspenseProfile, causal_graph,
                      curiosity_intensity, degree, surprise_intensity, suspense_intensity)
from .sat import entails, is_consistent
from .state import EpistemicState
from .story import StoryError, StoryFile, bundled, load, loads, replay

__version__ = "0.1.0"

__all__ = [
    "And", "Atom", "BOTTOM", "CausalGraph", "DefaultRule", "EdgeFilterConfig", "EpistemicState",
    "ExplosionLimit", "FluentQuery", "Formula", "HorizonError", "Iff", "Implies",
    "InconsistentDefaultBase", "Interpretation", "LexReasoner", "Not", "Or", "ParseError",
    "RAW_EDGES", "StoryError", "StoryFile", "StratifiedBase", "SubbaseFamily", "SuspenseProfile",
    "SuspenseWitness", "TOP", "TimedAtom", "WitnessSearchConfig", "atom", "aware_names", "conj", "disj",
    "aware_of", "bundled", "causal_graph", "curiosity_intensity", "curious", "degree",
    "entails", "entails_B", "is_consistent", "iter_suspense_witnesses", "lex_compare",
    "lex_entails", "lex_preferred_subbases", "load", "loads", "models", "parse",
    "persistence_rules", "replay", "strict", "stratify", "surprise_intensity", "surprised",
    "suspense", "suspense_intensity", "tolerated", "until",
]
