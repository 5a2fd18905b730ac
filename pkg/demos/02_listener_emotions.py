"""
Curiosity, surprise and suspense of a listener
==============================================

Build epistemic states by hand and run the three detectors on them.
"""

from narrative_tension import (EpistemicState, FluentQuery, bundled, curious, iter_suspense_witnesses,
                               parse, surprised, suspense)

story = bundled("box")


def listener(*facts):
    return EpistemicState(tuple(parse(f) for f in facts), story.strict, story.defaults, story.horizon)


# a box shows up that was not there at time 0
b1 = listener("!box@0", "box@1")
print("surprised about box@1 at 1:", surprised(b1, parse("box@1"), 1))
print("curious whether A dropped it off:", curious(b1, parse("A@0"), 1))

# learning who dropped the box off ends that question
b2 = listener("A@0", "!box@0", "box@1")
print("still curious once A@0 is known:", curious(b2, parse("A@0"), 1))

# is the box empty? a disclosure about the future could settle it
b3 = listener("!box@0", "box@1", "!visible@1")
empty = FluentQuery.of("empty")
first = suspense(b3, empty, 1)
print("suspense about empty at 1, first witness:", first.psi, "settles", first.settled)

witnesses = list(iter_suspense_witnesses(b3, empty, 1))
opening = next(w for w in witnesses if str(w.psi) == "(C@2 & visible@3)")
print(f"{len(witnesses)} admissible witnesses; opening the box and seeing something"
      f" settles {opening.settled} at {opening.t_prime}")
