"""
Emotion intensities
===================

Causal graph of the listener, curiosity intensity as a sum of node degrees,
the trapezoid suspense curve and the surprise level.
"""

import numpy as np

from narrative_tension import (EpistemicState, SuspenseProfile, bundled, causal_graph,
                               curiosity_intensity, parse, surprise_intensity, suspense_intensity)

story = bundled("box")
state = EpistemicState(tuple(parse(f) for f in ("!box@0", "box@1", "!visible@1")),
                       story.strict, story.defaults, story.horizon)

graph = causal_graph(state.until(1))
print(graph.to_dot())

# degrees are taken in the graph of the whole state
print("curiosity about empty@1:", curiosity_intensity(state, parse("empty@1"), 1))

# suspense rises from the curiosity level to the peak, holds, then fades
profile = SuspenseProfile(alpha=6, beta=6, gamma=3, smax=10)
for t in np.arange(0, 18, 1.5):
    level = suspense_intensity(profile, c=3, t0=0, t=t)
    print(f"t={t:5.1f} {'#' * int(round(level * 3))} {level:.2f}")

# only a persistence rule is broken by the box appearing
before = EpistemicState((parse("!box@0"), parse("box@1")), story.strict, story.defaults, story.horizon)
print("surprise level for box@1:", surprise_intensity(before, parse("box@1"), 1))
