"""
Default reasoning on the box story
==================================

Load the bundled story, look at how System Z ranks its default rules and ask
a few lexicographic inference questions.
"""

from narrative_tension import bundled, conj, lex_entails, parse, stratify

story = bundled("box")
print(f"{len(story.defaults)} default rules, {len(story.strict)} closed-world axioms")

# persistence rules end up least specific, the rule about opening an empty
# box is the most specific one
base = stratify(story.defaults)
for i, stratum in enumerate(base.strata, start=1):
    print(f"stratum {i}: {len(stratum)} rules, e.g. {stratum[0]}")

cwa = conj(story.strict)
questions = [
    ("!box@0", "!box@1"),
    ("!box@0 & (A@0 | E@0)", "box@1"),
    ("!box@0", "box@1"),
]
for premise, conclusion in questions:
    verdict = lex_entails(base, parse(premise), parse(conclusion))
    print(f"{premise:>22}  |~  {conclusion:<8} {verdict}")

# with the closed-world axioms a box that appeared must have been dropped off
print("box@1 & !box@0 & CWA |~ A@0 | E@0:",
      lex_entails(base, parse("box@1 & !box@0") & cwa, parse("A@0 | E@0")))
