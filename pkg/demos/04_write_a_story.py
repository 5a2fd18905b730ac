"""
Writing and replaying a story file
==================================

A story file declares fluents, defaults, strict rules, facts with the step at
which the listener learns them, and the questions to track. Replaying it gives
one record per question and step.
"""

import json

from narrative_tension import loads, replay

TEXT = """
name: lamp
horizon: 2
variables: [lamp, switch, fuse]
persist: [lamp, fuse]
defaults:
  - rule: "switch@t & fuse@t & !lamp@t ~> lamp@t+1"
strict:
  - cwa: lamp
    trigger: "switch@t"
facts:
  - {formula: "fuse@0", reveal: 0}
  - {formula: "!lamp@0", reveal: 0}
  - {formula: "switch@0", reveal: 0}
  - {formula: "!lamp@1", reveal: 1}
queries:
  - {kind: surprise, formula: "!lamp@1"}
  - {kind: curiosity, formula: "fuse@1"}
  - {kind: suspense, formula: "fuse@t"}
"""

report = replay(loads(TEXT))
for rec in report["records"]:
    extra = {k: rec[k] for k in ("curiosity", "suspense", "surprise", "witness") if k in rec}
    print(rec["kind"], rec["formula"], "t =", rec["t"], rec["verdict"], json.dumps(extra))
