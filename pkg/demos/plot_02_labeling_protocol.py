"""
Labeling problems with a stand-in CAD backend
==============================================

Training labels come from timing every ordering.  All six runs start with a
4 s limit; if none finishes, the limit doubles.  The table-driven mock
backend plays the part of the computer-algebra system, one fresh process per
call, so the protocol can be watched without one installed.
"""

import json
import tempfile
from pathlib import Path

from cadorder.harness import TIMEOUT, Unlabeled, label_problem, mock_backend, time_all_test
from cadorder.polyset import Problem
from cadorder.projection import ordering_label

work = Path(tempfile.mkdtemp(prefix="cadorder-demo-"))
table = work / "times.json"
calls = work / "calls.log"

# seconds per ordering; None never finishes
table.write_text(json.dumps({
    "slow": [5, 6, 7, 9, 12, 70],
    "easy": [0.5, 0.5, 0.7, 1.0, 2.0, 3.0],
    "hard": [None, None, 200, None, None, None],
}))
backend = mock_backend(table, counter=calls)
print("backend template:", backend.template)

for pid in ("slow", "easy", "hard"):
    problem = Problem.from_strings(pid, ["x0^2 + x1", "x1*x2 + 1"])
    outcome = label_problem(backend, problem, initial_limit=4, max_limit=128)
    print(f"\n{pid}: limits tried {list(outcome.limits_tried)}")
    if outcome.timings is not None:
        shown = ["timeout" if t is TIMEOUT else f"{t:g}s" for t in outcome.timings.times]
        print("  times:", shown)
    if isinstance(outcome, Unlabeled):
        print("  no ordering finished within 128 s: left unlabeled")
    else:
        print("  target orderings:", [ordering_label(o) for o in outcome.target_set])

# every backend call was its own process
print("\nbackend launches:", len(calls.read_text().splitlines()))

# test problems are timed once with a 128 s limit; timeouts are valued at the cap
record = time_all_test(backend, Problem.from_strings("hard", ["x0"]), 128)
print("test record:", ["timeout" if t is TIMEOUT else t for t in record.times])
print("valued at cap:", record.valued(128).tolist())
