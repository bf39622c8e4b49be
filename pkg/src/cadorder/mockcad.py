"""Stand-in CAD backend driven by a table of per-ordering run times.

The table is a JSON object ``{problem_id: [t0, ..., t5]}`` with seconds per
ordering index (``null`` for a run that never finishes).  By default the mock
reports the tabled time through the ``CADORDER_TIME`` protocol without
waiting; with ``--sleep`` it actually sleeps and lets the harness enforce the
limit by wall clock.

    python -m cadorder.mockcad --table times.json --problem p.txt \\
        --ordering x2,x1,x0 --limit 8
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .projection import parse_ordering


def read_problem_id(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line.startswith("# id:"):
                return line[len("# id:"):].strip()
    raise SystemExit(f"mockcad: no '# id:' header in {path}")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="cadorder.mockcad")
    ap.add_argument("--table", required=True)
    ap.add_argument("--problem", required=True)
    ap.add_argument("--ordering", required=True)
    ap.add_argument("--limit", type=float, required=True)
    ap.add_argument("--counter", help="append one line per call to this file")
    ap.add_argument("--sleep", action="store_true", help="really sleep for the tabled time")
    args = ap.parse_args(argv)

    pid = read_problem_id(args.problem)
    with open(args.table, encoding="utf-8") as fh:
        table = json.load(fh)
    if pid not in table:
        print(f"mockcad: problem {pid!r} not in table", file=sys.stderr)
        return 4
    o = parse_ordering(args.ordering)
    if args.counter:
        with open(args.counter, "a", encoding="utf-8") as fh:
            fh.write(f"{pid}\t{o}\t{args.limit}\n")
    t = table[pid][o]
    if args.sleep:
        time.sleep(t if t is not None else args.limit + 60)
        return 0
    if t is None or t > args.limit:
        print("CADORDER_TIMEOUT")
    else:
        print(f"CADORDER_TIME {float(t)!r}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
