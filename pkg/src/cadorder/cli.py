"""Command-line entry point: ``cadorder <subcommand> ...``.

Exit codes: 0 success, 1 usage error, 2 data error, 3 backend error.
"""

from __future__ import annotations

import argparse
import glob
import hashlib
import json
import logging
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .evaluation import report
from .features import fit_standardizer, write_feature_csv
from .harness import (
    BACKEND_ENV,
    DEFAULT_INITIAL_LIMIT,
    DEFAULT_MAX_LIMIT,
    DEFAULT_TEST_LIMIT,
    STATUS_LABELED,
    BackendSpec,
    BackendSpecError,
    CorpusEntry,
    label_corpus,
    read_corpus,
    split,
    write_corpus,
)
from .heuristics import HEURISTICS, random_choice, single_pick
from .learners import DEFAULT_GRIDS, GridBoundaryWarning, KINDS, fit, grid_search, load_model
from .learners.model import ModelFormatError
from .polyset import ParseError, parse_problem
from .projection import NUM_ORDERINGS, ordering_label
from .features import extract_features

log = logging.getLogger("cadorder")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_BACKEND = 0, 1, 2, 3

METHOD_NAMES = {"dt": "DT", "knn": "KNN", "mlp": "MLP", "svm": "SVM"}
HEURISTIC_NAMES = {"brown": "Brown", "sotd": "sotd", "random": "random", "random-draw": "random-draw"}


class DataError(Exception):
    pass


def _sha256(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def _guess_format(path: str, forced: str | None) -> str:
    if forced:
        return forced
    return "smtlib" if path.endswith((".smt2", ".smt", ".smtlib")) else "plain"


def _csv_table(rows: list[dict], header: dict) -> str:
    import csv
    import io

    buf = io.StringIO()
    for k, v in sorted(header.items()):
        buf.write(f"# {k}={v}\n")
    if rows:
        keys = list(rows[0])
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(keys)
        for r in rows:
            w.writerow([json.dumps(r[k]) if isinstance(r[k], (list, dict)) else r[k] for k in keys])
    return buf.getvalue()


# -- subcommands ---------------------------------------------------------------


def cmd_ingest(args) -> int:
    paths = sorted({p for pattern in args.inputs for p in (glob.glob(pattern, recursive=True) or [pattern])})
    entries, skipped, seen = [], 0, {}
    for path in paths:
        pid = Path(path).stem
        if pid in seen:
            seen[pid] += 1
            pid = f"{pid}#{seen[pid]}"
        else:
            seen[pid] = 0
        try:
            text = Path(path).read_text(encoding="utf-8")
            problem = parse_problem(text, _guess_format(path, args.format), pid)
        except (OSError, UnicodeDecodeError, ValueError) as exc:
            print(f"warning: skipping {path}: {exc}", file=sys.stderr)
            skipped += 1
            continue
        entries.append(CorpusEntry(problem))
    print(f"ingested {len(entries)} problems, skipped {skipped}", file=sys.stderr)
    if not entries:
        raise DataError("no problems could be parsed")
    write_corpus(entries, args.out)
    return EXIT_OK


def cmd_label(args) -> int:
    spec = BackendSpec.from_env(args.backend, workdir=args.workdir,
                                env_passthrough=tuple(args.env or ()))
    entries = read_corpus(args.corpus)
    summary = label_corpus(entries, spec, mode=args.mode, initial_limit=args.initial_limit,
                           max_limit=args.max_limit, test_limit=args.test_limit, jobs=args.jobs)
    write_corpus(entries, args.corpus)
    print(json.dumps(summary, sort_keys=True))
    return EXIT_BACKEND if summary["errors"] else EXIT_OK


def cmd_split(args) -> int:
    entries = read_corpus(args.corpus)
    train, test = split(entries, args.ratio, args.seed)
    write_corpus(train, args.train_out)
    write_corpus(test, args.test_out)
    print(f"train {len(train)} test {len(test)}", file=sys.stderr)
    return EXIT_OK


def _labeled(entries):
    rows = [e for e in entries if e.status == STATUS_LABELED and e.target is not None]
    if not rows:
        raise DataError("corpus has no labeled problems")
    return rows


def cmd_features(args) -> int:
    entries = read_corpus(args.corpus)
    x = np.vstack([extract_features(e.problem) for e in entries])
    Path(args.out).write_text(write_feature_csv([e.id for e in entries], x), encoding="utf-8")
    return EXIT_OK


def cmd_train(args) -> int:
    entries = _labeled(read_corpus(args.corpus))
    X_raw = np.vstack([extract_features(e.problem) for e in entries])
    y = np.array([e.target for e in entries], dtype=int)
    std = fit_standardizer(X_raw)
    X = std.transform(X_raw)
    if args.grid:
        grid = json.loads(Path(args.grid).read_text(encoding="utf-8"))
        grid = grid.get(args.kind, grid)
    else:
        grid = DEFAULT_GRIDS[args.kind]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", GridBoundaryWarning)
        best, table = grid_search(args.kind, grid, X, y, k=args.folds, seed=args.seed)
    for w in caught:
        if issubclass(w.category, GridBoundaryWarning):
            print(f"warning: {w.message}", file=sys.stderr)
    header = {
        "tool": f"cadorder {__version__}",
        "seed": args.seed,
        "corpus_sha256": _sha256(args.corpus),
        "folds": args.folds,
    }
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        model = fit(best, X, y, seed=args.seed, standardizer=std,
                    metadata={**header, "grid": grid})
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{args.kind}.model.json").write_text(model.to_json(), encoding="utf-8")
    (out / f"{args.kind}.cv.csv").write_text(_csv_table(table, header), encoding="utf-8")
    best_row = max(table, key=lambda r: r["mean_accuracy"])
    print(f"{args.kind}: best CV accuracy {100 * best_row['mean_accuracy']:.1f}% with "
          f"{json.dumps({k: v for k, v in best_row.items() if k in grid}, sort_keys=True)}", file=sys.stderr)
    return EXIT_OK


def method_predictions(entries, models, heuristics, seed: int) -> dict[str, dict[str, tuple]]:
    """Per method, per problem id, the predicted ordering set."""
    preds: dict[str, dict[str, tuple]] = {}
    if models:
        X_raw = np.vstack([extract_features(e.problem) for e in entries])
        for model in models:
            name = METHOD_NAMES.get(model.kind, model.kind)
            y = model.predict_raw(X_raw)
            preds[name] = {e.id: (int(o),) for e, o in zip(entries, y)}
    for h in heuristics:
        name = HEURISTIC_NAMES[h]
        if h == "random":
            # the expectation of a uniform pick: all six orderings, scored tie-aware
            preds[name] = {e.id: tuple(range(NUM_ORDERINGS)) for e in entries}
        elif h == "random-draw":
            preds[name] = {e.id: (random_choice(e.problem, seed),) for e in entries}
        else:
            fn = HEURISTICS[h]
            preds[name] = {e.id: fn(e.problem) for e in entries}
    return preds


def cmd_evaluate(args) -> int:
    entries = _labeled(read_corpus(args.corpus))
    if any(e.timings is None for e in entries):
        raise DataError("corpus lacks timing records")
    models = [load_model(p) for p in (args.models or [])]
    if args.methods:
        wanted = [m.strip().lower() for m in args.methods.split(",") if m.strip()]
        kinds = {m.kind: m for m in models}
        models = [kinds[m] for m in wanted if m in kinds]
        heuristics = [m for m in wanted if m in HEURISTIC_NAMES]
        unknown = [m for m in wanted if m not in kinds and m not in HEURISTIC_NAMES]
        if unknown:
            raise DataError(f"unknown or unloaded methods: {', '.join(unknown)}")
    else:
        heuristics = [] if args.no_heuristics else ["brown", "sotd", "random"]
    preds = method_predictions(entries, models, heuristics, args.seed)
    if not preds:
        raise DataError("no methods to evaluate")
    header = {
        "tool": f"cadorder {__version__}",
        "seed": args.seed,
        "cap": args.cap,
        "corpus_sha256": _sha256(args.corpus),
        "models": ",".join(_sha256(p)[:16] for p in (args.models or [])) or "none",
    }
    rep = report(preds, {e.id: e.target_set for e in entries}, {e.id: e.timings for e in entries},
                 cap=args.cap, bin_percent=args.bin, header=header)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.csv").write_text(rep.to_csv(), encoding="utf-8")
    (out / "report.md").write_text(rep.to_markdown(), encoding="utf-8")
    (out / "histogram.csv").write_text(rep.histogram_csv(), encoding="utf-8")
    sys.stdout.write(rep.to_markdown())
    return EXIT_OK


def cmd_predict(args) -> int:
    text = Path(args.problem).read_text(encoding="utf-8")
    problem = parse_problem(text, _guess_format(args.problem, args.format), Path(args.problem).stem)
    if args.heuristic:
        o = single_pick(HEURISTICS[args.heuristic](problem))
    elif args.model:
        model = load_model(args.model)
        o = int(model.predict_raw(extract_features(problem))[0])
    else:
        raise UsageError("give --model or --heuristic")
    print(f"{ordering_label(o)} {o}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    from .evaluation import bounds

    entries = _labeled(read_corpus(args.corpus))
    if any(e.timings is None for e in entries):
        raise DataError("corpus lacks timing records")
    b = bounds([e.timings for e in entries], args.cap)
    print("min_total,max_total,random_total")
    print(f"{b.min_total!r},{b.max_total!r},{b.random_total!r}")
    return EXIT_OK


def cmd_synth(args) -> int:
    from .synthetic import synthetic_corpus, timing_table

    entries = synthetic_corpus(args.n, seed=args.seed, noise=args.noise,
                               max_polys=args.max_polys, max_degree=args.max_degree)
    write_corpus(entries, args.out)
    if args.table:
        Path(args.table).write_text(json.dumps(timing_table(entries), sort_keys=True) + "\n", encoding="utf-8")
    return EXIT_OK


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cadorder", description="Choose CAD variable orderings.")
    ap.add_argument("--version", action="version", version=f"cadorder {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse problem files into a corpus")
    p.add_argument("inputs", nargs="+", help="files or glob patterns")
    p.add_argument("--format", choices=["plain", "smtlib"])
    p.add_argument("--out", "-o", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("label", help="time orderings with a CAD backend")
    p.add_argument("corpus")
    p.add_argument("--backend", help=f"command template (default: ${BACKEND_ENV})")
    p.add_argument("--workdir")
    p.add_argument("--env", action="append", help="environment variable to pass through")
    p.add_argument("--mode", choices=["train", "test"], default="train")
    p.add_argument("--initial-limit", type=float, default=DEFAULT_INITIAL_LIMIT)
    p.add_argument("--max-limit", type=float, default=DEFAULT_MAX_LIMIT)
    p.add_argument("--test-limit", type=float, default=DEFAULT_TEST_LIMIT)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_label)

    p = sub.add_parser("split", help="seeded train/test split of a corpus")
    p.add_argument("corpus")
    p.add_argument("--ratio", type=float, default=4612 / 6117)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--train-out", required=True)
    p.add_argument("--test-out", required=True)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("features", help="write the feature matrix as CSV")
    p.add_argument("corpus")
    p.add_argument("--out", "-o", required=True)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("train", help="grid-search, cross-validate and fit a model")
    p.add_argument("corpus")
    p.add_argument("--kind", choices=sorted(KINDS), required=True)
    p.add_argument("--grid", help="JSON file: {param: [values]} or {kind: {param: [values]}}")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "-o", required=True, help="output directory")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="accuracy/time report on a timed corpus")
    p.add_argument("corpus")
    p.add_argument("--models", nargs="*")
    p.add_argument("--methods", help="comma list, e.g. dt,knn,brown,sotd,random")
    p.add_argument("--no-heuristics", action="store_true")
    p.add_argument("--cap", type=float, default=DEFAULT_TEST_LIMIT)
    p.add_argument("--bin", type=float, default=1.0, help="histogram bin width in percent")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "-o", required=True, help="output directory")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("predict", help="ordering for one problem file")
    p.add_argument("problem")
    p.add_argument("--model")
    p.add_argument("--heuristic", choices=sorted(HEURISTICS))
    p.add_argument("--format", choices=["plain", "smtlib"])
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("bounds", help="min/max/random total times of a timed corpus")
    p.add_argument("corpus")
    p.add_argument("--cap", type=float, default=DEFAULT_TEST_LIMIT)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("synth", help="generate a synthetic labeled corpus")
    p.add_argument("--n", type=int, default=1200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", type=float, default=0.1)
    p.add_argument("--max-polys", type=int, default=5)
    p.add_argument("--max-degree", type=int, default=4, help="bound on monomial total degree")
    p.add_argument("--out", "-o", required=True)
    p.add_argument("--table", help="also write a mock-backend timing table")
    p.set_defaults(func=cmd_synth)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BackendSpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except (DataError, ParseError, ModelFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
