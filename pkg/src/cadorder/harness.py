"""Timing CAD runs, labeling problems, and the JSON-lines corpus.

A backend is any command line containing the placeholders
``{problem_file}``, ``{ordering}`` and ``{limit_seconds}``.  Every call
starts a fresh process so no results are cached between orderings.  The
elapsed time is the child's wall-clock time unless the child prints a line
``CADORDER_TIME <seconds>`` (its own measurement of the CAD call), or
``CADORDER_TIMEOUT``.
"""

from __future__ import annotations

import json
import logging
import os
import shlex
import subprocess
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np

from .features import extract_features
from .polyset import NUM_VARS, Problem, to_plain, var_name
from .projection import NUM_ORDERINGS, ordering_label

log = logging.getLogger(__name__)

DEFAULT_INITIAL_LIMIT = 4.0
DEFAULT_MAX_LIMIT = 128.0
DEFAULT_TEST_LIMIT = 128.0
BACKEND_ENV = "CADORDER_BACKEND"
PLACEHOLDERS = ("{problem_file}", "{ordering}", "{limit_seconds}")


class _Timeout:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "TIMEOUT"

    def __reduce__(self):
        return (_Timeout, ())


TIMEOUT = _Timeout()


class BackendError(RuntimeError):
    """The backend process failed (distinct from running out of time)."""


class BackendSpecError(ValueError):
    pass


# -- records -----------------------------------------------------------------


@dataclass(frozen=True)
class TimingRecord:
    problem_id: str
    times: tuple  # seconds (float) or TIMEOUT, one per ordering
    limit: float

    def __post_init__(self):
        if len(self.times) != NUM_ORDERINGS:
            raise ValueError(f"need {NUM_ORDERINGS} timing entries")
        for t in self.times:
            if t is not TIMEOUT and not (0 <= t <= self.limit):
                raise ValueError(f"time {t} outside [0, {self.limit}]")

    def finished(self) -> bool:
        return any(t is not TIMEOUT for t in self.times)

    def fastest(self) -> tuple[int, ...]:
        finite = [t for t in self.times if t is not TIMEOUT]
        if not finite:
            return ()
        best = min(finite)
        return tuple(o for o, t in enumerate(self.times) if t is not TIMEOUT and t == best)

    def valued(self, cap: float = DEFAULT_TEST_LIMIT) -> np.ndarray:
        """Times with TIMEOUT replaced by ``cap``."""
        return np.array([cap if t is TIMEOUT else float(t) for t in self.times])

    def to_dict(self) -> dict:
        return {
            "limit": self.limit,
            "entries": [
                {"ordering": o, "seconds": "timeout" if t is TIMEOUT else t}
                for o, t in enumerate(self.times)
            ],
        }

    @classmethod
    def from_dict(cls, pid: str, d: dict) -> "TimingRecord":
        times = [TIMEOUT] * NUM_ORDERINGS
        for e in d["entries"]:
            s = e["seconds"]
            times[int(e["ordering"])] = TIMEOUT if s == "timeout" else float(s)
        return cls(pid, tuple(times), float(d["limit"]))


@dataclass(frozen=True)
class LabeledProblem:
    problem: Problem
    features: np.ndarray
    target_set: tuple[int, ...]
    target: int
    timings: TimingRecord
    limits_tried: tuple[float, ...] = ()


@dataclass(frozen=True)
class Unlabeled:
    problem: Problem
    limits_tried: tuple[float, ...]
    timings: TimingRecord | None = None


def labeled_from_timings(problem: Problem, record: TimingRecord, limits=()) -> LabeledProblem:
    target_set = record.fastest()
    if not target_set:
        raise ValueError(f"problem {problem.id!r}: no ordering finished")
    return LabeledProblem(problem, extract_features(problem), target_set, min(target_set), record, tuple(limits))


# -- backends -----------------------------------------------------------------


@dataclass(frozen=True)
class BackendSpec:
    template: str
    workdir: str | None = None
    env_passthrough: tuple[str, ...] = ()

    def __post_init__(self):
        missing = [p for p in PLACEHOLDERS if p not in self.template]
        if missing:
            raise BackendSpecError(f"backend template lacks {', '.join(missing)}")
        try:
            self.argv("f", "x0,x1,x2", 1.0)
        except (KeyError, IndexError, ValueError) as exc:
            raise BackendSpecError(f"malformed backend template: {exc}") from None

    def argv(self, problem_file: str, ordering: str, limit: float) -> list[str]:
        values = {
            "problem_file": problem_file,
            "ordering": ordering,
            "limit_seconds": _fmt_limit(limit),
            "python": sys.executable,
        }
        return [tok.format(**values) for tok in shlex.split(self.template)]

    def environment(self) -> dict:
        keep = {"PATH", "HOME", "LANG", "PYTHONPATH", "SYSTEMROOT", *self.env_passthrough}
        return {k: v for k, v in os.environ.items() if k in keep}

    @classmethod
    def from_env(cls, override: str | None = None, **kw) -> "BackendSpec":
        template = override or os.environ.get(BACKEND_ENV)
        if not template:
            raise BackendSpecError(f"no backend given (use --backend or set {BACKEND_ENV})")
        return cls(template, **kw)


def _fmt_limit(limit: float) -> str:
    return str(int(limit)) if float(limit).is_integer() else repr(float(limit))


def mock_backend(table: str | os.PathLike, counter: str | os.PathLike | None = None,
                 sleep: bool = False) -> BackendSpec:
    """Table-driven stand-in for a CAD system (see :mod:`cadorder.mockcad`)."""
    parts = ["{python}", "-m", "cadorder.mockcad", "--table", shlex.quote(str(table))]
    if counter is not None:
        parts += ["--counter", shlex.quote(str(counter))]
    if sleep:
        parts.append("--sleep")
    parts += ["--problem", "{problem_file}", "--ordering", "{ordering}", "--limit", "{limit_seconds}"]
    return BackendSpec(" ".join(parts))


def write_problem_file(problem: Problem, path) -> None:
    lines = [f"# id: {problem.id}", f"# vars: {' '.join(var_name(i) for i in range(problem.num_vars))}"]
    lines += [to_plain(p) for p in problem.polynomials]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _parse_report(stdout: str):
    for line in stdout.splitlines():
        line = line.strip()
        if line == "CADORDER_TIMEOUT":
            return TIMEOUT
        if line.startswith("CADORDER_TIME "):
            return float(line.split()[1])
    return None


def run_backend(spec: BackendSpec, problem: Problem, ordering: int, limit: float,
                problem_file: str | None = None):
    """Run one CAD call in a fresh process; seconds, or TIMEOUT past ``limit``."""
    with tempfile.TemporaryDirectory(prefix="cadorder-") as tmp:
        if problem_file is None:
            problem_file = os.path.join(tmp, "problem.txt")
            write_problem_file(problem, problem_file)
        argv = spec.argv(problem_file, ordering_label(ordering), limit)
        start = time.perf_counter()
        try:
            proc = subprocess.run(
                argv, cwd=spec.workdir, env=spec.environment(), capture_output=True,
                text=True, timeout=limit,
            )
        except subprocess.TimeoutExpired:
            return TIMEOUT
        except OSError as exc:
            raise BackendError(f"could not launch backend: {exc}") from exc
        elapsed = time.perf_counter() - start
    if proc.returncode != 0:
        tail = (proc.stderr or "").strip().splitlines()[-3:]
        raise BackendError(
            f"backend exited with status {proc.returncode} on {problem.id!r} "
            f"ordering {ordering_label(ordering)}: {' | '.join(tail)}")
    reported = _parse_report(proc.stdout)
    if reported is TIMEOUT:
        return TIMEOUT
    seconds = elapsed if reported is None else reported
    return TIMEOUT if seconds > limit else seconds


Runner = Callable[[Problem, int, float], object]


def _runner(spec: BackendSpec | Runner) -> Runner:
    if isinstance(spec, BackendSpec):
        return lambda problem, o, limit: run_backend(spec, problem, o, limit)
    return spec


def label_problem(spec: BackendSpec | Runner, problem: Problem,
                  initial_limit: float = DEFAULT_INITIAL_LIMIT,
                  max_limit: float = DEFAULT_MAX_LIMIT) -> LabeledProblem | Unlabeled:
    """Run all orderings, doubling the limit until at least one finishes."""
    if initial_limit <= 0:
        raise ValueError("initial limit must be positive")
    run = _runner(spec)
    limit = float(initial_limit)
    tried = []
    record = None
    while limit <= max_limit:
        tried.append(limit)
        times = tuple(run(problem, o, limit) for o in range(NUM_ORDERINGS))
        record = TimingRecord(problem.id, times, limit)
        if record.finished():
            return labeled_from_timings(problem, record, tried)
        limit *= 2
    return Unlabeled(problem, tuple(tried), record)


def time_all_test(spec: BackendSpec | Runner, problem: Problem,
                  limit: float = DEFAULT_TEST_LIMIT) -> TimingRecord:
    run = _runner(spec)
    return TimingRecord(problem.id, tuple(run(problem, o, limit) for o in range(NUM_ORDERINGS)), float(limit))


def split(items: Sequence, ratio: float, seed: int) -> tuple[list, list]:
    """Seeded shuffle, then the first ``round(ratio * N)`` items train."""
    if not 0 < ratio < 1:
        raise ValueError("ratio must lie strictly between 0 and 1")
    n = len(items)
    if n < 2:
        raise ValueError("need at least two items to split")
    n_train = min(max(int(round(ratio * n)), 1), n - 1)
    perm = np.random.default_rng(seed).permutation(n)
    return [items[i] for i in perm[:n_train]], [items[i] for i in perm[n_train:]]


# -- corpus --------------------------------------------------------------------

STATUS_UNLABELED = "unlabeled"
STATUS_LABELED = "labeled"


@dataclass
class CorpusEntry:
    problem: Problem
    status: str = STATUS_UNLABELED
    timings: TimingRecord | None = None
    target_set: tuple[int, ...] | None = None
    target: int | None = None
    extra: dict = field(default_factory=dict)

    @property
    def id(self) -> str:
        return self.problem.id

    def to_dict(self) -> dict:
        d = {
            "id": self.problem.id,
            "vars": [var_name(i) for i in range(self.problem.num_vars)],
            "polynomials": self.problem.to_strings(),
            "status": self.status,
            "timings": self.timings.to_dict() if self.timings else None,
            "target_set": list(self.target_set) if self.target_set is not None else None,
            "target": self.target,
        }
        d.update(self.extra)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CorpusEntry":
        nv = len(d.get("vars", [])) or NUM_VARS
        problem = Problem.from_strings(d["id"], d["polynomials"], nv)
        timings = TimingRecord.from_dict(d["id"], d["timings"]) if d.get("timings") else None
        ts = d.get("target_set")
        known = {"id", "vars", "polynomials", "status", "timings", "target_set", "target"}
        return cls(problem, d.get("status", STATUS_UNLABELED), timings,
                   tuple(ts) if ts is not None else None, d.get("target"),
                   {k: v for k, v in d.items() if k not in known})

    def apply(self, outcome: LabeledProblem | Unlabeled) -> None:
        if isinstance(outcome, LabeledProblem):
            self.status = STATUS_LABELED
            self.timings = outcome.timings
            self.target_set = outcome.target_set
            self.target = outcome.target
        else:
            self.status = STATUS_UNLABELED
            self.timings = outcome.timings
            self.target_set = None
            self.target = None
        if outcome.limits_tried:
            self.extra["limits_tried"] = list(outcome.limits_tried)


def dumps_entry(entry: CorpusEntry) -> str:
    return json.dumps(entry.to_dict(), sort_keys=True, separators=(",", ":"))


def read_corpus(path) -> list[CorpusEntry]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                out.append(CorpusEntry.from_dict(json.loads(line)))
            except (ValueError, KeyError) as exc:
                raise ValueError(f"{path}:{lineno}: bad corpus record: {exc}") from exc
    return out


def write_corpus(entries: Iterable[CorpusEntry], path) -> None:
    """Atomic rewrite, one canonical JSON object per line."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8") as fh:
        for e in entries:
            fh.write(dumps_entry(e) + "\n")
    os.replace(tmp, path)


def label_corpus(entries: list[CorpusEntry], spec: BackendSpec | Runner, mode: str = "train",
                 initial_limit: float = DEFAULT_INITIAL_LIMIT, max_limit: float = DEFAULT_MAX_LIMIT,
                 test_limit: float = DEFAULT_TEST_LIMIT, jobs: int = 1) -> dict:
    """Label every entry that is not yet labeled, in place.

    ``mode="train"`` runs the doubling protocol; ``mode="test"`` times every
    ordering once at ``test_limit``.  Returns a summary of counts.
    """
    todo = [e for e in entries if e.status != STATUS_LABELED]

    def work(entry):
        try:
            if mode == "train":
                return entry, label_problem(spec, entry.problem, initial_limit, max_limit), None
            rec = time_all_test(spec, entry.problem, test_limit)
            if rec.finished():
                return entry, labeled_from_timings(entry.problem, rec, (test_limit,)), None
            return entry, Unlabeled(entry.problem, (test_limit,), rec), None
        except BackendError as exc:
            return entry, None, exc

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(work, todo))
    else:
        results = [work(e) for e in todo]
    summary = {"attempted": len(todo), "labeled": 0, "unlabeled": 0, "errors": 0}
    for entry, outcome, err in results:
        if err is not None:
            log.error("%s", err)
            summary["errors"] += 1
            continue
        entry.apply(outcome)
        summary["labeled" if isinstance(outcome, LabeledProblem) else "unlabeled"] += 1
    return summary
