"""Tie-aware accuracy, computing-time totals, bounds and the over-minimum histogram.

Every method's prediction for a problem is a set of orderings (a singleton
for the learned models).  A problem scores the fraction of predicted
orderings that are targets, and costs the mean time over predicted
orderings, with timeouts valued at the cap.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .harness import DEFAULT_TEST_LIMIT, TimingRecord
from .projection import NUM_ORDERINGS

STANDARD_METHODS = ("DT", "KNN", "MLP", "SVM", "Brown", "sotd", "random")
ALL_ORDERINGS = tuple(range(NUM_ORDERINGS))


def _aligned(a: Mapping, b: Mapping, what: str) -> list:
    if set(a) != set(b):
        missing = sorted(set(a) ^ set(b))[:5]
        raise ValueError(f"{what} are not aligned by problem id (e.g. {missing})")
    return sorted(a)


def _as_set(pred) -> tuple[int, ...]:
    if isinstance(pred, (int, np.integer)):
        return (int(pred),)
    s = tuple(sorted(set(int(o) for o in pred)))
    if not s:
        raise ValueError("empty prediction")
    return s


def problem_score(prediction, target) -> float:
    p = _as_set(prediction)
    t = set(_as_set(target))
    return sum(o in t for o in p) / len(p)


def accuracy(predictions: Mapping[str, Iterable[int]], targets: Mapping[str, Iterable[int]]) -> float:
    """Mean over problems of |prediction & target| / |prediction|, in percent."""
    ids = _aligned(predictions, targets, "predictions and targets")
    if not ids:
        raise ValueError("no problems to score")
    return 100.0 * float(np.mean([problem_score(predictions[i], targets[i]) for i in ids]))


def problem_time(prediction, record: TimingRecord, cap: float = DEFAULT_TEST_LIMIT) -> float:
    valued = record.valued(cap)
    p = _as_set(prediction)
    return float(np.mean(valued[list(p)]))


def method_time(predictions: Mapping[str, Iterable[int]], timings: Mapping[str, TimingRecord],
                cap: float = DEFAULT_TEST_LIMIT) -> float:
    ids = _aligned(predictions, timings, "predictions and timings")
    return float(sum(problem_time(predictions[i], timings[i], cap) for i in ids))


@dataclass(frozen=True)
class Bounds:
    min_total: float
    max_total: float
    random_total: float


def bounds(timings: Mapping[str, TimingRecord] | Sequence[TimingRecord],
           cap: float = DEFAULT_TEST_LIMIT) -> Bounds:
    """Totals for always-fastest, always-slowest, and uniformly random orderings."""
    records = timings.values() if isinstance(timings, Mapping) else timings
    lo = hi = mean = 0.0
    for rec in records:
        v = rec.valued(cap)
        lo += float(v.min())
        hi += float(v.max())
        mean += float(v.mean())
    return Bounds(lo, hi, mean)


def over_min_percent(prediction, record: TimingRecord, cap: float = DEFAULT_TEST_LIMIT) -> float:
    best = float(record.valued(cap).min())
    if best <= 0:
        raise ZeroDivisionError("minimum time is zero")
    return 100.0 * (problem_time(prediction, record, cap) - best) / best


def over_min_histogram(predictions: Mapping[str, Mapping[str, Iterable[int]]],
                       timings: Mapping[str, TimingRecord], bin_percent: float = 1.0,
                       cap: float = DEFAULT_TEST_LIMIT) -> tuple[dict[str, Counter], list[str]]:
    """Per method, counts keyed by bin lower edge (percent over the per-problem minimum).

    Problems whose minimum time is zero are skipped and returned separately.
    """
    hist: dict[str, Counter] = {}
    skipped: set[str] = set()
    for method, preds in predictions.items():
        ids = _aligned(preds, timings, f"{method} predictions and timings")
        counts: Counter = Counter()
        for i in ids:
            try:
                pct = over_min_percent(preds[i], timings[i], cap)
            except ZeroDivisionError:
                skipped.add(i)
                continue
            # tolerance keeps exact multiples such as 20% out of the bin below
            edge = math.floor(pct / bin_percent + 1e-9) * bin_percent
            counts[edge] += 1
        hist[method] = counts
    return hist, sorted(skipped)


def order_methods(names: Iterable[str]) -> list[str]:
    names = list(dict.fromkeys(names))
    std = [m for m in STANDARD_METHODS if m in names]
    return std + [m for m in names if m not in STANDARD_METHODS]


@dataclass
class EvaluationReport:
    methods: list[str]
    accuracy: dict[str, float]
    total_time: dict[str, float]
    bounds: Bounds
    histograms: dict[str, Counter]
    bin_percent: float = 1.0
    n_problems: int = 0
    skipped: list[str] = field(default_factory=list)
    header: dict = field(default_factory=dict)

    def _header_lines(self, prefix: str) -> list[str]:
        return [f"{prefix} {k}={v}" for k, v in sorted(self.header.items())]

    def to_csv(self) -> str:
        buf = io.StringIO()
        for line in self._header_lines("#"):
            buf.write(line + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["metric", *self.methods])
        w.writerow(["accuracy_percent", *(repr(self.accuracy[m]) for m in self.methods)])
        w.writerow(["total_time_seconds", *(repr(self.total_time[m]) for m in self.methods)])
        w.writerow(["bounds_min_total", repr(self.bounds.min_total)])
        w.writerow(["bounds_max_total", repr(self.bounds.max_total)])
        w.writerow(["bounds_random_total", repr(self.bounds.random_total)])
        return buf.getvalue()

    def to_markdown(self) -> str:
        lines = [f"<!-- {' '.join(f'{k}={v}' for k, v in sorted(self.header.items()))} -->"] if self.header else []
        lines.append("| | " + " | ".join(self.methods) + " |")
        lines.append("|---|" + "---|" * len(self.methods))
        lines.append("| **Accuracy** | " + " | ".join(f"{self.accuracy[m]:.1f}%" for m in self.methods) + " |")
        lines.append("| **Computation Time (s)** | "
                     + " | ".join(f"{self.total_time[m]:,.1f}" for m in self.methods) + " |")
        lines.append("")
        b = self.bounds
        lines.append(f"Bounds over {self.n_problems} problems: minimum {b.min_total:,.1f} s, "
                     f"maximum {b.max_total:,.1f} s, random {b.random_total:,.1f} s.")
        return "\n".join(lines) + "\n"

    def histogram_csv(self) -> str:
        buf = io.StringIO()
        for line in self._header_lines("#"):
            buf.write(line + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["bin_lower_percent", *self.methods])
        edges = sorted({e for m in self.methods for e in self.histograms[m]})
        for e in edges:
            w.writerow([repr(float(e)), *(self.histograms[m].get(e, 0) for m in self.methods)])
        return buf.getvalue()


def report(predictions: Mapping[str, Mapping[str, Iterable[int]]], targets: Mapping[str, Iterable[int]],
           timings: Mapping[str, TimingRecord], cap: float = DEFAULT_TEST_LIMIT,
           bin_percent: float = 1.0, header: Mapping | None = None) -> EvaluationReport:
    if not predictions:
        raise ValueError("need at least one method")
    methods = order_methods(predictions)
    acc = {m: accuracy(predictions[m], targets) for m in methods}
    tot = {m: method_time(predictions[m], timings, cap) for m in methods}
    hist, skipped = over_min_histogram({m: predictions[m] for m in methods}, timings, bin_percent, cap)
    return EvaluationReport(methods, acc, tot, bounds(timings, cap), hist, bin_percent,
                            len(timings), skipped, dict(header or {}))


def parse_report_csv(text: str) -> dict[str, dict[str, float]]:
    """Read back ``metric -> method -> value`` from :meth:`EvaluationReport.to_csv`."""
    rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].startswith("#")]
    methods = rows[0][1:]
    out = {}
    for r in rows[1:]:
        if r[0].startswith("bounds_"):
            out[r[0]] = float(r[1])
        else:
            out[r[0]] = {m: float(v) for m, v in zip(methods, r[1:])}
    return out
