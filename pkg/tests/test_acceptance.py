"""Acceptance criteria, one test each, at the stated tolerances.

Each test records a one-line PASS/FAIL verdict that is echoed in the pytest
terminal summary.
"""

from __future__ import annotations

import hashlib
import json
import time
from pathlib import Path

import numpy as np
import pytest
import sympy as sp

import oracles
from conftest import ACCEPTANCE_LINES, random_polynomial, random_problems
from cadorder.cli import main as cli
from cadorder.evaluation import accuracy, bounds, method_time, parse_report_csv
from cadorder.features import extract_features, fit_standardizer
from cadorder.harness import TIMEOUT, LabeledProblem, TimingRecord, label_problem, mock_backend, read_corpus
from cadorder.heuristics import brown, random_choice, sotd
from cadorder.learners import KNNClassifier, KNNConfig, SVMClassifier, SVMConfig
from cadorder.learners.mlp import init_params, loss_and_grad, param_shapes
from cadorder.learners.svm import smo
from cadorder.polyset import Problem, bareiss_determinant, sylvester_matrix
from cadorder.projection import NUM_ORDERINGS


def verdict(n: int, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def digest(*arrays) -> str:
    h = hashlib.sha256()
    for a in arrays:
        h.update(np.ascontiguousarray(a).tobytes() if isinstance(a, np.ndarray) else repr(a).encode())
    return h.hexdigest()


# -- 1: features ---------------------------------------------------------------------

HAND_PROBLEMS = [
    ["x0^2*x1 - 1", "x1*x2 + x0"],
    ["x0"],
    ["x0 + x1 + x2"],
    ["x1"],
    ["x2^5 - 3"],
    ["x0*x1*x2"],
    ["x0^2 + x1^2 + x2^2 - 1"],
    ["x0^2 + x1*x0 + x2"],
    ["x0 - x1", "x0 - 1"],
    ["x0^3 - x1^2", "x1^3 - x2^2", "x2^3 - x0^2"],
    ["x0*x1 - 1", "x1*x2 - 1", "x0*x2 - 1", "x0 + x1 + x2"],
    ["x0^4*x1^3*x2^2 + 7"],
    ["x1^2 - 2", "x2"],
    ["3*x0^2*x1 - x2 + 1"],
    ["x0^2 - x1", "x0^2 + x1", "x0^3*x2 - 2*x1"],
    ["x1*x2^3 + x1^3*x2", "x0^5"],
    ["x0 + 1", "x1 + 1", "x2 + 1"],
    ["x0^2*x2 - x1^2*x2 + x0*x1 - 5"],
    ["x2^2 + x2 + 1", "x1^2 - x1 - 1"],
    ["x0*x1 + x1*x2 + x2*x0", "x0*x1*x2 - 1"],
    ["x0^6 - 1", "x0^3 + x1^3 + x2^3"],
    ["2*x1 - 3*x2", "x0^2*x1^2"],
    ["x0^2 - 1", "x0^2*x1 - x1", "x2^4"],
    ["x1^3*x2 + x0", "x1 - x2", "x0*x1*x2 + x0^2 - 4"],
    ["x0 + x1^2 + x2^3", "x0^3 + x1^2 + x2", "x0*x1*x2"],
]


def test_criterion_1_feature_oracle():
    problems = [Problem.from_strings(f"h{i}", lines) for i, lines in enumerate(HAND_PROBLEMS)]
    start = time.perf_counter()
    got = [extract_features(p) for p in problems]
    elapsed = time.perf_counter() - start
    mismatches = [p.id for p, g in zip(problems, got) if list(g) != oracles.features(p.to_strings())]
    worked = [
        list(got[0]) == [2, 3, 2, 1, 1, 1.0, 1.0, 0.5, 0.5, 0.5, 0.25],
        list(got[1]) == [1, 1, 1, 0, 0, 1, 0, 0, 1, 0, 0],
        list(got[2]) == oracles.features(["x0 + x1 + x2"]),
    ]
    ok = len(problems) == 25 and not mismatches and all(worked) and elapsed < 1.0
    verdict(1, ok, f"25 hand problems, {len(mismatches)} oracle mismatches, {elapsed * 1000:.1f} ms")


# -- 2: Brown ------------------------------------------------------------------------


def test_criterion_2_brown_oracle():
    problems = random_problems(2024, 200, max_polys=5, max_degree=4)
    bad = [p.id for p in problems if set(brown(p)) != oracles.brown(p.to_strings())]
    verdict(2, not bad, f"200 random problems, {len(bad)} set mismatches")


# -- 3: sotd -------------------------------------------------------------------------


def test_criterion_3_sotd_oracle():
    problems = random_problems(303, 100, max_polys=3, max_terms=3, max_degree=2)
    start = time.perf_counter()
    bad = [p.id for p in problems if set(sotd(p)) != oracles.sotd(p.to_strings())]
    elapsed = time.perf_counter() - start
    verdict(3, not bad and elapsed < 60, f"100 random problems, {len(bad)} argmin mismatches, {elapsed:.1f} s")


# -- 4: resultant determinant ----------------------------------------------------------


def test_criterion_4_bareiss_vs_cofactor():
    rng = np.random.default_rng(404)
    pairs = checked = 0
    bad = []
    while pairs < 100:
        p, q = random_polynomial(rng, 4, 4), random_polynomial(rng, 4, 4)
        sizes = [(v, p.degree(v) + q.degree(v)) for v in range(3)
                 if p.degree(v) >= 1 and q.degree(v) >= 1 and p.degree(v) + q.degree(v) <= 6]
        if not sizes:
            continue
        pairs += 1
        for v, _ in sizes:
            m = sylvester_matrix(p, q, v)
            ref = oracles.cofactor_det([[oracles.to_sympy(str(e)).as_expr() for e in row] for row in m])
            got = oracles.to_sympy(str(bareiss_determinant(m))).as_expr()
            checked += 1
            if sp.expand(ref - got) != 0:
                bad.append((str(p), str(q), v))
    verdict(4, not bad, f"100 pairs, {checked} Sylvester matrices up to 6x6, {len(bad)} mismatches")


# -- 5: KNN structure --------------------------------------------------------------------


def knn_check(seed: int):
    rng = np.random.default_rng(seed)
    raw = rng.normal(size=(1000, 11)) * rng.uniform(0.5, 20, size=11) + rng.normal(size=11) * 5
    y = rng.integers(0, 6, size=1000)
    std = fit_standardizer(raw)
    X = std.transform(raw)
    Q = std.transform(rng.normal(size=(500, 11)) * raw.std(axis=0) + raw.mean(axis=0))
    preds = {}
    for weighting in ("distance", "uniform"):
        for k in (1, 5, 15):
            tree = KNNClassifier(KNNConfig(k=k, weighting=weighting, algorithm="ball_tree")).fit(X, y)
            brute = KNNClassifier(KNNConfig(k=k, weighting=weighting, algorithm="brute")).fit(X, y)
            preds[(weighting, k)] = (tree.predict(Q), brute.predict(Q))
    return preds


def test_criterion_5_knn_ball_tree_equals_brute():
    preds = knn_check(505)
    diffs = sum(int(np.sum(a != b)) for a, b in preds.values())
    verdict(5, diffs == 0, f"500 queries x 1000 points x {len(preds)} configs, {diffs} differing predictions")


# -- 6: MLP gradient -------------------------------------------------------------------


def gradient_check(seed: int, points: int = 20, step: float = 1e-5):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(60, 11))
    labels = rng.integers(0, 6, size=60)
    Y = np.eye(6)[labels]
    shapes = param_shapes(11, 18, 6)
    errors = []
    for i in range(points):
        theta = init_params(11, 18, 6, seed=seed + i) * rng.uniform(0.5, 3.0)
        _, analytic = loss_and_grad(theta, X, Y, shapes, "tanh", 5e-5)
        numeric = np.empty_like(theta)
        for j in range(theta.size):
            e = np.zeros_like(theta)
            e[j] = step
            numeric[j] = (loss_and_grad(theta + e, X, Y, shapes, "tanh", 5e-5)[0]
                          - loss_and_grad(theta - e, X, Y, shapes, "tanh", 5e-5)[0]) / (2 * step)
        errors.append(np.linalg.norm(analytic - numeric) / max(np.linalg.norm(analytic), np.linalg.norm(numeric)))
    return np.array(errors)


def test_criterion_6_mlp_gradient():
    errors = gradient_check(606)
    verdict(6, bool(np.all(errors < 1e-5)), f"20 points, tanh, hidden 18, max relative error {errors.max():.2e}")


# -- 7: SVM KKT ---------------------------------------------------------------------------


def svm_toy(seed: int):
    rng = np.random.default_rng(seed)
    y = np.repeat([1.0, -1.0], 100)
    X = rng.normal(size=(200, 2))
    # separable by construction: a gap of width 1 around x = 0
    X[:, 0] = y * (0.5 + np.abs(X[:, 0]))
    return X, y


def svm_check(seed: int):
    C, gamma, tol = 316.0, 0.08, 0.0316
    X, y = svm_toy(seed)
    sq = ((X[:, None, :] - X[None, :, :]) ** 2).sum(axis=2)
    K = np.exp(-gamma * sq)
    sol = smo(K, y, C, tol, 10**6)
    f = K @ (sol.alpha * y) + sol.b
    margin = y * f
    a = sol.alpha
    viol = np.zeros_like(a)
    free = (a > 0) & (a < C)
    viol[a == 0] = np.maximum(0, 1 - margin[a == 0])
    viol[free] = np.abs(margin[free] - 1)
    viol[a == C] = np.maximum(0, margin[a == C] - 1)
    clf = SVMClassifier(SVMConfig(C=C, gamma=gamma, tol=tol)).fit(X, (y > 0).astype(int))
    train_acc = float(np.mean(clf.predict(X) == (y > 0)))
    return sol, viol, train_acc


def test_criterion_7_svm_kkt():
    sol, viol, train_acc = svm_check(707)
    box = bool(np.all((sol.alpha >= 0) & (sol.alpha <= 316.0)))
    ok = box and viol.max() <= 0.0316 and train_acc == 1.0 and abs(np.dot(sol.alpha, svm_toy(707)[1])) < 1e-9
    verdict(7, ok, f"box ok={box}, max KKT violation {viol.max():.4f}, train accuracy {train_acc:.3f}")


# -- 8: labeling protocol -----------------------------------------------------------------


def labeling_trace(tmp_path: Path):
    table = tmp_path / "times.json"
    table.write_text(json.dumps({"p": [5, 6, 7, 9, 12, 70]}))
    counter = tmp_path / "calls"
    if counter.exists():
        counter.unlink()
    spec = mock_backend(table, counter=counter)
    out = label_problem(spec, Problem.from_strings("p", ["x0^2 + x1", "x1*x2 + 1"]), 4, 128)
    calls = [tuple(line.split("\t")[1:]) for line in counter.read_text().splitlines()]
    return out, calls


def test_criterion_8_labeling_protocol(tmp_path):
    out, calls = labeling_trace(tmp_path)
    expected_calls = [(str(o), "4.0") for o in range(6)] + [(str(o), "8.0") for o in range(6)]
    ok = (isinstance(out, LabeledProblem)
          and out.limits_tried == (4.0, 8.0)
          and out.target == 0 and out.target_set == (0,)
          and out.timings.times == (5.0, 6.0, 7.0, TIMEOUT, TIMEOUT, TIMEOUT)
          and calls == expected_calls)
    verdict(8, ok, f"limits {list(out.limits_tried)}, target {out.target}, {len(calls)} backend launches")


# -- 9: metric identities ------------------------------------------------------------------


def mock_timings(seed: int, n: int = 50):
    rng = np.random.default_rng(seed)
    timings, targets = {}, {}
    for i in range(n):
        t = np.round(rng.uniform(1, 60, size=6), 0)  # integer seconds make ties common
        if rng.random() < 0.2:
            t[rng.integers(6)] = np.nan
        times = tuple(TIMEOUT if np.isnan(x) else float(x) for x in t)
        pid = f"m{i:02d}"
        timings[pid] = TimingRecord(pid, times, 128.0)
        finite = [x for x in times if x is not TIMEOUT]
        targets[pid] = tuple(o for o, x in enumerate(times) if x is not TIMEOUT and x == min(finite))
    return timings, targets


def metric_check(seed: int):
    timings, targets = mock_timings(seed)
    b = bounds(timings)
    expected_all6 = 100.0 * float(np.mean([len(t) / 6 for t in targets.values()]))
    oracle = {k: t for k, t in targets.items()}
    all6 = {k: tuple(range(NUM_ORDERINGS)) for k in targets}
    random_acc = [accuracy({k: (random_choice(k, s),) for k in targets}, targets) for s in range(10)]
    return {
        "n_ties": sum(len(t) > 1 for t in targets.values()),
        "oracle_acc": accuracy(oracle, targets),
        "oracle_time": method_time(oracle, timings),
        "min_total": b.min_total,
        "all6_acc": accuracy(all6, targets),
        "all6_time": method_time(all6, timings),
        "random_total": b.random_total,
        "expected": expected_all6,
        "random_mean": float(np.mean(random_acc)),
    }


def test_criterion_9_metric_identities():
    m = metric_check(909)
    ok = (m["n_ties"] > 0
          and abs(m["oracle_acc"] - 100.0) <= 1e-9
          and abs(m["oracle_time"] - m["min_total"]) <= 1e-9
          and abs(m["all6_acc"] - m["expected"]) <= 1e-9
          and abs(m["all6_time"] - m["random_total"]) <= 1e-9
          and abs(m["random_mean"] - m["expected"]) <= 5.0)
    verdict(9, ok, f"oracle {m['oracle_acc']:.1f}%, all-6 {m['all6_acc']:.4f}% vs {m['expected']:.4f}%, "
                   f"random mean of 10 seeds {m['random_mean']:.2f}%")


# -- 10: end-to-end synthetic learnability --------------------------------------------------


def pipeline(workdir: Path, seed: int = 10) -> dict:
    workdir.mkdir(parents=True, exist_ok=True)
    corpus, train, test, models, reports = (workdir / n for n in ("all.jsonl", "train.jsonl", "test.jsonl",
                                                                  "models", "report"))
    assert cli(["synth", "--n", "1200", "--seed", str(seed), "--noise", "0.1", "-o", str(corpus)]) == 0
    assert cli(["split", str(corpus), "--ratio", "0.75", "--seed", str(seed),
                "--train-out", str(train), "--test-out", str(test)]) == 0
    for kind in ("dt", "knn", "mlp"):
        assert cli(["train", str(train), "--kind", kind, "--folds", "5", "--seed", str(seed), "-o", str(models)]) == 0
    model_files = [str(models / f"{k}.model.json") for k in ("dt", "knn", "mlp")]
    assert cli(["evaluate", str(test), "--models", *model_files, "--methods", "dt,knn,mlp,random,random-draw",
                "--seed", str(seed), "-o", str(reports)]) == 0
    return parse_report_csv((reports / "report.csv").read_text())


@pytest.fixture(scope="module")
def pipeline_runs(tmp_path_factory):
    base = tmp_path_factory.mktemp("e2e")
    start = time.perf_counter()
    first = pipeline(base / "run1")
    elapsed = time.perf_counter() - start
    return base, first, elapsed


def test_criterion_10_synthetic_learnability(pipeline_runs):
    base, rows, elapsed = pipeline_runs
    acc = rows["accuracy_percent"]
    baseline = acc["random"]
    margins = {m: acc[m] - baseline for m in ("DT", "KNN", "MLP")}
    ok = all(v >= 20.0 for v in margins.values()) and elapsed < 600
    n_test = len(read_corpus(base / "run1" / "test.jsonl"))
    detail = ", ".join(f"{m} {acc[m]:.1f}%" for m in margins)
    verdict(10, ok, f"{n_test} test problems, random {baseline:.1f}% (draw {acc['random-draw']:.1f}%), "
                    f"{detail}, pipeline {elapsed:.0f} s")


# -- 11: determinism ------------------------------------------------------------------------


def test_criterion_11_determinism(pipeline_runs, tmp_path):
    base, _, _ = pipeline_runs
    pipeline(base / "run2")
    compared = []
    for rel in ("all.jsonl", "train.jsonl", "test.jsonl", "models/dt.model.json", "models/knn.model.json",
                "models/mlp.model.json", "models/dt.cv.csv", "models/knn.cv.csv", "models/mlp.cv.csv",
                "report/report.csv", "report/report.md", "report/histogram.csv"):
        compared.append((base / "run1" / rel).read_bytes() == (base / "run2" / rel).read_bytes())
    # criteria 6-9 recomputed with the same seeds
    compared.append(digest(gradient_check(606, points=3)) == digest(gradient_check(606, points=3)))
    s1, s2 = svm_check(707), svm_check(707)
    compared.append(digest(s1[0].alpha, s1[0].b, s1[1]) == digest(s2[0].alpha, s2[0].b, s2[1]))
    k1, k2 = knn_check(505), knn_check(505)
    compared.append(digest(*(a for pair in k1.values() for a in pair)) == digest(*(a for pair in k2.values() for a in pair)))
    (tmp_path / "a").mkdir()
    (tmp_path / "b").mkdir()
    t1, t2 = labeling_trace(tmp_path / "a"), labeling_trace(tmp_path / "b")
    compared.append(t1[1] == t2[1] and t1[0].timings == t2[0].timings)
    compared.append(metric_check(909) == metric_check(909))
    verdict(11, all(compared), f"{sum(compared)}/{len(compared)} artifacts identical across repeated runs")


# -- 12: external reproduction ----------------------------------------------------------------


def test_criterion_12_external_reproduction():
    # needs Maple with RegularChains as the backend plus the nlsat corpus; the
    # README describes the manual run
    ACCEPTANCE_LINES.append("[SKIP] criterion 12: optional, needs a Maple backend and the nlsat corpus")
    pytest.skip("external CAD system and corpus not available")
