"""Synthetic corpora with a planted fastest ordering.

Problems are random sparse polynomial sets.  The planted rule eliminates
variables in increasing order of (maximum degree, share of monomials
containing the variable, index), i.e. a deterministic function of features
3-5 and 9-11.  A fraction ``noise`` of problems get a different, uniformly
drawn fastest ordering.  Times for the other orderings are strictly slower.
"""

from __future__ import annotations

import numpy as np

from .features import extract_features
from .harness import TIMEOUT, CorpusEntry, TimingRecord, labeled_from_timings
from .polyset import EmptyProblemError, NUM_VARS, Polynomial, Problem
from .projection import NUM_ORDERINGS, ordering_index


def random_problem(rng: np.random.Generator, pid: str, max_polys: int = 5, max_terms: int = 4,
                   max_degree: int = 4) -> Problem:
    """Random sparse polynomials with total degree at most ``max_degree``.

    Each problem draws a per-variable degree cap, so variables differ in
    how heavily they occur.
    """
    while True:
        caps = rng.integers(0, max_degree + 1, size=NUM_VARS)
        if not caps.any():
            continue
        polys = []
        for _ in range(int(rng.integers(1, max_polys + 1))):
            terms = {}
            for _ in range(int(rng.integers(1, max_terms + 1))):
                e = [0] * NUM_VARS
                budget = int(rng.integers(1, max_degree + 1))
                for v in rng.permutation(NUM_VARS):
                    e[v] = int(rng.integers(0, min(caps[v], budget) + 1))
                    budget -= e[v]
                terms[tuple(e)] = int(rng.choice([-5, -4, -3, -2, -1, 1, 2, 3, 4, 5]))
            polys.append(Polynomial(terms))
        try:
            return Problem.from_polynomials(pid, polys)
        except EmptyProblemError:
            continue


def planted_ordering(problem: Problem) -> int:
    f = extract_features(problem)
    key = sorted(range(NUM_VARS), key=lambda v: (f[2 + v], f[8 + v], v))
    return ordering_index(key)


def synthetic_corpus(n: int, seed: int = 0, noise: float = 0.1, limit: float = 128.0,
                     prefix: str = "syn", max_polys: int = 5, max_degree: int = 4) -> list[CorpusEntry]:
    """``n`` labeled entries whose unique fastest ordering follows the planted rule."""
    rng = np.random.default_rng(seed)
    out = []
    for k in range(n):
        problem = random_problem(rng, f"{prefix}{k:05d}", max_polys=max_polys, max_degree=max_degree)
        best = planted_ordering(problem)
        if rng.random() < noise:
            best = int(rng.choice([o for o in range(NUM_ORDERINGS) if o != best]))
        base = float(np.exp(rng.normal(0.0, 1.0)))
        times = []
        for o in range(NUM_ORDERINGS):
            t = base if o == best else base * (1.0 + rng.uniform(0.05, 40.0))
            t = round(t, 6)
            times.append(TIMEOUT if t > limit else t)
        record = TimingRecord(problem.id, tuple(times), limit)
        lp = labeled_from_timings(problem, record, (limit,))
        entry = CorpusEntry(problem)
        entry.apply(lp)
        out.append(entry)
    return out


def timing_table(entries) -> dict[str, list]:
    """Mock-backend table (``null`` for timeouts) for the given entries."""
    return {
        e.id: [None if t is TIMEOUT else t for t in e.timings.times]
        for e in entries
    }
