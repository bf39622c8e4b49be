"""Human-made ordering heuristics and the random baseline.

Both heuristics return every ordering they cannot tell apart, as a sorted
tuple of ordering indices.  Evaluation scores these tie sets directly.
"""

from __future__ import annotations

import hashlib
from itertools import groupby, permutations, product

from .polyset import NUM_VARS, Problem
from .projection import NUM_ORDERINGS, ORDERINGS, ordering_index, projection_levels

OrderingSet = tuple[int, ...]


def brown_criteria(problem: Problem) -> list[tuple[int, int, int]]:
    """Per-variable (max degree, max total degree of containing terms, containing term count)."""
    crit = []
    for v in range(problem.num_vars):
        deg = tdeg = count = 0
        for p in problem.polynomials:
            for e in p.terms:
                if e[v]:
                    deg = max(deg, e[v])
                    tdeg = max(tdeg, sum(e))
                    count += 1
        crit.append((deg, tdeg, count))
    return crit


def brown(problem: Problem) -> OrderingSet:
    """Eliminate low-degree, low-total-degree, rarely occurring variables first."""
    crit = brown_criteria(problem)
    ranked = sorted(range(problem.num_vars), key=lambda v: crit[v])
    groups = [list(g) for _, g in groupby(ranked, key=lambda v: crit[v])]
    out = set()
    for choice in product(*(permutations(g) for g in groups)):
        out.add(ordering_index(tuple(v for part in choice for v in part)))
    return tuple(sorted(out))


def sotd_value(problem: Problem, ordering: int) -> int:
    """Sum of monomial total degrees over all projection levels, input included."""
    return sum(
        sum(sum(e) for e in p.terms)
        for level in projection_levels(problem, ordering)
        for p in level
    )


def sotd_values(problem: Problem) -> list[int]:
    return [sotd_value(problem, o) for o in range(NUM_ORDERINGS)]


def sotd(problem: Problem) -> OrderingSet:
    values = sotd_values(problem)
    best = min(values)
    return tuple(o for o, val in enumerate(values) if val == best)


def random_choice(problem: Problem | str, seed: int) -> int:
    """Uniform ordering, a pure function of (seed, problem id)."""
    pid = problem if isinstance(problem, str) else problem.id
    digest = hashlib.sha256(f"{seed}:{pid}".encode()).digest()
    return int.from_bytes(digest[:8], "big") % NUM_ORDERINGS


def single_pick(orderings: OrderingSet) -> int:
    """Deployment pick from a tie set: the lowest index."""
    return min(orderings)


HEURISTICS = {"brown": brown, "sotd": sotd}

__all__ = [
    "ORDERINGS", "NUM_VARS", "brown", "brown_criteria", "sotd", "sotd_value",
    "sotd_values", "random_choice", "single_pick", "HEURISTICS",
]
