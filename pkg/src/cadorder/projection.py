"""Projection of polynomial sets, one variable at a time.

The operator is the plain Collins-style set: every coefficient with respect
to the eliminated variable, the discriminant of each polynomial of degree at
least two, and the resultant of each pair.  Reducta and subresultant
refinements are deliberately left out.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Sequence

from .polyset import Polynomial, Problem, canonicalize, discriminant, resultant, var_name

# index -> elimination order, first entry projected first
ORDERINGS: tuple[tuple[int, int, int], ...] = (
    (0, 1, 2),
    (0, 2, 1),
    (1, 0, 2),
    (1, 2, 0),
    (2, 0, 1),
    (2, 1, 0),
)
NUM_ORDERINGS = len(ORDERINGS)
_INDEX = {perm: i for i, perm in enumerate(ORDERINGS)}


def ordering_index(elimination: Sequence[int]) -> int:
    return _INDEX[tuple(elimination)]


def ordering_label(index: int) -> str:
    """Comma-separated elimination list, e.g. ``"x2,x1,x0"``."""
    return ",".join(var_name(v) for v in ORDERINGS[index])


def parse_ordering(text: str) -> int:
    text = text.strip()
    if text.isdigit():
        idx = int(text)
        if not 0 <= idx < NUM_ORDERINGS:
            raise ValueError(f"ordering index out of range: {idx}")
        return idx
    try:
        perm = tuple(int(tok.strip().lstrip("x")) for tok in text.split(","))
        return _INDEX[perm]
    except (ValueError, KeyError):
        raise ValueError(f"not an ordering: {text!r}") from None


def project_once(polys: Iterable[Polynomial], v: int) -> tuple[Polynomial, ...]:
    """Eliminate variable ``v`` from a set of canonical polynomials."""
    polys = list(polys)
    out: list[Polynomial] = []
    involved = []
    for p in polys:
        d = p.degree(v)
        if d == 0:
            out.append(p)
            continue
        involved.append(p)
        out.extend(p.coefficients(v).values())
        if d >= 2:
            out.append(discriminant(p, v))
    for p, q in combinations(involved, 2):
        out.append(resultant(p, q, v))
    return canonicalize(out)


def projection_levels(problem: Problem | Sequence[Polynomial], ordering: int) -> list[tuple[Polynomial, ...]]:
    """Input set followed by the result of each successive projection.

    For three variables there are three levels; the last one is univariate
    in the final variable (possibly empty).
    """
    polys = problem.polynomials if isinstance(problem, Problem) else tuple(problem)
    elim = ORDERINGS[ordering]
    levels = [tuple(polys)]
    for v in elim[:-1]:
        levels.append(project_once(levels[-1], v))
    return levels
