"""Independent reference implementations used by the tests.

Everything here goes through sympy or plain brute force and never through
the package's own polynomial arithmetic, so agreement is meaningful.
"""

from __future__ import annotations

from functools import reduce
from itertools import combinations
from math import gcd

import numpy as np
import sympy as sp
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

X = sp.symbols("x0 x1 x2")
_TRANSFORMS = standard_transformations + (convert_xor,)

# elimination orders, same indexing as the package
ORDERS = [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]


def to_sympy(text: str) -> sp.Poly:
    return sp.Poly(parse_expr(text, local_dict={str(s): s for s in X}, transformations=_TRANSFORMS), *X)


def monomials(texts):
    """List (per polynomial) of exponent tuples of nonzero terms."""
    return [[m for m, c in to_sympy(t).terms() if c != 0] for t in texts]


# -- features ----------------------------------------------------------------


def features(texts) -> list[float]:
    polys = monomials(texts)
    n_poly = len(polys)
    flat = [m for p in polys for m in p]
    out = [float(n_poly), float(max(sum(m) for m in flat))]
    for v in range(3):
        out.append(float(max(m[v] for m in flat)))
    for v in range(3):
        out.append(sum(1 for p in polys if any(m[v] > 0 for m in p)) / n_poly)
    for v in range(3):
        out.append(sum(1 for m in flat if m[v] > 0) / len(flat))
    return out


# -- Brown -------------------------------------------------------------------


def brown(texts) -> set[int]:
    flat = [m for p in monomials(texts) for m in p]

    def triple(v):
        containing = [m for m in flat if m[v] > 0]
        return (
            max((m[v] for m in containing), default=0),
            max((sum(m) for m in containing), default=0),
            len(containing),
        )

    out = set()
    for idx, order in enumerate(ORDERS):
        keys = [triple(v) for v in order]
        if all(keys[i] <= keys[i + 1] for i in range(2)):
            out.add(idx)
    return out


# -- sotd --------------------------------------------------------------------


def _normalize(expr) -> sp.Poly | None:
    p = sp.Poly(sp.expand(expr), *X)
    if p.is_zero or p.total_degree() == 0:
        return None
    coeffs = [int(c) for c in p.coeffs()]
    g = reduce(gcd, coeffs, 0)
    terms = dict(p.terms())
    lead = terms[max(terms)]  # lex-largest exponent tuple
    if lead < 0:
        g = -g
    return sp.Poly(p.as_expr() / g, *X)


def _project(polys, v):
    xv = X[v]
    out, involved = [], []
    for p in polys:
        e = p.as_expr()
        d = sp.degree(e, xv)
        if d == 0:
            out.append(e)
            continue
        involved.append(e)
        out.extend(sp.Poly(e, xv).all_coeffs())
        if d >= 2:
            out.append(sp.discriminant(e, xv))
    for a, b in combinations(involved, 2):
        out.append(sp.resultant(a, b, xv))
    seen = []
    for e in out:
        q = _normalize(e)
        if q is not None and q not in seen:
            seen.append(q)
    return seen


def sotd_values(texts) -> list[int]:
    base = [q for q in (_normalize(to_sympy(t).as_expr()) for t in texts) if q is not None]
    values = []
    for order in ORDERS:
        level, total = base, 0
        for step in range(3):
            total += sum(sum(m) for p in level for m, c in p.terms() if c != 0)
            if step < 2:
                level = _project(level, order[step])
        values.append(total)
    return values


def sotd(texts) -> set[int]:
    vals = sotd_values(texts)
    return {i for i, v in enumerate(vals) if v == min(vals)}


# -- determinants ------------------------------------------------------------


def cofactor_det(m):
    """Laplace expansion along the first row, any commutative entries."""
    n = len(m)
    if n == 1:
        return m[0][0]
    total = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        total += (-1) ** j * m[0][j] * cofactor_det(minor)
    return total


# -- KNN ---------------------------------------------------------------------


def knn_neighbors(train, q, k):
    d = ((train - q) ** 2).sum(axis=1)
    return np.lexsort((np.arange(len(train)), d))[:k]

