from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from cadorder.polyset import Polynomial, Problem  # noqa: E402

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

exponents = st.tuples(*(st.integers(0, 3) for _ in range(3)))
coefficients = st.integers(-9, 9).filter(bool)
polynomials = st.dictionaries(exponents, coefficients, max_size=5).map(Polynomial)
nonzero_polynomials = st.dictionaries(exponents, coefficients, min_size=1, max_size=5).map(Polynomial)


def random_polynomial(rng: np.random.Generator, max_terms: int = 4, max_degree: int = 4) -> Polynomial:
    """Sparse polynomial of total degree at most ``max_degree``."""
    terms = {}
    for _ in range(int(rng.integers(1, max_terms + 1))):
        e = [0, 0, 0]
        budget = int(rng.integers(0, max_degree + 1))
        for v in rng.permutation(3):
            e[v] = int(rng.integers(0, budget + 1))
            budget -= e[v]
        terms[tuple(e)] = int(rng.integers(1, 6)) * (1 if rng.random() < 0.5 else -1)
    return Polynomial(terms)


def random_problems(seed: int, count: int, max_polys: int = 5, max_terms: int = 4,
                    max_degree: int = 4) -> list[Problem]:
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        polys = [random_polynomial(rng, max_terms, max_degree)
                 for _ in range(int(rng.integers(1, max_polys + 1)))]
        if all(p.is_constant() for p in polys):
            continue
        out.append(Problem.from_polynomials(f"r{len(out)}", polys))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
