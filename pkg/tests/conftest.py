import os
import random
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings

from mixvol.polytope import VPolytope

settings.register_profile("repo", deadline=None, derandomize=True, max_examples=30,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))

# one line per acceptance criterion, printed at the end of the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def random_polytope(rng: random.Random, n: int, k: int, span: int = 4) -> VPolytope:
    """Hull of k random rational points, retried until full-dimensional."""
    while True:
        P = VPolytope([[Fraction(rng.randint(-span, span), rng.randint(1, 3)) for _ in range(n)]
                       for _ in range(k)])
        if P.is_full_dimensional:
            return P


def random_segment(rng: random.Random, n: int, span: int = 3) -> VPolytope:
    while True:
        u = [rng.randint(-span, span) for _ in range(n)]
        if any(u):
            return VPolytope([[0] * n, u])


@pytest.fixture
def rng():
    return random.Random(20240531)
