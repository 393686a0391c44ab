import random
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import random_polytope
from mixvol.bodies import corner_simplex, cross_polytope, cube
from mixvol.mixed import (INCLUSION_EXCLUSION, SEGMENT_PROJECTION, SURFACE_MEASURE, MethodNotApplicable,
                          SumCache, applicable_methods, compute, cross_validate, first_mixed_volume,
                          mixed_volume, segment_mixed_volume)
from mixvol.polytope import GeometryError, VPolytope, minkowski_sum

E = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def seg(u):
    return VPolytope([(0,) * len(u), u])


def test_examples():
    C3 = cube(3)
    assert mixed_volume([C3, C3, C3]) == 1
    assert mixed_volume([seg(u) for u in E]) == Fraction(1, 6)
    assert mixed_volume([seg(E[0]), C3, C3]) == Fraction(1, 3)


def test_first_mixed_volume_examples():
    C3 = cube(3)
    assert first_mixed_volume(C3, C3) == pytest.approx(1, abs=1e-12)
    assert first_mixed_volume(seg(E[0]), C3) == pytest.approx(1 / 3, abs=1e-9)
    D = corner_simplex(3)
    assert first_mixed_volume(D, C3) == pytest.approx(float(mixed_volume([D, C3, C3])), abs=1e-9)


def test_segment_projection_examples():
    assert segment_mixed_volume([E[0]], [cube(3), cube(3)]) == Fraction(1, 3)
    O3 = cross_polytope(3)
    # O_3 projects along both diagonals onto a segment of length 2, frame factor 2, over 3*2
    assert segment_mixed_volume([(1, 1, 0), (1, -1, 0)], [O3]) == Fraction(2, 3)
    assert mixed_volume([seg((1, 1, 0)), seg((1, -1, 0)), O3]) == Fraction(2, 3)
    assert segment_mixed_volume(E, []) == Fraction(1, 6)
    assert segment_mixed_volume([E[0], (2, 0, 0)], [O3]) == 0


def test_cross_validate_examples():
    C3, O3, D3 = cube(3), cross_polytope(3), corner_simplex(3)
    r = cross_validate([seg(E[0]), C3, C3])
    assert set(r["results"]) == {INCLUSION_EXCLUSION, SURFACE_MEASURE, SEGMENT_PROJECTION}
    assert r["agree"] and r["discrepancy"] <= 1e-9
    assert cross_validate([D3, D3, D3])["discrepancy"] <= 1e-9
    base = mixed_volume([C3, O3, D3])
    assert mixed_volume([D3, C3, O3]) == base == mixed_volume([O3, D3, C3])


def test_method_errors():
    C3 = cube(3)
    with pytest.raises(GeometryError):
        mixed_volume([C3, C3])
    with pytest.raises(GeometryError):
        mixed_volume([C3, C3, cube(2)])
    with pytest.raises(MethodNotApplicable):
        compute([C3, C3, C3], "proj")
    with pytest.raises(MethodNotApplicable):
        compute([corner_simplex(3), C3, cross_polytope(3)], "sam")
    assert applicable_methods([C3, C3, C3]) == [INCLUSION_EXCLUSION, SURFACE_MEASURE]


def test_monotone_nested_hulls():
    rng = random.Random(6)
    cache = SumCache()
    for i in range(15):
        n = 2 + i % 2
        K = random_polytope(rng, n, n + 3)
        L = random_polytope(rng, n, n + 2)
        extra = [Fraction(rng.randint(-6, 6), 2) for _ in range(n)]
        L2 = VPolytope(list(L.vertices) + [extra])
        a = mixed_volume([L] + [K] * (n - 1), cache)
        b = mixed_volume([L2] + [K] * (n - 1), cache)
        assert 0 <= a <= b


small = st.fractions(min_value=-2, max_value=2, max_denominator=3)


@st.composite
def bodies2(draw):
    pts = draw(st.lists(st.tuples(small, small), min_size=1, max_size=5, unique=True))
    return VPolytope(pts)


@given(bodies2(), bodies2(), bodies2(), st.fractions(min_value=0, max_value=3, max_denominator=5))
def test_multilinear_symmetric_2d(A, B, C, lam):
    v = mixed_volume([A, B])
    assert v == mixed_volume([B, A]) >= 0
    assert mixed_volume([minkowski_sum(A, C.scaled(lam)) if lam else A, B]) == \
        v + lam * mixed_volume([C, B])


@given(bodies2(), bodies2(), st.tuples(small, small))
def test_translation_invariance_2d(A, B, x):
    assert mixed_volume([A.translated(x), B]) == mixed_volume([A, B])


@given(st.lists(st.tuples(*[st.integers(-3, 3)] * 3), min_size=1, max_size=2))
def test_segment_route_matches_ie(dirs):
    assume(all(any(u) for u in dirs))
    K = cross_polytope(3)
    others = [K] * (3 - len(dirs))
    assert segment_mixed_volume(dirs, others) == mixed_volume([seg(u) for u in dirs] + others)
