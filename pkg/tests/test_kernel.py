import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from conftest import random_polytope
from mixvol import linalg as la
from mixvol.bodies import corner_simplex, cross_polytope, cube, regular_simplex
from mixvol.polytope import (AffineMap, DegenerateError, DimensionMismatchError, HPolytope,
                             InfeasibleError, SingularMapError, UnboundedError, VPolytope,
                             affine_image, convex_hull, minkowski_sum, project_out, project_rational,
                             vertex_enumeration)

E = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]


def test_hull_examples():
    D = convex_hull([(0, 0, 0)] + E)
    assert D.n_vertices == 4 and len(D.facets) == 4
    C = convex_hull(list(cube(3).vertices) + [(Fraction(1, 2),) * 3])
    assert C.n_vertices == 8
    O = cross_polytope(3)
    assert O.n_vertices == 6 and len(O.facets) == 8


def test_lower_dimensional_hull():
    sq = minkowski_sum(VPolytope([(0, 0, 0), E[0]]), VPolytope([(0, 0, 0), E[1]]))
    assert sq.affine_dim == 2 and sq.n_vertices == 4 and not sq.is_full_dimensional
    with pytest.raises(DegenerateError):
        sq.volume
    assert VPolytope([(1, 2)]).affine_dim == 0


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        VPolytope([(0, 0), (1, 0, 0)])
    with pytest.raises(DimensionMismatchError):
        minkowski_sum(cube(2), cube(3))


def test_volume_examples():
    assert cube(3).volume == 1
    assert corner_simplex(3).volume == Fraction(1, 6)
    assert cross_polytope(3).volume == Fraction(4, 3)
    for n in (2, 3, 4):
        assert corner_simplex(n).volume == Fraction(1, math.factorial(n))
        assert cross_polytope(n).volume == Fraction(2 ** n, math.factorial(n))


def test_facet_measures():
    assert all(F.measure == 1 for F in cube(3).facets)
    for F in cross_polytope(3).facets:
        assert F.measure == pytest.approx(math.sqrt(3) / 2, abs=1e-12)
    diag = corner_simplex(3).facet_by_normal((1, 1, 1))
    assert diag.measure_sq == Fraction(3, 4)


def test_surface_area_examples():
    assert cube(3).surface_area == pytest.approx(6, abs=1e-12)
    assert corner_simplex(3).surface_area == pytest.approx((3 + math.sqrt(3)) / 2, abs=1e-12)
    assert regular_simplex(3).surface_area == pytest.approx(2 * math.sqrt(3), abs=1e-9)


def test_minkowski_examples():
    p = (Fraction(1, 3), 2, -1)
    assert minkowski_sum(cube(3), VPolytope([p])) == cube(3).translated(p)
    assert minkowski_sum(cube(3), cube(3)).volume == 8


def test_support_examples():
    assert cube(3).support(E[0]) == 1
    assert cross_polytope(3).support((1, 1, 1)) == 1
    assert corner_simplex(3).support((-1, 0, 0)) == 0


def test_projection_examples():
    assert project_out(cube(3), [E[0]]).volume == 1
    seg = project_out(cross_polytope(3), [E[0], E[1]])
    assert set(seg.vertices) == {(-1,), (1,)}
    quad = project_out(cross_polytope(3), [(1, 1, 0)])
    assert float(quad.volume) == pytest.approx(math.sqrt(2), abs=1e-12)
    Q, B = project_rational(cross_polytope(3), [(1, 1, 0)])
    assert float(Q.volume) * math.sqrt(la.det([[la.dot(b, c) for c in B] for b in B])) == \
        pytest.approx(math.sqrt(2), abs=1e-12)


def test_projection_dependent_directions():
    with pytest.raises(ValueError):
        project_out(cube(3), [E[0], (2, 0, 0)])


def test_affine_image_examples():
    assert affine_image(cube(3), AffineMap.identity(3)) == cube(3)
    assert affine_image(cube(3), AffineMap.diagonal([2, 1, 1])).volume == 2
    with pytest.raises(SingularMapError):
        AffineMap([[1, 0], [2, 0]])


def test_vertex_enumeration_examples():
    cons = [(tuple(s * int(i == j) for j in range(3)), 1) for i in range(3) for s in (1, -1)]
    assert vertex_enumeration(HPolytope(3, cons, (0, 0, 0))) == \
        VPolytope([(a, b, c) for a in (-1, 1) for b in (-1, 1) for c in (-1, 1)])
    D = corner_simplex(3)
    assert vertex_enumeration(D.to_hpolytope()) == D
    t = Fraction(1, 3)
    cons2 = [(a, 1 + t if a == (1, 0, 0) else b) for a, b in cons]
    assert vertex_enumeration(HPolytope(3, cons2, (0, 0, 0))).volume == (2 + t) * 4


def test_vertex_enumeration_errors():
    with pytest.raises(InfeasibleError):
        HPolytope(2, [((1, 0), 0)], (1, 0))
    with pytest.raises(UnboundedError):
        vertex_enumeration(HPolytope(2, [((1, 0), 1), ((0, 1), 1)], (0, 0)))


def test_round_trip_random_hulls():
    rng = random.Random(11)
    for i in range(50):
        n = 2 + i % 3
        P = random_polytope(rng, n, n + 4)
        assert vertex_enumeration(P.to_hpolytope()) == P


def test_minkowski_relation_and_facet_exactness():
    rng = random.Random(12)
    for i in range(20):
        n = 2 + i % 3
        P = random_polytope(rng, n, n + 5)
        total = np.zeros(n)
        for F in P.facets:
            total += F.measure * np.array(F.unit_normal)
            for v in F.vertex_indices:
                assert la.dot(P.vertices[v], F.primitive_normal) == F.offset
            assert F.measure > 0
        assert np.linalg.norm(total) <= 1e-9 * P.surface_area


small = st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def polytopes(draw, n=3):
    pts = draw(st.lists(st.tuples(*[small] * n), min_size=n + 1, max_size=n + 5, unique=True))
    P = VPolytope(pts)
    assume(P.is_full_dimensional)
    return P


@st.composite
def affine_maps(draw, n=3):
    m = draw(st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n))
    assume(la.det(m) != 0)
    return AffineMap(m, draw(st.tuples(*[small] * n)))


@given(polytopes(), affine_maps())
def test_affine_volume_scaling(P, T):
    assert affine_image(P, T).volume == abs(T.det) * P.volume


@given(polytopes(), polytopes(), st.tuples(*[st.integers(-4, 4)] * 3))
def test_support_additive_and_superadditive(P, Q, u):
    S = minkowski_sum(P, Q)
    assert S.support(u) == P.support(u) + Q.support(u)
    assert S.volume >= P.volume + Q.volume


@given(polytopes(n=2))
def test_hull_vertices_are_extreme(P):
    for v in P.vertices:
        rest = [w for w in P.vertices if w != v]
        assert VPolytope(rest, dim=2) != P
