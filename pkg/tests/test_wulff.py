import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_polytope
from mixvol import linalg as la
from mixvol.bodies import box, corner_simplex, cross_polytope, cube
from mixvol.wulff import (CollapsedBodyError, SphereFunction, WulffFamily, alexandrov_check,
                          chebyshev_center, counterexample_construct, exact_sqrt, family_at,
                          lagrange_derivative_at_zero, lagrange_eval, pointwise_check, wulff_shape)


def test_wulff_shape_of_cube():
    C = cube(3)
    W = wulff_shape(C.normals(), {u: C.support(u) for u in C.normals()})
    assert W == C
    x, r = chebyshev_center([(u, C.support(u)) for u in C.normals()])
    assert r == pytest.approx(0.5)


def test_indicator_family():
    C = cube(3)
    F = WulffFamily(C, SphereFunction.indicator((1, 0, 0), C.normals()))
    assert family_at(F, 0) == C
    assert family_at(F, Fraction(1, 4)).volume == Fraction(5, 4)
    r = alexandrov_check(F)
    assert r.lhs_volume_derivative == 1 and r.lhs_mixed_derivative == Fraction(1, 3)
    assert r.agrees(1e-12)


def test_constant_family_derivative_is_surface_area():
    C = cube(3)
    r = alexandrov_check(WulffFamily(C, SphereFunction.constant(1, C.normals())))
    assert r.lhs_volume_derivative == 6


def test_non_simple_polytope():
    O = cross_polytope(3)
    rng = random.Random(1)
    f = SphereFunction.from_pairs((u, Fraction(rng.randint(-4, 4), 4)) for u in O.normals())
    assert alexandrov_check(WulffFamily(O, f)).agrees(1e-9)


def test_pointwise_and_collapse():
    C = cube(3)
    F = WulffFamily(C, SphereFunction.indicator((1, 0, 0), C.normals()))
    rep = pointwise_check(F, (1, 0, 0), [Fraction(1, 64), Fraction(-1, 64)])
    assert rep.all_match and rep.concave and all(r.quotient == 1 for r in rep.rows)
    other = pointwise_check(F, (0, 1, 0), [Fraction(1, 64)])
    assert other.rows[0].quotient == 0
    with pytest.raises(CollapsedBodyError):
        family_at(F, -2)
    assert F.t_min_estimate == Fraction(-1, 2)


def test_missing_directions():
    with pytest.raises(ValueError):
        WulffFamily(cube(3), SphereFunction.from_pairs([((1, 0, 0), 1)]))


def test_lagrange_helpers():
    nodes = [Fraction(k, 8) for k in range(4)]
    vals = [1 + 3 * t - 2 * t ** 3 for t in nodes]
    assert lagrange_derivative_at_zero(nodes, vals) == 3
    assert lagrange_eval(nodes, vals, Fraction(5, 8)) == 1 + 3 * Fraction(5, 8) - 2 * Fraction(5, 8) ** 3


def test_exact_sqrt():
    assert exact_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert exact_sqrt(Fraction(2)) is None


def test_counterexample_on_box():
    r = counterexample_construct(box([2, 1, 1]), (1, 0, 0), Fraction(1, 20), sphere_res=80)
    assert r.hypothesis_holds and r.witness.f_value < 0 and r.c_exceeds_2c0
    assert r.c0_exact == Fraction(2, 3)
    assert float(r.sigma) == pytest.approx(r.sigma_target, rel=0.01)


def test_counterexample_on_simplex_stays_nonnegative():
    with pytest.warns(UserWarning, match="no negativity"):
        r = counterexample_construct(corner_simplex(3), (1, 1, 1), Fraction(1, 20), sphere_res=60)
    assert not r.hypothesis_holds
    assert r.witness.f_value >= 0


@given(st.integers(0, 10_000))
def test_family_properties(seed):
    rng = random.Random(seed)
    K = random_polytope(rng, 2 + seed % 2, 5, span=3)
    f = SphereFunction.from_pairs((u, Fraction(rng.randint(0, 4), 4)) for u in K.normals())
    F = WulffFamily(K, f)
    ts = [Fraction(1, 64), Fraction(1, 32), Fraction(1, 16)]
    prev = family_at(F, 0)
    assert prev == K
    for t in ts:
        W = family_at(F, t)
        offsets = F.offsets(t)
        for u, off in zip(F.omega, offsets):
            assert W.support(u) <= off
        # f >= 0, so W_s is contained in W_t for s < t
        for v in prev.vertices:
            assert all(la.dot(u, v) <= off for u, off in zip(F.omega, offsets))
        prev = W
    for u in F.omega:
        assert pointwise_check(F, u, ts).concave
