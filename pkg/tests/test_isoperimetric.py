import math
import random
from fractions import Fraction

import numpy as np
import pytest

from conftest import random_polytope
from mixvol.bodies import box, corner_simplex, cross_polytope, cube, cylinder, regular_simplex, sliced_cube
from mixvol.isoperimetric import (BOUNDARY, EXCLUDED, INCONCLUSIVE, embed_facet, excluding_check,
                                  facet_ratios, isop, isop_lower_bound, random_rotation, rotate,
                                  surface_measure)
from mixvol.polytope import GeometryError, VPolytope


def test_surface_measure_closed():
    for P in (cube(3), cross_polytope(3), corner_simplex(4), regular_simplex(3)):
        S = surface_measure(P)
        assert all(a.weight > 0 for a in S.atoms)
        assert np.linalg.norm(S.resultant()) <= 1e-9 * S.total
        assert S.total == pytest.approx(P.surface_area)


def test_goldens():
    assert isop(cube(3)) == pytest.approx(2)
    rep = facet_ratios(box([2, 1, 1]))
    assert rep.isop_K == pytest.approx(5 / 3)
    assert rep.max_ratio == pytest.approx(6 / 5)
    assert rep.max_ratio == max(r.ratio for r in rep.per_facet)
    assert rep.witness_normal in ((1, 0, 0), (-1, 0, 0))
    assert facet_ratios(cross_polytope(4)).max_ratio == pytest.approx(math.sqrt(3))


def test_cylinder_formula():
    # base facet ratio t n/(n-1) |dL| / (2|L| + t|dL|) for L the unit square, n = 3
    for t in (Fraction(1, 2), Fraction(2), Fraction(7, 3)):
        rep = facet_ratios(cylinder(cube(2), t))
        base = next(r for r in rep.per_facet if r.normal == (0, 0, -1))
        expect = float(t) * 3 / 2 * 4 / (2 + float(t) * 4)
        assert base.ratio == pytest.approx(expect, abs=1e-9)


def test_verdicts():
    assert excluding_check(box([2, 1, 1])).status == EXCLUDED
    assert excluding_check(regular_simplex(3)).status == INCONCLUSIVE
    assert excluding_check(cube(3)).status == BOUNDARY


def test_scope_guards():
    with pytest.raises(GeometryError):
        facet_ratios(cube(2))
    with pytest.raises(GeometryError):
        isop(VPolytope([(0,), (1,)]))


def test_rotation_invariance():
    rng = np.random.default_rng(0)
    for P in (box([2, 1, 1]), corner_simplex(3), cross_polytope(3)):
        R = random_rotation(3, rng)
        assert isop(rotate(P, R)) == pytest.approx(isop(P), abs=1e-9)


def test_scaling_law_and_lower_bound():
    rng = random.Random(7)
    for i in range(15):
        n = 2 + i % 3
        P = random_polytope(rng, n, n + 4)
        lam = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        assert isop(P.scaled(lam)) == pytest.approx(isop(P) / float(lam), rel=1e-9)
        assert isop(P) >= isop_lower_bound(n, float(P.volume)) - 1e-9


def test_facet_blow_up():
    vals = []
    for k in range(2, 9):
        P = sliced_cube(3, Fraction(1, 2 ** k))
        F = P.facet_by_normal((1, 1, 1))
        vals.append(isop(embed_facet(F, P)))
    assert all(b > 1.9 * a for a, b in zip(vals, vals[1:]))
    assert vals[-1] > 500


def test_embed_facet_measure():
    P = corner_simplex(3)
    F = P.facet_by_normal((1, 1, 1))
    assert float(embed_facet(F, P).volume) == pytest.approx(F.measure, abs=1e-12)


def test_examples_table():
    from mixvol.examples import examples_table, table_markdown

    rows = examples_table(half_ball_res=100)
    assert all(r.ok for r in rows), [r for r in rows if not r.ok]
    assert table_markdown(rows).count("\n") == len(rows) + 1
