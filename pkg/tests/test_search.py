import numpy as np
import pytest

from mixvol.bodies import box, regular_simplex
from mixvol.search import (RatioEvaluator, affine_search, is_simplex, n_params, affine_probe,
                           spd_from_params)
from mixvol.isoperimetric import facet_ratios


def test_spd_parametrization():
    rng = np.random.default_rng(1)
    for n in (2, 3, 4):
        T = spd_from_params(rng.normal(size=n_params(n)), n)
        assert np.allclose(T, T.T)
        assert np.all(np.linalg.eigvalsh(T) > 0)
        assert np.linalg.det(T) == pytest.approx(1.0)


def test_evaluator_matches_exact_ratios():
    P = box([2, 1, 1])
    ev = RatioEvaluator(P)
    exact = {r.normal: r.ratio for r in facet_ratios(P).per_facet}
    got = ev.ratios(np.eye(3))
    for u, r in zip(ev.normals, got):
        assert r == pytest.approx(exact[u], abs=1e-12)


def test_search_reproducible_and_rechecked():
    P = box([2, 1, 1])
    a = affine_search(P, budget=80, seed=3)
    b = affine_search(P, budget=80, seed=3)
    assert a.trace == b.trace and a.best_ratio == b.best_ratio
    assert a.best_ratio == pytest.approx(a.search_ratio, rel=1e-7)
    assert a.best_ratio >= 1.2 - 1e-9
    assert a.evaluations <= 80


def test_search_jobs_identical():
    P = box([2, 1, 1])
    assert affine_search(P, budget=60, seed=1, jobs=2).trace == \
        affine_search(P, budget=60, seed=1).trace


def test_simplex_stays_below_one():
    res = affine_search(regular_simplex(3), budget=300, seed=0)
    assert res.best_ratio <= 1 + 1e-6


def test_probe_reports():
    rep = affine_probe("hull", trials=3, budget=30, seed=2)
    assert len(rep["trials"]) == 3 and rep["seed"] == 2
    simp = affine_probe("simplex", trials=2, budget=30, seed=2)
    assert all(r["simplex"] and not r["exceeds_one"] for r in simp["trials"])
    assert is_simplex(regular_simplex(3))
    with pytest.raises(ValueError):
        affine_probe("sphere")
