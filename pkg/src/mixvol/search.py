"""Affine-position search for the facet Isop ratio, and the random prober built on it.

Isop ratios are invariant under rotations and scaling, so T ranges over
unit-determinant SPD matrices T = L L^T / det^(1/n) with L lower triangular
in log-Cholesky coordinates. The objective is evaluated in floating point on
a triangulation fixed once from the exact hull (a linear map carries the
triangulation along), and the winner is rechecked through the exact pipeline.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from . import linalg as la
from .isoperimetric import facet_ratios
from .polytope import AffineMap, GeometryError, VPolytope, affine_image

CLIP = 3.0


def n_params(n: int) -> int:
    return n * (n + 1) // 2


def spd_from_params(theta: Sequence[float], n: int) -> np.ndarray:
    """Unit-determinant SPD matrix from log-Cholesky coordinates (clipped to +-CLIP)."""
    th = np.clip(np.asarray(theta, dtype=float), -CLIP, CLIP)
    L = np.zeros((n, n))
    idx = np.tril_indices(n)
    L[idx] = th
    d = np.diag_indices(n)
    L[d] = np.exp(L[d])
    T = L @ L.T
    return T / np.linalg.det(T) ** (1.0 / n)


def _gram_measure(E: np.ndarray) -> np.ndarray:
    """sqrt(det(E E^T)) for a stack of k x n edge matrices."""
    if E.shape[1] == 0:
        return np.ones(E.shape[0])
    G = E @ np.swapaxes(E, 1, 2)
    return np.sqrt(np.maximum(np.linalg.det(G), 0.0))


class RatioEvaluator:
    """Fast floating evaluation of facet Isop ratios of T P.

    Each facet keeps its triangulating simplices; its boundary is the set of
    ridge simplices used by exactly one of them.
    """

    def __init__(self, P: VPolytope):
        if P.dim < 3:
            raise GeometryError("facet ratios need n >= 3")
        P._require_full("affine search")
        self.n = n = P.dim
        self.volume = float(P.volume)
        self.normals = [f.primitive_normal for f in P.facets]
        edges, owner, redges, rowner = [], [], [], []
        for fi, f in enumerate(P.facets):
            count: dict[frozenset, tuple] = {}
            seen: dict[frozenset, int] = {}
            for simp in f.simplices:
                pts = np.array([[float(c) for c in p] for p in simp])
                edges.append(pts[1:] - pts[0])
                owner.append(fi)
                for skip in range(len(simp)):
                    ridge = simp[:skip] + simp[skip + 1:]
                    key = frozenset(ridge)
                    seen[key] = seen.get(key, 0) + 1
                    count[key] = ridge
            for key, c in seen.items():
                if c == 1:
                    r = np.array([[float(x) for x in p] for p in count[key]])
                    redges.append(r[1:] - r[0])
                    rowner.append(fi)
        self.edges = np.array(edges)
        self.owner = np.array(owner)
        self.redges = np.array(redges)
        self.rowner = np.array(rowner)
        self.m = len(self.normals)
        self._f1 = math.factorial(n - 1)
        self._f2 = math.factorial(n - 2)

    def ratios(self, T: np.ndarray) -> np.ndarray:
        n = self.n
        area = np.bincount(self.owner, _gram_measure(self.edges @ T.T), self.m) / self._f1
        bd = np.bincount(self.rowner, _gram_measure(self.redges @ T.T), self.m) / self._f2
        iso_k = area.sum() / (n * abs(np.linalg.det(T)) * self.volume)
        iso_f = bd / ((n - 1) * area)
        return iso_f / iso_k

    def objective(self, T: np.ndarray, facet: int | None = None) -> float:
        r = self.ratios(T)
        return float(r[facet]) if facet is not None else float(r.max())


@dataclass(frozen=True)
class TraceRow:
    restart: int
    evaluation: int
    ratio: float
    best: float


@dataclass
class AffineSearchResult:
    best_T: AffineMap
    best_ratio: float
    search_ratio: float
    witness_normal: tuple[int, ...]
    trace: list[TraceRow] = field(default_factory=list)
    seed: int = 0
    budget: int = 0
    evaluations: int = 0
    restarts: int = 0


def _run_restart(evaluator: RatioEvaluator, x0: np.ndarray, budget: int, facet: int | None,
                 restart: int):
    n = evaluator.n
    rows: list[tuple[float, np.ndarray]] = []

    def fun(x):
        if len(rows) >= budget:
            return 0.0
        val = evaluator.objective(spd_from_params(x, n), facet)
        rows.append((val, np.array(x)))
        return -val

    if budget <= 0:
        return restart, rows
    k = len(x0)
    simplex = np.vstack([x0] + [x0 + 0.5 * np.eye(k)[i] for i in range(k)])
    minimize(fun, x0, method="Nelder-Mead",
             options={"initial_simplex": simplex, "maxfev": budget, "xatol": 1e-10,
                      "fatol": 1e-12})
    return restart, rows


def _worker(args):
    P_vertices, x0, budget, facet, restart = args
    ev = RatioEvaluator(VPolytope(P_vertices))
    return _run_restart(ev, x0, budget, facet, restart)


def affine_search(P: VPolytope, budget: int = 500, seed: int = 0, restarts: int = 8,
                  facet_normal: Sequence[int] | None = None, jobs: int = 1) -> AffineSearchResult:
    """Maximize the facet Isop ratio of T P over unit-determinant SPD maps T.

    Restart 0 starts at the identity, the others from seeded random
    log-Cholesky points; the budget (objective evaluations) is split evenly.
    With ``facet_normal`` only that facet's ratio is maximized. Ties between
    restarts go to the lower index, so the outcome does not depend on ``jobs``.
    """
    n = P.dim
    ev = RatioEvaluator(P)
    facet = None
    if facet_normal is not None:
        key = la.integer_direction(facet_normal)
        if key not in ev.normals:
            raise GeometryError(f"{key} is not a facet normal")
        facet = ev.normals.index(key)
    restarts = max(1, min(restarts, budget))
    rng = np.random.default_rng(seed)
    starts = [np.zeros(n_params(n))] + [rng.normal(0, 0.7, n_params(n)) for _ in range(restarts - 1)]
    shares = [budget // restarts + (1 if i < budget % restarts else 0) for i in range(restarts)]
    if jobs > 1:
        verts = P.vertices
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outs = list(pool.map(_worker, [(verts, x0, b, facet, i)
                                           for i, (x0, b) in enumerate(zip(starts, shares))]))
    else:
        outs = [_run_restart(ev, x0, b, facet, i) for i, (x0, b) in enumerate(zip(starts, shares))]
    outs.sort(key=lambda o: o[0])

    trace = []
    best_val, best_x = -math.inf, starts[0]
    count = 0
    for restart, rows in outs:
        for val, x in rows:
            count += 1
            if val > best_val:
                best_val, best_x = val, x
            trace.append(TraceRow(restart, count, val, best_val))

    Tf = spd_from_params(best_x, n)
    T = AffineMap([[Fraction(float(c)) for c in row] for row in Tf])
    TP = affine_image(P, T)
    rep = facet_ratios(TP)
    fast = ev.ratios(Tf)
    idx = facet if facet is not None else int(np.argmax(fast))
    witness = ev.normals[idx]
    if facet is None:
        exact_ratio = rep.max_ratio
    else:
        # the image of a facet with normal a has normal T^{-T} a
        img = np.linalg.solve(Tf.T, np.array(witness, dtype=float))
        img /= np.linalg.norm(img)
        def alignment(r):
            v = np.array([float(c) for c in r.normal])
            return float(v @ img / np.linalg.norm(v))

        row = max(rep.per_facet, key=alignment)
        exact_ratio = row.ratio
    return AffineSearchResult(
        best_T=T, best_ratio=exact_ratio, search_ratio=best_val, witness_normal=witness,
        trace=trace, seed=seed, budget=budget, evaluations=count, restarts=restarts)


GENERATORS = ("hull", "simplex", "zonotope")


def _generate(kind: str, n: int, points: int, rng: np.random.Generator) -> VPolytope:
    if kind == "hull":
        return VPolytope(rng.integers(-10, 11, size=(points, n)).tolist())
    if kind == "simplex":
        base = np.vstack([np.zeros(n, dtype=int), 20 * np.eye(n, dtype=int)])
        return VPolytope((base + rng.integers(-5, 6, size=base.shape)).tolist())
    if kind == "zonotope":
        segs = rng.integers(-5, 6, size=(max(points, n), n))
        P = VPolytope([[0] * n])
        for s in segs:
            if any(s):
                P = VPolytope(list(P.vertices) + [la.add(v, s) for v in P.vertices])
        return P
    raise ValueError(f"unknown generator {kind!r}; choose from {GENERATORS}")


def is_simplex(P: VPolytope) -> bool:
    return P.is_full_dimensional and P.n_vertices == P.dim + 1


def affine_probe(generator: str = "hull", trials: int = 20, budget: int = 200, seed: int = 0,
                    n: int = 3, points: int = 8, tol: float = 1e-7, jobs: int = 1) -> dict:
    """Run the affine search on random polytopes and list where it fails to exceed 1.

    The report records evidence only: a non-simplex with best ratio <= 1 + tol
    is a candidate for closer study, not a counterexample. Hull trials that
    come out as simplices are flagged and skipped.
    """
    if generator not in GENERATORS:
        raise ValueError(f"unknown generator {generator!r}; choose from {GENERATORS}")
    rng = np.random.default_rng(seed)
    # seeds for every trial are drawn up front so trial i does not depend on the others
    trial_seeds = rng.integers(0, 2 ** 31, size=trials).tolist()
    rows, candidates = [], []
    for i, ts in enumerate(trial_seeds):
        P = _generate(generator, n, points, np.random.default_rng(ts))
        row = {"trial": i, "seed": int(ts), "n_vertices": P.n_vertices, "n_facets": len(P.facets)}
        if not P.is_full_dimensional:
            row.update(status="skipped", reason="degenerate")
        elif is_simplex(P) and generator != "simplex":
            row.update(status="skipped", reason="simplex")
        else:
            res = affine_search(P, budget=budget, seed=int(ts), jobs=jobs)
            start = RatioEvaluator(P).ratios(np.eye(n)).max()
            row.update(status="searched", simplex=is_simplex(P), initial_ratio=float(start),
                       best_ratio=res.best_ratio, exceeds_one=res.best_ratio > 1 + tol)
            if not row["exceeds_one"] and not row["simplex"]:
                candidates.append(i)
        rows.append(row)
    searched = [r for r in rows if r["status"] == "searched"]
    return {
        "generator": generator,
        "n": n,
        "points": points,
        "trials": rows,
        "searched": len(searched),
        "exceeding": sum(1 for r in searched if r["exceeds_one"]),
        "candidates": candidates,
        "seed": seed,
        "budget": budget,
        "tolerance": tol,
    }
