"""Wulff shapes W(Omega, h_K + t f), variational checks, and the facet-isoperimetric counterexample.

Omega defaults to the facet normals E(K), so every W_t is a polytope given by
finitely many halfspaces and all volumes along the family are exact.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from . import linalg as la
from .bezout import BezoutWitness, bezout_form
from .bodies import half_ball
from .isoperimetric import embed_facet, isop
from .mixed import SumCache, mixed_volume
from .polytope import (
    DegenerateError,
    GeometryError,
    HPolytope,
    InfeasibleError,
    UnboundedError,
    VPolytope,
    vertex_enumeration,
)


class CollapsedBodyError(DegenerateError):
    """The Wulff shape at this parameter has empty interior."""


@dataclass(frozen=True)
class SphereFunction:
    """Finitely supported function on directions, keyed by primitive integer normals.

    Values are those of the 1-homogeneous extension at the primitive normal a,
    so the value on the unit sphere is f(a)/|a|. This keeps the offsets
    h_K(a) + t f(a) of every W_t rational.
    """

    entries: Mapping[tuple[int, ...], Fraction]

    @classmethod
    def from_pairs(cls, pairs) -> "SphereFunction":
        out: dict[tuple[int, ...], Fraction] = {}
        for normal, value in pairs:
            key = la.integer_direction(normal)
            if key in out:
                raise ValueError(f"direction {key} given twice")
            out[key] = la.to_fraction(value)
        return cls(out)

    @classmethod
    def indicator(cls, u: Sequence, normals: Sequence[tuple[int, ...]]) -> "SphereFunction":
        key = la.integer_direction(u)
        return cls({v: Fraction(int(v == key)) for v in normals})

    @classmethod
    def constant(cls, c, normals: Sequence[tuple[int, ...]]) -> "SphereFunction":
        return cls({v: la.to_fraction(c) for v in normals})

    def __call__(self, u: Sequence) -> Fraction:
        return self.entries[la.integer_direction(u)]

    def on_sphere(self, u: Sequence) -> float:
        """Value at the unit vector u/|u|."""
        key = la.integer_direction(u)
        return float(self.entries[key]) / math.sqrt(la.norm_sq(key))

    def covers(self, normals) -> bool:
        return all(v in self.entries for v in normals)


def _signature(P: VPolytope) -> frozenset:
    """Combinatorial type: for each vertex, the set of facet normals through it."""
    inc: dict[int, set] = {}
    for f in P.facets:
        for i in f.vertex_indices:
            inc.setdefault(i, set()).add(f.primitive_normal)
    return frozenset(frozenset(s) for s in inc.values())


def chebyshev_center(constraints) -> tuple[tuple[Fraction, ...], float]:
    """Center and radius of the largest inscribed ball, by linear programming.

    The center is rounded to a rational and returned only if it is strictly
    feasible in exact arithmetic.
    """
    from scipy.optimize import linprog

    A = np.array([[float(c) for c in a] for a, _ in constraints])
    b = np.array([float(v) for _, v in constraints])
    norms = np.linalg.norm(A, axis=1)
    n = A.shape[1]
    res = linprog(np.r_[np.zeros(n), -1.0], A_ub=np.column_stack([A, norms]), b_ub=b,
                  bounds=[(None, None)] * n + [(0, None)], method="highs")
    if res.status == 3:
        raise UnboundedError("halfspace system is unbounded")
    if res.status != 0:
        raise InfeasibleError("halfspace system is infeasible")
    r = float(res.x[-1])
    x = tuple(Fraction(float(c)) for c in res.x[:n])
    if r <= 0 or any(la.dot(a, x) >= v for a, v in constraints):
        raise CollapsedBodyError(f"no strictly feasible point (inradius {r:.3g})")
    return x, r


def wulff_shape(omega: Sequence[Sequence[int]], g: Mapping | Sequence,
                interior_point: Sequence | None = None) -> VPolytope:
    """W(Omega, g) = intersection of {<x,u> <= g(u)} over u in Omega.

    ``g`` is a mapping from normals to values or a sequence aligned with
    ``omega``. Without an interior point a rational Chebyshev center is used.
    """
    omega = [la.integer_direction(u) for u in omega]
    vals = [g[u] for u in omega] if isinstance(g, Mapping) else list(g)
    if len(vals) != len(omega):
        raise ValueError("g must give one value per direction")
    cons = [(u, la.to_fraction(v)) for u, v in zip(omega, vals)]
    if interior_point is None:
        interior_point, _ = chebyshev_center(cons)
    return vertex_enumeration(HPolytope(len(omega[0]), cons, interior_point))


@dataclass
class WulffFamily:
    """W_t = W(Omega, h_K + t f) for a polytope K and a function f on Omega."""

    base: VPolytope
    f: SphereFunction
    omega: list[tuple[int, ...]] = field(default_factory=list)

    def __post_init__(self):
        self.base._require_full("a Wulff family")
        if not self.omega:
            self.omega = list(self.base.normals())
        self.omega = [la.integer_direction(u) for u in self.omega]
        if not self.f.covers(self.omega):
            missing = [u for u in self.omega if u not in self.f.entries]
            raise ValueError(f"f is not defined on directions {missing[:3]}")
        self._h = [self.base.support(u) for u in self.omega]
        self._centroid = self.base.centroid()

    def offsets(self, t) -> list[Fraction]:
        t = la.to_fraction(t)
        return [h + t * self.f(u) for u, h in zip(self.omega, self._h)]

    @property
    def centroid_interval(self) -> tuple[Fraction | None, Fraction | None]:
        """Open interval of t on which the base centroid stays strictly inside W_t."""
        lo = hi = None
        for u, h in zip(self.omega, self._h):
            slack = h - la.dot(u, self._centroid)
            fu = self.f(u)
            if fu > 0:
                b = -slack / fu
                lo = b if lo is None or b > lo else lo
            elif fu < 0:
                b = slack / -fu
                hi = b if hi is None or b < hi else hi
        return lo, hi

    @property
    def t_min_estimate(self) -> Fraction | None:
        """Lower end of the centroid interval; W_t is full-dimensional above it (None: unbounded)."""
        return self.centroid_interval[0]

    def at(self, t) -> VPolytope:
        return family_at(self, t)


def family_at(F: WulffFamily, t) -> VPolytope:
    """The exact polytope W_t. Raises CollapsedBodyError when W_t has empty interior."""
    t = la.to_fraction(t)
    if t == 0:
        return F.base
    cons = list(zip(F.omega, F.offsets(t)))
    lo, hi = F.centroid_interval
    if (lo is None or t > lo) and (hi is None or t < hi):
        point = F._centroid
    else:
        try:
            point, _ = chebyshev_center(cons)
        except InfeasibleError as exc:
            raise CollapsedBodyError(f"W_t is empty at t = {t}") from exc
    try:
        P = vertex_enumeration(HPolytope(F.base.dim, cons, point))
    except (InfeasibleError, UnboundedError) as exc:
        raise CollapsedBodyError(str(exc)) from exc
    if not P.is_full_dimensional:
        raise CollapsedBodyError(f"W_t is flat at t = {t}")
    return P


def lagrange_derivative_at_zero(nodes: Sequence[Fraction], values: Sequence[Fraction]) -> Fraction:
    """p'(0) for the interpolating polynomial through (nodes, values), exactly."""
    total = Fraction(0)
    for j, (xj, yj) in enumerate(zip(nodes, values)):
        others = [x for i, x in enumerate(nodes) if i != j]
        denom = Fraction(1)
        for x in others:
            denom *= xj - x
        # derivative at 0 of prod (t - x_i): sum_k prod_{i != k} (0 - x_i)
        num = Fraction(0)
        for k in range(len(others)):
            term = Fraction(1)
            for i, x in enumerate(others):
                if i != k:
                    term *= -x
            num += term
        total += yj * num / denom
    return total


def lagrange_eval(nodes, values, t) -> Fraction:
    total = Fraction(0)
    for j, (xj, yj) in enumerate(zip(nodes, values)):
        term = Fraction(yj)
        for i, x in enumerate(nodes):
            if i != j:
                term *= (t - x) / (xj - x)
        total += term
    return total


@dataclass
class AlexandrovReport:
    lhs_volume_derivative: Fraction
    lhs_mixed_derivative: Fraction
    rhs_integral: float
    rhs_mixed: float
    volume_error: float
    mixed_error: float
    step: Fraction
    nodes: list[Fraction]
    side: str
    shrinks: int
    volume_derivative_other_side: Fraction | None = None

    def agrees(self, tol: float = 1e-8) -> bool:
        return self.volume_error <= tol and self.mixed_error <= tol


def _rel(a: float, b: float) -> float:
    s = max(abs(a), abs(b))
    return abs(a - b) / s if s > 0 else abs(a - b)


def _one_side(F: WulffFamily, h: Fraction, sign: int, cache: SumCache):
    """Nodes 0, sign*h, ..., sign*(n+1)*h on which W_t keeps one combinatorial type.

    Returns (nodes, volumes, mixed volumes) or None if the type changes or the
    extra node disagrees with the degree-n interpolant.
    """
    n = F.base.dim
    nodes = [Fraction(0)] + [sign * h * j for j in range(1, n + 2)]
    bodies = []
    for t in nodes[1:]:
        try:
            bodies.append(family_at(F, t))
        except CollapsedBodyError:
            return None
    sig = {_signature(P) for P in bodies}
    if len(sig) != 1:
        return None
    vols = [F.base.volume] + [P.volume for P in bodies]
    mixed = [F.base.volume] + [mixed_volume([P] + [F.base] * (n - 1), cache) for P in bodies]
    for ys in (vols, mixed):
        if lagrange_eval(nodes[:-1], ys[:-1], nodes[-1]) != ys[-1]:
            return None
    return nodes[:-1], vols[:-1], mixed[:-1]


def alexandrov_check(F: WulffFamily, h: Fraction = Fraction(1, 64), max_shrinks: int = 6,
                     both_sides: bool = True) -> AlexandrovReport:
    """Compare exact derivatives at t = 0 with the surface-measure integrals.

    d/dt V(W_t) should equal int f dS_K = sum_u f(u/|u|)|K^u|, and
    d/dt V(W_t, K[n-1]) one n-th of it. Volumes along one side of 0 are
    polynomial in t while the combinatorial type is fixed, so exact
    interpolation through n+1 nodes recovers the one-sided derivative; an
    extra node confirms the polynomial, and the step shrinks by 4 otherwise.
    """
    n = F.base.dim
    h = la.to_fraction(h)
    cache = SumCache()
    rhs = math.fsum(F.f.on_sphere(f.primitive_normal) * f.measure for f in F.base.facets)
    shrinks = 0
    found = None
    while shrinks <= max_shrinks:
        found = _one_side(F, h, 1, cache)
        if found is not None:
            break
        h /= 4
        shrinks += 1
    if found is None:
        raise GeometryError("no stable node set found near t = 0")
    nodes, vols, mixed = found
    dv = lagrange_derivative_at_zero(nodes, vols)
    dm = lagrange_derivative_at_zero(nodes, mixed)
    other = None
    if both_sides:
        hh = h
        for _ in range(max_shrinks + 1):
            neg = _one_side(F, hh, -1, cache)
            if neg is not None:
                other = lagrange_derivative_at_zero(neg[0], neg[1])
                break
            hh /= 4
    return AlexandrovReport(
        lhs_volume_derivative=dv,
        lhs_mixed_derivative=dm,
        rhs_integral=rhs,
        rhs_mixed=rhs / n,
        volume_error=_rel(float(dv), rhs),
        mixed_error=_rel(float(dm), rhs / n),
        step=h,
        nodes=nodes,
        side="right",
        shrinks=shrinks,
        volume_derivative_other_side=other,
    )


@dataclass
class PointwiseRow:
    t: Fraction
    support: Fraction
    quotient: Fraction
    active: bool
    matches: bool


@dataclass
class PointwiseReport:
    normal: tuple[int, ...]
    f_value: Fraction
    rows: list[PointwiseRow]
    second_differences: list[Fraction]

    @property
    def all_match(self) -> bool:
        return all(r.matches for r in self.rows if r.active)

    @property
    def concave(self) -> bool:
        return all(d <= 0 for d in self.second_differences)


def pointwise_check(F: WulffFamily, u: Sequence, t_values: Sequence) -> PointwiseReport:
    """Check (h_{W_t}(u) - h_K(u))/t = f(u) exactly and concavity of t -> h_{W_t}(u).

    ``active`` marks the t at which u is still a facet normal of W_t; the
    identity is only claimed there. Concavity is tested through second
    divided differences on the sorted t values (0 included).
    """
    key = la.integer_direction(u)
    if key not in F.omega:
        raise GeometryError(f"{key} is not in Omega")
    h0 = F.base.support(key)
    fu = F.f(key)
    rows = []
    pts = {Fraction(0): h0}
    for t in t_values:
        t = la.to_fraction(t)
        if t == 0:
            continue
        P = family_at(F, t)
        h = P.support(key)
        pts[t] = h
        q = (h - h0) / t
        active = key in P.normals()
        rows.append(PointwiseRow(t, h, q, active, q == fu))
    ts = sorted(pts)
    dd = []
    for a, b, c in zip(ts, ts[1:], ts[2:]):
        s1 = (pts[b] - pts[a]) / (b - a)
        s2 = (pts[c] - pts[b]) / (c - b)
        dd.append((s2 - s1) / (c - a))
    return PointwiseReport(key, fu, rows, dd)


def exact_sqrt(q: Fraction) -> Fraction | None:
    """sqrt(q) if q is the square of a rational, else None."""
    if q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def _measures(P: VPolytope):
    """(|dP| as float, exact value or None) for a full-dimensional polytope."""
    exact = Fraction(0)
    for f in P.facets:
        r = exact_sqrt(f.measure_sq)
        if r is None:
            return P.surface_area, None
        exact += r
    return float(exact), exact


@dataclass
class CounterexampleReport:
    witness: BezoutWitness
    u0: tuple[int, ...]
    t: Fraction
    sphere_res: int
    isop_K: float
    isop_F: float
    hypothesis_holds: bool
    c0: float
    c: float
    c0_exact: Fraction | None
    c_exact: Fraction | None
    sigma: Fraction
    sigma_target: float
    a2: Fraction
    a0: Fraction
    at: Fraction
    am: Fraction
    b1: Fraction
    b2: Fraction
    b1_lower: float
    b2_upper: float
    predicted_bound: float
    M_vertices: int

    @property
    def c_exceeds_2c0(self) -> bool:
        return self.c > 2 * self.c0


def _common_frame(P: VPolytope, Q: VPolytope, u: tuple[int, ...]):
    """Write two polytopes lying in hyperplanes orthogonal to u in one frame of u-perp."""
    nz = [i for i, c in enumerate(u) if c]
    if len(nz) == 1:
        keep = [j for j in range(P.dim) if j != nz[0]]
        return (VPolytope([tuple(v[j] for j in keep) for v in P.vertices]),
                VPolytope([tuple(v[j] for j in keep) for v in Q.vertices]))
    from .isoperimetric import facet_frame

    frame = facet_frame(u)
    return (VPolytope((P.vertex_array() @ frame).tolist()),
            VPolytope((Q.vertex_array() @ frame).tolist()))


def counterexample_construct(K: VPolytope, u0: Sequence, t, sphere_res: int = 200,
                             seed: int = 0) -> CounterexampleReport:
    """Build A = L_t, B = M and evaluate F_K(A, B) exactly.

    f is the indicator of u0 on E(K), L_t = W(h_K + t f), and M is the
    inscribed polytopal half-ball whose flat facet has outer normal u0.
    """
    n = K.dim
    if n < 3:
        raise GeometryError("the construction needs n >= 3")
    K._require_full("the counterexample construction")
    u0 = la.integer_direction(u0)
    normals = K.normals()
    if u0 not in normals:
        raise GeometryError(f"{u0} is not a facet normal of K")
    t = la.to_fraction(t)
    if t <= 0:
        raise ValueError("t must be positive")
    facet = K.facet_by_normal(u0)
    Fbody = embed_facet(facet, K)
    iK, iF = isop(K), isop(Fbody)
    if not iF > iK:
        warnings.warn(f"Isop(F) = {iF:.6g} does not exceed Isop(K) = {iK:.6g}; "
                      "no negativity is predicted", stacklevel=2)

    fam = WulffFamily(K, SphereFunction.indicator(u0, normals))
    L = family_at(fam, t)
    M = half_ball(n, sphere_res, normal=u0, seed=seed)
    cache = SumCache()
    w = bezout_form(L, M, K, "ie", cache)

    dF, dF_exact = _measures(Fbody)
    dK, dK_exact = _measures(K)
    volK = K.volume
    areaF_exact = exact_sqrt(facet.measure_sq)
    areaF = facet.measure
    c0 = dF * float(volK) / (n - 1) - dK * areaF / n
    c = 2 * dF * float(volK) / (n - 1)
    c0_exact = c_exact = None
    if dF_exact is not None and dK_exact is not None and areaF_exact is not None:
        c0_exact = dF_exact * volK / (n - 1) - dK_exact * areaF_exact / n
        c_exact = 2 * dF_exact * volK / (n - 1)

    disk = M.facet_by_normal(u0)
    disk_body = VPolytope([M.vertices[i] for i in disk.vertex_indices])
    Fpoly = VPolytope([K.vertices[i] for i in facet.vertex_indices])
    D2, F2 = _common_frame(disk_body, Fpoly, u0)
    sigma = mixed_volume([D2] + [F2] * (n - 2))

    a2, a0, at, am = w.v_ab, w.v_k, w.v_a, w.v_b
    b1 = (a2 - am) * a0
    b2 = (at - a0) * am
    tf = float(t)
    return CounterexampleReport(
        witness=w, u0=u0, t=t, sphere_res=sphere_res, isop_K=iK, isop_F=iF,
        hypothesis_holds=iF > iK, c0=c0, c=c, c0_exact=c0_exact, c_exact=c_exact,
        sigma=sigma, sigma_target=dF / (n - 1), a2=a2, a0=a0, at=at, am=am, b1=b1, b2=b2,
        b1_lower=tf / (n * (n - 1)) * dF * float(volK), b2_upper=tf / n ** 2 * dK * areaF,
        predicted_bound=-tf / n * c0, M_vertices=M.n_vertices,
    )
