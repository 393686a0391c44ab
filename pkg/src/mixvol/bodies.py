"""Constructors for the standard bodies: cubes, boxes, simplices, cylinders, polytopal balls.

Coordinates are exact except for ``regular_simplex`` (irrational embedding)
and the sampled sphere points of ``ball`` and ``half_ball``, which are floats
converted exactly and then pulled into the closed unit ball, so the
polytopes are inscribed.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg as la
from .polytope import GeometryError, VPolytope

_DYADIC = 2 ** 40


def _check_n(n: int, lo: int = 1) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < lo:
        raise GeometryError(f"dimension must be an integer >= {lo}, got {n!r}")
    return int(n)


def cube(n: int) -> VPolytope:
    """The unit cube [0,1]^n."""
    n = _check_n(n)
    return VPolytope(list(itertools.product((0, 1), repeat=n)))


def box(sides: Sequence) -> VPolytope:
    """Axis-parallel box [0,a_1] x ... x [0,a_n]."""
    sides = la.to_vector(sides)
    if not sides or any(a <= 0 for a in sides):
        raise GeometryError("box sides must be positive")
    return VPolytope([tuple(a * b for a, b in zip(sides, bits))
                      for bits in itertools.product((0, 1), repeat=len(sides))])


def cross_polytope(n: int) -> VPolytope:
    """O_n = conv(+-e_i)."""
    n = _check_n(n, 2)
    pts = []
    for i in range(n):
        for s in (1, -1):
            pts.append(tuple(s if j == i else 0 for j in range(n)))
    return VPolytope(pts)


def corner_simplex(n: int) -> VPolytope:
    """Delta_n = conv(0, e_1, ..., e_n)."""
    n = _check_n(n)
    return VPolytope([(0,) * n] + [tuple(int(i == j) for j in range(n)) for i in range(n)])


def regular_simplex(n: int) -> VPolytope:
    """Regular simplex with edge sqrt(2): conv(e_1..e_{n+1}) carried isometrically into R^n.

    The coordinates are floating point (converted exactly), so metric values
    hold to roundoff only.
    """
    n = _check_n(n)
    ones = np.ones((n + 1, 1)) / math.sqrt(n + 1)
    q, _ = np.linalg.qr(np.hstack([ones, np.eye(n + 1)[:, :n]]))
    frame = q[:, 1:n + 1]
    centered = np.eye(n + 1) - 1.0 / (n + 1)
    return VPolytope((centered @ frame).tolist())


def cylinder(L: VPolytope, t) -> VPolytope:
    """conv(L, L + t e_n) for a base ``L`` in R^(n-1) (lifted to x_n = 0)."""
    t = la.to_fraction(t)
    if t <= 0:
        raise GeometryError("cylinder height must be positive")
    base = [tuple(v) + (Fraction(0),) for v in L.vertices]
    top = [v[:-1] + (t,) for v in base]
    return VPolytope(base + top)


def sliced_cube(n: int, depth) -> VPolytope:
    """[0,1]^n with every corner cut off by the plane at distance ``depth`` along its edges.

    Each cut leaves a small regular (n-1)-simplex facet of edge depth*sqrt(2).
    """
    from .polytope import HPolytope, vertex_enumeration

    n = _check_n(n, 2)
    d = la.to_fraction(depth)
    if not 0 < d < Fraction(1, 2):
        raise GeometryError("slice depth must lie in (0, 1/2)")
    cons = []
    for i in range(n):
        e = tuple(int(j == i) for j in range(n))
        cons.append((e, 1))
        cons.append((tuple(-c for c in e), 0))
    for corner in itertools.product((0, 1), repeat=n):
        # sum_i |x_i - v_i| >= d  <=>  <2v - 1, x> <= sum(v) - d on the cube
        a = tuple(2 * v - 1 for v in corner)
        cons.append((a, sum(corner) - d))
    return vertex_enumeration(HPolytope(n, cons, (Fraction(1, 2),) * n))


def _inside(p: Sequence[Fraction]) -> tuple[Fraction, ...]:
    """``p`` itself if |p| <= 1, else p scaled by one dyadic factor just below 1/|p|."""
    nsq = la.norm_sq(p)
    if nsq <= 1:
        return tuple(p)
    r = Fraction(math.floor(_DYADIC / math.sqrt(nsq)), _DYADIC)
    while r * r * nsq > 1:
        r -= Fraction(1, _DYADIC)
    return tuple(c * r for c in p)


def _fibonacci(count: int) -> np.ndarray:
    i = np.arange(count) + 0.5
    z = 1 - 2 * i / count
    r = np.sqrt(np.maximum(0.0, 1 - z * z))
    phi = math.pi * (3 - math.sqrt(5)) * i
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def sphere_points(n: int, count: int, seed: int = 0) -> np.ndarray:
    """Roughly uniform unit vectors: circle, Fibonacci sphere, or seeded Gaussian samples."""
    if n == 2:
        ang = 2 * math.pi * (np.arange(count) + 0.5) / count
        return np.column_stack([np.cos(ang), np.sin(ang)])
    if n == 3:
        return _fibonacci(count)
    g = np.random.default_rng(seed).normal(size=(count, n))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def ball(n: int, res: int = 200, seed: int = 0) -> VPolytope:
    """Inscribed polytopal unit ball through ``res`` sphere points."""
    n = _check_n(n, 2)
    if res < n + 1:
        raise GeometryError("resolution too small")
    return VPolytope([_inside(la.to_vector(p)) for p in sphere_points(n, res, seed)])


def _ring(n: int, u: tuple[Fraction, ...], res: int, seed: int) -> list[tuple[Fraction, ...]]:
    """``res`` points of the unit sphere lying exactly in the hyperplane u-perp."""
    if n == 2:
        d = (-u[1], u[0])
        s = Fraction(1) / max(abs(d[0]), abs(d[1]))
        return [_inside(tuple(c * s for c in d)), _inside(tuple(-c * s for c in d))]
    axis = next((i for i, c in enumerate(u) if c), None)
    if sum(1 for c in u if c) == 1:
        keep = [j for j in range(n) if j != axis]
        out = []
        for p in sphere_points(n - 1, res, seed):
            v = [Fraction(0)] * n
            for j, c in zip(keep, la.to_vector(p)):
                v[j] = c
            out.append(_inside(v))
        return out
    # general normal: project floats onto u-perp over a fixed power-of-two grid
    uu = la.norm_sq(u)
    q, _ = np.linalg.qr(np.array([[float(c)] for c in u]), mode="complete")
    frame = q[:, 1:n]
    out = []
    for p in sphere_points(n - 1, res, seed):
        x = la.to_vector(np.round((frame @ p) * 2 ** 30).astype(int).tolist())
        ux = la.dot(u, x)
        y = tuple((xi * uu - ux * ui) / (2 ** 30 * uu) for xi, ui in zip(x, u))
        out.append(_inside(y))
    return out


def half_ball(n: int, res: int = 200, normal: Sequence | None = None, seed: int = 0) -> VPolytope:
    """Inscribed polytopal half-ball {|x| <= 1, <x, normal> <= 0}.

    The flat facet has outer normal ``normal`` (default -e_n, i.e. the half
    x_n >= 0). Sphere points strictly on the open side are kept and an
    equator ring of ``res`` points is added exactly in the cutting plane.
    """
    n = _check_n(n, 2)
    if res < n + 1:
        raise GeometryError("resolution too small")
    u = la.to_vector(normal) if normal is not None else tuple(
        Fraction(-int(j == n - 1)) for j in range(n))
    if len(u) != n or not any(u):
        raise GeometryError("half-ball normal must be a nonzero vector of matching dimension")
    uf = np.array([float(c) for c in u])
    cap = [p for p in sphere_points(n, 2 * res, seed) if float(p @ uf) < -1e-12]
    pts = [_inside(la.to_vector(p)) for p in cap]
    pts = [p for p in pts if la.dot(p, u) < 0]
    pts += _ring(n, u, res, seed + 1)
    return VPolytope(pts)


_KINDS = {
    "cube": lambda n: cube(n),
    "cross_polytope": lambda n: cross_polytope(n),
    "octahedron": lambda n=3: cross_polytope(n),
    "corner_simplex": lambda n: corner_simplex(n),
    "regular_simplex": lambda n: regular_simplex(n),
    "ball": lambda n, res=200: ball(n, res),
    "half_ball": lambda n, res=200: half_ball(n, res),
}


def make_body(kind: str, *params) -> VPolytope:
    """Build a named body. ``box`` takes side lengths, ``segment`` the direction of [0, u],
    ``cylinder`` a dimension and height.

    ``cylinder(n, t)`` uses the unit cube of dimension n-1 as base.
    """
    kind = kind.strip().lower().replace("-", "_")
    try:
        if kind == "box":
            return box(params)
        if kind == "segment":
            if not params:
                raise GeometryError("segment needs a direction")
            return VPolytope([tuple(0 for _ in params), tuple(params)], dim=len(params))
        if kind == "sliced_cube":
            n, depth = params
            return sliced_cube(int(n), depth)
        if kind == "cylinder":
            n, t = params
            return cylinder(cube(int(n) - 1), t)
        if kind not in _KINDS:
            raise GeometryError(f"unknown body kind {kind!r}")
        return _KINDS[kind](*(int(p) for p in params))
    except TypeError as exc:
        raise GeometryError(f"bad parameters for {kind}: {params!r}") from exc


def parse_body_spec(spec: str) -> VPolytope:
    """Parse ``"kind:p1,p2,..."`` such as ``"cross_polytope:3"`` or ``"box:2,1,1"``."""
    kind, _, rest = spec.partition(":")
    params = [p for p in rest.split(",") if p.strip()] if rest else []
    if kind.strip().lower() in ("box", "cylinder", "segment", "sliced_cube"):
        return make_body(kind, *(la.to_fraction(p) for p in params))
    return make_body(kind, *params)
