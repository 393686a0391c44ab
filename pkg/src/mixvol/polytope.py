"""Exact-rational polytopes: hulls, volumes, facets, sums, projections, affine maps.

Coordinates are :class:`fractions.Fraction`. Internally each polytope keeps
its points as integers over a common denominator, so every orientation and
incidence predicate is exact. The only approximate steps are the square
roots in facet measures and orthonormal projections.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import linalg as la
from .hull import affine_basis, full_hull

DEFAULT_TOL = 1e-9


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class DimensionMismatchError(GeometryError):
    pass


class DegenerateError(GeometryError):
    """A full-dimensional body was required but the input is flat."""


class InfeasibleError(GeometryError):
    pass


class UnboundedError(GeometryError):
    pass


class SingularMapError(GeometryError):
    pass


@dataclass(frozen=True)
class Facet:
    """A facet ``{x in P : <x, primitive_normal> = offset}`` of a full-dimensional polytope.

    ``measure_sq`` is the exact squared (n-1)-volume; ``measure`` takes its
    square root in floating point. ``simplices`` triangulate the facet (their
    corners may include non-extreme boundary points of the input).
    """

    primitive_normal: tuple[int, ...]
    offset: Fraction
    vertex_indices: tuple[int, ...]
    measure_sq: Fraction
    simplices: tuple[tuple[tuple[Fraction, ...], ...], ...] = field(repr=False, compare=False)

    @property
    def measure(self) -> float:
        return math.sqrt(self.measure_sq)

    @property
    def unit_normal(self) -> tuple[float, ...]:
        nrm = math.sqrt(la.norm_sq(self.primitive_normal))
        return tuple(c / nrm for c in self.primitive_normal)


class VPolytope:
    """Convex hull of finitely many rational points.

    Construction runs the exact hull, so ``vertices`` holds only extreme
    points (in input order). Lower-dimensional hulls are allowed; their
    ``affine_dim`` is smaller than ``dim`` and they have no facets.
    """

    def __init__(self, points: Iterable[Sequence], dim: int | None = None):
        pts = [la.to_vector(p) for p in points]
        if not pts:
            raise GeometryError("a polytope needs at least one point")
        if dim is None:
            dim = len(pts[0])
        if dim < 1:
            raise GeometryError("dimension must be positive")
        for p in pts:
            if len(p) != dim:
                raise DimensionMismatchError(
                    f"point of dimension {len(p)} in a {dim}-dimensional hull")
        scale = la.common_denominator(c for p in pts for c in p)
        ipts = [tuple(c.numerator * (scale // c.denominator) for c in p) for p in pts]
        self._init_from_ints(dim, ipts, scale)

    @classmethod
    def _from_ints(cls, dim: int, ipts: list[tuple[int, ...]], scale: int) -> "VPolytope":
        obj = cls.__new__(cls)
        obj._init_from_ints(dim, ipts, scale)
        return obj

    def _init_from_ints(self, dim, ipts, scale):
        ipts = list(dict.fromkeys(ipts))
        self.dim = dim
        self._scale = scale
        self._facet_map: dict[tuple, list[int]] = {}
        self._simplices: list[tuple[tuple[int, ...], tuple]] = []
        if len(ipts) == 1:
            extreme = [0]
            self.affine_dim = 0
        else:
            basis = affine_basis(ipts)
            k = len(basis) - 1
            self.affine_dim = k
            if dim == 1:
                lo = min(range(len(ipts)), key=lambda i: ipts[i][0])
                hi = max(range(len(ipts)), key=lambda i: ipts[i][0])
                extreme = sorted({lo, hi})
                lo_key = ((-1,), -ipts[lo][0])
                hi_key = ((1,), ipts[hi][0])
                self._simplices = [((lo,), lo_key), ((hi,), hi_key)]
                self._facet_map = {lo_key: [lo], hi_key: [hi]}
            elif k == dim:
                res = full_hull(ipts, basis)
                extreme = res.extreme
                self._simplices = res.simplices
                self._facet_map = res.facets
            else:
                p0 = ipts[basis[0]]
                diffs = [[p[j] - p0[j] for j in range(dim)] for p in (ipts[i] for i in basis[1:])]
                _, piv = la.row_reduce(diffs)
                proj = [tuple(p[j] for j in piv) for p in ipts]
                if k == 1:
                    lo = min(range(len(proj)), key=lambda i: proj[i][0])
                    hi = max(range(len(proj)), key=lambda i: proj[i][0])
                    extreme = sorted({lo, hi})
                else:
                    extreme = full_hull(proj, basis).extreme
        self._ipts = ipts
        self._extreme = extreme
        pos = {v: i for i, v in enumerate(extreme)}
        self._vertex_pos = pos
        self.vertices: tuple[tuple[Fraction, ...], ...] = tuple(
            tuple(Fraction(c, scale) for c in ipts[v]) for v in extreme)

    def __repr__(self) -> str:
        return (f"VPolytope(dim={self.dim}, affine_dim={self.affine_dim}, "
                f"n_vertices={len(self.vertices)})")

    def __eq__(self, other) -> bool:
        if not isinstance(other, VPolytope):
            return NotImplemented
        return self.dim == other.dim and set(self.vertices) == set(other.vertices)

    def __hash__(self) -> int:
        try:
            return self._hash
        except AttributeError:
            self._hash = hash((self.dim, frozenset(self.vertices)))
            return self._hash

    @property
    def is_full_dimensional(self) -> bool:
        return self.affine_dim == self.dim

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    def vertex_array(self) -> np.ndarray:
        return np.array([[float(c) for c in v] for v in self.vertices])

    def centroid(self) -> tuple[Fraction, ...]:
        """Vertex centroid (not the center of mass)."""
        m = len(self.vertices)
        return tuple(sum(v[j] for v in self.vertices) / m for j in range(self.dim))

    def _require_full(self, what: str) -> None:
        if not self.is_full_dimensional:
            raise DegenerateError(
                f"{what} needs a full-dimensional polytope (affine dimension "
                f"{self.affine_dim} in R^{self.dim})")

    @cached_property
    def facets(self) -> tuple[Facet, ...]:
        if not self.is_full_dimensional:
            return ()
        n = self.dim
        by_key: dict[tuple, list[tuple[int, ...]]] = {}
        for verts, key in self._simplices:
            by_key.setdefault(key, []).append(verts)
        out = []
        fact = math.factorial(n - 1)
        for key in sorted(self._facet_map):
            normal, off = key
            total = 0
            simps = []
            for verts in by_key[key]:
                p0 = self._ipts[verts[0]]
                rows = [list(normal)] + [[self._ipts[v][j] - p0[j] for j in range(n)]
                                         for v in verts[1:]]
                total += abs(la.det_int(rows))
                simps.append(tuple(tuple(Fraction(c, self._scale) for c in self._ipts[v])
                                   for v in verts))
            # |det(a, edges)| = |a| (n-1)! vol_{n-1}
            meas = Fraction(total, fact * self._scale ** (n - 1))
            out.append(Facet(
                primitive_normal=normal,
                offset=Fraction(off, self._scale),
                vertex_indices=tuple(sorted(self._vertex_pos[v] for v in self._facet_map[key])),
                measure_sq=meas * meas / la.norm_sq(normal),
                simplices=tuple(simps),
            ))
        return tuple(out)

    @cached_property
    def volume(self) -> Fraction:
        self._require_full("volume")
        n = self.dim
        apex = self._ipts[self._extreme[0]]
        total = 0
        for verts, _ in self._simplices:
            rows = [[self._ipts[v][j] - apex[j] for j in range(n)] for v in verts]
            total += abs(la.det_int(rows))
        return Fraction(total, math.factorial(n) * self._scale ** n)

    @cached_property
    def surface_area(self) -> float:
        self._require_full("surface area")
        return math.fsum(f.measure for f in self.facets)

    def support(self, u: Sequence) -> Fraction:
        if len(u) != self.dim:
            raise DimensionMismatchError("direction has wrong dimension")
        fu = la.to_vector(u)
        du = la.common_denominator(fu)
        iu = [c.numerator * (du // c.denominator) for c in fu]
        best = max(sum(a * b for a, b in zip(self._ipts[v], iu)) for v in self._extreme)
        return Fraction(best, self._scale * du)

    def facet_by_normal(self, normal: Sequence) -> Facet:
        key = la.integer_direction(normal)
        for f in self.facets:
            if f.primitive_normal == key:
                return f
        raise KeyError(f"no facet with outer normal {key}")

    def normals(self) -> list[tuple[int, ...]]:
        return [f.primitive_normal for f in self.facets]

    def scaled(self, c) -> "VPolytope":
        """The dilate ``c * P`` for rational ``c > 0``, without recomputing the hull."""
        c = la.to_fraction(c)
        if c <= 0:
            raise GeometryError("dilation factor must be positive")
        p, q = c.numerator, c.denominator
        obj = VPolytope.__new__(VPolytope)
        obj.dim = self.dim
        obj.affine_dim = self.affine_dim
        obj._scale = self._scale * q
        obj._ipts = [tuple(x * p for x in pt) for pt in self._ipts]
        obj._extreme = self._extreme
        obj._vertex_pos = self._vertex_pos
        obj._simplices = [(v, (key[0], key[1] * p)) for v, key in self._simplices]
        obj._facet_map = {(key[0], key[1] * p): vs for key, vs in self._facet_map.items()}
        obj.vertices = tuple(tuple(x * c for x in v) for v in self.vertices)
        return obj

    def translated(self, x: Sequence) -> "VPolytope":
        """The translate ``P + x``, without recomputing the hull."""
        x = la.to_vector(x)
        if len(x) != self.dim:
            raise DimensionMismatchError("translation has wrong dimension")
        den = la.common_denominator(x)
        new_scale = self._scale * den // math.gcd(self._scale, den)
        r = new_scale // self._scale
        ix = [c.numerator * (new_scale // c.denominator) for c in x]
        obj = VPolytope.__new__(VPolytope)
        obj.dim = self.dim
        obj.affine_dim = self.affine_dim
        obj._scale = new_scale
        obj._ipts = [tuple(a * r + b for a, b in zip(pt, ix)) for pt in self._ipts]
        obj._extreme = self._extreme
        obj._vertex_pos = self._vertex_pos

        def shift(key):
            normal, off = key
            return normal, off * r + sum(a * b for a, b in zip(normal, ix))

        obj._simplices = [(v, shift(key)) for v, key in self._simplices]
        obj._facet_map = {shift(key): vs for key, vs in self._facet_map.items()}
        obj.vertices = tuple(la.add(v, x) for v in self.vertices)
        return obj

    def to_hpolytope(self) -> "HPolytope":
        self._require_full("halfspace representation")
        return HPolytope(self.dim, [(f.primitive_normal, f.offset) for f in self.facets],
                         self.centroid())


@dataclass(frozen=True)
class HPolytope:
    """Intersection of halfspaces ``<normal, x> <= offset`` with a known interior point."""

    dim: int
    constraints: tuple[tuple[tuple[Fraction, ...], Fraction], ...]
    interior_point: tuple[Fraction, ...]

    def __init__(self, dim: int, constraints, interior_point):
        cons = []
        for normal, off in constraints:
            a = la.to_vector(normal)
            if len(a) != dim:
                raise DimensionMismatchError("constraint normal has wrong dimension")
            cons.append((a, la.to_fraction(off)))
        c = la.to_vector(interior_point)
        if len(c) != dim:
            raise DimensionMismatchError("interior point has wrong dimension")
        for a, b in cons:
            if not la.dot(a, c) < b:
                raise InfeasibleError("interior point does not strictly satisfy all constraints")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "constraints", tuple(cons))
        object.__setattr__(self, "interior_point", c)


@dataclass(frozen=True)
class AffineMap:
    """``x -> matrix @ x + translation`` with an invertible rational matrix."""

    matrix: tuple[tuple[Fraction, ...], ...]
    translation: tuple[Fraction, ...]

    def __init__(self, matrix, translation=None):
        m = tuple(la.to_vector(row) for row in matrix)
        n = len(m)
        if any(len(row) != n for row in m):
            raise DimensionMismatchError("affine map matrix must be square")
        t = la.to_vector(translation) if translation is not None else (Fraction(0),) * n
        if len(t) != n:
            raise DimensionMismatchError("translation has wrong dimension")
        if la.det(m) == 0:
            raise SingularMapError("affine map is singular")
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "translation", t)

    @classmethod
    def diagonal(cls, entries) -> "AffineMap":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls.diagonal([1] * n)

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @cached_property
    def det(self) -> Fraction:
        return la.det(self.matrix)

    def __call__(self, x: Sequence) -> tuple[Fraction, ...]:
        return la.add(la.matvec(self.matrix, x), self.translation)


# -- operations ---------------------------------------------------------------

def convex_hull(points: Iterable[Sequence]) -> VPolytope:
    return VPolytope(points)


def volume(P: VPolytope) -> Fraction:
    return P.volume


def facet_measure(F: Facet, P: VPolytope | None = None) -> float:
    return F.measure


def surface_area(P: VPolytope) -> float:
    return P.surface_area


def support(P: VPolytope, u: Sequence) -> Fraction:
    return P.support(u)


def minkowski_sum(P: VPolytope, Q: VPolytope) -> VPolytope:
    """Hull of all pairwise vertex sums, computed on a common integer grid."""
    if P.dim != Q.dim:
        raise DimensionMismatchError(f"cannot add polytopes in R^{P.dim} and R^{Q.dim}")
    if Q.n_vertices == 1:
        return P.translated(Q.vertices[0])
    if P.n_vertices == 1:
        return Q.translated(P.vertices[0])
    s = P._scale * Q._scale // math.gcd(P._scale, Q._scale)
    rp, rq = s // P._scale, s // Q._scale
    pv = [tuple(c * rp for c in P._ipts[v]) for v in P._extreme]
    qv = [tuple(c * rq for c in Q._ipts[v]) for v in Q._extreme]
    pts = [tuple(a + b for a, b in zip(p, q)) for p in pv for q in qv]
    return VPolytope._from_ints(P.dim, _prefilter(pts), s)


def _prefilter(pts: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Drop points that are certainly interior, judged with a floating hull and a wide margin.

    Only points deeper than a relative margin of 1e-7 below every floating
    facet are removed, far beyond the roundoff of the floating hull, so the
    exact hull of the survivors equals the exact hull of the input.
    """
    if len(pts) < 64:
        return pts
    from scipy.spatial import ConvexHull, QhullError

    arr = np.array([[float(c) for c in p] for p in pts])
    lo, hi = arr.min(axis=0), arr.max(axis=0)
    span = float((hi - lo).max())
    if span == 0:
        return pts
    x = (arr - lo) / span
    try:
        hull = ConvexHull(x)
    except (QhullError, ValueError):
        return pts
    eq = hull.equations
    depth = (x @ eq[:, :-1].T + eq[:, -1]).max(axis=1)
    keep = depth > -1e-7
    return [p for p, k in zip(pts, keep) if k]


def _complement_basis(directions: Sequence[Sequence], n: int) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    dirs = [la.integer_direction(d) if any(la.to_fraction(c) for c in d) else None for d in directions]
    if any(d is None for d in dirs) or la.rank(dirs) != len(dirs):
        raise GeometryError("projection directions must be linearly independent")
    if any(len(d) != n for d in dirs):
        raise DimensionMismatchError("direction has wrong dimension")
    return dirs, la.nullspace(dirs, n)


def project_rational(P: VPolytope, directions: Sequence[Sequence]) -> tuple[VPolytope | None, list[tuple[int, ...]]]:
    """Exact projection onto ``directions``-perp in the coordinates of an integer basis.

    Returns ``(Q, B)``: ``Q`` lives in R^(n-k) and holds the coefficients of
    the projected vertices with respect to the columns ``B``. True
    (n-k)-volumes equal ``Q.volume * sqrt(det(B^T B))``. When the directions
    span R^n the image is a point and ``Q`` is None.
    """
    n = P.dim
    dirs, basis = _complement_basis(directions, n)
    if not basis:
        return None, basis
    gram = [[la.dot(b, c) for c in basis] for b in basis]
    ginv = la.inverse(gram)
    coords = [la.matvec(ginv, [la.dot(b, v) for b in basis]) for v in P.vertices]
    return VPolytope(coords), basis


def project_out(P: VPolytope, directions: Sequence[Sequence]) -> VPolytope:
    """Orthogonal projection onto the complement of ``directions``.

    Axis-aligned directions drop coordinates and stay exact; otherwise the
    image is expressed in a floating orthonormal basis of the complement.
    """
    n = P.dim
    dirs, basis = _complement_basis(directions, n)
    if not basis:
        raise GeometryError("projection onto the zero subspace")
    axes = [next(i for i, c in enumerate(d) if c) for d in dirs]
    if all(sum(1 for c in d if c) == 1 for d in dirs):
        keep = [j for j in range(n) if j not in axes]
        return VPolytope([tuple(v[j] for j in keep) for v in P.vertices])
    b = np.array(basis, dtype=float).T
    q, _ = np.linalg.qr(b)
    coords = P.vertex_array() @ q
    return VPolytope(coords.tolist())


def affine_image(P: VPolytope, T: AffineMap) -> VPolytope:
    if T.dim != P.dim:
        raise DimensionMismatchError("affine map and polytope dimensions differ")
    return VPolytope([T(v) for v in P.vertices])


def vertex_enumeration(H: HPolytope) -> VPolytope:
    """Vertices of a bounded halfspace system by polarity about its interior point."""
    c = H.interior_point
    polar = []
    for a, b in H.constraints:
        beta = b - la.dot(a, c)
        if beta <= 0:
            raise InfeasibleError("interior point is not strictly feasible")
        polar.append(tuple(x / beta for x in a))
    Q = VPolytope(polar, dim=H.dim)
    if not Q.is_full_dimensional:
        raise UnboundedError("halfspace system is unbounded")
    verts = []
    for normal, off in Q._facet_map:
        if off <= 0:
            raise UnboundedError("halfspace system is unbounded")
        r = Fraction(Q._scale, off)
        verts.append(tuple(ci + r * a for ci, a in zip(c, normal)))
    return VPolytope(verts, dim=H.dim)


def facet_hpolytope(P: VPolytope) -> HPolytope:
    return P.to_hpolytope()
