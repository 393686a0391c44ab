"""Mixed volumes by three independent routes.

* ``inclusion_exclusion``: exact, from volumes of all partial Minkowski sums.
* ``surface_measure``: V(L, K[n-1]) = (1/n) sum_u h_L(u) |K^u|, one square
  root per facet.
* ``segment_projection``: segments are split off through the projection
  identity; exact, since the two Gram square roots multiply to a rational.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg as la
from .polytope import (
    DimensionMismatchError,
    GeometryError,
    VPolytope,
    minkowski_sum,
    project_rational,
)

INCLUSION_EXCLUSION = "inclusion_exclusion"
SURFACE_MEASURE = "surface_measure"
SEGMENT_PROJECTION = "segment_projection"
METHODS = (INCLUSION_EXCLUSION, SURFACE_MEASURE, SEGMENT_PROJECTION)
METHOD_ALIASES = {"ie": INCLUSION_EXCLUSION, "sam": SURFACE_MEASURE, "proj": SEGMENT_PROJECTION}


@dataclass(frozen=True)
class MixedVolumeResult:
    value: Fraction | float
    method: str
    bodies: tuple[str, ...]

    @property
    def exact(self) -> bool:
        return isinstance(self.value, Fraction)


class MethodNotApplicable(GeometryError):
    pass


def describe(P: VPolytope) -> str:
    return f"V[{P.n_vertices} vertices, affine dim {P.affine_dim} in R^{P.dim}]"


class SumCache:
    """Memo of Minkowski sums of body multisets, shared across mixed-volume calls.

    Bodies are keyed by their vertex sets, so repeated arguments (and equal
    bodies loaded separately) share hulls.
    """

    def __init__(self):
        self._sums: dict[tuple, VPolytope] = {}

    @staticmethod
    def _key(items):
        return tuple(sorted(items, key=lambda bm: (bm[0].n_vertices, hash(bm[0]), bm[1])))

    def sum_of(self, items: Sequence[tuple[VPolytope, int]]) -> VPolytope:
        items = [(b, m) for b, m in items if m > 0]
        key = self._key(items)
        hit = self._sums.get(key)
        if hit is not None:
            return hit
        if len(key) == 1:
            b, m = key[0]
            res = b if m == 1 else b.scaled(m)
        else:
            # smallest bodies first keeps candidate point sets small
            head, (b, m) = key[:-1], key[-1]
            part = self.sum_of(head)
            res = minkowski_sum(part, b if m == 1 else b.scaled(m))
        self._sums[key] = res
        return res

    def volume_of(self, items) -> Fraction:
        P = self.sum_of(items)
        return P.volume if P.is_full_dimensional else Fraction(0)


def _check_bodies(bodies: Sequence[VPolytope], n: int | None = None) -> int:
    if not bodies:
        raise GeometryError("no bodies given")
    dim = bodies[0].dim
    if any(b.dim != dim for b in bodies):
        raise DimensionMismatchError("bodies live in different dimensions")
    if n is not None and n != dim:
        raise DimensionMismatchError(f"expected bodies in R^{n}")
    if len(bodies) != dim:
        raise GeometryError(f"mixed volume in R^{dim} takes exactly {dim} bodies, got {len(bodies)}")
    return dim


def _group(bodies: Sequence[VPolytope]) -> list[tuple[VPolytope, int]]:
    groups: dict[VPolytope, int] = {}
    for b in bodies:
        groups[b] = groups.get(b, 0) + 1
    return list(groups.items())


def mixed_volume(bodies: Sequence[VPolytope], cache: SumCache | None = None) -> Fraction:
    """Exact V_n(K_1, ..., K_n) by inclusion-exclusion over partial sums.

    Flat partial sums contribute zero, so segments and points are allowed.
    """
    n = _check_bodies(bodies)
    cache = cache if cache is not None else SumCache()
    groups = _group(bodies)
    total = Fraction(0)
    for mults in itertools.product(*(range(c + 1) for _, c in groups)):
        size = sum(mults)
        if size == 0:
            continue
        weight = 1
        for m, (_, c) in zip(mults, groups):
            weight *= math.comb(c, m)
        vol = cache.volume_of([(b, m) for m, (b, _) in zip(mults, groups)])
        if vol:
            total += (-1) ** (n - size) * weight * vol
    return total / math.factorial(n)


def first_mixed_volume(L: VPolytope, K: VPolytope) -> float:
    """V_n(L, K[n-1]) through the surface area measure of K."""
    if L.dim != K.dim:
        raise DimensionMismatchError("bodies live in different dimensions")
    K._require_full("the surface-measure route")
    terms = [float(L.support(f.primitive_normal)) / math.sqrt(la.norm_sq(f.primitive_normal))
             * f.measure for f in K.facets]
    return math.fsum(terms) / K.dim


def segment_direction(P: VPolytope) -> tuple[Fraction, ...] | None:
    """Direction ``q - p`` if ``P`` is a segment ``[p, q]``, else None."""
    if P.affine_dim == 1 and P.n_vertices == 2:
        return la.sub(P.vertices[1], P.vertices[0])
    return None


def segment_mixed_volume(directions: Sequence[Sequence], bodies: Sequence[VPolytope],
                         cache: SumCache | None = None) -> Fraction:
    """V_n([0,u_1], ..., [0,u_k], K_{k+1}, ..., K_n) by projecting along the segments.

    The k-segment factor sqrt(det U U^T)/k! and the Gram factor of the
    complement basis B combine into |det [U; B]|, so the result is exact.
    Linearly dependent directions give zero.
    """
    dirs = [la.to_vector(u) for u in directions]
    k = len(dirs)
    n = len(dirs[0]) if dirs else bodies[0].dim
    if any(len(u) != n for u in dirs) or any(b.dim != n for b in bodies):
        raise DimensionMismatchError("directions and bodies must share the ambient dimension")
    if k + len(bodies) != n:
        raise GeometryError(f"need {n} arguments in total, got {k + len(bodies)}")
    if k == 0:
        return mixed_volume(list(bodies), cache)
    if any(not any(c for c in u) for u in dirs) or la.rank(dirs) < k:
        return Fraction(0)
    falling = math.perm(n, k)
    if k == n:
        return abs(la.det(dirs)) / math.factorial(n)
    projected = []
    basis = None
    memo: dict[VPolytope, VPolytope] = {}
    for b in bodies:
        if b not in memo:
            memo[b], basis = project_rational(b, dirs)
        projected.append(memo[b])
    frame = abs(la.det(dirs + [list(v) for v in basis]))
    if all(p == projected[0] for p in projected):
        q = projected[0]
        inner = q.volume if q.is_full_dimensional else Fraction(0)
    else:
        inner = mixed_volume(projected)
    return frame * inner / falling


def applicable_methods(bodies: Sequence[VPolytope]) -> list[str]:
    out = [INCLUSION_EXCLUSION]
    n = bodies[0].dim
    for i, L in enumerate(bodies):
        rest = [b for j, b in enumerate(bodies) if j != i]
        if all(r == rest[0] for r in rest) and rest[0].is_full_dimensional:
            out.append(SURFACE_MEASURE)
            break
    if n > 0 and any(segment_direction(b) is not None for b in bodies):
        out.append(SEGMENT_PROJECTION)
    return out


def compute(bodies: Sequence[VPolytope], method: str = INCLUSION_EXCLUSION,
            cache: SumCache | None = None) -> MixedVolumeResult:
    """Mixed volume of ``bodies`` by one named route."""
    method = METHOD_ALIASES.get(method, method)
    _check_bodies(bodies)
    desc = tuple(describe(b) for b in bodies)
    if method == INCLUSION_EXCLUSION:
        return MixedVolumeResult(mixed_volume(bodies, cache), method, desc)
    if method == SURFACE_MEASURE:
        for i, L in enumerate(bodies):
            rest = [b for j, b in enumerate(bodies) if j != i]
            if all(r == rest[0] for r in rest) and rest[0].is_full_dimensional:
                return MixedVolumeResult(first_mixed_volume(L, rest[0]), method, desc)
        raise MethodNotApplicable("surface-measure route needs the form V(L, K[n-1])")
    if method == SEGMENT_PROJECTION:
        dirs, others = [], []
        for b in bodies:
            d = segment_direction(b)
            (dirs if d is not None else others).append(d if d is not None else b)
        if not dirs:
            raise MethodNotApplicable("segment-projection route needs at least one segment")
        return MixedVolumeResult(segment_mixed_volume(dirs, others, cache), method, desc)
    raise ValueError(f"unknown method {method!r}")


def relative_gap(a: float, b: float) -> float:
    a, b = float(a), float(b)
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0 else abs(a - b)


def cross_validate(bodies: Sequence[VPolytope], tol: float = 1e-9,
                   cache: SumCache | None = None) -> dict:
    """Evaluate every applicable route and report the largest pairwise relative gap."""
    cache = cache if cache is not None else SumCache()
    results = {m: compute(bodies, m, cache) for m in applicable_methods(bodies)}
    vals = [r.value for r in results.values()]
    gap = max((relative_gap(a, b) for a, b in itertools.combinations(vals, 2)), default=0.0)
    return {
        "results": results,
        "discrepancy": gap,
        "agree": gap <= tol,
        "tolerance": tol,
    }
