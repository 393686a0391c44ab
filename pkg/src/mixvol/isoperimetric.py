"""Surface area measures, isoperimetric ratios of bodies and facets, and the excluding check."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .polytope import DEFAULT_TOL, DegenerateError, Facet, GeometryError, VPolytope

EXCLUDE_TOL = 1e-7


@dataclass(frozen=True)
class Atom:
    primitive_normal: tuple[int, ...]
    unit_normal: tuple[float, ...]
    weight: float


@dataclass(frozen=True)
class SurfaceMeasure:
    """Discrete measure sum_u |P^u| delta_u over the facet normals of P."""

    atoms: tuple[Atom, ...]

    @property
    def total(self) -> float:
        return math.fsum(a.weight for a in self.atoms)

    def resultant(self) -> np.ndarray:
        """sum weight * unit_normal; zero for a closed polytope."""
        return np.sum([np.array(a.unit_normal) * a.weight for a in self.atoms], axis=0)

    def integrate(self, f) -> float:
        """int f dS for ``f`` a callable on primitive normals or a dict keyed by them."""
        get = f.get if isinstance(f, dict) else f
        return math.fsum(float(get(a.primitive_normal) or 0) * a.weight for a in self.atoms)


def surface_measure(P: VPolytope) -> SurfaceMeasure:
    P._require_full("surface area measure")
    return SurfaceMeasure(tuple(Atom(f.primitive_normal, f.unit_normal, f.measure)
                                for f in P.facets))


def facet_frame(normal: tuple[int, ...]) -> np.ndarray:
    """Orthonormal basis (as columns) of the hyperplane orthogonal to ``normal``."""
    q, _ = np.linalg.qr(np.array([[float(c)] for c in normal]), mode="complete")
    return q[:, 1:]


def embed_facet(F: Facet, P: VPolytope) -> VPolytope:
    """The facet as a full-dimensional polytope in R^(n-1).

    Axis-parallel facets drop the normal coordinate and stay exact; other
    facets are written in a floating orthonormal frame of their hyperplane,
    which preserves the (n-1)-measure up to roundoff.
    """
    verts = [P.vertices[i] for i in F.vertex_indices]
    normal = F.primitive_normal
    nz = [i for i, c in enumerate(normal) if c]
    if len(nz) == 1:
        keep = [j for j in range(P.dim) if j != nz[0]]
        return VPolytope([tuple(v[j] for j in keep) for v in verts])
    frame = facet_frame(normal)
    arr = np.array([[float(c) for c in v] for v in verts])
    coords = (arr - arr.mean(axis=0)) @ frame
    return VPolytope(coords.tolist())


def isop(C: VPolytope) -> float:
    """Isop(C) = |dC| / (d |C|) for a d-dimensional body, d >= 2."""
    if C.dim < 2:
        raise GeometryError("Isop needs dimension at least 2")
    if not C.is_full_dimensional:
        raise DegenerateError("Isop needs a full-dimensional body; embed faces first")
    return C.surface_area / (C.dim * float(C.volume))


@dataclass(frozen=True)
class FacetRatio:
    index: int
    normal: tuple[int, ...]
    isop: float
    ratio: float


@dataclass(frozen=True)
class IsopReport:
    isop_K: float
    per_facet: tuple[FacetRatio, ...]
    max_ratio: float
    witness: int

    @property
    def witness_normal(self) -> tuple[int, ...]:
        return self.per_facet[self.witness].normal


def facet_ratios(P: VPolytope) -> IsopReport:
    """Isop(F)/Isop(P) for every facet F; the witness is the first facet attaining the max."""
    if P.dim < 3:
        raise GeometryError("facet ratios need n >= 3 (facets must have dimension >= 2)")
    P._require_full("facet ratios")
    iK = isop(P)
    rows = []
    for i, F in enumerate(P.facets):
        iF = isop(embed_facet(F, P))
        rows.append(FacetRatio(i, F.primitive_normal, iF, iF / iK))
    best = max(range(len(rows)), key=lambda i: (rows[i].ratio, -i))
    return IsopReport(iK, tuple(rows), rows[best].ratio, best)


EXCLUDED = "excluded"
BOUNDARY = "boundary"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ExcludingVerdict:
    status: str
    max_ratio: float
    witness_normal: tuple[int, ...]
    tolerance: float
    report: IsopReport


def excluding_check(P: VPolytope, tol: float = EXCLUDE_TOL) -> ExcludingVerdict:
    """Sufficient test for b_2(P) > 1: some facet has Isop(F) > Isop(P).

    Ratios within ``tol`` (relative) of 1 are reported as "boundary"; below
    that the check says nothing and returns "inconclusive".
    """
    rep = facet_ratios(P)
    if rep.max_ratio > 1 + tol:
        status = EXCLUDED
    elif rep.max_ratio >= 1 - tol:
        status = BOUNDARY
    else:
        status = INCONCLUSIVE
    return ExcludingVerdict(status, rep.max_ratio, rep.witness_normal, tol, rep)


def isop_lower_bound(d: int, volume: float) -> float:
    """kappa_d^{1/d} / |C|^{1/d}, the isoperimetric lower bound on Isop(C)."""
    from .special import kappa

    return (float(kappa(d)) / volume) ** (1.0 / d)


def random_rotation(n: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    return q * np.sign(np.diag(r))


def rotate(P: VPolytope, R: np.ndarray) -> VPolytope:
    """Image of P under an approximate orthogonal map (floating coordinates)."""
    return VPolytope((P.vertex_array() @ np.asarray(R).T).tolist())


__all__ = [
    "Atom", "SurfaceMeasure", "surface_measure", "embed_facet", "isop", "FacetRatio",
    "IsopReport", "facet_ratios", "excluding_check", "ExcludingVerdict", "EXCLUDED",
    "BOUNDARY", "INCONCLUSIVE", "EXCLUDE_TOL", "isop_lower_bound", "DEFAULT_TOL",
]
