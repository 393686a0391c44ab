"""Exact convex hulls of integer point sets (beneath-beyond with conflict lists).

All predicates are evaluated in Python integers, so there is no roundoff.
The boundary is kept as a simplicial complex; coplanar simplices are merged
into true facets afterwards and non-extreme boundary points are dropped by a
normal-cone rank test.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import gcd_list, hyperplane_normal, nullspace, rank


class DegenerateHullError(ValueError):
    """Raised when a full-dimensional hull is requested for flat input."""


@dataclass
class _Simplex:
    verts: tuple[int, ...]
    normal: tuple[int, ...]
    offset: int
    outside: list[int] = field(default_factory=list)
    alive: bool = True


@dataclass
class HullResult:
    """Output of :func:`full_hull`.

    ``simplices`` triangulate the boundary; each entry is (vertex indices,
    facet key). ``facets`` maps a facet key ``(normal, offset)`` with a
    gcd-reduced outward normal to the extreme points on that facet.
    """

    extreme: list[int]
    simplices: list[tuple[tuple[int, ...], tuple]]
    facets: dict[tuple, list[int]]


def _reduced(normal, offset):
    g = gcd_list(list(normal) + [offset])
    if g > 1:
        return tuple(c // g for c in normal), offset // g
    return tuple(normal), offset


def _dot(a, p):
    return sum(x * y for x, y in zip(a, p))


def affine_basis(pts: list[tuple[int, ...]]) -> list[int]:
    """Indices of a maximal affinely independent subset, preferring spread-out points.

    Floating point only orders the candidates; independence is decided exactly.
    """
    k = len(pts[0])
    # floats only rank candidates, so drop low bits of huge coordinates
    shift = max(max(abs(c) for c in p).bit_length() for p in pts) - 900
    if shift > 0:
        arr = np.array([[float(c >> shift) for c in p] for p in pts])
    else:
        arr = np.array([[float(c) for c in p] for p in pts])
    first = int(np.lexsort(arr.T[::-1])[0])
    chosen = [first]
    basis_rows: list[list[int]] = []
    p0 = pts[first]
    centered = arr - arr[first]
    scale = np.abs(centered).max() or 1.0
    centered = centered / scale
    q = np.zeros((0, k))
    while len(chosen) < k + 1:
        resid = centered - (centered @ q.T) @ q if len(q) else centered
        norms = np.einsum("ij,ij->i", resid, resid)
        norms[chosen] = -1.0
        idx = int(np.argmax(norms))
        picked = None
        if norms[idx] > 0:
            cand = [pts[idx][j] - p0[j] for j in range(k)]
            if rank(basis_rows + [cand]) == len(basis_rows) + 1:
                picked = idx
        if picked is None:
            # exact scan: any point off the current affine span
            normals = nullspace(basis_rows, k) if basis_rows else [
                tuple(int(i == j) for j in range(k)) for i in range(k)]
            for i, p in enumerate(pts):
                d = [p[j] - p0[j] for j in range(k)]
                if any(_dot(nv, d) != 0 for nv in normals):
                    picked = i
                    break
            if picked is None:
                break
        chosen.append(picked)
        basis_rows.append([pts[picked][j] - p0[j] for j in range(k)])
        v = resid[picked]
        nv = np.linalg.norm(v)
        if nv > 0:
            q = np.vstack([q, v / nv]) if len(q) else (v / nv)[None, :]
    return chosen


def full_hull(pts: list[tuple[int, ...]], init: list[int] | None = None) -> HullResult:
    """Convex hull of full-dimensional integer points in Z^k, k >= 2.

    ``init`` optionally gives k+1 affinely independent starting indices.
    """
    k = len(pts[0])
    if init is None:
        init = affine_basis(pts)
    if len(init) != k + 1:
        raise DegenerateHullError("points are not full-dimensional")
    # interior reference: (k+1) * centroid of the initial simplex
    ref = tuple(sum(pts[i][j] for i in init) for j in range(k))
    kp1 = k + 1

    simplices: list[_Simplex] = []
    ridge_map: dict[frozenset, list[int]] = {}

    def make(verts: tuple[int, ...]) -> int:
        normal = hyperplane_normal([pts[i] for i in verts])
        offset = _dot(normal, pts[verts[0]])
        if _dot(normal, ref) > kp1 * offset:
            normal = tuple(-c for c in normal)
            offset = -offset
        normal, offset = _reduced(normal, offset)
        simplices.append(_Simplex(verts, normal, offset))
        sid = len(simplices) - 1
        for skip in range(len(verts)):
            ridge = frozenset(verts[:skip] + verts[skip + 1:])
            ridge_map.setdefault(ridge, []).append(sid)
        return sid

    def unlink(sid: int) -> None:
        s = simplices[sid]
        s.alive = False
        for skip in range(len(s.verts)):
            ridge = frozenset(s.verts[:skip] + s.verts[skip + 1:])
            lst = ridge_map[ridge]
            lst.remove(sid)
            if not lst:
                del ridge_map[ridge]

    for skip in range(kp1):
        make(tuple(init[:skip] + init[skip + 1:]))

    def assign(candidates, new_ids) -> None:
        for p in candidates:
            pt = pts[p]
            for sid in new_ids:
                s = simplices[sid]
                if _dot(s.normal, pt) > s.offset:
                    s.outside.append(p)
                    break

    init_set = set(init)
    assign([i for i in range(len(pts)) if i not in init_set], list(range(kp1)))

    stack = [sid for sid in range(kp1) if simplices[sid].outside]
    while stack:
        sid = stack.pop()
        s = simplices[sid]
        if not s.alive or not s.outside:
            continue
        best = max(s.outside, key=lambda p: _dot(s.normal, pts[p]) - s.offset)
        apex = pts[best]

        visible = {sid}
        frontier = [sid]
        horizon: list[tuple[int, ...]] = []
        while frontier:
            cur = frontier.pop()
            cv = simplices[cur].verts
            for skip in range(len(cv)):
                ridge_t = cv[:skip] + cv[skip + 1:]
                ridge = frozenset(ridge_t)
                nbrs = ridge_map[ridge]
                other = nbrs[0] if nbrs[1] == cur else nbrs[1]
                if other in visible:
                    continue
                o = simplices[other]
                if _dot(o.normal, apex) > o.offset:
                    visible.add(other)
                    frontier.append(other)
                else:
                    horizon.append(ridge_t)

        orphans: list[int] = []
        for vid in sorted(visible):
            orphans.extend(p for p in simplices[vid].outside if p != best)
            simplices[vid].outside = []
            unlink(vid)
        new_ids = [make(ridge_t + (best,)) for ridge_t in horizon]
        assign(orphans, new_ids)
        stack.extend(n for n in new_ids if simplices[n].outside)

    alive = [s for s in simplices if s.alive]
    incident: dict[int, dict[tuple, None]] = {}
    facets: dict[tuple, list[int]] = {}
    for s in alive:
        key = (s.normal, s.offset)
        facets.setdefault(key, [])
        for v in s.verts:
            incident.setdefault(v, {})[key] = None

    extreme = []
    for v in sorted(incident):
        keys = list(incident[v])
        if len(keys) >= k and rank([key[0] for key in keys]) == k:
            extreme.append(v)
            for key in keys:
                facets[key].append(v)
    out_simplices = [(s.verts, (s.normal, s.offset)) for s in alive]
    return HullResult(extreme=extreme, simplices=out_simplices, facets=facets)
