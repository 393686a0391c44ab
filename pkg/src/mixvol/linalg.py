"""Exact integer/rational linear algebra used by the polytope kernel."""

from __future__ import annotations

import math
from decimal import Decimal
from fractions import Fraction
from typing import Iterable, Sequence

Vec = tuple  # tuple of Fraction or int


def to_fraction(x) -> Fraction:
    """Convert ``x`` to an exact Fraction.

    Floats are converted through their binary expansion, so ``0.1`` becomes
    ``3602879701896397/36028797018963968``. Strings may be ``"p/q"`` or
    decimal literals (``"0.1"`` is exactly ``1/10``).
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite coordinate {x!r}")
        return Fraction(x)
    if isinstance(x, Decimal):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    # numpy scalars and the like
    if hasattr(x, "item"):
        return to_fraction(x.item())
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


def to_vector(v: Iterable) -> tuple[Fraction, ...]:
    return tuple(to_fraction(c) for c in v)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v))


def add(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v))


def scale(c, v: Sequence) -> tuple:
    return tuple(c * a for a in v)


def norm_sq(v: Sequence):
    return sum(a * a for a in v)


def gcd_list(values: Iterable[int]) -> int:
    g = 0
    for x in values:
        g = math.gcd(g, x)
    return g


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    g = gcd_list(v)
    if g == 0:
        raise ValueError("zero vector has no primitive form")
    return tuple(x // g for x in v)


def integer_direction(v: Sequence) -> tuple[int, ...]:
    """Primitive integer vector positively proportional to a rational vector."""
    fr = [to_fraction(c) for c in v]
    den = 1
    for c in fr:
        den = den * c.denominator // math.gcd(den, c.denominator)
    return primitive([int(c * den) for c in fr])


def common_denominator(values: Iterable[Fraction]) -> int:
    den = 1
    for c in values:
        d = c.denominator
        if d != 1:
            den = den * d // math.gcd(den, d)
    return den


def det_int(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        a, b, c = m
        return (a[0] * (b[1] * c[2] - b[2] * c[1])
                - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0]))
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def det(m: Sequence[Sequence]) -> Fraction:
    """Exact determinant of a rational square matrix."""
    rows = []
    denom = 1
    for row in m:
        fr = [to_fraction(x) for x in row]
        d = common_denominator(fr)
        rows.append([int(x * d) for x in fr])
        denom *= d
    return Fraction(det_int(rows), denom)


def row_reduce(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals; returns (rref rows, pivot columns)."""
    a = [[to_fraction(x) for x in row] for row in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(row_reduce(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> list[tuple[int, ...]]:
    """Primitive integer basis of {x : rows @ x = 0}."""
    if ncols is None:
        ncols = len(rows[0])
    if not rows:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    red, pivots = row_reduce(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [Fraction(0)] * ncols
        x[fc] = Fraction(1)
        for row, pc in zip(red, pivots):
            x[pc] = -row[fc]
        basis.append(integer_direction(x))
    return basis


def solve(m: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...]:
    """Solve the square system ``m x = b`` exactly."""
    n = len(m)
    aug = [list(row) + [bi] for row, bi in zip(m, b)]
    red, pivots = row_reduce(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("singular system")
    return tuple(red[i][n] for i in range(n))


def inverse(m: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(m)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red, pivots = row_reduce(aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in red]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = list(zip(*b))
    return [[dot(row, col) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in a)


def transpose(a: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*a)]


def hyperplane_normal(points: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Integer normal of the hyperplane through k affinely independent points in Z^k.

    Uses cofactor expansion of the (k-1) x k difference matrix; the result is
    not reduced and may be the zero vector for dependent input.
    """
    p0 = points[0]
    k = len(p0)
    diffs = [[p[j] - p0[j] for j in range(k)] for p in points[1:]]
    if k == 2:
        d = diffs[0]
        return (d[1], -d[0])
    if k == 3:
        u, v = diffs
        return (u[1] * v[2] - u[2] * v[1],
                u[2] * v[0] - u[0] * v[2],
                u[0] * v[1] - u[1] * v[0])
    normal = []
    for j in range(k):
        minor = [row[:j] + row[j + 1:] for row in diffs]
        c = det_int(minor)
        normal.append(c if j % 2 == 0 else -c)
    return tuple(normal)
