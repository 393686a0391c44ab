"""Wallis integrals, ball volumes, and the half-ellipsoid quadrature.

W_n and kappa_n are kept as exact ``coef * pi**power`` pairs so that
inequalities between them can be decided with rational bounds on pi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

# 3.14159265358979323846264338327950288 lies strictly between these
_PI_LO = Fraction(314159265358979323846264338327950288, 10 ** 35)
_PI_HI = Fraction(314159265358979323846264338327950289, 10 ** 35)


@dataclass(frozen=True)
class PiMultiple:
    """The real number ``coef * pi**power`` with rational ``coef``."""

    coef: Fraction
    power: int = 0

    def __float__(self) -> float:
        return float(self.coef) * math.pi ** self.power

    def __mul__(self, other):
        if isinstance(other, PiMultiple):
            return PiMultiple(self.coef * other.coef, self.power + other.power)
        return PiMultiple(self.coef * Fraction(other), self.power)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PiMultiple):
            return PiMultiple(self.coef / other.coef, self.power - other.power)
        return PiMultiple(self.coef / Fraction(other), self.power)

    def bounds(self) -> tuple[Fraction, Fraction]:
        """Rational interval containing the value."""
        if self.power >= 0:
            lo, hi = _PI_LO ** self.power, _PI_HI ** self.power
        else:
            lo, hi = _PI_HI ** self.power, _PI_LO ** self.power
        a, b = self.coef * lo, self.coef * hi
        return (a, b) if a <= b else (b, a)

    def __lt__(self, other) -> bool:
        return _compare(self, other) < 0

    def __gt__(self, other) -> bool:
        return _compare(self, other) > 0

    def __str__(self) -> str:
        if self.power == 0:
            return str(self.coef)
        p = "pi" if self.power == 1 else f"pi^{self.power}"
        return f"{self.coef}*{p}"


def _as_pm(x) -> PiMultiple:
    return x if isinstance(x, PiMultiple) else PiMultiple(Fraction(x), 0)


def _compare(a, b) -> int:
    """Strict sign of a - b, decided with rational bounds on pi.

    Equal pi-powers compare coefficients directly; otherwise the bounds must
    separate, and a ValueError is raised if they cannot (never observed for
    the quantities used here).
    """
    a, b = _as_pm(a), _as_pm(b)
    if a.power == b.power:
        return (a.coef > b.coef) - (a.coef < b.coef)
    alo, ahi = a.bounds()
    blo, bhi = b.bounds()
    if ahi < blo:
        return -1
    if alo > bhi:
        return 1
    raise ValueError(f"cannot separate {a} and {b} with the stored bounds on pi")


@lru_cache(maxsize=None)
def wallis(n: int) -> PiMultiple:
    """W_n = int_0^{pi/2} cos^n: pi/2 * rational for even n, rational for odd n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return PiMultiple(Fraction(1, 2), 1)
    if n == 1:
        return PiMultiple(Fraction(1), 0)
    return wallis(n - 2) * Fraction(n - 1, n)


@lru_cache(maxsize=None)
def kappa(n: int) -> PiMultiple:
    """Volume of the unit n-ball, kappa_n = 2 kappa_{n-1} W_n."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return PiMultiple(Fraction(1), 0)
    return kappa(n - 1) * wallis(n) * 2


def wallis_square_bounds(n: int) -> tuple[bool, bool]:
    """Exact check of pi/(2(n+1)) < W_n^2 < pi/(2n) for n >= 1."""
    w2 = wallis(n) * wallis(n)
    lower = PiMultiple(Fraction(1, 2 * (n + 1)), 1)
    upper = PiMultiple(Fraction(1, 2 * n), 1)
    return lower < w2, w2 < upper


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    evaluations: int


class QuadratureError(RuntimeError):
    pass


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10,
                     max_evals: int = 200_000) -> QuadratureResult:
    """Adaptive Simpson rule with Richardson correction.

    Intervals are refined until the local error estimate |S2 - S1|/15 meets
    its share of ``tol``; exceeding ``max_evals`` raises QuadratureError.
    """
    fa, fm, fb = f(a), f((a + b) / 2), f(b)
    evals = 3
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    stack = [(a, b, fa, fm, fb, whole, tol)]
    total = 0.0
    err = 0.0
    parts = []
    while stack:
        lo, hi, flo, fmid, fhi, s, eps = stack.pop()
        mid = (lo + hi) / 2
        lm, rm = (lo + mid) / 2, (mid + hi) / 2
        flm, frm = f(lm), f(rm)
        evals += 2
        if evals > max_evals:
            raise QuadratureError(f"tolerance {tol} not reached within {max_evals} evaluations")
        left = (mid - lo) / 6 * (flo + 4 * flm + fmid)
        right = (hi - mid) / 6 * (fmid + 4 * frm + fhi)
        delta = left + right - s
        if abs(delta) <= 15 * eps or hi - lo < 1e-12:
            parts.append(left + right + delta / 15)
            err += abs(delta) / 15
        else:
            stack.append((lo, mid, flo, flm, fmid, left, eps / 2))
            stack.append((mid, hi, fmid, frm, fhi, right, eps / 2))
    total = math.fsum(parts)
    return QuadratureResult(total, err, evals)


def ellipsoid_lambda(n: int, a: float, tol: float = 1e-10) -> QuadratureResult:
    """lambda(n, a) = int_0^{pi/2} cos^{n-2} psi (1 + (a^2-1) sin^2 psi)^{-1/2} dpsi / W_{n-2}.

    This is the ratio of the surface area of the ellipsoid E_a =
    diag(1,..,1,a) B to a * n * kappa_n, and lies in (1/a, 1].
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    a = float(a)
    if not a >= 1:
        raise ValueError("a must be at least 1")
    c = a * a - 1

    def g(psi):
        s = math.sin(psi)
        return math.cos(psi) ** (n - 2) / math.sqrt(1 + c * s * s)

    w = float(wallis(n - 2))
    res = adaptive_simpson(g, 0.0, math.pi / 2, tol * w)
    return QuadratureResult(res.value / w, res.abs_error_estimate / w, res.evaluations)


def ellipsoid_area_lambda(n: int, a: float, tol: float = 1e-10) -> QuadratureResult:
    """|d E_a| / (a n kappa_n) from the Cauchy-type area formula.

    Pushing the sphere forward by T = diag(1,..,1,a) gives
    |d E_a| = a int_S |T^{-T} u| du
            = 2(n-1) kappa_{n-1} a int_0^{pi/2} cos^{n-2} psi (1 - (1 - a^-2) sin^2 psi)^{1/2} dpsi.
    This is an independent route to the ellipsoid area; it differs from
    :func:`ellipsoid_lambda` for a > 1 (see the README).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    a = float(a)
    if not a >= 1:
        raise ValueError("a must be at least 1")
    c = 1 - 1 / (a * a)

    def g(psi):
        s = math.sin(psi)
        return math.cos(psi) ** (n - 2) * math.sqrt(1 - c * s * s)

    w = float(wallis(n - 2))
    res = adaptive_simpson(g, 0.0, math.pi / 2, tol * w)
    return QuadratureResult(res.value / w, res.abs_error_estimate / w, res.evaluations)


@dataclass(frozen=True)
class HalfEllipsoidIsop:
    value: float
    lam: QuadratureResult
    surface_area: float  # lambda * a * n * kappa_n
    area_lambda: QuadratureResult
    true_surface_area: float
    true_value: float


def half_ellipsoid_isop(n: int, a: float, tol: float = 1e-10) -> HalfEllipsoidIsop:
    """Isop of the half-ellipsoid diag(1,..,1,a)M, equal to lambda + 1/(a n W_n).

    ``value`` uses :func:`ellipsoid_lambda`; ``true_value`` repeats the
    computation with the area-formula ratio of :func:`ellipsoid_area_lambda`.
    """
    lam = ellipsoid_lambda(n, a, tol)
    lam_true = ellipsoid_area_lambda(n, a, tol)
    a = float(a)
    flat = 1.0 / (a * n * float(wallis(n)))
    scale = a * n * float(kappa(n))
    return HalfEllipsoidIsop(
        value=lam.value + flat,
        lam=lam,
        surface_area=lam.value * scale,
        area_lambda=lam_true,
        true_surface_area=lam_true.value * scale,
        true_value=lam_true.value + flat,
    )
