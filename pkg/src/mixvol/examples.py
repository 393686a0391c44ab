"""Closed-form isoperimetric values for the standard bodies, recomputed through the generic pipeline."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .bodies import box, corner_simplex, cross_polytope, cube, cylinder, half_ball, regular_simplex
from .isoperimetric import facet_ratios, isop
from .special import wallis


@dataclass(frozen=True)
class ExampleRow:
    name: str
    quantity: str
    pipeline: float
    closed_form: float
    formula: str
    tolerance: float

    @property
    def error(self) -> float:
        return abs(self.pipeline - self.closed_form)

    @property
    def ok(self) -> bool:
        return self.error <= self.tolerance * max(1.0, abs(self.closed_form))


def examples_table(tol: float = 1e-9, half_ball_res: int = 200,
                   include_half_ball: bool = True) -> list[ExampleRow]:
    rows: list[ExampleRow] = []

    def add(name, quantity, value, closed, formula, t=tol):
        rows.append(ExampleRow(name, quantity, float(value), float(closed), formula, t))

    for n in (3, 4, 5):
        add(f"cube n={n}", "Isop(K)", isop(cube(n)), 2, "2")
    for n in (3, 4):
        rep = facet_ratios(box([2] + [1] * (n - 1)))
        add(f"box diag(2,1,..) n={n}", "Isop(K)", rep.isop_K, 2 - 1 / n, "2 - 1/n")
        add(f"box diag(2,1,..) n={n}", "max facet ratio", rep.max_ratio, 2 / (2 - 1 / n),
            "2/(2 - 1/n)")
    for n in (3, 4):
        add(f"octahedron n={n}", "max facet ratio", facet_ratios(cross_polytope(n)).max_ratio,
            math.sqrt(n - 1), "sqrt(n-1)")
    for n in (3, 4):
        rep = facet_ratios(corner_simplex(n))
        add(f"corner simplex n={n}", "Isop(K)", rep.isop_K, n + math.sqrt(n), "n + sqrt(n)")
        add(f"corner simplex n={n}", "max facet ratio", rep.max_ratio,
            (n - 1 + math.sqrt(n - 1)) / (n + math.sqrt(n)), "(n-1+sqrt(n-1))/(n+sqrt(n))")
    for n in (3, 4):
        rep = facet_ratios(regular_simplex(n))
        add(f"regular simplex n={n}", "Isop(K)", rep.isop_K, math.sqrt(n * (n + 1)),
            "sqrt(n(n+1))")
        add(f"regular simplex n={n}", "max facet ratio", rep.max_ratio,
            math.sqrt((n - 1) / (n + 1)), "sqrt((n-1)/(n+1))")
    # cylinder over the unit square: ratio t n/(n-1) per(L) / (2 area(L) + t per(L))
    n, t = 3, Fraction(2)
    rep = facet_ratios(cylinder(cube(2), t))
    add("cylinder L=[0,1]^2 t=2", "max facet ratio", rep.max_ratio,
        float(t) * n / (n - 1) * 4 / (2 + float(t) * 4), "t n/(n-1) per(L)/(2 area(L)+t per(L))")
    if include_half_ball:
        n = 3
        M = half_ball(n, half_ball_res)
        # inscribed polytope: a few percent below the round values
        add(f"half-ball n=3 res={half_ball_res}", "Isop(K)", isop(M),
            1 + 1 / (n * float(wallis(n))), "1 + 1/(n W_n)", 0.02)
        disk = M.facet_by_normal((0, 0, -1))
        from .isoperimetric import embed_facet

        add(f"half-ball n=3 res={half_ball_res}", "Isop(flat facet)",
            isop(embed_facet(disk, M)), 1, "1", 0.02)
    return rows


def table_markdown(rows: list[ExampleRow]) -> str:
    lines = ["| body | quantity | pipeline | closed form | formula | abs error | ok |",
             "|---|---|---|---|---|---|---|"]
    for r in rows:
        lines.append(f"| {r.name} | {r.quantity} | {r.pipeline:.12g} | {r.closed_form:.12g} | "
                     f"{r.formula} | {r.error:.2e} | {'yes' if r.ok else 'NO'} |")
    return "\n".join(lines)
