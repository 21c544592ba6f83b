"""p-adic Newton polygons of sparse polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import ord_p
from .poly import SparsePoly


class SingleTerm(ValueError):
    pass


@dataclass(frozen=True)
class PolygonEdge:
    left: tuple[int, int]
    right: tuple[int, int]

    @property
    def slope(self) -> Fraction:
        return Fraction(self.right[1] - self.left[1], self.right[0] - self.left[0])

    @property
    def length(self) -> int:
        return self.right[0] - self.left[0]

    @property
    def root_valuation(self) -> Fraction:
        return -self.slope

    def to_json(self) -> dict:
        s = self.slope
        return {
            "from": list(self.left),
            "to": list(self.right),
            "slope": f"{s.numerator}/{s.denominator}",
            "length": self.length,
        }


def _cross(o, a, b) -> int:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def lower_hull(f: SparsePoly, p: int) -> list[PolygonEdge]:
    """Lower edges of the hull of {(a_i, ord_p c_i)}, left to right."""
    if len(f) < 2:
        raise SingleTerm("a monomial has no Newton polygon edges")
    pts = [(a, ord_p(c, p)) for a, c in f.terms]
    hull: list[tuple[int, int]] = []
    for pt in pts:
        # pop while the turn is clockwise or straight (keep only vertices)
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
            hull.pop()
        hull.append(pt)
    return [PolygonEdge(hull[i], hull[i + 1]) for i in range(len(hull) - 1)]


def roots_by_valuation(f: SparsePoly, p: int) -> list[tuple[Fraction, int]]:
    """(valuation, number of C_p roots) per lower edge."""
    return [(e.root_valuation, e.length) for e in lower_hull(f, p)]


def has_integral_valuation_candidates(f: SparsePoly, p: int) -> tuple[bool, list[int]]:
    vals = [int(v) for v, _ in roots_by_valuation(f, p) if v.denominator == 1]
    return bool(vals), vals
