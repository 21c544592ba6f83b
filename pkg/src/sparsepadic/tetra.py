"""A tetranomial family whose two closest roots in Q_p agree to roughly
(h-1)d/2 + h digits.

    p^(2h) f(x) = p^(2h) x^d - x^2 + 2 p^(h-1) x - p^(2h-2),
    f(x)        = x^d - (x/p^h - 1/p)^2.

Shifting by p^(h-1) and rescaling by p^E with E = (h-1)d/2 + h gives
G(y) = (1 + p^(E-h+1) y)^d - y^2, which is 1 - y^2 modulo p^(E-h+1), so
its roots near 1 and -1 lift and map back to roots of f that differ by
p^E times a unit.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass

from .arith import check_odd_prime, ord_p
from .hensel import lift_seed
from .poly import SparsePoly


class InvalidParameters(ValueError):
    pass


class PrecisionTooLow(ValueError):
    pass


@dataclass(frozen=True)
class TetranomialInstance:
    p: int
    h: int
    d: int
    poly_scaled: SparsePoly
    expected_ord_gap: int

    @property
    def log_height(self) -> float:
        return 2 * self.h * math.log(self.p)


def make_instance(p: int, h: int, d: int) -> TetranomialInstance:
    check_odd_prime(p)
    if h < 3:
        raise InvalidParameters("need h >= 3")
    if d % 2 or d < 4 or d > math.floor(math.exp(h)):
        raise InvalidParameters(f"need d even with 4 <= d <= floor(e^h) = {math.floor(math.exp(h))}")
    poly = SparsePoly.from_terms(
        [(0, -(p ** (2 * h - 2))), (1, 2 * p ** (h - 1)), (2, -1), (d, p ** (2 * h))]
    )
    return TetranomialInstance(p, h, d, poly, (h - 1) * d // 2 + h)


def scaled_G(inst: TetranomialInstance) -> SparsePoly:
    """G(y) = (1 + p^(E-h+1) y)^d - y^2, exactly."""
    p, h, d = inst.p, inst.h, inst.d
    t = p ** (inst.expected_ord_gap - h + 1)
    coeffs = [math.comb(d, i) * t**i for i in range(d + 1)]
    coeffs[2] -= 1
    return SparsePoly.from_dense(coeffs)


def close_roots(inst: TetranomialInstance, K: int) -> tuple[int, int]:
    """The two roots of p^(2h) f near p^(h-1), modulo p^K."""
    p, E = inst.p, inst.expected_ord_gap
    G = scaled_G(inst)
    ys = [lift_seed(G, seed % p**K, p, 0, K) for seed in (1, -1)]
    m = p**K
    return tuple((p ** (inst.h - 1) + p**E * y) % m for y in ys)


def measure_separation(inst: TetranomialInstance, precision: int) -> int:
    """ord_p(x1 - x2) for the two roots near p^(h-1), at p-adic precision K."""
    if precision <= inst.expected_ord_gap + 4:
        raise PrecisionTooLow(f"need precision > {inst.expected_ord_gap + 4}")
    x1, x2 = close_roots(inst, precision)
    diff = (x1 - x2) % inst.p**precision
    if diff == 0:
        raise PrecisionTooLow("roots agree to full precision")
    return ord_p(diff, inst.p)


def root_residual_orders(inst: TetranomialInstance, precision: int) -> list[int]:
    """ord_p of p^(2h) f at the two computed roots (genuineness check)."""
    m = inst.p ** precision
    out = []
    for x in close_roots(inst, precision):
        r = sum(c * pow(x, a, m) for a, c in inst.poly_scaled.terms) % m
        out.append(precision if r == 0 else ord_p(r, inst.p))
    return out


def digits_to_distinguish(inst: TetranomialInstance, precision: int) -> int:
    return measure_separation(inst, precision) + 1


def bench_rows(p: int, h: int, d_list, slack: int = 8) -> list[dict]:
    rows = []
    for d in d_list:
        t0 = time.perf_counter()
        inst = make_instance(p, h, d)
        K = inst.expected_ord_gap + slack
        gap = measure_separation(inst, K)
        wall = time.perf_counter() - t0
        rows.append(
            {
                "p": p,
                "h": h,
                "d": d,
                "expected_gap": inst.expected_ord_gap,
                "measured_gap": gap,
                "digits": gap + 1,
                "normalized_gap": f"{gap / (d * inst.log_height):.6f}",
                "wall_time": f"{wall:.6f}",
            }
        )
    return rows


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    cols = ["p", "h", "d", "expected_gap", "measured_gap", "digits", "normalized_gap", "wall_time"]
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()
