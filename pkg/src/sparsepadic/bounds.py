"""Explicit root separation bounds.

All real arithmetic is interval arithmetic at 256 bits; reported values are
upper endpoints, so every bound stays valid despite rounding.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field

import gmpy2
from mpmath import iv, mp, mpf

from .arith import check_odd_prime
from .poly import NonIntegralShift, SparsePoly, normalize_x_power, rescale_unit_coeffs

PREC_BITS = 256
BINOMIAL_SEP = "BINOMIAL_SEP"
TRINOMIAL_SEP = "TRINOMIAL_SEP"
YU_VALUATION = "YU_VALUATION"


class DomainError(ValueError):
    pass


class NotSquareFree(ValueError):
    pass


@dataclass
class BoundReport:
    bound_kind: str
    value: mpf
    inputs_echo: dict = field(default_factory=dict)
    ord_bound: mpf | None = None
    k_required: int | None = None

    def to_json(self) -> dict:
        out = {"kind": self.bound_kind, "value": _fmt(self.value), "inputs": self.inputs_echo}
        if self.ord_bound is not None:
            out["ord_bound"] = _fmt(self.ord_bound)
        if self.k_required is not None:
            out["k_required"] = str(self.k_required)
        return out


@contextmanager
def _workprec(bits: int):
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


def _upper(x) -> mpf:
    """Upper endpoint of an interval as an exact mpf (no re-rounding)."""
    return mp.make_mpf(x._mpi_[1])


def _ceil_exact(x: mpf) -> int:
    """Exact ceiling of a binary floating-point mpf."""
    man, exp = int(x.man) * (1 if x >= 0 else -1), int(x.exp)
    if exp >= 0:
        return man << exp
    return -((-man) >> -exp)


def _fmt(x) -> str:
    with mp.workdps(30):
        return mp.nstr(x, 25)


def _iv(x):
    return iv.mpf(x)


def _yu_interval(n: int, p: int, logA, logB):
    with _workprec(PREC_BITS):
        lp = iv.log(p)
        A = [_iv(a) for a in logA]
        prodA = iv.mpf(1)
        for a in A:
            prodA *= a
        first = 11145 * (24 * iv.mpf(n + 1) ** 2 / lp) ** (n + 2) * (p - 1)
        log4B = iv.log(4) + _iv(logB)
        m1 = iv.log(iv.mpf(2) ** 12 * 3 * n * (n + 1) * A[-1])
        m2 = lp / n
        # max of intervals, endpoint by endpoint
        lo = max(mp.make_mpf(m1._mpi_[0]), mp.make_mpf(m2._mpi_[0]))
        hi = max(_upper(m1), _upper(m2))
        mx = iv.mpf([lo, hi])
        return first * prodA * log4B * mx


def yu_valuation_bound(n: int, p: int, logA, logB) -> mpf:
    """Upper bound on ord_p(alpha_1^b_1 ... alpha_n^b_n - 1) from the explicit
    linear-forms estimate

        11145 (24(n+1)^2 / log p)^(n+2) (p-1) (prod log A_i) log(4B)
              * max{log(2^12 * 3n(n+1) log A_n), log(p)/n}.

    ``logA`` and ``logB`` are the logarithms of the height parameters.
    """
    check_odd_prime(p)
    if n < 2 or len(logA) != n:
        raise DomainError("need n >= 2 and n values of log A_i")
    lp = math.log(p)
    A = [mpf(a) for a in logA]
    if any(A[i] > A[i + 1] for i in range(n - 1)):
        raise DomainError("log A_i must be non-decreasing")
    # tiny slack: inputs are often computed as log(p) in double precision
    if any(a < lp * (1 - 1e-12) for a in A) or mpf(logB) < math.log(3) * (1 - 1e-12):
        raise DomainError("need log A_i >= log p and log B >= log 3")
    return _upper(_yu_interval(n, p, logA, logB))


def yu_valuation_bound_mpfr(n: int, p: int, logA, logB):
    """Second evaluator of the same expression, with gmpy2 directed rounding:
    quantities in numerators rounded up, the log p divisor rounded down."""
    up = gmpy2.context(precision=PREC_BITS, round=gmpy2.RoundUp)
    down = gmpy2.context(precision=PREC_BITS, round=gmpy2.RoundDown)
    with down:
        lp_lo = gmpy2.log(gmpy2.mpfr(p))
    with up:
        lp_hi = gmpy2.log(gmpy2.mpfr(p))
        A = [gmpy2.mpfr(a) for a in logA]
        base = gmpy2.mpfr(24) * (n + 1) ** 2 / lp_lo
        first = gmpy2.mpfr(11145) * base ** (n + 2) * (p - 1)
        prodA = gmpy2.mpfr(1)
        for a in A:
            prodA *= a
        log4B = gmpy2.log(gmpy2.mpfr(4)) + gmpy2.mpfr(logB)
        m1 = gmpy2.log(gmpy2.mpfr(2) ** 12 * 3 * n * (n + 1) * A[-1])
        m2 = lp_hi / n
        return first * prodA * log4B * max(m1, m2)


def yu_report(n: int, p: int, logA, logB) -> BoundReport:
    v = yu_valuation_bound(n, p, logA, logB)
    return BoundReport(YU_VALUATION, v, {"n": n, "p": p, "logA": [str(a) for a in logA], "logB": str(logB)})


def binomial_separation_bound(d: int, H: int, p: int | None) -> BoundReport:
    """Upper bound on |log |z1 - z2|_p| for distinct roots of a binomial of
    degree d and height H; p=None selects the archimedean variant."""
    if d < 1 or H < 1:
        raise DomainError("need d >= 1 and H >= 1")
    with _workprec(PREC_BITS):
        logH = iv.log(H)
        if p is None:
            val = iv.mpf(3) / 2 * iv.log(3) + iv.log(d) + logH / d
            ordb = None
        else:
            check_odd_prime(p)
            lp = iv.log(p)
            val = lp / d * logH
            if d % p == 0:
                val += lp / (p - 1)
            ordb = _upper(val / lp)
    return BoundReport(BINOMIAL_SEP, _upper(val), {"d": d, "H": str(H), "p": p}, ord_bound=ordb)


def input_size(f: SparsePoly):
    """s = sum of log((|c_i| + 2)(|a_i| + 2)), as an interval."""
    with _workprec(PREC_BITS):
        s = iv.mpf(0)
        for a, c in f.terms:
            s += iv.log(abs(c) + 2) + iv.log(a + 2)
        return s


def trinomial_separation_bound(f: SparsePoly, p: int) -> BoundReport:
    """Explicit bound on ord_p(z1 - z2) over distinct roots z1, z2 in Q_p of
    a square-free trinomial, and the precision k = ceil(2*bound + 1)."""
    from .solvers import degenerate_binomial

    check_odd_prime(p)
    g, _ = normalize_x_power(f)
    if len(g) != 3:
        raise ValueError("expected a trinomial")
    if degenerate_binomial(g) is not None:
        raise NotSquareFree("trinomial has a double root")
    with _workprec(PREC_BITS):
        s = _upper(input_size(g))
        try:
            s = max(s, _upper(input_size(rescale_unit_coeffs(g, p)[0])))
        except NonIntegralShift:
            pass
        lp = iv.log(p)
        logA = max(2 * s, _upper(lp))
        logB = max(s, _upper(iv.log(3)))
        yu = _yu_interval(2, p, [logA, logA], logB)
        ordb = iv.mpf(s) / lp + yu + iv.mpf(1) / (p - 1)
        k = _ceil_exact(_upper(2 * ordb + 1))
        value = _upper(ordb * lp)
    return BoundReport(
        TRINOMIAL_SEP,
        value,
        {"p": p, "s": _fmt(s), "h_p": _fmt(max(s, mpf(math.log(p))))},
        ord_bound=_upper(ordb),
        k_required=k,
    )
