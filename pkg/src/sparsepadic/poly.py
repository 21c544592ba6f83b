"""Exact sparse integer polynomials in one variable."""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import PadicContext, ord_p

MAX_EXPONENT = 2**63 - 1


class PolySyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class NegativeExponent(ValueError):
    pass


class ZeroPolynomial(ValueError):
    pass


class ConstantTermZero(ValueError):
    pass


class NonIntegralShift(ValueError):
    """Roots of the requested edge have non-integral valuation."""


class IndexOutOfRange(IndexError):
    pass


@dataclass(frozen=True)
class SparsePoly:
    """Sum of c*x^a terms, stored as (a, c) pairs with increasing a."""

    terms: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        prev = -1
        for a, c in self.terms:
            if a <= prev:
                raise ValueError("exponents must be strictly increasing")
            if c == 0:
                raise ValueError("zero coefficient in canonical form")
            if a > MAX_EXPONENT:
                raise ValueError("exponent exceeds 64-bit range")
            prev = a

    @classmethod
    def from_terms(cls, pairs: Iterable[tuple[int, int]]) -> "SparsePoly":
        acc: dict[int, int] = {}
        for a, c in pairs:
            if a < 0:
                raise NegativeExponent(f"negative exponent {a}")
            acc[a] = acc.get(a, 0) + c
        return cls(tuple(sorted((a, c) for a, c in acc.items() if c != 0)))

    @classmethod
    def from_dense(cls, coeffs: Sequence[int]) -> "SparsePoly":
        return cls.from_terms(enumerate(coeffs))

    # -- basic attributes -------------------------------------------------

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return self.terms[-1][0] if self.terms else -1

    @property
    def exponents(self) -> list[int]:
        return [a for a, _ in self.terms]

    @property
    def coeffs(self) -> list[int]:
        return [c for _, c in self.terms]

    @property
    def height(self) -> int:
        return max((abs(c) for c in self.coeffs), default=0)

    def coeff(self, a: int) -> int:
        for e, c in self.terms:
            if e == a:
                return c
        return 0

    def dense(self) -> list[int]:
        out = [0] * (self.degree + 1)
        for a, c in self.terms:
            out[a] = c
        return out

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        return g

    # -- algebra ----------------------------------------------------------

    def __neg__(self) -> "SparsePoly":
        return SparsePoly(tuple((a, -c) for a, c in self.terms))

    def scale(self, c: int) -> "SparsePoly":
        if c == 0:
            return SparsePoly()
        return SparsePoly(tuple((a, c * b) for a, b in self.terms))

    def divide_content(self, d: int) -> "SparsePoly":
        return SparsePoly(tuple((a, c // d) for a, c in self.terms))

    def shift(self, a1: int) -> "SparsePoly":
        """Multiply by x^a1."""
        return SparsePoly(tuple((a + a1, c) for a, c in self.terms))

    def derivative(self) -> "SparsePoly":
        return SparsePoly(tuple((a - 1, a * c) for a, c in self.terms if a > 0))

    def __call__(self, x):
        """Exact evaluation; only sensible for small degree."""
        return sum(c * x**a for a, c in self.terms)

    def eval_mod(self, x: int, ctx: PadicContext) -> int:
        return eval_mod(self, x, ctx)

    # -- text ---------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for a, c in self.terms:
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if a == 0:
                body = str(mag)
            else:
                mono = "x" if a == 1 else f"x^{a}"
                body = mono if mag == 1 else f"{mag}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> dict:
        return {"terms": [[a, str(c)] for a, c in self.terms]}

    @classmethod
    def from_json(cls, obj) -> "SparsePoly":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls.from_terms((int(a), int(c)) for a, c in obj["terms"])


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<x>[xX])|(?P<op>[-+*^])|(?P<bad>\S))"
)


def parse(text: str) -> SparsePoly:
    """Parse sums of terms like ``c*x^a``, ``c*x``, ``x^a``, ``c``."""
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break  # trailing whitespace
        kind = m.lastgroup
        start = m.start(kind)
        if kind == "bad":
            raise PolySyntaxError(f"unexpected character {m.group(kind)!r}", start)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))

    i = 0

    def peek():
        return tokens[i]

    def take(kind, value=None):
        nonlocal i
        k, v, at = tokens[i]
        if k != kind or (value is not None and v != value):
            what = "end of input" if k == "end" else repr(v)
            raise PolySyntaxError(f"unexpected {what}", at)
        i += 1
        return v

    pairs = []
    if peek()[0] == "end":
        raise PolySyntaxError("empty polynomial", 0)
    first = True
    while peek()[0] != "end":
        sign = 1
        k, v, at = peek()
        if k == "op" and v in "+-":
            take("op")
            sign = -1 if v == "-" else 1
        elif not first:
            raise PolySyntaxError(f"expected '+' or '-', got {v!r}", at)
        first = False
        coeff, exp = 1, 0
        k, v, at = peek()
        if k == "num":
            coeff = int(take("num"))
            if peek()[:2] == ("op", "*"):
                take("op", "*")
                k, v, at = peek()
                if k != "x":
                    raise PolySyntaxError("expected 'x' after '*'", at)
            else:
                pairs.append((0, sign * coeff))
                continue
        elif k != "x":
            raise PolySyntaxError(f"expected a term, got {v or 'end of input'!r}", at)
        take("x")
        exp = 1
        if peek()[:2] == ("op", "^"):
            take("op", "^")
            k, v, at = peek()
            if k == "op" and v == "-":
                raise NegativeExponent(f"negative exponent at position {at}")
            exp = int(take("num"))
        pairs.append((exp, sign * coeff))
    return SparsePoly.from_terms(pairs)


def eval_mod(f: SparsePoly, x: int, ctx: PadicContext) -> int:
    """f(x) mod p^k with one modular power per term."""
    m = ctx.modulus
    return sum(c * pow(x, a, m) for a, c in f.terms) % m


def taylor_coeff(f: SparsePoly, zeta: int, i: int, ctx: PadicContext) -> int:
    """The coefficient of X^i in f(zeta + X), reduced mod p^k."""
    if i < 0 or i > max(f.degree, 0):
        raise IndexOutOfRange(f"Taylor index {i} outside 0..{f.degree}")
    m = ctx.modulus
    total = 0
    for a, c in f.terms:
        if a >= i:
            total += math.comb(a, i) % m * c * pow(zeta, a - i, m)
    return total % m


def taylor_coeffs(f: SparsePoly, zeta: int, count: int, ctx: PadicContext) -> list[int]:
    """Taylor coefficients 0..count-1 of f at zeta (fewer if deg f is smaller)."""
    n = min(count, f.degree + 1)
    return [taylor_coeff(f, zeta, i, ctx) for i in range(n)]


def normalize_x_power(f: SparsePoly) -> tuple[SparsePoly, int]:
    if f.is_zero:
        raise ZeroPolynomial("the zero polynomial has no normal form")
    a1 = f.terms[0][0]
    return f.shift(-a1), a1


def reverse(f: SparsePoly) -> SparsePoly:
    """x^d f(1/x); roots map to their reciprocals."""
    if f.is_zero or f.terms[0][0] != 0:
        raise ConstantTermZero("reversal needs a nonzero constant term")
    d = f.degree
    return SparsePoly(tuple(sorted((d - a, c) for a, c in f.terms)))


@dataclass(frozen=True)
class Rescaled:
    """g(y) = f(p^shift * y) / p^m with coefficients u_i * p^{e_i}.

    Roots y of g map back to roots x = p^shift * y of f.  ``inverted``
    records whether a reversal was applied first (roots x = 1/(p^shift*y)).
    Exponents e_i may be astronomically large, so coefficients are kept
    factored and only expanded modulo p^K.
    """

    p: int
    exponents: tuple[int, ...]
    units: tuple[int, ...]
    pexps: tuple[int, ...]
    shift: int
    inverted: bool = False

    def poly(self) -> SparsePoly:
        return SparsePoly.from_terms(
            (a, u * self.p**e) for a, u, e in zip(self.exponents, self.units, self.pexps)
        )

    def poly_mod(self, K: int) -> SparsePoly:
        m = self.p**K
        return SparsePoly.from_terms(
            (a, (u * pow(self.p, e, m)) % m if e < K else 0)
            for a, u, e in zip(self.exponents, self.units, self.pexps)
        )


def rescale(f: SparsePoly, p: int, v: int) -> Rescaled:
    """Substitute x = p^v y and divide out the p-content."""
    if f.is_zero:
        raise ZeroPolynomial("cannot rescale zero")
    units, vals = [], []
    for a, c in f.terms:
        o = ord_p(c, p)
        units.append(c // p**o)
        vals.append(o + v * a)
    m = min(vals)
    return Rescaled(p, tuple(f.exponents), tuple(units), tuple(x - m for x in vals), v)


def rescale_unit_coeffs(f: SparsePoly, p: int) -> tuple[SparsePoly, Fraction, bool]:
    """Rescale (and if needed invert) a binomial or trinomial so that the
    two lowest coefficients are p-units and the top one is integral.

    Returns ``(g, shift, inverted)``: a root y of g gives the root
    ``p^shift * y`` of f, or of reverse(f) when ``inverted`` is set.
    Raises NonIntegralShift when the needed substitution x -> p^delta x
    has delta outside Z.
    """
    if len(f) not in (2, 3):
        raise ValueError("expected a binomial or trinomial")
    if f.terms[0][0] != 0:
        raise ConstantTermZero("constant term must be nonzero")
    g = _low_pair_rescale(f, p)
    if g is not None:
        return g.poly(), Fraction(g.shift), False
    if len(f) == 3:
        g = _low_pair_rescale(reverse(f), p)
        if g is not None:
            return g.poly(), Fraction(g.shift), True
    (a1, c1), (a2, c2) = f.terms[0], f.terms[1]
    slope = Fraction(ord_p(c1, p) - ord_p(c2, p), a2 - a1)
    raise NonIntegralShift(f"roots of valuation {slope} cannot be made units in Q_p")


def _low_pair_rescale(f: SparsePoly, p: int) -> Rescaled | None:
    (a1, c1), (a2, c2) = f.terms[0], f.terms[1]
    num = ord_p(c1, p) - ord_p(c2, p)
    if num % (a2 - a1):
        return None
    r = rescale(f, p, num // (a2 - a1))
    if r.pexps[0] != 0 or r.pexps[1] != 0:
        return None
    return r
