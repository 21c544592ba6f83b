"""Exact resultants and square-free parts over Z (dense, via sympy)."""

from __future__ import annotations

from sympy import Poly, ZZ
from sympy.abc import x as _x

from .arith import ord_p
from .poly import SparsePoly

DENSE_DEGREE_CAP = 2000


class DegreeTooLarge(ValueError):
    pass


class NotSquareFree(ValueError):
    pass


def _to_sympy(f: SparsePoly, cap: int) -> Poly:
    if f.degree > cap:
        raise DegreeTooLarge(f"degree {f.degree} exceeds the dense cap {cap}")
    return Poly.from_list(list(reversed(f.dense())), _x, domain=ZZ)


def _from_sympy(g: Poly) -> SparsePoly:
    return SparsePoly.from_dense([int(c) for c in reversed(g.all_coeffs())])


def discriminant_resultant(f: SparsePoly, cap: int = DENSE_DEGREE_CAP) -> int:
    """Res(f, f') as an exact integer (zero iff f has a repeated factor)."""
    F = _to_sympy(f, cap)
    return int(F.resultant(F.diff(_x)))


def resultant_valuation(f: SparsePoly, p: int, cap: int = DENSE_DEGREE_CAP) -> int:
    """ord_p Res(f, f'); bounds ord_p f'(z) at every root z of f in Z_p."""
    r = discriminant_resultant(f, cap)
    if r == 0:
        raise NotSquareFree("f has a repeated factor over Q")
    return ord_p(r, p)


def squarefree_part(f: SparsePoly, cap: int = DENSE_DEGREE_CAP) -> SparsePoly:
    """Primitive square-free part f / gcd(f, f'), sign normalized to match f."""
    F = _to_sympy(f, cap)
    g = F.quo(F.gcd(F.diff(_x))) if F.degree() > 0 else F
    g = g.primitive()[1]
    if (g.LC() > 0) != (F.LC() > 0):
        g = -g
    return _from_sympy(g)


def repeated_part(f: SparsePoly, cap: int = DENSE_DEGREE_CAP) -> SparsePoly:
    """gcd(f, f') with positive leading coefficient."""
    F = _to_sympy(f, cap)
    return _from_sympy(F.gcd(F.diff(_x)))


def binomial_resultant_valuation(f: SparsePoly, p: int) -> int:
    """ord_p Res(f, f') for f = c1 + c2*x^d, from |Res| = d^d |c1|^(d-1) |c2|^d.

    Such f (with c1 != 0) is always square-free, and the closed form avoids
    building a dense Sylvester matrix for every binomial of a large corpus.
    """
    if len(f) != 2 or f.terms[0][0] != 0:
        raise ValueError("expected c1 + c2*x^d with c1 != 0")
    (_, c1), (d, c2) = f.terms
    return d * ord_p(d, p) + (d - 1) * ord_p(c1, p) + d * ord_p(c2, p)
