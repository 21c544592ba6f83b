"""Brute-force ground truth for small instances.

Root counts here avoid the nodal tree entirely: the polynomial is replaced
by its square-free part g over Q, the residues x mod p^K with g(x) = 0 are
enumerated digit by digit, and each residue satisfying the Hensel
inequality marks one root.  With D = ord_p Res(g, g') every root z of g in
Z_p has ord_p g'(z) <= D (Res is a Z[x]-combination of g and g'), so
K = 2D + 1 digits suffice to see them all.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .arith import INFINITE, PadicContext, ord_p
from .poly import SparsePoly, eval_mod, normalize_x_power, reverse
from .resultant import (
    DENSE_DEGREE_CAP,
    binomial_resultant_valuation,
    resultant_valuation,
    squarefree_part,
)

DEFAULT_BUDGET = 10**7
BUDGET_ENV = "SPARSEPADIC_ORACLE_BUDGET"

EXHAUSTIVE_LIFT = "EXHAUSTIVE_LIFT"
RESULTANT_CERTIFIED = "RESULTANT_CERTIFIED"


class BudgetExceeded(RuntimeError):
    pass


def _budget(budget: int | None) -> int:
    if budget is not None:
        return budget
    return int(os.environ.get(BUDGET_ENV, DEFAULT_BUDGET))


@dataclass
class OracleCount:
    p: int
    k_used: int
    roots_mod_pk: list[int]
    qp_root_count: int
    method: str = RESULTANT_CERTIFIED
    # (residue, ell, reversed): a root of g (or, if reversed, of its
    # reversal) determined modulo p^(ell+1) by the residue
    roots: list[tuple[int, int, bool]] = field(default_factory=list)


def exhaustive_roots_mod(f: SparsePoly, ctx: PadicContext, budget: int | None = None) -> list[int]:
    """All x in Z/p^k with f(x) = 0 mod p^k, by evaluating every residue."""
    budget = _budget(budget)
    if ctx.modulus > budget:
        raise BudgetExceeded(f"p^k = {ctx.modulus} exceeds the budget {budget}")
    return [x for x in range(ctx.modulus) if eval_mod(f, x, ctx) == 0]


def lifted_roots_mod(f: SparsePoly, p: int, k: int, budget: int | None = None) -> list[int]:
    """The same set as exhaustive_roots_mod, grown one digit at a time
    (a root mod p^(i+1) reduces to a root mod p^i)."""
    budget = _budget(budget)
    level, work = [0], 0
    for i in range(k):
        m = p ** (i + 1)
        nxt = []
        for x in level:
            for t in range(p):
                y = x + t * p**i
                work += 1
                if sum(c * pow(y, a, m) for a, c in f.terms) % m == 0:
                    nxt.append(y)
        if work > budget:
            raise BudgetExceeded(f"more than {budget} evaluations")
        level = nxt
    return sorted(level)


def _p_primitive(f: SparsePoly, p: int) -> SparsePoly:
    e = min(ord_p(c, p) for c in f.coeffs)
    return f.divide_content(p**e) if e else f


def _zp_roots(g: SparsePoly, p: int, budget: int, unit_first_digit_zero: bool = False):
    """Roots of the square-free g in Z_p, as (residue, ell) with the residue
    determining the root modulo p^(ell+1).  Restrict to pZ_p if asked."""
    g = _p_primitive(g, p)
    D = binomial_resultant_valuation(g, p) if len(g) == 2 else resultant_valuation(g, p)
    K = 2 * D + 1
    dg = g.derivative()
    found: dict[tuple[int, int], int] = {}
    level, work = ([0] if unit_first_digit_zero else list(range(p))), 0
    i = 1
    while level and i <= K:
        m = p**i
        keep = []
        for x in level:
            work += 1
            if sum(c * pow(x, a, m) for a, c in g.terms) % m:
                continue
            dv = sum(c * pow(x, a, m) for a, c in dg.terms) % m
            ell = INFINITE if dv == 0 else ord_p(dv, p)
            if ell != INFINITE and i >= 2 * ell + 1:
                # Hensel: a unique root in x + p^(ell+1) Z_p
                key = (x % p ** (ell + 1), ell)
                found.setdefault(key, x)
                continue
            keep.append(x)
        if work > budget:
            raise BudgetExceeded(f"more than {budget} evaluations")
        if i == K:
            break
        level = [x + t * m for x in keep for t in range(p)]
        i += 1
    return sorted(found), K


def count_qp_roots_oracle(f: SparsePoly, p: int, budget: int | None = None) -> OracleCount:
    """Number of distinct roots of f in Q_p, by enumeration."""
    budget = _budget(budget)
    g0, a1 = normalize_x_power(f)
    zero = 1 if a1 > 0 else 0
    if g0.degree == 0:
        return OracleCount(p, 0, [], zero)
    if len(g0) == 2:
        g = g0  # binomials with nonzero constant term are square-free
    elif g0.degree > DENSE_DEGREE_CAP:
        raise BudgetExceeded("degree beyond the dense cap")
    else:
        g = squarefree_part(g0)
    if g.degree == 0:
        return OracleCount(p, 0, [], zero)
    inside, k1 = _zp_roots(g, p, budget)
    # roots of negative valuation are reciprocals of roots of the reversal in pZ_p
    outside, k2 = _zp_roots(reverse(g), p, budget, unit_first_digit_zero=True)
    roots = [(r, e, False) for r, e in inside] + [(r, e, True) for r, e in outside]
    return OracleCount(
        p,
        max(k1, k2),
        sorted(r for r, _ in inside),
        len(inside) + len(outside) + zero,
        roots=roots,
    )
