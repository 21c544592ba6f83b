"""Hensel lifting and approximate-root certificates over Z_p.

A certificate lives in a *frame*: affine coordinates x = center + p^step*y
(optionally applied to the reversed polynomial, so that x is the reciprocal
of that quantity).  The working polynomial F(y) is f in those coordinates
with its p-content removed.  Newton's method on f is conjugate to Newton's
method on F, so quadratic convergence of one is quadratic convergence of
the other; the Hensel inequality, however, is checked for F, where it is
sharp.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .arith import INFINITE, PadicContext, ord_p
from .poly import SparsePoly, rescale, reverse, taylor_coeff

EXACT_EVAL_DEGREE = 4096


class PreconditionViolated(ArithmeticError):
    def __init__(self, ell, ord_f, j):
        super().__init__(f"Hensel precondition fails: ell={ell}, ord f={ord_f}, j={j}")
        self.ell, self.ord_f, self.j = ell, ord_f, j


def digits(z: int, p: int, K: int) -> list[int]:
    """Base-p digits of z mod p^K, least significant first."""
    z %= p**K
    out = []
    for _ in range(K):
        z, r = divmod(z, p)
        out.append(r)
    return out


def from_digits(ds, p: int) -> int:
    return sum(d * p**i for i, d in enumerate(ds))


def _val_mod(f: SparsePoly, z: int, m: int, p: int):
    r = sum(c * pow(z, a, m) for a, c in f.terms) % m
    return (INFINITE if r == 0 else ord_p(r, p)), r


def _reduce(f: SparsePoly, m: int) -> SparsePoly:
    return SparsePoly.from_terms((a, c % m) for a, c in f.terms)


@dataclass(frozen=True)
class Frame:
    """x = center + p^step * y, or x = 1/(center + p^step * y) if reversed."""

    reversed: bool = False
    center: int = 0
    step: int = 0

    def base_poly(self, f: SparsePoly) -> SparsePoly:
        return reverse(f) if self.reversed else f

    def working_poly(self, f: SparsePoly, p: int, K: int) -> SparsePoly:
        """F(y) mod p^K, content-free."""
        g = self.base_poly(f)
        if self.center == 0:
            return rescale(g, p, self.step).poly_mod(K)
        if self.step < 1:
            raise ValueError("a shifted frame needs step >= 1")
        # F(y) = sum_m T_m(center) p^(step*m) y^m / p^S; widen the window
        # until the content S is pinned down with K digits to spare.
        W = K + 8
        while True:
            m_top = min(g.degree, W // self.step)
            ctx = PadicContext(p, W)
            scaled = [
                taylor_coeff(g, self.center, m, ctx) * p ** (self.step * m) % ctx.modulus
                for m in range(m_top + 1)
            ]
            S = min((ord_p(c, p) for c in scaled if c), default=INFINITE)
            if S != INFINITE and S + K <= W:
                mod = p**K
                return SparsePoly.from_dense([(c // p**S) % mod for c in scaled])
            W *= 2

    def to_x(self, y, p: int) -> Fraction:
        w = self.center + Fraction(y) * Fraction(p) ** self.step
        return 1 / w if self.reversed else w

    def to_y(self, x, p: int) -> Fraction:
        w = 1 / Fraction(x) if self.reversed else Fraction(x)
        return (w - self.center) / Fraction(p) ** self.step

    def to_json(self) -> dict:
        return {"reversed": self.reversed, "center": str(self.center), "step": self.step}


@dataclass
class ApproxRoot:
    """z0 = numerator/denominator approximating a root of f in Q_p.

    The certificate (ell, j) states F(y0) = 0 mod p^(2*ell + j) with
    ell = ord_p F'(y0), for the working polynomial F of ``frame``.  Double
    roots instead carry the binomial of which they are a simple root, in
    ``certificate_poly``; the frame then applies to that binomial.
    """

    numerator: int
    denominator: int
    valuation: int
    prefix_digits: list[int]
    ell: int
    certified_modulus_exponent: int
    p: int
    seed: int
    frame: Frame = Frame()
    kind: str = "hensel"
    multiplicity: int = 1
    certificate_poly: SparsePoly | None = None

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    @property
    def j(self) -> int:
        return self.certified_modulus_exponent

    def working_poly(self, f: SparsePoly, K: int) -> SparsePoly:
        base = f if self.certificate_poly is None else self.certificate_poly
        return self.frame.working_poly(base, self.p, K)

    def to_json(self) -> dict:
        return {
            "numerator": str(self.numerator),
            "denominator": str(self.denominator),
            "valuation": self.valuation,
            "prefix_digits": self.prefix_digits,
            "ell": self.ell,
            "j": self.j,
            "kind": self.kind,
            "multiplicity": self.multiplicity,
            "frame": self.frame.to_json(),
            "seed": str(self.seed),
        }


@dataclass
class Rejection:
    ord_f: float
    ord_fprime: float
    reason: str

    def __bool__(self) -> bool:
        return False


def hensel_step(f: SparsePoly, z: int, ctx: PadicContext) -> int:
    """One Newton step z - (f(z)/p^ell)/(f'(z)/p^ell) in Z/p^K."""
    p, m = ctx.p, ctx.modulus
    ell, dv = _val_mod(f.derivative(), z, m, p)
    vf, fv = _val_mod(f, z, m, p)
    if ell == INFINITE:
        raise PreconditionViolated(ell, vf, None)
    j = vf - 2 * ell
    if j < 1:
        raise PreconditionViolated(ell, vf, j)
    if vf == INFINITE:
        return z % m
    pl = p**ell
    return (z - (fv // pl) * pow(dv // pl, -1, m)) % m


def newton_trace(F: SparsePoly, y: int, p: int, ell: int, j: int, steps: int = 4) -> list:
    """ord_p F(y_i) for the Newton iterates y_0 = y, ..., y_steps, measured
    in a window wide enough to witness 2*ell + j*2^i."""
    K = 3 * ell + j * 2**steps + 2
    ctx = PadicContext(p, K)
    F = _reduce(F, ctx.modulus)
    out = []
    for i in range(steps + 1):
        out.append(_val_mod(F, y, ctx.modulus, p)[0])
        if i < steps:
            y = hensel_step(F, y, ctx)
    return out


def quadratic_convergence_ok(trace, ell: int, j: int) -> bool:
    return all(v >= 2 * ell + j * 2**i for i, v in enumerate(trace))


def root_trace(f: SparsePoly, root: ApproxRoot, steps: int = 4) -> list:
    """Newton trace of an emitted root in its own frame."""
    K = 3 * root.ell + root.j * 2**steps + 2
    return newton_trace(root.working_poly(f, K), root.seed, root.p, root.ell, root.j, steps)


def lift_seed(F: SparsePoly, y: int, p: int, ell: int, N: int) -> int:
    """Newton-lift y until it agrees with the true root of F mod p^N."""
    ctx = PadicContext(p, N + 2 * ell + 1)
    F = _reduce(F, ctx.modulus)
    # the root agrees with y mod p^(ord F(y) - ell)
    while True:
        v, _ = _val_mod(F, y, ctx.modulus, p)
        if v >= N + ell:
            return y % p**N
        y = hensel_step(F, y, ctx)


def lift_to_precision(f: SparsePoly, seed: ApproxRoot, K: int) -> list[int]:
    """Base-p digits (least significant first) of the certified root mod
    p^K; a root of negative valuation v is reported as x * p^(-v)."""
    p, fr = seed.p, seed.frame
    u = max(0, -seed.valuation) if seed.valuation != INFINITE else 0
    N = K + u + abs(fr.step) + 2
    F = seed.working_poly(f, N + 2 * seed.ell + 1)
    y = lift_seed(F, seed.seed, p, seed.ell, N)
    x = fr.to_x(y, p) * Fraction(p) ** u
    m = p**K
    return digits(x.numerator * pow(x.denominator, -1, m), p, K)


def certify_approximate_root(
    f: SparsePoly,
    z0,
    ctx: PadicContext,
    prefix_digits=None,
    valuation=None,
    frame: Frame | None = None,
):
    """Check the Hensel precondition at z0 and return an ApproxRoot, or a
    Rejection carrying the measured valuations.

    Without an explicit frame, z0 of valuation v < 0 is examined in the
    coordinates x = p^v y, and z0 in Z_p directly.  Valuations are exact
    for moderate degree and measured within ctx.k digits otherwise.
    """
    p = ctx.p
    z0 = Fraction(z0)
    v0 = ord_p(z0, p) if z0 != 0 else INFINITE
    if frame is None:
        frame = Frame(step=v0) if v0 != INFINITE and v0 < 0 else Frame()
    y0 = frame.to_y(z0, p)
    ell, vf = _measure(f, frame, y0, ctx)
    if ell == INFINITE:
        return Rejection(vf, ell, "derivative vanishes at z0")
    if vf < 2 * ell + 1:
        return Rejection(vf, ell, "ord f(z0) < 2*ord f'(z0) + 1")
    j = ctx.k - 2 * ell if vf == INFINITE else vf - 2 * ell
    seed = y0.numerator * pow(y0.denominator, -1, p ** max(ctx.k, ell + 1))
    if prefix_digits is None:
        prefix_digits = digits(seed, p, ell + 1)
    return ApproxRoot(
        numerator=z0.numerator,
        denominator=z0.denominator,
        valuation=v0 if valuation is None else valuation,
        prefix_digits=list(prefix_digits),
        ell=ell,
        certified_modulus_exponent=max(j, 1),
        p=p,
        seed=seed,
        frame=frame,
    )


def _measure(f: SparsePoly, frame: Frame, y0: Fraction, ctx: PadicContext):
    """(ord F'(y0), ord F(y0)) for the frame's working polynomial F."""
    p = ctx.p
    if ord_p(y0, p) < 0:
        return INFINITE, -INFINITE
    if frame.center == 0 and frame.base_poly(f).degree <= EXACT_EVAL_DEGREE:
        F = rescale(frame.base_poly(f), p, frame.step).poly()
        gv, dv = F(y0), F.derivative()(y0)
        return (INFINITE if dv == 0 else ord_p(dv, p)), (INFINITE if gv == 0 else ord_p(gv, p))
    m = ctx.modulus
    F = frame.working_poly(f, p, ctx.k)
    y = y0.numerator * pow(y0.denominator, -1, m) % m
    ell, _ = _val_mod(F.derivative(), y, m, p)
    vf, _ = _val_mod(F, y, m, p)
    return (INFINITE if ell >= ctx.k else ell), vf
