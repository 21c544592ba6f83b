"""Integer and Z/p^k arithmetic.

Besides valuations and modular inverses this holds Bezout pairs and a
two-dimensional lattice reducer used for exponent shortening."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

INFINITE = math.inf

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
# Miller-Rabin with the first 13 prime bases is deterministic below this.
_MR_LIMIT = 3317044064679887385961981


class ArithmeticError_(ArithmeticError):
    pass


class NotAUnit(ArithmeticError_):
    pass


class BothZero(ArithmeticError_):
    pass


class DegenerateLattice(ArithmeticError_):
    pass


class EvenPrime(ValueError):
    """p = 2 is not supported."""


class NotPrime(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    if n >= _MR_LIMIT:
        raise ValueError(f"{n} is too large for deterministic primality testing")
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def check_odd_prime(p: int) -> int:
    if p == 2:
        raise EvenPrime("p = 2 is not supported; use an odd prime")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    return p


def ord_p(n, p: int):
    """Exponent of p in the integer (or Fraction) n; INFINITE for zero."""
    if n == 0:
        return INFINITE
    if not isinstance(n, int):
        return ord_p(n.numerator, p) - ord_p(n.denominator, p)
    n = abs(n)
    v = 0
    # strip large powers first so huge valuations stay cheap
    step, pk = 1, p
    while n % pk == 0:
        n //= pk
        v += step
        step *= 2
        pk *= pk
    while n % p == 0:
        n //= p
        v += 1
    return v


def unit_part(n: int, p: int) -> tuple[int, int]:
    """Return (u, v) with n = u * p**v and p not dividing u."""
    v = ord_p(n, p)
    return n // p**v, v


@dataclass(frozen=True)
class PadicContext:
    """An odd prime p together with the working precision k."""

    p: int
    k: int
    modulus: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        check_odd_prime(self.p)
        if self.k < 1:
            raise ValueError("precision k must be at least 1")
        object.__setattr__(self, "modulus", self.p**self.k)

    def reduce(self, a: int) -> int:
        return a % self.modulus

    def with_precision(self, k: int) -> "PadicContext":
        return PadicContext(self.p, k)


def mod_pow(base: int, exp: int, ctx: PadicContext) -> int:
    if exp < 0:
        raise ValueError("negative exponent")
    return pow(base, exp, ctx.modulus)


def mod_inverse(a: int, ctx: PadicContext) -> int:
    if a % ctx.p == 0:
        raise NotAUnit(f"{a} is divisible by {ctx.p}")
    return pow(a, -1, ctx.modulus)


def extended_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, R, S) with R*a + S*b = g = gcd(a, b) > 0.

    The pair is the one produced by the Euclidean algorithm, which
    satisfies |R| <= |b|/g and |S| <= |a|/g.
    """
    if a == 0 and b == 0:
        raise BothZero("gcd(0, 0) is undefined")
    r0, r1 = a, b
    s0, s1 = 1, 0
    t0, t1 = 0, 1
    while r1 != 0:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0 < 0:
        r0, s0, t0 = -r0, -s0, -t0
    # Euclid already returns a minimal pair except in the unit corner cases
    g = r0
    if b != 0 and abs(s0) > abs(b) // g:
        k = s0 // (b // g)
        s0 -= k * (b // g)
        t0 += k * (a // g)
    return g, s0, t0


def primitive_root(p: int) -> int:
    """Smallest positive generator of the multiplicative group mod p."""
    n = p - 1
    factors = []
    m, q = n, 2
    while q * q <= m:
        if m % q == 0:
            factors.append(q)
            while m % q == 0:
                m //= q
        q += 1
    if m > 1:
        factors.append(m)
    for g in range(1, p):
        if all(pow(g, n // q, p) != 1 for q in factors):
            return g
    raise NotPrime(f"{p} has no primitive root")


def teichmuller(a: int, ctx: PadicContext) -> int:
    """The (p-1)-th root of unity congruent to the unit a mod p, mod p^k."""
    if a % ctx.p == 0:
        raise NotAUnit(a)
    return pow(a, ctx.p ** (ctx.k - 1), ctx.modulus)


def lagrange_gauss_reduce(a2: int, a3: int, modulus: int) -> tuple[int, int, int]:
    """Find e and short (m2, m3) with e*a_i = m_i mod modulus.

    Works on the lattice of all (x, y) congruent to e*(a2, a3) for some e,
    carrying e alongside each basis vector, and returns its shortest
    nonzero vector as found by Lagrange-Gauss reduction.
    """
    n = modulus
    if n < 1:
        raise ValueError("modulus must be positive")
    if a2 % n == 0 and a3 % n == 0:
        raise DegenerateLattice("both exponents vanish modulo the group order")
    # Hermite basis: rows (x, y, e); third coordinate is the multiplier.
    g, r, _ = extended_gcd(a2 % n or n, n)
    # (g, r*a3, r) is congruent to r*(a2, a3) since r*a2 = g mod n
    b1 = [g, (r * a3) % n, r % n]
    # vectors with x = 0: e*a2 = 0 mod n  <=>  e multiple of n/g
    e0 = n // g
    h, s, _ = extended_gcd((e0 * a3) % n or n, n)
    b2 = [0, h, (s * e0) % n]
    # reduce b1's y against b2
    q = b1[1] // b2[1]
    b1 = [b1[0], b1[1] - q * b2[1], (b1[2] - q * b2[2]) % n]

    def norm2(v):
        return v[0] * v[0] + v[1] * v[1]

    u, v = b1, b2
    if norm2(u) > norm2(v):
        u, v = v, u
    while True:
        num = u[0] * v[0] + u[1] * v[1]
        den = norm2(u)
        mu = (2 * num + den) // (2 * den)
        v = [v[0] - mu * u[0], v[1] - mu * u[1], (v[2] - mu * u[2]) % n]
        if norm2(v) >= norm2(u):
            break
        u, v = v, u
    return u[2] % n, u[0], u[1]
