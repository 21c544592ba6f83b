"""Counting and solving binomials and trinomials over Q_p."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2

from .arith import (
    PadicContext,
    check_odd_prime,
    extended_gcd,
    ord_p,
    primitive_root,
    teichmuller,
)
from .hensel import ApproxRoot, Frame, certify_approximate_root, lift_seed, lift_to_precision
from .polygon import has_integral_valuation_candidates, lower_hull
from .poly import SparsePoly, normalize_x_power, reverse
from .tree import NodalTree, build_tree

EXACT_RESULTANT = "EXACT_RESULTANT"
ADAPTIVE_DOUBLING = "ADAPTIVE_DOUBLING"
YU_FORMULA = "YU_FORMULA"
AUTO = "AUTO"

CERT_WINDOW = 16


class NoRoots(ValueError):
    """The polynomial has no roots in Q_p (an exact conclusion)."""


class Unsupported(ValueError):
    pass


class PrecisionNotCertified(ArithmeticError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class PrecisionPolicy:
    kind: str = AUTO
    initial_k: int | None = None
    k_max: int = 4096
    dense_cap: int = 2000

    def resolve(self, degree: int) -> str:
        if self.kind == AUTO:
            return EXACT_RESULTANT if degree <= self.dense_cap else ADAPTIVE_DOUBLING
        if self.kind == EXACT_RESULTANT and degree > self.dense_cap:
            raise Unsupported(f"degree {degree} exceeds the dense cap {self.dense_cap}")
        return self.kind


@dataclass
class SolveReport:
    p: int
    root_count: int
    roots: list[ApproxRoot]
    zero_root_multiplicity: int = 0
    policy: str = ""
    k: int | None = None
    certified: bool = True
    diagnostics: dict = field(default_factory=dict)

    @property
    def degenerate_roots(self) -> list[ApproxRoot]:
        return [r for r in self.roots if r.kind == "degenerate"]

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "m": self.root_count,
            "zero_root_multiplicity": self.zero_root_multiplicity,
            "roots": [r.to_json() for r in self.roots],
            "policy": self.policy,
            "k": self.k,
            "certified": self.certified,
            "diagnostics": self.diagnostics,
        }


def _sort_roots(roots: list[ApproxRoot]) -> list[ApproxRoot]:
    return sorted(roots, key=lambda r: (r.valuation, r.prefix_digits))


# -- binomials ---------------------------------------------------------------


def _binomial_parts(f: SparsePoly, p: int):
    if len(f) != 2 or f.terms[0][0] != 0:
        raise ValueError("expected c1 + c2*x^d with c1 != 0")
    (_, c1), (d, c2) = f.terms
    o1, o2 = ord_p(c1, p), ord_p(c2, p)
    return c1, c2, d, o1, o2


def count_binomial_roots(f: SparsePoly, p: int) -> int:
    """0 or gcd(d, p-1): the number of roots of c1 + c2*x^d in Q_p."""
    check_odd_prime(p)
    f, _ = normalize_x_power(f)
    c1, c2, d, o1, o2 = _binomial_parts(f, p)
    if (o1 - o2) % d:
        return 0
    ell = ord_p(d, p)
    gamma = math.gcd(d, p - 1)
    m = p ** (2 * ell + 1)
    a = -(c1 // p**o1) * pow(c2 // p**o2, -1, m)
    return gamma if pow(a, p**ell * (p - 1) // gamma, m) == 1 else 0


def _binomial_unit_roots(u1: int, u2: int, d: int, p: int) -> list[int]:
    """Roots of u1 + u2*y^d in Z_p (units u_i) modulo p^(2*ell+1), each with
    u1 + u2*y^d = 0 mod p^(2*ell+1); empty when there are none."""
    ell = ord_p(d, p)
    gamma = math.gcd(d, p - 1)
    M = 2 * ell + 1
    m = p**M
    a = -u1 * pow(u2, -1, m) % m
    if pow(a, p**ell * (p - 1) // gamma, m) != 1:
        return []
    # reduce to y'^gamma = c over F_p, whose roots are the roots of y^d = a
    r = pow(d // gamma, -1, (p - 1) // gamma) if (p - 1) // gamma > 1 else 0
    c = pow(a, r, p)
    x1 = next(x for x in range(1, p) if pow(x, gamma, p) == c)
    g = primitive_root(p)
    w = pow(g, (p - 1) // gamma, p)
    xs = [x1 * pow(w, i, p) % p for i in range(gamma)]
    if ell == 0:
        return xs
    # Teichmuller lifts give u1 + u2*y^d = 0 mod p^(ell+1); the Newton
    # correction is then repeated until the Hensel inequality holds.
    ctx = PadicContext(p, M)
    out = []
    for x in xs:
        y = teichmuller(x, ctx)
        while True:
            val = (u1 + u2 * pow(y, d, m)) % m
            if val == 0 or ord_p(val, p) >= M:
                break
            deriv = d * u2 * pow(y, d - 1, m) % m
            pl = p**ell
            y = (y - (val // pl) * pow(deriv // pl, -1, m)) % m
        out.append(y)
    return out


def _binomial_roots(f: SparsePoly, p: int) -> tuple[list[ApproxRoot], int]:
    """Certified roots of the binomial c1 + c2*x^d (constant term nonzero)."""
    c1, c2, d, o1, o2 = _binomial_parts(f, p)
    if (o1 - o2) % d:
        raise NoRoots("root valuations are not integral")
    v = (o1 - o2) // d
    ell = ord_p(d, p)
    ys = _binomial_unit_roots(c1 // p**o1, c2 // p**o2, d, p)
    if not ys:
        raise NoRoots("no d-th root of the unit ratio in Z_p")
    ctx = PadicContext(p, 2 * ell + CERT_WINDOW)
    frame = Frame(step=v)
    roots = []
    for y in ys:
        z0 = Fraction(y) * Fraction(p) ** v
        root = certify_approximate_root(
            f, z0, ctx, prefix_digits=_digits(y, p, ell + 1), valuation=v, frame=frame
        )
        if not root:
            raise AssertionError(f"binomial root {z0} failed certification: {root}")
        roots.append(root)
    return _sort_roots(roots), ell


def _digits(z: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        z, r = divmod(z, p)
        out.append(r)
    return out


def solve_binomial(f: SparsePoly, p: int) -> SolveReport:
    """All roots of a binomial in Q_p, as certified approximate roots."""
    check_odd_prime(p)
    g, a1 = normalize_x_power(f)
    roots, ell = _binomial_roots(g, p)
    diag = {"polygon": [e.to_json() for e in lower_hull(g, p)], "ell": ell}
    return SolveReport(
        p, len(roots) + (a1 > 0), roots, a1, policy="BINOMIAL", k=2 * ell + 1, diagnostics=diag
    )


# -- trinomials --------------------------------------------------------------


def _is_power(C: Fraction, n: int, A: Fraction) -> bool:
    """Exact test C^n == A that refuses to build astronomically large powers."""
    if C in (1, -1):
        return A == C**n
    if A in (0, 1, -1):
        return False
    size = max(abs(C.numerator), C.denominator).bit_length() - 1
    if size * n > max(abs(A.numerator), A.denominator).bit_length() + 1:
        return False
    return C**n == A


def _rational_root(A: Fraction, n: int) -> Fraction | None:
    """The real n-th root of A when it is rational (sign follows A for odd n)."""
    if A < 0 and n % 2 == 0:
        return None
    num, ok1 = gmpy2.iroot(abs(A.numerator), n)
    den, ok2 = gmpy2.iroot(A.denominator, n)
    if not (ok1 and ok2):
        return None
    return Fraction(int(num) * (-1 if A < 0 else 1), int(den))


def degenerate_binomial(f: SparsePoly) -> SparsePoly | None:
    """A binomial whose roots are exactly the double roots of the trinomial f
    (nonzero ones, over an algebraic closure), or None when there are none.

    A double root z satisfies z^a2 = A and z^(a3-a2) = B; with
    R*a2 + S*(a3-a2) = g, also z^g = A^R * B^S =: C, so C is rational and
    C^(a2/g) = A.  C is recovered as an exact rational root of A (rather
    than by forming A^R * B^S, whose size grows with the exponents), then
    checked against both conditions.
    """
    f, _ = normalize_x_power(f)
    (_, c1), (a2, c2), (a3, c3) = f.terms
    A = Fraction(-a3 * c1, (a3 - a2) * c2)  # z^a2
    B = Fraction(-a2 * c2, a3 * c3)  # z^(a3 - a2)
    g = extended_gcd(a2, a3 - a2)[0]
    n2, n3 = a2 // g, (a3 - a2) // g
    candidates = {_rational_root(A, n2)}
    if n2 % 2 == 0:
        r = _rational_root(A, n2)
        if r is not None:
            candidates.add(-r)
    for C in candidates:
        if C is not None and _is_power(C, n2, A) and _is_power(C, n3, B):
            return SparsePoly.from_terms([(0, -C.numerator), (g, C.denominator)])
    return None


def degenerate_roots_trinomial(f: SparsePoly, p: int) -> list[ApproxRoot]:
    """Double roots of a trinomial in Q_p, certified through the binomial
    they are simple roots of."""
    check_odd_prime(p)
    b = degenerate_binomial(f)
    if b is None:
        return []
    try:
        roots, _ = _binomial_roots(b, p)
    except NoRoots:
        return []
    for r in roots:
        r.kind = "degenerate"
        r.multiplicity = 2
        r.certificate_poly = b
    return roots


def _p_primitive(f: SparsePoly, p: int) -> SparsePoly:
    e = min(ord_p(c, p) for c in f.coeffs)
    return f.divide_content(p**e) if e else f


def _known_residues(roots: list[ApproxRoot], reversed_: bool, p: int, K: int) -> list[int]:
    """Double roots as residues mod p^K in the coordinates of one tree."""
    out = []
    for r in roots:
        if (r.valuation < 0) != reversed_:
            continue
        ds = lift_to_precision(r.certificate_poly, r, K)
        unit = sum(d * p**i for i, d in enumerate(ds))
        m = p**K
        if reversed_:
            # x = unit / p^u, so 1/x = p^u / unit
            out.append(p ** (-r.valuation) * pow(unit, -1, m) % m)
        else:
            out.append(unit % m)
    return out


def _trees(f: SparsePoly, p: int, k: int, known: list[ApproxRoot], parts) -> list[tuple[bool, NodalTree]]:
    out = []
    for reversed_ in parts:
        g = _p_primitive(reverse(f) if reversed_ else f, p)
        ctx = PadicContext(p, k)
        tree = build_tree(
            g,
            ctx,
            root_digits=[0] if reversed_ else None,
            known_degenerate=_known_residues(known, reversed_, p, k + 1),
        )
        out.append((reversed_, tree))
    return out


def _resultant_k(f: SparsePoly, p: int, parts, cap: int) -> int:
    from .resultant import resultant_valuation, squarefree_part

    D = 0
    for reversed_ in parts:
        g = squarefree_part(reverse(f) if reversed_ else f, cap)
        if g.degree >= 1:
            D = max(D, resultant_valuation(_p_primitive(g, p), p, cap))
    return 2 * D + 1


def _tree_roots(f: SparsePoly, p: int, trees) -> list[ApproxRoot]:
    roots = []
    ctx = PadicContext(p, CERT_WINDOW)
    for reversed_, tree in trees:
        for node in tree.nodes():
            if node.degenerate_leaf:
                continue
            frame = Frame(reversed=reversed_, center=node.center, step=node.depth)
            for z in node.nondegenerate_digits:
                v, y = _root_valuation(f, frame, z, p)
                z0 = frame.to_x(y, p)
                root = certify_approximate_root(
                    f, z0, ctx, prefix_digits=list(node.prefix) + [z], valuation=v, frame=frame
                )
                if not root:
                    raise AssertionError(f"tree root {z0} failed certification: {root}")
                roots.append(root)
    return roots


def _root_valuation(f: SparsePoly, frame: Frame, y: int, p: int) -> tuple[int, int]:
    """Valuation of the root of f in the disk of a simple nodal root, and a
    frame coordinate y for it whose image w = center + p^step*y is nonzero
    (so that a reversed frame maps it to a finite x)."""
    w, N, yN = frame.center + p**frame.step * y, 1, y
    # the root agrees with w mod p^(step + N); refine until that is nonzero
    while w % p ** (frame.step + N) == 0:
        N *= 2
        yN = lift_seed(frame.working_poly(f, p, N + 2), y, p, 0, N)
        w = frame.center + p**frame.step * yN
    v = ord_p(w % p ** (frame.step + N), p)
    return (-v if frame.reversed else v), yN


def solve_trinomial(f: SparsePoly, p: int, policy: PrecisionPolicy = PrecisionPolicy()) -> SolveReport:
    """All roots of a trinomial with nonzero constant term in Q_p."""
    check_odd_prime(p)
    if len(f) != 3 or f.terms[0][0] != 0:
        raise ValueError("expected c1 + c2*x^a2 + c3*x^a3 with c1 != 0")
    ok, vals = has_integral_valuation_candidates(f, p)
    diag = {"polygon": [e.to_json() for e in lower_hull(f, p)], "integral_valuations": vals}
    if not ok:
        raise NoRoots("no root valuation is an integer")
    parts = [r for r, present in ((False, any(v >= 0 for v in vals)), (True, any(v < 0 for v in vals))) if present]
    degenerate = degenerate_roots_trinomial(f, p)
    kind = policy.resolve(f.degree)
    a2, a3 = f.terms[1][0], f.terms[2][0]
    if kind == EXACT_RESULTANT:
        k = policy.initial_k or _resultant_k(f, p, parts, policy.dense_cap)
    elif kind == YU_FORMULA:
        from .bounds import trinomial_separation_bound

        k = trinomial_separation_bound(f, p).k_required
        if k > policy.k_max:
            raise PrecisionNotCertified(f"separation-bound precision k={k} exceeds k_max={policy.k_max}")
    else:
        k = policy.initial_k or 2 * ord_p(a2 * a3 * (a3 - a2), p) + 8
    k_first, history = k, []
    while True:
        trees = _trees(f, p, k, degenerate, parts)
        complete = all(t.complete for _, t in trees)
        count = sum(len(t.nondegenerate_prefixes()) for _, t in trees)
        history.append({"k": k, "complete": complete, "simple_roots": count})
        stable = complete and (
            kind != ADAPTIVE_DOUBLING or (len(history) >= 2 and history[-2]["complete"]
                                          and history[-2]["simple_roots"] == count)
        )
        if stable:
            break
        if 2 * k > policy.k_max:
            report = _assemble(f, p, trees, degenerate, kind, k, diag, history, certified=False)
            raise PrecisionNotCertified(f"tree still truncated at k={k}", report)
        k *= 2
    diag["resultant_k_sufficient"] = k == k_first if kind == EXACT_RESULTANT else None
    return _assemble(f, p, trees, degenerate, kind, k, diag, history, certified=True)


def _assemble(f, p, trees, degenerate, kind, k, diag, history, certified) -> SolveReport:
    roots = _tree_roots(f, p, trees) + degenerate
    diag = dict(diag)
    diag["precision_history"] = history
    diag["trees"] = [
        {"reversed": r, "depth": t.depth, "nodes": len(t.nodes()), "complete": t.complete}
        for r, t in trees
    ]
    return SolveReport(
        p, len(roots), _sort_roots(roots), 0, policy=kind, k=k, certified=certified, diagnostics=diag
    )


# -- dispatch ------------------------------------------------------------------


def solve(f: SparsePoly, p: int, policy: PrecisionPolicy = PrecisionPolicy()) -> SolveReport:
    """Solve a sparse polynomial with at most three terms over Q_p."""
    check_odd_prime(p)
    g, a1 = normalize_x_power(f)
    t = len(g)
    if t >= 4:
        raise Unsupported(f"{t} terms: at most three terms are supported")
    zero = 1 if a1 > 0 else 0
    try:
        if t == 1:
            rep = SolveReport(p, 0, [], policy="MONOMIAL")
        elif t == 2:
            rep = solve_binomial(g, p)
        else:
            rep = solve_trinomial(g, p, policy)
    except NoRoots as e:
        rep = SolveReport(p, 0, [], policy="NONE", diagnostics={"no_roots": str(e)})
    rep.zero_root_multiplicity = a1
    rep.root_count = len(rep.roots) + zero
    return rep
