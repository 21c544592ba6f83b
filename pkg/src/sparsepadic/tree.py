"""The tree of nodal polynomials.

A node with digit prefix zeta (depth i) carries the polynomial

    f_{i,zeta}(x) = f(zeta + p^i x) / p^S  mod p^{k_node},

where S is the sum of the s-values consumed on the way down.  Roots of the
node's mod-p reduction that are simple lift uniquely to Z_p; multiple ones
(degenerate digits) spawn a child.  Building stops when precision runs out,
which is recorded on the node instead of raised.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .arith import PadicContext, ord_p
from .poly import SparsePoly, taylor_coeff

DENSE_DUMP_LIMIT = 64


class NotARoot(ValueError):
    pass


class NondegenerateDigit(ValueError):
    pass


class PrecisionExhausted(ArithmeticError):
    """s(f, zeta0) is not below the node precision."""


class UncertifiedPrecision(UserWarning):
    pass


def _reduce(f: SparsePoly, m: int) -> SparsePoly:
    return SparsePoly.from_terms((a, c % m) for a, c in f.terms)


def _eval(f: SparsePoly, x: int, m: int) -> int:
    return sum(c * pow(x, a, m) for a, c in f.terms) % m


def _deriv_eval(f: SparsePoly, x: int, m: int) -> int:
    return sum(a * c * pow(x, a - 1, m) for a, c in f.terms if a) % m


def _s_and_taylor(f: SparsePoly, zeta0: int, p: int, k: int) -> tuple[int, list[int]]:
    """Return (s, T) with T the Taylor coefficients mod p^k.  s >= k signals
    that precision ran out (the true value is then only known to be >= k)."""
    ctx = PadicContext(p, k)
    top = min(f.degree, k - 1)
    T = [taylor_coeff(f, zeta0, i, ctx) for i in range(top + 1)]
    s = k
    for i, t in enumerate(T):
        if t:
            s = min(s, i + ord_p(t, p))
    return s, T


def s_value(f: SparsePoly, zeta0: int, ctx: PadicContext) -> int:
    """min over i of i + ord_p(i-th Taylor coefficient at zeta0), capped at k."""
    if _eval(f, zeta0, ctx.p):
        raise NotARoot(f"{zeta0} is not a root of f mod {ctx.p}")
    return _s_and_taylor(f, zeta0, ctx.p, ctx.k)[0]


@dataclass
class NodalNode:
    depth: int
    prefix: tuple[int, ...]
    poly: SparsePoly
    k_node: int
    s_consumed: int | None = None
    shift_total: int = 0
    p: int = 0
    nondegenerate_digits: list[int] = field(default_factory=list)
    degenerate_digits: list[int] = field(default_factory=list)
    truncated: list[tuple[int, int]] = field(default_factory=list)
    degenerate_leaf: bool = False
    children: list["NodalNode"] = field(default_factory=list)

    @property
    def center(self) -> int:
        return sum(d * self.p**i for i, d in enumerate(self.prefix))

    @property
    def reduction(self) -> SparsePoly:
        return _reduce(self.poly, self.p)

    @property
    def n_p(self) -> int:
        return len(self.nondegenerate_digits)

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def to_json(self) -> dict:
        red = self.reduction
        if red.degree <= DENSE_DUMP_LIMIT:
            reduction = red.dense()
        else:
            reduction = {"terms": [[a, c] for a, c in red.terms]}
        return {
            "prefix": list(self.prefix),
            "depth": self.depth,
            "k_node": self.k_node,
            "s_consumed": self.s_consumed,
            "poly": None if self.depth == 0 else self.poly.to_json(),
            "reduction": reduction,
            "nondegenerate_digits": self.nondegenerate_digits,
            "degenerate_digits": self.degenerate_digits,
            "truncated": [{"digit": d, "s_at_least": s} for d, s in self.truncated],
            "degenerate_leaf": self.degenerate_leaf,
            "children": [c.to_json() for c in self.children],
        }


@dataclass
class NodalTree:
    ctx: PadicContext
    root: NodalNode

    def nodes(self) -> list[NodalNode]:
        return list(self.root.walk())

    @property
    def depth(self) -> int:
        return max(n.depth for n in self.nodes())

    @property
    def complete(self) -> bool:
        """True when no branch was cut short by precision."""
        return all(not n.truncated for n in self.nodes())

    def nondegenerate_prefixes(self) -> list[tuple[int, ...]]:
        out = []
        for n in self.nodes():
            out.extend(n.prefix + (d,) for d in n.nondegenerate_digits)
        return sorted(out)

    def to_json(self) -> dict:
        return {
            "p": self.ctx.p,
            "k": self.ctx.k,
            "depth": self.depth,
            "complete": self.complete,
            "root": self.root.to_json(),
        }


def child_node(parent: NodalNode, zeta_digit: int, ctx: PadicContext) -> NodalNode:
    """The nodal polynomial below ``parent`` along the degenerate digit."""
    p, k = ctx.p, parent.k_node
    f = parent.poly
    if _eval(f, zeta_digit, p) or _deriv_eval(f, zeta_digit, p):
        raise NondegenerateDigit(f"{zeta_digit} is not a degenerate root mod {p}")
    s, T = _s_and_taylor(f, zeta_digit, p, k)
    if s >= k:
        raise PrecisionExhausted(f"s >= {k} at digit {zeta_digit}")
    m = p ** (k - s)
    coeffs = [(p**i * t) // p**s % m for i, t in enumerate(T)]
    return NodalNode(
        depth=parent.depth + 1,
        prefix=parent.prefix + (zeta_digit,),
        poly=SparsePoly.from_dense(coeffs),
        k_node=k - s,
        s_consumed=s,
        shift_total=parent.shift_total + s,
        p=p,
    )


def _classify(node: NodalNode, digits: Iterable[int]) -> None:
    p = node.p
    for z in digits:
        if _eval(node.poly, z, p):
            continue
        if _deriv_eval(node.poly, z, p):
            node.nondegenerate_digits.append(z)
        else:
            node.degenerate_digits.append(z)


def _isolates_double_root(node: NodalNode, known: Sequence[int]) -> bool:
    """The node's disk holds exactly one known double root and nothing else.

    The number of roots (with multiplicity) of the nodal polynomial in its
    disk equals the degree of its mod-p reduction; if that is 2 and a known
    double root lies inside, the disk contains nothing further.
    """
    red = node.reduction
    if red.degree != 2 or len(node.degenerate_digits) != 1:
        return False
    mod = node.p ** (node.depth + 1)
    target = node.center + node.degenerate_digits[0] * node.p**node.depth
    return any(z % mod == target for z in known)


def build_tree(
    f: SparsePoly,
    ctx: PadicContext,
    root_digits: Iterable[int] | None = None,
    known_degenerate: Sequence[int] = (),
) -> NodalTree:
    """Breadth-first construction of the nodal tree of f at precision k.

    ``root_digits`` restricts the first digit (e.g. to units); it defaults to
    all of F_p.  ``known_degenerate`` lists true double roots of f in Z_p,
    known modulo p^k or better; disks proven to contain only such a root are
    closed off instead of being refined forever.
    """
    if ctx.p and _reduce(f, ctx.p).is_zero:
        raise ValueError("f vanishes mod p; divide out the p-content first")
    p = ctx.p
    root = NodalNode(0, (), _reduce(f, ctx.modulus), ctx.k, p=p)
    _classify(root, range(p) if root_digits is None else root_digits)
    queue = deque([root])
    while queue:
        node = queue.popleft()
        if known_degenerate and _isolates_double_root(node, known_degenerate):
            node.degenerate_leaf = True
            continue
        for z in node.degenerate_digits:
            try:
                child = child_node(node, z, ctx)
            except PrecisionExhausted:
                s, _ = _s_and_taylor(node.poly, z, p, node.k_node)
                node.truncated.append((z, s))
                continue
            _classify(child, range(p))
            node.children.append(child)
            queue.append(child)
    return NodalTree(ctx, root)


def count_nondegenerate_roots(tree: NodalTree) -> int:
    """Sum of n_p over all nodes: the number of simple roots in Z_p once the
    tree is complete.  Warns when some branch was truncated."""
    if not tree.complete:
        warnings.warn(
            "tree truncated by precision; the count is a lower bound",
            UncertifiedPrecision,
            stacklevel=2,
        )
    return sum(n.n_p for n in tree.nodes())
