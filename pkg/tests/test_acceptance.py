"""End-to-end acceptance checks.

Each test is tagged with its criterion label; conftest.py prints one
PASS/FAIL line per criterion at the end of the run.
"""

import io
import itertools
import json
import math
import random
import time
from functools import lru_cache

import gmpy2
import pytest
from mpmath import mpf

from sparsepadic.arith import PadicContext, ord_p
from sparsepadic.bounds import (
    NotSquareFree,
    binomial_separation_bound,
    trinomial_separation_bound,
    yu_valuation_bound,
    yu_valuation_bound_mpfr,
)
from sparsepadic.cli import run
from sparsepadic.hensel import from_digits, lift_to_precision, quadratic_convergence_ok, root_trace
from sparsepadic.oracle import count_qp_roots_oracle
from sparsepadic.poly import SparsePoly, parse
from sparsepadic.solvers import count_binomial_roots, solve, solve_binomial
from sparsepadic.tetra import bench_rows
from sparsepadic.tree import build_tree

GOLDEN = "x^10 - 10*x + 738"
RANDOM_TRINOMIALS = 10_000
BINOMIAL_PRIMES = (3, 5, 7, 11, 13, 17)


def cli(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out, stderr=io.StringIO())
    return code, out.getvalue()


def base_poly(f, root):
    return root.certificate_poly if root.certificate_poly is not None else f


def root_mod(f, root, K):
    """(N, u) with root = N / p^u, N known modulo p^K."""
    N = from_digits(lift_to_precision(base_poly(f, root), root, K), root.p)
    return N, max(0, -root.valuation)


def pair_ord(f, r1, r2, K=64):
    """ord_p(z1 - z2) for two certified roots, or None if they agree to
    the working precision."""
    p = r1.p
    (n1, u1), (n2, u2) = root_mod(f, r1, K), root_mod(f, r2, K)
    U = max(u1, u2)
    diff = (n1 * p ** (U - u1) - n2 * p ** (U - u2)) % p**K
    return None if diff == 0 else ord_p(diff, p) - U


# -- shared corpora ------------------------------------------------------------


def _random_trinomials(n, seed=20240611):
    rng = random.Random(seed)
    nonzero = [c for c in range(-20, 21) if c]
    out = []
    for _ in range(n):
        p = rng.choice((3, 5, 7))
        a3 = rng.randint(2, 12)
        a2 = rng.randint(1, a3 - 1)
        c1, c2, c3 = (rng.choice(nonzero) for _ in range(3))
        out.append((SparsePoly.from_terms([(0, c1), (a2, c2), (a3, c3)]), p))
    return out


def _sweep_trinomials():
    small = [c for c in range(-3, 4) if c]
    out = []
    for p in (3, 5, 7):
        for a3 in range(2, 6):
            for a2 in range(1, a3):
                for c1, c2, c3 in itertools.product(small, repeat=3):
                    out.append((SparsePoly.from_terms([(0, c1), (a2, c2), (a3, c3)]), p))
    return out


@lru_cache(maxsize=None)
def trinomial_corpus():
    """[(f, p, solver report, oracle count)] plus the wall time taken."""
    t0 = time.perf_counter()
    rows = []
    for f, p in _random_trinomials(RANDOM_TRINOMIALS) + _sweep_trinomials():
        rows.append((f, p, solve(f, p), count_qp_roots_oracle(f, p).qp_root_count))
    return rows, time.perf_counter() - t0


def _primitive_binomial(c1, c2, d):
    g = math.gcd(c1, c2) * (1 if c2 > 0 else -1)
    return SparsePoly.from_terms([(0, c1 // g), (d, c2 // g)])


@lru_cache(maxsize=None)
def binomial_corpus():
    """Every c1 + c2*x^d with d <= 60, 1 <= |c_i| <= 30, p in BINOMIAL_PRIMES.

    Returns (cases checked, discrepancies, distinct primitive binomials
    with their oracle count, wall time).  Proportional binomials share
    one oracle evaluation, since they have the same roots.
    """
    t0 = time.perf_counter()
    nonzero = [c for c in range(-30, 31) if c]
    oracle = {}
    bad, n = [], 0
    for p in BINOMIAL_PRIMES:
        for d in range(1, 61):
            gamma = math.gcd(d, p - 1)
            for c1, c2 in itertools.product(nonzero, repeat=2):
                g = _primitive_binomial(c1, c2, d)
                key = (g, p)
                if key not in oracle:
                    oracle[key] = count_qp_roots_oracle(g, p).qp_root_count
                m = count_binomial_roots(SparsePoly.from_terms([(0, c1), (d, c2)]), p)
                n += 1
                if m not in (0, gamma) or m != oracle[key]:
                    bad.append((c1, c2, d, p, m, oracle[key]))
    return n, bad, oracle, time.perf_counter() - t0


# -- criteria -------------------------------------------------------------------


@pytest.mark.criterion("1 golden trinomial over Q_3")
def test_criterion_1_golden_trinomial(record_property):
    t0 = time.perf_counter()
    code, out = cli("solve", "-p", "3", GOLDEN)
    _, tree_out = cli("tree", "-p", "3", "-k", "7", GOLDEN)
    elapsed = time.perf_counter() - t0
    record_property("detail", f"({elapsed:.3f} s)")
    rep = json.loads(out)
    assert code == 0 and rep["m"] == 4
    assert sorted(r["prefix_digits"] for r in rep["roots"]) == sorted([[0], [1, 1], [1, 0, 1], [1, 0, 2]])
    tree = json.loads(tree_out)
    assert tree["depth"] == 2 and tree["complete"]
    (c1,) = tree["root"]["children"]
    (c2,) = c1["children"]
    assert (c1["s_consumed"], c2["s_consumed"]) == (4, 2)
    assert c1["k_node"] == 3
    assert SparsePoly.from_json(c1["poly"]) == parse("21*x^4 + 13*x^3 + 5*x^2 + 9")
    assert c2["nondegenerate_digits"] == [1, 2]
    assert elapsed < 1.0


@pytest.mark.criterion("2 golden binomials over Q_17")
def test_criterion_2_golden_binomials(record_property):
    t0 = time.perf_counter()
    r397 = solve(parse("1 - x^397"), 17)
    r340 = solve(parse("1 - x^340"), 17)
    trees = {k: build_tree(parse("1 - x^340"), PadicContext(17, k)) for k in (1, 2, 3, 4, 5)}
    elapsed = time.perf_counter() - t0
    record_property("detail", f"({elapsed:.3f} s)")
    assert r397.root_count == 1 and r397.roots[0].prefix_digits == [1]
    assert r340.root_count == 4
    assert {r.prefix_digits[0] for r in r340.roots} == {1, 4, 13, 16}
    assert {r.prefix_digits[1] for r in r340.roots} == {0, 2, 14, 16}
    assert all(trees[k].root.children == [] for k in (1, 2))
    assert all(len(trees[k].root.children) == 4 for k in (3, 4, 5))
    assert elapsed < 1.0


@pytest.mark.criterion("3 solver vs oracle root counts")
def test_criterion_3_oracle_equivalence(record_property):
    rows, elapsed = trinomial_corpus()
    bad = [(str(f), p, rep.root_count, m) for f, p, rep, m in rows if rep.root_count != m]
    record_property("detail", f"({len(rows)} trinomials, {len(bad)} discrepancies, {elapsed:.1f} s)")
    assert len(rows) >= RANDOM_TRINOMIALS + 6000
    assert bad == []
    assert elapsed < 600


@pytest.mark.criterion("4 quadratic convergence of every emitted root")
def test_criterion_4_quadratic_convergence(record_property):
    cases = [(parse(GOLDEN), 3), (parse("1 - x^397"), 17), (parse("1 - x^340"), 17)]
    emitted = [(f, r) for f, p in cases for r in solve(f, p).roots]
    emitted += [(f, r) for f, _, rep, _ in trinomial_corpus()[0] for r in rep.roots]
    violations = []
    for f, r in emitted:
        trace = root_trace(base_poly(f, r), r)
        if not quadratic_convergence_ok(trace, r.ell, r.j):
            violations.append((str(f), r.p, r.prefix_digits, trace))
    record_property("detail", f"({len(emitted)} roots, {len(violations)} violations)")
    assert emitted and violations == []


@pytest.mark.criterion("5 binomial counting")
def test_criterion_5_binomial_counting(record_property):
    n, bad, _, elapsed = binomial_corpus()
    record_property("detail", f"({n} binomials, {len(bad)} discrepancies, {elapsed:.1f} s)")
    assert n == len(BINOMIAL_PRIMES) * 60 * 60 * 60
    assert bad == []
    assert elapsed < 300


@pytest.mark.criterion("6 tetranomial separation gap")
def test_criterion_6_tetranomial_gap(record_property):
    t0 = time.perf_counter()
    ds = [4, 6, 8, 10]
    lines, fails = [], []
    for h in (3, 4):
        rows = bench_rows(3, h, ds)
        gaps = [r["measured_gap"] for r in rows]
        fails += [(h, r["d"]) for r in rows if r["measured_gap"] < (h - 1) * r["d"] // 2 + h]
        # least-squares slope of measured gap against d
        md, mg = sum(ds) / len(ds), sum(gaps) / len(gaps)
        slope = sum((d - md) * (g - mg) for d, g in zip(ds, gaps)) / sum((d - md) ** 2 for d in ds)
        lines.append(f"h={h} gaps={gaps} slope={slope:g}")
        if slope < (h - 1) / 2:
            fails.append((h, "slope", slope))
    elapsed = time.perf_counter() - t0
    record_property("detail", f"({'; '.join(lines)}; {elapsed:.2f} s)")
    assert fails == []
    assert elapsed < 60


@pytest.mark.criterion("7 separation bounds are never violated")
def test_criterion_7_separation_soundness(record_property):
    tri_pairs, tri_bad, skipped = 0, [], 0
    for f, p, rep, _ in trinomial_corpus()[0]:
        if len(rep.roots) < 2:
            continue
        try:
            bound = trinomial_separation_bound(f, p).ord_bound
        except NotSquareFree:
            skipped += 1
            continue
        for r1, r2 in itertools.combinations(rep.roots, 2):
            tri_pairs += 1
            o = pair_ord(f, r1, r2)
            if o is None or o > bound:
                tri_bad.append((str(f), p, o))
    bin_pairs, bin_bad = 0, []
    for (g, p), m in binomial_corpus()[2].items():
        if m < 2:
            continue
        (_, c1), (d, c2) = g.terms
        value = binomial_separation_bound(d, max(abs(c1), abs(c2)), p).value
        roots = solve_binomial(g, p).roots
        for r1, r2 in itertools.combinations(roots, 2):
            bin_pairs += 1
            o = pair_ord(g, r1, r2)
            if o is None or abs(o) * mpf(math.log(p)) > value:
                bin_bad.append((str(g), p, o))
    record_property(
        "detail",
        f"(trinomial pairs {tri_pairs}, binomial pairs {bin_pairs}, "
        f"violations {len(tri_bad) + len(bin_bad)}, non-square-free skipped {skipped})",
    )
    assert tri_pairs and bin_pairs
    assert tri_bad == [] and bin_bad == []


def _exact_mpfr(x):
    with gmpy2.context(precision=512):
        return gmpy2.mul_2exp(gmpy2.mpfr(int(x.man)), int(x.exp))


@pytest.mark.criterion("8 two evaluators of the linear-forms bound")
def test_criterion_8_yu_evaluators(record_property):
    rng = random.Random(31337)
    worst, mono_pairs, mono_bad = 0, 0, 0
    for _ in range(100):
        n = rng.randint(2, 5)
        p = rng.choice((3, 5, 7, 11, 13, 17, 101))
        lp = math.log(p)
        logA = sorted(lp + rng.uniform(0, 100) for _ in range(n))
        logB = math.log(3) + rng.uniform(0, 100)
        a = yu_valuation_bound(n, p, logA, logB)
        b = yu_valuation_bound_mpfr(n, p, logA, logB)
        ulp = gmpy2.mul_2exp(gmpy2.mpfr(1), int(gmpy2.floor(gmpy2.log2(b))) - 255)
        worst = max(worst, float(abs(_exact_mpfr(a) - b) / ulp))
        # monotonicity in log B and in each log A_i (kept sorted)
        mono_pairs += 1
        mono_bad += yu_valuation_bound(n, p, logA, logB + rng.uniform(0, 5)) < a
        for i in range(n):
            bumped = list(logA)
            bumped[i] += rng.uniform(0, 5)
            if any(bumped[j] > bumped[j + 1] for j in range(n - 1)):
                continue
            mono_pairs += 1
            mono_bad += yu_valuation_bound(n, p, bumped, logB) < a
    record_property("detail", f"(max disagreement {worst:g} ulp, {mono_pairs} monotone pairs, {mono_bad} bad)")
    assert worst <= 1
    assert mono_bad == 0


@pytest.mark.criterion("smoke benchmark 1 - x^d over Q_7")
def test_smoke_benchmark(record_property):
    times = {}
    for e in (3, 6, 9, 12):
        d = 10**e
        t0 = time.perf_counter()
        rep = solve(SparsePoly.from_terms([(0, 1), (d, -1)]), 7)
        times[d] = time.perf_counter() - t0
        assert rep.root_count == math.gcd(d, 6)
    record_property("detail", "(" + ", ".join(f"d=1e{int(math.log10(d))}: {t*1e3:.2f} ms" for d, t in times.items()) + ")")
    assert all(t < 2.0 for t in times.values())
    # a billionfold increase in d costs far less than a billionfold in time
    assert times[10**12] < 1000 * max(times[10**3], 1e-4)
