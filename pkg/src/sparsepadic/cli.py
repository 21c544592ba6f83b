"""Command-line front end.

    sparsepadic solve -p 3 "x^10 - 10*x + 738"
    sparsepadic bench-tetra --p 3 --h 3 --d-list 4,6,8,10

Exit codes:
    0  success
    1  parse or usage error
    2  invalid prime
    3  unsupported term count
    4  uncertified precision
    5  oracle budget exceeded
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from .arith import EvenPrime, NotPrime, PadicContext, check_odd_prime
from .bounds import NotSquareFree, binomial_separation_bound, trinomial_separation_bound
from .hensel import certify_approximate_root, from_digits, lift_to_precision
from .oracle import BudgetExceeded, count_qp_roots_oracle
from .polygon import SingleTerm, lower_hull
from .poly import PolySyntaxError, SparsePoly, ZeroPolynomial, normalize_x_power, parse
from .solvers import (
    ADAPTIVE_DOUBLING,
    AUTO,
    EXACT_RESULTANT,
    YU_FORMULA,
    PrecisionNotCertified,
    PrecisionPolicy,
    Unsupported,
    solve,
)
from .tetra import InvalidParameters, bench_rows, rows_to_csv
from .tree import build_tree

EXIT_OK, EXIT_PARSE, EXIT_PRIME, EXIT_UNSUPPORTED, EXIT_UNCERTIFIED, EXIT_BUDGET = range(6)

POLICIES = {
    "auto": AUTO,
    "resultant": EXACT_RESULTANT,
    "adaptive": ADAPTIVE_DOUBLING,
    "yu": YU_FORMULA,
}
COMMANDS = ("solve", "count", "tree", "polygon", "bound", "lift", "oracle", "bench-tetra")
SAFE_INT = 2**53


class UsageError(ValueError):
    pass


@dataclass
class CliConfig:
    command: str
    p: int
    policy: str = AUTO
    output: str = "json"
    input: str | None = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="sparsepadic", description="p-adic roots of sparse polynomials")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(name, poly=True):
        sp = sub.add_parser(name)
        sp.add_argument("-p", "--p", dest="p", type=int, required=True, help="odd prime")
        sp.add_argument("--output", choices=["json", "pretty"], default="json")
        if poly:
            sp.add_argument("input", help="polynomial text, or a file with one polynomial per line")
        return sp

    sp = common("solve")
    sp.add_argument("--policy", choices=sorted(POLICIES), default="auto")
    sp.add_argument("--k-max", type=int, default=4096)
    sp = common("count")
    sp.add_argument("--policy", choices=sorted(POLICIES), default="auto")
    sp = common("tree")
    sp.add_argument("-k", "--k", dest="k", type=int, help="precision (default: the solver's choice)")
    sp.add_argument("--reversed", action="store_true", help="build the tree of the reversed polynomial")
    common("polygon")
    common("bound")
    sp = common("lift")
    sp.add_argument("--prefix", required=True, help="comma-separated base-p digits, least significant first")
    sp.add_argument("-K", "--K", dest="K", type=int, default=10, help="number of digits to output")
    common("oracle")
    sp = sub.add_parser("bench-tetra")
    sp.add_argument("--p", "-p", dest="p", type=int, required=True)
    sp.add_argument("--h", type=int, required=True)
    sp.add_argument("--d-list", required=True, help="comma-separated even degrees")
    sp.add_argument("--output", choices=["csv", "json", "pretty"], default="csv")
    return ap


def _jsonable(obj):
    """Replace integers beyond double precision by decimal strings."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj) if abs(obj) >= SAFE_INT else obj
    if isinstance(obj, float):
        return obj if obj == obj and abs(obj) != float("inf") else str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return str(obj)


def _dump(obj, output: str) -> str:
    indent = 2 if output == "pretty" else None
    return json.dumps(_jsonable(obj), sort_keys=True, indent=indent)


def _read_inputs(text: str) -> tuple[list[SparsePoly], bool]:
    if os.path.isfile(text):
        with open(text) as fh:
            lines = [ln.strip() for ln in fh if ln.strip() and not ln.lstrip().startswith("#")]
        return [parse(ln) for ln in lines], True
    return [parse(text)], False


# -- commands ---------------------------------------------------------------


def _cmd_solve(f, args):
    return solve(f, args.p, PrecisionPolicy(POLICIES[args.policy], k_max=args.k_max)).to_json()


def _cmd_count(f, args):
    return {"count": solve(f, args.p, PrecisionPolicy(POLICIES[args.policy])).root_count}


def _cmd_tree(f, args):
    from .solvers import _p_primitive
    from .poly import reverse

    g, _ = normalize_x_power(f)
    k = args.k
    if k is None:
        k = solve(f, args.p).k or 1
    base = _p_primitive(reverse(g) if args.reversed else g, args.p)
    tree = build_tree(base, PadicContext(args.p, k), root_digits=[0] if args.reversed else None)
    out = tree.to_json()
    out["nondegenerate_prefixes"] = [list(t) for t in tree.nondegenerate_prefixes()]
    return out


def _cmd_polygon(f, args):
    try:
        return [e.to_json() for e in lower_hull(f, args.p)]
    except SingleTerm:
        return []


def _cmd_bound(f, args):
    g, a1 = normalize_x_power(f)
    out = {"terms": len(g)}
    if len(g) == 2:
        d, H = g.degree, g.height
        out["binomial_p_adic"] = binomial_separation_bound(d, H, args.p).to_json()
        out["binomial_archimedean"] = binomial_separation_bound(d, H, None).to_json()
    elif len(g) == 3:
        try:
            out["trinomial_p_adic"] = trinomial_separation_bound(g, args.p).to_json()
        except NotSquareFree:
            out["trinomial_p_adic"] = {"error": "not square-free"}
    elif len(g) >= 4:
        raise Unsupported(f"{len(g)} terms")
    return out


def _cmd_lift(f, args):
    try:
        prefix = [int(t) for t in args.prefix.split(",") if t.strip() != ""]
    except ValueError as e:
        raise UsageError(f"bad --prefix: {e}") from None
    if not prefix or any(not 0 <= d < args.p for d in prefix):
        raise UsageError("--prefix needs digits in [0, p)")
    rep = solve(f, args.p)
    n = len(prefix)
    matches = [
        r
        for r in rep.roots
        if r.prefix_digits[:n] == prefix[: len(r.prefix_digits)]
    ]
    if len(matches) == 1:
        root = matches[0]
    else:
        root = certify_approximate_root(f, from_digits(prefix, args.p), PadicContext(args.p, 16))
        if not root:
            raise PrecisionNotCertified(
                f"prefix {prefix} selects {len(matches)} roots and is not itself certifiable"
            )
    base = root.certificate_poly if root.certificate_poly is not None else f
    ds = lift_to_precision(base, root, args.K)
    return {"root": root.to_json(), "K": args.K, "digits": ds}


def _cmd_oracle(f, args):
    oc = count_qp_roots_oracle(f, args.p)
    return {
        "p": oc.p,
        "k_used": oc.k_used,
        "method": oc.method,
        "qp_root_count": oc.qp_root_count,
        "roots_mod_pk": oc.roots_mod_pk,
    }


HANDLERS = {
    "solve": _cmd_solve,
    "count": _cmd_count,
    "tree": _cmd_tree,
    "polygon": _cmd_polygon,
    "bound": _cmd_bound,
    "lift": _cmd_lift,
    "oracle": _cmd_oracle,
}


def run(argv, stdout=None, stderr=None) -> int:
    """Run one CLI invocation; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr

    def fail(code, msg):
        print(f"error: {msg}", file=stderr)
        return code

    try:
        args = _build_parser().parse_args(argv)
    except UsageError as e:
        return fail(EXIT_PARSE, e)
    try:
        check_odd_prime(args.p)
    except (NotPrime, EvenPrime, ValueError) as e:
        return fail(EXIT_PRIME, e)
    if args.command == "bench-tetra":
        try:
            ds = [int(t) for t in args.d_list.split(",") if t.strip()]
            rows = bench_rows(args.p, args.h, ds)
        except (ValueError, InvalidParameters) as e:
            return fail(EXIT_PARSE, e)
        stdout.write(rows_to_csv(rows) if args.output == "csv" else _dump(rows, args.output) + "\n")
        return EXIT_OK
    try:
        polys, batch = _read_inputs(args.input)
    except (PolySyntaxError, ZeroPolynomial, ValueError) as e:
        return fail(EXIT_PARSE, e)
    results, code = [], EXIT_OK
    for f in polys:
        try:
            results.append(HANDLERS[args.command](f, args))
        except UsageError as e:
            return fail(EXIT_PARSE, e)
        except Unsupported as e:
            if not batch:
                return fail(EXIT_UNSUPPORTED, e)
            results.append({"error": "unsupported", "message": str(e)})
            code = max(code, EXIT_UNSUPPORTED)
        except PrecisionNotCertified as e:
            if not batch:
                print(_dump({"error": "uncertified", "message": str(e)}, args.output), file=stdout)
                return fail(EXIT_UNCERTIFIED, e)
            results.append({"error": "uncertified", "message": str(e)})
            code = max(code, EXIT_UNCERTIFIED)
        except BudgetExceeded as e:
            if not batch:
                return fail(EXIT_BUDGET, e)
            results.append({"error": "budget", "message": str(e)})
            code = max(code, EXIT_BUDGET)
    print(_dump(results if batch else results[0], args.output), file=stdout)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


__all__ = ["CliConfig", "COMMANDS", "run", "main"]
