from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from sparsepadic.arith import ord_p
from sparsepadic.poly import SparsePoly, parse
from sparsepadic.polygon import (
    SingleTerm,
    has_integral_valuation_candidates,
    lower_hull,
    roots_by_valuation,
)


def test_golden_trinomial_polygon():
    f = parse("x^10 - 10*x + 738")
    assert roots_by_valuation(f, 3) == [(2, 1), (0, 9)]
    assert has_integral_valuation_candidates(f, 3) == (True, [2, 0])
    assert [e.to_json() for e in lower_hull(f, 3)] == [
        {"from": [0, 2], "to": [1, 0], "slope": "-2/1", "length": 1},
        {"from": [1, 0], "to": [10, 0], "slope": "0/1", "length": 9},
    ]


def test_fractional_slope():
    edges = lower_hull(parse("3 + 9*x + x^3"), 3)
    assert len(edges) == 1 and edges[0].slope == Fraction(-1, 3)
    assert has_integral_valuation_candidates(parse("3 - x^2"), 3)[0] is False


def test_single_term_rejected():
    with pytest.raises(SingleTerm):
        lower_hull(parse("5*x^3"), 5)


terms = st.dictionaries(st.integers(0, 30), st.integers(-500, 500).filter(bool), min_size=2, max_size=5)


@given(terms, st.sampled_from([3, 5, 7]))
def test_hull_is_lower_and_convex(d, p):
    f = SparsePoly.from_terms(d.items())
    edges = lower_hull(f, p)
    pts = [(a, ord_p(c, p)) for a, c in f.terms]
    # endpoints span the exponent range and slopes strictly increase
    assert edges[0].left[0] == f.terms[0][0] and edges[-1].right[0] == f.degree
    assert all(e1.slope < e2.slope for e1, e2 in zip(edges, edges[1:]))
    # every point lies on or above every edge line
    for e in edges:
        (x0, y0) = e.left
        for x, y in pts:
            assert y - y0 >= e.slope * (x - x0)
    assert sum(n for _, n in roots_by_valuation(f, p)) == f.degree - f.terms[0][0]
