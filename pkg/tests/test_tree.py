import pytest
from hypothesis import given, settings, strategies as st

from sparsepadic.arith import PadicContext
from sparsepadic.poly import SparsePoly, parse
from sparsepadic.tree import (
    NondegenerateDigit,
    UncertifiedPrecision,
    build_tree,
    child_node,
    count_nondegenerate_roots,
    s_value,
)

GOLDEN = parse("x^10 - 10*x + 738")


def test_golden_tree_chain():
    tree = build_tree(GOLDEN, PadicContext(3, 7))
    root = tree.root
    assert root.reduction.dense() == [0, 2, 0, 0, 0, 0, 0, 0, 0, 0, 1]
    assert root.nondegenerate_digits == [0] and root.degenerate_digits == [1]
    (c1,) = root.children
    assert c1.s_consumed == 4 and c1.k_node == 3
    assert c1.poly == parse("9 + 5*x^2 + 13*x^3 + 21*x^4")
    assert c1.nondegenerate_digits == [1] and c1.degenerate_digits == [0]
    (c2,) = c1.children
    assert c2.s_consumed == 2 and c2.reduction == parse("1 + 2*x^2")
    assert c2.nondegenerate_digits == [1, 2]
    assert tree.complete and tree.depth == 2
    assert tree.nondegenerate_prefixes() == [(0,), (1, 0, 1), (1, 0, 2), (1, 1)]
    assert count_nondegenerate_roots(tree) == 4


def test_s_value_at_degenerate_digit():
    assert s_value(GOLDEN, 1, PadicContext(3, 7)) == 4


def test_child_requires_degenerate_digit():
    tree = build_tree(GOLDEN, PadicContext(3, 7))
    with pytest.raises(NondegenerateDigit):
        child_node(tree.root, 0, PadicContext(3, 7))


@pytest.mark.parametrize("k", [1, 2])
def test_binomial_340_low_precision_is_single_node(k):
    tree = build_tree(parse("1 - x^340"), PadicContext(17, k))
    assert tree.root.children == [] and not tree.complete
    with pytest.warns(UncertifiedPrecision):
        count_nondegenerate_roots(tree)


@pytest.mark.parametrize("k", [3, 4, 6])
def test_binomial_340_has_four_children(k):
    tree = build_tree(parse("1 - x^340"), PadicContext(17, k))
    kids = tree.root.children
    assert [c.prefix for c in kids] == [(1,), (4,), (13,), (16,)]
    # these are the negatives of the reductions of x^340 - 1
    assert [c.reduction for c in kids] == [
        parse("14*x"),
        parse("10 + 12*x"),
        parse("15 + 5*x"),
        parse("3 + 3*x"),
    ]
    assert tree.nondegenerate_prefixes() == [(1, 0), (4, 2), (13, 14), (16, 16)]
    assert tree.complete


def test_binomial_397_single_node():
    tree = build_tree(parse("1 - x^397"), PadicContext(17, 3))
    assert tree.depth == 0 and count_nondegenerate_roots(tree) == 1


def test_tree_json_shape():
    js = build_tree(GOLDEN, PadicContext(3, 7)).to_json()
    c2 = js["root"]["children"][0]["children"][0]
    assert c2["prefix"] == [1, 0] and c2["s_consumed"] == 2 and c2["reduction"] == [1, 0, 2]


@settings(max_examples=60, deadline=None)
@given(
    st.integers(-20, 20).filter(bool),
    st.integers(-20, 20).filter(bool),
    st.integers(-20, 20).filter(bool),
    st.integers(1, 6),
    st.integers(1, 6),
    st.sampled_from([3, 5, 7]),
)
def test_tree_leaves_are_residues_of_roots(c1, c2, c3, a2, gap, p):
    """Each nondegenerate prefix is a root of f modulo p^len."""
    f = SparsePoly.from_terms([(0, c1), (a2, c2), (a2 + gap, c3)])
    if all(c % p == 0 for c in f.coeffs):
        with pytest.raises(ValueError):
            build_tree(f, PadicContext(p, 12))
        return
    tree = build_tree(f, PadicContext(p, 12))
    for pre in tree.nondegenerate_prefixes():
        x = sum(d * p**i for i, d in enumerate(pre))
        assert f(x) % p == 0
