import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from adsboundary.monoid import (
    MonoidKind,
    MonoidSpec,
    NotFoundationSetError,
    accurate_refine_p,
    construct_pf,
    ideals_meet,
    is_directed,
    is_p_foundation_set,
    lcm_p,
)

FA2 = MonoidSpec(MonoidKind.FREE_ABELIAN, ("a", "b"))
F2 = MonoidSpec(MonoidKind.FREE, ("a", "b"))
F1 = MonoidSpec(MonoidKind.FREE, ("a",))
NUM = MonoidSpec(MonoidKind.FREE_ABELIAN, ("2", "3"))


def w(spec, text):
    return spec.parse(text)


def test_lcm_examples():
    assert lcm_p(FA2, (1, 0), (0, 1)) == ((1, 1), (0, 1), (1, 0))
    r, p1, q1 = lcm_p(F2, w(F2, "a"), w(F2, "ab"))
    assert (r, p1, q1) == (w(F2, "ab"), w(F2, "b"), ())
    assert lcm_p(F2, w(F2, "a"), w(F2, "b")) is None
    assert not ideals_meet(F2, w(F2, "a"), w(F2, "b"))


exps = st.tuples(st.integers(0, 3), st.integers(0, 3))
words = st.lists(st.integers(0, 1), max_size=4).map(tuple)


@given(exps, exps)
def test_lcm_free_abelian_vs_brute(p, q):
    r, p1, q1 = lcm_p(FA2, p, q)
    assert FA2.multiply(p, p1) == r == FA2.multiply(q, q1)
    common = [x for x in itertools.product(range(8), repeat=2) if FA2.leq(p, x) and FA2.leq(q, x)]
    assert all(FA2.leq(r, x) for x in common)


@given(words, words)
def test_lcm_free_vs_brute(p, q):
    res = lcm_p(F2, p, q)
    long = [x for n in range(6) for x in F2.elements_of_degree(n)]
    common = [x for x in long if F2.leq(p, x) and F2.leq(q, x)]
    if res is None:
        assert not common
    else:
        r = res[0]
        assert F2.multiply(p, res[1]) == r == F2.multiply(q, res[2])
        assert all(F2.leq(r, x) for x in common)


def test_foundation_examples():
    assert is_p_foundation_set(FA2, [(5, 7)])[0]
    assert is_p_foundation_set(F2, [w(F2, x) for x in ("a", "ba", "bb")])[0]
    ok, wit = is_p_foundation_set(F2, [w(F2, "a"), w(F2, "ba")])
    assert not ok and wit == w(F2, "bb")
    assert not is_p_foundation_set(F2, [])[0]


@given(st.lists(words, min_size=1, max_size=4))
def test_foundation_free_vs_brute(f):
    ok, wit = is_p_foundation_set(F2, f)
    depth = max(len(x) for x in f)
    brute = all(any(ideals_meet(F2, s, t) for t in f) for s in F2.elements_of_degree(depth))
    assert ok == brute
    if not ok:
        assert not any(ideals_meet(F2, wit, t) for t in f)


def test_accurate_refine_examples():
    assert accurate_refine_p(FA2, [(1, 0), (0, 1)]).elements == ((0, 1),)
    out = accurate_refine_p(F2, [w(F2, x) for x in ("a", "ba", "bb", "bab")])
    assert set(out.elements) == {w(F2, x) for x in ("a", "ba", "bb")}
    assert accurate_refine_p(F1, [(0,)]).elements == ((0,),)
    assert accurate_refine_p(FA2, [(2, 1)]).elements == ((2, 1),)
    with pytest.raises(NotFoundationSetError):
        accurate_refine_p(F2, [w(F2, "a")])


@given(st.lists(words, min_size=1, max_size=5))
def test_accurate_refine_free(f):
    ok, _ = is_p_foundation_set(F2, f)
    if not ok:
        return
    out = accurate_refine_p(F2, f)
    assert out.is_foundation and out.is_accurate
    assert is_p_foundation_set(F2, out.elements)[0]
    for x, y in itertools.combinations(out.elements, 2):
        assert not ideals_meet(F2, x, y)
    # a refinement: every new element lies below an old one
    assert all(any(F2.leq(old, new) for old in f) for new in out.elements)


def test_construct_pf_examples():
    assert construct_pf(FA2, [(1, 0), (0, 1)]) == [(1, 1)]
    assert set(construct_pf(F2, [w(F2, x) for x in ("a", "ba", "bb")])) == {w(F2, x) for x in ("a", "ba", "bb")}
    assert construct_pf(F2, []) == []


def test_directed():
    assert is_directed(FA2)
    assert not is_directed(F2)
    assert is_directed(F1)


def test_literals_round_trip():
    assert NUM.parse("6") == (1, 1)
    assert NUM.format((2, 1)) == "12"
    assert NUM.parse("[1,2]") == (1, 2)
    with pytest.raises(ValueError):
        NUM.parse("5")
    assert F2.parse("1") == ()
    assert F2.format(F2.parse("abba")) == "abba"
    long = MonoidSpec(MonoidKind.FREE, ("x1", "x2"))
    assert long.parse("x1.x2.x1") == (0, 1, 0)
    assert long.format((0, 1)) == "x1.x2"
    assert FA2.format((1, 2)) == "1,2"
    for p in FA2.elements(3):
        assert FA2.parse(FA2.format(p)) == p
    with pytest.raises(ValueError):
        F2.parse("abc")


def test_enumeration():
    assert list(F2.elements_of_degree(2)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert len(list(FA2.elements(2))) == 6
    assert len(list(F2.elements(3))) == 15


def test_bad_names():
    with pytest.raises(ValueError):
        MonoidSpec(MonoidKind.FREE, ("a b",))
    with pytest.raises(ValueError):
        MonoidSpec(MonoidKind.FREE, ("a", "a"))
