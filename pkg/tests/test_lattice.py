import itertools

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from adsboundary.lattice import (
    INFINITE,
    Coset,
    IntMatrix,
    Lattice,
    coset_intersection,
    coset_membership,
    hnf,
    image,
    index,
    integer_kernel,
    intersect,
    solve,
    transversal,
)

BOX = 6


def box(d, r=BOX):
    return itertools.product(range(-r, r + 1), repeat=d)


def brute_members(vectors, d, coeff=4, r=BOX):
    """Points of the span inside the box, by enumerating small combinations."""
    out = set()
    for c in itertools.product(range(-coeff, coeff + 1), repeat=len(vectors)):
        v = tuple(sum(ci * vec[i] for ci, vec in zip(c, vectors)) for i in range(d))
        if all(abs(x) <= r for x in v):
            out.add(v)
    return out


vec2 = st.tuples(st.integers(-4, 4), st.integers(-4, 4))
gens2 = st.lists(vec2, min_size=1, max_size=3)
full2 = st.tuples(vec2, vec2).filter(lambda p: p[0][0] * p[1][1] - p[0][1] * p[1][0] != 0)


def test_hnf_examples():
    assert hnf(IntMatrix.from_columns([(2, 0), (0, 1)], 2)).basis == ((2, 0), (0, 1))
    lat = hnf(IntMatrix.from_columns([(2, 2), (0, 2), (2, 0)], 2))
    assert index(lat) == 4
    assert {v for v in box(2, 4) if v in lat} == {v for v in box(2, 4) if v[0] % 2 == 0 and v[1] % 2 == 0}
    assert hnf(IntMatrix.identity(3)) == Lattice.full(3)


@given(full2, st.integers(-3, 3), st.booleans())
def test_hnf_invariant_under_column_operations(cols, k, swap):
    a, b = cols
    lat = Lattice.span([a, b], 2)
    b2 = tuple(x + k * y for x, y in zip(b, a))
    other = [b2, a] if swap else [a, b2]
    assert Lattice.span(other, 2) == lat
    assert Lattice.span([tuple(-x for x in a), b], 2) == lat


@given(full2)
def test_index_is_abs_det(cols):
    m = IntMatrix.from_columns(list(cols), 2)
    assert index(hnf(m)) == abs(m.det())


@given(gens2)
def test_membership_matches_span(vectors):
    lat = Lattice.span(vectors, 2)
    inside = brute_members(vectors, 2, coeff=6, r=3)
    for v in box(2, 3):
        if v in inside:
            assert v in lat
    for v in lat.basis:
        assert v in lat


def test_index_examples():
    assert index(hnf(IntMatrix.from_rows([[2, 0], [0, 3]]))) == 6
    assert index(Lattice.span([(1, 1)], 2)) is INFINITE
    assert index(Lattice.span([(2,)], 1)) == 2


@given(full2, full2)
@settings(max_examples=60)
def test_intersect_vs_brute(c1, c2):
    a, b = Lattice.span(c1, 2), Lattice.span(c2, 2)
    ab = intersect(a, b)
    assert ab == intersect(b, a)
    for v in box(2, 5):
        assert (v in ab) == (v in a and v in b)
    assert index(ab) % index(a) == 0 and index(ab) % index(b) == 0


@given(full2, full2, full2)
@settings(max_examples=30)
def test_intersect_associative(c1, c2, c3):
    a, b, c = (Lattice.span(x, 2) for x in (c1, c2, c3))
    assert intersect(intersect(a, b), c) == intersect(a, intersect(b, c))


def test_intersect_examples():
    assert intersect(Lattice.span([(2,)], 1), Lattice.span([(3,)], 1)) == Lattice.span([(6,)], 1)
    a = hnf(IntMatrix.from_rows([[2, 0], [0, 1]]))
    b = hnf(IntMatrix.from_rows([[1, 0], [0, 3]]))
    assert intersect(a, b) == hnf(IntMatrix.from_rows([[2, 0], [0, 3]]))
    assert intersect(a, a) == a


@given(full2)
def test_transversal_is_complete_and_irredundant(cols):
    lat = Lattice.span(cols, 2)
    reps = transversal(lat)
    assert len(reps) == index(lat)
    assert len({lat.reduce(r) for r in reps}) == len(reps)
    for v in box(2, 3):
        assert sum(1 for r in reps if coset_membership(v, Coset(r, lat))) == 1


def test_transversal_examples():
    assert transversal(Lattice.span([(2,)], 1)) == [(0,), (1,)]
    assert transversal(Lattice.full(2)) == [(0, 0)]
    assert len(transversal(hnf(IntMatrix.from_rows([[2, 1], [0, 3]])))) == 6
    with pytest.raises(ValueError):
        transversal(Lattice.span([(1, 0)], 2))


def test_coset_membership_examples():
    assert coset_membership((4,), Coset((1,), Lattice.span([(3,)], 1)))
    assert not coset_membership((3,), Coset((0,), Lattice.span([(2,)], 1)))
    assert coset_membership((1, 1), Coset((1, 0), hnf(IntMatrix.from_rows([[2, 0], [0, 1]]))))


def test_coset_intersection_examples():
    two, three = Lattice.span([(2,)], 1), Lattice.span([(3,)], 1)
    assert coset_intersection(Coset((0,), two), Coset((1,), three)) == Coset((4,), Lattice.span([(6,)], 1))
    assert coset_intersection(Coset((0,), two), Coset((1,), two)) is None
    c = Coset((1,), three)
    assert coset_intersection(c, c) == c


@given(full2, vec2, full2, vec2)
@settings(max_examples=60)
def test_coset_intersection_vs_brute(c1, o1, c2, o2):
    a, b = Coset(o1, Lattice.span(c1, 2)), Coset(o2, Lattice.span(c2, 2))
    meet = coset_intersection(a, b)
    pts = [v for v in box(2, 8) if v in a and v in b]
    if meet is None:
        assert not pts
    else:
        assert all(v in meet for v in pts)
        assert all((v in a and v in b) for v in box(2, 4) if v in meet)


@given(st.lists(st.tuples(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3)), min_size=1, max_size=4))
def test_integer_kernel(columns):
    kernel = integer_kernel(columns, 3)
    m = sympy.Matrix([list(c) for c in columns]).T
    assert len(kernel) == len(columns) - m.rank()
    for k in kernel:
        assert all(sum(k[j] * columns[j][i] for j in range(len(columns))) == 0 for i in range(3))


@given(full2, vec2)
def test_solve(cols, target):
    x = solve(list(cols), target)
    lat = Lattice.span(cols, 2)
    if target in lat:
        assert x is not None
        assert tuple(x[0] * cols[0][i] + x[1] * cols[1][i] for i in range(2)) == target
    else:
        assert x is None


@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3))
def test_det_matches_sympy(rows):
    assert IntMatrix.from_rows(rows).det() == sympy.Matrix(rows).det()


def test_image():
    m = IntMatrix.from_rows([[2, 0], [0, 1]])
    assert image(m, Lattice.span([(0, 1)], 2)) == Lattice.span([(0, 1)], 2)
    assert index(image(m, Lattice.full(2))) == 2
