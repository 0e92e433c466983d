import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adsboundary.ads import (
    AdsSpec,
    Classification,
    InvalidSystemError,
    SemidirectElement,
    apply_theta,
    contains,
    elementary_refinement,
    intersect_principal_ideals,
    is_foundation_set_s,
    left_divide_s,
    multiply_s,
    neumann_check,
    parse_elements,
    partition_by_index,
    require_valid,
    u_contains,
    u_semigroup_refine,
    validate_ads,
)
from adsboundary.lattice import Coset, Lattice
from adsboundary.monoid import MonoidKind, MonoidSpec, NotFoundationSetError

from randsys import random_element, random_systems


def E(spec, text):
    return parse_elements(spec, text)


def test_validate_examples(z23):
    assert validate_ads(z23).valid
    bad = AdsSpec(1, MonoidSpec(MonoidKind.FREE_ABELIAN, ("a", "b")), {"a": [[2]], "b": [[2]]})
    rep = validate_ads(bad)
    assert not rep.valid and "lcm" in rep.violation
    auto = AdsSpec(1, MonoidSpec(MonoidKind.FREE_ABELIAN, ("a",)), {"a": [[-1]]})
    assert "automorphism" in validate_ads(auto).violation
    zero = AdsSpec(2, MonoidSpec(MonoidKind.FREE, ("a",)), {"a": [[1, 1], [1, 1]]})
    assert "not injective" in validate_ads(zero).violation
    with pytest.raises(InvalidSystemError):
        require_valid(zero)
    noncomm = AdsSpec(2, MonoidSpec(MonoidKind.FREE_ABELIAN, ("a", "b")), {"a": [[2, 1], [0, 1]], "b": [[1, 0], [0, 2]]})
    assert "commute" in validate_ads(noncomm).violation


def test_spec_shape_errors():
    with pytest.raises(InvalidSystemError):
        AdsSpec(1, MonoidSpec(MonoidKind.FREE, ("a",)), {"b": [[2]]})
    with pytest.raises(InvalidSystemError):
        AdsSpec(2, MonoidSpec(MonoidKind.FREE, ("a",)), {"a": [[2]]})


def test_apply_theta(z23):
    assert apply_theta(z23, (1, 1), (1,)) == (6,)
    assert apply_theta(z23, (0, 0), (5,)) == (5,)
    f = AdsSpec(2, MonoidSpec(MonoidKind.FREE, ("a", "b")), {"a": [[2, 1], [0, 1]], "b": [[1, 0], [1, 3]]})
    v = (1, 1)
    assert apply_theta(f, (0, 1), v) != apply_theta(f, (1, 0), v)
    # word order: θ_{ab} = θ_a θ_b
    assert apply_theta(f, (0, 1), v) == apply_theta(f, (0,), apply_theta(f, (1,), v))


def test_intersection_examples(z2, z23):
    a, b = E(z2, "(0;2) (1;2)")
    assert intersect_principal_ideals(z2, a, b) is None
    a, b = E(z23, "(0;2) (1;3)")
    assert intersect_principal_ideals(z23, a, b) == SemidirectElement((4,), (1, 1))
    assert intersect_principal_ideals(z23, a, a) == a


SYSTEMS = random_systems(11, 12)


@pytest.mark.parametrize("spec", SYSTEMS, ids=lambda s: f"d{s.d}{s.monoid.kind.value}{s.monoid.generator_count}")
def test_semigroup_arithmetic(spec):
    rng = random.Random(5)
    for _ in range(40):
        a, b, c = (random_element(rng, spec, 2, 3) for _ in range(3))
        assert multiply_s(spec, multiply_s(spec, a, b), c) == multiply_s(spec, a, multiply_s(spec, b, c))
        ab = multiply_s(spec, a, b)
        assert left_divide_s(spec, a, ab) == b
        assert contains(spec, a, ab)
        r = intersect_principal_ideals(spec, a, b)
        if r is not None:
            assert contains(spec, a, r) and contains(spec, b, r)
            # every common multiple of a and b we can produce lies in rS
            for x in (multiply_s(spec, r, c), r):
                assert contains(spec, a, x) and contains(spec, b, x)


def test_partition_by_index(z2):
    f = E(z2, "(0;2) (1;4)")
    part = partition_by_index(z2, f)
    assert part.finite_part == f and part.infinite_part == []
    empty = partition_by_index(z2, [])
    assert empty.finite_part == [] and empty.infinite_part == []
    # a synthetic rank-deficient image
    synth = {(1,): Lattice.zero(1)}
    part = partition_by_index(z2, f, image=lambda p: synth.get(p, z2.image(p)))
    assert part.finite_part == [f[1]] and part.infinite_part == [f[0]]


def test_foundation_examples(z2):
    assert is_foundation_set_s(z2, E(z2, "(0;2) (1;2)")).classification is Classification.ELEMENTARY
    acc = is_foundation_set_s(z2, E(z2, "(0;2) (1;4) (3;4)"))
    assert acc.classification is Classification.ACCURATE
    bad = is_foundation_set_s(z2, E(z2, "(0;2) (1;4)"))
    assert bad.classification is Classification.NOT_FOUNDATION
    assert bad.uncovered == ((2,), (3,))
    assert bad.witness.g == (3,) and z2.monoid.leq((2,), bad.witness.p)
    over = is_foundation_set_s(z2, E(z2, "(0;2) (1;2) (0;4)"))
    assert over.classification is Classification.FOUNDATION and over.overlap is not None
    assert is_foundation_set_s(z2, []).classification is Classification.NOT_FOUNDATION


def test_foundation_free(free2):
    f = E(free2, "(0;a) (1;a) (0;b) (1;b) (2;b)")
    assert is_foundation_set_s(free2, f).is_elementary
    g = E(free2, "(0;a) (1;a)")
    res = is_foundation_set_s(free2, g)
    assert not res.is_foundation
    assert all(intersect_principal_ideals(free2, res.witness, t) is None for t in g)


def test_refinement_examples(z2, z23):
    out = elementary_refinement(z2, E(z2, "(0;2) (1;4) (3;4)"))
    assert out.is_elementary
    assert set(out.elements) == set(E(z2, "(0;4) (1;4) (2;4) (3;4)"))
    out = elementary_refinement(z2, E(z2, "(0;1)"))
    assert out.elements == tuple(E(z2, "(0;1)"))
    out = elementary_refinement(z23, E(z23, "(0;2) (1;2) (0;3)"))
    assert set(out.elements) == set(E(z23, "(0;2) (1;2)"))
    with pytest.raises(NotFoundationSetError):
        elementary_refinement(z2, E(z2, "(0;2) (1;4)"))


def test_u_semigroup():
    out = u_semigroup_refine([(0, 2), (1, 2), (2, 3)])
    assert out == [(t, 6) for t in range(6)]
    assert all(any(u_contains(big, e) for big in [(0, 2), (1, 2), (2, 3)]) for e in out)
    with pytest.raises(NotFoundationSetError) as exc:
        u_semigroup_refine([(1, 2), (0, 3)])
    assert exc.value.witness == (2, 6)
    assert u_semigroup_refine([(0, 1)]) == [(0, 1)]
    with pytest.raises(ValueError):
        u_semigroup_refine([(3, 2)])


def test_neumann_examples():
    two = Lattice.span([(2,)], 1)
    res = neumann_check([Coset((0,), two), Coset((1,), two), Coset((5,), Lattice.zero(1))])
    assert res.covers and res.reduced == [Coset((0,), two), Coset((1,), two)]
    res = neumann_check([Coset((0,), two), Coset((1,), Lattice.span([(4,)], 1))])
    assert not res.covers and res.witness == (3,)
    assert neumann_check([Coset((0,), Lattice.full(1))]).covers


@given(st.integers(1, 4), st.integers(1, 4), st.lists(st.integers(-5, 5), max_size=3))
@settings(max_examples=50)
def test_neumann_witness_is_uncovered(m1, m2, points):
    cover = [Coset((0,), Lattice.span([(m1,)], 1)), Coset((1,), Lattice.span([(m2,)], 1))]
    cover += [Coset((p,), Lattice.zero(1)) for p in points]
    res = neumann_check(cover, margin=6)
    if not res.covers:
        assert not any(res.witness in c for c in cover)


def test_parse_diagnostics(z2):
    with pytest.raises(ValueError, match="column"):
        parse_elements(z2, "(0;2) junk")
    with pytest.raises(ValueError):
        parse_elements(z2, "(x;2)")
    with pytest.raises(ValueError):
        parse_elements(z2, "(0,1;2)")
