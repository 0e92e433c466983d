"""The left inverse hull of S = Z^d ⋊ P, in normal form.

Nonzero elements are pairs [s, t] standing for the partial bijection
t x ↦ s x of S.  [s, t] = [s k, t k] for units k = (x, 1), and we normalize
by moving the Z^d part of t to its canonical residue modulo θ_{t.p}(Z^d).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .ads import (
    AdsSpec,
    SemidirectElement,
    contains,
    format_element,
    intersect_principal_ideals,
    left_divide_s,
    multiply_s,
)
from .lattice import Coset, Lattice, image, solve, transversal


@dataclass(frozen=True)
class InvElement:
    """[s, t], or the zero element when both parts are None."""

    s: Optional[SemidirectElement]
    t: Optional[SemidirectElement]

    @property
    def is_zero(self) -> bool:
        return self.s is None

    def format(self, spec: AdsSpec) -> str:
        if self.is_zero:
            return "0"
        return f"[{format_element(spec, self.s)}, {format_element(spec, self.t)}]"


ZERO = InvElement(None, None)


def normalize(spec: AdsSpec, s: SemidirectElement, t: SemidirectElement) -> InvElement:
    c = spec.image(t.p).reduce(t.g)
    shift = tuple(a - b for a, b in zip(t.g, c))
    x = solve(spec.matrix(t.p).columns, shift) if spec.d else ()
    sg = tuple(a - b for a, b in zip(s.g, spec.matrix(s.p).apply(x)))
    return InvElement(SemidirectElement(sg, s.p), SemidirectElement(c, t.p))


def pair(spec: AdsSpec, s: SemidirectElement, t: SemidirectElement) -> InvElement:
    return normalize(spec, s, t)


def identity_inv(spec: AdsSpec) -> InvElement:
    e = spec.identity()
    return InvElement(e, e)


def star(spec: AdsSpec, a: InvElement) -> InvElement:
    if a.is_zero:
        return ZERO
    return normalize(spec, a.t, a.s)


def mul_inv(spec: AdsSpec, a: InvElement, b: InvElement) -> InvElement:
    """[s, t][u, v] = [s t', v u'] where tS ∩ uS = rS, r = t t' = u u'."""
    if a.is_zero or b.is_zero:
        return ZERO
    r = intersect_principal_ideals(spec, a.t, b.s)
    if r is None:
        return ZERO
    t1 = left_divide_s(spec, a.t, r)
    u1 = left_divide_s(spec, b.s, r)
    return normalize(spec, multiply_s(spec, a.s, t1), multiply_s(spec, b.t, u1))


def apply_partial(spec: AdsSpec, a: InvElement, x: SemidirectElement) -> Optional[SemidirectElement]:
    """a(x), or None when x lies outside the domain tS."""
    if a.is_zero:
        return None
    y = left_divide_s(spec, a.t, x)
    return None if y is None else multiply_s(spec, a.s, y)


@dataclass(frozen=True)
class IdealProjection:
    """The idempotent E(s) = [s, s], i.e. the identity on sS; None means 0."""

    generator: Optional[SemidirectElement]

    @classmethod
    def of(cls, spec: AdsSpec, s: Optional[SemidirectElement]) -> "IdealProjection":
        if s is None:
            return cls(None)
        return cls(SemidirectElement(spec.image(s.p).reduce(s.g), s.p))

    @classmethod
    def one(cls, spec: AdsSpec) -> "IdealProjection":
        return cls(spec.identity())

    @classmethod
    def zero(cls) -> "IdealProjection":
        return cls(None)

    @property
    def is_zero(self) -> bool:
        return self.generator is None

    def is_one(self, spec: AdsSpec) -> bool:
        return self.generator is not None and spec.monoid.is_identity(self.generator.p)

    def meet(self, spec: AdsSpec, other: "IdealProjection") -> "IdealProjection":
        if self.is_zero or other.is_zero:
            return IdealProjection(None)
        return IdealProjection.of(spec, intersect_principal_ideals(spec, self.generator, other.generator))

    def leq(self, spec: AdsSpec, other: "IdealProjection") -> bool:
        if self.is_zero:
            return True
        if other.is_zero:
            return False
        return contains(spec, other.generator, self.generator)

    def as_inv(self, spec: AdsSpec) -> InvElement:
        if self.is_zero:
            return ZERO
        return InvElement(self.generator, self.generator)


def projection_of(spec: AdsSpec, a: InvElement) -> Optional[IdealProjection]:
    """The projection e with a = e, or None when a is not idempotent."""
    if a.is_zero:
        return IdealProjection(None)
    if a.s != a.t:
        return None
    return IdealProjection.of(spec, a.s)


# -- core ----------------------------------------------------------------------


@dataclass
class CoreDescription:
    """The core subsemigroup: elements (g, p) whose ideal meets every other ideal.

    For our monoids P has trivial units and every θ_p with p ≠ 1 has index
    ≥ 2, so (g, p)S already misses (g + c, p)S for nonzero residues c; the
    core is exactly the unit group Z^d × {1}.
    """

    spec: AdsSpec
    description: str = "units Z^d × {1}"

    def is_core(self, s: SemidirectElement) -> bool:
        return self.spec.monoid.is_identity(s.p)

    def non_core_witness(self, s: SemidirectElement) -> Optional[SemidirectElement]:
        """An element whose ideal is disjoint from sS, or None for core elements."""
        if self.is_core(s):
            return None
        reps = transversal(self.spec.image(s.p))
        c = next(r for r in reps if any(r))
        w = SemidirectElement(tuple(a + b for a, b in zip(s.g, c)), s.p)
        assert intersect_principal_ideals(self.spec, s, w) is None
        return w


def core_units(spec: AdsSpec) -> CoreDescription:
    return CoreDescription(spec)


# -- the groups G_{p,h,q} -----------------------------------------------------


@dataclass(frozen=True)
class CosetSet:
    """A coset, or None for the empty set.

    ``certified_to_depth`` is None when the answer is exact; otherwise the
    set was computed from products of length at most that depth.
    """

    coset: Optional[Coset]
    certified_to_depth: Optional[int] = None

    @property
    def certified(self) -> bool:
        return self.certified_to_depth is None

    def __contains__(self, g) -> bool:
        return self.coset is not None and g in self.coset


def compute_gphq(
    spec: AdsSpec, p, h, q, depth: int = 4, certify: bool = True
) -> CosetSet:
    """{g : (g, p)(h, q)r S ∩ (h, q)r S ≠ ∅ for all r ∈ S}, for p = 1.

    With p the identity the condition on g reduces to g ∈ θ_{qr}(Z^d) for
    every r ∈ P, so the set is θ_q(⋂_r θ_r(Z^d)).  With ``certify`` the
    limit lattice is computed exactly; otherwise products of length
    ≤ ``depth`` are used.
    """
    from .certify import MinimalityKind, check_minimality, truncated_cores

    p = spec.monoid.validate_element(p)
    q = spec.monoid.validate_element(q)
    if not spec.monoid.is_identity(p):
        raise ValueError("only p = 1 is supported; G_{p,h,q} for p ≠ 1 is not computed")
    mq = spec.matrix(q)
    zero = (0,) * spec.d
    if certify:
        verdict = check_minimality(spec, depth)
        if verdict.kind is MinimalityKind.MINIMAL:
            return CosetSet(Coset(zero, image(mq, Lattice.zero(spec.d))), None)
        if verdict.kind is MinimalityKind.NOT_MINIMAL:
            return CosetSet(Coset(zero, image(mq, verdict.witness)), None)
    lat = truncated_cores(spec, depth)[-1]
    return CosetSet(Coset(zero, image(mq, lat)), depth)


# -- weak fixing --------------------------------------------------------------


class WeakFix(enum.Enum):
    NO = "no"
    YES_CERTIFIED = "yes-certified"
    YES_UP_TO_DEPTH = "yes-up-to-depth"


@dataclass
class WeakFixVerdict:
    verdict: WeakFix
    witness: Optional[SemidirectElement] = None
    depth: Optional[int] = None
    detail: str = ""


def _meets_after(spec, a: InvElement, base: SemidirectElement, r: SemidirectElement) -> bool:
    """Does a(base·r)S meet (base·r)S?"""
    x = multiply_s(spec, base, r)
    y = apply_partial(spec, a, x)
    return intersect_principal_ideals(spec, x, y) is not None


def is_weakly_fixed(spec: AdsSpec, a: InvElement, e: IdealProjection, depth: int = 4, window: int = 2) -> WeakFixVerdict:
    """Does a weakly fix e, i.e. af(a*) f ≠ 0 for every nonzero f ≤ e?

    Requires e ≤ a*a.  Writing e = E(x) with x ∈ tS, this holds iff
    a(x r)S ∩ (x r)S ≠ ∅ for every r ∈ S.  When a is a unit the answer is
    decided exactly from the limit lattice; otherwise r ranges over a ball
    and a positive answer is only up to that depth.
    """
    if e.is_zero:
        return WeakFixVerdict(WeakFix.YES_CERTIFIED, detail="no nonzero projection below 0")
    if a.is_zero:
        raise ValueError("0 has domain 0; e ≤ a*a fails")
    if not e.leq(spec, IdealProjection.of(spec, a.t)):
        raise ValueError("precondition e ≤ a*a fails")
    mon = spec.monoid
    base = e.generator

    if mon.is_identity(a.s.p) and mon.is_identity(a.t.p):
        g = tuple(u - v for u, v in zip(a.s.g, a.t.g))
        gset = compute_gphq(spec, mon.identity(), base.g, base.p, depth, certify=True)
        if g in gset:
            if gset.certified:
                return WeakFixVerdict(WeakFix.YES_CERTIFIED, detail="translation lies in θ_q(limit lattice)")
            return WeakFixVerdict(WeakFix.YES_UP_TO_DEPTH, depth=depth)
        # g misses θ_q(Λ), so some θ_{q r}(Z^d) misses it; find the shortest r
        n = 0
        while True:
            for r in mon.elements_of_degree(n):
                if g not in spec.image(mon.multiply(base.p, r)):
                    w = SemidirectElement((0,) * spec.d, r)
                    assert not _meets_after(spec, a, base, w)
                    return WeakFixVerdict(WeakFix.NO, witness=w, detail="translation leaves θ_{qr}(Z^d)")
            n += 1

    from .oracle import enumerate_ball

    for r in enumerate_ball(spec, depth, window):
        if not _meets_after(spec, a, base, r):
            return WeakFixVerdict(WeakFix.NO, witness=r)
    return WeakFixVerdict(WeakFix.YES_UP_TO_DEPTH, depth=depth)
