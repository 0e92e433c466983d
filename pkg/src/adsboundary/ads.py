"""Algebraic dynamical systems (Z^d, P, θ) and the semigroup S = Z^d ⋊_θ P.

The group is written additively, so the product in S is

    (g, p)(h, q) = (g + θ_p(h), pq)

and the principal right ideal (g, p)S is {(g + θ_p(k), pr) : k ∈ Z^d, r ∈ P}.
Every decision here reduces to exact lattice arithmetic in Z^d.
"""

from __future__ import annotations

import enum
import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .lattice import (
    INFINITE,
    Coset,
    IntMatrix,
    Lattice,
    Vector,
    coset_intersection,
    hnf,
    index,
    intersect,
    solve,
    transversal,
)
from .monoid import (
    MonoidElement,
    MonoidKind,
    MonoidSpec,
    NotFoundationSetError,
    accurate_refine_p,
    construct_pf,
    is_p_foundation_set,
    lcm_p,
)


class InvalidSystemError(ValueError):
    pass


@dataclass(frozen=True)
class SemidirectElement:
    g: Vector
    p: MonoidElement

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(int(x) for x in self.g))
        object.__setattr__(self, "p", tuple(int(x) for x in self.p))


@dataclass(frozen=True)
class AdsSpec:
    """A system (Z^d, P, θ); ``theta`` holds one d×d matrix per generator."""

    group_rank: int
    monoid: MonoidSpec
    theta: Tuple[IntMatrix, ...]
    _cache: Dict = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        theta = self.theta
        if isinstance(theta, dict):
            missing = set(self.monoid.generator_names) - set(theta)
            extra = set(theta) - set(self.monoid.generator_names)
            if missing or extra:
                raise InvalidSystemError(
                    f"theta must name exactly the generators; missing {sorted(missing)}, "
                    f"unknown {sorted(extra)}"
                )
            theta = [theta[n] for n in self.monoid.generator_names]
        theta = tuple(m if isinstance(m, IntMatrix) else IntMatrix.from_rows(m) for m in theta)
        if len(theta) != self.monoid.generator_count:
            raise InvalidSystemError("one matrix per generator is required")
        d = self.group_rank
        for name, m in zip(self.monoid.generator_names, theta):
            if m.rows != d or (d and m.cols != d):
                raise InvalidSystemError(f"theta.{name} is not {d}x{d}")
        object.__setattr__(self, "theta", theta)

    @property
    def d(self) -> int:
        return self.group_rank

    def theta_of(self, name: str) -> IntMatrix:
        return self.theta[self.monoid.generator_names.index(name)]

    def identity(self) -> SemidirectElement:
        return SemidirectElement((0,) * self.d, self.monoid.identity())

    def element(self, g, p) -> SemidirectElement:
        g = tuple(g)
        if len(g) != self.d:
            raise ValueError(f"group part must have length {self.d}")
        return SemidirectElement(g, self.monoid.validate_element(p))

    def matrix(self, p: MonoidElement) -> IntMatrix:
        """The matrix of θ_p (θ_{pq} = θ_p θ_q)."""
        key = ("matrix", tuple(p))
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        out = IntMatrix.identity(self.d)
        if self.monoid.kind is MonoidKind.FREE_ABELIAN:
            for m, e in zip(self.theta, p):
                if e:
                    out = out @ (m ** e)
        else:
            for letter in p:
                out = out @ self.theta[letter]
        self._cache[key] = out
        return out

    def image(self, p: MonoidElement) -> Lattice:
        """θ_p(Z^d) as a lattice."""
        key = ("image", tuple(p))
        cached = self._cache.get(key)
        if cached is None:
            cached = self._cache[key] = hnf(self.matrix(p))
        return cached

    def format(self, s: SemidirectElement) -> str:
        return format_element(self, s)

    def parse(self, text: str) -> SemidirectElement:
        return parse_element(self, text)


# -- structure checks ---------------------------------------------------------


@dataclass
class ValidationReport:
    valid: bool
    violations: List[str] = field(default_factory=list)
    witness: Optional[Tuple[str, ...]] = None

    @property
    def violation(self) -> Optional[str]:
        return self.violations[0] if self.violations else None


def validate_ads(spec: AdsSpec) -> ValidationReport:
    """Check injectivity, the unit-freeness assumption, commutation and lcm images."""
    names = spec.monoid.generator_names
    violations, witness = [], None

    def fail(msg, wit):
        nonlocal witness
        violations.append(msg)
        if witness is None:
            witness = wit

    for name, m in zip(names, spec.theta):
        det = m.det()
        if det == 0:
            fail(f"theta.{name} is not injective (determinant 0)", (name,))
        elif abs(det) == 1:
            fail(
                f"theta.{name} is an automorphism (determinant {det}) but {name} is not a unit",
                (name,),
            )
    if spec.monoid.kind is MonoidKind.FREE_ABELIAN and not violations:
        gens = spec.monoid.generators()
        for i, j in itertools.combinations(range(len(names)), 2):
            a, b = spec.theta[i], spec.theta[j]
            if a @ b != b @ a:
                fail(f"theta.{names[i]} and theta.{names[j]} do not commute", (names[i], names[j]))
                continue
            join = lcm_p(spec.monoid, gens[i], gens[j])[0]
            meet = intersect(spec.image(gens[i]), spec.image(gens[j]))
            if meet != spec.image(join):
                fail(
                    f"image of theta.{names[i]} ∩ image of theta.{names[j]} is not the image "
                    f"of their lcm (index {index(meet)} vs {index(spec.image(join))})",
                    (names[i], names[j]),
                )
    return ValidationReport(not violations, violations, witness)


def require_valid(spec: AdsSpec) -> None:
    report = validate_ads(spec)
    if not report.valid:
        raise InvalidSystemError(report.violation)


# -- semigroup arithmetic -----------------------------------------------------


def apply_theta(spec: AdsSpec, p: MonoidElement, g: Sequence[int]) -> Vector:
    return spec.matrix(p).apply(g)


def multiply_s(spec: AdsSpec, a: SemidirectElement, b: SemidirectElement) -> SemidirectElement:
    tg = apply_theta(spec, a.p, b.g)
    return SemidirectElement(
        tuple(x + y for x, y in zip(a.g, tg)), spec.monoid.multiply(a.p, b.p)
    )


def left_divide_s(
    spec: AdsSpec, a: SemidirectElement, x: SemidirectElement
) -> Optional[SemidirectElement]:
    """The y with a·y = x, or None when x ∉ aS (unique by left cancellation)."""
    rest = spec.monoid.left_divide(a.p, x.p)
    if rest is None:
        return None
    diff = tuple(u - v for u, v in zip(x.g, a.g))
    k = solve(spec.matrix(a.p).columns, diff) if spec.d else ()
    if k is None:
        return None
    return SemidirectElement(k, rest)


def contains(spec: AdsSpec, a: SemidirectElement, x: SemidirectElement) -> bool:
    """x ∈ aS."""
    if not spec.monoid.leq(a.p, x.p):
        return False
    return tuple(u - v for u, v in zip(x.g, a.g)) in spec.image(a.p)


def same_ideal(spec: AdsSpec, a: SemidirectElement, b: SemidirectElement) -> bool:
    return contains(spec, a, b) and contains(spec, b, a)


def principal_coset(spec: AdsSpec, s: SemidirectElement) -> Coset:
    """g + θ_p(Z^d) for s = (g, p)."""
    return Coset(s.g, spec.image(s.p))


def intersect_principal_ideals(
    spec: AdsSpec, a: SemidirectElement, b: SemidirectElement
) -> Optional[SemidirectElement]:
    """A generator of aS ∩ bS, or None when the ideals are disjoint.

    With pP ∩ qP = rP the intersection is nonempty iff the cosets
    a.g + θ_p(Z^d) and b.g + θ_q(Z^d) meet, and then it is (w, r)S for any
    point w of the meet; the canonical point is returned.
    """
    meet = lcm_p(spec.monoid, a.p, b.p)
    if meet is None:
        return None
    r = meet[0]
    c = coset_intersection(principal_coset(spec, a), principal_coset(spec, b))
    if c is None:
        return None
    return SemidirectElement(c.offset, r)


# -- foundation sets ----------------------------------------------------------


class Classification(enum.IntEnum):
    NOT_FOUNDATION = 0
    FOUNDATION = 1
    ACCURATE = 2
    ELEMENTARY = 3


@dataclass
class PFinPartition:
    finite_part: List[SemidirectElement]
    infinite_part: List[SemidirectElement]


@dataclass
class SFoundationSet:
    elements: Tuple[SemidirectElement, ...]
    classification: Classification
    witness: Optional[SemidirectElement] = None
    uncovered: Optional[Tuple[MonoidElement, Vector]] = None
    overlap: Optional[Tuple[SemidirectElement, SemidirectElement]] = None
    pf: Tuple[MonoidElement, ...] = ()
    containers: Optional[Dict[SemidirectElement, SemidirectElement]] = None

    @property
    def is_foundation(self) -> bool:
        return self.classification >= Classification.FOUNDATION

    @property
    def is_accurate(self) -> bool:
        return self.classification >= Classification.ACCURATE

    @property
    def is_elementary(self) -> bool:
        return self.classification is Classification.ELEMENTARY


def _dedupe_elements(f) -> List[SemidirectElement]:
    seen, out = set(), []
    for s in f:
        if s not in seen:
            seen.add(s)
            out.append(s)
    return out


def partition_by_index(
    spec: AdsSpec,
    f: Sequence[SemidirectElement],
    image: Optional[Callable[[MonoidElement], Lattice]] = None,
) -> PFinPartition:
    """Split f by whether θ_p(Z^d) has finite index.

    ``image`` overrides the image map; injective matrices always give finite
    index, so the override is how rank-deficient images are exercised.
    """
    image = image or spec.image
    fin, inf = [], []
    for s in f:
        (inf if index(image(s.p)) is INFINITE else fin).append(s)
    return PFinPartition(fin, inf)


@dataclass
class NeumannResult:
    covers: bool
    reduced: List[Coset]
    witness: Optional[Vector] = None


def neumann_check(cover: Sequence[Coset], ambient_rank: Optional[int] = None, margin: int = 0):
    """Decide whether finitely many cosets cover Z^d, keeping the finite-index ones.

    A finite coset cover of a group still covers after discarding every coset
    of an infinite-index subgroup, so the decision only looks at the
    finite-index members, via the transversal of their intersection.  On
    failure the witness is a point covered by no coset at all.  With
    ``margin`` > 0 the verdict is also checked pointwise on [-margin, margin]^d.
    """
    cover = list(cover)
    if ambient_rank is None:
        if not cover:
            raise ValueError("ambient rank needed for an empty cover")
        ambient_rank = cover[0].lattice.ambient_rank
    d = ambient_rank
    reduced = [c for c in cover if c.lattice.rank == d]
    common = Lattice.full(d)
    for c in reduced:
        common = intersect(common, c.lattice)
    missed = next(
        (t for t in transversal(common) if not any(t in c for c in reduced)), None
    )
    if missed is None:
        result = NeumannResult(True, reduced)
    else:
        result = NeumannResult(False, reduced, _uncovered_point(missed, common, cover))
    if margin > 0:
        for v in itertools.product(range(-margin, margin + 1), repeat=d):
            if result.covers and not any(v in c for c in reduced):
                raise AssertionError(f"reduced cover misses {v} inside the margin box")
    return result


def _uncovered_point(start, common, cover, limit=64):
    # start + common avoids every finite-index coset, and cosets of
    # infinite-index subgroups cannot cover it, so a search terminates
    d = common.ambient_rank
    for radius in range(limit):
        for c in itertools.product(range(-radius, radius + 1), repeat=d):
            if radius and max(abs(x) for x in c) != radius:
                continue
            v = tuple(
                start[i] + sum(c[j] * common.basis[j][i] for j in range(common.rank))
                for i in range(d)
            )
            if not any(v in cos for cos in cover):
                return v
    raise RuntimeError("no uncovered point found within the search limit")


def _cover_gap(spec, members, q) -> Optional[Vector]:
    """A residue not covered by the cosets of members (h, q') with q' ≤ q, or None."""
    below = [m for m in members if spec.monoid.leq(m.p, q)]
    if not below:
        return (0,) * spec.d
    common = spec.image(below[0].p)
    for m in below[1:]:
        common = intersect(common, spec.image(m.p))
    cosets = [principal_coset(spec, m) for m in below]
    for t in transversal(common):
        if not any(t in c for c in cosets):
            return t
    return None


def _disjoint_from_all(spec, s, members) -> bool:
    return all(intersect_principal_ideals(spec, s, m) is None for m in members)


def _gap_witness(spec, members, q, residue) -> SemidirectElement:
    """An element (residue, q·w) whose ideal misses the ideal of every member."""
    span = max(spec.monoid.degree(m.p) for m in members) + 1
    for w in spec.monoid.elements(span):
        s = SemidirectElement(residue, spec.monoid.multiply(q, w))
        if _disjoint_from_all(spec, s, members):
            return s
    raise RuntimeError("uncovered residue without a disjoint witness")


def is_foundation_set_s(spec: AdsSpec, f: Sequence[SemidirectElement]) -> SFoundationSet:
    """Classify a finite subset of S as not foundation / foundation / accurate / elementary.

    f is a foundation set iff its projection P_F (see ``construct_pf``) is a
    foundation set of P and, for each q ∈ P_F, the cosets h' + θ_{q'}(Z^d)
    of members (h', q') with q' ≤ q cover Z^d.
    """
    elements = tuple(_dedupe_elements(f))
    mono = spec.monoid
    if not elements:
        return SFoundationSet(elements, Classification.NOT_FOUNDATION, witness=spec.identity())
    members = partition_by_index(spec, elements).finite_part
    pf = tuple(construct_pf(mono, [m.p for m in members]))
    ok, pwit = is_p_foundation_set(mono, pf)
    if not ok:
        witness = SemidirectElement((0,) * spec.d, pwit)
        assert _disjoint_from_all(spec, witness, elements)
        return SFoundationSet(elements, Classification.NOT_FOUNDATION, witness=witness, pf=pf)
    minimal_first = sorted(
        pf, key=lambda q: (any(o != q and mono.leq(o, q) for o in pf), mono.sort_key(q))
    )
    for q in minimal_first:
        gap = _cover_gap(spec, members, q)
        if gap is not None:
            witness = _gap_witness(spec, elements, q, gap)
            return SFoundationSet(
                elements, Classification.NOT_FOUNDATION, witness=witness, uncovered=(q, gap), pf=pf
            )

    for a, b in itertools.combinations(elements, 2):
        if intersect_principal_ideals(spec, a, b) is not None:
            return SFoundationSet(elements, Classification.FOUNDATION, overlap=(a, b), pf=pf)
    cls = Classification.ELEMENTARY if _is_elementary(spec, elements) else Classification.ACCURATE
    return SFoundationSet(elements, cls, pf=pf)


def _is_elementary(spec, elements) -> bool:
    mono = spec.monoid
    by_p: Dict[MonoidElement, List[Vector]] = {}
    for s in elements:
        by_p.setdefault(s.p, []).append(s.g)
    ps = list(by_p)
    ok, _ = is_p_foundation_set(mono, ps)
    if not ok or any(lcm_p(mono, a, b) is not None for a, b in itertools.combinations(ps, 2)):
        return False
    for p, gs in by_p.items():
        lat = spec.image(p)
        if index(lat) is INFINITE or len(gs) != index(lat):
            return False
        if len({lat.reduce(g) for g in gs}) != len(gs):
            return False
    return True


def elementary_refinement(spec: AdsSpec, f) -> SFoundationSet:
    """Refine a foundation set by an elementary one, every member lying in an input ideal.

    The refinement runs over an accurate foundation set of P whose members p
    each carry a full coset cover by the input members below p; the ideal
    generators from ``construct_pf`` always qualify, input q-parts qualify
    when they cover on their own.  Taking all of G/θ_p(G) over each such p
    then places every new element inside some input ideal.
    """
    sfs = f if isinstance(f, SFoundationSet) else is_foundation_set_s(spec, f)
    if not sfs.is_foundation:
        raise NotFoundationSetError(
            f"not a foundation set; {format_element(spec, sfs.witness)} meets none of its ideals",
            sfs.witness,
        )
    mono = spec.monoid
    members = partition_by_index(spec, sfs.elements).finite_part
    pool = sorted({m.p for m in members} | set(sfs.pf), key=mono.sort_key)
    candidates = [p for p in pool if _cover_gap(spec, members, p) is None]
    base = accurate_refine_p(mono, candidates)
    refined = [
        SemidirectElement(g, p) for p in base.elements for g in transversal(spec.image(p))
    ]
    containers = {}
    for e in refined:
        host = next((m for m in sfs.elements if contains(spec, m, e)), None)
        if host is None:
            raise AssertionError(f"{format_element(spec, e)} lies in no input ideal")
        containers[e] = host
    out = is_foundation_set_s(spec, refined)
    if not out.is_elementary:
        raise AssertionError("refinement is not elementary")
    out.containers = containers
    return out


# -- the semigroup U = {(r, x) : x ≥ 1, 0 ≤ r < x} -----------------------------


def _check_u(pairs):
    out = []
    for r, x in pairs:
        r, x = int(r), int(x)
        if x < 1 or not 0 <= r < x:
            raise ValueError(f"({r},{x}) is not in U")
        out.append((r, x))
    return out


def u_semigroup_refine(f: Sequence[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Accurate refinement {(0,x),…,(x−1,x)} of a foundation set of U, x = lcm.

    In U one has (r, x)U = {(t, xy) : t ≡ r mod x}, so a finite set is a
    foundation set exactly when its residues r_i mod x_i cover Z/lcm.
    """
    pairs = _check_u(f)
    if not pairs:
        raise NotFoundationSetError("the empty set is not a foundation set", (0, 1))
    x = math.lcm(*(xi for _, xi in pairs))
    for t in range(x):
        if not any(t % xi == ri for ri, xi in pairs):
            raise NotFoundationSetError(f"residue {t} mod {x} is not covered", (t, x))
    out = [(t, x) for t in range(x)]
    for t, _ in out:
        # (t, x)U ⊆ (r_i, x_i)U iff x_i | x and t ≡ r_i mod x_i
        if not any(x % xi == 0 and t % xi == ri for ri, xi in pairs):
            raise AssertionError(f"({t},{x}) lies in no input ideal")
    return out


def u_contains(big: Tuple[int, int], small: Tuple[int, int]) -> bool:
    """Is small·U ⊆ big·U?"""
    (r, x), (t, y) = big, small
    return y % x == 0 and t % x == r


# -- element literals ---------------------------------------------------------

_ELEMENT = re.compile(r"\(\s*([^;()]*?)\s*;\s*([^()]*?)\s*\)")


def format_element(spec: AdsSpec, s: SemidirectElement) -> str:
    return f"({','.join(str(x) for x in s.g)};{spec.monoid.format(s.p)})"


def parse_element(spec: AdsSpec, text: str) -> SemidirectElement:
    items = parse_elements(spec, text)
    if len(items) != 1:
        raise ValueError(f"expected one element, got {len(items)} in {text!r}")
    return items[0]


def parse_elements(spec: AdsSpec, text: str) -> List[SemidirectElement]:
    """Parse literals of the form (g1,…,gd ; p), separated by whitespace."""
    out, pos = [], 0
    text = text.strip()
    for m in _ELEMENT.finditer(text):
        if text[pos : m.start()].strip(" ,"):
            raise ValueError(f"unexpected text {text[pos:m.start()]!r} at column {pos + 1}")
        pos = m.end()
        gtext, ptext = m.group(1), m.group(2)
        try:
            g = tuple(int(x) for x in gtext.split(",")) if gtext.strip() else ()
        except ValueError:
            raise ValueError(f"bad group part {gtext!r} at column {m.start() + 1}") from None
        out.append(spec.element(g, spec.monoid.parse(ptext)))
    if text[pos:].strip(" ,"):
        raise ValueError(f"unexpected text {text[pos:]!r} at column {pos + 1}")
    return out
