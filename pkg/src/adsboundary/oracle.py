"""Brute-force ground truth on finite balls of S.

Nothing here decides anything; it enumerates and compares.  Membership in
principal ideals is tested through its own route (naive monoid division and
a rational inverse of the matrix) so that it can catch errors in the lattice
code rather than repeat them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .ads import AdsSpec, SemidirectElement, intersect_principal_ideals
from .lattice import Coset
from .monoid import MonoidKind

DEFAULT_DEPTH = 3
DEFAULT_CAP = 10**6


class BallTooLargeError(ValueError):
    pass


@dataclass
class Ball:
    """(g, p) with |p| ≤ depth and every coordinate of g in [-window, window]."""

    depth: int
    window: int
    elements: List[SemidirectElement] = field(default_factory=list)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def default_window(spec: AdsSpec) -> int:
    dets = [abs(m.det()) for m in spec.theta] or [1]
    return 2 * max(dets) ** 2


def enumerate_ball(spec: AdsSpec, depth: int = DEFAULT_DEPTH, window: Optional[int] = None, cap: int = DEFAULT_CAP) -> Ball:
    if window is None:
        window = default_window(spec)
    if depth < 0 or window < 0:
        raise ValueError("depth and window must be non-negative")
    ps = list(spec.monoid.elements(depth))
    size = len(ps) * (2 * window + 1) ** spec.d
    if size > cap:
        raise BallTooLargeError(f"ball of {size} elements exceeds the cap of {cap}")
    gs = list(itertools.product(range(-window, window + 1), repeat=spec.d))
    return Ball(depth, window, [SemidirectElement(g, p) for p in ps for g in gs])


def _naive_matrix(spec: AdsSpec, p) -> List[List[int]]:
    d = spec.d
    out = [[int(i == j) for j in range(d)] for i in range(d)]
    mats = [m.tolist() for m in spec.theta]
    if spec.monoid.kind is MonoidKind.FREE:
        word = list(p)
    else:
        word = [i for i, e in enumerate(p) for _ in range(e)]
    for i in word:
        m = mats[i]
        out = [[sum(out[r][k] * m[k][c] for k in range(d)) for c in range(d)] for r in range(d)]
    return out


def _rational_inverse(m: List[List[int]]) -> List[List[Fraction]]:
    """Gauss-Jordan inverse over Q."""
    d = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(d)] for i, row in enumerate(m)]
    for c in range(d):
        piv = next(r for r in range(c, d) if a[r][c] != 0)
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(d):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[d:] for row in a]


def _naive_quotient(spec: AdsSpec, p, q):
    """w with p w = q in P, or None, by direct comparison."""
    if spec.monoid.kind is MonoidKind.FREE:
        return q[len(p):] if q[: len(p)] == p else None
    diff = tuple(b - a for a, b in zip(p, q))
    return diff if all(x >= 0 for x in diff) else None


class _Divider:
    """Caches the rational inverses used to test x ∈ aS."""

    def __init__(self, spec: AdsSpec):
        self.spec = spec
        self._inv: Dict[tuple, List[List[Fraction]]] = {}

    def inverse(self, p):
        if p not in self._inv:
            self._inv[p] = _rational_inverse(_naive_matrix(self.spec, p))
        return self._inv[p]

    def contains(self, a: SemidirectElement, x: SemidirectElement) -> bool:
        if _naive_quotient(self.spec, a.p, x.p) is None:
            return False
        diff = [u - v for u, v in zip(x.g, a.g)]
        inv = self.inverse(a.p)
        return all(sum(r * v for r, v in zip(row, diff)).denominator == 1 for row in inv)


def oracle_ideal_points(spec: AdsSpec, a: Optional[SemidirectElement], ball: Ball, _divider=None) -> List[SemidirectElement]:
    """All x in the ball lying in aS (empty for a = None)."""
    if a is None:
        return []
    div = _divider or _Divider(spec)
    return [x for x in ball if div.contains(a, x)]


def oracle_foundation_check(spec: AdsSpec, f: Sequence[SemidirectElement], ball: Ball) -> Tuple[bool, Optional[SemidirectElement]]:
    """Does every ball element's ideal meet some member's ideal?  Returns the first failure."""
    f = list(f)
    for s in ball:
        if not any(intersect_principal_ideals(spec, s, t) is not None for t in f):
            return False, s
    return True, None


def oracle_disjoint(spec: AdsSpec, f: Sequence[SemidirectElement], ball: Ball) -> Tuple[bool, Optional[Tuple]]:
    """Are the ideals of distinct members disjoint on the ball?  Returns a shared point."""
    div = _Divider(spec)
    for x in ball:
        owners = [t for t in f if div.contains(t, x)]
        if len(owners) > 1:
            return False, (x, owners[0], owners[1])
    return True, None


def oracle_point_coverage(cover: Sequence[Coset], ambient_rank: int, window: int) -> Tuple[bool, Optional[tuple]]:
    """Does every point of [-window, window]^d lie in some coset?"""
    cover = list(cover)
    for v in itertools.product(range(-window, window + 1), repeat=ambient_rank):
        if not any(v in c for c in cover):
            return False, v
    return True, None


@dataclass
class Discrepancy:
    kind: str
    detail: str


def compare_intersections(
    spec: AdsSpec, pairs: Sequence[Tuple[SemidirectElement, SemidirectElement]], ball: Ball
) -> List[Discrepancy]:
    """Check aS ∩ bS against the computed generator, pointwise on the ball."""
    div = _Divider(spec)
    out = []
    for a, b in pairs:
        left = set(oracle_ideal_points(spec, a, ball, div)) & set(oracle_ideal_points(spec, b, ball, div))
        r = intersect_principal_ideals(spec, a, b)
        right = set(oracle_ideal_points(spec, r, ball, div))
        if left != right:
            extra = sorted(left ^ right, key=lambda s: (spec.monoid.sort_key(s.p), s.g))[:3]
            out.append(Discrepancy("intersection", f"{spec.format(a)} ∩ {spec.format(b)}: differ at {[spec.format(s) for s in extra]}"))
    return out


def oracle_partition_check(spec: AdsSpec, f: Sequence[SemidirectElement], ball: Ball) -> Tuple[bool, Optional[SemidirectElement]]:
    """Is every ball point, pushed below all members' P-parts, in exactly one member ideal?

    x is replaced by x·(0, w) where w is a^L (free, L the longest member) or
    the join of the members' exponents (free abelian), so that its P-part is
    comparable with the P-parts of the set.
    """
    f = list(f)
    mono = spec.monoid
    if mono.kind is MonoidKind.FREE:
        w = (0,) * max((len(s.p) for s in f), default=0)
    else:
        w = tuple(max(col) for col in zip(*(s.p for s in f))) if f else mono.identity()
    div = _Divider(spec)
    for x in ball:
        # x·(0, w) = (x.g, x.p w)
        y = SemidirectElement(x.g, mono.multiply(x.p, w))
        if sum(1 for t in f if div.contains(t, y)) != 1:
            return False, x
    return True, None

