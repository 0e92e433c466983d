"""The acting monoid P: free abelian or free monoids on named generators.

Elements are plain tuples.  For a free abelian monoid an element is its
exponent vector; for a free monoid it is the word, spelled as a tuple of
generator indices.  Both kinds are right cancellative with trivial unit
group, and both are right LCM:

* free abelian: pP ∩ qP = (p ∨ q)P with the componentwise maximum;
* free: pP ∩ qP is qP when p is a prefix of q (and symmetrically), and is
  empty for incomparable words.
"""

from __future__ import annotations

import enum
import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence, Tuple

MonoidElement = Tuple[int, ...]


class MonoidKind(enum.Enum):
    FREE_ABELIAN = "free-abelian"
    FREE = "free"


class NotFoundationSetError(ValueError):
    """Raised when an operation needs a foundation set and did not get one."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$|^[0-9]+$")


@dataclass(frozen=True)
class MonoidSpec:
    kind: MonoidKind
    generator_names: Tuple[str, ...]

    def __post_init__(self):
        names = tuple(str(n) for n in self.generator_names)
        object.__setattr__(self, "generator_names", names)
        if not names:
            raise ValueError("a monoid needs at least one generator")
        if len(set(names)) != len(names):
            raise ValueError(f"generator names are not distinct: {names}")
        for n in names:
            if not _NAME.match(n):
                raise ValueError(f"bad generator name {n!r}")
        if self.kind is MonoidKind.FREE and any(n.isdigit() for n in names):
            raise ValueError("free monoid generators must be identifiers")

    @property
    def generator_count(self) -> int:
        return len(self.generator_names)

    @property
    def numeric(self) -> bool:
        """Free abelian on pairwise coprime integer names such as 2, 3.

        Elements are then written by their value (6 for 2·3), which is the
        multiplicative notation for submonoids of N^×.
        """
        if self.kind is not MonoidKind.FREE_ABELIAN:
            return False
        if not all(n.isdigit() for n in self.generator_names):
            return False
        vals = [int(n) for n in self.generator_names]
        if any(v < 2 for v in vals):
            return False
        return all(math.gcd(a, b) == 1 for a, b in itertools.combinations(vals, 2))

    # -- arithmetic -------------------------------------------------------

    def identity(self) -> MonoidElement:
        if self.kind is MonoidKind.FREE_ABELIAN:
            return (0,) * self.generator_count
        return ()

    def generator(self, i: int) -> MonoidElement:
        if self.kind is MonoidKind.FREE_ABELIAN:
            return tuple(int(j == i) for j in range(self.generator_count))
        return (i,)

    def generators(self) -> List[MonoidElement]:
        return [self.generator(i) for i in range(self.generator_count)]

    def multiply(self, p: MonoidElement, q: MonoidElement) -> MonoidElement:
        if self.kind is MonoidKind.FREE_ABELIAN:
            return tuple(a + b for a, b in zip(p, q))
        return tuple(p) + tuple(q)

    def degree(self, p: MonoidElement) -> int:
        return sum(p) if self.kind is MonoidKind.FREE_ABELIAN else len(p)

    def is_identity(self, p: MonoidElement) -> bool:
        return self.degree(p) == 0

    def leq(self, p: MonoidElement, q: MonoidElement) -> bool:
        """p ≤ q, i.e. q ∈ pP."""
        if self.kind is MonoidKind.FREE_ABELIAN:
            return all(a <= b for a, b in zip(p, q))
        return len(p) <= len(q) and tuple(q[: len(p)]) == tuple(p)

    def left_divide(self, p: MonoidElement, r: MonoidElement) -> Optional[MonoidElement]:
        """The x with p·x = r, or None if r ∉ pP."""
        if not self.leq(p, r):
            return None
        if self.kind is MonoidKind.FREE_ABELIAN:
            return tuple(b - a for a, b in zip(p, r))
        return tuple(r[len(p):])

    def lcm(self, p: MonoidElement, q: MonoidElement):
        return lcm_p(self, p, q)

    def validate_element(self, p: Sequence[int]) -> MonoidElement:
        p = tuple(int(x) for x in p)
        k = self.generator_count
        if self.kind is MonoidKind.FREE_ABELIAN:
            if len(p) != k or any(x < 0 for x in p):
                raise ValueError(f"not an exponent vector of length {k}: {p}")
        elif any(not 0 <= x < k for x in p):
            raise ValueError(f"word uses undeclared letters: {p}")
        return p

    def sort_key(self, p: MonoidElement):
        return tuple(p)

    # -- enumeration ------------------------------------------------------

    def elements_of_degree(self, n: int) -> Iterator[MonoidElement]:
        k = self.generator_count
        if self.kind is MonoidKind.FREE:
            yield from itertools.product(range(k), repeat=n)
            return
        # exponent vectors of total degree n, lexicographically descending
        # in the first coordinate; sorted below for a stable order
        out = []
        for cut in itertools.combinations(range(n + k - 1), k - 1):
            bounds = (-1,) + cut + (n + k - 1,)
            out.append(tuple(bounds[i + 1] - bounds[i] - 1 for i in range(k)))
        yield from sorted(out)

    def elements(self, depth: int) -> Iterator[MonoidElement]:
        """All elements of degree ≤ depth, by degree and then lexicographically."""
        for n in range(depth + 1):
            yield from self.elements_of_degree(n)

    # -- literals ---------------------------------------------------------

    def format(self, p: MonoidElement) -> str:
        if self.kind is MonoidKind.FREE_ABELIAN:
            if self.numeric:
                value = 1
                for name, e in zip(self.generator_names, p):
                    value *= int(name) ** e
                return str(value)
            return ",".join(str(e) for e in p)
        if not p:
            return "1"
        sep = "" if all(len(n) == 1 for n in self.generator_names) else "."
        return sep.join(self.generator_names[i] for i in p)

    def parse(self, text: str) -> MonoidElement:
        text = text.strip()
        if self.kind is MonoidKind.FREE_ABELIAN:
            if text.startswith("[") and text.endswith("]"):
                return self._parse_exponents(text[1:-1])
            if self.numeric:
                return self._factor(text)
            return self._parse_exponents(text)
        if text in ("", "1", "ε"):
            return ()
        if "." in text:
            parts = text.split(".")
        elif all(len(n) == 1 for n in self.generator_names):
            parts = list(text)
        else:
            parts = [text]
        index = {n: i for i, n in enumerate(self.generator_names)}
        try:
            return tuple(index[part] for part in parts)
        except KeyError as exc:
            raise ValueError(f"unknown letter {exc.args[0]!r} in word {text!r}") from None

    def _parse_exponents(self, text):
        try:
            exps = tuple(int(x) for x in text.split(","))
        except ValueError:
            raise ValueError(f"bad exponent vector {text!r}") from None
        return self.validate_element(exps)

    def _factor(self, text):
        try:
            n = int(text)
        except ValueError:
            raise ValueError(f"bad monoid value {text!r}") from None
        if n < 1:
            raise ValueError(f"monoid value must be positive: {n}")
        exps = []
        for name in self.generator_names:
            v, e = int(name), 0
            while n % v == 0:
                n //= v
                e += 1
            exps.append(e)
        if n != 1:
            raise ValueError(f"{text} is not a product of {', '.join(self.generator_names)}")
        return tuple(exps)


@dataclass(frozen=True)
class PFoundationSet:
    elements: Tuple[MonoidElement, ...]
    is_foundation: bool
    is_accurate: bool
    witness: Optional[MonoidElement] = field(default=None, compare=False)


def lcm_p(spec: MonoidSpec, p: MonoidElement, q: MonoidElement):
    """Right LCM: (r, p', q') with p·p' = q·q' = r and pP ∩ qP = rP, or None."""
    if spec.kind is MonoidKind.FREE_ABELIAN:
        r = tuple(max(a, b) for a, b in zip(p, q))
        return r, tuple(c - a for a, c in zip(p, r)), tuple(c - b for b, c in zip(q, r))
    if spec.leq(p, q):
        return tuple(q), tuple(q[len(p):]), ()
    if spec.leq(q, p):
        return tuple(p), (), tuple(p[len(q):])
    return None


def ideals_meet(spec: MonoidSpec, p, q) -> bool:
    return lcm_p(spec, p, q) is not None


def _dedupe(spec, elements):
    return sorted({tuple(e) for e in elements}, key=spec.sort_key)


def is_p_foundation_set(spec: MonoidSpec, f: Sequence[MonoidElement]):
    """Decide whether f meets every principal right ideal of P.

    Returns (verdict, witness); the witness is an element whose ideal misses
    every member of f, or None when f is a foundation set.
    """
    f = _dedupe(spec, f)
    if not f:
        return False, spec.identity()
    if spec.kind is MonoidKind.FREE_ABELIAN:
        return True, None
    # A word is blocked when some member is a prefix of it.  Every word is
    # comparable to a member iff all words of the maximal member length are
    # blocked, which we check depth-first over the trie of prefixes.
    members = set(f)
    depth = max(len(w) for w in f)
    k = spec.generator_count

    def uncovered(prefix):
        if prefix in members:
            return None
        if len(prefix) == depth:
            return prefix
        for a in range(k):
            hit = uncovered(prefix + (a,))
            if hit is not None:
                return hit
        return None

    witness = uncovered(())
    return witness is None, witness


def is_directed(spec: MonoidSpec) -> bool:
    return spec.kind is MonoidKind.FREE_ABELIAN or spec.generator_count == 1


def accurate_refine_p(spec: MonoidSpec, f) -> PFoundationSet:
    """An accurate foundation subset of a foundation set of P."""
    elements = f.elements if isinstance(f, PFoundationSet) else tuple(f)
    ok, witness = is_p_foundation_set(spec, elements)
    if not ok:
        raise NotFoundationSetError(
            f"not a foundation set; {spec.format(witness)} meets none of its ideals", witness
        )
    members = _dedupe(spec, elements)
    if is_directed(spec):
        kept = members[:1]
    else:
        # comparable words have nested ideals: drop every proper extension
        kept = [w for w in members if not any(v != w and spec.leq(v, w) for v in members)]
    return PFoundationSet(tuple(kept), True, True)


def construct_pf(spec: MonoidSpec, q_parts: Sequence[MonoidElement]) -> List[MonoidElement]:
    """The finite set of indispensable ideal generators built from q_parts.

    The intersections of the principal ideals of all non-empty subsets of
    q_parts are collected, and then scanned from minimal elements upward;
    an element is kept unless every element whose ideal meets its own also
    meets the ideal of a later candidate or of a kept element not below it.
    The result R satisfies, for the input Q:

    * every p whose ideal meets some qP also meets some q'P with q' ∈ R;
    * each q ∈ R has a p meeting qP but missing q'P for all q' ∈ R with
      q' not below q;
    * each q ∈ R lies above some member of Q.
    """
    qs = _dedupe(spec, q_parts)
    if not qs:
        return []
    reps = set()
    for size in range(1, len(qs) + 1):
        for subset in itertools.combinations(qs, size):
            r = subset[0]
            for q in subset[1:]:
                meet = lcm_p(spec, r, q)
                if meet is None:
                    r = None
                    break
                r = meet[0]
            if r is not None:
                reps.add(r)
    remaining = sorted(reps, key=spec.sort_key)
    kept: List[MonoidElement] = []
    span = max(spec.degree(q) for q in remaining)
    while remaining:
        minimal = [
            q for q in remaining if not any(o != q and spec.leq(o, q) for o in remaining)
        ]
        q = minimal[0]
        remaining.remove(q)
        exclusion = remaining + [e for e in kept if not spec.leq(e, q)]
        if _has_private_witness(spec, q, exclusion, span):
            kept.append(q)
    return sorted(kept, key=spec.sort_key)


def _has_private_witness(spec, q, exclusion, span) -> bool:
    """Is there p with pP ∩ qP ≠ ∅ and pP ∩ eP = ∅ for every e in exclusion?"""
    if not exclusion:
        return True
    if is_directed(spec):
        # all ideals meet in a directed monoid
        return False
    # any such p may be replaced by the lcm of p and q, a word q·w; making w
    # longer only shrinks the ideal, so words reaching length `span` decide it
    tail = max(0, span - len(q))
    for w in itertools.product(range(spec.generator_count), repeat=tail):
        p = tuple(q) + w
        if all(lcm_p(spec, p, e) is None for e in exclusion):
            return True
    return False
