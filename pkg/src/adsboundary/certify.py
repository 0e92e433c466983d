"""Simplicity, pure infiniteness and classifiability reports.

For G = Z^d and P free abelian or free (right cancellative, trivial units)
the boundary quotient is simple exactly when the tight groupoid's reduced
and full algebras agree (an amenability-type input we cannot decide, taken
as a flag) and the action is minimal: ⋂_p θ_p(Z^d) = 0.

Minimality is decided exactly.  The limit lattice Λ = ⋂_p θ_p(Z^d) is the
largest sublattice M with M ⊆ θ_a(M) for every generator a; each generator
then restricts to an automorphism of M, so span(M) sits inside the sum of
generalized eigenspaces of the irreducible factors of charpoly(θ_a) whose
constant term is ±1 (the unimodular factors).  Conversely the largest
subspace V of the intersection of those eigenspaces that is invariant under
all generators gives Λ = Z^d ∩ V.  Both the factorization and the subspace
refinement are exact integer computations.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import sympy

from .ads import (
    AdsSpec,
    SemidirectElement,
    format_element,
    intersect_principal_ideals,
    require_valid,
)
from .lattice import INFINITE, IntMatrix, Lattice, image, index, integer_kernel, intersect, transversal
from .monoid import MonoidKind

log = logging.getLogger(__name__)


class Tristate(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"
    NOT_APPLICABLE = "n/a"


class Amenability(enum.Enum):
    ASSUMED = "assumed"
    ASSERTED_BY_USER = "asserted"
    UNKNOWN = "unknown"


class ConditionVerdict(enum.Enum):
    PASS = "pass"
    UNSUPPORTED = "unsupported"


class MinimalityKind(enum.Enum):
    MINIMAL = "minimal"
    NOT_MINIMAL = "not-minimal"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Factor:
    polynomial: str
    multiplicity: int
    constant_term: int
    coefficients: Tuple[int, ...] = field(repr=False, default=())

    @property
    def unimodular(self) -> bool:
        return abs(self.constant_term) == 1


@dataclass
class MinimalityVerdict:
    kind: MinimalityKind
    witness: Optional[Lattice] = None
    factors: Dict[str, List[Factor]] = field(default_factory=dict)
    certifying_generator: Optional[str] = None
    truncation: List[Tuple[int, object]] = field(default_factory=list)
    depth: int = 0

    @property
    def is_minimal(self) -> bool:
        return self.kind is MinimalityKind.MINIMAL

    def verify(self, spec: AdsSpec) -> bool:
        """Re-check the certificate from scratch."""
        if self.kind is MinimalityKind.NOT_MINIMAL:
            m = self.witness
            return m is not None and m.rank > 0 and all(
                image(a, m).contains_lattice(m) for a in spec.theta
            )
        if self.kind is MinimalityKind.MINIMAL:
            if spec.d == 0:
                return True
            if self.certifying_generator is not None:
                fs = _factorize(spec.theta_of(self.certifying_generator))
                return not any(f.unimodular for f in fs)
            return invariant_core(spec).rank == 0
        return False


@dataclass
class ConditionReport:
    verdict: ConditionVerdict
    citation: str


@dataclass
class PureInfiniteness:
    verdict: Tristate
    reason: str
    witness: Optional[Tuple[SemidirectElement, SemidirectElement]] = None


@dataclass
class SimplicityReport:
    condition_h: ConditionReport
    amenability: Amenability
    effectiveness: MinimalityVerdict
    simple: Tristate
    purely_infinite: Tristate
    kirchberg: Tristate
    citations: Dict[str, List[str]] = field(default_factory=dict)
    witnesses: Dict[str, object] = field(default_factory=dict)
    warnings: List[str] = field(default_factory=list)


# -- characteristic polynomials ------------------------------------------------

_X = sympy.Symbol("x")


def _factorize(m: IntMatrix) -> List[Factor]:
    poly = sympy.Matrix(m.tolist()).charpoly(_X).as_expr() if m.rows else sympy.Integer(1)
    _, factors = sympy.factor_list(poly, _X)
    out = []
    for f, mult in factors:
        p = sympy.Poly(f, _X)
        coeffs = tuple(int(c) for c in p.all_coeffs())
        out.append(Factor(str(f), int(mult), coeffs[-1], coeffs))
    return sorted(out, key=lambda f: (len(f.coefficients), f.coefficients))


def _evaluate(coeffs, m: IntMatrix) -> IntMatrix:
    """Horner evaluation of an integer polynomial at a square matrix."""
    d = m.rows
    out = IntMatrix.scalar(d, 0)
    for c in coeffs:
        out = out @ m
        out = IntMatrix(
            tuple(tuple(v + (c if i == j else 0) for j, v in enumerate(row)) for i, row in enumerate(out.entries))
        )
    return out


def _preimage(m: IntMatrix, lat: Lattice) -> Lattice:
    """{x ∈ Z^d : m x ∈ lat}."""
    d = m.rows
    cols = list(m.columns) + [tuple(-v for v in c) for c in lat.basis]
    kernel = integer_kernel(cols, d)
    return Lattice.span([k[:d] for k in kernel], d)


def unimodular_part(spec: AdsSpec, name: str) -> Lattice:
    """Z^d ∩ (generalized eigenspaces of θ_name for factors with constant term ±1)."""
    m = spec.theta_of(name)
    d = spec.d
    u = IntMatrix.identity(d)
    for f in _factorize(m):
        if f.unimodular:
            u = u @ (_evaluate(f.coefficients, m) ** f.multiplicity)
    return Lattice.span(integer_kernel(u.columns, d), d)


def invariant_core(spec: AdsSpec) -> Lattice:
    """The exact limit ⋂_p θ_p(Z^d), as a saturated lattice."""
    cached = spec._cache.get("invariant_core")
    if cached is not None:
        return cached
    d = spec.d
    core = Lattice.full(d)
    for name in spec.monoid.generator_names:
        core = intersect(core, unimodular_part(spec, name))
    # shrink to the largest subspace invariant under every generator
    while core.rank:
        nxt = core
        for a in spec.theta:
            nxt = intersect(nxt, _preimage(a, core))
        if nxt == core:
            break
        core = nxt
    spec._cache["invariant_core"] = core
    return core


def truncated_cores(spec: AdsSpec, depth: int) -> List[Lattice]:
    """[L_0, …, L_depth] with L_n = ⋂_{|r| ≤ n} θ_r(Z^d) = ⋂_a θ_a(L_{n-1})."""
    key = ("truncated", depth)
    cached = spec._cache.get(key)
    if cached is not None:
        return cached
    out = [Lattice.full(spec.d)]
    for _ in range(depth):
        prev = out[-1]
        nxt = image(spec.theta[0], prev)
        for a in spec.theta[1:]:
            nxt = intersect(nxt, image(a, prev))
        out.append(nxt)
    spec._cache[key] = out
    return out


# -- checks -------------------------------------------------------------------


def check_condition_h(spec: AdsSpec) -> ConditionReport:
    if spec.monoid.kind in (MonoidKind.FREE_ABELIAN, MonoidKind.FREE):
        return ConditionReport(
            ConditionVerdict.PASS,
            "P is right cancellative, hence so is S, and right cancellation gives the "
            "Hausdorff condition on the tight groupoid",
        )
    return ConditionReport(ConditionVerdict.UNSUPPORTED, f"unsupported monoid kind {spec.monoid.kind}")


def check_minimality(spec: AdsSpec, depth_budget: int = 4) -> MinimalityVerdict:
    """Decide whether ⋂_p θ_p(Z^d) = 0, with a re-verifiable certificate.

    The certificate is one of: a generator none of whose characteristic
    factors is unimodular (MINIMAL), the nonzero limit lattice M with
    M ⊆ θ_a(M) for all a (NOT_MINIMAL), or the joint refinement of the
    unimodular eigenspaces collapsing to 0 (MINIMAL, no single generator).
    The truncations L_n up to ``depth_budget`` are attached as diagnostics.
    """
    diag = [(n, index(lat)) for n, lat in enumerate(truncated_cores(spec, depth_budget))] if spec.d else []
    if spec.d == 0:
        return MinimalityVerdict(MinimalityKind.MINIMAL, truncation=diag, depth=depth_budget)
    factors = {name: _factorize(spec.theta_of(name)) for name in spec.monoid.generator_names}
    for name, fs in factors.items():
        if not any(f.unimodular for f in fs):
            return MinimalityVerdict(
                MinimalityKind.MINIMAL,
                factors=factors,
                certifying_generator=name,
                truncation=diag,
                depth=depth_budget,
            )
    core = invariant_core(spec)
    kind = MinimalityKind.NOT_MINIMAL if core.rank else MinimalityKind.MINIMAL
    verdict = MinimalityVerdict(
        kind,
        witness=core if core.rank else None,
        factors=factors,
        truncation=diag,
        depth=depth_budget,
    )
    if not verdict.verify(spec):
        raise AssertionError("minimality certificate failed re-verification")
    return verdict


def check_effectiveness(spec: AdsSpec, depth_budget: int = 4) -> MinimalityVerdict:
    """Effectiveness of the unit action on the constructible ideals.

    G is abelian, so ⋂ kθ_r(G)k⁻¹ over (k, r) ∈ S is ⋂_r θ_r(G) and the
    question is minimality.
    """
    return check_minimality(spec, depth_budget)


def disjoint_pair(spec: AdsSpec) -> Tuple[SemidirectElement, SemidirectElement]:
    """(0, a) and (g, a) with disjoint ideals, for a generator a of index ≥ 2."""
    for a in spec.monoid.generators():
        reps = transversal(spec.image(a))
        if len(reps) >= 2:
            x, y = SemidirectElement(reps[0], a), SemidirectElement(reps[1], a)
            if intersect_principal_ideals(spec, x, y) is None:
                return x, y
    raise ValueError("every generator acts by an automorphism")


def check_pure_infiniteness(spec: AdsSpec, simple: Optional[Tristate] = None) -> PureInfiniteness:
    """P is never a group here, so pure infiniteness follows from simplicity."""
    witness = disjoint_pair(spec)
    shown = " and ".join(format_element(spec, s) for s in witness)
    if simple is None:
        return PureInfiniteness(
            Tristate.YES, f"conditional on simplicity; P is not a group ({shown} have disjoint ideals)", witness
        )
    if simple is Tristate.YES:
        return PureInfiniteness(
            Tristate.YES, f"simple and P is not a group ({shown} have disjoint ideals)", witness
        )
    if simple is Tristate.NO:
        return PureInfiniteness(Tristate.NOT_APPLICABLE, "simplicity fails", witness)
    return PureInfiniteness(Tristate.UNKNOWN, "simplicity undecided", witness)


def kirchberg_report(
    spec: AdsSpec, amenability: Amenability = Amenability.ASSUMED, depth_budget: int = 4
) -> SimplicityReport:
    """Compose the hypothesis checks into simplicity / pure infiniteness / Kirchberg verdicts."""
    from .invsgp import InvElement, IdealProjection, WeakFix, is_weakly_fixed

    require_valid(spec)
    warnings = []
    if amenability is Amenability.ASSUMED:
        msg = "amenability of the tight groupoid is assumed, not checked"
        log.warning(msg)
        warnings.append(msg)
    cond_h = check_condition_h(spec)
    eff = check_effectiveness(spec, depth_budget)
    citations: Dict[str, List[str]] = {"condition_h": [cond_h.citation]}
    witnesses: Dict[str, object] = {}

    amenable = amenability is not Amenability.UNKNOWN
    if cond_h.verdict is not ConditionVerdict.PASS:
        simple = Tristate.UNKNOWN
        citations["simple"] = ["Hausdorff condition unavailable"]
    elif eff.kind is MinimalityKind.NOT_MINIMAL:
        simple = Tristate.NO
        m = eff.witness
        g = m.basis[0]
        unit = InvElement(SemidirectElement(g, spec.monoid.identity()), spec.identity())
        fixed = is_weakly_fixed(spec, unit, IdealProjection.one(spec), depth_budget)
        if fixed.verdict is not WeakFix.YES_CERTIFIED:
            raise AssertionError("limit lattice vector does not weakly fix the unit projection")
        witnesses["simple"] = {
            "limit_lattice": [list(c) for c in m.basis],
            "weakly_fixing_unit": format_element(spec, unit.s),
        }
        citations["simple"] = [
            "simplicity requires the unit action on constructible ideals to be effective",
            "for abelian G effectiveness is ⋂_p θ_p(G) = 0, violated by the certified limit lattice",
            f"the nontrivial unit {format_element(spec, unit.s)} weakly fixes 1 yet differs from the identity",
        ]
    elif eff.kind is MinimalityKind.MINIMAL:
        simple = Tristate.YES if amenable else Tristate.UNKNOWN
        citations["simple"] = [
            "S right cancellative with trivial units in P: simple iff amenability input "
            "and effective unit action",
            "effective unit action holds: ⋂_p θ_p(G) = 0 is certified",
        ]
        if not amenable:
            citations["simple"].append("amenability input unknown")
    else:
        simple = Tristate.UNKNOWN
        citations["simple"] = ["minimality undecided"]

    pi = check_pure_infiniteness(spec, simple)
    witnesses["purely_infinite"] = [format_element(spec, s) for s in pi.witness]
    citations["purely_infinite"] = [
        "a simple boundary quotient with the Hausdorff condition is purely infinite iff P is not a group",
        pi.reason,
    ]

    if simple is Tristate.NO:
        kirchberg = Tristate.NO
        citations["kirchberg"] = ["Kirchberg algebras are simple"]
        witnesses["kirchberg"] = witnesses["simple"]
    elif amenable and eff.kind is MinimalityKind.MINIMAL:
        kirchberg = Tristate.YES
        citations["kirchberg"] = [
            "unital UCT Kirchberg algebra: amenable tight groupoid, P not a group, "
            "P right cancellative with trivial units and ⋂ gθ_p(G)g⁻¹ = 0"
        ]
    else:
        kirchberg = Tristate.UNKNOWN
        citations["kirchberg"] = ["hypotheses not all established"]

    return SimplicityReport(
        condition_h=cond_h,
        amenability=amenability,
        effectiveness=eff,
        simple=simple,
        purely_infinite=pi.verdict,
        kirchberg=kirchberg,
        citations=citations,
        witnesses=witnesses,
        warnings=warnings,
    )


def minimality_to_dict(v: MinimalityVerdict) -> dict:
    return {
        "verdict": v.kind.value,
        "witness": [list(c) for c in v.witness.basis] if v.witness is not None else None,
        "certifying_generator": v.certifying_generator,
        "factors": {
            name: [
                {"polynomial": f.polynomial, "multiplicity": f.multiplicity, "constant_term": f.constant_term}
                for f in fs
            ]
            for name, fs in v.factors.items()
        },
        "truncation": [
            {"depth": n, "index": "infinite" if i is INFINITE else i} for n, i in v.truncation
        ],
        "depth": v.depth,
    }


def report_to_dict(r: SimplicityReport) -> dict:
    return {
        "condition_h": {"verdict": r.condition_h.verdict.value, "citation": r.condition_h.citation},
        "amenability": r.amenability.value,
        "effectiveness": minimality_to_dict(r.effectiveness),
        "simple": r.simple.value,
        "purely_infinite": r.purely_infinite.value,
        "kirchberg": r.kirchberg.value,
        "citations": r.citations,
        "witnesses": r.witnesses,
        "warnings": r.warnings,
    }
