"""Exact integer lattice arithmetic on Z^d.

Lattices are stored in canonical column Hermite normal form, so equality of
lattices (and of cosets, whose offsets are reduced) is plain structural
equality.  Everything is done with Python integers; no floating point.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence, Tuple

Vector = Tuple[int, ...]


class _Infinite:
    """The index of a sublattice of deficient rank."""

    def __repr__(self) -> str:
        return "INFINITE"

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __le__(self, other):
        return other is self

    def __ge__(self, other):
        return True

    def __hash__(self):
        return hash("INFINITE")

    def __reduce__(self):
        return "INFINITE"


INFINITE = _Infinite()


def xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


@dataclass(frozen=True)
class IntMatrix:
    """A dense integer matrix, row-major."""

    entries: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.entries)
        if len({len(r) for r in rows}) > 1:
            raise ValueError("ragged matrix rows")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "IntMatrix":
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], nrows: int) -> "IntMatrix":
        if not columns:
            return cls(tuple(() for _ in range(nrows)))
        return cls(tuple(tuple(c[i] for c in columns) for i in range(nrows)))

    @classmethod
    def identity(cls, d: int) -> "IntMatrix":
        return cls(tuple(tuple(int(i == j) for j in range(d)) for i in range(d)))

    @classmethod
    def scalar(cls, d: int, c: int) -> "IntMatrix":
        return cls(tuple(tuple(c if i == j else 0 for j in range(d)) for i in range(d)))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    @property
    def columns(self) -> Tuple[Vector, ...]:
        return tuple(tuple(row[j] for row in self.entries) for j in range(self.cols))

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        ocols = other.columns
        return IntMatrix(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in ocols)
                for row in self.entries
            )
        )

    def apply(self, v: Sequence[int]) -> Vector:
        if len(v) != self.cols:
            raise ValueError("shape mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)

    def __pow__(self, n: int) -> "IntMatrix":
        if not self.is_square() or n < 0:
            raise ValueError("only non-negative powers of square matrices")
        result, base = IntMatrix.identity(self.rows), self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def det(self) -> int:
        """Exact determinant by fraction-free (Bareiss) elimination."""
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = [list(r) for r in self.entries]
        sign, prev = 1, 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def tolist(self):
        return [list(r) for r in self.entries]


def _column_echelon(columns, nrows, pivot_rows=None, reduce=True):
    """Unimodular column reduction of a list of integer columns.

    Only the first ``pivot_rows`` coordinates (default: all) are used for
    pivoting; the remaining coordinates are carried along, which is how the
    transforms are tracked.  Returns (columns, pivots) where ``pivots`` lists
    the pivot row of each of the leading ``len(pivots)`` columns; all later
    columns vanish on the pivoting rows.
    """
    cols = [list(c) for c in columns]
    top = nrows if pivot_rows is None else pivot_rows
    pivots = []
    r = 0
    for i in range(top):
        if r == len(cols):
            break
        for j in range(r + 1, len(cols)):
            b = cols[j][i]
            if b == 0:
                continue
            a = cols[r][i]
            g, x, y = xgcd(a, b)
            ag, bg = a // g, b // g
            cr, cj = cols[r], cols[j]
            cols[r] = [x * u + y * v for u, v in zip(cr, cj)]
            cols[j] = [ag * v - bg * u for u, v in zip(cr, cj)]
        piv = cols[r][i]
        if piv == 0:
            continue
        if piv < 0:
            cols[r] = [-u for u in cols[r]]
            piv = -piv
        if reduce:
            for k in range(r):
                q = cols[k][i] // piv
                if q:
                    cols[k] = [u - q * v for u, v in zip(cols[k], cols[r])]
        pivots.append(i)
        r += 1
    return cols, pivots


@dataclass(frozen=True)
class Lattice:
    """A subgroup of Z^d given by its canonical Hermite basis (columns).

    Basis column j has its first nonzero entry (the pivot, positive) in row
    ``pivots[j]``, pivot rows are strictly increasing, and in every pivot row
    the entries of earlier columns are reduced into ``[0, pivot)``.
    """

    ambient_rank: int
    basis: Tuple[Vector, ...]

    @classmethod
    def span(cls, vectors: Iterable[Sequence[int]], ambient_rank: int) -> "Lattice":
        vecs = [tuple(int(x) for x in v) for v in vectors]
        for v in vecs:
            if len(v) != ambient_rank:
                raise ValueError("vector of wrong length")
        cols, pivots = _column_echelon(vecs, ambient_rank)
        return cls(ambient_rank, tuple(tuple(c) for c in cols[: len(pivots)]))

    @classmethod
    def full(cls, d: int) -> "Lattice":
        return cls.span(IntMatrix.identity(d).columns, d)

    @classmethod
    def zero(cls, d: int) -> "Lattice":
        return cls(d, ())

    @property
    def rank(self) -> int:
        return len(self.basis)

    @cached_property
    def pivots(self) -> Tuple[int, ...]:
        out = []
        for col in self.basis:
            out.append(next(i for i, x in enumerate(col) if x))
        return tuple(out)

    @property
    def pivot_entries(self) -> Tuple[int, ...]:
        return tuple(col[i] for col, i in zip(self.basis, self.pivots))

    def matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.basis, self.ambient_rank)

    def reduce(self, v: Sequence[int]) -> Vector:
        """Canonical representative of v modulo the lattice."""
        w = list(v)
        for col, i in zip(self.basis, self.pivots):
            q = w[i] // col[i]
            if q:
                w = [a - q * b for a, b in zip(w, col)]
        return tuple(w)

    def __contains__(self, v) -> bool:
        return not any(self.reduce(v))

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(col in self for col in other.basis)

    def coordinates(self, v: Sequence[int]) -> Optional[Vector]:
        """Integer coefficients of v in the Hermite basis, or None."""
        w = list(v)
        coeffs = []
        for col, i in zip(self.basis, self.pivots):
            q, rem = divmod(w[i], col[i])
            if rem:
                return None
            coeffs.append(q)
            w = [a - q * b for a, b in zip(w, col)]
        if any(w):
            return None
        return tuple(coeffs)

    def __repr__(self) -> str:
        return f"Lattice(d={self.ambient_rank}, basis={[list(c) for c in self.basis]})"


def hnf(m: IntMatrix) -> Lattice:
    """Lattice spanned by the columns of ``m``."""
    return Lattice.span(m.columns, m.rows)


def index(lat: Lattice):
    """[Z^d : lat] as an int, or INFINITE for deficient rank."""
    if lat.rank < lat.ambient_rank:
        return INFINITE
    out = 1
    for p in lat.pivot_entries:
        out *= p
    return out


def transversal(lat: Lattice) -> list:
    """Reduced coset representatives of Z^d / lat in lexicographic order."""
    if lat.rank < lat.ambient_rank:
        raise ValueError("transversal of a sublattice of infinite index")
    # full rank: pivots sit on the diagonal
    ranges = [range(p) for p in lat.pivot_entries]
    return [tuple(v) for v in itertools.product(*ranges)]


def integer_kernel(columns: Sequence[Sequence[int]], nrows: int) -> list:
    """A Z-basis of {x in Z^m : sum_j x_j * columns[j] = 0}."""
    m = len(columns)
    aug = [list(c) + [int(i == j) for i in range(m)] for j, c in enumerate(columns)]
    cols, pivots = _column_echelon(aug, nrows + m, pivot_rows=nrows, reduce=False)
    return [tuple(c[nrows:]) for c in cols[len(pivots):]]


def solve(columns: Sequence[Sequence[int]], target: Sequence[int]) -> Optional[Vector]:
    """Integer x with sum_j x_j * columns[j] = target, or None if none exists."""
    d = len(target)
    m = len(columns)
    if m == 0:
        return () if not any(target) else None
    aug = [list(c) + [int(i == j) for i in range(m)] for j, c in enumerate(columns)]
    cols, pivots = _column_echelon(aug, d + m, pivot_rows=d, reduce=False)
    residual = list(target)
    x = [0] * m
    for col, i in zip(cols, pivots):
        q, rem = divmod(residual[i], col[i])
        if rem:
            return None
        if q:
            residual = [a - q * b for a, b in zip(residual, col[:d])]
            x = [a + q * b for a, b in zip(x, col[d:])]
    if any(residual):
        return None
    return tuple(x)


def intersect(a: Lattice, b: Lattice) -> Lattice:
    if a.ambient_rank != b.ambient_rank:
        raise ValueError("ambient ranks differ")
    d = a.ambient_rank
    if not a.basis or not b.basis:
        return Lattice.zero(d)
    cols = list(a.basis) + [tuple(-x for x in c) for c in b.basis]
    kernel = integer_kernel(cols, d)
    ra = a.rank
    points = []
    for k in kernel:
        points.append(tuple(sum(k[j] * a.basis[j][i] for j in range(ra)) for i in range(d)))
    return Lattice.span(points, d)


def add(a: Lattice, b: Lattice) -> Lattice:
    """The sum a + b."""
    return Lattice.span(list(a.basis) + list(b.basis), a.ambient_rank)


def image(m: IntMatrix, lat: Lattice) -> Lattice:
    """m applied to lat."""
    return Lattice.span([m.apply(c) for c in lat.basis], m.rows)


@dataclass(frozen=True)
class Coset:
    """offset + lattice, with the offset reduced to its canonical form."""

    offset: Vector
    lattice: Lattice

    def __post_init__(self):
        if len(self.offset) != self.lattice.ambient_rank:
            raise ValueError("offset of wrong length")
        object.__setattr__(self, "offset", self.lattice.reduce(tuple(int(x) for x in self.offset)))

    def __contains__(self, v) -> bool:
        return coset_membership(v, self)

    def __repr__(self) -> str:
        return f"Coset({list(self.offset)} + {[list(c) for c in self.lattice.basis]})"


def coset_membership(v: Sequence[int], c: Coset) -> bool:
    if len(v) != c.lattice.ambient_rank:
        raise ValueError("dimension mismatch")
    return tuple(a - b for a, b in zip(v, c.offset)) in c.lattice


def coset_intersection(a: Coset, b: Coset) -> Optional[Coset]:
    """(a.offset + A) ∩ (b.offset + B), or None when empty."""
    d = a.lattice.ambient_rank
    if d != b.lattice.ambient_rank:
        raise ValueError("ambient ranks differ")
    lat = intersect(a.lattice, b.lattice)
    # a.offset + A x = b.offset + B y
    diff = tuple(y - x for x, y in zip(a.offset, b.offset))
    cols = list(a.lattice.basis) + [tuple(-x for x in c) for c in b.lattice.basis]
    sol = solve(cols, diff)
    if sol is None:
        return None
    ra = a.lattice.rank
    point = tuple(
        a.offset[i] + sum(sol[j] * a.lattice.basis[j][i] for j in range(ra)) for i in range(d)
    )
    return Coset(point, lat)
