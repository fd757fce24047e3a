"""Linear algebra over GF(q) and enumeration of projective points.

Conventions used throughout the package:

* a projective point is represented by the vector whose first nonzero entry
  is 1, and points (like projective matrices, read row-major) are ordered
  lexicographically by the integer encodings of their entries;
* tensor products are row-major with the left factor varying slowest, so
  ``(v (x) w)[k*M + l] = v[k] * w[l]``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import limits
from .field import FieldElement, FieldMismatchError, FieldSpec


class _Entries:
    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[FieldElement]):
        entries = tuple(entries)
        if not entries:
            raise ValueError("vectors need at least one entry")
        spec = entries[0].spec
        for e in entries[1:]:
            if e.spec != spec:
                raise FieldMismatchError("entries from different fields")
        self.entries = entries

    @classmethod
    def of(cls, spec: FieldSpec, values: Sequence):
        """Build from ints (prime-subfield embedding) or field elements."""
        return cls(v if isinstance(v, FieldElement) else spec(v) for v in values)

    @property
    def spec(self) -> FieldSpec:
        return self.entries[0].spec

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, k):
        return self.entries[k]

    def _check(self, other) -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if len(other) != len(self):
            raise ValueError(f"dimension mismatch: {len(self)} vs {len(other)}")
        if other.spec != self.spec:
            raise FieldMismatchError("vectors over different fields")

    def __add__(self, other):
        self._check(other)
        return type(self)(a + b for a, b in zip(self.entries, other.entries))

    def __sub__(self, other):
        self._check(other)
        return type(self)(a - b for a, b in zip(self.entries, other.entries))

    def __neg__(self):
        return type(self)(-a for a in self.entries)

    def scale(self, c) -> "_Entries":
        return type(self)(c * a for a in self.entries)

    def __rmul__(self, c):
        if isinstance(c, (FieldElement, int)):
            return self.scale(c)
        return NotImplemented

    def is_zero(self) -> bool:
        return all(e.value == 0 for e in self.entries)

    def key(self) -> tuple[int, ...]:
        return tuple(e.value for e in self.entries)

    def __eq__(self, other):
        return type(other) is type(self) and self.entries == other.entries

    def __hash__(self):
        return hash((type(self).__name__, self.entries))

    def __repr__(self):
        body = ", ".join(str(e) for e in self.entries)
        return f"{type(self).__name__}({body})"


class Vector(_Entries):
    """A column vector (a ket)."""

    __slots__ = ()


class DualVector(_Entries):
    """A row vector (a bra / measurement outcome)."""

    __slots__ = ()


class Matrix:
    __slots__ = ("rows",)

    def __init__(self, rows: Iterable[Iterable[FieldElement]]):
        rows = tuple(tuple(r) for r in rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise ValueError("matrices must be square and nonempty")
        spec = rows[0][0].spec
        if any(e.spec != spec for r in rows for e in r):
            raise FieldMismatchError("entries from different fields")
        self.rows = rows

    @classmethod
    def of(cls, spec: FieldSpec, rows: Sequence[Sequence]):
        return cls([v if isinstance(v, FieldElement) else spec(v) for v in r] for r in rows)

    @classmethod
    def identity(cls, spec: FieldSpec, n: int) -> "Matrix":
        return cls([spec.one if i == j else spec.zero for j in range(n)] for i in range(n))

    @property
    def spec(self) -> FieldSpec:
        return self.rows[0][0].spec

    @property
    def size(self) -> int:
        return len(self.rows)

    def entries(self) -> tuple[FieldElement, ...]:
        return tuple(e for r in self.rows for e in r)

    def key(self) -> tuple[int, ...]:
        return tuple(e.value for e in self.entries())

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if other.size != self.size:
                raise ValueError("dimension mismatch")
            cols = list(zip(*other.rows))
            return Matrix([_dot_plain(r, c) for c in cols] for r in self.rows)
        if isinstance(other, Vector):
            return apply(self, other)
        return NotImplemented

    def __add__(self, other):
        return Matrix([a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows))

    def __sub__(self, other):
        return Matrix([a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows))

    def __neg__(self):
        return Matrix([-a for a in r] for r in self.rows)

    def scale(self, c) -> "Matrix":
        return Matrix([c * a for a in r] for r in self.rows)

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self.rows))

    def determinant(self) -> FieldElement:
        """Gaussian elimination over the field."""
        a = [list(r) for r in self.rows]
        n = len(a)
        det = self.spec.one
        for col in range(n):
            pivot = next((r for r in range(col, n) if a[r][col]), None)
            if pivot is None:
                return self.spec.zero
            if pivot != col:
                a[col], a[pivot] = a[pivot], a[col]
                det = -det
            det = det * a[col][col]
            inv = a[col][col].inverse()
            for r in range(col + 1, n):
                if a[r][col]:
                    f = a[r][col] * inv
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        return det

    def is_singular(self) -> bool:
        return self.determinant().value == 0

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return "Matrix(" + "; ".join(" ".join(str(e) for e in r) for r in self.rows) + ")"


def _dot_plain(xs: Sequence[FieldElement], ys: Sequence[FieldElement]) -> FieldElement:
    acc = xs[0] * ys[0]
    for x, y in zip(xs[1:], ys[1:]):
        acc = acc + x * y
    return acc


@dataclass(frozen=True, eq=False)
class ProjectivePoint:
    """Canonical representative (leading entry 1) of a line through the origin."""

    rep: Vector
    index: int

    @property
    def spec(self) -> FieldSpec:
        return self.rep.spec

    @property
    def dim(self) -> int:
        return len(self.rep)

    def __eq__(self, other):
        return isinstance(other, ProjectivePoint) and self.rep == other.rep

    def __hash__(self):
        return hash(self.rep)

    def __repr__(self):
        return f"ProjectivePoint#{self.index}({', '.join(str(e) for e in self.rep)})"


def bracket(x: DualVector, psi: Vector) -> FieldElement:
    """Plain bilinear pairing sum_k x_k psi_k."""
    if not isinstance(x, DualVector) or not isinstance(psi, Vector):
        raise TypeError("bracket pairs a DualVector with a Vector")
    if len(x) != len(psi):
        raise ValueError(f"dimension mismatch: {len(x)} vs {len(psi)}")
    if x.spec != psi.spec:
        raise FieldMismatchError("bracket across different fields")
    return _dot_plain(x.entries, psi.entries)


def _leading(v: _Entries) -> FieldElement:
    for e in v.entries:
        if e.value:
            return e
    raise ValueError("the zero vector has no projective class")


def normalize(v: _Entries) -> _Entries:
    """Scale so that the first nonzero entry is 1 (works for kets and bras)."""
    return v.scale(_leading(v).inverse())


def point_index(v: Vector) -> int:
    """Rank of a canonical vector in the lexicographic enumeration order."""
    q, n = v.spec.q, len(v)
    lead = next(k for k, e in enumerate(v.entries) if e.value)
    before = (q ** (n - lead - 1) - 1) // (q - 1)
    tail = 0
    for e in v.entries[lead + 1:]:
        tail = tail * q + e.value
    return before + tail


def canonicalize(v: Vector) -> ProjectivePoint:
    rep = normalize(v)
    return ProjectivePoint(rep, point_index(rep))


def enumerate_projective(spec: FieldSpec, dim: int) -> list[ProjectivePoint]:
    """All (q^dim - 1)/(q - 1) points of PG(dim-1, q) in canonical order."""
    if dim < 1:
        raise ValueError("dimension must be >= 1")
    limits.check("GALOIS_QM_MAX_VECTORS", spec.q**dim, f"vector space size {spec.q}^{dim}")
    elems = spec.elements()
    zero, one = spec.zero, spec.one
    points = []
    for lead in range(dim - 1, -1, -1):
        for tail in itertools.product(elems, repeat=dim - lead - 1):
            rep = Vector((zero,) * lead + (one,) + tail)
            points.append(ProjectivePoint(rep, len(points)))
    return points


def tensor(v: _Entries, w: _Entries) -> _Entries:
    """Kronecker product of two kets or two bras."""
    if type(v) is not type(w):
        raise TypeError("tensor needs two kets or two bras")
    if v.spec != w.spec:
        raise FieldMismatchError("tensor across different fields")
    return type(v)(a * b for a in v.entries for b in w.entries)


def kron(a: Matrix, b: Matrix) -> Matrix:
    if a.spec != b.spec:
        raise FieldMismatchError("kronecker product across different fields")
    return Matrix(
        [x * y for x in ra for y in rb]
        for ra in a.rows
        for rb in b.rows
    )


def apply(m: Matrix, v: Vector) -> Vector:
    if m.size != len(v):
        raise ValueError(f"dimension mismatch: {m.size}x{m.size} matrix on length-{len(v)} vector")
    return Vector(_dot_plain(r, v.entries) for r in m.rows)


def apply_local(m: Matrix, side: int, psi: Vector) -> Vector:
    """Act with ``m (x) 1`` (side 1) or ``1 (x) m`` (side 2) on a two-particle state."""
    n = m.size
    if len(psi) != n * n:
        raise ValueError(f"two-particle state must have length {n * n}, got {len(psi)}")
    ident = Matrix.identity(m.spec, n)
    if side == 1:
        return apply(kron(m, ident), psi)
    if side == 2:
        return apply(kron(ident, m), psi)
    raise ValueError(f"side must be 1 or 2, got {side}")


def canonicalize_matrix(m: Matrix) -> Matrix:
    """Scale so that the first nonzero entry (row-major) is 1."""
    lead = next((e for e in m.entries() if e.value), None)
    if lead is None:
        raise ValueError("the zero matrix has no projective class")
    return m.scale(lead.inverse())


def enumerate_pgl(spec: FieldSpec, n: int = 2) -> list[Matrix]:
    """Canonical representatives of PGL(n, q), in lexicographic order."""
    if n != 2:
        raise ValueError("only PGL(2, q) enumeration is supported")
    limits.check("GALOIS_QM_MAX_PGL_Q", spec.q, "PGL(2, q) field order")
    elems = spec.elements()
    zero, one = spec.zero, spec.one
    out = []
    for lead in range(3, -1, -1):
        for tail in itertools.product(elems, repeat=3 - lead):
            a, b, c, d = (zero,) * lead + (one,) + tail
            if (a * d - b * c).value:
                out.append(Matrix([[a, b], [c, d]]))
    return out


def matrix_from_state(psi: Vector) -> Matrix:
    """Arrange a length-N^2 vector row-major into an N x N matrix."""
    n = int(round(len(psi) ** 0.5))
    if n * n != len(psi):
        raise ValueError("length is not a perfect square")
    return Matrix(psi.entries[i * n:(i + 1) * n] for i in range(n))


def is_product_state(psi: Vector) -> bool:
    """Product test for two two-level particles: the 2x2 arrangement is singular."""
    if len(psi) != 4:
        raise ValueError("product test is implemented for length-4 states only")
    return matrix_from_state(psi).is_singular()
