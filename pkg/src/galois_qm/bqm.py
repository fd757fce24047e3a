"""Expectation-value quantum model over F_p[i], p = 3 mod 4.

The Frobenius map ``a -> a^p`` plays the role of complex conjugation, giving
the dot product ``a . b = sum_k a_k^p b_k``.  A state is *physical* when it
is not self-orthogonal, which is exactly when it has a conjugate dual
``<psi| = (psi .)/(psi . psi)``.  Observables are built from biorthogonal
systems with eigenvalues in F_p, and an expectation value is
``sign_map(<psi|A|psi>)`` in {-1, 0, +1}.  Probabilities are not predicted;
:func:`probability_constraints` reports what the expectation value forces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from . import limits
from .chsh import best_quadruple
from .field import FieldElement, FieldSpec, sign_map, to_prime_subfield
from .probability import frac_str
from .projective import (
    DualVector,
    Matrix,
    ProjectivePoint,
    Vector,
    apply,
    bracket,
    canonicalize,
    canonicalize_matrix,
    enumerate_pgl,
    enumerate_projective,
    is_product_state,
    kron,
)


class NonPhysicalStateError(ValueError):
    """The state is self-orthogonal and has no conjugate dual."""


def require_bqm_field(spec: FieldSpec) -> None:
    if spec.n != 2 or spec.p % 4 != 3 or spec.modulus != (1, 0, 1):
        raise ValueError(f"the model needs F_p[i] with p = 3 mod 4, got {spec!r}")


def bqm_field(p: int) -> FieldSpec:
    from .field import field_new
    if p % 4 != 3:
        raise ValueError(f"p must be 3 mod 4, got {p}")
    spec = field_new(p, 2)
    require_bqm_field(spec)
    return spec


def dot(a: Vector, b: Vector) -> FieldElement:
    """sum_k frobenius(a_k) * b_k."""
    require_bqm_field(a.spec)
    if len(a) != len(b):
        raise ValueError(f"dimension mismatch: {len(a)} vs {len(b)}")
    acc = a.spec.zero
    for x, y in zip(a.entries, b.entries):
        acc = acc + x.frobenius() * y
    return acc


def is_physical(v: Vector) -> bool:
    return dot(v, v).value != 0


def conjugate_dual(v: Vector) -> DualVector:
    """frobenius(v_k) / (v . v); raises NonPhysicalStateError when v . v = 0."""
    if v.is_zero():
        raise ValueError("the zero vector has no dual")
    norm = dot(v, v)
    if norm.value == 0:
        raise NonPhysicalStateError(f"{v!r} is self-orthogonal")
    inv = norm.inverse()
    return DualVector(x.frobenius() * inv for x in v.entries)


def dagger(m: Matrix) -> Matrix:
    """Transpose with Frobenius applied entrywise."""
    return Matrix([x.frobenius() for x in col] for col in zip(*m.rows))


@dataclass(frozen=True)
class BqmState:
    point: ProjectivePoint

    @property
    def vector(self) -> Vector:
        return self.point.rep

    @property
    def physical(self) -> bool:
        return is_physical(self.point.rep)

    @property
    def dual(self) -> DualVector:
        return conjugate_dual(self.point.rep)

    @classmethod
    def from_vector(cls, v: Vector) -> "BqmState":
        require_bqm_field(v.spec)
        return cls(canonicalize(v))


@dataclass
class BqmCensus:
    dim: int
    total: int
    physical: int
    unphysical: int
    product: int | None = None
    entangled: int | None = None
    product_physical: int | None = None
    entangled_physical: int | None = None
    entangled_unphysical: int | None = None
    physical_states: list[ProjectivePoint] = field(repr=False, default_factory=list)


def classify_states(spec: FieldSpec, dim: int) -> BqmCensus:
    """Count physical / unphysical points of PG(dim-1, p^2); split by entanglement for dim 4."""
    require_bqm_field(spec)
    points = enumerate_projective(spec, dim)
    phys = [pt for pt in points if is_physical(pt.rep)]
    census = BqmCensus(dim, len(points), len(phys), len(points) - len(phys), physical_states=phys)
    if dim == 4:
        product = [pt for pt in points if is_product_state(pt.rep)]
        prod_phys = sum(1 for pt in product if is_physical(pt.rep))
        census.product = len(product)
        census.entangled = len(points) - len(product)
        census.product_physical = prod_phys
        census.entangled_physical = len(phys) - prod_phys
        census.entangled_unphysical = census.entangled - census.entangled_physical
    return census


@dataclass(frozen=True)
class BiorthogonalSystem:
    """Kets forming an ortho-nondegenerate basis together with their conjugate duals."""

    kets: tuple[ProjectivePoint, ...]
    bras: tuple[DualVector, ...]

    @classmethod
    def from_kets(cls, kets: Sequence[Vector]) -> "BiorthogonalSystem":
        points = tuple(canonicalize(k) for k in kets)
        system = cls(points, tuple(conjugate_dual(pt.rep) for pt in points))
        if not system.is_biorthogonal():
            raise ValueError("kets are not mutually orthogonal")
        return system

    def pairing(self) -> list[list[FieldElement]]:
        return [[bracket(b, k.rep) for k in self.kets] for b in self.bras]

    def is_biorthogonal(self) -> bool:
        n = len(self.kets)
        return all(
            self.pairing()[r][s].value == (1 if r == s else 0)
            for r in range(n) for s in range(n)
        )

    def ket_set(self) -> frozenset:
        return frozenset(self.kets)


def enumerate_biorthogonal_systems(spec: FieldSpec, dim: int = 2) -> list[BiorthogonalSystem]:
    """Every unordered pair of mutually orthogonal physical points of PG(1, p^2)."""
    if dim != 2:
        raise ValueError("biorthogonal enumeration is implemented for dimension 2 only")
    require_bqm_field(spec)
    phys = [pt for pt in enumerate_projective(spec, 2) if is_physical(pt.rep)]
    systems = []
    for u, v in itertools.combinations(phys, 2):
        if dot(u.rep, v.rep).value == 0:
            systems.append(BiorthogonalSystem((u, v), (conjugate_dual(u.rep), conjugate_dual(v.rep))))
    return systems


@dataclass(frozen=True)
class HermitianAnalog:
    """sum_k alpha_k |k><k| over a biorthogonal system, alpha_k in F_p."""

    matrix: Matrix
    system: BiorthogonalSystem
    eigenvalues: tuple[FieldElement, ...]


def hermitian_analog(system: BiorthogonalSystem, eigenvalues: Sequence) -> HermitianAnalog:
    spec = system.kets[0].spec
    if len(eigenvalues) != len(system.kets):
        raise ValueError("one eigenvalue per basis ket is required")
    alphas = tuple(e if isinstance(e, FieldElement) else spec(e) for e in eigenvalues)
    if any(not a.in_prime_subfield for a in alphas):
        raise ValueError("eigenvalues must lie in the prime subfield")
    n = len(system.kets)
    rows = [[spec.zero] * n for _ in range(n)]
    for alpha, ket, bra in zip(alphas, system.kets, system.bras):
        for i in range(n):
            for j in range(n):
                rows[i][j] = rows[i][j] + alpha * ket.rep[i] * bra[j]
    return HermitianAnalog(Matrix(rows), system, alphas)


def pauli_analogs(spec: FieldSpec) -> dict[int, HermitianAnalog]:
    """sigma_1, sigma_2, sigma_3 from the systems {(1,1),(1,-1)}, {(1,i),(1,-i)}, {(1,0),(0,1)}."""
    require_bqm_field(spec)
    one, zero, i = spec.one, spec.zero, spec.x
    kets = {
        3: (Vector([one, zero]), Vector([zero, one])),
        1: (Vector([one, one]), Vector([one, -one])),
        2: (Vector([one, i]), Vector([one, -i])),
    }
    return {k: hermitian_analog(BiorthogonalSystem.from_kets(kets[k]), (1, -1)) for k in (1, 2, 3)}


@dataclass(frozen=True)
class ExpectationRecord:
    raw: FieldElement
    value: int


Operator = Union[HermitianAnalog, Matrix]


def _matrix(op: Operator) -> Matrix:
    return op.matrix if isinstance(op, HermitianAnalog) else op


def _vector(psi) -> Vector:
    if isinstance(psi, BqmState):
        return psi.vector
    if isinstance(psi, ProjectivePoint):
        return psi.rep
    return psi


def expectation(op: Operator, psi) -> ExpectationRecord:
    """sign_map(<psi| A |psi>) with <psi| the conjugate dual."""
    v = _vector(psi)
    raw = bracket(conjugate_dual(v), apply(_matrix(op), v))
    if not raw.in_prime_subfield:
        raise ValueError(f"<psi|A|psi> = {raw} is not in F_p; the operator is not hermitian-like")
    raw_p = to_prime_subfield(raw)
    return ExpectationRecord(raw_p, sign_map(raw_p))


def kronecker(a: Operator, b: Operator) -> Matrix:
    return kron(_matrix(a), _matrix(b))


def u_state(spec: FieldSpec) -> BqmState:
    """The two-particle state (1, 0, 1, 1+i)."""
    require_bqm_field(spec)
    one, zero = spec.one, spec.zero
    return BqmState.from_vector(Vector([one, zero, one, one + spec.x]))


def chsh_bqm(psi, a: Operator, a2: Operator, b: Operator, b2: Operator) -> int:
    def corr(x, y):
        return expectation(kronecker(x, y), psi).value
    return abs(corr(a, b) + corr(a, b2) + corr(a2, b) - corr(a2, b2))


@dataclass(frozen=True)
class BqmWitness:
    state: ProjectivePoint
    settings: tuple[str, str, str, str]
    value: int


@dataclass
class BqmChshSearch:
    value: int
    states_searched: int
    witnesses: list[BqmWitness]

    @property
    def states_attaining(self) -> int:
        return len(self.witnesses)


SETTING_NAMES = ("s1", "s2", "s3", "-s1", "-s2", "-s3")


def correlator_grid(psi, paulis: dict[int, HermitianAnalog]) -> np.ndarray:
    """E[k-1, l-1] = sign_map(<psi| sigma_k (x) sigma_l |psi>)."""
    grid = np.zeros((3, 3), dtype=np.int64)
    for k in (1, 2, 3):
        for l in (1, 2, 3):
            grid[k - 1, l - 1] = expectation(kronecker(paulis[k], paulis[l]), psi).value
    return grid


def chsh_max_bqm(spec: FieldSpec, states: Sequence[ProjectivePoint] | None = None) -> BqmChshSearch:
    """Maximize CHSH over physical two-particle states and settings +-sigma_k per side."""
    require_bqm_field(spec)
    if states is None:
        states = classify_states(spec, 4).physical_states
    paulis = pauli_analogs(spec)
    best, witnesses = -1, []
    for pt in states:
        g = correlator_grid(pt, paulis)
        signed = np.block([[g, -g], [-g, g]])
        val, (a, a2, b, b2) = best_quadruple(signed)
        names = tuple(SETTING_NAMES[k] for k in (a, a2, b, b2))
        w = BqmWitness(pt, names, val)
        if val > best:
            best, witnesses = val, [w]
        elif val == best:
            witnesses.append(w)
    return BqmChshSearch(best, len(states), witnesses)


def setting_operator(name: str, paulis: dict[int, HermitianAnalog]) -> Matrix:
    m = paulis[int(name[-1])].matrix
    return -m if name.startswith("-") else m


# -- indeterminate probabilities -------------------------------------------

JOINT = ("++", "+-", "-+", "--")
_SIGNS = {"++": 1, "+-": -1, "-+": -1, "--": 1}


@dataclass
class ConstraintSet:
    """Linear constraints on P(++), P(+-), P(-+), P(--) implied by one expectation value."""

    expectation: int
    equations: list[tuple[dict[str, int], Fraction]]
    forced: dict[str, Fraction]
    sums: list[tuple[tuple[str, ...], Fraction]]
    free_parameters: int

    def describe(self) -> list[str]:
        lines = []
        for coeffs, rhs in self.equations:
            lhs = " ".join(
                f"{'+' if c > 0 else '-'} P({k})" for k, c in coeffs.items()
            ).lstrip("+ ")
            lines.append(f"{lhs} = {frac_str(rhs)}")
        return lines


def constraints_for_value(ev: int) -> ConstraintSet:
    """Solve normalization plus sum s*t*P(st) = ev together with P >= 0."""
    if ev not in (-1, 0, 1):
        raise ValueError(f"expectation value must be -1, 0 or +1, got {ev}")
    equations = [
        ({k: 1 for k in JOINT}, Fraction(1)),
        ({k: _SIGNS[k] for k in JOINT}, Fraction(ev)),
    ]
    # Adding/subtracting the two equations isolates the correlated and
    # anticorrelated totals.
    same = Fraction(1 + ev, 2)
    diff = Fraction(1 - ev, 2)
    forced: dict[str, Fraction] = {}
    sums = []
    for group, total in ((("++", "--"), same), (("+-", "-+"), diff)):
        if total == 0:
            for k in group:
                forced[k] = Fraction(0)
        else:
            sums.append((group, total))
    free = sum(len(group) - 1 for group, _ in sums)
    return ConstraintSet(ev, equations, forced, sums, free)


def probability_constraints(psi, op: Operator) -> ConstraintSet:
    """Constraints on the joint outcome probabilities of a +-1 product operator."""
    return constraints_for_value(expectation(op, psi).value)


# -- projective unitary group ----------------------------------------------

def _is_unitary_up_to_scale(m: Matrix) -> bool:
    g = dagger(m) @ m
    c = g.rows[0][0]
    return (
        c.value != 0
        and c.in_prime_subfield
        and all((x == c) if i == j else x.value == 0
                for i, row in enumerate(g.rows) for j, x in enumerate(row))
    )


def enumerate_pu(spec: FieldSpec, dim: int = 2) -> list[Matrix]:
    """Canonical representatives of {U : U^dagger U = +-1}, up to nonzero scalars.

    Rescaling U by c multiplies U^dagger U by the norm c^(p+1), which runs
    over all of F_p^*, so a PGL class qualifies exactly when its canonical
    representative has U^dagger U equal to a nonzero scalar of F_p.
    """
    require_bqm_field(spec)
    if dim != 2:
        raise ValueError("only PU(2, p^2) is supported")
    limits.check("GALOIS_QM_MAX_PGL_Q", spec.q, "PU(2, q) field order")
    return [m for m in enumerate_pgl(spec, 2) if _is_unitary_up_to_scale(m)]


def maps_systems_to_systems(u: Matrix, systems: Sequence[BiorthogonalSystem]) -> bool:
    """Whether u sends the ket set of each system onto the ket set of some system."""
    known = {s.ket_set() for s in systems}
    for s in systems:
        image = frozenset(canonicalize(apply(u, k.rep)) for k in s.kets)
        if image not in known:
            return False
    return True


def is_closed_group(elements: Sequence[Matrix]) -> bool:
    members = set(elements)
    return all(canonicalize_matrix(a @ b) in members for a in elements for b in elements)


def named_states(spec: FieldSpec) -> dict[str, Vector]:
    """The ten one-particle states of F_p[i]^2 under their conventional letters a..j.

    Only meaningful as a complete list for p = 3; for larger p the letters
    still name the same vectors.
    """
    require_bqm_field(spec)
    one, zero, i = spec.one, spec.zero, spec.x
    seconds = {
        "c": one, "d": -one, "e": i, "f": -i,
        "g": one + i, "h": -one - i, "i": one - i, "j": -one + i,
    }
    out = {"a": Vector([one, zero]), "b": Vector([zero, one])}
    out.update({k: Vector([one, v]) for k, v in seconds.items()})
    return out
