"""Probability-rule quantum model over GF(q).

States are points of PG(N-1, q); an observable is an ordered basis of the
dual space, one dual vector per outcome.  The probability of an outcome is

    P(x | psi) = |<x|psi>| / sum_y |<y|psi>|

with the absolute value map of :func:`galois_qm.field.abs_map`, so every
outcome with a nonzero bracket gets equal weight.  All probabilities are
``fractions.Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

import numpy as np

from . import limits
from .chsh import best_quadruple
from .field import FieldSpec, abs_map
from .probability import OutcomeDistribution
from .projective import (
    DualVector,
    ProjectivePoint,
    Vector,
    apply_local,
    bracket,
    canonicalize,
    enumerate_pgl,
    enumerate_projective,
    is_product_state,
    matrix_from_state,
    tensor,
)

PLUS, MINUS = 1, -1
JOINT_LABELS = ((PLUS, PLUS), (PLUS, MINUS), (MINUS, PLUS), (MINUS, MINUS))


@dataclass(frozen=True)
class GqmState:
    point: ProjectivePoint

    @property
    def vector(self) -> Vector:
        return self.point.rep

    @classmethod
    def from_vector(cls, v: Vector) -> "GqmState":
        return cls(canonicalize(v))


@dataclass(frozen=True)
class SpinObservable:
    """Outcome +1 on ``plus`` and -1 on ``minus``; swapping the pair negates it.

    ``indices`` records (r, s) when the pair is the standard A_rs.
    """

    plus: DualVector
    minus: DualVector
    indices: tuple[int, int] | None = None

    def __post_init__(self):
        a, b = self.plus.entries, self.minus.entries
        if len(a) != len(b):
            raise ValueError("dual vectors of different length")
        if len(a) == 2 and (a[0] * b[1] - a[1] * b[0]).value == 0:
            raise ValueError("plus and minus duals are linearly dependent")

    @property
    def name(self) -> str:
        if self.indices is None:
            return "A"
        r, s = self.indices
        return f"A_{r}{s}" if r < 10 and s < 10 else f"A_{r},{s}"

    def reversed(self) -> "SpinObservable":
        idx = None if self.indices is None else self.indices[::-1]
        return SpinObservable(self.minus, self.plus, idx)

    def outcomes(self):
        return ((PLUS, self.plus), (MINUS, self.minus))


@dataclass(frozen=True)
class ProductObservable:
    """Joint measurement of ``first`` on particle 1 and ``second`` on particle 2."""

    first: SpinObservable
    second: SpinObservable

    @property
    def name(self) -> str:
        return f"{self.first.name} {self.second.name}"

    def outcomes(self):
        for s, x in self.first.outcomes():
            for t, y in self.second.outcomes():
                yield (s, t), tensor(x, y)


Observable = Union[SpinObservable, ProductObservable]


def standard_states(spec: FieldSpec) -> list[GqmState]:
    """|0> = (1,0), |1> = (0,1), |r> = (g^(r-1), 1) for r = 2..q."""
    g = spec.generator
    vecs = [Vector([spec.one, spec.zero]), Vector([spec.zero, spec.one])]
    vecs += [Vector([g ** (r - 1), spec.one]) for r in range(2, spec.q + 1)]
    return [GqmState.from_vector(v) for v in vecs]


def standard_duals(spec: FieldSpec) -> list[DualVector]:
    """<0| = [0,-1], <1| = [1,0], <r| = [1,-g^(r-1)]; <r|r> = 0 for every r."""
    g = spec.generator
    duals = [DualVector([spec.zero, -spec.one]), DualVector([spec.one, spec.zero])]
    duals += [DualVector([spec.one, -(g ** (r - 1))]) for r in range(2, spec.q + 1)]
    return duals


def spin_observable(spec: FieldSpec, r: int, s: int) -> SpinObservable:
    """The observable A_rs built from the standard duals."""
    if r == s:
        raise ValueError("A_rs needs r != s")
    duals = standard_duals(spec)
    return SpinObservable(duals[r], duals[s], (r, s))


def _as_vector(psi) -> Vector:
    if isinstance(psi, GqmState):
        return psi.vector
    if isinstance(psi, ProjectivePoint):
        return psi.rep
    return psi


def measure(obs: Observable, psi) -> OutcomeDistribution:
    """Outcome distribution of ``obs`` on ``psi`` (a state, point or raw vector)."""
    v = _as_vector(psi)
    weights = [(label, abs_map(bracket(x, v))) for label, x in obs.outcomes()]
    total = sum(w for _, w in weights)
    if total == 0:
        raise ValueError("every bracket vanishes; the outcome duals do not span")
    return OutcomeDistribution(tuple((label, Fraction(w, total)) for label, w in weights))


def expectation(obs: Observable, psi) -> Fraction:
    return measure(obs, psi).expectation()


def singlet(spec: FieldSpec, r: int = 0, s: int = 1) -> GqmState:
    """|r>(x)|s> - |s>(x)|r> (the sign is immaterial in characteristic 2)."""
    if r == s:
        raise ValueError("singlet needs r != s")
    states = standard_states(spec)
    a, b = states[r].vector, states[s].vector
    return GqmState.from_vector(tensor(a, b) - tensor(b, a))


@dataclass
class TwoParticleCensus:
    total: int
    product: int
    entangled: int
    entangled_states: list[ProjectivePoint] = field(repr=False, default_factory=list)


def classify_two_particle(spec: FieldSpec) -> TwoParticleCensus:
    points = enumerate_projective(spec, 4)
    entangled = [pt for pt in points if not is_product_state(pt.rep)]
    return TwoParticleCensus(len(points), len(points) - len(entangled), len(entangled), entangled)


@dataclass(frozen=True)
class Table1Row:
    observable: str
    distribution: OutcomeDistribution | None
    expectation: Fraction | None

    @property
    def present(self) -> bool:
        return self.distribution is not None


TABLE1_ROWS = ("A_rs A_rs", "A_rs A_rt", "A_rs A_st", "A_rs A_tu")


def table1(spec: FieldSpec, indices: tuple[int, int, int, int] = (0, 1, 2, 3),
           state: GqmState | None = None) -> list[Table1Row]:
    """Singlet probabilities of the four product-observable patterns.

    ``indices`` supplies distinct (r, s, t, u); patterns needing more
    distinct indices than the q+1 available states are returned absent.
    """
    r, s, t, u = indices
    if len(set(indices)) != 4 and spec.q + 1 >= 4:
        raise ValueError("indices must be distinct")
    psi = singlet(spec) if state is None else state
    available = spec.q + 1
    patterns = [((r, s), (r, s), 2), ((r, s), (r, t), 3), ((r, s), (s, t), 3), ((r, s), (t, u), 4)]
    rows = []
    for name, (left, right, needed) in zip(TABLE1_ROWS, patterns):
        if needed > available or max(left + right) >= available:
            rows.append(Table1Row(name, None, None))
            continue
        obs = ProductObservable(spin_observable(spec, *left), spin_observable(spec, *right))
        dist = measure(obs, psi)
        rows.append(Table1Row(name, dist, dist.expectation()))
    return rows


# -- CHSH search -----------------------------------------------------------

@dataclass(frozen=True)
class ChshWitness:
    state: ProjectivePoint
    a: tuple[int, int]
    a2: tuple[int, int]
    b: tuple[int, int]
    b2: tuple[int, int]
    value: Fraction


@dataclass
class ChshSearch:
    value: Fraction
    mode: str
    states_searched: int
    witnesses: list[ChshWitness]

    @property
    def states_attaining(self) -> int:
        return len(self.witnesses)


def chsh_value(spec: FieldSpec, psi, a, a2, b, b2) -> Fraction:
    """|P(a,b) + P(a,b') + P(a',b) - P(a',b')| for index pairs a=(r,s) etc."""
    def corr(x, y):
        obs = ProductObservable(spin_observable(spec, *x), spin_observable(spec, *y))
        return expectation(obs, psi)
    return abs(corr(a, b) + corr(a, b2) + corr(a2, b) - corr(a2, b2))


def _ordered_pairs(spec: FieldSpec) -> list[tuple[int, int]]:
    n = spec.q + 1
    return [(r, s) for r in range(n) for s in range(n) if r != s]


def _nonzero_table(duals: list[DualVector], psi: Vector) -> np.ndarray:
    """Z[x, y] = |(<x| (x) <y|) psi| for every pair of standard duals."""
    m = matrix_from_state(psi)
    n = len(duals)
    cols = [[m.rows[k][0] * y[0] + m.rows[k][1] * y[1] for k in range(2)] for y in duals]
    z = np.zeros((n, n), dtype=np.int64)
    for i, x in enumerate(duals):
        for j, c in enumerate(cols):
            z[i, j] = 1 if (x[0] * c[0] + x[1] * c[1]).value else 0
    return z


# every denominator is the count of nonzero brackets, 1..4, which divides 12
_SCALE = 12


def _scaled_correlators(z: np.ndarray, pairs: list[tuple[int, int]]) -> np.ndarray:
    r = np.array([p[0] for p in pairs])
    s = np.array([p[1] for p in pairs])
    npp, npm = z[np.ix_(r, r)], z[np.ix_(r, s)]
    nmp, nmm = z[np.ix_(s, r)], z[np.ix_(s, s)]
    num = (npp - npm - nmp + nmm) * _SCALE
    den = npp + npm + nmp + nmm
    assert (num % den == 0).all()
    return num // den


def chsh_max(spec: FieldSpec, exhaustive: bool | None = None) -> ChshSearch:
    """Maximize the CHSH combination over spin observables A_rs.

    Exhaustive mode searches every entangled state; singlet mode searches the
    singlet only, which suffices because local PGL(2, q) acts transitively
    on entangled states (checked separately by :func:`local_orbit`).  The
    default is exhaustive whenever q is within GALOIS_QM_MAX_EXHAUSTIVE_Q.
    """
    if exhaustive is None:
        exhaustive = spec.q <= limits.limit("GALOIS_QM_MAX_EXHAUSTIVE_Q")
    if exhaustive:
        limits.check("GALOIS_QM_MAX_EXHAUSTIVE_Q", spec.q, "exhaustive CHSH field order")
        states = classify_two_particle(spec).entangled_states
    else:
        limits.check("GALOIS_QM_MAX_SINGLET_Q", spec.q, "singlet CHSH field order")
        states = [singlet(spec).point]
    duals = standard_duals(spec)
    pairs = _ordered_pairs(spec)
    best = -1
    witnesses: list[ChshWitness] = []
    for pt in states:
        e = _scaled_correlators(_nonzero_table(duals, pt.rep), pairs)
        val, (a, a2, b, b2) = best_quadruple(e)
        w = ChshWitness(pt, pairs[a], pairs[a2], pairs[b], pairs[b2], Fraction(val, _SCALE))
        if val > best:
            best, witnesses = val, [w]
        elif val == best:
            witnesses.append(w)
    return ChshSearch(Fraction(best, _SCALE), "exhaustive" if exhaustive else "singlet",
                      len(states), witnesses)


def local_orbit(psi: GqmState, side: int = 1) -> set[ProjectivePoint]:
    """Orbit of a two-particle state under PGL(2, q) acting on one particle."""
    spec = psi.vector.spec
    return {canonicalize(apply_local(m, side, psi.vector)) for m in enumerate_pgl(spec)}
