"""Probability-rule model: distributions, the singlet table, CHSH search."""

import itertools
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from galois_qm import gqm
from galois_qm.chsh import best_quadruple
from galois_qm.field import field_of_order
from galois_qm.projective import Vector, bracket, enumerate_projective, tensor

from conftest import SMALL_Q

TABLE1 = [
    ((F(0), F(1, 2), F(1, 2), F(0)), F(-1)),
    ((F(0), F(1, 3), F(1, 3), F(1, 3)), F(-1, 3)),
    ((F(1, 3), F(1, 3), F(0), F(1, 3)), F(1, 3)),
    ((F(1, 4), F(1, 4), F(1, 4), F(1, 4)), F(0)),
]


def oracle_distribution(duals, v):
    """Count nonzero brackets directly; each one gets equal weight."""
    hits = [1 if bracket(x, v).value else 0 for x in duals]
    return [F(h, sum(hits)) for h in hits]


def test_standard_duals_annihilate_their_state(small_field):
    states = gqm.standard_states(small_field)
    duals = gqm.standard_duals(small_field)
    assert len(states) == small_field.q + 1
    for r, (st_, d) in enumerate(zip(states, duals)):
        assert bracket(d, st_.vector) == 0
        for s, other in enumerate(states):
            if s != r:
                assert bracket(d, other.vector) != 0


def test_spin_observable_on_basis_states(small_field):
    states = gqm.standard_states(small_field)
    for r, s in [(0, 1), (1, 0), (0, 2), (2, 1)]:
        obs = gqm.spin_observable(small_field, r, s)
        # <r| kills |r>, so measuring |r> yields the outcome attached to <s|
        assert gqm.expectation(obs, states[r]) == -1
        assert gqm.expectation(obs, states[s]) == 1
        assert gqm.expectation(obs.reversed(), states[r]) == 1


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_table1(q):
    rows = gqm.table1(field_of_order(q))
    for row, (probs, ev) in zip(rows, TABLE1):
        if q == 2 and row.observable == "A_rs A_tu":
            assert not row.present
            continue
        assert row.distribution.probabilities == probs
        assert row.expectation == ev


def test_table1_index_choice_q5():
    spec = field_of_order(5)
    for idx in itertools.permutations(range(6), 4):
        state = gqm.singlet(spec, idx[0], idx[1])
        rows = gqm.table1(spec, idx, state)
        assert [(r.distribution.probabilities, r.expectation) for r in rows] == TABLE1


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_measure_matches_oracle(q):
    spec = field_of_order(q)
    psi = gqm.singlet(spec).vector
    obs = gqm.ProductObservable(gqm.spin_observable(spec, 0, 2), gqm.spin_observable(spec, 1, 0))
    duals = [x for _, x in obs.outcomes()]
    assert list(gqm.measure(obs, psi).probabilities) == oracle_distribution(duals, psi)


def test_singlet_antisymmetric(small_field):
    psi = gqm.singlet(small_field).vector
    swapped = Vector(psi.entries[k] for k in (0, 2, 1, 3))
    assert swapped == -psi


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_census_formulas(q):
    census = gqm.classify_two_particle(field_of_order(q))
    assert census.total == q**3 + q**2 + q + 1
    assert census.product == (q + 1) ** 2
    assert census.entangled == q * (q * q - 1)


@pytest.mark.parametrize("q", [2, 3])
def test_local_orbit_is_entangled_set(q):
    spec = field_of_order(q)
    entangled = set(gqm.classify_two_particle(spec).entangled_states)
    for side in (1, 2):
        assert gqm.local_orbit(gqm.singlet(spec), side) == entangled


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_exhaustive_chsh_is_two(q):
    res = gqm.chsh_max(field_of_order(q), exhaustive=True)
    assert res.value == 2
    assert res.mode == "exhaustive"
    assert res.states_searched == q * (q * q - 1)


def test_exhaustive_chsh_states_attaining():
    # regression: at q=3 every entangled state reaches the bound
    res = gqm.chsh_max(field_of_order(3), exhaustive=True)
    assert res.states_attaining == 24


@pytest.mark.parametrize("q", [7, 8, 9])
def test_singlet_mode(q):
    res = gqm.chsh_max(field_of_order(q))
    assert res.mode == "singlet" and res.value == 2


def test_chsh_brute_force_q2():
    spec = field_of_order(2)
    pairs = gqm._ordered_pairs(spec)
    best = F(0)
    for pt in gqm.classify_two_particle(spec).entangled_states:
        for quad in itertools.product(pairs, repeat=4):
            best = max(best, gqm.chsh_value(spec, pt, *quad))
    assert best == 2


def test_witnesses_recheck():
    spec = field_of_order(4)
    res = gqm.chsh_max(spec, exhaustive=True)
    for w in res.witnesses[:20]:
        assert gqm.chsh_value(spec, w.state, w.a, w.a2, w.b, w.b2) == res.value


def test_exhaustive_guard(monkeypatch):
    from galois_qm.limits import GuardError
    with pytest.raises(GuardError):
        gqm.chsh_max(field_of_order(7), exhaustive=True)


@settings(max_examples=80)
@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_best_quadruple_matches_brute(n, m, data):
    e = np.array(data.draw(st.lists(st.lists(st.integers(-12, 12), min_size=m, max_size=m),
                                    min_size=n, max_size=n)))
    brute = max(abs(e[a, b] + e[a, b2] + e[a2, b] - e[a2, b2])
                for a, a2 in itertools.product(range(n), repeat=2)
                for b, b2 in itertools.product(range(m), repeat=2))
    val, (a, a2, b, b2) = best_quadruple(e)
    assert val == brute
    assert abs(e[a, b] + e[a, b2] + e[a2, b] - e[a2, b2]) == val


@settings(max_examples=60)
@given(st.sampled_from(SMALL_Q), st.data())
def test_scalar_invariance(q, data):
    spec = field_of_order(q)
    pt = data.draw(st.sampled_from(enumerate_projective(spec, 4)))
    c = spec.element_at(data.draw(st.integers(1, q - 1)))
    r, s = data.draw(st.permutations(range(q + 1)))[:2]
    t, u = data.draw(st.permutations(range(q + 1)))[:2]
    obs = gqm.ProductObservable(gqm.spin_observable(spec, r, s), gqm.spin_observable(spec, t, u))
    assert gqm.measure(obs, pt.rep) == gqm.measure(obs, pt.rep.scale(c))
    assert gqm.expectation(obs, pt.rep) == gqm.expectation(obs, pt.rep.scale(c))


@settings(max_examples=60)
@given(st.sampled_from(SMALL_Q), st.data())
def test_product_states_factorize(q, data):
    spec = field_of_order(q)
    pts = enumerate_projective(spec, 2)
    u = data.draw(st.sampled_from(pts)).rep
    v = data.draw(st.sampled_from(pts)).rep
    r, s = data.draw(st.permutations(range(q + 1)))[:2]
    t, w = data.draw(st.permutations(range(q + 1)))[:2]
    a, b = gqm.spin_observable(spec, r, s), gqm.spin_observable(spec, t, w)
    joint = gqm.measure(gqm.ProductObservable(a, b), tensor(u, v))
    ma, mb = gqm.measure(a, u), gqm.measure(b, v)
    for (x, y), p in joint.outcomes:
        assert p == ma[x] * mb[y]
    assert joint.expectation() == ma.expectation() * mb.expectation()
    assert sum(joint.probabilities) == 1
