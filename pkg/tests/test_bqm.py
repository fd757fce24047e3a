"""Expectation-value model over GF(p^2)."""

import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from galois_qm import bqm
from galois_qm.field import field_of_order, format_element
from galois_qm.projective import Matrix, Vector, canonicalize, canonicalize_matrix, enumerate_pgl, enumerate_projective, tensor


@pytest.fixture(scope="module")
def spec():
    return bqm.bqm_field(3)


@pytest.fixture(scope="module")
def census4(spec):
    return bqm.classify_states(spec, 4)


def signed(v):
    return tuple(format_element(x, signed=True) for x in v)


def test_field_requirements():
    assert bqm.bqm_field(7).q == 49
    for bad in (5, 2, 13):
        with pytest.raises(ValueError):
            bqm.bqm_field(bad)
    with pytest.raises(ValueError):
        bqm.dot(Vector.of(field_of_order(3), [1, 0]), Vector.of(field_of_order(3), [1, 0]))


def test_catalogue_p3(spec):
    names = bqm.named_states(spec)
    assert len({canonicalize(v) for v in names.values()}) == 10
    assert {canonicalize(v) for v in names.values()} == set(enumerate_projective(spec, 2))
    physical = {k for k, v in names.items() if bqm.is_physical(v)}
    assert physical == set("abcdef")
    duals = {k: signed(bqm.conjugate_dual(names[k])) for k in "abcdef"}
    assert duals == {
        "a": ("1", "0"), "b": ("0", "1"),
        "c": ("-1", "-1"), "d": ("-1", "1"),
        "e": ("-1", "i"), "f": ("-1", "-i"),
    }
    for k in "ghij":
        with pytest.raises(bqm.NonPhysicalStateError):
            bqm.conjugate_dual(names[k])


def test_dual_normalization(spec):
    for pt in enumerate_projective(spec, 2):
        if bqm.is_physical(pt.rep):
            from galois_qm.projective import bracket
            assert bracket(bqm.conjugate_dual(pt.rep), pt.rep) == 1


def test_three_systems(spec):
    names = bqm.named_states(spec)
    systems = bqm.enumerate_biorthogonal_systems(spec)
    expected = {frozenset(canonicalize(names[k]) for k in pair) for pair in ("ab", "cd", "ef")}
    assert {s.ket_set() for s in systems} == expected
    assert all(s.is_biorthogonal() for s in systems)


def test_system_count_gf49():
    # regression: one system per pair of mutually orthogonal physical points
    systems = bqm.enumerate_biorthogonal_systems(bqm.bqm_field(7))
    assert len(systems) == 21
    assert bqm.classify_states(bqm.bqm_field(7), 2).physical == 42


def test_pauli_matrices(spec):
    paulis = bqm.pauli_analogs(spec)
    i = spec.x
    assert paulis[1].matrix == Matrix.of(spec, [[0, 1], [1, 0]])
    assert paulis[2].matrix == Matrix([[spec.zero, -i], [i, spec.zero]])
    assert paulis[3].matrix == Matrix.of(spec, [[1, 0], [0, -1]])
    for h in paulis.values():
        assert bqm.dagger(h.matrix) == h.matrix


def test_sigma1_expectations(spec):
    names = bqm.named_states(spec)
    s1 = bqm.pauli_analogs(spec)[1]
    assert [bqm.expectation(s1, names[k]).value for k in "abcdef"] == [0, 0, 1, -1, 0, 0]


@pytest.mark.parametrize("p", [3, 7])
def test_eigen_relation(p):
    spec = bqm.bqm_field(p)
    for h in bqm.pauli_analogs(spec).values():
        for alpha, ket in zip(h.eigenvalues, h.system.kets):
            assert h.matrix @ ket.rep == ket.rep.scale(alpha)
            assert bqm.expectation(h, ket).value == (1 if alpha == 1 else -1)


def test_census(census4):
    c = census4
    assert (c.total, c.product, c.entangled) == (820, 100, 720)
    assert (c.entangled_physical, c.entangled_unphysical) == (504, 216)
    assert c.physical == 540 and c.product_physical == 36


def test_u_state(spec):
    u = bqm.u_state(spec)
    assert signed(u.dual) == ("1", "0", "1", "1-i")
    p = bqm.pauli_analogs(spec)
    corr = [bqm.expectation(bqm.kronecker(p[x], p[y]), u).value for x, y in ((1, 1), (1, 3), (3, 3), (3, 1))]
    assert corr == [-1, -1, -1, 1]
    assert bqm.chsh_bqm(u, p[1], p[3], p[3], p[1]) == 4


def test_global_chsh(spec, census4):
    res = bqm.chsh_max_bqm(spec, census4.physical_states)
    assert res.value == 4
    assert res.states_searched == 540
    assert res.states_attaining == 288  # regression value
    assert bqm.u_state(spec).point in {w.state for w in res.witnesses}
    paulis = bqm.pauli_analogs(spec)
    for w in res.witnesses[:25]:
        ops = [bqm.setting_operator(n, paulis) for n in w.settings]
        assert bqm.chsh_bqm(w.state, *ops) == 4


def test_product_states_stay_classical(spec):
    phys = bqm.classify_states(spec, 2).physical_states
    prods = [canonicalize(tensor(a.rep, b.rep)) for a in phys for b in phys]
    assert bqm.chsh_max_bqm(spec, prods).value == 2


@settings(max_examples=50)
@given(st.data())
def test_product_factorization(data):
    spec = bqm.bqm_field(3)
    phys = bqm.classify_states(spec, 2).physical_states
    u = data.draw(st.sampled_from(phys)).rep
    v = data.draw(st.sampled_from(phys)).rep
    paulis = bqm.pauli_analogs(spec)
    a = paulis[data.draw(st.sampled_from([1, 2, 3]))]
    b = paulis[data.draw(st.sampled_from([1, 2, 3]))]
    joint = bqm.expectation(bqm.kronecker(a, b), tensor(u, v))
    assert joint.value == bqm.expectation(a, u).value * bqm.expectation(b, v).value
    c = spec.element_at(data.draw(st.integers(1, 8)))
    assert bqm.expectation(a, u.scale(c)) == bqm.expectation(a, u)


def test_sigma33_constraints(spec):
    p = bqm.pauli_analogs(spec)
    cs = bqm.probability_constraints(bqm.u_state(spec), bqm.kronecker(p[3], p[3]))
    assert cs.expectation == -1
    assert cs.forced == {"++": F(0), "--": F(0)}
    assert cs.sums == [(("+-", "-+"), F(1))]
    assert cs.free_parameters == 1


@pytest.mark.parametrize("ev", [-1, 0, 1])
def test_constraint_sets_solve_the_system(ev):
    cs = bqm.constraints_for_value(ev)
    # every vertex of the solution polytope satisfies all equations
    grid = [F(k, 4) for k in range(5)]
    sols = [dict(zip(bqm.JOINT, ps)) for ps in itertools.product(grid, repeat=4)
            if all(sum(c * dict(zip(bqm.JOINT, ps))[k] for k, c in co.items()) == rhs
                   for co, rhs in cs.equations)]
    assert sols
    for s in sols:
        assert all(s[k] == 0 for k in cs.forced)
        assert all(sum(s[k] for k in g) == t for g, t in cs.sums)
    assert cs.free_parameters == (2 if ev == 0 else 1)


def test_pu_group(spec):
    pu = bqm.enumerate_pu(spec)
    assert len(pu) == 24  # matches |PGL(2, 3)|
    assert bqm.is_closed_group(pu)
    pgl = set(enumerate_pgl(spec))
    assert all(m in pgl for m in pu)
    systems = bqm.enumerate_biorthogonal_systems(spec)
    assert all(bqm.maps_systems_to_systems(m, systems) for m in pu)
    assert Matrix.identity(spec, 2) in pu
    for h in bqm.pauli_analogs(spec).values():
        assert canonicalize_matrix(h.matrix) in pu


def test_non_unitary_breaks_systems(spec):
    m = Matrix.of(spec, [[1, 1], [0, 1]])
    assert m not in bqm.enumerate_pu(spec)
    assert not bqm.maps_systems_to_systems(m, bqm.enumerate_biorthogonal_systems(spec))
