"""Projective spaces, tensor products and PGL(2, q)."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from galois_qm.field import field_of_order
from galois_qm.limits import GuardError
from galois_qm.projective import (
    DualVector, Matrix, Vector, apply_local, bracket, canonicalize, canonicalize_matrix,
    enumerate_pgl, enumerate_projective, is_product_state, kron, point_index, tensor,
)

from conftest import SMALL_Q


def brute_points(spec, dim):
    """Classes of nonzero vectors under scaling, found by orbit closure."""
    seen, classes = set(), []
    for vals in itertools.product(spec.elements(), repeat=dim):
        if not any(v.value for v in vals):
            continue
        key = tuple(v.value for v in vals)
        if key in seen:
            continue
        orbit = {tuple((c * v).value for v in vals) for c in spec.nonzero()}
        seen |= orbit
        classes.append(orbit)
    return classes


@pytest.mark.parametrize("q", SMALL_Q)
@pytest.mark.parametrize("dim", [2, 4])
def test_point_count(q, dim):
    spec = field_of_order(q)
    pts = enumerate_projective(spec, dim)
    assert len(pts) == (q**dim - 1) // (q - 1)
    assert [p.index for p in pts] == list(range(len(pts)))
    assert all(point_index(p.rep) == p.index for p in pts)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_points_are_scaling_classes(q):
    spec = field_of_order(q)
    pts = enumerate_projective(spec, 3)
    classes = brute_points(spec, 3)
    assert len(classes) == len(pts)
    for p in pts:
        assert sum(p.rep.key() in c for c in classes) == 1


def test_canonical_order_gf3():
    reps = [p.rep.key() for p in enumerate_projective(field_of_order(3), 2)]
    assert reps == [(0, 1), (1, 0), (1, 1), (1, 2)]


@pytest.mark.parametrize("q", SMALL_Q)
def test_pgl_order(q):
    spec = field_of_order(q)
    group = enumerate_pgl(spec)
    assert len(group) == q * (q * q - 1)
    assert len(set(group)) == len(group)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_pgl_closed(q):
    group = set(enumerate_pgl(field_of_order(q)))
    sample = sorted(group, key=lambda m: m.key())[:: max(1, len(group) // 12)]
    for a in sample:
        for b in group:
            assert canonicalize_matrix(a @ b) in group


def test_pgl_guard(monkeypatch):
    monkeypatch.setenv("GALOIS_QM_MAX_PGL_Q", "4")
    with pytest.raises(GuardError):
        enumerate_pgl(field_of_order(5))


def test_vector_guard(monkeypatch):
    monkeypatch.setenv("GALOIS_QM_MAX_VECTORS", "100")
    with pytest.raises(GuardError):
        enumerate_projective(field_of_order(5), 4)


def test_bracket_factorizes_gf3():
    spec = field_of_order(3)
    vecs = [p.rep for p in enumerate_projective(spec, 2)]
    duals = [DualVector(v.entries) for v in vecs]
    for x, y in itertools.product(duals, repeat=2):
        for u, v in itertools.product(vecs, repeat=2):
            assert bracket(tensor(x, y), tensor(u, v)) == bracket(x, u) * bracket(y, v)


def test_tensor_row_major(gf9):
    v = Vector.of(gf9, [1, 2])
    w = Vector.of(gf9, [0, 1])
    assert tensor(v, w).key() == (0, 1, 0, 2)


def test_kron_acts_factorwise():
    spec = field_of_order(5)
    a = Matrix.of(spec, [[1, 2], [3, 4]])
    b = Matrix.of(spec, [[0, 1], [1, 1]])
    u, v = Vector.of(spec, [1, 3]), Vector.of(spec, [2, 4])
    assert kron(a, b) @ tensor(u, v) == tensor(a @ u, b @ v)
    assert apply_local(a, 1, tensor(u, v)) == tensor(a @ u, v)
    assert apply_local(b, 2, tensor(u, v)) == tensor(u, b @ v)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_product_state_count(q):
    spec = field_of_order(q)
    pts = enumerate_projective(spec, 4)
    product = sum(is_product_state(p.rep) for p in pts)
    assert product == (q + 1) ** 2
    built = {canonicalize(tensor(a.rep, b.rep)) for a in enumerate_projective(spec, 2)
             for b in enumerate_projective(spec, 2)}
    assert len(built) == product and all(is_product_state(p.rep) for p in built)


@settings(max_examples=60)
@given(st.sampled_from(SMALL_Q), st.data())
def test_canonicalize_is_scale_invariant(q, data):
    spec = field_of_order(q)
    vals = data.draw(st.lists(st.integers(0, q - 1), min_size=4, max_size=4).filter(any))
    v = Vector(spec.element_at(x) for x in vals)
    c = spec.element_at(data.draw(st.integers(1, q - 1)))
    assert canonicalize(v.scale(c)) == canonicalize(v)
    assert canonicalize(v).rep.entries[next(k for k, x in enumerate(vals) if x)] == spec.one


@settings(max_examples=60)
@given(st.sampled_from([3, 4, 5, 7]), st.data())
def test_determinant_multiplicative(q, data):
    spec = field_of_order(q)
    el = st.integers(0, q - 1)
    a = Matrix.of(spec, [[data.draw(el), data.draw(el)], [data.draw(el), data.draw(el)]])
    b = Matrix.of(spec, [[data.draw(el), data.draw(el)], [data.draw(el), data.draw(el)]])
    assert (a @ b).determinant() == a.determinant() * b.determinant()
