import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from qbloewner.core import (LinearSystem, QBSystem, eval_H1, eval_H2,
                            is_symmetric_Q, quad_apply, resolvent_apply,
                            symmetrize_Q, to_standard_form)
from qbloewner.errors import ShapeError, SingularE, SingularResolvent
from qbloewner.models import DiodeToyParams, toy_lifted_qb, toy_linearized

from conftest import random_stable_qb


def dense_resolvent(sys, s, v):
    return np.linalg.inv(s * sys.E - sys.A) @ v


def test_resolvent_identity_diagonal():
    sys = LinearSystem(np.eye(2), np.zeros((2, 2)), [1, 1], [1, 1])
    np.testing.assert_allclose(resolvent_apply(sys, 2, [1, 1]), [0.5, 0.5])


def test_resolvent_scalar():
    sys = LinearSystem([[1.0]], [[-1.0]], [1.0], [1.0])
    np.testing.assert_allclose(resolvent_apply(sys, 0, [3.0]), [3.0])


def test_resolvent_toy_lifted_matches_dense_inverse():
    qb = toy_lifted_qb(DiodeToyParams())
    got = resolvent_apply(qb, 1j, qb.B)
    np.testing.assert_allclose(got, dense_resolvent(qb, 1j, qb.B), rtol=1e-12)


def test_resolvent_matches_dense_inverse_random(rng):
    for n in range(1, 11):
        sys = random_stable_qb(n, rng)
        s = complex(rng.standard_normal(), rng.standard_normal())
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        ref = dense_resolvent(sys, s, v)
        got = resolvent_apply(sys, s, v)
        assert np.linalg.norm(got - ref) <= 1e-10 * np.linalg.norm(ref)


def test_resolvent_singular_at_eigenvalue():
    sys = LinearSystem(np.eye(2), np.diag([-1.0, -2.0]), [1, 1], [1, 1])
    with pytest.raises(SingularResolvent):
        resolvent_apply(sys, -2.0, [1.0, 1.0])
    # the lifted toy circuit has structural zero eigenvalues
    qb = toy_lifted_qb(DiodeToyParams())
    with pytest.raises(SingularResolvent):
        eval_H1(qb, 0.0)


def test_singular_E_rejected():
    with pytest.raises(SingularE):
        LinearSystem(np.diag([1.0, 1e-14]), -np.eye(2), [1, 1], [1, 1])
    with pytest.raises(SingularE):
        LinearSystem([[1.0, 1.0], [1.0, 1.0]], -np.eye(2), [1, 1], [1, 1])


def test_shape_errors():
    with pytest.raises(ShapeError):
        LinearSystem(np.eye(2), np.eye(3), [1, 1], [1, 1])
    with pytest.raises(ShapeError):
        QBSystem(np.eye(2), -np.eye(2), np.zeros((2, 3)), np.zeros((2, 2)),
                 [1, 1], [1, 1])
    with pytest.raises(ShapeError):
        quad_apply(np.zeros((2, 4)), np.ones(3), np.ones(3))


def test_symmetric_flag_enforced():
    Q = np.zeros((2, 4))
    Q[0, 1] = 1.0
    with pytest.raises(ValueError):
        QBSystem(np.eye(2), -np.eye(2), Q, np.zeros((2, 2)), [1, 1], [1, 1],
                 symmetric=True)


def test_H1_zero_input_map():
    sys = LinearSystem(np.eye(3), -np.eye(3), np.zeros(3), np.ones(3))
    for s in (0.0, 1j, 3 - 2j):
        assert eval_H1(sys, s) == 0


def test_H1_toy_values():
    lin = toy_linearized(DiodeToyParams())
    assert eval_H1(lin, 0) == pytest.approx(2.0, rel=1e-14)
    assert eval_H1(lin, 1j) == pytest.approx(1 - 1j, rel=1e-14)


def test_H2_vanishes_without_nonlinearity(rng):
    n = 3
    sys = QBSystem(np.eye(n), -2 * np.eye(n), np.zeros((n, n * n)),
                   np.zeros((n, n)), rng.standard_normal(n),
                   rng.standard_normal(n))
    assert eval_H2(sys, 1j, 2j) == 0
    bil = QBSystem(np.eye(n), -2 * np.eye(n), None, np.zeros((n, n)),
                   np.ones(n), np.ones(n))
    assert eval_H2(bil, 0.5j, -3j) == 0


def test_H2_symmetric_in_arguments(rng):
    for n in (2, 4, 7):
        sys = random_stable_qb(n, rng)
        for _ in range(10):
            s1, s2 = 1j * rng.uniform(-10, 10, 2)
            a, b = eval_H2(sys, s1, s2), eval_H2(sys, s2, s1)
            assert abs(a - b) <= 1e-12 * abs(a)
        assert eval_H2(sys, 1j, 2j) == pytest.approx(eval_H2(sys, 2j, 1j),
                                                     rel=1e-12)


def test_H2_against_explicit_formula(rng):
    sys = random_stable_qb(3, rng, symmetric=False)
    s1, s2 = 0.3j, -1.7j
    inv = lambda s: np.linalg.inv(s * sys.E - sys.A)
    a, b = inv(s1) @ sys.B, inv(s2) @ sys.B
    ref = sys.C @ inv(s1 + s2) @ (sys.Q @ np.kron(a, b)
                                  + 0.5 * sys.N @ (a + b))
    assert eval_H2(sys, s1, s2) == pytest.approx(ref, rel=1e-12)


def test_quad_apply_symmetric_example():
    Q = np.array([[0, 1, 1, 0], [0, 0, 0, 0]], dtype=float)
    v, w = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    np.testing.assert_array_equal(quad_apply(Q, v, w), [1, 0])
    np.testing.assert_array_equal(quad_apply(Q, w, v), [1, 0])
    np.testing.assert_array_equal(quad_apply(np.zeros((2, 4)), v, w), [0, 0])


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 20), st.integers(0, 2**32 - 1))
def test_quad_apply_bitwise_equals_kron(n, seed):
    rng = np.random.default_rng(seed)
    Q = rng.standard_normal((n, n * n))
    v, w = rng.standard_normal(n), rng.standard_normal(n)
    np.testing.assert_array_equal(quad_apply(Q, v, w), Q @ np.kron(v, w))


def test_symmetrize_examples(rng):
    Q = np.array([[0, 2, 0, 0], [0, 0, 0, 0]], dtype=float)
    np.testing.assert_array_equal(symmetrize_Q(Q)[0], [0, 1, 1, 0])
    Qs = np.array([[0, 1, 1, 0], [3, 0, 0, 5]], dtype=float)
    np.testing.assert_array_equal(symmetrize_Q(Qs), Qs)
    assert is_symmetric_Q(Qs) and not is_symmetric_Q(Q)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8).flatmap(
    lambda n: arrays(float, (n, n * n),
                     elements=st.floats(-1e3, 1e3, allow_nan=False))))
def test_symmetrize_properties(Q):
    n = Q.shape[0]
    Qs = symmetrize_Q(Q)
    np.testing.assert_array_equal(symmetrize_Q(Qs), Qs)  # idempotent
    rng = np.random.default_rng(n)
    v, w = rng.standard_normal(n), rng.standard_normal(n)
    np.testing.assert_allclose(quad_apply(Qs, v, v), quad_apply(Q, v, v),
                               rtol=1e-12, atol=1e-9)
    np.testing.assert_allclose(
        quad_apply(Qs, v, w),
        0.5 * (quad_apply(Q, v, w) + quad_apply(Q, w, v)),
        rtol=1e-12, atol=1e-9)
    np.testing.assert_allclose(quad_apply(Qs, v, w), quad_apply(Qs, w, v),
                               rtol=1e-12, atol=1e-9)


def test_standard_form_preserves_kernels(rng):
    base = random_stable_qb(4, rng)
    E = np.eye(4) + 0.3 * rng.standard_normal((4, 4))
    desc = QBSystem(E, E @ base.A, E @ base.Q, E @ base.N, E @ base.B,
                    base.C)
    std = to_standard_form(desc)
    np.testing.assert_allclose(std.E, np.eye(4))
    for s1, s2 in ((1j, 2j), (0.1j, -3j)):
        assert eval_H1(std, s1) == pytest.approx(eval_H1(base, s1), rel=1e-10)
        assert eval_H2(std, s1, s2) == pytest.approx(eval_H2(base, s1, s2),
                                                     rel=1e-10)
