import numpy as np
import pytest

from qbloewner.core import ComplexSample, LinearSystem, eval_H1
from qbloewner.errors import (DuplicateFrequency, EmptyPencil, MinimumCount,
                              NotConjugateClosed, OddCount)
from qbloewner.loewner import (InterpolationData, LoewnerPencil, build_pencil,
                               conjugate_transform, fit_linear,
                               imag_axis_samples, loewner_realization,
                               partition_samples, realify, realify_pencil,
                               reduce, sample_H1, svd_truncate)

from conftest import random_stable_linear


def first_order(s):
    return 1.0 / (s + 1.0)


def second_order(s):
    return (s + 3.0) / ((s + 1.0) * (s + 2.0))


def samples_of(H, points):
    return [ComplexSample(s, H(s)) for s in points]


def test_partition_alternating_pairs():
    pts = [1j * k * sgn for k in (1, 2, 3, 4) for sgn in (1, -1)]
    data = partition_samples(samples_of(first_order, pts))
    assert set(data.right_points) == {1j, -1j, 3j, -3j}
    assert set(data.left_points) == {2j, -2j, 4j, -4j}
    np.testing.assert_allclose(data.right_values,
                               first_order(data.right_points))


def test_partition_half_split_real():
    data = partition_samples(samples_of(first_order, [3.0, 1.0, 4.0, 2.0]),
                             scheme="half-split")
    assert list(data.right_points) == [1, 2]
    assert list(data.left_points) == [3, 4]


def test_partition_errors():
    with pytest.raises(MinimumCount):
        partition_samples(samples_of(first_order, [1j, -1j]))
    with pytest.raises(OddCount):
        partition_samples(samples_of(first_order, [1j, -1j, 2j]))
    with pytest.raises(DuplicateFrequency):
        partition_samples(samples_of(first_order, [1j, -1j, 1j, 2j]))
    with pytest.raises(DuplicateFrequency):
        InterpolationData([1j], [0], [1j], [0])


def test_pencil_hand_values():
    data = InterpolationData([1.0], [2.0], [3.0], [4.0])
    pen = build_pencil(data)
    np.testing.assert_allclose(pen.L, [[1.0]])
    np.testing.assert_allclose(pen.Ls, [[5.0]])


def test_pencil_constant_function():
    c = 2.5 - 1j
    data = InterpolationData([1j, -1j], [c, c], [2j, -2j], [c, c])
    pen = build_pencil(data)
    np.testing.assert_array_equal(pen.L, 0)
    np.testing.assert_allclose(pen.Ls, c)


def test_pencil_divided_difference_identities(rng):
    pts = imag_axis_samples(16, -1, 1)
    data = partition_samples(samples_of(second_order, pts))
    pen = build_pencil(data)
    mu, v = data.left_points, data.left_values
    lam, w = data.right_points, data.right_values
    den = mu[:, None] - lam[None, :]
    np.testing.assert_allclose(pen.L * den, v[:, None] - w[None, :],
                               rtol=1e-14, atol=1e-15)
    np.testing.assert_allclose(pen.Ls * den,
                               mu[:, None] * v[:, None] - lam * w[None, :],
                               rtol=1e-14, atol=1e-15)
    np.testing.assert_array_equal(pen.V, v)
    np.testing.assert_array_equal(pen.W, w)


def test_first_order_pair_reduce_and_realify():
    pts = np.array([1j, -1j, 2j, -2j])
    data = InterpolationData(pts[:2], first_order(pts[:2]),
                             pts[2:], first_order(pts[2:]))
    pen = build_pencil(data)
    # 1/(s+1) has order one, so the 2 x 2 Loewner matrix is rank one
    trunc = svd_truncate(pen, tol=1e-10)
    assert trunc.r == 1
    sys = reduce(pen, trunc.Xr, trunc.Yr)
    for s in pts:
        assert eval_H1(sys, s) == pytest.approx(first_order(s), rel=1e-10)
    real_pen = realify_pencil(pen, data)
    trunc = svd_truncate(real_pen, tol=1e-10)
    real = reduce(real_pen, trunc.Xr, trunc.Yr)
    assert real.is_real and real.n == 1
    assert eval_H1(real, 0.0) == pytest.approx(1.0, rel=1e-12)


def test_full_realization_and_realify_order_two():
    pts = np.array([1j, -1j, 2j, -2j])
    data = InterpolationData(pts[:2], second_order(pts[:2]),
                             pts[2:], second_order(pts[2:]))
    pen = build_pencil(data)
    sys = reduce(pen, np.eye(2), np.eye(2))
    np.testing.assert_allclose(sys.E, -pen.L)
    np.testing.assert_allclose(sys.A, -pen.Ls)
    np.testing.assert_allclose(sys.B, pen.V)
    np.testing.assert_allclose(sys.C, pen.W)
    assert not sys.is_real
    for s in (1j, -1j, 2j, -2j, 0.3j):
        assert eval_H1(sys, s) == pytest.approx(second_order(s), rel=1e-10)
    real = realify(sys, data)
    assert real.is_real
    assert eval_H1(real, 0.0) == pytest.approx(1.5, rel=1e-12)
    assert realify(real, data) is real


def test_truncation_recovers_order_two():
    pts = np.array([1j, -1j, 2j, -2j, 3j, -3j, 4j, -4j])
    data = partition_samples(samples_of(second_order, pts))
    assert data.k == 4
    trunc = svd_truncate(build_pencil(data), tol=1e-10)
    assert trunc.r == 2
    sys = reduce(build_pencil(data), trunc.Xr, trunc.Yr)
    for s in pts:
        assert abs(eval_H1(sys, s) - second_order(s)) <= 1e-10


def test_truncation_without_tolerance():
    pts = imag_axis_samples(8, -1, 1)
    pen = build_pencil(partition_samples(samples_of(second_order, pts)))
    trunc = svd_truncate(pen, tol=0.0, rmax=pen.k)
    assert trunc.r == pen.k
    for X in (trunc.Xr, trunc.Yr):
        np.testing.assert_allclose(X.conj().T @ X, np.eye(pen.k), atol=1e-12)
    s = trunc.singular_values
    assert np.all(s >= 0) and np.all(np.diff(s) <= 0)


def test_truncation_tie_includes_index():
    pen = LoewnerPencil(np.diag([1.0, 0.5]), np.zeros((2, 2)), np.ones(2),
                        np.ones(2))
    assert svd_truncate(pen, tol=0.5).r == 2
    assert svd_truncate(pen, tol=0.5 + 1e-12).r == 1
    assert svd_truncate(pen, tol=0.0, rmax=1).r == 1


def test_empty_pencil():
    empty = LoewnerPencil(np.zeros((0, 0)), np.zeros((0, 0)), np.zeros(0),
                          np.zeros(0))
    with pytest.raises(EmptyPencil):
        svd_truncate(empty)


@pytest.mark.parametrize("order", [1, 2, 3, 4, 5])
def test_interpolation_conditions(order):
    rng = np.random.default_rng(order)
    truth = random_stable_linear(order, rng)
    pts = imag_axis_samples(8 * order + 4, -1, 1.5)
    samples = sample_H1(truth, pts)
    data = partition_samples(samples)
    fit, trunc = fit_linear(samples, tol=1e-10)
    assert trunc.r == order
    for s, v in zip(np.r_[data.left_points, data.right_points],
                    np.r_[data.left_values, data.right_values]):
        assert abs(eval_H1(fit, s) - v) <= 1e-8 * abs(v)


def test_realify_preserves_H1(rng):
    truth = random_stable_linear(4, rng)
    pts = imag_axis_samples(8, -0.5, 0.5)
    data = partition_samples(sample_H1(truth, pts))
    cplx = loewner_realization(build_pencil(data))
    real = realify(cplx, data)
    assert real.is_real
    for s in 1j * rng.uniform(-20, 20, 20):
        a, b = eval_H1(cplx, s), eval_H1(real, s)
        assert abs(a - b) <= 1e-10 * abs(a)


def test_conjugate_transform_is_unitary():
    pts = np.array([2j, 5.0, -2j, 1 + 1j, 1 - 1j])
    J = conjugate_transform(pts)
    np.testing.assert_allclose(J.conj().T @ J, np.eye(5), atol=1e-15)
    with pytest.raises(NotConjugateClosed):
        conjugate_transform(np.array([1j, 2j]))


def test_realify_rejects_unpaired_data():
    data = InterpolationData([1j, 3j], [1, 2], [2j, 4j], [3, 4])
    pen = build_pencil(data)
    with pytest.raises(NotConjugateClosed):
        realify_pencil(pen, data)
    with pytest.raises(NotConjugateClosed):
        # conjugate points with non-conjugate values
        bad = InterpolationData([1j, -1j], [1 + 1j, 1 + 1j], [2j, -2j],
                                [1, 1])
        realify_pencil(build_pencil(bad), bad)
