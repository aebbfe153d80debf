import numpy as np
import pytest
from hypothesis import given, strategies as st

from gruss.errors import DomainError
from gruss.generate import (
    Dims,
    GenConfig,
    ball_tuple,
    draw_dims,
    random_matrix,
    random_partial_isometry,
    random_probability_vector,
    sharpness_pair,
    substream,
)
from gruss.linalg import is_idempotent, operator_norm
from gruss.module import gruss_p, inner_product, module_norm

seeds = st.integers(0, 2**63)


def test_random_matrix_determinism_and_scale():
    cfg = GenConfig(seed=9, scale=2.5)
    a, b = random_matrix(3, 2, cfg), random_matrix(3, 2, cfg)
    np.testing.assert_array_equal(a, b)
    np.testing.assert_array_equal(random_matrix(2, 2, GenConfig(scale=0.0)), np.zeros((2, 2)))
    g = substream(9, "scan")
    draws = np.stack([random_matrix(2, 2, cfg, g) for _ in range(1000)])
    assert np.abs(draws.real).max() <= 2.5 and np.abs(draws.imag).max() <= 2.5
    with pytest.raises(DomainError):
        random_matrix(0, 2)


def test_partial_isometry_examples():
    e = random_partial_isometry(1, 1, 1)
    np.testing.assert_allclose(inner_product(e, e), [[1]], atol=1e-15)
    z = random_partial_isometry(3, 2, 0)
    assert is_idempotent(inner_product(z, z)) and not z.any()
    e = random_partial_isometry(4, 3, 2, GenConfig(seed=5))
    ee = inner_product(e, e)
    assert operator_norm(ee @ ee - ee) <= 1e-10
    assert np.trace(ee).real == pytest.approx(2.0)
    with pytest.raises(DomainError):
        random_partial_isometry(2, 3, 3)


@given(st.integers(1, 50), seeds)
def test_probability_vector(n, seed):
    p = random_probability_vector(n, GenConfig(seed=seed))
    assert p.min() >= 0
    assert abs(p.sum() - 1) <= 1e-15
    np.testing.assert_array_equal(p, random_probability_vector(n, GenConfig(seed=seed)))


def test_probability_singleton():
    np.testing.assert_array_equal(random_probability_vector(1), [1.0])


@given(st.one_of(st.just(0.0), st.floats(1e-6, 100)), st.integers(1, 8), seeds)
def test_ball_tuple_radius(r, n, seed):
    cfg = GenConfig(seed=seed)
    center = random_matrix(3, 2, cfg)
    xs = ball_tuple(center, r, n, cfg)
    dists = [module_norm(x - center) for x in xs]
    assert max(dists) <= r
    assert max(dists) >= 0.9 * r
    np.testing.assert_array_equal(xs, ball_tuple(center, r, n, cfg))


def test_ball_tuple_zero_radius():
    c = random_matrix(2, 2)
    xs = ball_tuple(c, 0.0, 4)
    assert all((x == c).all() for x in xs)


@given(st.floats(0, 10), st.floats(0, 10), st.integers(1, 4), st.integers(1, 4), seeds)
def test_sharpness_pair_attains(r, s, m, k, seed):
    cfg = GenConfig(seed=seed)
    a, b = random_matrix(m, k, cfg), random_matrix(m, k, rng=substream(seed, "b"))
    xs, ys, p, e = sharpness_pair(a, b, r, s, cfg)
    assert operator_norm(inner_product(e, e)) == pytest.approx(1.0)
    for x in xs:
        assert module_norm(x - a) == pytest.approx(r, abs=1e-12 * (1 + r))
    assert operator_norm(gruss_p(xs, ys, p)) == pytest.approx(r * s, rel=1e-9, abs=1e-12)


def test_sharpness_pair_explicit_scalar():
    xs, ys, p, e = sharpness_pair([[0]], [[0]], 1.0, 1.0)
    sign = e[0, 0]
    np.testing.assert_allclose(xs[:, 0, 0] / sign, [1, -1])
    np.testing.assert_allclose(ys[:, 0, 0] / sign, [1, -1])
    xs, ys, p, _ = sharpness_pair([[1]], [[2]], 0.0, 0.0)
    np.testing.assert_array_equal(gruss_p(xs, ys, p), [[0]])


def test_dims_and_substreams():
    g1, g2 = substream(1, "t", 0), substream(1, "t", 0)
    assert draw_dims(Dims(), g1) == draw_dims(Dims(), g2)
    assert substream(1, "t", 0).random() != substream(1, "t", 1).random()
    assert substream(1, "t", 0).random() != substream(1, "u", 0).random()
    with pytest.raises(DomainError):
        Dims(k=(2, 1))
    assert Dims.from_dict(Dims().to_dict()) == Dims()
