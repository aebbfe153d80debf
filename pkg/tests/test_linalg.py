import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import complex_matrices
from gruss.errors import DomainError
from gruss.linalg import (
    Tolerance,
    abs_element,
    adjoint,
    identity,
    is_idempotent,
    loewner_leq,
    loewner_slack,
    operator_norm,
    spectral_radius,
    sqrt_psd,
    trace_functional,
    zero,
)

NIL = np.array([[0, 1], [0, 0]], dtype=complex)


def test_adjoint_examples():
    np.testing.assert_array_equal(adjoint(identity(2)), identity(2))
    np.testing.assert_array_equal(adjoint(np.diag([1j, -1])), np.diag([-1j, -1]))
    np.testing.assert_array_equal(adjoint(NIL), NIL.T)


def test_abs_element_examples():
    np.testing.assert_allclose(abs_element(np.diag([-2, 3j])), np.diag([2, 3]), atol=1e-15)
    np.testing.assert_allclose(abs_element(NIL), np.diag([0, 1]), atol=1e-15)
    np.testing.assert_array_equal(abs_element(zero(3)), zero(3))


def test_sqrt_psd_examples():
    np.testing.assert_allclose(sqrt_psd(np.diag([4.0, 9.0])), np.diag([2, 3]), atol=1e-15)
    np.testing.assert_allclose(sqrt_psd(identity(4)), identity(4), atol=1e-15)


def test_sqrt_psd_clamps_roundoff_and_rejects_negative():
    tiny = np.diag([1.0, -1e-14])
    np.testing.assert_allclose(sqrt_psd(tiny), np.diag([1, 0]), atol=1e-15)
    with pytest.raises(DomainError):
        sqrt_psd(np.diag([1.0, -1e-3]))
    with pytest.raises(DomainError):
        sqrt_psd(NIL)


def test_norm_and_radius_examples():
    assert operator_norm(identity(3)) == pytest.approx(1.0)
    assert operator_norm(2 * NIL) == pytest.approx(2.0)
    assert operator_norm(zero(2)) == 0.0
    assert spectral_radius(np.diag([-3.0, 2.0])) == pytest.approx(3.0)
    assert spectral_radius(NIL) == 0.0


def test_loewner_examples():
    assert loewner_leq(identity(2), 2 * identity(2))
    assert not loewner_leq(identity(2), np.array([[2, 1], [1, 1]]))
    # oracle: eigenvalues of [[1,1],[1,0]] are (1 +- sqrt 5)/2
    assert loewner_slack(identity(2), np.array([[2, 1], [1, 1]])) == pytest.approx((1 - 5**0.5) / 2)
    a = np.array([[1, 2j], [-2j, 5]])
    assert loewner_leq(a, a)
    with pytest.raises(DomainError):
        loewner_leq(identity(2), identity(3))


def test_idempotent_examples():
    assert is_idempotent(identity(3))
    assert is_idempotent(np.diag([1.0, 0.0]))
    assert not is_idempotent(2 * identity(2))


def test_trace_examples():
    assert trace_functional(identity(3)) == 3
    assert trace_functional(NIL) == 0


def test_tolerance_rejects_negative():
    with pytest.raises(DomainError):
        Tolerance(rtol=-1.0)
    assert Tolerance(1e-9, 1e-12).bound(10.0) == pytest.approx(1e-12 + 1e-8)


def test_non_finite_rejected():
    with pytest.raises(DomainError):
        abs_element(np.array([[np.nan]]))


@given(complex_matrices(rows=st.integers(1, 6)))
def test_abs_element_is_psd_root(a):
    h = abs_element(a)
    np.testing.assert_allclose(h, adjoint(h), atol=1e-14)
    assert np.linalg.eigvalsh(h).min() >= -1e-12
    ata = adjoint(a) @ a
    assert operator_norm(h @ h - ata) <= 1e-10 * max(operator_norm(ata), 1.0)


@given(complex_matrices(rows=st.integers(1, 5), cols=st.integers(1, 5)))
def test_abs_element_rectangular(a):
    h = abs_element(a)
    assert h.shape == (a.shape[1], a.shape[1])
    np.testing.assert_allclose(h @ h, adjoint(a) @ a, atol=1e-10)


@given(complex_matrices(), complex_matrices(rows=st.just(4)))
def test_norm_properties(a, b):
    assert operator_norm(adjoint(a) @ a) == pytest.approx(operator_norm(a) ** 2, rel=1e-10)
    assert spectral_radius(a) <= operator_norm(a) + 1e-12
    b = b[: a.shape[0], : a.shape[0]]
    assert operator_norm(a @ b) <= operator_norm(a) * operator_norm(b) + 1e-12


@given(complex_matrices(rows=st.integers(1, 4)), st.integers(0, 2**32 - 1))
def test_loewner_transitive(a, seed):
    g = np.random.default_rng(seed)
    k = a.shape[0]
    h = a + adjoint(a)
    p = g.normal(size=(k, k)) + 1j * g.normal(size=(k, k))
    q = g.normal(size=(k, k)) + 1j * g.normal(size=(k, k))
    p, q = adjoint(p) @ p, adjoint(q) @ q
    assert loewner_leq(h, h + p)
    assert loewner_leq(h + p, h + p + q)
    assert loewner_leq(h, h + p + q)


@given(complex_matrices(rows=st.integers(1, 4)), st.integers(0, 2**32 - 1))
def test_trace_positive(a, seed):
    p = adjoint(a) @ a
    g = np.random.default_rng(seed)
    b = g.normal(size=p.shape) + 1j * g.normal(size=p.shape)
    assert trace_functional(p).real >= -1e-14
    assert trace_functional(adjoint(b) @ p @ b).real >= -1e-12


@given(complex_matrices(rows=st.integers(1, 4)))
def test_sqrt_psd_squares_back(a):
    p = adjoint(a) @ a
    s = sqrt_psd(p)
    np.testing.assert_allclose(s @ s, p, atol=1e-10 * max(1.0, operator_norm(p)))
