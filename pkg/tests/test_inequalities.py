import numpy as np
import pytest
from hypothesis import given, strategies as st

from gruss.errors import DomainError, PreconditionError, UsageError
from gruss.generate import random_partial_isometry, random_probability_vector
from gruss.inequalities import (
    IDENTITY_TOL,
    SCHWARZ_VARIANTS,
    check_gruss,
    check_identities,
    check_schwarz,
    sharpness_demo,
)
from gruss.linalg import DEFAULT_TOL, loewner_slack, operator_norm
from gruss.module import inner_product

seeds = st.integers(0, 2**32 - 1)


def _rand(g, *shape):
    return g.uniform(-1, 1, shape) + 1j * g.uniform(-1, 1, shape)


# ------------------------------------------------------------------ Schwarz


@pytest.mark.parametrize("variant", SCHWARZ_VARIANTS)
def test_schwarz_zero_y(variant):
    x = _rand(np.random.default_rng(0), 3, 2)
    v = check_schwarz(variant, x, np.zeros_like(x))
    assert v.holds and v.lhs == 0 and v.rhs == 0


@pytest.mark.parametrize("variant", SCHWARZ_VARIANTS)
def test_schwarz_scalar_reduces_to_cauchy_schwarz(variant):
    g = np.random.default_rng(1)
    x, y = _rand(g, 5, 1), _rand(g, 5, 1)
    v = check_schwarz(variant, x, y)
    dot = np.vdot(x, y)
    assert v.lhs == pytest.approx(abs(dot) ** 2)
    assert v.rhs == pytest.approx(np.vdot(x, x).real * np.vdot(y, y).real)
    assert v.holds


def test_schwarz_module_self_pair():
    x = _rand(np.random.default_rng(2), 3, 3)
    v = check_schwarz("module", x, x)
    xx = inner_product(x, x)
    assert v.holds
    assert v.slack == pytest.approx(loewner_slack(xx @ xx, operator_norm(xx) * xx), abs=1e-12)
    # rank-one x gives equality
    r1 = np.outer([1, 2j, 0], [1, -1]).astype(complex)
    assert abs(check_schwarz("module", r1, r1).slack) <= 1e-12


def test_schwarz_module_as_typed_fails():
    """<x,y><y,x> <= ||<x,x>|| <y,y> (norm on the wrong factor) is false in M_2."""
    x = np.array([[1, 1], [0, 0]], dtype=complex)
    y = np.array([[1, 0], [0, 0]], dtype=complex)
    lhs = inner_product(x, y) @ inner_product(y, x)
    # lhs = [[1,1],[1,1]], 2 diag(1,0) - lhs has eigenvalue -sqrt(2)
    as_typed = operator_norm(inner_product(x, x)) * inner_product(y, y)
    assert loewner_slack(lhs, as_typed) == pytest.approx(-2**0.5)
    assert check_schwarz("module", x, y).holds


@given(st.sampled_from(SCHWARZ_VARIANTS), st.integers(1, 4), st.integers(1, 4), seeds)
def test_schwarz_always_holds(variant, m, k, seed):
    g = np.random.default_rng(seed)
    assert check_schwarz(variant, _rand(g, m, k), _rand(g, m, k)).holds


def test_schwarz_bad_input():
    with pytest.raises(UsageError):
        check_schwarz("nope", [[1]], [[1]])
    with pytest.raises(DomainError):
        check_schwarz("abs", np.ones((2, 1)), np.ones((1, 2)))


# ---------------------------------------------------------------- identities


def _idem_instance(g, m=3, k=2, rank=1):
    e = random_partial_isometry(m, k, rank, rng=g)
    return {"x": _rand(g, m, k), "y": _rand(g, m, k), "e": e, "a": _rand(g, k, k), "b": _rand(g, k, k)}


def _weighted_instance(g, n=4, m=3, k=2):
    return {"xs": _rand(g, n, m, k), "ys": _rand(g, n, m, k), "alphas": _rand(g, n),
            "p": random_probability_vector(n, rng=g), "a": _rand(g, m, k), "b": _rand(g, m, k)}


def test_identities_self_case():
    inst = _idem_instance(np.random.default_rng(3))
    inst["x"] = inst["y"] = inst["e"]
    verdicts = check_identities("lemma31", inst)
    assert all(v.holds for v in verdicts)
    assert all(v.lhs <= 1e-14 for v in verdicts if v.kind == "identity")


def test_identities_degenerate_tuple():
    inst = _weighted_instance(np.random.default_rng(4), n=1)
    inst["p"] = np.array([1.0])
    verdicts = check_identities("lemma41", inst)
    assert all(v.holds for v in verdicts)
    assert all(v.lhs <= 1e-14 for v in verdicts if v.kind == "identity")


def test_identities_random_instance():
    g = np.random.default_rng(5)
    for which, inst in (("idempotent", _idem_instance(g, 3, 2)), ("weighted", _weighted_instance(g, 4, 3, 2))):
        for v in check_identities(which, inst):
            assert v.holds, v
            if v.kind == "identity":
                assert v.lhs <= IDENTITY_TOL.bound(v.scale)


def test_identities_precondition():
    inst = _idem_instance(np.random.default_rng(6))
    inst["e"] = 2 * inst["e"]
    with pytest.raises(PreconditionError):
        check_identities("lemma31", inst)
    with pytest.raises(UsageError):
        check_identities("lemma99", inst)


# -------------------------------------------------------------------- Gruss


def test_weighted_constant_y():
    inst = _weighted_instance(np.random.default_rng(7))
    inst["ys"] = np.stack([inst["ys"][0]] * 4)
    v = check_gruss("thm42", inst)
    assert v.holds and v.lhs == 0


def test_sharpness_examples():
    _, v, ratio = sharpness_demo(1, 1, 1, 1)
    assert v.lhs == pytest.approx(1.0, rel=1e-12) and ratio == pytest.approx(1, abs=1e-9)
    _, v, ratio = sharpness_demo(2, 3, 2, 2)
    assert v.lhs == pytest.approx(6.0, rel=1e-12)
    assert abs(v.slack) <= 1e-9 * 6
    inst, v, ratio = sharpness_demo(2, 0, 2, 3)
    assert ratio is None and v.lhs == 0 and v.holds


def test_scalar_alternating_attains():
    n = 6
    u = np.array([-1.0, 2.0] * (n // 2))
    v = np.array([0.5, 3.0] * (n // 2))
    inst = {"xs": u.reshape(n, 1, 1), "ys": v.reshape(n, 1, 1), "a_lo": -1.0, "a_hi": 2.0, "b_lo": 0.5, "b_hi": 3.0}
    verdict = check_gruss("scalar12", inst)
    assert verdict.lhs == pytest.approx(0.25 * 3 * 2.5, abs=1e-12)
    assert verdict.holds


def test_scalar_rejects_out_of_range():
    inst = {"xs": np.array([0.0, 5.0]).reshape(2, 1, 1), "ys": np.zeros((2, 1, 1)),
            "a_lo": 0.0, "a_hi": 1.0, "b_lo": 0.0, "b_hi": 1.0}
    with pytest.raises(PreconditionError):
        check_gruss("scalar", inst)


def test_radius_rejects_bad_declared_radius():
    inst, _, _ = sharpness_demo(1.0, 1.0, 2, 2)
    inst["r"] = 0.5
    with pytest.raises(PreconditionError):
        check_gruss("cor43", inst)


def test_idempotent_chain_links():
    g = np.random.default_rng(8)
    e = random_partial_isometry(3, 2, 2, rng=g)
    a, b, c, d = (_rand(g, 2, 2) for _ in range(4))
    inst = {"x": _rand(g, 3, 2), "y": _rand(g, 3, 2), "e": e, "a": a, "b": b, "c": c, "d": d}
    v = check_gruss("thm31", inst)
    assert v.holds
    names = {link.inequality_id for link in v.links} | set(v.skipped)
    assert any("schwarz" in name for name in names)
    assert any("quarter" in name for name in names)
    assert v.slack == min(v.links, key=lambda link: link.margin).slack


def test_unknown_gruss_variant():
    with pytest.raises(UsageError):
        check_gruss("thm99", {})


@given(st.sampled_from(["weighted", "radius"]), st.integers(1, 6), st.integers(1, 3), st.integers(1, 3), seeds)
def test_weighted_gruss_random(variant, n, m, k, seed):
    g = np.random.default_rng(seed)
    inst = {"xs": _rand(g, n, m, k), "ys": _rand(g, n, m, k), "p": random_probability_vector(n, rng=g),
            "a": _rand(g, m, k), "b": _rand(g, m, k)}
    assert check_gruss(variant, inst).holds


def test_verdict_holds_matches_slack():
    v = check_schwarz("abs", [[1, 2]], [[3, 1j]])
    assert v.holds == (v.slack >= -DEFAULT_TOL.bound(v.scale))
    d = v.to_dict()
    assert d["inequality_id"] == "schwarz.abs" and d["tol"] == {"rtol": 1e-9, "atol": 1e-12}
