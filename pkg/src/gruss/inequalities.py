"""Checkable verdicts for the Schwarz and Gruss-type inequalities.

Every check returns a :class:`Verdict` with a signed slack.  Operator
inequalities ``L <= R`` report ``lambda_min(R - L)``; scalar inequalities
report ``rhs - lhs``; exact identities report ``-||left - right||``.  A
verdict holds iff ``slack >= -(atol + rtol * scale)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PreconditionError, UsageError
from .generate import GenConfig, random_matrix, sharpness_pair, substream
from .linalg import (
    DEFAULT_TOL,
    Tolerance,
    abs_element,
    adjoint,
    hermitian_part,
    is_idempotent,
    loewner_slack,
    operator_norm,
    spectral_radius,
    trace_functional,
)
from .module import (
    as_coefficients,
    as_element,
    as_probability,
    as_tuple,
    gruss_e,
    gruss_p,
    inner_product,
    module_norm,
    weighted_alpha_combination,
    weighted_mean,
)

__all__ = [
    "Verdict",
    "SCHWARZ_VARIANTS",
    "IDENTITY_SETS",
    "GRUSS_VARIANTS",
    "IDENTITY_TOL",
    "loewner_verdict",
    "scalar_verdict",
    "identity_verdict",
    "chain_verdict",
    "check_schwarz",
    "check_identities",
    "check_gruss",
    "sharpness_demo",
]

SCHWARZ_VARIANTS = ("module", "abs", "functional", "radius", "seminorm")
IDENTITY_SETS = ("idempotent", "weighted")
GRUSS_VARIANTS = ("idempotent", "weighted", "radius", "alpha", "scalar")

# Short labels accepted alongside the descriptive names.
_GRUSS_ALIASES = {"thm31": "idempotent", "thm42": "weighted", "cor43": "radius", "rem44": "alpha", "scalar12": "scalar"}
_IDENTITY_ALIASES = {"lemma31": "idempotent", "lemma41": "weighted"}

#: Identity residuals are held to 1e-10 relative to (largest norm + 1).
IDENTITY_TOL = Tolerance(rtol=1e-10, atol=0.0)


@dataclass
class Verdict:
    inequality_id: str
    kind: str
    lhs: float
    rhs: float
    slack: float
    scale: float
    holds: bool
    tol: Tolerance
    links: list["Verdict"] = field(default_factory=list)
    skipped: list[str] = field(default_factory=list)

    @property
    def margin(self) -> float:
        """Slack plus the allowed tolerance; negative iff the verdict fails."""
        return self.slack + self.tol.bound(self.scale)

    def to_dict(self) -> dict:
        return {
            "inequality_id": self.inequality_id,
            "kind": self.kind,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "scale": self.scale,
            "holds": self.holds,
            "tol": {"rtol": self.tol.rtol, "atol": self.tol.atol},
            "links": [v.to_dict() for v in self.links],
            "skipped": list(self.skipped),
        }


def loewner_verdict(name: str, lhs, rhs, tol: Tolerance) -> Verdict:
    lhs = np.asarray(lhs, dtype=complex)
    rhs = np.asarray(rhs, dtype=complex)
    slack = loewner_slack(lhs, rhs)
    l, r = operator_norm(lhs), operator_norm(rhs)
    scale = max(l, r)
    return Verdict(name, "loewner", l, r, slack, scale, slack >= -tol.bound(scale), tol)


def scalar_verdict(name: str, lhs: float, rhs: float, tol: Tolerance) -> Verdict:
    lhs, rhs = float(lhs), float(rhs)
    scale = max(abs(lhs), abs(rhs))
    slack = rhs - lhs
    return Verdict(name, "scalar", lhs, rhs, slack, scale, slack >= -tol.bound(scale), tol)


def identity_verdict(name: str, left, right, tol: Tolerance = IDENTITY_TOL) -> Verdict:
    left = np.asarray(left, dtype=complex)
    right = np.asarray(right, dtype=complex)
    residual = operator_norm(left - right)
    scale = max(operator_norm(left), operator_norm(right)) + 1.0
    return Verdict(name, "identity", residual, 0.0, -residual, scale, residual <= tol.bound(scale), tol)


def chain_verdict(name: str, links: list[Verdict], skipped: list[str] | None = None) -> Verdict:
    """Aggregate links; the reported slack is that of the tightest link."""
    worst = min(links, key=lambda v: v.margin)
    return Verdict(
        name,
        "chain",
        worst.lhs,
        worst.rhs,
        worst.slack,
        worst.scale,
        all(v.holds for v in links),
        worst.tol,
        links=list(links),
        skipped=list(skipped or []),
    )


def _sq(a: np.ndarray) -> np.ndarray:
    """``|a|^2 = a* a`` for algebra or module elements."""
    return adjoint(a) @ a


def _resolve(variant: str, allowed: tuple, aliases: dict) -> str:
    name = aliases.get(variant, variant)
    if name not in allowed:
        raise UsageError(f"unknown variant {variant!r}; choose from {sorted(allowed + tuple(aliases))}")
    return name


# ---------------------------------------------------------------- Schwarz


def check_schwarz(variant: str, x, y, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """One of the five Schwarz-type inequalities for a pair of module elements.

    ``module``     <x,y><y,x> <= ||<y,y>|| <x,x>
    ``abs``        |<x,y>|^2  <= ||<x,x>|| <y,y>
    ``functional`` |tr<x,y>|^2 <= tr<x,x> tr<y,y>
    ``radius``     tr(<x,y><y,x>) <= tr<x,x> r(<y,y>)
    ``seminorm``   ||<x,y>||^2 <= ||<x,x>|| ||<y,y>||
    """
    if variant not in SCHWARZ_VARIANTS:
        raise UsageError(f"unknown Schwarz variant {variant!r}; choose from {SCHWARZ_VARIANTS}")
    x, y = as_element(x), as_element(y)
    if x.shape != y.shape:
        raise DomainError(f"shape mismatch {x.shape} vs {y.shape}")
    xy = inner_product(x, y)
    yx = inner_product(y, x)
    xx = inner_product(x, x)
    yy = inner_product(y, y)
    name = f"schwarz.{variant}"
    if variant == "module":
        return loewner_verdict(name, xy @ yx, operator_norm(yy) * xx, tol)
    if variant == "abs":
        g = abs_element(xy)
        return loewner_verdict(name, g @ g, operator_norm(xx) * yy, tol)
    if variant == "functional":
        lhs = abs(trace_functional(xy)) ** 2
        rhs = trace_functional(xx).real * trace_functional(yy).real
        return scalar_verdict(name, lhs, rhs, tol)
    if variant == "radius":
        lhs = trace_functional(xy @ yx).real
        rhs = trace_functional(xx).real * spectral_radius(yy)
        return scalar_verdict(name, lhs, rhs, tol)
    lhs = operator_norm(xy) ** 2
    rhs = operator_norm(xx) * operator_norm(yy)
    return scalar_verdict(name, lhs, rhs, tol)


# ------------------------------------------------------------- identities


def _require_idempotent(e: np.ndarray, tol: Tolerance) -> None:
    if not is_idempotent(inner_product(e, e), tol):
        raise PreconditionError("hypothesis failed: <e, e> is not idempotent")


def check_identities(which: str, instance: dict, tol: Tolerance = IDENTITY_TOL,
                     order_tol: Tolerance = DEFAULT_TOL) -> list[Verdict]:
    """Verify the algebraic identities (and their order relations) behind the theorems.

    ``idempotent`` needs ``x, y, e`` (module) and ``a, b`` (algebra);
    ``weighted`` needs ``xs, ys, alphas, p`` and module elements ``a, b``.
    Residuals are judged with ``tol``, Loewner relations with ``order_tol``.
    """
    which = _resolve(which, IDENTITY_SETS, _IDENTITY_ALIASES)
    if which == "idempotent":
        return _idempotent_identities(instance, tol, order_tol)
    return _weighted_identities(instance, tol, order_tol)


def _idempotent_identities(inst: dict, tol: Tolerance, order_tol: Tolerance) -> list[Verdict]:
    x, y, e = (as_element(inst[key]) for key in ("x", "y", "e"))
    a, b = (as_element(inst[key], square=True) for key in ("a", "b"))
    _require_idempotent(e, order_tol)
    ee = inner_product(e, e)
    gxx = gruss_e(x, x, e)
    proj = x - e @ inner_product(e, x)
    xa = x - e @ a
    yb = y - e @ b
    return [
        identity_verdict("idempotent.e_fixed", e @ ee, e, tol),
        identity_verdict("idempotent.gram_projection", gxx, _sq(proj), tol),
        loewner_verdict("idempotent.gram_positive", np.zeros_like(gxx), gxx, order_tol),
        loewner_verdict("idempotent.translate_majorant", gxx, _sq(xa), order_tol),
        identity_verdict("idempotent.translate_invariance", gruss_e(xa, yb, e), gruss_e(x, y, e), tol),
    ]


def _weighted_identities(inst: dict, tol: Tolerance, order_tol: Tolerance) -> list[Verdict]:
    xs, ys = as_tuple(inst["xs"]), as_tuple(inst["ys"])
    p = as_probability(inst["p"])
    alphas = as_coefficients(inst["alphas"], p.size)
    a, b = as_element(inst["a"]), as_element(inst["b"])
    if xs.shape != ys.shape or xs.shape[1:] != a.shape or a.shape != b.shape:
        raise DomainError("weighted identities: inconsistent shapes")

    mean_alpha = np.sum(p * alphas)
    centered = np.tensordot(p * (alphas - mean_alpha), xs - a, axes=(0, 0))

    xa, yb = xs - a, ys - b
    translated = weighted_mean(inner_product(xa, yb), p) - inner_product(weighted_mean(xa, p), weighted_mean(yb, p))
    gxx = gruss_p(xs, xs, p)
    spread = weighted_mean(_sq(xa), p)
    gram_translated = spread - _sq(weighted_mean(xs, p) - a)

    dx = xs[:, None] - xs[None, :]
    dy = ys[:, None] - ys[None, :]
    double_sum = 0.5 * np.einsum("i,j,ijab->ab", p, p, inner_product(dx, dy))

    gxy = gruss_p(xs, ys, p)
    return [
        identity_verdict("weighted.alpha_centering", weighted_alpha_combination(alphas, xs, p), centered, tol),
        identity_verdict("weighted.pair_translation", gxy, translated, tol),
        identity_verdict("weighted.gram_translation", gxx, gram_translated, tol),
        loewner_verdict("weighted.gram_majorant", gxx, spread, order_tol),
        identity_verdict("weighted.double_sum", gxy, double_sum, tol),
        loewner_verdict("weighted.gram_positive", np.zeros_like(gxx), gxx, order_tol),
    ]


# ------------------------------------------------------------------ Gruss


def check_gruss(variant: str, instance: dict, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """Full chain verdict for one of the Gruss-type bounds.

    Variants (short labels in parentheses): ``idempotent`` (thm31),
    ``weighted`` (thm42), ``radius`` (cor43), ``alpha`` (rem44),
    ``scalar`` (scalar12).
    """
    variant = _resolve(variant, GRUSS_VARIANTS, _GRUSS_ALIASES)
    return _GRUSS_CHECKS[variant](instance, tol)


def _gruss_idempotent(inst: dict, tol: Tolerance) -> Verdict:
    x, y, e = (as_element(inst[key]) for key in ("x", "y", "e"))
    a, b, c, d = (as_element(inst[key], square=True) for key in ("a", "b", "c", "d"))
    if not (x.shape == y.shape == e.shape) or not (a.shape == b.shape == c.shape == d.shape == (x.shape[1],) * 2):
        raise DomainError("idempotent Gruss: inconsistent shapes")
    _require_idempotent(e, tol)

    g = gruss_e(x, y, e, tol)
    gxx = gruss_e(x, x, e, tol)
    gyy = gruss_e(y, y, e, tol)
    xu = x - e @ ((a + b) / 2)
    yv = y - e @ ((c + d) / 2)
    nxu = module_norm(xu)

    # Re<x - ea, eb - x> and Re<y - ec, ed - y>
    re_x = hermitian_part(inner_product(x - e @ a, e @ b - x))
    re_y = hermitian_part(inner_product(y - e @ c, e @ d - y))
    links = [
        loewner_verdict("idempotent.schwarz", _sq(g), operator_norm(gxx) * gyy, tol),
        loewner_verdict("idempotent.majorant", operator_norm(gxx) * gyy, nxu**2 * _sq(yv), tol),
        loewner_verdict("idempotent.abs_form", abs_element(g), nxu * abs_element(yv), tol),
        identity_verdict("idempotent.midpoint_x", _sq(xu), _sq(e @ (a - b)) / 4 - re_x),
        identity_verdict("idempotent.midpoint_y", _sq(yv), _sq(e @ (c - d)) / 4 - re_y),
    ]
    zero = np.zeros_like(re_x)
    conditions = [loewner_verdict("re_x", zero, re_x, tol), loewner_verdict("re_y", zero, re_y, tol)]
    skipped = []
    if all(v.holds for v in conditions):
        quarter = 0.25 * module_norm(e @ (a - b))
        links.append(loewner_verdict("idempotent.quarter_bound", abs_element(g), quarter * abs_element(e @ (c - d)), tol))
        links.append(
            loewner_verdict("idempotent.quarter_bound_sq", _sq(g), quarter**2 * _sq(e @ (c - d)), tol)
        )
    else:
        skipped.append("idempotent.quarter_bound: real-part condition not satisfied")
    return chain_verdict("gruss.idempotent", links, skipped)


def _weighted_parts(inst: dict):
    xs, ys = as_tuple(inst["xs"]), as_tuple(inst["ys"])
    p = as_probability(inst["p"])
    a, b = as_element(inst["a"]), as_element(inst["b"])
    if xs.shape != ys.shape or xs.shape[0] != p.size or xs.shape[1:] != a.shape or a.shape != b.shape:
        raise DomainError("weighted Gruss: inconsistent shapes")
    return xs, ys, p, a, b


def _gruss_weighted(inst: dict, tol: Tolerance) -> Verdict:
    xs, ys, p, a, b = _weighted_parts(inst)
    g = gruss_p(xs, ys, p)
    gxx = gruss_p(xs, xs, p)
    gyy = gruss_p(ys, ys, p)
    mid_x = weighted_mean(_sq(xs - a), p) - _sq(weighted_mean(xs, p) - a)
    mid_y = weighted_mean(_sq(ys - b), p) - _sq(weighted_mean(ys, p) - b)
    spread_x = float(np.sum(p * np.array([module_norm(xi - a) ** 2 for xi in xs])))
    spread_y = weighted_mean(_sq(ys - b), p)
    middle = operator_norm(mid_x) * mid_y
    links = [
        loewner_verdict("weighted.schwarz", _sq(g), operator_norm(gxx) * gyy, tol),
        loewner_verdict("weighted.middle", _sq(g), middle, tol),
        loewner_verdict("weighted.final", middle, spread_x * spread_y, tol),
        scalar_verdict("weighted.norm_spread", operator_norm(mid_x), spread_x, tol),
    ]
    return chain_verdict("gruss.weighted", links)


def _certified_radius(xs: np.ndarray, center: np.ndarray, declared, tol: Tolerance, label: str) -> float:
    """Largest distance from ``center``; a declared radius is validated, never used."""
    actual = max(module_norm(xi - center) for xi in xs)
    if declared is not None and actual > float(declared) + tol.bound(float(declared)):
        raise PreconditionError(f"hypothesis failed: max ||{label}_i - center|| = {actual!r} exceeds {declared!r}")
    return actual


def _gruss_radius(inst: dict, tol: Tolerance) -> Verdict:
    xs, ys, p, a, b = _weighted_parts(inst)
    r = _certified_radius(xs, a, inst.get("r"), tol, "x")
    s = _certified_radius(ys, b, inst.get("s"), tol, "y")
    return scalar_verdict("gruss.radius", operator_norm(gruss_p(xs, ys, p)), r * s, tol)


def _gruss_alpha(inst: dict, tol: Tolerance) -> Verdict:
    xs = as_tuple(inst["xs"])
    p = as_probability(inst["p"])
    alphas = as_coefficients(inst["alphas"], p.size)
    a = as_element(inst["a"])
    if xs.shape[0] != p.size or xs.shape[1:] != a.shape:
        raise DomainError("alpha Gruss: inconsistent shapes")
    r = _certified_radius(xs, a, inst.get("r"), tol, "x")
    lhs = module_norm(weighted_alpha_combination(alphas, xs, p))
    mean_alpha = np.sum(p * alphas)
    mean_dev = float(np.sum(p * np.abs(alphas - mean_alpha)))
    # centred form of sum p|alpha|^2 - |sum p alpha|^2, same value without cancellation
    spread = float(np.sum(p * np.abs(alphas - mean_alpha) ** 2))
    links = [
        scalar_verdict("alpha.mean_deviation", lhs, r * mean_dev, tol),
        scalar_verdict("alpha.root_variance", r * mean_dev, r * np.sqrt(spread), tol),
        identity_verdict(
            "alpha.variance_forms",
            spread,
            float(np.sum(p * np.abs(alphas) ** 2) - abs(mean_alpha) ** 2),
        ),
    ]
    return chain_verdict("gruss.alpha", links)


def _gruss_scalar(inst: dict, tol: Tolerance) -> Verdict:
    xs, ys = as_tuple(inst["xs"]), as_tuple(inst["ys"])
    if xs.shape[1:] != (1, 1) or ys.shape != xs.shape:
        raise PreconditionError("hypothesis failed: scalar Gruss needs k = m = 1 and equal lengths")
    if np.any(np.abs(xs.imag) > 0) or np.any(np.abs(ys.imag) > 0):
        raise PreconditionError("hypothesis failed: scalar Gruss needs real entries")
    u, v = xs.real.reshape(-1), ys.real.reshape(-1)
    lo_a, hi_a, lo_b, hi_b = (float(inst[key]) for key in ("a_lo", "a_hi", "b_lo", "b_hi"))
    if u.min() < lo_a or u.max() > hi_a or v.min() < lo_b or v.max() > hi_b:
        raise PreconditionError("hypothesis failed: entries outside the declared bounds")
    n = u.size
    lhs = abs(np.sum(u * v) / n - (np.sum(u) / n) * (np.sum(v) / n))
    return scalar_verdict("gruss.scalar", lhs, 0.25 * (hi_a - lo_a) * (hi_b - lo_b), tol)


_GRUSS_CHECKS = {
    "idempotent": _gruss_idempotent,
    "weighted": _gruss_weighted,
    "radius": _gruss_radius,
    "alpha": _gruss_alpha,
    "scalar": _gruss_scalar,
}


# -------------------------------------------------------------- sharpness


def sharpness_demo(r: float, s: float, k: int, m: int, seed: int = 0, tol: Tolerance = DEFAULT_TOL):
    """Two-point instance on which the radius bound ``||G_p|| <= r s`` is attained.

    Returns ``(instance, verdict, ratio)`` where ``ratio = ||G_p|| / (r s)``
    (``None`` when ``r s = 0``).
    """
    if r < 0 or s < 0:
        raise DomainError("radii must be nonnegative")
    cfg = GenConfig(seed=seed)
    g = substream(seed, "sharpness_demo")
    a = random_matrix(m, k, cfg, g)
    b = random_matrix(m, k, cfg, g)
    xs, ys, p, e = sharpness_pair(a, b, r, s, cfg, g)
    instance = {"xs": xs, "ys": ys, "p": p, "a": a, "b": b, "e": e, "r": float(r), "s": float(s)}
    verdict = check_gruss("radius", instance, tol)
    ratio = verdict.lhs / (r * s) if r * s > 0 else None
    return instance, verdict, ratio
