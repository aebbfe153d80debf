"""Discrete Fourier and Mellin transforms of operator tuples and their error bounds.

The bound checks evaluate every deviation in a form anchored at the first
tuple entry (``A_k - A_1``).  This is algebraically identical to the direct
expression but is exactly zero on constant tuples and avoids cancellation
in the variance brackets.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from .errors import DomainError, RangeError, SingularKernelError
from .linalg import DEFAULT_TOL, Tolerance, adjoint, loewner_slack, max_eigenvalue, operator_norm
from .module import as_coefficients, as_element, as_probability, as_tuple, inner_product, module_norm, weighted_mean

__all__ = [
    "KERNEL_GUARD",
    "TransformParams",
    "BoundReport",
    "fourier_weights",
    "fourier_transform",
    "fourier_algebra",
    "mellin_weights",
    "mellin_transform",
    "mellin_algebra",
    "power_sum",
    "power_sum_table",
    "mellin_coefficient",
    "mellin_coefficients",
    "mellin_closed_form",
    "fourier_kernel_sum",
    "fourier_kernel_direct",
    "fourier_bound_check",
    "mellin_bound_check",
    "alpha_bound_check",
]

KERNEL_GUARD = 1e-8


@dataclass(frozen=True)
class TransformParams:
    omega: float
    m: int
    n: int

    def __post_init__(self):
        if self.n < 1 or not 1 <= self.m <= self.n:
            raise DomainError(f"need 1 <= m <= n, got m={self.m}, n={self.n}")
        if not np.isfinite(self.omega):
            raise DomainError("omega must be finite")


@dataclass
class BoundReport:
    """Outcome of one operator error bound ``|D|^2 <= bound``.

    ``tightness = lambda_max(|D|^2) / bound_final`` where ``bound_final`` is
    the largest eigenvalue of the final bound.  ``status`` is ``"checked"``
    or ``"skipped: singular kernel"``; skipped reports carry no verdict.
    """

    inequality_id: str
    status: str
    true_error_sq: np.ndarray | None = None
    bound_mid: np.ndarray | None = None
    bound_final: float = 0.0
    loewner_holds: bool | None = None
    tightness: float | None = None
    slack: float | None = None
    scale: float = 0.0
    coefficient: float | int | None = None
    lhs_max: float = 0.0
    extras: dict = field(default_factory=dict)

    @property
    def checked(self) -> bool:
        return self.status == "checked"

    def to_dict(self) -> dict:
        from .serialize import matrix_to_record

        def rec(a):
            return None if a is None else matrix_to_record(a)

        return {
            "inequality_id": self.inequality_id,
            "status": self.status,
            "true_error_sq": rec(self.true_error_sq),
            "bound_mid": rec(self.bound_mid),
            "bound_final": self.bound_final,
            "loewner_holds": self.loewner_holds,
            "tightness": self.tightness,
            "slack": self.slack,
            "scale": self.scale,
            "coefficient": self.coefficient,
            "lhs_max": self.lhs_max,
            "extras": self.extras,
        }


def _report(name: str, lhs: np.ndarray, links: list[tuple[np.ndarray, np.ndarray]], final: np.ndarray,
            tol: Tolerance, mid: np.ndarray | None = None, **kw) -> BoundReport:
    """Loewner-check every ``(smaller, larger)`` link and package the result."""
    holds = True
    worst = None
    for small, large in links:
        slack = loewner_slack(small, large)
        sc = max(operator_norm(small), operator_norm(large))
        ok = slack >= -tol.bound(sc)
        holds &= ok
        if worst is None or slack + tol.bound(sc) < worst[0] + tol.bound(worst[1]):
            worst = (slack, sc)
    bound_final = max(max_eigenvalue(final), 0.0)
    top = max(max_eigenvalue(lhs), 0.0)
    tight = top / bound_final if bound_final > 0 else (0.0 if top == 0 else float("inf"))
    return BoundReport(name, "checked", lhs, mid, bound_final, bool(holds), tight, worst[0], worst[1],
                       lhs_max=top, **kw)


def _skipped(name: str, reason: str, **kw) -> BoundReport:
    return BoundReport(name, f"skipped: {reason}", **kw)


# ------------------------------------------------------------- transforms


def fourier_weights(params: TransformParams) -> np.ndarray:
    """``exp(2 i omega m k)`` for ``k = 1..n``, with ``theta = omega m`` rounded once."""
    k = np.arange(1, params.n + 1)
    theta = float(params.omega * params.m)
    return np.exp(1j * (2.0 * theta * k))


def _check_len(xs: np.ndarray, n: int) -> None:
    if xs.shape[0] != n:
        raise DomainError(f"tuple has {xs.shape[0]} elements, parameters say n={n}")


def fourier_transform(xs, params: TransformParams) -> np.ndarray:
    xs = as_tuple(xs)
    _check_len(xs, params.n)
    return np.tensordot(fourier_weights(params), xs, axes=(0, 0))


def fourier_algebra(xs, ys, params: TransformParams) -> np.ndarray:
    xs, ys = as_tuple(xs), as_tuple(ys)
    _check_len(xs, params.n)
    return np.tensordot(fourier_weights(params), inner_product(xs, ys), axes=(0, 0))


def mellin_weights(m: int, n: int) -> np.ndarray:
    """``k^(m-1)`` for ``k = 1..n``, exact integers rounded once to float."""
    if m < 1 or n < 1:
        raise DomainError("Mellin transform needs m >= 1 and n >= 1")
    return np.array([float(k ** (m - 1)) for k in range(1, n + 1)])


def mellin_transform(xs, m: int) -> np.ndarray:
    xs = as_tuple(xs)
    return np.tensordot(mellin_weights(m, xs.shape[0]), xs, axes=(0, 0))


def mellin_algebra(xs, ys, m: int) -> np.ndarray:
    xs, ys = as_tuple(xs), as_tuple(ys)
    return np.tensordot(mellin_weights(m, xs.shape[0]), inner_product(xs, ys), axes=(0, 0))


# ----------------------------------------------------- exact power sums


@lru_cache(maxsize=None)
def _bernoulli_plus(j: int) -> Fraction:
    """Bernoulli number B_j with the B_1 = +1/2 convention."""
    if j == 0:
        return Fraction(1)
    # sum_{i=0}^{j} C(j+1, i) B_i^- = 0, and B^+ differs from B^- only at j = 1
    acc = sum(comb(j + 1, i) * _bernoulli_minus(i) for i in range(j))
    b = -acc / (j + 1)
    return -b if j == 1 else b


@lru_cache(maxsize=None)
def _bernoulli_minus(j: int) -> Fraction:
    if j == 1:
        return Fraction(-1, 2)
    return _bernoulli_plus(j)


def _faulhaber(p: int, n: int) -> int:
    for j in range(p + 1):  # fill the cache bottom-up; avoids deep recursion
        _bernoulli_plus(j)
    total = sum(comb(p + 1, j) * _bernoulli_plus(j) * n ** (p + 1 - j) for j in range(p + 1))
    total /= p + 1
    if total.denominator != 1:
        raise ArithmeticError(f"Faulhaber sum is not integral: {total}")
    return total.numerator


def _direct_power_sum(p: int, n: int) -> int:
    return sum(k**p for k in range(1, n + 1))


def power_sum(p: int, n: int) -> int:
    """``S_p(n) = 1^p + ... + n^p`` as an exact integer.

    Uses Faulhaber's formula when it has fewer terms than the sum itself.
    """
    if p < 0 or n < 0:
        raise DomainError("power_sum needs p >= 0 and n >= 0")
    if n <= p + 1:
        return _direct_power_sum(p, n)
    return _faulhaber(p, n)


def power_sum_table(pmax: int, n: int) -> list[int]:
    """``[S_0(n), ..., S_pmax(n)]`` by running products, exact."""
    if pmax < 0 or n < 0:
        raise DomainError("power_sum_table needs pmax >= 0 and n >= 0")
    ks = list(range(1, n + 1))
    powers = [1] * n
    out = [n]
    for _ in range(pmax):
        powers = [a * k for a, k in zip(powers, ks)]
        out.append(sum(powers))
    return out


def mellin_coefficients(n: int) -> list[int]:
    """:func:`mellin_coefficient` for ``m = 1..n`` from one power-sum table."""
    if n < 1:
        raise DomainError("need n >= 1")
    table = power_sum_table(2 * n - 2, n)
    return [n * table[2 * m - 2] - table[m - 1] ** 2 for m in range(1, n + 1)]


def mellin_coefficient(m: int, n: int) -> int:
    """``n S_{2m-2}(n) - S_{m-1}(n)^2``: n^2 times the variance of ``k^(m-1)``."""
    if n < 1 or m < 1:
        raise DomainError(f"need m >= 1 and n >= 1, got m={m}, n={n}")
    return n * power_sum(2 * m - 2, n) - power_sum(m - 1, n) ** 2


def mellin_closed_form(m: int, n: int) -> int | None:
    """Closed forms of :func:`mellin_coefficient` for ``m = 2, 3`` (else ``None``)."""
    if m == 2:
        num = n * n * (n - 1) * (n + 1)
        q, rem = divmod(num, 12)
    elif m == 3:
        num = n * n * (n - 1) * (n + 1) * (2 * n + 1) * (8 * n + 11)
        q, rem = divmod(num, 180)
    else:
        return None
    if rem:
        raise ArithmeticError(f"closed form not integral at m={m}, n={n}")
    return q


def _to_float(value: int) -> float:
    try:
        return float(value)
    except OverflowError as exc:
        raise RangeError(f"integer coefficient {value} does not fit in a float") from exc


# ---------------------------------------------------------- Fourier kernel


_PI = Fraction("3.14159265358979323846264338327950288419716939937510582097494459")


def _reduce_mod_pi(theta: float) -> float:
    """``theta - j pi`` in ``[-pi/2, pi/2]``, computed in exact rational arithmetic."""
    j = round(theta / np.pi)
    return float(Fraction(theta) - j * _PI)


def fourier_kernel_direct(params: TransformParams) -> complex:
    return complex(np.sum(fourier_weights(params)))


def fourier_kernel_sum(params: TransformParams, guard: float = KERNEL_GUARD) -> complex:
    """``sum_k exp(2 i omega m k) = sin(omega m n) / sin(omega m) * exp(i omega (n + 1) m)``."""
    n = params.n
    # the expression is pi-periodic in theta, so reduce exactly first:
    # near-singular points otherwise lose ~|theta n| ulps to sin(theta n)
    t = _reduce_mod_pi(float(params.omega * params.m))
    den = np.sin(t)
    if abs(den) <= guard:
        raise SingularKernelError(f"|sin(omega m)| = {abs(den):.3e} is within the guard band")
    return complex(np.sin(t * n) / den * np.exp(1j * t * (n + 1)))


# ------------------------------------------------------------ bound checks


def _anchored(xs: np.ndarray) -> np.ndarray:
    return xs - xs[0]


def _centered_gram(xs: np.ndarray, p: np.ndarray) -> np.ndarray:
    """``sum p |x_k|^2 - |sum p x_k|^2`` evaluated as a translate by ``x_1``."""
    d = _anchored(xs)
    mean = weighted_mean(d, p)
    return weighted_mean(adjoint(d) @ d, p) - adjoint(mean) @ mean


def _pair_report(name: str, As, Bs, A, B, weights: np.ndarray, tol: Tolerance, **kw) -> BoundReport:
    """Uniform-weight pair bound for ``sum w_k A_k* B_k - (mean A_k*)(sum w_k B_k)``."""
    n = As.shape[0]
    wB = weights[:, None, None] * Bs
    dA = _anchored(As)
    # A_1* factors out of both terms and cancels, leaving the anchored form
    dev = np.sum(adjoint(dA) @ wB, axis=0) - adjoint(dA.mean(axis=0)) @ wB.sum(axis=0)
    lhs = adjoint(dev) @ dev

    mean_A = As.mean(axis=0)
    first = np.sum(adjoint(As - A) @ (As - A), axis=0) - adjoint(mean_A - A) @ (mean_A - A)
    mean_wB = wB.mean(axis=0)
    second_full = np.sum(adjoint(wB - B) @ (wB - B), axis=0)
    second = second_full - adjoint(mean_wB - B) @ (mean_wB - B)
    mid = operator_norm(first) * second
    final = sum(module_norm(a - A) ** 2 for a in As) * second_full
    return _report(name, lhs, [(lhs, mid), (mid, final)], final, tol, mid=mid, **kw)


def _shape_check(As, Bs, A, B):
    As, Bs = as_tuple(As), as_tuple(Bs)
    A, B = as_element(A), as_element(B)
    if As.shape != Bs.shape or As.shape[1:] != A.shape or A.shape != B.shape:
        raise DomainError("transform bound: inconsistent shapes")
    return As, Bs, A, B


def fourier_bound_check(As, Bs, A, B, params: TransformParams, tol: Tolerance = DEFAULT_TOL,
                        guard: float = KERNEL_GUARD) -> list[BoundReport]:
    """Check the Fourier pair bound and the kernel-surrogate bound.

    Returns ``[pair, surrogate]``.  The surrogate report is marked
    ``"skipped: singular kernel"`` when ``|sin(omega m)| <= guard``.
    """
    As, Bs, A, B = _shape_check(As, Bs, A, B)
    _check_len(As, params.n)
    alphas = fourier_weights(params)
    n = params.n
    pair = _pair_report("fourier.pair", As, Bs, A, B, alphas, tol)
    try:
        kernel = fourier_kernel_sum(params, guard)
    except SingularKernelError:
        return [pair, _skipped("fourier.surrogate", "singular kernel")]
    # |kernel| = |sin(omega m n) / sin(omega m)|, already range-reduced
    coef = n * n - abs(kernel) ** 2
    dA = _anchored(As)
    dev = np.tensordot(alphas, dA, axes=(0, 0)) - kernel * dA.mean(axis=0)
    lhs = adjoint(dev) @ dev
    rhs = coef * _centered_gram(As, np.full(n, 1.0 / n))
    surrogate = _report("fourier.surrogate", lhs, [(lhs, rhs)], rhs, tol, coefficient=float(coef),
                        extras={"kernel": [kernel.real, kernel.imag]})
    return [pair, surrogate]


def mellin_bound_check(As, Bs, A, B, m: int, tol: Tolerance = DEFAULT_TOL) -> list[BoundReport]:
    """Check the Mellin pair bound and the moment-surrogate bound; returns ``[pair, surrogate]``.

    For ``m = 2, 3`` the exact coefficient is compared with its closed form
    and the looser final bound ``coefficient / n * sum |A_k|^2`` is checked.
    """
    As, Bs, A, B = _shape_check(As, Bs, A, B)
    n = As.shape[0]
    if m < 1:
        raise DomainError(f"need m >= 1, got m={m}")
    weights = mellin_weights(m, n)
    pair = _pair_report("mellin.pair", As, Bs, A, B, weights, tol)

    coef = mellin_coefficient(m, n)
    closed = mellin_closed_form(m, n)
    extras = {"power_sum": power_sum(m - 1, n)}
    if closed is not None:
        extras["closed_form"] = closed
        extras["closed_form_matches"] = closed == coef
    # weights anchored at k = 1 as well: k^(m-1) - 1 and (S - n) / n, exact until here
    dA = _anchored(As)
    shifted = np.array([_to_float(k ** (m - 1) - 1) for k in range(1, n + 1)])
    mean_shift = _to_float(power_sum(m - 1, n) - n) / n
    dev = np.tensordot(shifted, dA, axes=(0, 0)) - mean_shift * dA.sum(axis=0)
    lhs = adjoint(dev) @ dev
    gram = _centered_gram(As, np.full(n, 1.0 / n))
    rhs = _to_float(coef) * gram
    links = [(lhs, rhs)]
    final = rhs
    if closed is not None:
        final = (_to_float(coef) / n) * np.sum(adjoint(As) @ As, axis=0)
        links.append((rhs, final))
    report = _report("mellin.surrogate", lhs, links, final, tol, mid=rhs, coefficient=coef, extras=extras)
    if closed is not None and closed != coef:
        report.loewner_holds = False
    return [pair, report]


def alpha_bound_check(alphas, As, A, B, p, tol: Tolerance = DEFAULT_TOL) -> BoundReport:
    """Scalar-coefficient bound for operators on one space (``m = k``).

    Checks ``|D|^2 <= ||translated alpha variance|| * translated operator
    variance`` and the untranslated (``A = B = 0``) form of the same bound,
    where ``D = sum p alpha A_k - (sum p alpha)(sum p A_k)``.
    """
    As = as_tuple(As)
    A, B = as_element(A, square=True), as_element(B, square=True)
    if As.shape[1] != As.shape[2]:
        raise DomainError("alpha bound needs square operators (module over itself)")
    if As.shape[1:] != A.shape or A.shape != B.shape:
        raise DomainError("alpha bound: inconsistent shapes")
    p = as_probability(p)
    alphas = as_coefficients(alphas, p.size)
    if As.shape[0] != p.size:
        raise DomainError(f"{As.shape[0]} operators but {p.size} weights")
    k = As.shape[1]
    eye = np.eye(k, dtype=complex)

    dA = _anchored(As)
    pa = p * (alphas - alphas[0])
    dev = np.tensordot(pa, dA, axes=(0, 0)) - pa.sum() * weighted_mean(dA, p)
    lhs = adjoint(dev) @ dev

    xs = np.conj(alphas)[:, None, None] * eye
    tx = xs - A
    first = weighted_mean(adjoint(tx) @ tx, p) - adjoint(weighted_mean(xs, p) - A) @ (weighted_mean(xs, p) - A)
    ty = As - B
    second = weighted_mean(adjoint(ty) @ ty, p) - adjoint(weighted_mean(As, p) - B) @ (weighted_mean(As, p) - B)
    translated = operator_norm(first) * second

    mean_alpha = np.sum(pa)
    variance = float(np.sum(p * np.abs(alphas - mean_alpha) ** 2))
    untranslated = variance * _centered_gram(As, p)
    return _report("alpha.operator", lhs, [(lhs, translated), (lhs, untranslated)], untranslated, tol,
                   mid=translated, coefficient=variance)
