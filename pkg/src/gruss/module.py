"""The Hilbert C*-module of m x k complex matrices over M_k.

The right action is matrix multiplication and the algebra-valued inner
product is ``<x, y> = x* y``.  Tuples of module elements are stored as a
single array of shape ``(n, m, k)``.
"""

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .linalg import DEFAULT_TOL, Tolerance, adjoint, as_element, is_idempotent, operator_norm

__all__ = [
    "as_tuple",
    "as_probability",
    "as_coefficients",
    "inner_product",
    "right_action",
    "module_norm",
    "gruss_e",
    "gruss_p",
    "weighted_mean",
    "weighted_alpha_combination",
]


def as_tuple(xs) -> np.ndarray:
    """Coerce a sequence of equally shaped matrices to an ``(n, m, k)`` array."""
    if isinstance(xs, np.ndarray):
        arr = xs.astype(complex, copy=False)
    else:
        items = [as_element(x) for x in xs]
        if not items:
            raise DomainError("a module tuple needs at least one element")
        shapes = {x.shape for x in items}
        if len(shapes) != 1:
            raise DomainError(f"tuple elements have mixed shapes {sorted(shapes)}")
        arr = np.stack(items)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    if arr.ndim != 3 or arr.shape[0] < 1:
        raise DomainError(f"expected a tuple of matrices, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("tuple has non-finite entries")
    return arr


def as_probability(p: Sequence[float] | np.ndarray, atol: float = 1e-12) -> np.ndarray:
    w = np.asarray(p, dtype=float)
    if w.ndim != 1 or w.size < 1:
        raise DomainError("probability vector must be a nonempty 1-D list")
    if not np.all(np.isfinite(w)):
        raise DomainError("probability vector has non-finite entries")
    if np.any(w < 0):
        raise DomainError("probability weights must be nonnegative")
    if abs(w.sum() - 1.0) > atol:
        raise DomainError(f"probability weights sum to {w.sum()!r}, not 1")
    return w


def as_coefficients(alphas, n: int) -> np.ndarray:
    a = np.asarray(alphas, dtype=complex).reshape(-1)
    if a.size != n:
        raise DomainError(f"expected {n} coefficients, got {a.size}")
    if not np.all(np.isfinite(a)):
        raise DomainError("coefficients must be finite")
    return a


def _same_shape(*arrays: np.ndarray) -> None:
    shapes = {a.shape for a in arrays}
    if len(shapes) != 1:
        raise DomainError(f"shape mismatch: {sorted(shapes)}")


def inner_product(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``<x, y> = x* y``; broadcasts over a leading tuple axis."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    _same_shape(x, y)
    return adjoint(x) @ y


def right_action(x: np.ndarray, a: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    a = as_element(a, square=True)
    if x.shape[-1] != a.shape[0]:
        raise DomainError(f"cannot act by a {a.shape} element on shape {x.shape}")
    return x @ a


def module_norm(x: np.ndarray) -> float:
    """``||<x, x>||^(1/2)``, which equals the largest singular value of ``x``."""
    return operator_norm(as_element(x))


def gruss_e(x, y, e, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """``<x, y> - <x, e><e, y>`` for ``e`` with idempotent ``<e, e>``."""
    x, y, e = as_element(x), as_element(y), as_element(e)
    _same_shape(x, y, e)
    if not is_idempotent(inner_product(e, e), tol):
        raise PreconditionError("<e, e> is not idempotent")
    return inner_product(x, y) - inner_product(x, e) @ inner_product(e, y)


def weighted_mean(xs: np.ndarray, p: np.ndarray) -> np.ndarray:
    """``sum_i p_i x_i`` over the leading axis."""
    return np.tensordot(np.asarray(p), xs, axes=(0, 0))


def gruss_p(xs, ys, p) -> np.ndarray:
    """``sum_i p_i <x_i, y_i> - <sum_i p_i x_i, sum_i p_i y_i>``.

    Evaluated on ``x_i - x_1`` and ``y_i - y_1``; the value is translation
    invariant, and the anchored form is exactly zero on constant tuples.
    """
    xs, ys = as_tuple(xs), as_tuple(ys)
    p = as_probability(p)
    _same_shape(xs, ys)
    if xs.shape[0] != p.size:
        raise DomainError(f"{xs.shape[0]} elements but {p.size} weights")
    xs, ys = xs - xs[0], ys - ys[0]
    first = weighted_mean(inner_product(xs, ys), p)
    return first - inner_product(weighted_mean(xs, p), weighted_mean(ys, p))


def weighted_alpha_combination(alphas, xs, p) -> np.ndarray:
    """``sum_i p_i alpha_i x_i - (sum_i p_i alpha_i)(sum_i p_i x_i)``."""
    xs = as_tuple(xs)
    p = as_probability(p)
    if xs.shape[0] != p.size:
        raise DomainError(f"{xs.shape[0]} elements but {p.size} weights")
    alphas = as_coefficients(alphas, p.size)
    pa = p * alphas
    return weighted_mean(xs, pa) - pa.sum() * weighted_mean(xs, p)
