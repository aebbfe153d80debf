"""Dense complex-matrix model of the C*-algebra M_k.

Algebra elements are plain ``numpy`` arrays of shape ``(k, k)`` and complex
dtype.  The positive linear functional is the trace and the C*-seminorm is
the operator (spectral) norm.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalFailure

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "as_element",
    "identity",
    "zero",
    "adjoint",
    "hermitian_part",
    "abs_element",
    "sqrt_psd",
    "operator_norm",
    "spectral_radius",
    "min_eigenvalue",
    "max_eigenvalue",
    "loewner_slack",
    "loewner_leq",
    "is_idempotent",
    "trace_functional",
]


@dataclass(frozen=True)
class Tolerance:
    """Combined absolute/relative tolerance: ``atol + rtol * scale``."""

    rtol: float = 1e-9
    atol: float = 1e-12

    def __post_init__(self):
        if not (self.rtol >= 0 and self.atol >= 0):
            raise DomainError(f"tolerances must be nonnegative, got {self}")

    def bound(self, scale: float) -> float:
        return self.atol + self.rtol * scale


DEFAULT_TOL = Tolerance()


def as_element(a, *, square: bool = False) -> np.ndarray:
    """Coerce to a 2-D complex array, rejecting NaN/Inf."""
    arr = np.asarray(a, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2:
        raise DomainError(f"expected a matrix, got array of shape {arr.shape}")
    if square and arr.shape[0] != arr.shape[1]:
        raise DomainError(f"expected a square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError("matrix has non-finite entries")
    return arr


def identity(k: int) -> np.ndarray:
    return np.eye(k, dtype=complex)


def zero(rows: int, cols: int | None = None) -> np.ndarray:
    return np.zeros((rows, rows if cols is None else cols), dtype=complex)


def adjoint(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(a, -1, -2))


def hermitian_part(a: np.ndarray) -> np.ndarray:
    """Real part of an algebra element, ``(a + a*) / 2``."""
    return 0.5 * (a + adjoint(a))


def _svd(a: np.ndarray, compute_uv: bool = True):
    try:
        return np.linalg.svd(a, full_matrices=False, compute_uv=compute_uv)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD did not converge: {exc}") from exc


def _eigh(h: np.ndarray, vectors: bool = True):
    try:
        if vectors:
            return np.linalg.eigh(h)
        return np.linalg.eigvalsh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"Hermitian eigensolver failed: {exc}") from exc


def abs_element(a: np.ndarray) -> np.ndarray:
    """Absolute value ``|a| = (a* a)^(1/2)``.

    Computed from the SVD ``a = U S V*`` as ``V S V*``, which avoids squaring
    the condition number.
    """
    a = as_element(a)
    _, s, vh = _svd(a)
    out = (adjoint(vh) * s) @ vh
    return hermitian_part(out)


def sqrt_psd(a: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Positive square root of a Hermitian PSD matrix.

    Eigenvalues in ``[-tol.bound(||a||), 0)`` are clamped to zero; anything
    more negative, or a non-Hermitian input, raises :class:`DomainError`.
    """
    a = as_element(a, square=True)
    scale = operator_norm(a)
    if operator_norm(a - adjoint(a)) > tol.bound(scale):
        raise DomainError("sqrt_psd: input is not Hermitian within tolerance")
    w, v = _eigh(hermitian_part(a))
    if w.size and w.min() < -tol.bound(scale):
        raise DomainError(f"sqrt_psd: input has eigenvalue {w.min():.3e} < 0")
    root = np.sqrt(np.clip(w, 0.0, None))
    return hermitian_part((v * root) @ adjoint(v))


def operator_norm(a: np.ndarray) -> float:
    """Largest singular value; 0 for empty or zero input."""
    a = np.asarray(a, dtype=complex)
    if a.size == 0:
        return 0.0
    if a.ndim < 2:
        return float(np.max(np.abs(a)))
    return float(_svd(a, compute_uv=False)[0])


def spectral_radius(a: np.ndarray) -> float:
    a = as_element(a, square=True)
    try:
        w = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"eigensolver failed: {exc}") from exc
    return float(np.max(np.abs(w))) if w.size else 0.0


def min_eigenvalue(h: np.ndarray) -> float:
    """Smallest eigenvalue of the Hermitian part of ``h``."""
    return float(_eigh(hermitian_part(np.asarray(h, dtype=complex)), vectors=False)[0])


def max_eigenvalue(h: np.ndarray) -> float:
    """Largest eigenvalue of the Hermitian part of ``h``."""
    return float(_eigh(hermitian_part(np.asarray(h, dtype=complex)), vectors=False)[-1])


def loewner_slack(a: np.ndarray, b: np.ndarray) -> float:
    """``lambda_min(b - a)``: nonnegative iff ``a <= b`` in the Loewner order."""
    a = as_element(a, square=True)
    b = as_element(b, square=True)
    if a.shape != b.shape:
        raise DomainError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return min_eigenvalue(b - a)


def loewner_leq(a: np.ndarray, b: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff ``b - a`` is PSD up to ``atol + rtol * ||b - a||``."""
    slack = loewner_slack(a, b)
    return slack >= -tol.bound(operator_norm(np.asarray(b) - np.asarray(a)))


def is_idempotent(a: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> bool:
    a = as_element(a, square=True)
    return operator_norm(a @ a - a) <= tol.bound(operator_norm(a))


def trace_functional(a: np.ndarray) -> complex:
    return complex(np.trace(as_element(a, square=True)))
