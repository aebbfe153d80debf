"""Seeded generation of hypothesis-satisfying instances.

Every random draw comes from a ``numpy`` PCG64 stream whose seed sequence is
``(seed, crc32(purpose), index)``.  Streams for different purposes or trial
indices are independent, so a campaign gives identical results no matter in
which order (or on which worker) its trials run.
"""

from __future__ import annotations

import zlib
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, GenerationError
from .linalg import is_idempotent, operator_norm
from .module import as_element, inner_product, module_norm

__all__ = [
    "RNG_NAME",
    "GenConfig",
    "substream",
    "random_matrix",
    "random_algebra_element",
    "random_partial_isometry",
    "random_probability_vector",
    "random_coefficients",
    "random_contraction",
    "ball_tuple",
    "sharpness_pair",
    "Dims",
    "draw_dims",
]

#: Recorded in reports so that a replay can refuse an incompatible stream.
RNG_NAME = "numpy.PCG64/SeedSequence(seed, crc32(tag), index) v1"

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class GenConfig:
    seed: int = 0
    scale: float = 1.0
    retry_limit: int = 64

    def __post_init__(self):
        if not self.scale >= 0:
            raise DomainError(f"scale must be nonnegative, got {self.scale}")
        if self.retry_limit < 1:
            raise DomainError("retry_limit must be at least 1")

    def to_dict(self) -> dict:
        return {"seed": self.seed, "scale": self.scale, "retry_limit": self.retry_limit, "rng": RNG_NAME}

    @classmethod
    def from_dict(cls, d: dict) -> "GenConfig":
        return cls(seed=int(d["seed"]), scale=float(d["scale"]), retry_limit=int(d["retry_limit"]))


def substream(seed: int, tag: str = "", index: int = 0) -> np.random.Generator:
    """Independent generator for ``(seed, tag, index)``."""
    ss = np.random.SeedSequence([seed & _MASK64, zlib.crc32(tag.encode()), index])
    return np.random.Generator(np.random.PCG64(ss))


def _rng(cfg: GenConfig, rng: np.random.Generator | None, tag: str) -> np.random.Generator:
    return rng if rng is not None else substream(cfg.seed, tag)


def random_matrix(rows: int, cols: int, cfg: GenConfig = GenConfig(), rng=None) -> np.ndarray:
    """Complex matrix with real and imaginary parts uniform in ``[-scale, scale]``."""
    if rows < 1 or cols < 1:
        raise DomainError(f"matrix shape must be positive, got {(rows, cols)}")
    g = _rng(cfg, rng, "matrix")
    re = g.uniform(-1.0, 1.0, size=(rows, cols))
    im = g.uniform(-1.0, 1.0, size=(rows, cols))
    return cfg.scale * (re + 1j * im)


def random_algebra_element(k: int, cfg: GenConfig = GenConfig(), rng=None) -> np.ndarray:
    return random_matrix(k, k, cfg, rng)


def random_partial_isometry(rows: int, cols: int, rank: int, cfg: GenConfig = GenConfig(), rng=None) -> np.ndarray:
    """``U diag(1,..,1,0,..,0) V*`` from the SVD of a random matrix.

    ``e* e`` is then the orthogonal projection onto a random ``rank``-dim
    subspace of C^cols.
    """
    if not 0 <= rank <= min(rows, cols):
        raise DomainError(f"rank {rank} infeasible for shape {(rows, cols)}")
    g = _rng(cfg, rng, "partial_isometry")
    for _ in range(cfg.retry_limit):
        u, _, vh = np.linalg.svd(random_matrix(rows, cols, GenConfig(scale=1.0), g))
        e = u[:, :rank] @ vh[:rank, :]
        if is_idempotent(inner_product(e, e)):
            return e
    raise GenerationError("could not produce a partial isometry")


def random_probability_vector(n: int, cfg: GenConfig = GenConfig(), rng=None) -> np.ndarray:
    if n < 1:
        raise DomainError("probability vector needs n >= 1")
    g = _rng(cfg, rng, "probability")
    w = g.exponential(size=n) + np.finfo(float).tiny
    w = w / w.sum()
    # push the rounding remainder into the largest weight
    w[np.argmax(w)] += 1.0 - w.sum()
    return w


def random_coefficients(n: int, cfg: GenConfig = GenConfig(), rng=None, real: bool = False) -> np.ndarray:
    g = _rng(cfg, rng, "coefficients")
    re = g.uniform(-cfg.scale, cfg.scale, size=n)
    if real:
        return re.astype(complex)
    return re + 1j * g.uniform(-cfg.scale, cfg.scale, size=n)


def random_contraction(size: int, rng: np.random.Generator) -> np.ndarray:
    """Square matrix with operator norm uniform in (0, 1]."""
    v = random_matrix(size, size, GenConfig(scale=1.0), rng)
    return v * (rng.uniform(0.0, 1.0) or 1.0) / max(operator_norm(v), 1e-300)


def ball_tuple(center, radius: float, n: int, cfg: GenConfig = GenConfig(), rng=None) -> np.ndarray:
    """``n`` elements within module-norm distance ``radius`` of ``center``.

    Random offsets are rescaled (never rejected) to norms ``rho_i * radius``;
    the first element gets ``rho = 1`` so the ball is actually explored.
    """
    center = as_element(center)
    if radius < 0:
        raise DomainError("radius must be nonnegative")
    if n < 1:
        raise DomainError("ball_tuple needs n >= 1")
    g = _rng(cfg, rng, "ball")
    rows, cols = center.shape
    rho = g.uniform(0.0, 1.0, size=n)
    rho[0] = 1.0
    out = np.empty((n, rows, cols), dtype=complex)
    for i in range(n):
        d = random_matrix(rows, cols, GenConfig(scale=1.0), g)
        d = d / operator_norm(d)
        shrink = 1.0
        for attempt in range(cfg.retry_limit):
            out[i] = center + (rho[i] * radius * shrink) * d
            if module_norm(out[i] - center) <= radius:
                break
            # rounding in center + d pushed us past the boundary
            shrink *= 1.0 - 1e-12 * 2.0**attempt
        else:
            raise GenerationError("ball_tuple: rescaled offset still outside the ball")
    return out


def sharpness_pair(a, b, r: float, s: float, cfg: GenConfig = GenConfig(), rng=None):
    """Two-point extremal instance ``x = a +- r e``, ``y = b +- s e``, ``p = (1/2, 1/2)``.

    ``e`` is a rank-one partial isometry, so ``||<e, e>|| = 1``.
    Returns ``(xs, ys, p, e)``.
    """
    a, b = as_element(a), as_element(b)
    if a.shape != b.shape:
        raise DomainError(f"centers have different shapes {a.shape}, {b.shape}")
    if r < 0 or s < 0:
        raise DomainError("radii must be nonnegative")
    g = _rng(cfg, rng, "sharpness")
    e = random_partial_isometry(a.shape[0], a.shape[1], 1, cfg, g)
    xs = np.stack([a + r * e, a - r * e])
    ys = np.stack([b + s * e, b - s * e])
    return xs, ys, np.array([0.5, 0.5]), e


@dataclass(frozen=True)
class Dims:
    """Inclusive ranges for the algebra size k, module rows m and tuple length n."""

    k: tuple[int, int] = (1, 4)
    m: tuple[int, int] = (1, 4)
    n: tuple[int, int] = (1, 6)

    def __post_init__(self):
        for name in ("k", "m", "n"):
            lo, hi = getattr(self, name)
            if not 1 <= lo <= hi:
                raise DomainError(f"bad range for {name}: {(lo, hi)}")

    def to_dict(self) -> dict:
        return {"k": list(self.k), "m": list(self.m), "n": list(self.n)}

    @classmethod
    def from_dict(cls, d: dict) -> "Dims":
        return cls(k=tuple(d["k"]), m=tuple(d["m"]), n=tuple(d["n"]))


def draw_dims(dims: Dims, rng: np.random.Generator) -> tuple[int, int, int]:
    k = int(rng.integers(dims.k[0], dims.k[1], endpoint=True))
    m = int(rng.integers(dims.m[0], dims.m[1], endpoint=True))
    n = int(rng.integers(dims.n[0], dims.n[1], endpoint=True))
    return k, m, n

