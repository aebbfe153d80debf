"""Seeded fuzz campaigns over every checkable inequality.

Each campaign id names an instance builder and an evaluator.  Trial ``i`` of
a campaign draws its instance from ``substream(seed, id, i)``, so reports are
bit-identical for a given seed regardless of worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import GenerationError, UsageError
from .generate import (
    Dims,
    GenConfig,
    ball_tuple,
    draw_dims,
    random_coefficients,
    random_contraction,
    random_matrix,
    random_partial_isometry,
    random_probability_vector,
    substream,
)
from .inequalities import (
    IDENTITY_TOL,
    Verdict,
    chain_verdict,
    check_gruss,
    check_identities,
    check_schwarz,
)
from .linalg import DEFAULT_TOL, Tolerance
from .serialize import decode_instance, encode_instance
from .transforms import BoundReport, TransformParams, alpha_bound_check, fourier_bound_check, mellin_bound_check

__all__ = [
    "CAMPAIGNS",
    "SUITES",
    "ALIASES",
    "resolve_id",
    "build_instance",
    "evaluate",
    "report_verdict",
    "FuzzReport",
    "fuzz_campaign",
    "replay",
]


# ---------------------------------------------------------------- builders


def _cfg(scale: float) -> GenConfig:
    return GenConfig(scale=scale)


def _build_schwarz(rng, dims: Dims, scale: float) -> dict:
    k, m, _ = draw_dims(dims, rng)
    cfg = _cfg(scale)
    x = random_matrix(m, k, cfg, rng)
    roll = rng.uniform()
    if roll < 0.1:
        y = np.zeros_like(x)
    elif roll < 0.2:
        y = x @ random_matrix(k, k, cfg, rng)  # same column space: near-equality cases
    else:
        y = random_matrix(m, k, cfg, rng)
    return {"x": x, "y": y}


def _partial_isometry(rng, m: int, k: int) -> np.ndarray:
    rank = int(rng.integers(0, min(m, k), endpoint=True))
    return random_partial_isometry(m, k, rank, GenConfig(), rng)


def _build_idempotent_identities(rng, dims: Dims, scale: float) -> dict:
    k, m, _ = draw_dims(dims, rng)
    cfg = _cfg(scale)
    return {
        "x": random_matrix(m, k, cfg, rng),
        "y": random_matrix(m, k, cfg, rng),
        "e": _partial_isometry(rng, m, k),
        "a": random_matrix(k, k, cfg, rng),
        "b": random_matrix(k, k, cfg, rng),
    }


def _tuple(rng, n: int, m: int, k: int, cfg: GenConfig) -> np.ndarray:
    return np.stack([random_matrix(m, k, cfg, rng) for _ in range(n)])


def _build_weighted_identities(rng, dims: Dims, scale: float) -> dict:
    k, m, n = draw_dims(dims, rng)
    cfg = _cfg(scale)
    return {
        "xs": _tuple(rng, n, m, k, cfg),
        "ys": _tuple(rng, n, m, k, cfg),
        "alphas": random_coefficients(n, cfg, rng),
        "p": random_probability_vector(n, cfg, rng),
        "a": random_matrix(m, k, cfg, rng),
        "b": random_matrix(m, k, cfg, rng),
    }


def _build_gruss_idempotent(rng, dims: Dims, scale: float) -> dict:
    k, m, _ = draw_dims(dims, rng)
    cfg = _cfg(scale)
    e = _partial_isometry(rng, m, k)
    a, b, c, d = (random_matrix(k, k, cfg, rng) for _ in range(4))
    if rng.uniform() < 0.5:
        # x = e(a+b)/2 + V e(a-b)/2 with ||V|| <= 1 makes Re<x - ea, eb - x> >= 0
        x = e @ ((a + b) / 2) + random_contraction(m, rng) @ e @ ((a - b) / 2)
        y = e @ ((c + d) / 2) + random_contraction(m, rng) @ e @ ((c - d) / 2)
    else:
        x = random_matrix(m, k, cfg, rng)
        y = random_matrix(m, k, cfg, rng)
    return {"x": x, "y": y, "e": e, "a": a, "b": b, "c": c, "d": d}


def _build_gruss_weighted(rng, dims: Dims, scale: float) -> dict:
    k, m, n = draw_dims(dims, rng)
    cfg = _cfg(scale)
    return {
        "xs": _tuple(rng, n, m, k, cfg),
        "ys": _tuple(rng, n, m, k, cfg),
        "p": random_probability_vector(n, cfg, rng),
        "a": random_matrix(m, k, cfg, rng),
        "b": random_matrix(m, k, cfg, rng),
    }


def _build_gruss_radius(rng, dims: Dims, scale: float) -> dict:
    k, m, n = draw_dims(dims, rng)
    cfg = _cfg(scale)
    a = random_matrix(m, k, cfg, rng)
    b = random_matrix(m, k, cfg, rng)
    r = float(rng.uniform(0.0, 2.0 * scale))
    s = float(rng.uniform(0.0, 2.0 * scale))
    return {
        "xs": ball_tuple(a, r, n, cfg, rng),
        "ys": ball_tuple(b, s, n, cfg, rng),
        "p": random_probability_vector(n, cfg, rng),
        "a": a,
        "b": b,
        "r": r,
        "s": s,
    }


def _build_gruss_alpha(rng, dims: Dims, scale: float) -> dict:
    k, m, n = draw_dims(dims, rng)
    cfg = _cfg(scale)
    a = random_matrix(m, k, cfg, rng)
    r = float(rng.uniform(0.0, 2.0 * scale))
    return {
        "alphas": random_coefficients(n, cfg, rng),
        "xs": ball_tuple(a, r, n, cfg, rng),
        "p": random_probability_vector(n, cfg, rng),
        "a": a,
        "r": r,
    }


def _build_gruss_scalar(rng, dims: Dims, scale: float) -> dict:
    _, _, n = draw_dims(dims, rng)
    lo_a, hi_a = np.sort(rng.uniform(-scale, scale, size=2))
    lo_b, hi_b = np.sort(rng.uniform(-scale, scale, size=2))
    u = rng.uniform(lo_a, hi_a, size=n)
    v = rng.uniform(lo_b, hi_b, size=n)
    if rng.uniform() < 0.5:
        # push some entries onto the bounds, where the inequality is tight
        u = np.where(rng.uniform(size=n) < 0.5, lo_a, hi_a)
        v = np.where(rng.uniform(size=n) < 0.5, lo_b, hi_b)
    return {
        "xs": u.astype(complex).reshape(n, 1, 1),
        "ys": v.astype(complex).reshape(n, 1, 1),
        "a_lo": float(lo_a),
        "a_hi": float(hi_a),
        "b_lo": float(lo_b),
        "b_hi": float(hi_b),
    }


def _build_transform(rng, dims: Dims, scale: float, fourier: bool) -> dict:
    k, m, n = draw_dims(dims, rng)
    cfg = _cfg(scale)
    order = int(rng.integers(1, n, endpoint=True))
    inst = {
        "As": _tuple(rng, n, m, k, cfg),
        "Bs": _tuple(rng, n, m, k, cfg),
        "A": random_matrix(m, k, cfg, rng),
        "B": random_matrix(m, k, cfg, rng),
        "order": order,
    }
    if fourier:
        inst["omega"] = float(rng.uniform(0.0, np.pi))
    return inst


def _build_fourier(rng, dims, scale):
    return _build_transform(rng, dims, scale, fourier=True)


def _build_mellin(rng, dims, scale):
    return _build_transform(rng, dims, scale, fourier=False)


def _build_alpha_operator(rng, dims: Dims, scale: float) -> dict:
    k, _, n = draw_dims(dims, rng)
    cfg = _cfg(scale)
    zero = rng.uniform() < 0.5
    return {
        "alphas": random_coefficients(n, cfg, rng),
        "As": _tuple(rng, n, k, k, cfg),
        "A": np.zeros((k, k), complex) if zero else random_matrix(k, k, cfg, rng),
        "B": np.zeros((k, k), complex) if zero else random_matrix(k, k, cfg, rng),
        "p": random_probability_vector(n, cfg, rng),
    }


# -------------------------------------------------------------- evaluators


def report_verdict(report: BoundReport, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    """View a checked :class:`BoundReport` as a Loewner verdict."""
    return Verdict(
        report.inequality_id,
        "loewner",
        report.lhs_max,
        report.bound_final,
        report.slack,
        report.scale,
        bool(report.loewner_holds),
        tol,
    )


def _reports_chain(name: str, reports: list[BoundReport], tol: Tolerance) -> Verdict:
    links = [report_verdict(rep, tol) for rep in reports if rep.checked]
    skipped = [f"{rep.inequality_id}: {rep.status}" for rep in reports if not rep.checked]
    return chain_verdict(name, links, skipped)


def _eval_fourier(inst, tol):
    params = TransformParams(inst["omega"], inst["order"], inst["As"].shape[0])
    return _reports_chain("transforms.fourier", fourier_bound_check(inst["As"], inst["Bs"], inst["A"], inst["B"], params, tol), tol)


def _eval_mellin(inst, tol):
    reports = mellin_bound_check(inst["As"], inst["Bs"], inst["A"], inst["B"], inst["order"], tol)
    return _reports_chain("transforms.mellin", reports, tol)


def _eval_alpha_operator(inst, tol):
    rep = alpha_bound_check(inst["alphas"], inst["As"], inst["A"], inst["B"], inst["p"], tol)
    return _reports_chain("transforms.alpha", [rep], tol)


def _eval_identities(which):
    def run(inst, tol):
        return chain_verdict(f"identities.{which}", check_identities(which, inst, IDENTITY_TOL, tol))

    return run


def _eval_schwarz(variant):
    return lambda inst, tol: check_schwarz(variant, inst["x"], inst["y"], tol)


def _eval_gruss(variant):
    return lambda inst, tol: check_gruss(variant, inst, tol)


CAMPAIGNS = {
    **{f"schwarz.{v}": (_build_schwarz, _eval_schwarz(v)) for v in ("module", "abs", "functional", "radius", "seminorm")},
    "identities.idempotent": (_build_idempotent_identities, _eval_identities("idempotent")),
    "identities.weighted": (_build_weighted_identities, _eval_identities("weighted")),
    "gruss.idempotent": (_build_gruss_idempotent, _eval_gruss("idempotent")),
    "gruss.weighted": (_build_gruss_weighted, _eval_gruss("weighted")),
    "gruss.radius": (_build_gruss_radius, _eval_gruss("radius")),
    "gruss.alpha": (_build_gruss_alpha, _eval_gruss("alpha")),
    "gruss.scalar": (_build_gruss_scalar, _eval_gruss("scalar")),
    "transforms.fourier": (_build_fourier, _eval_fourier),
    "transforms.mellin": (_build_mellin, _eval_mellin),
    "transforms.alpha": (_build_alpha_operator, _eval_alpha_operator),
}

SUITES = {
    suite: [cid for cid in CAMPAIGNS if cid.startswith(suite + ".")]
    for suite in ("schwarz", "identities", "gruss", "transforms")
}
SUITES["all"] = list(CAMPAIGNS)

ALIASES = {
    "thm31": "gruss.idempotent",
    "thm42": "gruss.weighted",
    "cor43": "gruss.radius",
    "rem44": "gruss.alpha",
    "scalar12": "gruss.scalar",
    "lemma31": "identities.idempotent",
    "lemma41": "identities.weighted",
}


def resolve_id(name: str) -> str:
    cid = ALIASES.get(name, name)
    if cid not in CAMPAIGNS:
        raise UsageError(f"unknown inequality id {name!r}; known: {sorted(CAMPAIGNS) + sorted(ALIASES)}")
    return cid


def build_instance(inequality_id: str, seed: int, index: int, dims: Dims = Dims(), scale: float = 1.0,
                   retry_limit: int = 64) -> dict:
    cid = resolve_id(inequality_id)
    builder = CAMPAIGNS[cid][0]
    last = None
    for attempt in range(retry_limit):
        tag = cid if attempt == 0 else f"{cid}#retry{attempt}"
        try:
            return builder(substream(seed, tag, index), dims, scale)
        except GenerationError as exc:
            last = exc
    raise GenerationError(f"{cid}: no valid instance after {retry_limit} attempts ({last})")


def evaluate(inequality_id: str, instance: dict, tol: Tolerance = DEFAULT_TOL) -> Verdict:
    return CAMPAIGNS[resolve_id(inequality_id)][1](instance, tol)


# ------------------------------------------------------------------ fuzzing


@dataclass
class FuzzReport:
    inequality_id: str
    trials: int
    failures: int
    min_slack: float
    worst_index: int
    worst_case: dict
    worst_verdict: dict
    seed: int
    dims: Dims = field(default_factory=Dims)
    scale: float = 1.0
    tol: Tolerance = DEFAULT_TOL
    failure_indices: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "inequality_id": self.inequality_id,
            "trials": self.trials,
            "failures": self.failures,
            "min_slack": self.min_slack,
            "worst_index": self.worst_index,
            "worst_case": {
                "gen": GenConfig(seed=self.seed, scale=self.scale).to_dict(),
                "trial_index": self.worst_index,
                "instance": self.worst_case,
            },
            "worst_verdict": self.worst_verdict,
            "seed": self.seed,
            "dims": self.dims.to_dict(),
            "scale": self.scale,
            "tol": {"rtol": self.tol.rtol, "atol": self.tol.atol},
            "failure_indices": list(self.failure_indices),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FuzzReport":
        return cls(
            inequality_id=d["inequality_id"],
            trials=int(d["trials"]),
            failures=int(d["failures"]),
            min_slack=float(d["min_slack"]),
            worst_index=int(d["worst_index"]),
            worst_case=d["worst_case"]["instance"],
            worst_verdict=d["worst_verdict"],
            seed=int(d["seed"]),
            dims=Dims.from_dict(d["dims"]),
            scale=float(d["scale"]),
            tol=Tolerance(**d["tol"]),
            failure_indices=[int(i) for i in d.get("failure_indices", [])],
        )


def fuzz_campaign(inequality_id: str, trials: int, seed: int, dims: Dims = Dims(),
                  tol: Tolerance = DEFAULT_TOL, scale: float = 1.0, workers: int = 1) -> FuzzReport:
    """Run ``trials`` seeded instances of one inequality and aggregate the verdicts."""
    cid = resolve_id(inequality_id)
    if trials < 1:
        raise UsageError("a fuzz campaign needs at least one trial")

    def trial(i: int):
        inst = build_instance(cid, seed, i, dims, scale)
        return inst, evaluate(cid, inst, tol)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(trial, range(trials)))
    else:
        results = [trial(i) for i in range(trials)]

    failures = [i for i, (_, v) in enumerate(results) if not v.holds]
    worst = min(range(trials), key=lambda i: results[i][1].slack)
    inst, verdict = results[worst]
    return FuzzReport(
        inequality_id=cid,
        trials=trials,
        failures=len(failures),
        min_slack=verdict.slack,
        worst_index=worst,
        worst_case=encode_instance(inst),
        worst_verdict=verdict.to_dict(),
        seed=seed,
        dims=dims,
        scale=scale,
        tol=tol,
        failure_indices=failures,
    )


def replay(report: FuzzReport) -> Verdict:
    """Re-evaluate the worst case stored in a fuzz report."""
    return evaluate(report.inequality_id, decode_instance(report.worst_case), report.tol)
