"""Report envelopes, deterministic verification tables and the transform CSV schema."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .errors import SingularKernelError
from .generate import GenConfig, random_matrix, substream
from .inequalities import check_gruss, sharpness_demo
from .linalg import DEFAULT_TOL, Tolerance
from .transforms import (
    KERNEL_GUARD,
    BoundReport,
    TransformParams,
    fourier_bound_check,
    fourier_kernel_direct,
    fourier_kernel_sum,
    mellin_bound_check,
    mellin_closed_form,
    mellin_coefficient,
    mellin_coefficients,
)

__all__ = [
    "SCHEMA_VERSION",
    "TRANSFORM_CSV_COLUMNS",
    "Manifest",
    "envelope",
    "SHARPNESS_RADII",
    "sharpness_rows",
    "scalar_extremal_rows",
    "kernel_grid_rows",
    "mellin_closed_form_rows",
    "mellin_nonnegative_rows",
    "transform_rows",
    "write_transform_csv",
    "read_transform_csv",
]

SCHEMA_VERSION = 1

#: The first six columns are fixed; later ones are informational.
TRANSFORM_CSV_COLUMNS = (
    "inequality_id", "n", "m", "omega", "tightness", "loewner_holds",
    "tuple", "coefficient", "lhs_max", "bound_final", "status",
)


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class Manifest:
    command: str
    parameters: dict
    seed: int
    tool_version: str = __version__
    started: str = field(default_factory=_now)
    finished: str | None = None
    summary: dict = field(default_factory=dict)

    def finish(self, summary: dict) -> None:
        self.summary = summary
        self.finished = _now()

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "seed": self.seed,
            "tool_version": self.tool_version,
            "started": self.started,
            "finished": self.finished,
            "summary": self.summary,
        }


def envelope(manifest: Manifest, **body) -> dict:
    return {"schema_version": SCHEMA_VERSION, "manifest": manifest.to_dict(), **body}


# ------------------------------------------------------ deterministic tables

SHARPNESS_RADII = ((1.0, 1.0), (2.0, 3.0), (0.1, 10.0))


def sharpness_rows(radii=SHARPNESS_RADII, sizes=(1, 2, 4), seed: int = 0, ratio_tol: float = 1e-9) -> list[dict]:
    """Attained-bound ratios ``||G_p|| / (r s)`` over radii and shapes ``k, m``."""
    rows = []
    for r, s in radii:
        for k in sizes:
            for m in sizes:
                _, verdict, ratio = sharpness_demo(r, s, k, m, seed)
                ok = ratio is not None and abs(ratio - 1.0) <= ratio_tol and verdict.holds
                rows.append({"r": r, "s": s, "k": k, "m": m, "ratio": ratio, "slack": verdict.slack, "ok": ok})
    return rows


def scalar_extremal_rows(max_n: int = 20, seed: int = 0, atol: float = 1e-12) -> list[dict]:
    """Alternating two-value sequences on which the scalar bound is attained (even ``n``)."""
    rows = []
    for n in range(2, max_n + 1, 2):
        g = substream(seed, "scalar_extremal", n)
        lo_a, hi_a = np.sort(g.uniform(-1, 1, size=2))
        lo_b, hi_b = np.sort(g.uniform(-1, 1, size=2))
        u = np.where(np.arange(n) % 2 == 0, lo_a, hi_a)
        v = np.where(np.arange(n) % 2 == 0, lo_b, hi_b)
        inst = {"xs": u.reshape(n, 1, 1), "ys": v.reshape(n, 1, 1),
                "a_lo": lo_a, "a_hi": hi_a, "b_lo": lo_b, "b_hi": hi_b}
        verdict = check_gruss("scalar", inst, Tolerance(rtol=0.0, atol=atol))
        rows.append({"n": n, "lhs": verdict.lhs, "rhs": verdict.rhs, "gap": verdict.rhs - verdict.lhs,
                     "ok": abs(verdict.rhs - verdict.lhs) <= atol})
    return rows


def kernel_grid_rows(omegas=None, max_n: int = 64, guard: float = KERNEL_GUARD) -> list[dict]:
    """Closed-form Fourier kernel against direct summation on an ``(omega, m, n)`` grid."""
    if omegas is None:
        omegas = [round(0.1 * i, 10) for i in range(1, 16)]
    rows = []
    for w in omegas:
        for n in range(1, max_n + 1):
            for m in range(1, n + 1):
                params = TransformParams(w, m, n)
                direct = fourier_kernel_direct(params)
                try:
                    closed = fourier_kernel_sum(params, guard)
                except SingularKernelError:
                    rows.append({"omega": w, "m": m, "n": n, "status": "skipped: singular kernel", "ok": None})
                    continue
                err = abs(closed - direct)
                rows.append({"omega": w, "m": m, "n": n, "status": "checked", "error": err, "ok": err <= 1e-12 * n})
    return rows


def mellin_closed_form_rows(max_n: int = 1000) -> list[dict]:
    rows = []
    for n in range(1, max_n + 1):
        for m in (2, 3):
            coef, closed = mellin_coefficient(m, n), mellin_closed_form(m, n)
            rows.append({"m": m, "n": n, "coefficient": coef, "closed_form": closed, "ok": coef == closed})
    return rows


def mellin_nonnegative_rows(max_n: int = 200) -> list[dict]:
    return [{"n": n, "ok": all(c >= 0 for c in mellin_coefficients(n))} for n in range(1, max_n + 1)]


# ------------------------------------------------------------ transform grid


def _grid_tuples(kind: str, n: int, m: int, omega, k: int, rows_dim: int, seed: int, scale: float):
    g = substream(seed, f"transforms.{kind}:{n}:{m}:{omega!r}")
    cfg = GenConfig(scale=scale)
    As = np.stack([random_matrix(rows_dim, k, cfg, g) for _ in range(n)])
    Bs = np.stack([random_matrix(rows_dim, k, cfg, g) for _ in range(n)])
    A = random_matrix(rows_dim, k, cfg, g)
    B = random_matrix(rows_dim, k, cfg, g)
    A0 = random_matrix(rows_dim, k, cfg, g)
    B0 = random_matrix(rows_dim, k, cfg, g)
    const_A = np.broadcast_to(A0, As.shape).copy()
    const_B = np.broadcast_to(B0, Bs.shape).copy()
    return {"random": (As, Bs, A, B), "constant": (const_A, const_B, A, B)}


def transform_rows(kind: str, ns, ms, omegas, k: int = 2, rows_dim: int = 2, seed: int = 0,
                   scale: float = 1.0, tol: Tolerance = DEFAULT_TOL) -> tuple[list[dict], list[BoundReport]]:
    """Tightness table over an ``(n, m, omega)`` grid, random and constant tuples.

    ``ms=None`` means every ``m`` in ``1..n``.  Rows are sorted by grid
    coordinates, then tuple kind, then inequality id.
    """
    rows, reports = [], []
    omega_list = sorted(omegas) if kind == "fourier" else [None]
    for n in sorted(ns):
        m_list = sorted(ms) if ms is not None else range(1, n + 1)
        for m in m_list:
            if m > n and kind == "fourier":
                continue
            for w in omega_list:
                tuples = _grid_tuples(kind, n, m, w, k, rows_dim, seed, scale)
                for label in ("constant", "random"):
                    As, Bs, A, B = tuples[label]
                    if kind == "fourier":
                        got = fourier_bound_check(As, Bs, A, B, TransformParams(w, m, n), tol)
                    else:
                        got = mellin_bound_check(As, Bs, A, B, m, tol)
                    for rep in got:
                        reports.append(rep)
                        rows.append({
                            "inequality_id": rep.inequality_id,
                            "n": n,
                            "m": m,
                            "omega": w,
                            "tightness": rep.tightness,
                            "loewner_holds": rep.loewner_holds,
                            "tuple": label,
                            "coefficient": rep.coefficient,
                            "lhs_max": rep.lhs_max if rep.checked else None,
                            "bound_final": rep.bound_final if rep.checked else None,
                            "status": rep.status,
                        })
    return rows, reports


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_transform_csv(rows: list[dict], stream=None) -> str:
    out = stream if stream is not None else io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TRANSFORM_CSV_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row.get(col)) for col in TRANSFORM_CSV_COLUMNS])
    return out.getvalue() if stream is None else ""


def _parse(col: str, text: str):
    if text == "":
        return None
    if col in ("n", "m"):
        return int(text)
    if col == "coefficient":
        return int(text) if text.lstrip("-").isdigit() else float(text)
    if col in ("omega", "tightness", "lhs_max", "bound_final"):
        return float(text)
    if col == "loewner_holds":
        if text not in ("true", "false"):
            raise ValueError(f"bad boolean {text!r}")
        return text == "true"
    return text


def read_transform_csv(text: str) -> list[dict]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    if tuple(header) != TRANSFORM_CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {header}")
    return [{col: _parse(col, cell) for col, cell in zip(header, line)} for line in reader]
