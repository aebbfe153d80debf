"""Acceptance gate: one test (and one printed PASS/FAIL line) per criterion."""

import math
import subprocess
import sys
import time

import numpy as np

from conftest import ACCEPTANCE_LINES
from gruss.campaign import build_instance, fuzz_campaign
from gruss.generate import Dims, substream
from gruss.inequalities import check_identities
from gruss.linalg import DEFAULT_TOL, Tolerance
from gruss.reports import kernel_grid_rows, mellin_closed_form_rows, scalar_extremal_rows, sharpness_rows
from gruss.transforms import (
    TransformParams,
    fourier_bound_check,
    mellin_bound_check,
    mellin_coefficient,
)

SEED = 20240607


def record(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_schwarz():
    start = time.perf_counter()
    dims = Dims(k=(1, 4), m=(1, 4))
    reports = [fuzz_campaign(f"schwarz.{v}", 1000, SEED, dims, Tolerance(rtol=1e-9, atol=1e-12))
               for v in ("module", "abs", "functional", "radius", "seminorm")]
    elapsed = time.perf_counter() - start
    failures = sum(r.failures for r in reports)
    worst = min(r.min_slack for r in reports)
    record(1, failures == 0 and elapsed < 10.0,
           f"5 x 1000 Schwarz instances, {failures} failures, min slack {worst:.2e}, {elapsed:.2f} s")


def test_criterion_2_identities():
    failures, worst_ratio = 0, 0.0
    for which in ("idempotent", "weighted"):
        cid = f"identities.{which}"
        rep = fuzz_campaign(cid, 500, SEED)
        failures += rep.failures
        # independent scan of the residual-to-scale ratio for every identity
        for i in range(500):
            for v in check_identities(which, build_instance(cid, SEED, i)):
                if v.kind == "identity":
                    worst_ratio = max(worst_ratio, v.lhs / v.scale)
                    failures += v.lhs > 1e-10 * v.scale
    record(2, failures == 0, f"2 x 500 instances, {failures} failures, max residual/scale {worst_ratio:.2e}")


def test_criterion_3_gruss():
    ids = ("gruss.idempotent", "gruss.weighted", "gruss.radius", "gruss.alpha", "transforms.alpha")
    reports = [fuzz_campaign(cid, 1000, SEED) for cid in ids]
    failures = {r.inequality_id: r.failures for r in reports}
    record(3, sum(failures.values()) == 0, f"5 x 1000 instances, failures {failures}")


def test_criterion_4_sharpness():
    rows = sharpness_rows(sizes=(1, 2, 4), seed=SEED, ratio_tol=1e-9)
    err = max(abs(r["ratio"] - 1.0) for r in rows)
    record(4, len(rows) == 27 and all(r["ok"] for r in rows), f"27 shapes, max |ratio - 1| = {err:.2e}")


def test_criterion_5_scalar():
    rep = fuzz_campaign("gruss.scalar", 1000, SEED, tol=Tolerance(rtol=0.0, atol=1e-12))
    ext = scalar_extremal_rows(max_n=20, seed=SEED, atol=1e-12)
    gap = max(abs(r["gap"]) for r in ext)
    record(5, rep.failures == 0 and all(r["ok"] for r in ext),
           f"1000 random: {rep.failures} over bound; alternating n=2..20 max gap {gap:.1e}")


def test_criterion_6_kernel():
    rows = kernel_grid_rows(max_n=64)
    checked = [r for r in rows if r["ok"] is not None]
    worst = max(r["error"] / r["n"] for r in checked)
    # guard-band points must be skipped, never scored
    singular = kernel_grid_rows(omegas=[math.pi / 2, math.pi / 4], max_n=16)
    skipped = [r for r in singular if r["ok"] is None]
    skipped_ok = bool(skipped) and all(abs(math.sin(r["omega"] * r["m"])) <= 1e-8 for r in skipped)
    scored_ok = all(r["ok"] for r in singular if r["ok"] is not None)
    ok = all(r["ok"] for r in checked) and skipped_ok and scored_ok
    record(6, ok, f"{len(checked)} grid points, max error/n {worst:.1e}; {len(skipped)} guard-band points skipped")


def test_criterion_7_mellin():
    rows = mellin_closed_form_rows(max_n=1000)
    spot = (mellin_coefficient(2, 2), mellin_coefficient(3, 2))
    ok = all(r["ok"] for r in rows) and spot == (1, 9)
    record(7, ok, f"m=2,3 exact for n<=1000 ({len(rows)} values); n=2 gives {spot}")


def test_criterion_8_transform_reports():
    # tightness is exactly 1 at n = 2 (two-term Cauchy-Schwarz), so allow the report's rtol
    limit = 1.0 + DEFAULT_TOL.rtol
    worst_tight, failures, nonzero, tight = 0.0, 0, 0, 0
    for i in range(500):
        g = substream(SEED, "acceptance.transforms", i)
        n = int(g.integers(1, 16, endpoint=True))
        m = int(g.integers(1, n, endpoint=True))
        rows = int(g.integers(1, 4, endpoint=True))
        omega = float(g.uniform(0.0, math.pi))

        def draw(*shape):
            return g.uniform(-1, 1, shape) + 1j * g.uniform(-1, 1, shape)

        As, Bs, A, B = draw(n, rows, 2), draw(n, rows, 2), draw(rows, 2), draw(rows, 2)
        reports = fourier_bound_check(As, Bs, A, B, TransformParams(omega, m, n), DEFAULT_TOL)
        reports += mellin_bound_check(As, Bs, A, B, m, DEFAULT_TOL)
        for r in reports:
            if r.checked:
                failures += not (r.loewner_holds and r.tightness <= limit)
                tight += r.tightness > 1.0 - 1e-12
                worst_tight = max(worst_tight, r.tightness)
        const_A = np.broadcast_to(As[0], As.shape).copy()
        const_B = np.broadcast_to(Bs[0], Bs.shape).copy()
        reports = fourier_bound_check(const_A, const_B, A, B, TransformParams(omega, m, n), DEFAULT_TOL)
        reports += mellin_bound_check(const_A, const_B, A, B, m, DEFAULT_TOL)
        nonzero += sum(r.true_error_sq.any() for r in reports if r.checked)
    record(8, failures == 0 and nonzero == 0,
           f"500 tuples (k=2, n<=16): {failures} failures, max tightness 1{worst_tight - 1:+.1e} "
           f"({tight} at equality); "
           f"{nonzero} nonzero constant-tuple LHS")


def test_criterion_9_verify_all(tmp_path):
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "gruss.cli", "verify", "--suite", "all", "--quiet",
                           "--output", str(tmp_path / "verify.json")], capture_output=True, text=True)
    elapsed = time.perf_counter() - start
    record(9, proc.returncode == 0 and elapsed < 60.0, f"exit {proc.returncode} in {elapsed:.1f} s")
