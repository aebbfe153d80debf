"""Command-line entry point: ``gruss verify | fuzz | transforms | sharpness``.

Every command is a pure function of a JSON-able parameter dict, which is
echoed into the report manifest.  ``verify --replay`` re-runs that dict and
compares summaries, and re-evaluates every stored worst case.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .campaign import CAMPAIGNS, SUITES, FuzzReport, fuzz_campaign, replay, resolve_id
from .errors import GenerationError, GrussError, UsageError
from .generate import RNG_NAME, Dims
from .linalg import Tolerance
from .reports import (
    SHARPNESS_RADII,
    Manifest,
    envelope,
    kernel_grid_rows,
    mellin_closed_form_rows,
    mellin_nonnegative_rows,
    scalar_extremal_rows,
    sharpness_rows,
    transform_rows,
    write_transform_csv,
)
from .serialize import dumps, loads

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
REPLAY_ATOL = 1e-12


# ----------------------------------------------------------------- parsing


def _int_range(text: str) -> tuple[int, int]:
    """``"3"`` or ``"1:4"`` (inclusive)."""
    try:
        lo, _, hi = text.partition(":")
        lo_i = int(lo)
        hi_i = int(hi) if hi else lo_i
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO:HI, got {text!r}") from None
    if not 1 <= lo_i <= hi_i:
        raise argparse.ArgumentTypeError(f"need 1 <= LO <= HI, got {text!r}")
    return lo_i, hi_i


def _int_list(text: str) -> list[int]:
    """Comma-separated integers or inclusive ``LO:HI`` ranges."""
    out: list[int] = []
    for part in text.split(","):
        lo, hi = _int_range(part.strip())
        out.extend(range(lo, hi + 1))
    return sorted(set(out))


def _float_list(text: str) -> list[float]:
    try:
        vals = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not all(v == v and abs(v) != float("inf") for v in vals):
        raise argparse.ArgumentTypeError("values must be finite")
    return vals


def _nonneg(text: str) -> float:
    v = float(text)
    if not v >= 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative number, got {text!r}")
    return v


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="master seed (fallback: $GRUSS_SEED, then 0)")
    common.add_argument("--rtol", type=_nonneg, default=1e-9)
    common.add_argument("--atol", type=_nonneg, default=1e-12)
    common.add_argument("--output", type=Path, default=None, help="report path")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--quiet", action="store_true", help="no summary on stdout")

    dims = argparse.ArgumentParser(add_help=False)
    dims.add_argument("--k", type=_int_range, default=None, help="algebra size k, N or LO:HI")
    dims.add_argument("--m-dim", type=_int_range, default=None, help="module rows, N or LO:HI")

    parser = argparse.ArgumentParser(prog="gruss", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common, dims], help="run verification suites or replay a report")
    v.add_argument("--suite", choices=tuple(SUITES), default="all")
    v.add_argument("--trials", type=int, default=200)
    v.add_argument("--n", type=_int_range, default=None, help="tuple length, N or LO:HI")
    v.add_argument("--replay", type=Path, default=None, metavar="FILE")

    f = sub.add_parser("fuzz", parents=[common, dims], help="fuzz one inequality")
    f.add_argument("inequality_id")
    f.add_argument("--trials", type=int, default=1000)
    f.add_argument("--n", type=_int_range, default=None, help="tuple length, N or LO:HI")

    t = sub.add_parser("transforms", parents=[common], help="Fourier/Mellin bound tightness table")
    t.add_argument("kind", choices=("fourier", "mellin"))
    t.add_argument("--n", type=_int_list, default=[8], help="tuple lengths, e.g. 4,8 or 2:16")
    t.add_argument("--m", type=_int_list, default=None, help="frequency/moment indices (default 1..n)")
    t.add_argument("--omega", type=_float_list, default=None, help="angular frequencies (fourier only)")
    t.add_argument("--k", type=int, default=2, help="algebra size k")
    t.add_argument("--m-dim", type=int, default=2, help="module rows")

    s = sub.add_parser("sharpness", parents=[common], help="attain the radius bound with equality")
    s.add_argument("--r", type=_float_list, default=None)
    s.add_argument("--s", type=_float_list, default=None)
    s.add_argument("--k", type=_int_list, default=[1, 2, 4], help="sizes used for both k and m")
    return parser


def _resolve_seed(seed) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("GRUSS_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"GRUSS_SEED must be an integer, got {env!r}") from None


def _dims_dict(args) -> dict:
    base = Dims()
    return Dims(k=args.k or base.k, m=args.m_dim or base.m, n=args.n or base.n).to_dict()


def _params(args, parser) -> dict:
    """Validate flags and return the JSON-able parameter dict for the command."""
    if args.command != "transforms" and args.format != "json":
        parser.error(f"--format csv is only supported by the transforms command")
    tol = {"rtol": args.rtol, "atol": args.atol}
    if args.command == "verify":
        if args.trials < 1:
            parser.error("--trials must be at least 1")
        return {"suite": args.suite, "trials": args.trials, "dims": _dims_dict(args), "tol": tol}
    if args.command == "fuzz":
        if args.trials < 1:
            parser.error("--trials must be at least 1")
        try:
            cid = resolve_id(args.inequality_id)
        except UsageError as exc:
            parser.error(str(exc))
        return {"inequality_id": cid, "trials": args.trials, "dims": _dims_dict(args), "tol": tol}
    if args.command == "transforms":
        if args.kind == "fourier" and args.omega is None:
            parser.error("transforms fourier requires --omega")
        if args.kind == "mellin" and args.omega is not None:
            parser.error("--omega applies to fourier only")
        if args.k < 1 or args.m_dim < 1:
            parser.error("--k and --m-dim must be positive")
        return {"kind": args.kind, "n": args.n, "m": args.m, "omega": args.omega,
                "k": args.k, "m_dim": args.m_dim, "format": args.format, "tol": tol}
    radii = SHARPNESS_RADII
    if args.r is not None or args.s is not None:
        if args.r is None or args.s is None or len(args.r) != len(args.s):
            parser.error("--r and --s must be given together with equal lengths")
        if not all(x > 0 for x in args.r + args.s):
            parser.error("radii must be positive")
        radii = tuple(zip(args.r, args.s))
    return {"radii": [list(p) for p in radii], "sizes": args.k, "tol": tol}


# ---------------------------------------------------------------- commands


def _fuzz_row(rep: FuzzReport) -> dict:
    return {"inequality_id": rep.inequality_id, "trials": rep.trials, "failures": rep.failures,
            "min_slack": rep.min_slack, "worst_index": rep.worst_index, "holds": rep.failures == 0}


def _table_row(name: str, rows: list[dict], **extra) -> dict:
    checked = [r for r in rows if r["ok"] is not None]
    failures = sum(not r["ok"] for r in checked)
    return {"inequality_id": name, "trials": len(checked), "failures": failures,
            "skipped": len(rows) - len(checked), "holds": failures == 0, **extra}


def _summarize(verdicts: list[dict]) -> dict:
    failures = sum(v["failures"] for v in verdicts)
    return {
        "checks": sum(v["trials"] for v in verdicts),
        "failures": failures,
        "skipped": sum(v.get("skipped", 0) for v in verdicts),
        "min_slack": {v["inequality_id"]: v["min_slack"] for v in verdicts if v.get("min_slack") is not None},
        "exit_code": EXIT_OK if failures == 0 else EXIT_FAIL,
    }


def run_verify(params: dict, seed: int) -> dict:
    tol = Tolerance(**params["tol"])
    dims = Dims.from_dict(params["dims"])
    fuzz = [fuzz_campaign(cid, params["trials"], seed, dims, tol) for cid in SUITES[params["suite"]]]
    verdicts = [_fuzz_row(r) for r in fuzz]
    suite = params["suite"]
    if suite in ("gruss", "all"):
        sharp = sharpness_rows(seed=seed)
        verdicts.append(_table_row("gruss.sharpness", sharp,
                                   max_ratio_error=max(abs(r["ratio"] - 1.0) for r in sharp)))
        ext = scalar_extremal_rows(seed=seed)
        verdicts.append(_table_row("gruss.scalar_extremal", ext, max_gap=max(abs(r["gap"]) for r in ext)))
    if suite in ("transforms", "all"):
        grid = kernel_grid_rows()
        verdicts.append(_table_row("transforms.kernel_closed_form", grid,
                                   max_error=max(r["error"] for r in grid if r["ok"] is not None)))
        verdicts.append(_table_row("transforms.mellin_closed_form", mellin_closed_form_rows()))
        verdicts.append(_table_row("transforms.mellin_nonnegative", mellin_nonnegative_rows()))
    return {"summary": _summarize(verdicts), "verdicts": verdicts,
            "fuzz_reports": [r.to_dict() for r in fuzz]}


def run_fuzz(params: dict, seed: int) -> dict:
    rep = fuzz_campaign(params["inequality_id"], params["trials"], seed,
                        Dims.from_dict(params["dims"]), Tolerance(**params["tol"]))
    verdicts = [_fuzz_row(rep)]
    return {"summary": _summarize(verdicts), "verdicts": verdicts, "fuzz_reports": [rep.to_dict()]}


def run_transforms(params: dict, seed: int) -> dict:
    rows, reports = transform_rows(params["kind"], params["n"], params["m"], params["omega"],
                                   k=params["k"], rows_dim=params["m_dim"], seed=seed,
                                   tol=Tolerance(**params["tol"]))
    checked = [r for r in rows if r["status"] == "checked"]
    failures = sum(not r["loewner_holds"] for r in checked)
    summary = {
        "checks": len(checked),
        "failures": failures,
        "skipped": len(rows) - len(checked),
        "max_tightness": max((r["tightness"] for r in checked), default=None),
        "exit_code": EXIT_OK if failures == 0 else EXIT_FAIL,
    }
    return {"summary": summary, "verdicts": rows, "reports": [r.to_dict() for r in reports]}


def run_sharpness(params: dict, seed: int) -> dict:
    rows = sharpness_rows([tuple(p) for p in params["radii"]], tuple(params["sizes"]), seed)
    failures = sum(not r["ok"] for r in rows)
    summary = {"checks": len(rows), "failures": failures,
               "max_ratio_error": max(abs(r["ratio"] - 1.0) for r in rows),
               "exit_code": EXIT_OK if failures == 0 else EXIT_FAIL}
    return {"summary": summary, "verdicts": rows}


COMMANDS = {"verify": run_verify, "fuzz": run_fuzz, "transforms": run_transforms, "sharpness": run_sharpness}


# ------------------------------------------------------------------ replay


def run_replay(report: dict) -> tuple[int, list[str]]:
    """Re-evaluate stored worst cases and re-run the manifest; return exit code and log lines."""
    if not isinstance(report, dict) or "manifest" not in report:
        raise UsageError("not a gruss report: missing manifest")
    lines, ok = [], True
    for d in report.get("fuzz_reports", []):
        rep = FuzzReport.from_dict(d)
        verdict = replay(rep)
        same = abs(verdict.slack - rep.min_slack) <= REPLAY_ATOL
        ok &= same and verdict.holds == bool(rep.worst_verdict["holds"])
        lines.append(f"replay {rep.inequality_id:<28} recorded {rep.min_slack:+.3e} "
                     f"replayed {verdict.slack:+.3e} {'ok' if same else 'MISMATCH'}")
    manifest = report["manifest"]
    command = manifest.get("command")
    if command not in COMMANDS:
        raise UsageError(f"unknown command in manifest: {command!r}")
    rerun = COMMANDS[command](manifest["parameters"], int(manifest["seed"]))
    same = loads(dumps(rerun["summary"])) == manifest["summary"]
    ok &= same
    lines.append(f"manifest summary {'reproduced' if same else 'DIFFERS'}")
    failed = manifest["summary"].get("failures", 0) > 0
    return (EXIT_OK if ok and not failed else EXIT_FAIL), lines


# -------------------------------------------------------------------- main


def _default_output(params: dict, command: str) -> Path:
    if command == "fuzz":
        return Path(f"gruss-fuzz-{params['inequality_id']}.json")
    if command == "transforms":
        return Path(f"gruss-transforms-{params['kind']}.{params['format']}")
    return Path(f"gruss-{command}.json")


def _print_summary(command: str, result: dict) -> None:
    summary = result["summary"]
    if command in ("verify", "fuzz"):
        for v in result["verdicts"]:
            slack = v.get("min_slack")
            extra = f"min slack {slack:+.3e}" if slack is not None else f"skipped {v.get('skipped', 0)}"
            print(f"{'PASS' if v['holds'] else 'FAIL'} {v['inequality_id']:<32} "
                  f"{v['trials']:>6} checks  {v['failures']} failures  {extra}")
    print(f"{command}: {summary['checks']} checks, {summary['failures']} failures"
          + (f", {summary['skipped']} skipped" if "skipped" in summary else ""))


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE

    try:
        seed = _resolve_seed(args.seed)
    except UsageError as exc:
        print(f"gruss: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.command == "verify" and args.replay is not None:
        try:
            report = loads(args.replay.read_text())
            code, lines = run_replay(report)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            print(f"gruss: cannot replay {args.replay}: {exc}", file=sys.stderr)
            return EXIT_USAGE
        if not args.quiet:
            print("\n".join(lines))
        return code

    try:
        params = _params(args, parser)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE

    manifest = Manifest(command=args.command, parameters=params, seed=seed)
    try:
        result = COMMANDS[args.command](params, seed)
    except UsageError as exc:
        print(f"gruss: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GenerationError as exc:
        print(f"gruss: generation failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except GrussError as exc:
        print(f"gruss: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    # round-trip so the manifest summary matches what a replay will compare against
    summary = loads(dumps(result["summary"]))
    manifest.finish(summary)
    manifest.parameters = {**params, "rng": RNG_NAME}
    body = {k: v for k, v in result.items() if k != "summary"}

    out = args.output or _default_output(params, args.command)
    if args.command == "transforms" and params["format"] == "csv":
        text = write_transform_csv(result["verdicts"])
    else:
        text = dumps(envelope(manifest, **body), indent=1)
    out.write_text(text)

    if not args.quiet:
        _print_summary(args.command, result)
        print(f"report written to {out}")
    return summary["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
