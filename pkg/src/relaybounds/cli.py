"""Command-line front end.

Exit codes: 0 success / PASS, 1 FAIL, 2 usage error, 3 domain error,
4 inconclusive Monte Carlo verdict.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from importlib import metadata as _metadata
from typing import Any

import numpy as np

from . import bounds, concentration, gap as gapmod, mi_verify
from .bounds import ChannelParams
from .numerics import DEFAULT_QUAD, DEFAULT_SOLVER, DomainError, ExtReal

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN, EXIT_INCONCLUSIVE = 0, 1, 2, 3, 4

SWEEP_HEADER = ["snr1", "snr2", "r0", "cutset", "theorem1", "prop5", "gap"]


def _version() -> str:
    try:
        return _metadata.version("artifact")
    except _metadata.PackageNotFoundError:  # pragma: no cover
        return "0+unknown"


def fmt(x: Any) -> str:
    """12 significant digits; inf as 'inf'; None as empty."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.12g}"
    return str(x)


def _jsonable(x: Any) -> Any:
    if isinstance(x, float) and not math.isfinite(x):
        return "inf" if x > 0 else ("-inf" if x < 0 else "nan")
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, float):
        return float(x)
    return x


def _unjson(x: Any) -> Any:
    if x in ("inf", "-inf", "nan"):
        return float(x)
    if isinstance(x, list):
        return [_unjson(v) for v in x]
    if isinstance(x, dict):
        return {k: _unjson(v) for k, v in x.items()}
    return x


@dataclass
class OutputRecord:
    command: str
    inputs: dict[str, Any]
    outputs: dict[str, Any]
    metadata: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return _jsonable(asdict(self))

    @classmethod
    def from_dict(cls, d: dict) -> "OutputRecord":
        d = _unjson(d)
        return cls(d["command"], d["inputs"], d["outputs"], d.get("metadata", {}))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "OutputRecord":
        return cls.from_dict(json.loads(text))

    def render(self) -> str:
        lines = [f"command: {self.command}"]
        for section, prefix in (("inputs", "input"), ("outputs", "output"), ("metadata", "meta")):
            for k, v in getattr(self, section).items():
                if isinstance(v, list) and v and isinstance(v[0], dict):
                    for i, cell in enumerate(v):
                        body = " ".join(f"{ck}={fmt(cv)}" for ck, cv in cell.items())
                        lines.append(f"{prefix}.{k}[{i}]: {body}")
                elif isinstance(v, (list, tuple)):
                    lines.append(f"{prefix}.{k}: " + ",".join(fmt(x) for x in v))
                elif isinstance(v, dict):
                    body = " ".join(f"{ck}={fmt(cv)}" for ck, cv in v.items())
                    lines.append(f"{prefix}.{k}: {body}")
                else:
                    lines.append(f"{prefix}.{k}: {fmt(v)}")
        return "\n".join(lines)


def _meta(**extra) -> dict:
    meta = {
        "version": _version(),
        "solver_abs_tolerance": DEFAULT_SOLVER.abs_tolerance,
        "solver_max_iterations": DEFAULT_SOLVER.max_iterations,
        "quad_abs_tolerance": DEFAULT_QUAD.abs_tolerance,
    }
    meta.update(extra)
    return meta


# -- argument types ------------------------------------------------------------


def ext_real(text: str) -> ExtReal:
    try:
        return ExtReal(text)
    except (ValueError, DomainError) as exc:
        raise argparse.ArgumentTypeError(f"expected a number >= 0 or 'inf', got {text!r}") from exc


def nonneg_float(text: str) -> float:
    try:
        x = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from exc
    if not (x >= 0 and math.isfinite(x)):
        raise argparse.ArgumentTypeError(f"expected a finite number >= 0, got {text!r}")
    return x


def float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _add_channel(p: argparse.ArgumentParser, r0_required: bool = True) -> None:
    p.add_argument("--snr1", type=ext_real, required=True, help="P/N1 (relay), number or 'inf'")
    p.add_argument("--snr2", type=ext_real, required=True, help="P/N2 (destination), number or 'inf'")
    p.add_argument("--r0", type=nonneg_float, required=r0_required, help="relay link rate, bits/use")
    p.add_argument("--rho", type=float, default=None,
                   help="snr2/snr1 ratio, used only when both SNRs are inf")


def _add_format(p, choices=("table", "json")):
    p.add_argument("--format", choices=choices, default=choices[0])


# -- commands -------------------------------------------------------------------


def _channel_inputs(params: ChannelParams, rho) -> dict:
    d = {"snr1": float(params.snr1), "snr2": float(params.snr2), "r0": params.r0}
    if rho is not None:
        d["rho"] = rho
    return d


def cmd_bound(args) -> tuple[OutputRecord, int]:
    params = ChannelParams(args.snr1, args.snr2, args.r0)
    if args.variant == "cutset":
        res = bounds.cutset_bound(params)
    elif args.variant == "theorem1":
        res = bounds.theorem1_bound(params, rho=args.rho)
    else:
        res = bounds.prop5_bound(params, rho=args.rho)
    rec = OutputRecord(
        "bound",
        {**_channel_inputs(params, args.rho), "variant": args.variant},
        {"value": res.value, "active_constraint": res.active_constraint.value, "a_star": res.a_star},
        _meta(),
    )
    return rec, EXIT_OK


def cmd_gap(args) -> tuple[OutputRecord, int]:
    params = ChannelParams(args.snr1, args.snr2, args.r0)
    rep = gapmod.gap(params, args.variant, rho=args.rho)
    rec = OutputRecord(
        "gap",
        {**_channel_inputs(params, args.rho), "variant": args.variant},
        {"gap": rep.gap, "cutset": rep.cutset, "improved": rep.improved},
        _meta(),
    )
    return rec, EXIT_OK


def cmd_max_gap(args) -> tuple[OutputRecord, int]:
    grid = gapmod.GapGrid(
        snr_min=args.snr_min,
        snr_max=args.snr_max,
        snr_points=args.snr_points,
        r0_max=args.r0_max,
    )
    sup = gapmod.max_gap_search(args.variant, grid)
    s1, s2, r0 = sup.argmax
    rec = OutputRecord(
        "max-gap",
        {"variant": args.variant},
        {
            "value": sup.value,
            "argmax_snr1": float(s1),
            "argmax_snr2": float(s2),
            "argmax_r0": r0,
            "argmax_rho": sup.argmax_rho,
            "max_finite": sup.max_finite,
            "diagonal_monotone": sup.diagonal_monotone,
            "activity_verified": sup.activity_verified,
            "points": sup.points,
        },
        _meta(grid={k: v for k, v in asdict(grid).items()}),
    )
    return rec, EXIT_OK


def cmd_network_gap(args) -> tuple[OutputRecord, int]:
    value = gapmod.network_gap_lower_bound(args.nodes)
    return OutputRecord("network-gap", {"nodes": args.nodes}, {"value": value}, _meta()), EXIT_OK


def _sweep_rows(args) -> list[dict]:
    if args.steps < 1 or not args.to >= args.start:
        raise _UsageError("empty sweep range: need --steps >= 1 and --to >= --from")
    if args.log:
        if args.start <= 0:
            raise _UsageError("--log needs --from > 0")
        values = np.geomspace(args.start, args.to, args.steps)
    else:
        values = np.linspace(args.start, args.to, args.steps)
    rows = []
    for v in values:
        v = float(v)
        if args.param == "r0":
            if args.snr1 is None or args.snr2 is None:
                raise _UsageError("sweeping r0 needs --snr1 and --snr2")
            params = ChannelParams(args.snr1, args.snr2, v)
        else:
            if args.r0 is None:
                raise _UsageError("sweeping snr needs --r0")
            params = ChannelParams(v, v * args.ratio, args.r0)
        rows.append(sweep_row(params, args.rho))
    return rows


def sweep_row(params: ChannelParams, rho: float | None = None) -> dict:
    both_inf = params.snr1.is_inf and params.snr2.is_inf
    t1_rho = rho if both_inf else None
    row = {
        "snr1": float(params.snr1),
        "snr2": float(params.snr2),
        "r0": params.r0,
        "cutset": bounds.cutset_bound(params).value,
        "theorem1": bounds.theorem1_bound(params, rho=t1_rho).value,
        "prop5": None,
        "gap": gapmod.gap(params, "theorem1", rho=t1_rho).gap,
    }
    try:
        row["prop5"] = bounds.prop5_bound(params, rho=rho).value
    except DomainError:
        pass
    return row


def cmd_sweep(args) -> tuple[Any, int]:
    rows = _sweep_rows(args)
    if args.format == "json":
        inputs = ("snr1", "snr2", "r0")
        return [
            OutputRecord(
                "sweep",
                {k: r[k] for k in inputs},
                {k: r[k] for k in SWEEP_HEADER if k not in inputs},
                _meta(param=args.param),
            )
            for r in rows
        ], EXIT_OK
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for r in rows:
        w.writerow([fmt(r[k]) for k in SWEEP_HEADER])
    return buf.getvalue(), EXIT_OK


def cmd_concentration(args) -> tuple[OutputRecord, int]:
    params = concentration.ConcentrationParams(args.n, args.noise_var, args.a, args.r)
    if args.set == "halfspace":
        s = concentration.extremal_halfspace(params)
    else:
        s = concentration.ball_with_probability(params)
    if args.samples is None:
        chk = concentration.exact_check(params, s)
    else:
        chk = concentration.monte_carlo_check(params, s, args.samples, args.seed)
    outputs = {
        "base_prob": chk.base_prob,
        "blowup_prob": chk.blowup_prob,
        "stderr": chk.stderr,
        "floor": chk.floor,
        "radius": params.radius,
        "holds": chk.holds,
        "method": chk.method.value,
        "verdict": chk.verdict.value,
    }
    inputs = {"n": args.n, "noise_var": args.noise_var, "a": args.a, "r": args.r, "set": args.set}
    meta = _meta()
    if args.samples is not None:
        inputs["samples"] = args.samples
        meta["seed"] = args.seed
    code = {
        concentration.Verdict.PASS: EXIT_OK,
        concentration.Verdict.FAIL: EXIT_FAIL,
        concentration.Verdict.INCONCLUSIVE: EXIT_INCONCLUSIVE,
    }[chk.verdict]
    return OutputRecord("concentration", inputs, outputs, meta), code


def cmd_verify_mi(args) -> tuple[OutputRecord, int]:
    reports = mi_verify.sweep_lemma2(args.snr_grid, args.thresholds, noise_var=args.noise_var)
    cells = [
        {
            "snr": r.relay.snr,
            "threshold": r.relay.threshold,
            "a": r.a,
            "i_xi": r.i_xi,
            "i_yi": r.i_yi,
            "lhs": r.lhs,
            "rhs": r.rhs,
            "slack": r.slack,
            "holds": r.holds,
        }
        for r in reports
    ]
    ok = all(r.holds for r in reports)
    outputs: dict[str, Any] = {"verdict": "PASS" if ok else "FAIL", "cells": cells}
    if len(cells) == 1:
        outputs.update(cells[0])
    rec = OutputRecord(
        "verify-mi",
        {"snr_grid": list(args.snr_grid), "thresholds": list(args.thresholds),
         "noise_var": args.noise_var},
        outputs,
        _meta(),
    )
    return rec, EXIT_OK if ok else EXIT_FAIL


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relaybounds",
        description="Capacity upper bounds for the Gaussian primitive relay channel.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="evaluate one bound")
    _add_channel(p)
    p.add_argument("--variant", choices=["cutset", "theorem1", "prop5"], default="theorem1")
    _add_format(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("gap", help="cut-set bound minus a tightened bound")
    _add_channel(p)
    p.add_argument("--variant", choices=["theorem1", "prop5"], default="theorem1")
    _add_format(p)
    p.set_defaults(func=cmd_gap)

    p = sub.add_parser("max-gap", help="largest gap over a grid plus the infinite-SNR point")
    p.add_argument("--variant", choices=["theorem1", "prop5"], default="theorem1")
    g = gapmod.DEFAULT_GRID
    p.add_argument("--snr-min", type=float, default=g.snr_min)
    p.add_argument("--snr-max", type=float, default=g.snr_max)
    p.add_argument("--snr-points", type=int, default=g.snr_points)
    p.add_argument("--r0-max", type=nonneg_float, default=g.r0_max)
    _add_format(p)
    p.set_defaults(func=cmd_max_gap)

    p = sub.add_parser("network-gap", help="gap floor for an N-node Gaussian relay network")
    p.add_argument("--nodes", type=int, required=True)
    _add_format(p)
    p.set_defaults(func=cmd_network_gap)

    p = sub.add_parser("sweep", help="emit bounds over a 1-D grid as CSV or JSON")
    p.add_argument("--param", choices=["snr", "r0"], required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--log", action="store_true", help="log-spaced grid")
    p.add_argument("--snr1", type=ext_real)
    p.add_argument("--snr2", type=ext_real)
    p.add_argument("--r0", type=nonneg_float)
    p.add_argument("--ratio", type=nonneg_float, default=1.0,
                   help="snr2/snr1 when sweeping snr (default 1)")
    p.add_argument("--rho", type=float, default=None)
    _add_format(p, ("csv", "json"))
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("concentration", help="check Gaussian blow-up of a half-space or ball")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--noise-var", type=float, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--set", choices=["halfspace", "ball"], default="halfspace")
    p.add_argument("--samples", type=int, default=None, help="Monte Carlo samples (exact if omitted)")
    p.add_argument("--seed", type=int, default=0)
    _add_format(p)
    p.set_defaults(func=cmd_concentration)

    p = sub.add_parser("verify-mi", help="single-letter quantizer-relay check")
    p.add_argument("--snr-grid", type=float_list, default=list(mi_verify.DEFAULT_SNRS))
    p.add_argument("--thresholds", type=float_list, default=list(mi_verify.DEFAULT_THRESHOLDS),
                   help="quantizer cut points in units of sqrt(P)")
    p.add_argument("--noise-var", type=float, default=1.0)
    _add_format(p)
    p.set_defaults(func=cmd_verify_mi)
    return parser


def _emit(result, fmt_name: str, out) -> None:
    if isinstance(result, str):
        out.write(result)
        return
    if isinstance(result, list):
        out.write(json.dumps([r.to_dict() for r in result], indent=2) + "\n")
        return
    if fmt_name == "json":
        out.write(json.dumps(result.to_dict(), indent=2) + "\n")
        return
    out.write(result.render() + "\n")
    verdict = result.outputs.get("verdict")
    if verdict is not None:
        out.write(f"{verdict}\n")


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result, code = args.func(args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ArithmeticError) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except mi_verify.SweepError as exc:
        if isinstance(exc.cause, DomainError):
            print(f"domain error: {exc}", file=sys.stderr)
            return EXIT_DOMAIN
        raise
    _emit(result, getattr(args, "format", "table"), out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
