"""Command-line driver: verification suites, norms, sweeps and propagators.

    hermlab verify <suite> [--config F] [--out DIR] [--seed S]
    hermlab norm --p P --q Q --input F [--output F]
    hermlab sweep --family oscillatory --beta B1,B2 --gamma G1,G2 --p P1,P2 [--seed S]
    hermlab propagate --kind schrodinger --t T --input F [--output F]

Reports are CSV files whose header lines start with '#' and record the full
configuration and seed; there are no timestamps, so a fixed config and seed
give byte-identical files.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .hermite_basis import HermiteCoeffs
from .io import coeffs_to_json, dump, dumps, exponent_to_json, load, norm_record
from .spectral_ops import (
    estimate_operator_norm,
    riesz_transform,
    schrodinger_propagate,
    wave_propagate,
    worker_count,
)
from .symbols import SpectralSymbol
from .timefreq import modulation_norm
from .verify import SUITES, ExperimentConfig, ReportRow, run_suite

GENERATOR = "numpy PCG64, default_rng([seed, stream])"
LABEL = "empirical lower bound"
CSV_COLUMNS = ["experiment", "params", "measured", "reference", "tolerance", "pass"]


class CLIError(Exception):
    """Bad arguments; reported on stderr with exit status 2."""


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------


def fmt(v) -> str:
    """Numbers in 17-significant-digit form; None as an empty field."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    if isinstance(v, (list, tuple)):
        return "[" + " ".join(fmt(x) for x in v) + "]"
    return str(v)


def fmt_params(params: dict) -> str:
    return ";".join(f"{k}={fmt(v)}" for k, v in params.items())


def _header(command: str, cfg: dict, seed) -> list:
    return [
        f"# hermlab {__version__} {command}",
        f"# config: {json.dumps(cfg, sort_keys=True)}",
        f"# seed: {seed}",
        f"# generator: {GENERATOR}",
    ]


def _provenance(cfg: ExperimentConfig) -> dict:
    """Config as recorded in reports; the output directory is left out."""
    conf = cfg.to_dict()
    conf.pop("out")
    return conf


def _csv_text(header: list, columns: list, rows: list) -> str:
    buf = io.StringIO()
    for line in header:
        buf.write(line + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow(r)
    return buf.getvalue()


def _json_safe(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None if math.isnan(v) else exponent_to_json(v)
    if isinstance(v, dict):
        return {k: _json_safe(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_json_safe(x) for x in v]
    return v


def _row_json(r: ReportRow) -> dict:
    return _json_safe({
        "experiment": r.experiment,
        "params": r.params,
        "measured": r.measured,
        "reference": r.reference,
        "tolerance": r.tolerance,
        "pass": r.passed,
    })


def _floats(text: str, name: str) -> list:
    try:
        vals = [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise CLIError(f"--{name}: expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise CLIError(f"--{name}: empty list")
    return vals


def _load_config(path, overrides: dict) -> ExperimentConfig:
    data = {}
    if path:
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CLIError(f"cannot read config {path}: {exc}") from None
        if not isinstance(data, dict):
            raise CLIError("config must be one flat JSON object")
    data.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return ExperimentConfig.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise CLIError(str(exc)) from None


def _load_input(path):
    try:
        return load(path)
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        raise CLIError(f"cannot read input {path}: {exc}") from None


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    if args.suite not in list(SUITES) + ["all"]:
        raise CLIError(f"unknown suite {args.suite!r}; choose from {sorted(SUITES) + ['all']}")
    cfg = _load_config(args.config, {"seed": args.seed, "out": args.out})
    rows = run_suite(args.suite, cfg)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    table = [
        [r.experiment, fmt_params(r.params), fmt(r.measured), fmt(r.reference),
         fmt(r.tolerance), fmt(r.passed)]
        for r in rows
    ]
    conf = _provenance(cfg)
    text = _csv_text(_header(f"verify {args.suite}", conf, cfg.seed), CSV_COLUMNS, table)
    (out / f"verify_{args.suite}.csv").write_text(text)
    failed = [r for r in rows if r.passed is False]
    verdict = {
        "suite": args.suite,
        "seed": cfg.seed,
        "config": _json_safe(conf),
        "rows": [_row_json(r) for r in rows],
        "failed": len(failed),
        "pass": not failed,
    }
    (out / f"verify_{args.suite}.json").write_text(dumps(verdict) + "\n")
    for r in failed:
        print(f"FAIL {r.experiment} {fmt_params(r.params)} measured={fmt(r.measured)}",
              file=sys.stderr)
    print(f"{args.suite}: {len(rows) - len(failed)}/{len(rows)} checks passed")
    return 0 if not failed else 1


def cmd_norm(args) -> int:
    p, q = float(args.p), float(args.q)
    for name, v in (("p", p), ("q", q)):
        if math.isnan(v) or v < 1:
            raise CLIError(f"--{name} = {v:g} is outside [1, inf]; modulation norms need p, q >= 1")
    f = _load_input(args.input)
    if isinstance(f, SpectralSymbol):
        raise CLIError("--input must hold coefficients or a sampled field, not a symbol")
    value = modulation_norm(f, p, q)
    rec = norm_record(p, q, value, input=str(args.input))
    print(fmt(value))
    print(dumps(rec))
    if args.output:
        dump(rec, args.output)
    return 0


def _sweep_symbol(family: str, beta: float, gamma: float) -> SpectralSymbol:
    if family == "oscillatory":
        return SpectralSymbol.oscillatory(beta, gamma)
    return SpectralSymbol.constant(1.0)


def sweep_rows(cfg: ExperimentConfig, family: str, N: int) -> list:
    """One row per (beta, gamma, p), in parameter order."""
    points = [(b, g, p) for b in cfg.beta for g in cfg.gamma for p in cfg.p]

    def run(point):
        b, g, p = point
        m = _sweep_symbol(family, b, g)
        lo = estimate_operator_norm(m, p, p, d=cfg.d, N=N, seed=cfg.seed)
        hi = estimate_operator_norm(m, p, p, d=cfg.d, N=2 * N, seed=cfg.seed)
        threshold = b / (cfg.d * g)
        inside = abs(1.0 / p - 0.5) < threshold
        change = abs(hi.value - lo.value) / lo.value
        return {
            "family": family, "beta": b, "gamma": g, "d": cfg.d, "p": p, "N": N,
            "seed": cfg.seed, "ratio_N": lo.value, "ratio_2N": hi.value,
            "argmax_N": lo.argmax, "threshold": threshold,
            "region": "inside" if inside else "outside", "rel_change": change,
            "pass": (change < 0.1) if inside else None, "label": LABEL,
        }

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        return list(pool.map(run, points))


SWEEP_COLUMNS = ["family", "beta", "gamma", "d", "p", "N", "seed", "ratio_N", "ratio_2N",
                 "argmax_N", "threshold", "region", "rel_change", "pass", "label"]


def cmd_sweep(args) -> int:
    overrides = {"seed": args.seed, "d": args.d, "N": args.N}
    for name in ("beta", "gamma", "p"):
        val = getattr(args, name)
        overrides[name] = _floats(val, name) if val is not None else None
    cfg = _load_config(args.config, overrides)
    for p in cfg.p:
        if p < 1:
            raise CLIError(f"--p = {p:g} is outside [1, inf]; modulation norms need p >= 1")
    rows = sweep_rows(cfg, args.family, cfg.N)
    conf = dict(_provenance(cfg), family=args.family)
    table = [[fmt(r[c]) if c != "pass" or r[c] is not None else "n/a" for c in SWEEP_COLUMNS]
             for r in rows]
    text = _csv_text(_header("sweep", conf, cfg.seed), SWEEP_COLUMNS, table)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "sweep.csv").write_text(text)
    else:
        sys.stdout.write(text)
    failed = [r for r in rows if r["pass"] is False]
    return 0 if not failed else 1


def cmd_propagate(args) -> int:
    c = _load_input(args.input)
    if not isinstance(c, HermiteCoeffs):
        raise CLIError("--input must hold Hermite coefficients")
    if args.kind == "riesz":
        if args.j is None:
            raise CLIError("--kind riesz needs --j")
        out = riesz_transform(c, args.j)
        params = {"j": args.j}
    else:
        if args.t is None:
            raise CLIError(f"--kind {args.kind} needs --t")
        step = schrodinger_propagate if args.kind == "schrodinger" else wave_propagate
        out = step(c, args.t)
        params = {"t": args.t}
    report = {
        "kind": args.kind,
        **params,
        "input_l2": c.norm(),
        "output_l2": out.norm(),
        "output": coeffs_to_json(out),
    }
    if args.output:
        dump(out, args.output)
    print(dumps(report))
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _exponent(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hermlab", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"hermlab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", help="basis, special, timefreq, torus, propagators or all")
    v.add_argument("--config")
    v.add_argument("--out")
    v.add_argument("--seed", type=int)
    v.set_defaults(func=cmd_verify)

    n = sub.add_parser("norm", help="modulation-space norm of a stored input")
    n.add_argument("--p", type=_exponent, required=True, help="inner exponent, 'inf' allowed")
    n.add_argument("--q", type=_exponent, required=True, help="outer exponent, 'inf' allowed")
    n.add_argument("--input", required=True)
    n.add_argument("--output")
    n.set_defaults(func=cmd_norm)

    s = sub.add_parser("sweep", help="operator-norm lower bounds over (beta, gamma, p)")
    s.add_argument("--family", choices=["oscillatory", "constant"], default="oscillatory")
    s.add_argument("--beta")
    s.add_argument("--gamma")
    s.add_argument("--p")
    s.add_argument("--seed", type=int)
    s.add_argument("--N", type=int)
    s.add_argument("--d", type=int)
    s.add_argument("--config")
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)

    p = sub.add_parser("propagate", help="apply e^{itH}, sin(t sqrt H)/sqrt H or R_j")
    p.add_argument("--kind", choices=["schrodinger", "wave", "riesz"], required=True)
    p.add_argument("--t", type=float)
    p.add_argument("--j", type=int)
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_propagate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CLIError, ValueError) as exc:
        print(f"hermlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
