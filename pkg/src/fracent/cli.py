"""Command-line entry point: ``fracent run | fit | validate``."""

import argparse
import csv
import json
import os
import sys
import tempfile
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from fracent import __version__
from fracent._kernels import BACKEND
from fracent.analysis import fit_decay
from fracent.errors import ConfigError, FracentError, NumericsUnhealthy
from fracent.scenarios import COLUMNS, SCENARIOS, load_config, run_scenario

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERICS = 0, 1, 2, 3

COLUMN_HELP = {
    "alpha": "fractional exponent",
    "n_d": "sites between blocks A and B",
    "ell": "block length (n_A = n_B = ell for negativity)",
    "t": "time after the quench",
    "E_LN": "logarithmic negativity (natural log)",
    "S": "entanglement entropy of the block 1..ell",
    "S_per_site": "S / ell",
    "S_predicted": "finite-size quasiparticle prediction",
    "S_finite": "finite-size quasiparticle prediction",
    "S_continuum": "quasiparticle prediction without wrap-around",
    "L": "number of sites",
    "t_revival": "L / (2 v_max)",
    "saturation": "GGE block entropy",
    "t_dip": "time of the exact entropy dip",
    "delta_S": "(saturation - S(t_dip)) / ell, exact",
    "t_dip_predicted": "dip time of the prediction",
    "delta_S_predicted": "dip depth of the prediction",
    "sep": "|i - j|",
    "c": "OTOC c = b^2",
    "b": "sqrt(c)",
    "residual": "worst max|Re| of the symplectic eigenvalues",
    "clamped": "eigenvalues clamped up to 1/2",
}


def _columns_epilog():
    lines = ["CSV columns per scenario:"]
    for name in SCENARIOS:
        lines.append(f"  {name}: {', '.join(COLUMNS[name])}")
    lines.append("")
    lines.append("Column meanings:")
    for col, text in COLUMN_HELP.items():
        lines.append(f"  {col:<18} {text}")
    lines.append("")
    lines.append("Lines starting with '#' are header: config echo, version, backend, timestamp.")
    lines.append("Exit codes: 0 ok, 2 config error, 3 numerics unhealthy (strict), 1 other.")
    return "\n".join(lines)


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def render_csv(result):
    cfg = result.config
    header = [
        f"# fracent {__version__}",
        f"# backend: {BACKEND}",
        f"# created: {datetime.now(timezone.utc).isoformat(timespec='seconds')}",
        f"# config: {json.dumps(cfg.resolved(), sort_keys=True)}",
    ]
    for key, value in result.extras.items():
        header.append(f"# {key}: {json.dumps(value, sort_keys=True, default=_json_default)}")
    body = [",".join(result.columns)]
    body.extend(",".join(_fmt(v) for v in row) for row in result.rows)
    return "\n".join(header + body) + "\n"


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, tuple):
        return list(o)
    raise TypeError(type(o).__name__)


def render_json(result):
    doc = {
        "version": __version__,
        "backend": BACKEND,
        "config": result.config.resolved(),
        "columns": result.columns,
        "rows": [[_json_safe(v) for v in row] for row in result.rows],
        **result.extras,
    }
    return json.dumps(doc, sort_keys=True, indent=1, default=_json_default) + "\n"


def _json_safe(v):
    v = v.item() if isinstance(v, np.generic) else v
    if isinstance(v, float) and not np.isfinite(v):
        return str(v)
    return v


def write_atomic(path, text):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def data_section(text):
    """Non-header lines of a CSV produced by ``run``."""
    return "".join(line for line in text.splitlines(keepends=True) if not line.startswith("#"))


def read_series(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(line for line in fh if not line.startswith("#")))
    if not rows:
        raise ConfigError(f"{path}: no column header")
    return rows[0], rows[1:]


def _error(exc, code):
    record = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    print(json.dumps(record), file=sys.stderr)
    return code


def cmd_run(args):
    cfg = load_config(args.config)
    out = args.out or cfg.output_path
    if out is None:
        out = str(Path(args.config).with_suffix(".csv").name)
    result = run_scenario(cfg, workers=args.workers, strict=args.strict)
    write_atomic(out, render_csv(result))
    if cfg.output_format == "csv+json":
        write_atomic(Path(out).with_suffix(".json"), render_json(result))
    print(json.dumps({"output": str(out), "rows": len(result.rows)}))
    return EXIT_OK


def cmd_validate(args):
    cfg = load_config(args.config)
    print(json.dumps({"valid": True, "scenario": cfg.scenario}))
    return EXIT_OK


def _parse_window(text):
    try:
        lo, hi = text.split(":")
        return (float(lo) if lo else -np.inf, float(hi) if hi else np.inf)
    except ValueError:
        raise argparse.ArgumentTypeError(f"window must be lo:hi, got {text!r}") from None


def cmd_fit(args):
    columns, rows = read_series(args.series)
    x_col = args.x or next((c for c in ("n_d", "ell", "t", "L") if c in columns), columns[0])
    y_col = args.y or next((c for c in ("E_LN", "S", "c", "delta_S") if c in columns), columns[1])
    for col in (x_col, y_col):
        if col not in columns:
            raise ConfigError(f"column {col!r} not in {columns}")
    ix, iy = columns.index(x_col), columns.index(y_col)
    group = "alpha" if "alpha" in columns else None
    groups = {}
    for row in rows:
        key = row[columns.index(group)] if group else ""
        groups.setdefault(key, []).append((float(row[ix]), float(row[iy])))
    for key, pts in groups.items():
        x, y = np.array(pts).T if pts else (np.array([]), np.array([]))
        f = fit_decay(x, y, args.model, args.window)
        record = {"x": x_col, "y": y_col, "model": f.model, "slope": f.slope,
                  "intercept": f.intercept, "r_squared": f.r_squared,
                  "window": list(f.window), "n_points": f.n_points, "dropped": f.dropped}
        if group:
            record[group] = float(key)
        print(json.dumps(record, default=_json_safe))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fracent",
        description="Entanglement and OTOC sweeps for the fractional harmonic chain.",
        epilog=_columns_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"fracent {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario config", epilog=_columns_epilog(),
                         formatter_class=argparse.RawDescriptionHelpFormatter)
    run.add_argument("config")
    run.add_argument("--out", help="output CSV path (overrides output.path)")
    run.add_argument("--workers", type=int, default=1, help="concurrent sweep points")
    run.add_argument("--strict", action="store_true",
                     help="exit 3 when residual or clamp thresholds are exceeded")
    run.set_defaults(func=cmd_run)

    fit = sub.add_parser("fit", help="fit ln y against x or ln x on a window")
    fit.add_argument("series")
    fit.add_argument("--model", choices=["power", "exp"], required=True)
    fit.add_argument("--window", type=_parse_window, required=True, help="lo:hi, either side may be empty")
    fit.add_argument("--x", help="independent column (default n_d, ell, t or L)")
    fit.add_argument("--y", help="dependent column (default E_LN, S, c or delta_S)")
    fit.set_defaults(func=cmd_fit)

    val = sub.add_parser("validate", help="schema-check a config without running it")
    val.add_argument("config")
    val.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        return _error(exc, EXIT_CONFIG)
    except NumericsUnhealthy as exc:
        return _error(exc, EXIT_NUMERICS)
    except (FracentError, OSError, ValueError) as exc:
        return _error(exc, EXIT_FAIL)


if __name__ == "__main__":
    sys.exit(main())
