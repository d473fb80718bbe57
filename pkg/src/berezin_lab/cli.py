"""berezin-lab: classify regimes, print constants, scan bound functions, run suites.

Exit codes: 0 success / all checks passed, 1 a verification check failed,
2 bad parameters.
"""

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Optional

import numpy as np

from . import __version__
from .quadrature import QuadratureConfig
from .seminorm import (
    constant,
    extremal_complex,
    extremal_real,
    s_complex,
    s_real,
    scan_r,
    transform_at,
)
from .series import RegimeError, classify
from .special import make_context
from .suites import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MIN_SAMPLES = 1000
CHECK_COLUMNS = ("check", "value", "reference", "sigma_distance", "rel_error", "pass")
SCAN_COLUMNS = ("r", "bound_value", "oracle_value", "oracle_stderr", "argmax")
SYMBOLS = ("extremal-complex", "extremal-real", "constant")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    n: int = 1
    alpha: float = 0.0
    case: str = "complex"
    samples: int = 1_000_000
    seed: int = 0
    r_grid: str = "0:0.99:0.01"
    fmt: str = "json"
    out: Optional[str] = None
    oracle: bool = False
    suite: str = "all"
    workers: int = 1
    symbol: str = "extremal-complex"
    z: str = ""

    def validate(self):
        if self.n < 1:
            raise UsageError(f"--n must be >= 1, got {self.n}")
        if not self.alpha > -1.0 or not math.isfinite(self.alpha):
            raise UsageError(f"--alpha must be a finite number > -1, got {self.alpha}")
        if self.samples < MIN_SAMPLES:
            raise UsageError(f"--samples must be >= {MIN_SAMPLES}, got {self.samples}")
        if not 0 <= self.seed < 2**64:
            raise UsageError("--seed must be a nonnegative 64-bit integer")
        if self.workers < 1:
            raise UsageError("--workers must be >= 1")

    def quadrature(self):
        return QuadratureConfig(self.samples, self.seed, "uniform", self.workers)


def parse_grid(text):
    """Parse ``start:stop:step`` (stop included) or a comma list of radii."""
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) != 3:
                raise ValueError
            start, stop, step = parts
            if step <= 0 or stop < start:
                raise UsageError(f"bad r grid {text!r}: need step > 0 and stop >= start")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            grid = np.round(start + step * np.arange(count), 12)
        else:
            grid = np.array([float(p) for p in text.split(",") if p.strip()])
    except ValueError:
        raise UsageError(f"bad r grid {text!r}: expected start:stop:step or a comma list") from None
    if grid.size == 0:
        raise UsageError("empty r grid")
    if np.any(grid < 0) or np.any(grid >= 1):
        raise UsageError("r grid values must lie in [0, 1)")
    return grid


def parse_point(text, n):
    if not text:
        return np.zeros(n, dtype=complex)
    try:
        z = np.array([complex(p.strip().replace(" ", "")) for p in text.split(",")])
    except ValueError:
        raise UsageError(f"bad point {text!r}: expected comma-separated complex numbers") from None
    if z.shape[0] != n:
        raise UsageError(f"point has {z.shape[0]} coordinates, expected n={n}")
    if np.sum(np.abs(z) ** 2) >= 1.0:
        raise UsageError("point must lie inside the unit ball")
    return z


# -- serialisation ------------------------------------------------------------


def _json_num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _csv(columns, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def _text(columns, rows):
    table = [list(columns)] + [[_fmt(row.get(c)) for c in columns] for row in rows]
    widths = [max(len(r[i]) for r in table) for i in range(len(columns))]
    return "".join("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() + "\n" for r in table)


def _config_block(cfg):
    return {
        "n": cfg.n,
        "alpha": cfg.alpha,
        "case": cfg.case,
        "samples": cfg.samples,
        "seed": cfg.seed,
    }


def _envelope(cfg, **body):
    doc = {
        "tool": "berezin-lab",
        "version": __version__,
        "command": cfg.command,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "config": _config_block(cfg),
    }
    doc.update(body)
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _render(cfg, columns, table, **extra):
    if cfg.fmt == "csv":
        return _csv(columns, table)
    if cfg.fmt == "text":
        return _text(columns, table)
    return _envelope(cfg, **extra)


# -- commands -----------------------------------------------------------------


def _regime_row(cfg):
    rep = classify(cfg.n, cfg.alpha, cfg.case)
    return {
        "n": rep.n,
        "alpha": rep.alpha,
        "case": rep.case,
        "regime": rep.regime,
        "constant_or_bound": rep.constant_or_bound,
        "turning_index": rep.turning_index,
    }


def cmd_classify(cfg):
    row = _regime_row(cfg)
    columns = tuple(row)
    result = dict(row, constant_or_bound=_json_num(row["constant_or_bound"]))
    return _render(cfg, columns, [row], result=result), EXIT_OK


def cmd_constant(cfg):
    row = _regime_row(cfg)
    kind = {"sharp": "sharp", "bounded-strict": "strict-upper-bound", "unbounded": "infinite"}[row["regime"]]
    out = {"case": cfg.case, "n": cfg.n, "alpha": cfg.alpha, "kind": kind, "value": row["constant_or_bound"]}
    result = dict(out, value=_json_num(out["value"]))
    return _render(cfg, tuple(out), [out], result=result), EXIT_OK


def cmd_scan(cfg):
    grid = parse_grid(cfg.r_grid)
    ctx = make_context(cfg.n, cfg.alpha)
    oracle_cfg = cfg.quadrature() if cfg.oracle else None
    try:
        res = scan_r(cfg.case, ctx, grid, oracle_cfg)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = []
    for i, r in enumerate(res.r):
        rows.append({
            "r": float(r),
            "bound_value": float(res.values[i]),
            "oracle_value": None if res.oracle is None else float(res.oracle[i]),
            "oracle_stderr": None if res.oracle_stderr is None else float(res.oracle_stderr[i]),
            "argmax": int(i == res.argmax),
        })
    json_rows = [{k: (_json_num(v) if k != "argmax" else v) for k, v in row.items()} for row in rows]
    summary = {
        "regime": res.regime,
        "reference": _json_num(res.reference),
        "argmax_r": res.r_max,
        "max_value": res.max_value,
        "consistent": bool(res.consistent),
    }
    return _render(cfg, SCAN_COLUMNS, rows, rows=json_rows, summary=summary), EXIT_OK


def cmd_verify(cfg):
    try:
        checks = run_suite(cfg.suite, n=cfg.n, alpha=cfg.alpha, case=cfg.case,
                           samples=cfg.samples, seed=cfg.seed)
    except (RegimeError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    rows = [
        {
            "check": c.check,
            "value": c.value,
            "reference": c.reference,
            "sigma_distance": c.sigma_distance,
            "rel_error": c.rel_error,
            "pass": bool(c.passed),
        }
        for c in checks
    ]
    passed = all(r["pass"] for r in rows)
    json_rows = [{k: (_json_num(v) if k in ("value", "reference", "sigma_distance", "rel_error") else v)
                  for k, v in row.items()} for row in rows]
    text = _render(cfg, CHECK_COLUMNS, rows, suite=cfg.suite, checks=json_rows, passed=passed)
    return text, EXIT_OK if passed else EXIT_FAIL


def cmd_transform(cfg):
    z = parse_point(cfg.z, cfg.n)
    ctx = make_context(cfg.n, cfg.alpha)
    if cfg.symbol == "constant":
        f = constant(cfg.n)
    elif cfg.symbol == "extremal-real":
        f = extremal_real(np.eye(cfg.n)[0])
    else:
        f = extremal_complex(np.eye(cfg.n)[0])
    qcfg = cfg.quadrature()
    val = transform_at(f, z, ctx, qcfg)
    s = s_real(f, z, ctx, qcfg) if cfg.case == "real" else s_complex(f, z, ctx, qcfg)
    value = complex(val.value)
    out = {
        "symbol": cfg.symbol,
        "z": ",".join(_fmt_complex(c) for c in z),
        "transform_re": value.real,
        "transform_im": value.imag,
        "transform_stderr": float(val.std_error),
        "seminorm_sample": s.value,
        "seminorm_stderr": s.std_error,
    }
    result = {k: (_json_num(v) if isinstance(v, float) else v) for k, v in out.items()}
    return _render(cfg, tuple(out), [out], result=result), EXIT_OK


def _fmt_complex(c):
    return f"{c.real!r}{'+' if c.imag >= 0 else '-'}{abs(c.imag)!r}j"


COMMANDS = {
    "classify": cmd_classify,
    "constant": cmd_constant,
    "scan": cmd_scan,
    "verify": cmd_verify,
    "transform": cmd_transform,
}


# -- argument parsing ---------------------------------------------------------


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=1, help="complex dimension (>= 1)")
    common.add_argument("--alpha", type=float, default=0.0, help="weight exponent (> -1)")
    common.add_argument("--case", choices=("complex", "real"), default="complex")
    common.add_argument("--samples", type=int, default=1_000_000,
                        help="Monte-Carlo samples per integral (default 1e6, minimum 1e3)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1, help="threads per integral")
    common.add_argument("--format", dest="fmt", choices=("json", "csv", "text"), default="json")
    common.add_argument("--out", default=None, help="write output here instead of stdout")

    parser = argparse.ArgumentParser(prog="berezin-lab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("classify", parents=[common], help="place (n, alpha) in its regime")
    sub.add_parser("constant", parents=[common], help="sharp constant or strict upper bound")
    p = sub.add_parser("scan", parents=[common], help="tabulate the bound function over r")
    p.add_argument("--r", dest="r_grid", default="0:0.99:0.01", help="start:stop:step or comma list")
    p.add_argument("--oracle", action="store_true", help="add a Monte-Carlo oracle column")
    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", choices=SUITES, default="all")
    p = sub.add_parser("transform", parents=[common], help="evaluate the transform and seminorm at a point")
    p.add_argument("--symbol", choices=SYMBOLS, default="extremal-complex")
    p.add_argument("--z", default="", help="comma-separated complex coordinates (default 0)")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = RunConfig(**vars(args))
    try:
        cfg.validate()
        text, code = COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        parser.error(str(exc))  # exits with status 2
    if cfg.out:
        with open(cfg.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
