"""Command-line front end (``mpe``).

Subcommands:

* ``table``   -- entropy of the density family for a list of rho values
* ``density`` -- CSV samples of one family density (optionally a plot script)
* ``verify``  -- run the module verification suites
* ``general`` -- the full pipeline on user-supplied moments

Configuration precedence: flags > environment (MPE_TOL, MPE_PRECISION,
MPE_N) > built-in defaults (tol=1e-6, precision=512 bits, N=40).

Exit codes: 0 pass, 1 verification failure, 2 input/regime error,
3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

import mpmath as mp
import numpy as np

from . import ascarlitz, diagnostics, entropy, hamburger
from .errors import (AccuracyError, DivergenceSuspected, DomainError,
                     IllConditioned, NonConvergence, RegimeError,
                     WindowExhausted)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT = 2
EXIT_NONCONVERGENCE = 3

_DEFAULTS = {"tol": 1e-6, "precision": 512, "N": 40}


@dataclasses.dataclass
class RunReport:
    command: str
    params: dict
    rows: list
    diagnostics: list = dataclasses.field(default_factory=list)

    @property
    def status(self) -> str:
        return "Pass" if all(r.get("pass", True) for r in self.rows) else "Fail"

    def to_json(self) -> str:
        payload = {
            "command": self.command,
            "params": self.params,
            "rows": self.rows,
            "status": self.status,
        }
        return json.dumps(payload, indent=2)


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def _resolve(flag_value, env_name, default, cast):
    if flag_value is not None:
        return flag_value
    env = os.environ.get(env_name)
    if env is not None:
        return cast(env)
    return default


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _params_from(args) -> ascarlitz.QParams:
    # q and a arrive as text; mpf(str) keeps the exact decimal value
    return ascarlitz.QParams(args.q, args.a)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_table(args) -> int:
    params = _params_from(args)
    tol = _resolve(args.tol, "MPE_TOL", _DEFAULTS["tol"], float)
    rho_list = [float(r) for r in args.rho.split(",") if r.strip()]
    if not rho_list or any(r <= 0 for r in rho_list):
        raise ValueError("--rho needs a nonempty comma list of positive values")

    mk = ascarlitz.mu_K(params, tol=1e-26)
    m2 = float(ascarlitz.moments_of_discrete(mk, 2))
    m4 = float(ascarlitz.moments_of_discrete(mk, 4))
    rows = []
    results = []
    for rho in rho_list:
        r = diagnostics.family_entropy(params, rho, tol=tol, m2=m2, m4=m4)
        results.append((rho, r))
        rows.append({"label": f"rho={rho:g}", "value": r.value, "tolerance": tol,
                     "residual": r.tail_estimate, "pass": r.tail_estimate <= tol})
    report = RunReport("table", {"q": str(params.q), "a": str(params.a),
                                 "tol": tol}, rows)
    if args.format == "csv":
        lines = ["rho,entropy,tail_estimate"]
        lines += [f"{rho:g},{_fmt(r.value)},{_fmt(r.tail_estimate)}"
                  for rho, r in results]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(report.to_json() + "\n", args.out)
    return EXIT_PASS if report.status == "Pass" else EXIT_FAIL


_PLOT_SCRIPT = """\
#!/usr/bin/env python3
\"\"\"Plot the density samples emitted alongside this script.\"\"\"
import csv
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

csv_path = sys.argv[1] if len(sys.argv) > 1 else {csv_path!r}
xs, ys = [], []
with open(csv_path) as fh:
    for row in csv.DictReader(fh):
        xs.append(float(row["x"]))
        ys.append(float(row["nu"]))
plt.figure(figsize=(8, 4.5))
plt.plot(xs, ys, lw=1.2)
plt.xlabel("x")
plt.ylabel("density")
plt.title({title!r})
plt.tight_layout()
plt.savefig({png_path!r}, dpi=150)
print("wrote", {png_path!r})
"""


def cmd_density(args) -> int:
    params = _params_from(args)
    rho = float(args.rho)
    if rho <= 0:
        raise ValueError(f"--rho must be positive, got {rho}")
    if not args.xmin < args.xmax:
        raise ValueError("need xmin < xmax")
    if args.points < 2:
        raise ValueError("need at least 2 points")
    xs = np.linspace(args.xmin, args.xmax, args.points)
    nu = ascarlitz.density_nu(params, rho, xs)
    lines = ["x,nu"]
    lines += [f"{_fmt(x)},{_fmt(v)}" for x, v in zip(xs, nu)]
    _emit("\n".join(lines) + "\n", args.out)
    if args.plot_script:
        csv_path = args.out or "density.csv"
        script = _PLOT_SCRIPT.format(
            csv_path=csv_path,
            title=f"density family member rho={rho:g} (q={args.q}, a={args.a})",
            png_path=os.path.splitext(args.plot_script)[0] + ".png",
        )
        with open(args.plot_script, "w", newline="") as fh:
            fh.write(script)
    return EXIT_PASS


def cmd_verify(args) -> int:
    params = _params_from(args)
    rows = diagnostics.run_suite(args.suite, params)
    report = RunReport("verify", {"q": str(params.q), "a": str(params.a),
                                  "suite": args.suite}, rows)
    for row in rows:
        flag = "PASS" if row["pass"] else "FAIL"
        resid = "" if row["residual"] is None else f"  residual={row['residual']:.3g}"
        tol = "" if row["tolerance"] is None else f"  tol={row['tolerance']:.3g}"
        print(f"[{flag}] {row['label']}  value={row['value']:.10g}{resid}{tol}")
    print(f"status: {report.status}")
    if args.out:
        _emit(report.to_json() + "\n", args.out)
    return EXIT_PASS if report.status == "Pass" else EXIT_FAIL


def _read_moments(path: str):
    values = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            text = raw.split("#", 1)[0].strip()
            if not text:
                continue
            try:
                mp.mpf(text)
            except Exception as exc:
                raise ValueError(f"{path}:{lineno}: not a number: {text!r}") from exc
            values.append(text)
    if not values:
        raise ValueError(f"{path}: no moments found")
    return values


def cmd_general(args) -> int:
    precision = _resolve(args.precision_bits, "MPE_PRECISION", _DEFAULTS["precision"], int)
    n_terms = _resolve(args.N, "MPE_N", _DEFAULTS["N"], int)
    tol = _resolve(args.tol, "MPE_TOL", _DEFAULTS["tol"], float)
    gamma = float(args.gamma)
    t = float(args.t)
    if gamma <= 0:
        raise ValueError(f"--gamma must be positive, got {gamma}")

    texts = _read_moments(args.moments)
    mseq = hamburger.MomentSequence(texts, precision)  # text parsed at full precision
    order = (len(mseq) - 1) // 2
    rec = hamburger.recurrence_from_moments(mseq, order)
    quad = hamburger.build_quadruple(rec, n_terms)
    point = hamburger.PickPoint(t=t, gamma=gamma)

    rows = []
    diag = []
    if quad.terms < n_terms:
        diag.append(f"series truncated at {quad.terms} terms "
                    f"({len(mseq)} moments support order {order})")
    xs = [float(v) for v in args.x.split(",")] if args.x else []
    for x in xs:
        rows.append({"label": f"f(x={x:g})",
                     "value": float(hamburger.density_f(quad, point, x)),
                     "tolerance": None, "residual": None, "pass": True})
    if len(mseq) > 4:
        log_h = hamburger.quadruple_log_h(quad, point)
        r = entropy.entropy_of_family(
            log_h, point, m2=float(mseq.values[2]), m4=float(mseq.values[4]),
            cfg=entropy.QuadratureConfig(tol=tol))
        rows.append({"label": "entropy", "value": r.value, "tolerance": tol,
                     "residual": r.tail_estimate, "pass": r.tail_estimate <= tol})
    else:
        diag.append("fewer than 5 moments: entropy tail bound unavailable, skipped")

    report = RunReport("general", {"moments": args.moments, "t": t, "gamma": gamma,
                                   "N": n_terms, "precision_bits": precision}, rows,
                       diagnostics=diag)
    if args.format == "csv":
        lines = ["x,f"]
        lines += [f"{_fmt(x)},{_fmt(row['value'])}" for x, row in zip(xs, rows)]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(report.to_json() + "\n", args.out)
    for note in diag:
        print(note, file=sys.stderr)
    return EXIT_PASS if report.status == "Pass" else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser / entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpe",
        description="Densities and Shannon entropy for indeterminate "
                    "Hamburger moment problems.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_qa(p):
        p.add_argument("--q", default="0.6", help="base q in (0,1), as text")
        p.add_argument("--a", default="1.2", help="parameter a in (q, 1/q), as text")

    p = sub.add_parser("table", help="entropy table over a list of rho values")
    add_qa(p)
    p.add_argument("--rho", default="0.01,0.2,0.5,1,2,5,10",
                   help="comma list of positive rho values")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("density", help="CSV samples of one family density")
    add_qa(p)
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--xmin", type=float, default=-1.0)
    p.add_argument("--xmax", type=float, default=6.0)
    p.add_argument("--points", type=int, default=1000)
    p.add_argument("--out", default=None)
    p.add_argument("--plot-script", default=None,
                   help="also write a matplotlib script to this path")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("verify", help="run module verification suites")
    add_qa(p)
    p.add_argument("--suite", choices=("qseries", "measures", "pipeline",
                                       "entropy", "all"), default="all")
    p.add_argument("--out", default=None, help="also write a JSON report here")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("general", help="run the pipeline on user-supplied moments")
    p.add_argument("--moments", required=True,
                   help="file with one moment per line (# comments allowed)")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--N", type=int, default=None, help="series truncation order")
    p.add_argument("--precision-bits", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--x", default="", help="comma list of density evaluation points")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_general)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (RegimeError, DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (WindowExhausted, DivergenceSuspected, NonConvergence,
            AccuracyError, IllConditioned) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
