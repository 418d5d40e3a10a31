"""Command-line front end: simulations, eigenvalue reports, figures, Monte Carlo.

Subcommands
-----------
survival  -- integrate one regime and tabulate W against every analytic law
eigen     -- characteristic cubic report (roots, approximations, window)
figure    -- data for the scaled log-norm (1) and log-decrement (2) curves
mc        -- Monte Carlo next-jump times with goodness-of-fit summary
sweep     -- readout figures of merit along one parameter axis

All commands work in kappa = 1 units unless --kappa is given.  CSV output
carries `#`-prefixed metadata lines and 17-significant-digit values; JSON
output is a single object with params, columns and rows.  Exit codes:
0 success, 1 runtime/physics error, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import closedform, engine, readout, sampling
from .errors import NextJumpError
from .params import (QubitLevel, SystemParams, default_truncation, initial_state,
                     make_params)

CSV_VERSION = "v1"


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _write_text(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def write_csv(path: str | None, kind: str, meta: dict, columns: list[str],
              rows) -> None:
    lines = [f"# nextjump-csv {CSV_VERSION} {kind}"]
    for key, val in meta.items():
        lines.append(f"# {key}={_fmt(val)}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _write_text(path, "\n".join(lines) + "\n")


def write_json(path: str | None, kind: str, meta: dict, columns: list[str],
               rows) -> None:
    def clean(v):
        if isinstance(v, float) and not math.isfinite(v):
            return None
        return v

    doc = {
        "schema": f"nextjump/{kind}/{CSV_VERSION}",
        "params": {k: clean(v) for k, v in meta.items()},
        "columns": columns,
        "rows": [[clean(v) for v in row] for row in rows],
    }
    _write_text(path, json.dumps(doc, indent=2) + "\n")


def _params_from(args) -> SystemParams:
    return make_params(kappa=args.kappa, nbar=args.nbar, chi=args.chi,
                       omega_rabi=complex(args.omega))


def _params_meta(p: SystemParams) -> dict:
    return {
        "kappa": p.kappa,
        "nbar": p.nbar,
        "chi": p.chi,
        "omega_re": p.omega_rabi.real,
        "omega_im": p.omega_rabi.imag,
        "gamma_drive": p.gamma_drive,
    }


def _try(fn, *a):
    try:
        return float(fn(*a))
    except (ZeroDivisionError, NextJumpError):
        return math.nan


def cmd_survival(args) -> int:
    params = _params_from(args)
    level = QubitLevel(args.initial_level)
    if params.omega_rabi != 0 or level is QubitLevel.B:
        regime = engine.Regime.COUPLED
    elif params.chi > 0:
        regime = engine.Regime.DETUNED
    else:
        regime = engine.Regime.RESONANT
    trunc = default_truncation(params.nbar, tail_tol=args.tail_tol)
    if args.n_max is not None:
        trunc = type(trunc)(n_max=args.n_max, tail_tol=args.tail_tol)
    state = initial_state(level, trunc)
    grid = np.linspace(0.0, args.t_end, args.points)
    spec = engine.EvolutionSpec(regime=regime, t_end=args.t_end,
                                step_ctrl=engine.StepControl(
                                    abs_tol=args.abs_tol, rel_tol=args.rel_tol),
                                t_eval=grid)
    record, _ = engine.evolve(state, params, spec, trunc)

    # reference curves: a bright start with the drive on its resonance
    # follows the chi = 0 closed form
    ref = params if (level is QubitLevel.G or params.omega_rabi != 0) else \
        make_params(params.kappa, params.nbar, 0.0, params.omega_rabi)
    w_exact = np.asarray(closedform.survival_exact(grid, ref))
    w_short = np.asarray(closedform.survival_shorttime(grid, params))
    if params.chi > 0:
        w_ds = np.asarray(closedform.survival_dispersive_short(grid, params))
        w_dl = np.asarray(closedform.survival_dispersive_long(grid, params))
    else:
        w_ds = np.full_like(grid, math.nan)
        w_dl = np.full_like(grid, math.nan)
    density = -record.dw_dt

    meta = _params_meta(params)
    meta.update(regime=regime.value, t_end=args.t_end, n_max=trunc.n_max,
                initial_level=level.value)
    columns = ["t", "W_numeric", "W_exact", "W_short", "W_disp_short",
               "W_disp_long", "D"]
    rows = zip(record.t, record.w, w_exact, w_short, w_ds, w_dl, density)
    writer = write_json if args.format == "json" else write_csv
    writer(args.output, "survival", meta, columns, [list(r) for r in rows])
    return 0


def cmd_eigen(args) -> int:
    params = _params_from(args)
    eig = readout.characteristic_roots(params)
    b = eig.beta_B / 2.0
    c = params.kappa / 2.0 - 1j * params.chi
    om2 = abs(params.omega_rabi) ** 2
    g2 = params.gamma_drive ** 2
    coeffs = [1.0 + 0j, b + c, b * c + om2 + g2, om2 * c + g2 * b]

    def presidual(lam: complex) -> float:
        return abs(((lam + coeffs[1]) * lam + coeffs[2]) * lam + coeffs[3])

    doc = {
        "schema": f"nextjump/eigen/{CSV_VERSION}",
        "params": _params_meta(params),
        "beta_B": eig.beta_B,
        "gamma_slow": eig.gamma_slow if math.isfinite(eig.gamma_slow) else None,
        "window_valid": eig.valid,
        "separation_fast": eig.separation_fast
        if math.isfinite(eig.separation_fast) else None,
        "separation_slow": eig.separation_slow
        if math.isfinite(eig.separation_slow) else None,
        "roots": [{"re": r.real, "im": r.imag, "residual": presidual(r)}
                  for r in eig.roots],
        "approx": [{"re": a.real, "im": a.imag} for a in eig.approx],
    }
    _write_text(args.output, json.dumps(doc, indent=2) + "\n")
    return 0


def cmd_figure(args) -> int:
    tau = np.linspace(0.0, args.tau_max, args.points)
    if args.which == 1:
        nbars = args.nbar_list
        columns = ["tau"] + [f"logW_over_nbar_{_fmt(nb).replace('.', 'p')}"
                             for nb in nbars]
        series = [closedform.figure1_curve(tau, nb) for nb in nbars]
        meta = {"nbar_list": ";".join(_fmt(nb) for nb in nbars),
                "tau_max": args.tau_max}
        rows = [list(r) for r in zip(tau, *series)]
        kind = "fig1"
    else:
        y = closedform.figure2_curve(tau, args.chi_over_kappa)
        columns = ["tau", "Y"]
        meta = {"chi_over_kappa": args.chi_over_kappa, "tau_max": args.tau_max}
        rows = [list(r) for r in zip(tau, y)]
        kind = "fig2"
    writer = write_json if args.format == "json" else write_csv
    writer(args.output, kind, meta, columns, rows)
    return 0


def cmd_mc(args) -> int:
    params = _params_from(args)
    if params.omega_rabi != 0:
        state = readout.ReducedState(
            c_B0=1.0 if args.initial_level == "B" else 0.0,
            c_G0=1.0 if args.initial_level == "G" else 0.0, c_G1=0.0)
        record = readout.evolve_reduced(state, params, args.t_end,
                                        n_points=args.points)
    elif args.source == "numeric":
        trunc = default_truncation(params.nbar)
        spec = engine.EvolutionSpec(
            regime=engine.Regime.DETUNED if params.chi > 0 else engine.Regime.RESONANT,
            t_end=args.t_end, t_eval=np.linspace(0.0, args.t_end, args.points))
        record, _ = engine.evolve(initial_state(QubitLevel.G, trunc), params,
                                  spec, trunc)
    else:
        record = closedform.closed_form_record(params, args.t_end, args.points)

    samples = sampling.sample_jump_times(record, args.n_samples, args.seed,
                                         n_partitions=args.partitions)
    report = sampling.histogram_vs_density(samples, record, bins=args.bins)
    mean_mc = float(np.mean(samples.times))
    stderr = float(np.std(samples.times, ddof=1) / math.sqrt(len(samples.times)))
    try:
        mean_quad = closedform.mean_jump_time(record)
    except NextJumpError:
        mean_quad = math.nan

    meta = _params_meta(params)
    meta.update(t_end=args.t_end, n_samples=args.n_samples, seed=samples.seed,
                rng=samples.rng_algorithm, partitions=samples.n_partitions,
                source=record.source.value)
    summary = dict(meta)
    summary.update(censored=samples.censored, n_uncensored=report.n_uncensored,
                   empirical_mean=mean_mc, empirical_stderr=stderr,
                   mean_jump_time=None if math.isnan(mean_quad) else mean_quad,
                   ks_stat=report.ks_stat, ks_pvalue=report.ks_pvalue,
                   ks_crit_1pct=report.ks_crit_1pct)
    _write_text(args.output, json.dumps({"schema": f"nextjump/mc/{CSV_VERSION}",
                                         **summary}, indent=2) + "\n")

    if args.histogram_output:
        columns = ["bin_left", "bin_right", "count", "empirical_freq",
                   "expected_mass"]
        rows = [[report.bin_edges[i], report.bin_edges[i + 1],
                 int(report.counts[i]), report.empirical_freq[i],
                 report.expected_mass[i]] for i in range(len(report.counts))]
        write_csv(args.histogram_output, "histogram", meta, columns, rows)
    return 0


def cmd_sweep(args) -> int:
    values = args.values
    base = dict(kappa=args.kappa, nbar=args.nbar, chi=args.chi,
                omega=complex(args.omega))
    columns = [args.axis, "t_j_estimate", "epsilon_exact", "epsilon_scaling",
               "gamma_slow", "t3_fraction", "window_valid"]
    rows = []
    for v in values:
        kw = dict(base)
        kw[args.axis] = v if args.axis != "omega" else complex(v)
        p = make_params(kappa=kw["kappa"], nbar=kw["nbar"], chi=kw["chi"],
                        omega_rabi=kw["omega"])
        t_j = _try(readout.readout_time_estimate, p)
        if math.isfinite(t_j):
            try:
                err = readout.readout_error(p, t_j)
                eps_exact, eps_scaling = err.exact, err.scaling
            except (ZeroDivisionError, NextJumpError):
                eps_exact = eps_scaling = math.nan
        else:
            eps_exact = eps_scaling = math.nan
        rows.append([v, t_j, eps_exact, eps_scaling,
                     _try(readout.slow_rate, p), _try(closedform.t3_fraction, p),
                     int(readout.characteristic_roots(p).valid)])
    meta = _params_meta(make_params(kappa=base["kappa"], nbar=base["nbar"],
                                    chi=base["chi"], omega_rabi=base["omega"]))
    meta.update(axis=args.axis)
    writer = write_json if args.format == "json" else write_csv
    writer(args.output, "sweep", meta, columns, rows)
    return 0


def _float_list(text: str) -> list[float]:
    vals = [v for v in (s.strip() for s in text.split(",")) if v]
    if not vals:
        raise argparse.ArgumentTypeError("empty value list")
    return [float(v) for v in vals]


def _env_seed() -> int:
    raw = os.environ.get("NEXTJUMP_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        return 0


def _add_param_opts(p: argparse.ArgumentParser, nbar_default: float = 4.0) -> None:
    p.add_argument("--kappa", type=float, default=1.0,
                   help="resonator decay rate (default 1: dimensionless tau)")
    p.add_argument("--nbar", type=float, default=nbar_default,
                   help="drive strength (steady-state occupation)")
    p.add_argument("--chi", type=float, default=0.0, help="dispersive shift")
    p.add_argument("--omega", type=float, default=0.0, help="Rabi coupling")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nextjump",
        description="Next-quantum-jump statistics of a damped driven resonator "
                    "dispersively coupled to a qubit")
    parser.add_argument("--config", help="key=value defaults file; flags win")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("survival", help="tabulate W(t) for one regime")
    _add_param_opts(p)
    p.add_argument("--t-end", type=float, default=3.0)
    p.add_argument("--points", type=int, default=201)
    p.add_argument("--initial-level", choices=["G", "B"], default="G")
    p.add_argument("--n-max", type=int, default=None,
                   help="override the automatic Fock truncation")
    p.add_argument("--tail-tol", type=float, default=1e-10)
    p.add_argument("--abs-tol", type=float, default=1e-10)
    p.add_argument("--rel-tol", type=float, default=1e-10)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_survival)

    p = sub.add_parser("eigen", help="characteristic cubic report")
    _add_param_opts(p, nbar_default=100.0)
    p.set_defaults(chi=10.0, omega=1.0)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_eigen)

    p = sub.add_parser("figure", help="curve data for the paper-style figures")
    p.add_argument("--which", type=int, choices=[1, 2], required=True)
    p.add_argument("--nbar-list", type=_float_list, default=[25.0],
                   help="comma-separated nbar values (figure 1)")
    p.add_argument("--chi-over-kappa", type=float, default=5.0,
                   help="dispersion ratio (figure 2)")
    p.add_argument("--tau-max", type=float, default=10.0)
    p.add_argument("--points", type=int, default=501)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("mc", help="Monte Carlo next-jump times")
    _add_param_opts(p)
    p.add_argument("--t-end", type=float, default=12.0)
    p.add_argument("--points", type=int, default=2001)
    p.add_argument("--n-samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=_env_seed(),
                   help="RNG seed (default: NEXTJUMP_SEED or 0)")
    p.add_argument("--partitions", type=int, default=1)
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--source", choices=["closed", "numeric"], default="closed")
    p.add_argument("--initial-level", choices=["G", "B"], default="B")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--histogram-output", default=None)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("sweep", help="readout figures of merit along one axis")
    _add_param_opts(p)
    p.add_argument("--axis", choices=["nbar", "chi", "omega", "kappa"],
                   required=True)
    p.add_argument("--values", type=_float_list, required=True,
                   help="comma-separated axis values")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_sweep)
    return parser


def _load_config(path: str) -> dict:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, _, val = line.partition("=")
            out[key.strip().replace("-", "_")] = val.strip()
    return out


def _apply_config(parser: argparse.ArgumentParser, config: dict) -> None:
    stack = [parser]
    while stack:
        p = stack.pop()
        for action in p._actions:
            if isinstance(action, argparse._SubParsersAction):
                stack.extend(action.choices.values())
                continue
            if action.dest in config:
                raw = config[action.dest]
                if action.type is not None:
                    value = action.type(raw)
                elif isinstance(action.default, bool):
                    value = raw.lower() in ("1", "true", "yes")
                else:
                    value = raw
                p.set_defaults(**{action.dest: value})


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    if "--config" in argv:
        try:
            cfg = _load_config(argv[argv.index("--config") + 1])
        except (IndexError, OSError) as exc:
            parser.error(f"cannot read config file: {exc}")
        _apply_config(parser, cfg)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NextJumpError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
