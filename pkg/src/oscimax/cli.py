"""Experiment runner: config parsing, dispatch, and machine-readable reports.

Each experiment writes one CSV per sweep plus a JSON summary into the output
directory.  Report bodies are deterministic for a fixed resolved config; the
only timestamp lives on the first line of summary.txt so the remaining files
can be compared byte for byte.

Exit codes: 0 all checks pass, 1 check failure, 2 usage/config error,
3 numeric non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .extrapolation import atom_uniformity_experiment, combination_rate_experiment
from .operators import TimeGrid, maximal_over_times, oscillating_op, riesz_mean_op, verify_kernel_decay
from .quadrature import (
    ConvergenceError,
    dyadic_band_ratio,
    dyadic_tail_order,
    fit_decay_exponent,
    fourier_cosine_mu_derivative,
    small_tau_exponent,
    verify_small_tau_decay,
)
from .symbols import CutoffProfile, SymbolParams, partition_residual
from .torus import LatticeGrid, inverse_transform, pure_mode, random_spectral_field

EXIT_PASS = 0
EXIT_CHECK_FAILURE = 1
EXIT_USAGE = 2
EXIT_NON_CONVERGENCE = 3

DEFAULTS = {
    "partition-check": {
        "samples": 10_000,
        "u_max": 1e6,
        "cutoff_kind": "smoothstep_poly",
        "cutoff_order": 7,
        "tolerance": 1e-12,
        "seed": 0,
    },
    "symbol-decay": {
        "alpha": 0.5,
        "beta": 0.5,
        "L": 0,
        "tau_lo": 1e-3,
        "tau_hi": 1e-1,
        "n_samples": 25,
        "slope_tol": 0.2,
        "cutoff_kind": "smoothstep_poly",
        "cutoff_order": 7,
    },
    "dyadic-decay": {
        "alpha": 0.5,
        "beta": 1.0,
        "k": 6,
        "tau_lo": 2.0,
        "tau_hi": 10.0,
        "n_samples": 15,
        "min_order": 3.0,
        "max_ratio": 10.0,
        "cutoff_kind": "smoothstep_poly",
        "cutoff_order": 7,
    },
    "kernel-decay": {
        "alpha": 0.5,
        "beta": 0.5,
        "t": 0.5,
        "eps": 1e-7,
        "m_cap": 200_000,
        "ratio_lo": 0.05,
        "ratio_hi": 1.0,
        "n_samples": 20,
        "slope_tol": 0.3,
        "cutoff_kind": "smoothstep_poly",
        "cutoff_order": 7,
    },
    "rate-combo": {
        "alpha": 0.5,
        "beta": 0.75,
        "p": 0.5,
        "N": 0,  # 0 means the minimal admissible order floor(beta/alpha)+1
        "n_modes": 64,
        "band_limit": 16,
        "seed": 0,
        "t_lo": 1e-4,
        "t_hi": 1e-2,
        "n_samples": 24,
    },
    "rate-riesz": {
        "k": 1.0,
        "alpha": 0.5,
        "n_modes": 64,
        "mode": 7,
        "t_lo": 1e-4,
        "t_hi": 1e-2,
        "n_samples": 12,
        "slope_tol": 0.05,
    },
    "atom-uniformity": {
        "p": 0.5,
        "alpha": 0.5,
        "beta": 0.75,
        "n_modes": 1024,
        "atom_count": 50,
        "seed": 0,
        "max_ratio": 10.0,
    },
    "maximal-sweep": {
        "alpha": 0.5,
        "beta": 0.75,
        "dimension": 1,
        "n_modes": 256,
        "band_limit": 64,
        "sigma": 0.5,
        "time_count": 32,
        "span_octaves": 12.0,
        "seed": 0,
    },
}

CATALOG = {
    "partition-check": "residual of the telescoping dyadic partition of unity "
    "over sampled arguments",
    "symbol-decay": "small-tau blow-up exponent of the cosine transform of the "
    "oscillating symbol (and its tau-derivatives) against the predicted "
    "-L/(1-alpha) + (alpha-2+2*beta)/(2*(1-alpha))",
    "dyadic-decay": "outer-region decay order and middle-region normalized "
    "magnitude of the frequency-localized transform pieces",
    "kernel-decay": "near-diagonal decay of the 1-D kernel lattice sum against "
    "the predicted x/t power law, with truncation-doubling stability",
    "rate-combo": "convergence rate of the Vandermonde time-combination of "
    "fractional propagators toward the identity",
    "rate-riesz": "single-mode convergence rate of Riesz means of the "
    "fractional propagator",
    "atom-uniformity": "weak-type quasinorm spread of the maximal oscillating "
    "operator over a batch of cancellative atoms",
    "maximal-sweep": "maximal function of the oscillating operator over a time "
    "grid, with refinement-stability delta",
}


def _resolve_config(experiment: str, config_file, flag_values: dict) -> dict:
    config = dict(DEFAULTS[experiment])
    if config_file is not None:
        with open(config_file) as fh:
            loaded = json.load(fh)
        for key, value in loaded.items():
            if key == "experiment":
                continue
            if key not in config:
                raise ValueError(f"unknown config key {key!r} for {experiment}")
            config[key] = value
    for key, value in flag_values.items():
        if value is None:
            continue
        if key not in config:
            raise ValueError(f"flag --{key.replace('_', '-')} does not apply to {experiment}")
        config[key] = value
    return config


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in row])


def _write_summary(out_dir: Path, experiment: str, config: dict, summary: dict) -> None:
    body = {
        "experiment": experiment,
        "config": config,
        **summary,
    }
    with open(out_dir / "summary.json", "w") as fh:
        json.dump(body, fh, indent=2, sort_keys=True, default=float)
        fh.write("\n")
    lines = [f"# generated {datetime.now(timezone.utc).isoformat()}"]
    lines.append(f"experiment: {experiment}")
    for key in sorted(summary):
        lines.append(f"{key}: {summary[key]}")
    (out_dir / "summary.txt").write_text("\n".join(lines) + "\n")


def _fit_dict(fit) -> dict:
    return {
        "slope": fit.slope,
        "intercept": fit.intercept,
        "r_squared": fit.r_squared,
        "tau_range": list(fit.tau_range),
        "sample_count": fit.sample_count,
    }


def _run_partition_check(config, out_dir):
    profile = CutoffProfile(config["cutoff_kind"], config["cutoff_order"])
    rng = np.random.default_rng(config["seed"])
    u_values = rng.uniform(-config["u_max"], config["u_max"], size=config["samples"])
    rows = []
    worst = 0.0
    for u in u_values:
        K = max(0, int(np.ceil(np.log2(max(abs(u), 1.0)))))
        res = partition_residual(float(u), K, profile)
        worst = max(worst, res)
        rows.append((float(u), res))
    _write_csv(out_dir / "partition-check.csv", ["u", "residual"], rows)
    return {
        "max_residual": worst,
        "tolerance": config["tolerance"],
        "pass": bool(worst <= config["tolerance"]),
    }


def _run_symbol_decay(config, out_dir):
    params = SymbolParams(config["alpha"], config["beta"])
    profile = CutoffProfile(config["cutoff_kind"], config["cutoff_order"])
    report = verify_small_tau_decay(
        params,
        profile,
        config["L"],
        config["tau_lo"],
        config["tau_hi"],
        n_samples=config["n_samples"],
        slope_tol=config["slope_tol"],
    )
    taus = np.geomspace(config["tau_lo"], config["tau_hi"], config["n_samples"])
    rows = []
    for tau in taus:
        v = fourier_cosine_mu_derivative(params, profile, float(tau), config["L"])
        rows.append((float(tau), v.real, v.imag, abs(v)))
    _write_csv(out_dir / "symbol-decay.csv", ["tau", "re", "im", "modulus"], rows)
    summary = {
        "predicted_exponent": small_tau_exponent(config["alpha"], config["beta"], config["L"]),
        "branch": report["branch"],
        "pass": report["pass"],
    }
    if report.get("fitted") is not None:
        summary["fitted"] = _fit_dict(report["fitted"])
    return summary


def _run_dyadic_decay(config, out_dir):
    params = SymbolParams(config["alpha"], config["beta"])
    profile = CutoffProfile(config["cutoff_kind"], config["cutoff_order"])
    k = int(config["k"])
    fit = dyadic_tail_order(
        params,
        profile,
        k=k,
        tau_lo=config["tau_lo"],
        tau_hi=config["tau_hi"],
        n_samples=config["n_samples"],
    )
    band = dyadic_band_ratio(params, profile)
    from .quadrature import fourier_cosine_mu_dyadic

    rows = []
    for tau in np.geomspace(config["tau_lo"], config["tau_hi"], config["n_samples"]):
        v = fourier_cosine_mu_dyadic(params, profile, k, float(tau))
        rows.append((float(2.0**k * tau), v.real, v.imag, abs(v)))
    _write_csv(out_dir / "dyadic-decay.csv", ["scaled_tau", "re", "im", "modulus"], rows)
    order = -fit.slope
    return {
        "fitted_order": order,
        "tail_fit": _fit_dict(fit),
        "band_normalized": {str(kk): float(v) for kk, v in band["normalized"].items()},
        "band_ratio": float(band["ratio"]),
        "pass": bool(order >= config["min_order"] and band["ratio"] <= config["max_ratio"]),
    }


def _run_kernel_decay(config, out_dir):
    params = SymbolParams(config["alpha"], config["beta"])
    profile = CutoffProfile(config["cutoff_kind"], config["cutoff_order"])
    t = config["t"]
    ratios = np.geomspace(config["ratio_lo"], config["ratio_hi"], config["n_samples"])
    radii = ratios * t
    report = verify_kernel_decay(
        params,
        profile,
        t,
        radii,
        eps=config["eps"],
        M_cap=int(config["m_cap"]),
        slope_tol=config["slope_tol"],
    )
    doubled = verify_kernel_decay(
        params,
        profile,
        t,
        radii,
        eps=config["eps"],
        M_cap=2 * int(config["m_cap"]),
        slope_tol=config["slope_tol"],
    )
    from .operators import kernel_lattice_sum

    rows = []
    for x, u in zip(radii, ratios):
        v = kernel_lattice_sum(params, profile, t, float(x), eps=config["eps"], M_cap=int(config["m_cap"]))
        rows.append((float(u), v.real, v.imag, abs(v)))
    _write_csv(out_dir / "kernel-decay.csv", ["x_over_t", "re", "im", "modulus"], rows)
    delta = abs(doubled["fitted"].slope - report["fitted"].slope)
    return {
        "fitted": _fit_dict(report["fitted"]),
        "predicted_slope": report["predicted_slope"],
        "branch": report["branch"],
        "m_cap_doubling_delta": delta,
        "stable": bool(delta < 0.05),
        "pass": bool(report["pass"] and delta < 0.05),
    }


def _run_rate_combo(config, out_dir):
    grid = LatticeGrid(1, int(config["n_modes"]))
    rng = np.random.default_rng(config["seed"])
    f = random_spectral_field(grid, rng, band_limit=int(config["band_limit"]))
    times = np.geomspace(config["t_lo"], config["t_hi"], int(config["n_samples"]))
    N = int(config["N"]) or None
    from .extrapolation import combination_coefficients, convergence_error

    report = combination_rate_experiment(f, config["alpha"], config["beta"], config["p"], N=N)
    scheme = combination_coefficients(
        N or int(np.floor(config["beta"] / config["alpha"])) + 1
    )
    rows = [
        (float(t), convergence_error(f, config["alpha"], float(t), scheme))
        for t in times
    ]
    _write_csv(out_dir / "rate-combo.csv", ["t", "error"], rows)
    return {
        "fitted": _fit_dict(report.fit),
        "predicted_rate": report.predicted_rate,
        "degenerate": report.degenerate,
        "pass": report.passed,
    }


def _run_rate_riesz(config, out_dir):
    grid = LatticeGrid(1, int(config["n_modes"]))
    f = pure_mode(grid, (int(config["mode"]),))
    times = np.geomspace(config["t_lo"], config["t_hi"], int(config["n_samples"]))
    rows = []
    for t in times:
        diff = riesz_mean_op(f, config["k"], config["alpha"], float(t)).coefficients - f.coefficients
        rows.append((float(t), float(np.sqrt(np.sum(np.abs(diff) ** 2)))))
    _write_csv(out_dir / "rate-riesz.csv", ["t", "error"], rows)
    fit = fit_decay_exponent(rows)
    return {
        "fitted": _fit_dict(fit),
        "predicted_slope": 1.0,
        "pass": bool(abs(fit.slope - 1.0) <= config["slope_tol"]),
    }


def _run_atom_uniformity(config, out_dir):
    grid = LatticeGrid(1, int(config["n_modes"]))
    report = atom_uniformity_experiment(
        grid,
        config["p"],
        config["alpha"],
        config["beta"],
        atom_count=int(config["atom_count"]),
        seed=int(config["seed"]),
    )
    rows = list(zip((float(r) for r in report["radii"]), (float(q) for q in report["quasinorms"])))
    _write_csv(out_dir / "atom-uniformity.csv", ["radius", "quasinorm"], rows)
    return {
        "max": report["max"],
        "median": report["median"],
        "ratio": report["ratio"],
        "max_ratio": config["max_ratio"],
        "pass": bool(report["ratio"] <= config["max_ratio"]),
    }


def _run_maximal_sweep(config, out_dir):
    grid = LatticeGrid(int(config["dimension"]), int(config["n_modes"]))
    rng = np.random.default_rng(config["seed"])
    f = random_spectral_field(grid, rng, band_limit=int(config["band_limit"]))
    params = SymbolParams(config["alpha"], config["beta"])
    profile = CutoffProfile()
    time_grid = TimeGrid(
        sigma=config["sigma"],
        count=int(config["time_count"]),
        span_octaves=config["span_octaves"],
    )

    def family(t, g):
        return oscillating_op(g, params, profile, t)

    coarse = maximal_over_times(f, family, time_grid)
    fine = maximal_over_times(f, family, time_grid.refined())
    monotone = bool(np.all(fine.samples.real >= coarse.samples.real - 1e-15))
    delta = float(np.max(fine.samples.real - coarse.samples.real))
    coords = grid.coords_1d
    rows = []
    if grid.dimension == 1:
        for x, v in zip(coords, coarse.samples.real):
            rows.append((float(x), float(v)))
        _write_csv(out_dir / "maximal-sweep.csv", ["x", "maximal"], rows)
    else:
        for i, x in enumerate(coords):
            for j, y in enumerate(coords):
                rows.append((float(x), float(y), float(coarse.samples.real[i, j])))
        _write_csv(out_dir / "maximal-sweep.csv", ["x", "y", "maximal"], rows)
    return {
        "sup_maximal": float(np.max(coarse.samples.real)),
        "refinement_delta": delta,
        "monotone": monotone,
        "pass": monotone,
    }


RUNNERS = {
    "partition-check": _run_partition_check,
    "symbol-decay": _run_symbol_decay,
    "dyadic-decay": _run_dyadic_decay,
    "kernel-decay": _run_kernel_decay,
    "rate-combo": _run_rate_combo,
    "rate-riesz": _run_rate_riesz,
    "atom-uniformity": _run_atom_uniformity,
    "maximal-sweep": _run_maximal_sweep,
}


def list_experiments() -> str:
    lines = ["available experiments:"]
    for name in RUNNERS:
        lines.append(f"  {name}: {CATALOG[name]}")
        defaults = ", ".join(f"{k}={v}" for k, v in DEFAULTS[name].items())
        lines.append(f"      defaults: {defaults}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oscimax",
        description="Numerical experiments for oscillatory spectral multipliers on flat tori.",
    )
    parser.add_argument("experiment", choices=[*RUNNERS, "list"])
    parser.add_argument("--config", type=Path, default=None, help="JSON config file")
    parser.add_argument("--out", type=Path, default=None, help="output directory")
    for flag, typ in [
        ("--alpha", float),
        ("--beta", float),
        ("--p", float),
        ("--k", float),
        ("--L", int),
        ("--N", int),
        ("--t", float),
        ("--eps", float),
        ("--m-cap", int),
        ("--n-modes", int),
        ("--band-limit", int),
        ("--sigma", float),
        ("--seed", int),
        ("--mode", int),
        ("--samples", int),
        ("--n-samples", int),
        ("--tau-lo", float),
        ("--tau-hi", float),
        ("--t-lo", float),
        ("--t-hi", float),
        ("--ratio-lo", float),
        ("--ratio-hi", float),
        ("--atom-count", int),
        ("--time-count", int),
        ("--span-octaves", float),
        ("--dimension", int),
        ("--u-max", float),
        ("--slope-tol", float),
        ("--min-order", float),
        ("--max-ratio", float),
        ("--tolerance", float),
        ("--cutoff-order", int),
    ]:
        parser.add_argument(flag, type=typ, default=None)
    parser.add_argument("--cutoff-kind", choices=["smoothstep_poly", "smooth_exp"], default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.experiment == "list":
        print(list_experiments())
        return EXIT_PASS

    flag_values = {
        key: value
        for key, value in vars(args).items()
        if key not in ("experiment", "config", "out")
    }
    try:
        config = _resolve_config(args.experiment, args.config, flag_values)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    out_dir = args.out or Path(f"oscimax-out-{args.experiment}")
    out_dir.mkdir(parents=True, exist_ok=True)
    try:
        summary = RUNNERS[args.experiment](config, out_dir)
    except ConvergenceError as exc:
        print(f"numeric non-convergence: {exc}", file=sys.stderr)
        return EXIT_NON_CONVERGENCE
    except ValueError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE

    _write_summary(out_dir, args.experiment, config, summary)
    status = EXIT_PASS if summary.get("pass", False) else EXIT_CHECK_FAILURE
    print(f"{args.experiment}: {'pass' if status == EXIT_PASS else 'CHECK FAILED'} "
          f"(reports in {out_dir})")
    return status


if __name__ == "__main__":
    sys.exit(main())
