"""Command-line harness: synthesize far-field data, run reconstructions,
and validate the solver stack against its built-in oracles.

Verbs:

    cylbie direct    --config cfg.json [--set key=value ...] [-o DIR]
    cylbie invert    --config cfg.json --data f1.csv [f2.csv ...] [-o DIR]
    cylbie validate  [--n N]
    cylbie reproduce EXPERIMENT [-o DIR]

Any configuration key can be overridden from the command line with
dotted-path --set flags (values parsed as JSON, e.g. --set noise.delta1=0.05).
The output root defaults to $CYLBIE_OUTDIR or the working directory.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import os
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from .dataio import read_farfield, write_curve, write_farfield, write_summary, write_trace
from .direct import add_noise, far_field, solve_direct
from .errors import CylbieError
from .geometry import TrigPolynomial, apple_radius, circle_radius, curve_from_radial, grid_nodes, peanut_radius
from .inverse import (
    IlluminationSet,
    RegularizationConfig,
    illumination_angles,
    radial_error,
    reconstruct,
)
from .params import derive_params, with_incidence
from .validation import run_validation

DEFAULT_CONFIG = {
    "geometry": {"kind": "peanut"},
    "physics": {
        "eps0": 1.0,
        "mu0": 1.0,
        "eps1": 2.0,
        "mu1": 2.0,
        "omega": 2.5,
        "theta": math.pi / 3.0,
    },
    "illuminations": {"count": 1, "offset": 0.0},
    "noise": {"delta1": 0.0, "delta2": 0.0, "seed": 0},
    "inverse": {
        "r0": 0.6,
        "degree": 3,
        "sobolev_p": 0.0,
        "lambda0": 0.65,
        "decay": 2.0 / 3.0,
        "max_iter": 15,
        "stop_tol": 1e-4,
        "variant": "combined",
    },
    "grids": {"n_forward": 64, "n_inverse": 32, "n_obs": 64},
    "allow_inverse_crime": False,
}

EXPERIMENTS = (
    "exp1_peanut_exact",
    "exp2_peanut_noisy",
    "exp3_peanut_four",
    "exp4_apple_exact",
    "exp5_apple_multi",
)


class ConfigError(ValueError):
    pass


def _deep_merge(base, extra):
    out = copy.deepcopy(base)
    for key, value in extra.items():
        if key not in out:
            raise ConfigError(f"unknown configuration key {key!r}")
        if isinstance(value, dict) and isinstance(out[key], dict):
            merged = dict(out[key])
            merged.update(value)
            out[key] = merged
        else:
            out[key] = value
    return out


def _apply_override(config, assignment):
    key, _, raw = assignment.partition("=")
    if not raw:
        raise ConfigError(f"override {assignment!r} is not of the form key=value")
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    node = config
    parts = key.strip().split(".")
    for part in parts[:-1]:
        if part not in node or not isinstance(node[part], dict):
            raise ConfigError(f"unknown configuration section {part!r}")
        node = node[part]
    node[parts[-1]] = value


def load_config(path=None, overrides=()):
    config = copy.deepcopy(DEFAULT_CONFIG)
    if path is not None:
        try:
            loaded = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read configuration {path}: {exc}") from exc
        config = _deep_merge(config, loaded)
    for assignment in overrides:
        _apply_override(config, assignment)
    validate_config(config)
    return config


def validate_config(config):
    grids = config["grids"]
    if grids["n_forward"] < 2 * grids["n_inverse"] and not config.get("allow_inverse_crime"):
        raise ConfigError(
            "n_forward must be at least twice n_inverse so synthetic data are "
            "generated on a finer quadrature than the inversion uses; set "
            '"allow_inverse_crime": true only for controlled experiments'
        )
    if grids["n_obs"] % 2:
        raise ConfigError("n_obs must be even (equidistant grid on the unit circle)")
    if config["geometry"]["kind"] not in (None, "peanut", "apple", "circle", "trig"):
        raise ConfigError(f"unknown geometry kind {config['geometry']['kind']!r}")
    if config["illuminations"]["count"] < 1:
        raise ConfigError("need at least one illumination")


def truth_radial(geometry):
    kind = geometry["kind"]
    if kind is None:
        return None
    if kind == "peanut":
        return peanut_radius
    if kind == "apple":
        return apple_radius
    if kind == "circle":
        return circle_radius(geometry.get("radius", 1.0))
    if kind == "trig":
        return TrigPolynomial(geometry["cos_coef"], geometry.get("sin_coef"))
    raise ConfigError(f"unknown geometry kind {kind!r}")


def _params_from_config(config, phi=0.0):
    physics = config["physics"]
    return derive_params(
        physics["eps0"],
        physics["mu0"],
        physics["eps1"],
        physics["mu1"],
        omega=physics["omega"],
        theta=physics["theta"],
        phi=phi,
    )


def run_direct(config, outdir):
    """Generate far-field data files, one per illumination; returns the paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    params = _params_from_config(config)
    print(
        f"derived parameters: kappa0={params.kappa0:.12g} kappa1={params.kappa1:.12g} "
        f"beta={params.beta:.12g}"
    )
    radial = truth_radial(config["geometry"])
    if radial is None:
        raise ConfigError("direct runs need a scatterer geometry")
    n_forward = config["grids"]["n_forward"]
    curve = curve_from_radial(radial, n_forward)
    write_curve(outdir / "truth_curve.csv", curve)
    obs = grid_nodes(config["grids"]["n_obs"] // 2)
    noise = config["noise"]
    phis = illumination_angles(config["illuminations"]["count"], config["illuminations"]["offset"])
    paths = []
    for index, phi in enumerate(phis, start=1):
        params_l = with_incidence(params, phi)
        densities = solve_direct(curve, params_l)
        pattern = far_field(curve, params_l, densities, obs)
        pattern = add_noise(pattern, noise["delta1"], noise["delta2"], [noise["seed"], index])
        path = outdir / f"farfield_{index:02d}.csv"
        write_farfield(
            path,
            pattern,
            {
                "omega": params.omega,
                "theta": params.theta,
                "phi": phi,
                "delta1": noise["delta1"],
                "delta2": noise["delta2"],
                "seed": noise["seed"],
                "n": n_forward,
            },
        )
        paths.append(path)
    return paths


def _load_illuminations(config, data_files):
    patterns = []
    phis = []
    physics = config["physics"]
    for path in data_files:
        pattern, meta = read_farfield(path)
        for key in ("omega", "theta"):
            if abs(meta[key] - physics[key]) > 1e-10:
                raise ConfigError(
                    f"data file {path} was generated with {key}={meta[key]!r}, "
                    f"config requests {physics[key]!r}"
                )
        phis.append(meta["phi"])
        patterns.append(pattern)
    return IlluminationSet(params=_params_from_config(config), phis=tuple(phis), patterns=tuple(patterns))


def run_invert(config, data_files, outdir, truth=None):
    """Reconstruct the boundary from data files; writes trace, summary and figure."""
    from .plots import save_overlay

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    data = _load_illuminations(config, data_files)
    inv = config["inverse"]
    reg = RegularizationConfig(
        degree=inv["degree"],
        sobolev_p=inv["sobolev_p"],
        lambda0=inv["lambda0"],
        decay=inv["decay"],
        max_iter=inv["max_iter"],
        stop_tol=inv["stop_tol"],
    )
    n_inverse = config["grids"]["n_inverse"]
    state = reconstruct(data, reg, inv["r0"], variant=inv["variant"], n=n_inverse)

    t_plot = grid_nodes(n_inverse)
    write_trace(outdir / "trace.csv", state.records, t_plot)
    if truth is None:
        truth = truth_radial(config["geometry"])
    summary = {
        "config": config,
        "iterations": len(state.records),
        "converged": state.converged,
        "lambda_schedule": [rec.lambda_k for rec in state.records],
        "misfit_history": [rec.misfit for rec in state.records],
        "update_norms": [rec.update_norm for rec in state.records],
        "final_coefficients": state.final_radial.coefficient_vector().tolist(),
    }
    if truth is not None:
        l2, sup = radial_error(state.final_radial, truth)
        summary["errors"] = {"radial_l2_rel": l2, "radial_sup": sup}
    write_summary(outdir / "summary.json", summary)
    save_overlay(
        outdir / "reconstruction.svg",
        state.final_radial,
        initial_radial=TrigPolynomial.constant(inv["r0"]) if np.isscalar(inv["r0"]) else inv["r0"],
        truth_radial=truth,
        illum_angles=data.phis,
    )
    return summary


def experiment_config(name):
    if name not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}")
    text = resources.files("cylbie.configs").joinpath(f"{name}.json").read_text()
    config = _deep_merge(DEFAULT_CONFIG, json.loads(text))
    validate_config(config)
    return config


def run_reproduce(name, outdir):
    config = experiment_config(name)
    outdir = Path(outdir) / name
    data_files = run_direct(config, outdir)
    summary = run_invert(config, data_files, outdir)
    if "errors" in summary:
        print(
            f"{name}: {summary['iterations']} iterations, relative L2 radial error "
            f"{summary['errors']['radial_l2_rel']:.4f}"
        )
    return summary


def _output_root(argument):
    if argument:
        return Path(argument)
    return Path(os.environ.get("CYLBIE_OUTDIR", "."))


def main(argv=None):
    parser = argparse.ArgumentParser(prog="cylbie", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_direct = sub.add_parser("direct", help="solve the direct problem and write far-field data")
    p_direct.add_argument("--config", help="JSON configuration file")
    p_direct.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    p_direct.add_argument("-o", "--outdir", default=None)

    p_invert = sub.add_parser("invert", help="reconstruct the boundary from far-field data")
    p_invert.add_argument("--config", help="JSON configuration file")
    p_invert.add_argument("--data", nargs="+", required=True, help="far-field CSV files")
    p_invert.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    p_invert.add_argument("-o", "--outdir", default=None)

    p_validate = sub.add_parser("validate", help="run the oracle and invariant checks")
    p_validate.add_argument("--n", type=int, default=64, help="grid half-size for the checks")

    p_repro = sub.add_parser("reproduce", help="rerun a committed experiment end to end")
    p_repro.add_argument("experiment", choices=EXPERIMENTS)
    p_repro.add_argument("-o", "--outdir", default=None)

    args = parser.parse_args(argv)
    try:
        if args.command == "direct":
            config = load_config(args.config, args.overrides)
            paths = run_direct(config, _output_root(args.outdir))
            for path in paths:
                print(f"wrote {path}")
        elif args.command == "invert":
            config = load_config(args.config, args.overrides)
            summary = run_invert(config, args.data, _output_root(args.outdir))
            print(f"finished after {summary['iterations']} iterations")
            if "errors" in summary:
                print(f"relative L2 radial error {summary['errors']['radial_l2_rel']:.4f}")
        elif args.command == "validate":
            results = run_validation(n=args.n)
            width = max(len(r.name) for r in results)
            failed = False
            for result in results:
                status = "PASS" if result.passed else "FAIL"
                print(f"{result.name.ljust(width)}  {status}  {result.detail}")
                failed = failed or not result.passed
            return 1 if failed else 0
        elif args.command == "reproduce":
            run_reproduce(args.experiment, _output_root(args.outdir))
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except CylbieError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
