"""Command-line front end.

Subcommands
-----------
``steady-state``
    Solve one parameter set and report the covariance, symplectic spectrum,
    stability margin and the steering/entanglement criteria for every mode
    pair, as JSON.
``stability``
    Report the stability verdict and spectral margin only (exit code stays 0
    even for unstable parameters; use ``steady-state`` to make instability
    fatal).
``sweep``
    Evaluate quantities over a one-dimensional parameter grid and emit CSV
    (default) or JSON; ``--plot`` additionally renders the curves to PNG.
``figure <id>``
    Reproduce one of the predefined summary figures as CSV plus a rendered
    PNG (``--no-plot`` for data only).
``validate``
    Cross-check the trajectory estimator against the Lyapunov solution and
    report entrywise z-scores.

Exit codes: 0 success; 2 invalid input; 3 unstable model where stability is
required; 4 numerical failure (including a failed ``validate`` run).

Parameters may come from flags or from a JSON config document
(``--config``); flags take precedence.  All rates are interpreted in units
of a reference rate; ``--gamma-ref`` rescales them to physical units.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .criteria import duan_simon, reid_steering
from .errors import NumericalError, StabilityError, ValidationError
from .langevin import SimulationConfig, simulate, zscores
from .lyapunov import steady_state
from .model import SystemParams, stability
from .sweeps import (
    FIGURE_IDS,
    MODEL_BUILDERS,
    SweepSpec,
    reproduce_figure,
    run_sweep,
    sweep_metadata,
    write_csv,
)

_PARAM_KEYS = ("kappa", "gamma_m", "gamma_a", "g_m", "g_a", "n", "n0", "omega_m")
_CONFIG_KEYS = _PARAM_KEYS + ("model", "gamma_ref", "sweep", "simulation")
_SWEEP_KEYS = ("parameter", "start", "stop", "count", "spacing", "outputs")
_SIMULATION_KEYS = ("dt", "burn_in", "sample_duration", "n_trajectories", "seed")

_DEFAULT_MODEL = "full_rwa"

#: minimum ratio of the eliminated fast rate to every retained rate before
#: the reduced models stop being a good approximation of the full dynamics
_REGIME_RATIO = 10.0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ValidationError as exc:
        _emit_error("validation", exc)
        return 2
    except StabilityError as exc:
        _emit_error("instability", exc)
        return 3
    except NumericalError as exc:
        _emit_error("numerical", exc)
        return 4


def _emit_error(kind: str, exc: Exception) -> None:
    payload = {"error": kind, "message": str(exc)}
    if isinstance(exc, StabilityError) and exc.max_real_eigenvalue is not None:
        payload["max_real_eigenvalue"] = exc.max_real_eigenvalue
    print(json.dumps(payload), file=sys.stderr)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="steerkit",
        description="Steady states, steering and entanglement of damped coupled bosonic modes.",
    )
    parser.add_argument("--version", action="version", version=f"steerkit {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=sorted(MODEL_BUILDERS), help="model kind")
    common.add_argument("--config", type=Path, help="JSON config document (flags override it)")
    common.add_argument("--gamma-ref", type=float, dest="gamma_ref",
                        help="reference rate all rate inputs are multiplied by (default 1)")
    for key in _PARAM_KEYS:
        common.add_argument(f"--{key.replace('_', '-')}", type=float, dest=key,
                            help=f"system parameter {key}")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("steady-state", parents=[common],
                       help="solve one parameter set and report all criteria (JSON)")
    p.add_argument("--out", type=Path, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="json")
    p.set_defaults(handler=_cmd_steady_state)

    p = sub.add_parser("stability", parents=[common],
                       help="report the stability verdict and margin (JSON)")
    p.add_argument("--out", type=Path, help="output path (default stdout)")
    p.set_defaults(handler=_cmd_stability)

    p = sub.add_parser("sweep", parents=[common],
                       help="evaluate quantities over a one-dimensional parameter grid")
    p.add_argument("--sweep", dest="sweep", metavar="PARAM",
                   help="swept parameter (SystemParams field or C_a/G/G_a)")
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--count", type=int)
    p.add_argument("--log", action="store_true", help="logarithmic grid spacing")
    p.add_argument("--outputs", help="comma-separated quantity names (default per model)")
    p.add_argument("--out", type=Path, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--plot", action="store_true",
                   help="also render the Lyapunov-route curves to PNG (requires --out)")
    p.set_defaults(handler=_cmd_sweep)

    p = sub.add_parser("figure", parents=[common],
                       help="reproduce a predefined summary figure (CSV + PNG)")
    p.add_argument("figure_id", metavar="id", help=f"one of: {', '.join(FIGURE_IDS)}")
    p.add_argument("--out-dir", type=Path, default=Path("."), dest="out_dir")
    p.add_argument("--no-plot", action="store_true", help="write the CSV only")
    p.set_defaults(handler=_cmd_figure)

    p = sub.add_parser("validate", parents=[common],
                       help="cross-check trajectory statistics against the Lyapunov solution")
    p.add_argument("--dt", type=float, help="integration step")
    p.add_argument("--burn-in", type=float, dest="burn_in", help="discarded initial duration")
    p.add_argument("--sample-duration", type=float, dest="sample_duration",
                   help="sampling window per trajectory")
    p.add_argument("--trajectories", type=int, help="ensemble size")
    p.add_argument("--seed", type=int, help="ensemble seed")
    p.add_argument("--out", type=Path, help="output path (default stdout)")
    p.set_defaults(handler=_cmd_validate)

    return parser


# ---------------------------------------------------------------------------
# configuration plumbing
# ---------------------------------------------------------------------------


def _load_config(path: Path | None) -> dict:
    if path is None:
        return {}
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    try:
        config = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise ValidationError(f"config {path} must hold a JSON object at the top level")
    for key in config:
        if key not in _CONFIG_KEYS:
            raise ValidationError(
                f"unknown config key {key!r}; expected one of {', '.join(_CONFIG_KEYS)}"
            )
    for section, keys in (("sweep", _SWEEP_KEYS), ("simulation", _SIMULATION_KEYS)):
        if section in config:
            if not isinstance(config[section], dict):
                raise ValidationError(f"config section {section!r} must be an object")
            for key in config[section]:
                if key not in keys:
                    raise ValidationError(
                        f"unknown config key {section}.{key}; expected one of {', '.join(keys)}"
                    )
    return config


def _resolve_params(args, config: dict) -> SystemParams:
    values: dict = {key: None for key in _PARAM_KEYS}
    for key in _PARAM_KEYS:
        if key in config:
            values[key] = config[key]
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    gamma_ref = args.gamma_ref if args.gamma_ref is not None else config.get("gamma_ref", 1.0)
    try:
        gamma_ref = float(gamma_ref)
    except (TypeError, ValueError):
        raise ValidationError(f"gamma_ref must be a real number (got {gamma_ref!r})") from None
    if not math.isfinite(gamma_ref) or gamma_ref <= 0:
        raise ValidationError(f"gamma_ref must be a positive rate (got {gamma_ref!r})")
    defaults = SystemParams()
    resolved = {key: values[key] if values[key] is not None else getattr(defaults, key)
                for key in _PARAM_KEYS}
    params = SystemParams(**resolved)
    if gamma_ref != 1.0:
        scaled = {key: getattr(params, key) * gamma_ref
                  for key in ("kappa", "gamma_m", "gamma_a", "g_m", "g_a")}
        if params.omega_m is not None:
            scaled["omega_m"] = params.omega_m * gamma_ref
        params = params.with_updates(**scaled)
    return params


def _resolve_model_kind(args, config: dict) -> str:
    kind = args.model or config.get("model") or _DEFAULT_MODEL
    if kind not in MODEL_BUILDERS:
        raise ValidationError(f"unknown model kind {kind!r}; expected one of {sorted(MODEL_BUILDERS)}")
    return kind


def _warn_regime(model_kind: str, params: SystemParams) -> None:
    """Warn when the eliminated rate is not clearly the fastest one."""
    if model_kind == "reduced_a":
        fast_name, fast = "gamma_a", params.gamma_a
        others = {"kappa": params.kappa, "gamma_m": params.gamma_m,
                  "g_m": params.g_m, "g_a": params.g_a}
    elif model_kind == "reduced_b":
        fast_name, fast = "kappa", params.kappa
        others = {"gamma_m": params.gamma_m, "gamma_a": params.gamma_a,
                  "g_m": params.g_m, "g_a": params.g_a}
    else:
        return
    largest_name = max(others, key=others.get)
    if fast < _REGIME_RATIO * others[largest_name]:
        print(
            f"warning: {model_kind} assumes {fast_name} is the fastest rate, but "
            f"{fast_name} = {fast:g} is less than {_REGIME_RATIO:g} x "
            f"{largest_name} = {others[largest_name]:g}; the reduced model may "
            "be inaccurate here",
            file=sys.stderr,
        )


def _json_default(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"not JSON serializable: {type(value)!r}")


def _write_document(out: Path | None, text: str) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")


def _sanitize(value):
    """Replace non-finite numbers with null so the output is strict JSON."""
    if isinstance(value, dict):
        return {key: _sanitize(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_sanitize(item) for item in value]
    if isinstance(value, np.ndarray):
        return _sanitize(value.tolist())
    if isinstance(value, (np.floating, np.integer)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def _dump_json(out: Path | None, payload: dict) -> None:
    _write_document(out, json.dumps(_sanitize(payload), indent=2, default=_json_default))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _pair_report(cov, mode_i: str, mode_j: str) -> dict:
    steer = reid_steering(cov, mode_i, mode_j)
    ent = duan_simon(cov, mode_i, mode_j)
    return {
        "modes": [mode_i, mode_j],
        "steering": {
            "E_ij": steer.E_ij,
            "E_ji": steer.E_ji,
            "gains_ij": list(steer.gains_ij),
            "gains_ji": list(steer.gains_ji),
            "pairing_ij": list(steer.pairing_ij),
            "pairing_ji": list(steer.pairing_ji),
            "steers_ij": steer.steers_ij,
            "steers_ji": steer.steers_ji,
            "classification": steer.classification,
        },
        "entanglement": {
            "duan_simon": ent.duan_simon,
            "h_opt": ent.h_opt,
            "pairing": ent.pairing,
            "lambda": ent.lam,
            "log_negativity": ent.log_negativity,
            "entangled": ent.entangled,
        },
    }


def _cmd_steady_state(args) -> int:
    if args.format != "json":
        raise ValidationError("steady-state reports are JSON only (use sweep for CSV)")
    config = _load_config(args.config)
    params = _resolve_params(args, config)
    kind = _resolve_model_kind(args, config)
    _warn_regime(kind, params)
    model = MODEL_BUILDERS[kind](params)
    verdict = stability(model)
    cov = steady_state(model)
    labels = model.mode_labels
    pairs = [
        _pair_report(cov, labels[i], labels[j])
        for i in range(len(labels))
        for j in range(i + 1, len(labels))
    ]
    payload = {
        "tool": {"name": "steerkit", "version": __version__},
        "model": kind,
        "parameters": params.rates(),
        "stability": {
            "stable": verdict.stable,
            "max_real_eigenvalue": verdict.max_real_eigenvalue,
            "margin": verdict.margin,
        },
        "mode_labels": list(labels),
        "covariance": cov.values,
        "symplectic_eigenvalues": cov.symplectic_eigenvalues(),
        "physical": cov.is_physical(),
        "pairs": pairs,
    }
    _dump_json(args.out, payload)
    return 0


def _cmd_stability(args) -> int:
    config = _load_config(args.config)
    params = _resolve_params(args, config)
    kind = _resolve_model_kind(args, config)
    model = MODEL_BUILDERS[kind](params)
    verdict = stability(model)
    payload = {
        "tool": {"name": "steerkit", "version": __version__},
        "model": kind,
        "parameters": params.rates(),
        "stable": verdict.stable,
        "max_real_eigenvalue": verdict.max_real_eigenvalue,
        "margin": verdict.margin,
    }
    _dump_json(args.out, payload)
    return 0


def _cmd_sweep(args) -> int:
    config = _load_config(args.config)
    params = _resolve_params(args, config)
    kind = _resolve_model_kind(args, config)
    section = config.get("sweep", {})

    def pick(flag_value, key, kind_fn):
        value = flag_value if flag_value is not None else section.get(key)
        if value is None:
            raise ValidationError(f"sweep needs {key} (flag or config 'sweep.{key}')")
        try:
            return kind_fn(value)
        except (TypeError, ValueError):
            raise ValidationError(f"sweep {key} must be a number (got {value!r})") from None

    parameter = args.sweep if args.sweep is not None else section.get("parameter")
    if parameter is None:
        raise ValidationError("sweep needs a parameter name (--sweep or config 'sweep.parameter')")
    spacing = "log" if (args.log or section.get("spacing") == "log") else "linear"
    if args.outputs is not None:
        outputs = tuple(name.strip() for name in args.outputs.split(",") if name.strip())
    else:
        outputs = tuple(section.get("outputs", ()))
    spec = SweepSpec(
        model_kind=kind,
        swept_parameter=str(parameter),
        start=pick(args.start, "start", float),
        stop=pick(args.stop, "stop", float),
        count=pick(args.count, "count", int),
        fixed=params,
        outputs=outputs,
        spacing=spacing,
    )
    if args.plot and args.out is None:
        raise ValidationError("--plot requires --out (the PNG is written next to the CSV)")
    _warn_regime(kind, params)
    result = run_sweep(spec)

    if args.format == "json":
        payload = {
            "tool": {"name": "steerkit", "version": __version__},
            "model": kind,
            "sweep": {
                "parameter": spec.swept_parameter,
                "start": spec.start,
                "stop": spec.stop,
                "count": spec.count,
                "spacing": spec.spacing,
            },
            "fixed_parameters": spec.fixed.rates(),
            "columns": list(result.columns),
            "rows": [dict(row) for row in result.rows],
        }
        _dump_json(args.out, payload)
    else:
        metadata = sweep_metadata(spec, __version__)
        if args.out is None:
            write_csv(sys.stdout, result.columns, result.rows, metadata)
        else:
            write_csv(args.out, result.columns, result.rows, metadata)
            print(f"wrote {args.out}", file=sys.stderr)
    if args.plot:
        from .plotting import render_sweep

        png = Path(args.out).with_suffix(".png")
        render_sweep(result, png)
        print(f"wrote {png}", file=sys.stderr)
    return 0


def _cmd_figure(args) -> int:
    overrides = [key for key in _PARAM_KEYS if getattr(args, key) is not None]
    if args.config is not None or args.model is not None or args.gamma_ref is not None or overrides:
        raise ValidationError(
            "figure grids are predefined; parameter/model flags and --config are "
            "not accepted (use the sweep command for custom grids)"
        )
    written = reproduce_figure(args.figure_id, out_dir=args.out_dir, render=not args.no_plot)
    for path in written:
        print(path)
    return 0


def _cmd_validate(args) -> int:
    config = _load_config(args.config)
    params = _resolve_params(args, config)
    kind = _resolve_model_kind(args, config)
    section = config.get("simulation", {})
    defaults = SimulationConfig()

    def pick(flag_value, key, cast):
        if flag_value is not None:
            return cast(flag_value)
        if key in section:
            return cast(section[key])
        return getattr(defaults, key)

    sim = SimulationConfig(
        dt=pick(args.dt, "dt", float),
        burn_in=pick(args.burn_in, "burn_in", float),
        sample_duration=pick(args.sample_duration, "sample_duration", float),
        n_trajectories=pick(args.trajectories, "n_trajectories", int),
        seed=pick(args.seed, "seed", int),
    )
    _warn_regime(kind, params)
    model = MODEL_BUILDERS[kind](params)
    reference = steady_state(model)
    estimate = simulate(model, sim)
    z = zscores(estimate, reference)
    finite = np.isfinite(z)
    max_abs_z = float(np.max(np.abs(z[finite]))) if finite.any() else math.inf
    insufficient = not bool(finite.all())
    passed = bool(finite.all() and max_abs_z <= 4.0)
    payload = {
        "tool": {"name": "steerkit", "version": __version__},
        "model": kind,
        "parameters": params.rates(),
        "simulation": {
            "dt": sim.dt,
            "burn_in": sim.burn_in,
            "sample_duration": sim.sample_duration,
            "n_trajectories": sim.n_trajectories,
            "seed": sim.seed,
        },
        "scheme": estimate.scheme,
        "effective_samples": estimate.effective_samples,
        "max_abs_z": max_abs_z,
        "threshold": 4.0,
        "insufficient_statistics": insufficient,
        "passed": passed,
        "warnings": list(estimate.warnings),
        "zscores": z,
        "estimate": estimate.covariance.values,
        "reference": reference.values,
        "standard_errors": estimate.standard_errors,
    }
    _dump_json(args.out, payload)
    return 0 if passed else 4


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
