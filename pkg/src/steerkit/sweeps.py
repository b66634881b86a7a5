"""Parameter sweeps, figure-reproduction grids and delimited output.

A sweep evaluates a set of scalar quantities over a one-dimensional
parameter grid, on two routes wherever both exist:

* the *Lyapunov route*: build the model, solve for the steady covariance,
  apply the criteria;
* the *analytic route*: assemble the covariance from the closed-form
  moments (available for the reduced models when their rate-matching
  preconditions hold) and apply the same criteria.

Each output column appears as ``<name>_lyap``, ``<name>_analytic`` and
``<name>_absdiff``; cells are empty where a route is undefined.  Unstable
grid points carry ``stable = false`` and empty quantity cells.  Rows are
always emitted in grid order.

The module also holds the catalogue of predefined figure grids
(:data:`FIGURE_IDS`), each a documented parameter set swept exactly as in
the corresponding summary plot of this package's validation study.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from . import analytic
from .criteria import duan_simon, reid_steering
from .errors import StabilityError, UnsupportedParametersError, ValidationError
from .lyapunov import CovarianceMatrix, steady_state
from .model import (
    SystemParams,
    build_full_rwa,
    build_reduced_a,
    build_reduced_b,
    stability,
)

__all__ = [
    "SweepSpec",
    "SweepResult",
    "FigureSpec",
    "FigureSeries",
    "FIGURE_IDS",
    "MODEL_BUILDERS",
    "PRIMARY_PAIRS",
    "apply_parameter",
    "default_outputs",
    "run_sweep",
    "figure_spec",
    "reproduce_figure",
    "write_csv",
    "format_cell",
]

MODEL_BUILDERS = {
    "full_rwa": build_full_rwa,
    "reduced_a": build_reduced_a,
    "reduced_b": build_reduced_b,
}

#: mode pair the criteria are evaluated on, per model kind
PRIMARY_PAIRS = {
    "full_rwa": ("a", "b"),
    "reduced_a": ("a", "b"),
    "reduced_b": ("b", "c"),
}

_PARAM_FIELDS = tuple(f.name for f in fields(SystemParams))
_DERIVED_PARAMETERS = ("C_a", "G", "G_a")

#: fast eliminated rate used by the predefined figure grids, far enough
#: above every other rate that the reduced description is uncontroversial
_FIGURE_FAST_RATE = 1e4


def apply_parameter(params: SystemParams, name: str, value: float) -> SystemParams:
    """Return ``params`` with one direct or derived parameter set.

    Derived rates are resolved against the fixed parameters: ``C_a`` sets
    ``g_a = sqrt(C_a * gamma_a)`` at fixed ``gamma_a``, while ``G`` and
    ``G_a`` set ``g_m``/``g_a`` at fixed ``kappa``.
    """
    value = float(value)
    if name in _PARAM_FIELDS:
        return params.with_updates(**{name: value})
    if name in _DERIVED_PARAMETERS:
        if value < 0.0:
            raise ValidationError(f"{name} must be nonnegative (got {value!r})")
        if name == "C_a":
            return params.with_updates(g_a=math.sqrt(value * params.gamma_a))
        if name == "G":
            return params.with_updates(g_m=math.sqrt(value * params.kappa))
        return params.with_updates(g_a=math.sqrt(value * params.kappa))
    raise ValidationError(
        f"unknown sweep parameter {name!r}; expected one of "
        f"{', '.join(_PARAM_FIELDS + _DERIVED_PARAMETERS)}"
    )


def default_outputs(model_kind: str) -> tuple[str, ...]:
    """Reasonable output set for each model kind."""
    if model_kind == "reduced_b":
        return ("var_Xb", "var_Xc", "corr", "E_cb", "E_bc", "duan_simon", "log_negativity", "stability_margin")
    outputs = ("var_Xa", "var_Xb", "corr", "E_ab", "E_ba", "duan_simon", "log_negativity", "stability_margin")
    if model_kind == "full_rwa":
        outputs = outputs + ("var_Xc",)
    return outputs


_MODEL_LABELS = {"full_rwa": ("a", "b", "c"), "reduced_a": ("a", "b"), "reduced_b": ("b", "c")}


def _validate_output(name: str, model_kind: str) -> None:
    labels = _MODEL_LABELS[model_kind]
    if name in ("corr", "duan_simon", "h_opt", "lambda", "log_negativity", "stability_margin"):
        return
    if name in ("steer_threshold", "ent_threshold"):
        if PRIMARY_PAIRS[model_kind] != ("a", "b"):
            raise ValidationError(f"output {name!r} is defined for the cavity--mirror pair only")
        return
    if name.startswith("var_") and len(name) == 6 and name[4] in "XP" and name[5] in labels:
        return
    if name.startswith("E_") and len(name) == 4 and name[2] in labels and name[3] in labels and name[2] != name[3]:
        return
    raise ValidationError(f"unknown output quantity {name!r} for model {model_kind!r}")


@dataclass(frozen=True)
class SweepSpec:
    """One-dimensional grid specification.

    ``swept_parameter`` may be any :class:`SystemParams` field or one of the
    derived rates ``C_a``, ``G``, ``G_a``; ``fixed`` supplies every other
    parameter.
    """

    model_kind: str
    swept_parameter: str
    start: float
    stop: float
    count: int
    fixed: SystemParams
    outputs: tuple[str, ...] = ()
    spacing: str = "linear"

    def __post_init__(self):
        if self.model_kind not in MODEL_BUILDERS:
            raise ValidationError(
                f"unknown model kind {self.model_kind!r}; expected one of {sorted(MODEL_BUILDERS)}"
            )
        if self.spacing not in ("linear", "log"):
            raise ValidationError(f"spacing must be 'linear' or 'log' (got {self.spacing!r})")
        if self.count < 2:
            raise ValidationError(f"count must be at least 2 (got {self.count!r})")
        if not (math.isfinite(self.start) and math.isfinite(self.stop) and self.start < self.stop):
            raise ValidationError(f"need finite start < stop (got {self.start!r}, {self.stop!r})")
        if self.spacing == "log" and self.start <= 0:
            raise ValidationError("log spacing requires start > 0")
        # fail fast on typos before any solve runs
        apply_parameter(self.fixed, self.swept_parameter, self.stop)
        outputs = tuple(self.outputs) or default_outputs(self.model_kind)
        for name in outputs:
            _validate_output(name, self.model_kind)
        object.__setattr__(self, "outputs", outputs)

    def grid(self) -> np.ndarray:
        if self.spacing == "log":
            return np.logspace(math.log10(self.start), math.log10(self.stop), self.count)
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepResult:
    """Rows (grid order) and column order of an executed sweep."""

    spec: SweepSpec
    columns: tuple[str, ...]
    rows: tuple[dict, ...]

    def column(self, name: str) -> list:
        return [row[name] for row in self.rows]


def _dominant_correlation(cov: CovarianceMatrix, mode_i: str, mode_j: str) -> float:
    """Magnitude of the strongest cross moment between two modes."""
    return max(
        abs(cov.moment(mode_i, qi, mode_j, qj)) for qi in ("X", "P") for qj in ("X", "P")
    )


def _point_quantities(
    cov: CovarianceMatrix,
    pair: tuple[str, str],
    outputs: tuple[str, ...],
    margin: float | None,
) -> dict[str, float | None]:
    """Evaluate requested quantities on one covariance (reports cached)."""
    steering_cache: dict[tuple[str, str], object] = {}
    entanglement_report = None
    values: dict[str, float | None] = {}
    for name in outputs:
        if name.startswith("var_"):
            values[name] = cov.variance(name[5], name[4])
        elif name == "corr":
            values[name] = _dominant_correlation(cov, *pair)
        elif name.startswith("E_"):
            key = (name[2], name[3])
            if key not in steering_cache:
                report = reid_steering(cov, *key)
                steering_cache[key] = report
                steering_cache[key[::-1]] = report
            report = steering_cache[key]
            values[name] = report.E_ij if (report.mode_i, report.mode_j) == key else report.E_ji
        elif name in ("duan_simon", "h_opt", "lambda", "log_negativity"):
            if entanglement_report is None:
                entanglement_report = duan_simon(cov, *pair)
            values[name] = {
                "duan_simon": entanglement_report.duan_simon,
                "h_opt": entanglement_report.h_opt,
                "lambda": entanglement_report.lam,
                "log_negativity": entanglement_report.log_negativity,
            }[name]
        elif name in ("steer_threshold", "ent_threshold"):
            var_xa = cov.variance("a", "X")
            var_pb = cov.variance("b", "P")
            excess_a = max(var_xa - 0.5, 0.0)
            if name == "steer_threshold":
                values[name] = math.sqrt(var_pb * excess_a)
            else:
                values[name] = math.sqrt(max(var_pb - 0.5, 0.0) * excess_a)
        elif name == "stability_margin":
            values[name] = margin
        else:  # pragma: no cover - blocked by _validate_output
            raise ValidationError(f"unknown output quantity {name!r}")
    return values


def _analytic_covariance(model_kind: str, params: SystemParams) -> CovarianceMatrix | None:
    """Closed-form covariance where the reduced-model preconditions hold."""
    try:
        if model_kind == "reduced_a":
            return analytic.case1_covariance(params)
        if model_kind == "reduced_b":
            return analytic.case2_covariance(params)
    except (UnsupportedParametersError, StabilityError):
        return None
    return None


def run_sweep(spec: SweepSpec) -> SweepResult:
    """Execute a sweep; rows come back in grid order.

    Grid points are independent of each other (they could be evaluated in
    any order or in parallel); this implementation is serial.
    """
    builder = MODEL_BUILDERS[spec.model_kind]
    pair = PRIMARY_PAIRS[spec.model_kind]
    columns = [spec.swept_parameter, "stable"]
    for name in spec.outputs:
        columns += [f"{name}_lyap", f"{name}_analytic", f"{name}_absdiff"]
    rows = []
    for value in spec.grid():
        params = apply_parameter(spec.fixed, spec.swept_parameter, value)
        model = builder(params)
        stab = stability(model)
        row: dict = {spec.swept_parameter: float(value), "stable": stab.stable}
        numeric: dict[str, float | None] = {}
        closed: dict[str, float | None] = {}
        if stab.stable:
            cov = steady_state(model)
            numeric = _point_quantities(cov, pair, spec.outputs, margin=stab.margin)
            analytic_cov = _analytic_covariance(spec.model_kind, params)
            if analytic_cov is not None:
                closed = _point_quantities(analytic_cov, pair, spec.outputs, margin=None)
        for name in spec.outputs:
            lyap = numeric.get(name)
            ana = closed.get(name)
            row[f"{name}_lyap"] = lyap
            row[f"{name}_analytic"] = ana
            row[f"{name}_absdiff"] = abs(lyap - ana) if lyap is not None and ana is not None else None
        rows.append(row)
    return SweepResult(spec=spec, columns=tuple(columns), rows=tuple(rows))


# ---------------------------------------------------------------------------
# figure catalogue
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FigureSeries:
    """One curve of a figure: a label plus the fixed parameters."""

    label: str
    fixed: SystemParams


@dataclass(frozen=True)
class FigureSpec:
    """A documented multi-series sweep reproducing one summary figure."""

    figure_id: str
    description: str
    model_kind: str
    swept_parameter: str
    start: float
    stop: float
    count: int
    series: tuple[FigureSeries, ...]
    outputs: tuple[str, ...]
    reference_level: float | None = None

    def sweep_for(self, series: FigureSeries) -> SweepSpec:
        return SweepSpec(
            model_kind=self.model_kind,
            swept_parameter=self.swept_parameter,
            start=self.start,
            stop=self.stop,
            count=self.count,
            fixed=series.fixed,
            outputs=self.outputs,
        )


def _figure_catalogue() -> dict[str, FigureSpec]:
    grid_points = 200
    mirror_base = SystemParams(kappa=1.0, gamma_m=1.0, gamma_a=_FIGURE_FAST_RATE)
    atom_base = SystemParams(kappa=_FIGURE_FAST_RATE, gamma_m=1.0, gamma_a=1.0)

    def mirror_series(label: str, **changes) -> FigureSeries:
        return FigureSeries(label, mirror_base.with_updates(**changes))

    def atom_series(label: str, big_g: float, **changes) -> FigureSeries:
        g_m = math.sqrt(big_g * atom_base.kappa)
        return FigureSeries(label, atom_base.with_updates(g_m=g_m, **changes))

    coupling_sweep = dict(
        model_kind="reduced_a", swept_parameter="C_a", start=0.0, stop=10.0, count=grid_points
    )
    atom_sweep = dict(
        model_kind="reduced_b", swept_parameter="G_a", start=0.0, stop=10.0, count=grid_points
    )

    catalogue = {
        "2a_a": FigureSpec(
            figure_id="2a_a",
            description=(
                "cavity--mirror correlation versus the steering and entanglement "
                "thresholds, swept over the coupling g_m at C_a = 0 (the "
                "correlation sits exactly on the steering threshold)"
            ),
            model_kind="reduced_a",
            swept_parameter="g_m",
            start=0.95 / grid_points,
            stop=0.95,
            count=grid_points,
            series=(mirror_series("C_a=0"),),
            outputs=("corr", "steer_threshold", "ent_threshold"),
        ),
        "2a_b": FigureSpec(
            figure_id="2a_b",
            description=(
                "cavity--mirror correlation versus both thresholds, swept over "
                "C_a at g_m = gamma/2"
            ),
            series=(mirror_series("g_m=0.5", g_m=0.5),),
            outputs=("corr", "steer_threshold", "ent_threshold"),
            **coupling_sweep,
        ),
        "2_a": FigureSpec(
            figure_id="2_a",
            description="steering of the cavity by the mirror versus C_a for three couplings",
            series=tuple(mirror_series(f"g_m={g}", g_m=g) for g in (0.25, 0.5, 1.0)),
            outputs=("E_ab",),
            reference_level=0.5,
            **coupling_sweep,
        ),
        "2_b": FigureSpec(
            figure_id="2_b",
            description=(
                "steering of the cavity by the mirror versus C_a at g_m = gamma "
                "for three mechanical bath occupations"
            ),
            series=tuple(mirror_series(f"n0={n0}", g_m=1.0, n0=n0) for n0 in (0.0, 1.0, 1.5)),
            outputs=("E_ab",),
            reference_level=0.5,
            **coupling_sweep,
        ),
        "3_a": FigureSpec(
            figure_id="3_a",
            description="optimized joint-variance entanglement versus C_a for three couplings",
            series=tuple(mirror_series(f"g_m={g}", g_m=g) for g in (0.25, 0.5, 1.0)),
            outputs=("duan_simon",),
            reference_level=1.0,
            **coupling_sweep,
        ),
        "3_b": FigureSpec(
            figure_id="3_b",
            description=(
                "optimized joint-variance entanglement versus C_a at g_m = gamma "
                "for three mechanical bath occupations"
            ),
            series=tuple(mirror_series(f"n0={n0}", g_m=1.0, n0=n0) for n0 in (0.0, 1.0, 1.5)),
            outputs=("duan_simon",),
            reference_level=1.0,
            **coupling_sweep,
        ),
        "4": FigureSpec(
            figure_id="4",
            description="mirror--atom steering both ways versus G_a for weak mirror drives",
            series=tuple(atom_series(f"G={g}", g) for g in (0.25, 0.5, 1.0)),
            outputs=("E_cb", "E_bc"),
            reference_level=0.5,
            **atom_sweep,
        ),
        "5": FigureSpec(
            figure_id="5",
            description=(
                "mirror--atom steering both ways versus G_a for strong mirror "
                "drives (two-way steering appears once G_a is large enough)"
            ),
            model_kind="reduced_b",
            swept_parameter="G_a",
            start=0.0,
            stop=40.0,
            count=grid_points,
            series=tuple(atom_series(f"G={g}", g) for g in (5.0, 10.0, 25.0)),
            outputs=("E_cb", "E_bc"),
            reference_level=0.5,
        ),
        "6": FigureSpec(
            figure_id="6",
            description=(
                "mirror--atom steering both ways versus G_a at G = gamma for "
                "three bath-occupation splits"
            ),
            model_kind="reduced_b",
            swept_parameter="G_a",
            start=0.05,
            stop=10.0,
            count=grid_points,
            series=tuple(
                atom_series(f"n={n},n0={n0}", 1.0, n=n, n0=n0)
                for n, n0 in ((0.0, 0.0), (0.0, 1.0), (1.0, 0.0))
            ),
            outputs=("E_cb", "E_bc"),
            reference_level=0.5,
        ),
    }
    return catalogue


FIGURE_IDS = tuple(_figure_catalogue())


def figure_spec(figure_id: str) -> FigureSpec:
    """Look up a predefined figure grid by identifier."""
    catalogue = _figure_catalogue()
    if figure_id not in catalogue:
        raise ValidationError(
            f"unknown figure id {figure_id!r}; known ids: {', '.join(FIGURE_IDS)}"
        )
    return catalogue[figure_id]


# ---------------------------------------------------------------------------
# delimited output
# ---------------------------------------------------------------------------


def format_cell(value) -> str:
    """Cell formatting: 12 significant digits, lowercase booleans, empty
    strings for undefined values."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float, np.floating, np.integer)):
        return format(float(value), ".12g")
    return str(value)


def write_csv(target, columns, rows, metadata=()) -> None:
    """Write rows as UTF-8, LF-terminated CSV with a ``#`` metadata block.

    ``target`` may be a path or an open text handle; ``rows`` are dicts
    keyed by column name.
    """

    def _write(handle):
        for line in metadata:
            handle.write(f"# {line}\n")
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([format_cell(row.get(name)) for name in columns])

    if isinstance(target, (str, Path)):
        with open(target, "w", encoding="utf-8", newline="") as handle:
            _write(handle)
    else:
        _write(target)


def _params_metadata(params: SystemParams) -> str:
    return " ".join(f"{key}={format_cell(value)}" for key, value in params.rates().items())


def sweep_metadata(spec: SweepSpec, version: str) -> list[str]:
    """Metadata comment block recording the full sweep definition."""
    return [
        f"steerkit {version}",
        f"model: {spec.model_kind}",
        (
            f"sweep: {spec.swept_parameter} from {format_cell(spec.start)} to "
            f"{format_cell(spec.stop)} ({spec.count} points, {spec.spacing})"
        ),
        f"fixed parameters: {_params_metadata(spec.fixed)}",
        f"outputs: {', '.join(spec.outputs)}",
    ]


def reproduce_figure(figure_id: str, out_dir=".", render: bool = True) -> list[Path]:
    """Run every series of a predefined figure grid and write the artifacts.

    Writes ``figure_<id>.csv`` (long format, one ``series`` column) and,
    unless disabled, a rendered ``figure_<id>.png`` next to it.  Returns the
    written paths.
    """
    from . import __version__

    spec = figure_spec(figure_id)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    results: list[tuple[FigureSeries, SweepResult]] = []
    for series in spec.series:
        results.append((series, run_sweep(spec.sweep_for(series))))

    columns = ("series",) + results[0][1].columns
    rows = []
    for series, result in results:
        for row in result.rows:
            rows.append({"series": series.label, **row})

    metadata = [
        f"steerkit {__version__}",
        f"figure: {spec.figure_id}",
        f"description: {spec.description}",
        f"model: {spec.model_kind}",
        (
            f"sweep: {spec.swept_parameter} from {format_cell(spec.start)} to "
            f"{format_cell(spec.stop)} ({spec.count} points, linear)"
        ),
        f"outputs: {', '.join(spec.outputs)}",
    ]
    metadata += [f"series {series.label}: {_params_metadata(series.fixed)}" for series in spec.series]

    csv_path = out_dir / f"figure_{figure_id}.csv"
    write_csv(csv_path, columns, rows, metadata)
    written = [csv_path]

    if render:
        from .plotting import render_figure

        png_path = out_dir / f"figure_{figure_id}.png"
        render_figure(spec, results, png_path)
        written.append(png_path)
    return written
