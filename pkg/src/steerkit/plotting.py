"""Headless rendering of sweep and figure results.

Everything here draws from already-computed :class:`~steerkit.sweeps.SweepResult`
rows; no solver runs inside this module.  The Agg backend is forced so the
command-line tool can render to files on machines without a display.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["render_figure", "render_sweep"]

_GUIDE_STYLE = dict(color="0.45", linestyle=":", linewidth=1.0, zorder=1)


def _route_curve(result, quantity: str) -> tuple[np.ndarray, np.ndarray]:
    """Grid values and Lyapunov-route quantities, with gaps where unstable."""
    x = np.asarray(result.column(result.spec.swept_parameter), dtype=float)
    y = np.array(
        [np.nan if value is None else float(value) for value in result.column(f"{quantity}_lyap")]
    )
    return x, y


def render_figure(spec, results, path) -> Path:
    """Render one predefined figure to ``path`` (PNG).

    ``results`` pairs each :class:`~steerkit.sweeps.FigureSeries` with its
    :class:`~steerkit.sweeps.SweepResult`.  Single-series figures draw every
    output quantity on one axes; multi-series figures get one panel per
    output with one line per series.
    """
    path = Path(path)
    if len(results) == 1:
        fig, ax = plt.subplots(figsize=(5.4, 4.0))
        _, result = results[0]
        for quantity in spec.outputs:
            x, y = _route_curve(result, quantity)
            ax.plot(x, y, label=quantity)
        _decorate(ax, spec, spec.outputs[0] if len(spec.outputs) == 1 else "value")
        ax.legend(frameon=False, fontsize=9)
    else:
        fig, axes = plt.subplots(
            1, len(spec.outputs), figsize=(5.4 * len(spec.outputs), 4.0), squeeze=False
        )
        for ax, quantity in zip(axes[0], spec.outputs):
            for series, result in results:
                x, y = _route_curve(result, quantity)
                ax.plot(x, y, label=series.label)
            _decorate(ax, spec, quantity)
            ax.legend(frameon=False, fontsize=9)
    fig.suptitle(f"figure {spec.figure_id}", fontsize=11)
    fig.tight_layout(rect=(0, 0, 1, 0.94))
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _decorate(ax, spec, ylabel: str) -> None:
    if spec.reference_level is not None:
        ax.axhline(spec.reference_level, **_GUIDE_STYLE)
    ax.set_xlabel(spec.swept_parameter)
    ax.set_ylabel(ylabel)


def render_sweep(result, path) -> Path:
    """Render an ad-hoc sweep: one axes, one line per output quantity."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(5.4, 4.0))
    for quantity in result.spec.outputs:
        x, y = _route_curve(result, quantity)
        ax.plot(x, y, label=quantity)
    ax.set_xlabel(result.spec.swept_parameter)
    ax.set_ylabel("value")
    ax.legend(frameon=False, fontsize=9)
    ax.set_title(f"{result.spec.model_kind}: sweep over {result.spec.swept_parameter}", fontsize=10)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
