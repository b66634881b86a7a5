"""Parameter sweeps, figure grids and delimited output."""

from __future__ import annotations

import io
import math

import numpy as np
import pytest

from steerkit import (
    FIGURE_IDS,
    SweepSpec,
    SystemParams,
    ValidationError,
    figure_spec,
    reproduce_figure,
    run_sweep,
)
from steerkit.sweeps import apply_parameter, format_cell, sweep_metadata, write_csv

MIRROR_BASE = SystemParams(gamma_a=1e4)


# ---------------------------------------------------------------------------
# parameter application
# ---------------------------------------------------------------------------


def test_apply_direct_field():
    p = apply_parameter(SystemParams(), "g_m", 0.7)
    assert p.g_m == 0.7


def test_apply_derived_rates():
    p = apply_parameter(SystemParams(gamma_a=4.0), "C_a", 2.25)
    assert p.g_a == pytest.approx(3.0)
    assert p.C_a == pytest.approx(2.25)
    p = apply_parameter(SystemParams(kappa=4.0), "G", 1.0)
    assert p.g_m == pytest.approx(2.0)
    p = apply_parameter(SystemParams(kappa=9.0), "G_a", 1.0)
    assert p.g_a == pytest.approx(3.0)


def test_apply_rejects_bad_values():
    with pytest.raises(ValidationError):
        apply_parameter(SystemParams(), "C_a", -1.0)
    with pytest.raises(ValidationError):
        apply_parameter(SystemParams(), "unknown_rate", 1.0)
    with pytest.raises(ValidationError):
        apply_parameter(SystemParams(), "kappa", -2.0)


# ---------------------------------------------------------------------------
# sweep specification
# ---------------------------------------------------------------------------


def test_spec_validation_errors():
    good = dict(
        model_kind="reduced_a",
        swept_parameter="g_m",
        start=0.1,
        stop=0.9,
        count=5,
        fixed=SystemParams(),
    )
    SweepSpec(**good)
    with pytest.raises(ValidationError):
        SweepSpec(**{**good, "model_kind": "full"})
    with pytest.raises(ValidationError):
        SweepSpec(**{**good, "count": 1})
    with pytest.raises(ValidationError):
        SweepSpec(**{**good, "start": 0.9, "stop": 0.1})
    with pytest.raises(ValidationError):
        SweepSpec(**{**good, "spacing": "log", "start": 0.0})
    with pytest.raises(ValidationError):
        SweepSpec(**{**good, "spacing": "geometric"})
    with pytest.raises(ValidationError):
        SweepSpec(**{**good, "outputs": ("var_Xz",)})
    with pytest.raises(ValidationError):
        SweepSpec(**{**good, "swept_parameter": "q_m"})
    with pytest.raises(ValidationError):  # thresholds only exist for the cavity--mirror pair
        SweepSpec(**{**good, "model_kind": "reduced_b", "outputs": ("steer_threshold",)})


def test_spec_grids():
    spec = SweepSpec(
        model_kind="reduced_a", swept_parameter="g_m", start=0.0, stop=1.0, count=5,
        fixed=SystemParams(),
    )
    np.testing.assert_allclose(spec.grid(), [0.0, 0.25, 0.5, 0.75, 1.0])
    log_spec = SweepSpec(
        model_kind="reduced_a", swept_parameter="C_a", start=0.01, stop=100.0, count=5,
        fixed=SystemParams(), spacing="log",
    )
    np.testing.assert_allclose(log_spec.grid(), [0.01, 0.1, 1.0, 10.0, 100.0])


def test_default_outputs_fill_in():
    spec = SweepSpec(
        model_kind="reduced_b", swept_parameter="G_a", start=0.1, stop=2.0, count=3,
        fixed=SystemParams(),
    )
    assert spec.outputs  # populated by the constructor
    assert all(isinstance(name, str) for name in spec.outputs)


# ---------------------------------------------------------------------------
# sweep execution
# ---------------------------------------------------------------------------


def test_sweep_rows_follow_grid_order():
    spec = SweepSpec(
        model_kind="reduced_a",
        swept_parameter="g_m",
        start=0.1,
        stop=0.9,
        count=9,
        fixed=MIRROR_BASE,
        outputs=("E_ab", "E_ba", "var_Xa"),
    )
    result = run_sweep(spec)
    assert result.columns[0] == "g_m"
    assert result.columns[1] == "stable"
    assert result.columns[2:5] == ("E_ab_lyap", "E_ab_analytic", "E_ab_absdiff")
    np.testing.assert_allclose(result.column("g_m"), spec.grid())
    assert all(row["stable"] is True for row in result.rows)
    for row in result.rows:
        assert abs(row["E_ab_lyap"] - row["E_ab_analytic"]) <= 1e-8
        assert row["E_ab_absdiff"] <= 1e-8
        assert row["var_Xa_lyap"] > 0.5 - 1e-12


def test_sweep_marks_unstable_rows():
    # G fixed at 2: gamma_G = 1 - 2 + G_a flips sign at G_a = 1
    fixed = SystemParams(g_m=math.sqrt(2.0))
    spec = SweepSpec(
        model_kind="reduced_b",
        swept_parameter="G_a",
        start=0.2,
        stop=1.8,
        count=9,
        fixed=fixed,
        outputs=("E_cb", "var_Xb"),
    )
    result = run_sweep(spec)
    flags = result.column("stable")
    values = result.column("G_a")
    for flag, value in zip(flags, values):
        assert flag == (value > 1.0 + 1e-12)
    unstable_rows = [row for row in result.rows if not row["stable"]]
    assert unstable_rows
    for row in unstable_rows:
        assert row["E_cb_lyap"] is None
        assert row["E_cb_analytic"] is None
        assert row["var_Xb_absdiff"] is None
    stable_rows = [row for row in result.rows if row["stable"]]
    assert stable_rows and all(row["E_cb_lyap"] is not None for row in stable_rows)


def test_sweep_omits_analytic_outside_matched_rates():
    spec = SweepSpec(
        model_kind="reduced_a",
        swept_parameter="g_m",
        start=0.1,
        stop=0.5,
        count=3,
        fixed=SystemParams(kappa=2.0),  # kappa != gamma_m: closed form unavailable
        outputs=("var_Xa",),
    )
    result = run_sweep(spec)
    for row in result.rows:
        assert row["stable"] is True
        assert row["var_Xa_lyap"] is not None
        assert row["var_Xa_analytic"] is None
        assert row["var_Xa_absdiff"] is None


def test_full_model_sweep_runs():
    spec = SweepSpec(
        model_kind="full_rwa",
        swept_parameter="g_a",
        start=0.0,
        stop=1.0,
        count=3,
        fixed=SystemParams(g_m=0.3),
        outputs=("E_ab", "log_negativity"),
    )
    result = run_sweep(spec)
    assert len(result.rows) == 3
    assert all(row["E_ab_lyap"] is not None for row in result.rows)


# ---------------------------------------------------------------------------
# figure catalogue
# ---------------------------------------------------------------------------


def test_figure_ids_and_lookup():
    assert set(FIGURE_IDS) == {"2a_a", "2a_b", "2_a", "2_b", "3_a", "3_b", "4", "5", "6"}
    with pytest.raises(ValidationError, match="4"):
        figure_spec("99")


def test_figure_specs_are_well_formed():
    for figure_id in FIGURE_IDS:
        spec = figure_spec(figure_id)
        assert spec.count >= 100
        assert spec.series
        for series in spec.series:
            sweep = spec.sweep_for(series)
            assert sweep.outputs == spec.outputs


def test_reproduce_crossed_damping_figure(tmp_path):
    paths = reproduce_figure("4", out_dir=tmp_path, render=False)
    assert [p.name for p in paths] == ["figure_4.csv"]
    text = paths[0].read_text(encoding="utf-8")
    lines = text.splitlines()
    meta = [line for line in lines if line.startswith("# ")]
    assert any("figure: 4" in line for line in meta)
    assert any(line.startswith("# series ") for line in meta)
    header_index = next(i for i, line in enumerate(lines) if not line.startswith("#"))
    header = lines[header_index].split(",")
    assert header[:3] == ["series", "G_a", "stable"]
    assert "E_cb_lyap" in header and "E_bc_lyap" in header

    idx_cb = header.index("E_cb_lyap")
    idx_bc = header.index("E_bc_lyap")
    first_series = [
        line.split(",") for line in lines[header_index + 1 :] if line.startswith("G=0.25,")
    ]
    assert len(first_series) == figure_spec("4").count
    cb = [float(cells[idx_cb]) for cells in first_series if cells[idx_cb]]
    bc = [float(cells[idx_bc]) for cells in first_series if cells[idx_bc]]
    assert min(cb) < 0.5  # the atom becomes steerable
    assert min(bc) > 0.5  # the mirror never does at this coupling


def test_reproduce_figure_renders_png(tmp_path):
    paths = reproduce_figure("2a_a", out_dir=tmp_path, render=True)
    names = sorted(p.name for p in paths)
    assert names == ["figure_2a_a.csv", "figure_2a_a.png"]
    assert all(p.exists() and p.stat().st_size > 0 for p in paths)


# ---------------------------------------------------------------------------
# delimited output
# ---------------------------------------------------------------------------


def test_format_cell():
    assert format_cell(None) == ""
    assert format_cell(True) == "true"
    assert format_cell(False) == "false"
    assert format_cell(0.1) == "0.1"
    assert format_cell(2 / 3) == "0.666666666667"  # 12 significant digits
    assert format_cell(1e-15) == "1e-15"
    assert format_cell("label") == "label"


def test_write_csv_to_path_and_handle(tmp_path):
    columns = ("x", "stable", "y")
    rows = [{"x": 1.0, "stable": True, "y": None}, {"x": 2.0, "stable": False, "y": 0.25}]
    target = tmp_path / "out.csv"
    write_csv(target, columns, rows, metadata=["tool 0.1.0"])
    raw = target.read_bytes()
    assert b"\r" not in raw  # LF endings only
    assert raw.decode("utf-8").splitlines() == [
        "# tool 0.1.0",
        "x,stable,y",
        "1,true,",
        "2,false,0.25",
    ]
    buffer = io.StringIO()
    write_csv(buffer, columns, rows)
    assert buffer.getvalue().splitlines()[0] == "x,stable,y"


def test_sweep_metadata_mentions_grid():
    spec = SweepSpec(
        model_kind="reduced_a", swept_parameter="C_a", start=0.0, stop=10.0, count=11,
        fixed=SystemParams(g_m=0.5),
    )
    lines = sweep_metadata(spec, "0.1.0")
    joined = "\n".join(lines)
    assert "steerkit 0.1.0" in joined
    assert "C_a" in joined and "11 points" in joined
    assert "g_m=0.5" in joined