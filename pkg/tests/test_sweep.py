import json
import math
import warnings

import numpy as np
import pytest

from udw_qfi.sweep import (
    FixedParams,
    RunManifest,
    SweepSpec,
    format_value,
    preset_parameters,
    run_preset,
    run_sweep,
    write_csv,
)


def test_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(swept="bogus", start=0.0, stop=1.0, points=10)
    with pytest.raises(ValueError):
        SweepSpec(swept="tau", start=1.0, stop=0.0, points=10)
    with pytest.raises(ValueError):
        SweepSpec(swept="tau", start=0.0, stop=1.0, points=1)


def test_spec_warns_when_swept_value_also_fixed():
    with pytest.warns(UserWarning, match="ignored"):
        SweepSpec(swept="tau", start=0.0, stop=1.0, points=5, fixed=FixedParams(tau=0.3))


def test_grid_is_uniform_and_inclusive():
    spec = SweepSpec(swept="tau", start=0.0, stop=1.0, points=5, fixed=FixedParams(unbounded=True))
    grid = spec.grid()
    assert grid[0] == 0.0 and grid[-1] == 1.0
    assert np.allclose(np.diff(grid), 0.25)


def test_tau_sweep_is_monotone_nonincreasing():
    spec = SweepSpec(
        swept="tau", start=0.0, stop=1.0, points=21, fixed=FixedParams(unbounded=True)
    )
    result = run_sweep(spec)
    assert result.columns == ("tau", "F", "F_closed", "crb")
    values = [row[1] for row in result.rows]
    assert values[0] == pytest.approx(1.0, abs=1e-14)
    assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))


def test_sweep_requires_mirror_parameters():
    spec = SweepSpec(swept="R", start=0.1, stop=1.0, points=3)
    with pytest.raises(ValueError, match="alpha"):
        run_sweep(spec)


def test_alpha_sweep_fills_boundary():
    spec = SweepSpec(
        swept="alpha",
        start=0.1 * math.pi,
        stop=0.4 * math.pi,
        points=4,
        fixed=FixedParams(R=0.4, tau=0.4),
    )
    result = run_sweep(spec)
    assert len(result.rows) == 4
    assert all(0.0 < row[1] <= 1.0 for row in result.rows)


def test_preset_parameters_pin_caption_values():
    fig2 = preset_parameters("fig2")
    assert (fig2["R"], fig2["alpha"], fig2["omega0"], fig2["coupling"]) == (
        0.1,
        0.1 * math.pi,
        10.0,
        1.0,
    )
    fig3 = preset_parameters("fig3")
    assert (fig3["a"], fig3["alpha"], fig3["omega0"], fig3["coupling"]) == (
        1.0,
        0.1 * math.pi,
        10.0,
        1.0,
    )
    fig4 = preset_parameters("fig4")
    assert (fig4["tau"], fig4["a"], fig4["R"], fig4["omega0"], fig4["coupling"]) == (
        0.4,
        1.0,
        0.4,
        10.0,
        1.0,
    )
    with pytest.raises(ValueError):
        preset_parameters("fig9")


def test_fig2_preset_layout():
    result = run_preset("fig2", points=11)
    assert result.columns == ("tau", "a=0.5", "a=1", "a=2", "a=4")
    assert len(result.rows) == 11
    assert result.rows[0][1:] == pytest.approx((1.0,) * 4, abs=1e-14)


def test_fig3_preset_has_unbounded_reference():
    result = run_preset("fig3", points=5)
    assert result.columns[0] == "tau"
    assert result.columns[-1] == "unbounded"
    assert "R=0.001" in result.columns and "R=100" in result.columns


def test_fig4_preset_grid_symmetric_about_diagonal():
    result = run_preset("fig4", points=21)
    alphas = [row[0] for row in result.rows]
    assert alphas[10] == pytest.approx(0.25 * math.pi, rel=1e-12)
    for lo, hi in zip(alphas, reversed(alphas)):
        assert lo + hi == pytest.approx(0.5 * math.pi, rel=1e-12)


def test_manifest_round_trip_and_digest_stability():
    m1 = RunManifest.create(
        command="sweep",
        parameters={"preset": "fig4", "points": 81},
        convention="eq7",
        outputs=("fig4.csv",),
    )
    m2 = RunManifest.from_json(m1.to_json())
    assert m2 == m1
    later = RunManifest(
        command=m1.command,
        parameters=m1.parameters,
        convention=m1.convention,
        version=m1.version,
        timestamp="2099-01-01T00:00:00+00:00",
        outputs=("elsewhere.csv",),
    )
    # digest covers run-defining fields only
    assert later.digest() == m1.digest()
    different = RunManifest.create(
        command="sweep",
        parameters={"preset": "fig4", "points": 82},
        convention="eq7",
        outputs=("fig4.csv",),
    )
    assert different.digest() != m1.digest()


def test_format_value_keeps_17_significant_digits():
    value = 1.0 / 3.0
    assert float(format_value(value)) == value
    assert format_value("unbounded") == "unbounded"


def test_write_csv_emits_digest_comment_and_manifest(tmp_path):
    out = tmp_path / "run.csv"
    manifest = RunManifest.create(
        command="evolve", parameters={"tau": 1.0}, convention="eq7", outputs=(str(out),)
    )
    write_csv(str(out), ("tau", "F"), [(0.0, 1.0), (0.5, 0.25)], manifest)
    lines = out.read_text().splitlines()
    assert lines[0] == f"# manifest-digest: {manifest.digest()}"
    assert lines[1] == "tau,F"
    sidecar = tmp_path / "run.csv.manifest.json"
    assert sidecar.exists()
    parsed = json.loads(sidecar.read_text())
    assert parsed["digest"] == manifest.digest()
    assert RunManifest.from_json(sidecar.read_text()) == manifest


def test_sweep_results_deterministic_across_worker_counts():
    spec = SweepSpec(
        swept="tau", start=0.0, stop=0.5, points=9, fixed=FixedParams(unbounded=True)
    )
    serial = run_sweep(spec, max_workers=1)
    parallel = run_sweep(spec, max_workers=8)
    assert serial == parallel
