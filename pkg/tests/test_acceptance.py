"""Acceptance suite: one test per release criterion, each printing a
PASS/FAIL line with its measured error and runtime budget."""

import math
import time

import numpy as np
import pytest

from udw_qfi.dynamics import (
    BlochState,
    DetectorParams,
    decay_rates,
    evolve_analytic,
)
from udw_qfi.geometry import BoundaryConfig
from udw_qfi.metrology import qfi_max_eq22, qfi_record
from udw_qfi.sweep import run_preset
from udw_qfi.verify import (
    DPHI_FD_TOL,
    DYNAMICS_ORACLE_TOL,
    EQ22_TOL,
    QFI_EQUIVALENCE_TOL,
    RESPONSE_ORACLE_TOL,
    check_dphi_finite_difference,
    check_dynamics_oracle,
    check_eq22_consistency,
    check_qfi_equivalence,
    check_response_oracle,
)

UNBOUNDED = BoundaryConfig.unbounded()


def report(name: str, passed: bool, detail: str, elapsed: float, budget: float):
    status = "PASS" if passed and elapsed < budget else "FAIL"
    print(f"{status}  {name}: {detail} [{elapsed:.2f}s / budget {budget:.0f}s]")
    assert passed, f"{name}: {detail}"
    assert elapsed < budget, f"{name}: runtime {elapsed:.2f}s over budget {budget}s"


def test_kms_detailed_balance():
    t0 = time.time()
    worst = 0.0
    pairs = [(w0, a) for w0 in (0.5, 1.0, 2.0, 5.0, 10.0) for a in (0.5, 1.0, 2.0, 5.0, 10.0)]
    boundaries = (UNBOUNDED, BoundaryConfig.two_perpendicular_mirrors(0.4, 0.3 * math.pi))
    for boundary in boundaries:
        for omega0, a in pairs:
            rates = decay_rates(DetectorParams(omega0, 0.1 * omega0, a), boundary)
            expected = math.exp(-2.0 * math.pi * omega0 / a)
            rel = abs(rates.gamma_plus / rates.gamma_minus - expected) / expected
            worst = max(worst, rel)
    report(
        "KMS detailed balance (25 pairs x 2 boundaries)",
        worst <= 1e-10,
        f"max rel err {worst:.3e} vs 1e-10",
        time.time() - t0,
        1.0,
    )


def test_response_oracle_equivalence():
    t0 = time.time()
    result, rows = check_response_oracle()
    report(
        "response closed form vs quadrature oracle",
        result.passed and len(rows) >= 20,
        f"max rel err {result.max_err:.3e} vs {RESPONSE_ORACLE_TOL:.0e} on {len(rows)} points",
        time.time() - t0,
        60.0,
    )


def test_dynamics_oracle_equivalence():
    t0 = time.time()
    result = check_dynamics_oracle()
    report(
        "analytic Bloch flow vs RK4 oracle (10x10 grid)",
        result.passed,
        f"max componentwise err {result.max_err:.3e} vs {DYNAMICS_ORACLE_TOL:.0e}",
        time.time() - t0,
        5.0,
    )


def test_qfi_equivalence():
    t0 = time.time()
    general = check_qfi_equivalence()
    derivative = check_dphi_finite_difference()
    report(
        "general QFI vs closed form, analytic vs FD derivative",
        general.passed and derivative.passed,
        f"QFI rel err {general.max_err:.3e} vs {QFI_EQUIVALENCE_TOL:.0e}; "
        f"dphi err {derivative.max_err:.3e} vs {DPHI_FD_TOL:.0e}",
        time.time() - t0,
        5.0,
    )


def test_eq22_consistency():
    t0 = time.time()
    result = check_eq22_consistency()
    report(
        "bracket-exponent QFI identity (eq22) and eq7 residual",
        result.passed,
        f"max rel err {result.max_err:.3e} vs {EQ22_TOL:.0e}",
        time.time() - t0,
        1.0,
    )


def test_fig2_preset_properties():
    t0 = time.time()
    result = run_preset("fig2", points=101)
    data = np.array(result.rows)
    monotone = True
    for col in range(1, data.shape[1]):
        diffs = np.diff(data[:, col])
        monotone &= bool(np.all(diffs <= 1e-12))
    # columns are ordered by increasing acceleration; smaller a dominates
    dominance = bool(np.all(data[:, 1:-1] >= data[:, 2:] - 1e-15))
    report(
        "fig2 preset: monotone decay and small-a dominance",
        monotone and dominance,
        f"columns {result.columns[1:]}",
        time.time() - t0,
        2.0,
    )


def test_fig3_preset_properties():
    t0 = time.time()
    result = run_preset("fig3", points=101)
    data = np.array(result.rows)
    columns = list(result.columns)
    taus = data[:, 0]
    near = data[:, columns.index("R=0.001")]
    short_time = bool(np.all(near[taus <= 0.05] >= 0.99))
    far = data[:, columns.index("R=100")]
    free = data[:, columns.index("unbounded")]
    far_matches_free = float(np.max(np.abs(far - free))) <= 1e-3
    report(
        "fig3 preset: corner-hugging QFI stays high; distant mirrors look unbounded",
        short_time and far_matches_free,
        f"min short-time F {float(np.min(near[taus <= 0.05])):.5f}; "
        f"max |F_far - F_unbounded| {float(np.max(np.abs(far - free))):.2e}",
        time.time() - t0,
        2.0,
    )


def test_fig4_preset_properties():
    t0 = time.time()
    result = run_preset("fig4", points=81)
    values = np.array([row[1] for row in result.rows])
    symmetry = float(np.max(np.abs(values - values[::-1])))
    minimum_at_diagonal = int(np.argmin(values)) == len(values) // 2
    report(
        "fig4 preset: mirror-swap symmetry and minimum at alpha = pi/4",
        symmetry <= 1e-10 and minimum_at_diagonal,
        f"max asymmetry {symmetry:.2e}; argmin index {int(np.argmin(values))} of {len(values)}",
        time.time() - t0,
        2.0,
    )


def test_thermalization():
    t0 = time.time()
    worst = 0.0
    omega0 = 2.0
    for a in (0.5, 1.0, 2.0, 4.0, 8.0):
        rates = decay_rates(DetectorParams(omega0, 0.2 * omega0, a), UNBOUNDED)
        tau = 41.0 / rates.longitudinal_decay
        out = evolve_analytic(BlochState.from_angles(0.4, 0.0), rates, omega0, tau)
        worst = max(worst, abs(out.bz + math.tanh(math.pi * omega0 / a)))
    report(
        "thermalization to the acceleration-temperature state (5 accelerations)",
        worst <= 1e-6,
        f"max |Bz - Bz_thermal| {worst:.3e} vs 1e-6",
        time.time() - t0,
        1.0,
    )


def test_containment_and_semigroup():
    t0 = time.time()
    rng = np.random.default_rng(20240817)
    boundaries = (
        UNBOUNDED,
        BoundaryConfig.two_perpendicular_mirrors(0.4, 0.25 * math.pi),
        BoundaryConfig.two_perpendicular_mirrors(1.0, 0.1 * math.pi),
    )
    max_norm = 0.0
    max_gap = 0.0
    for _ in range(100):
        omega0 = rng.uniform(1.0, 10.0)
        detector = DetectorParams(omega0, rng.uniform(0.05, 0.2) * omega0, rng.uniform(0.2, 5.0))
        boundary = boundaries[rng.integers(len(boundaries))]
        rates = decay_rates(detector, boundary)
        theta, phi = rng.uniform(0.0, math.pi), rng.uniform(0.0, 2.0 * math.pi)
        tau1, tau2 = rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)
        s0 = BlochState.from_angles(theta, phi)
        stepwise = evolve_analytic(
            evolve_analytic(s0, rates, detector.omega0, tau1), rates, detector.omega0, tau2
        )
        direct = evolve_analytic(s0, rates, detector.omega0, tau1 + tau2)
        gap = max(
            abs(stepwise.bx - direct.bx),
            abs(stepwise.by - direct.by),
            abs(stepwise.bz - direct.bz),
        )
        max_gap = max(max_gap, gap)
        for tau in np.linspace(0.0, tau1 + tau2, 7):
            max_norm = max(max_norm, evolve_analytic(s0, rates, detector.omega0, tau).norm)
    report(
        "Bloch-ball containment and semigroup composition (100 draws)",
        max_norm <= 1.0 + 1e-12 and max_gap <= 1e-10,
        f"max |B| {max_norm:.12f}; max composition gap {max_gap:.2e}",
        time.time() - t0,
        5.0,
    )


def test_qfi_record_pipeline_bounds():
    # ancillary sanity: the pipeline respects the qubit QFI range end to end
    for boundary in (UNBOUNDED, BoundaryConfig.two_perpendicular_mirrors(0.4, 0.1 * math.pi)):
        for theta in (0.3, math.pi / 2):
            for tau in (0.0, 0.5, 1.0):
                record = qfi_record(
                    DetectorParams(10.0, 1.0, 1.0), boundary, theta=theta, phi=0.0, tau=tau
                )
                assert 0.0 <= record.F <= 1.0 + 1e-12
                assert record.crb >= 1.0 - 1e-12
    assert qfi_max_eq22(DetectorParams(10.0, 1.0, 1.0), UNBOUNDED, 0.0) == 1.0
