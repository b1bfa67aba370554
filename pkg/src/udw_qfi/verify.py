"""Oracle cross-check suite.

Each check compares an analytic route against an independent numeric route
(or two analytic routes against each other) at a pinned tolerance. The CLI
``verify`` subcommand runs all of them and reports one line per check.
"""

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import (
    BlochState,
    DetectorParams,
    decay_rates,
    evolve_analytic,
    evolve_numeric_oracle,
    generator,
)
from .field_response import (
    OracleConvergenceError,
    WightmanParams,
    boundary_bracket,
    response,
    response_numeric_oracle,
)
from .geometry import BoundaryConfig
from .metrology import dphi_rho, qfi_closed_form, qfi_general, qfi_max_eq22, spectral

__all__ = [
    "CheckResult",
    "check_response_oracle",
    "check_dynamics_oracle",
    "check_qfi_equivalence",
    "check_dphi_finite_difference",
    "check_eq22_consistency",
    "run_all_checks",
    "RESPONSE_ORACLE_TOL",
    "DYNAMICS_ORACLE_TOL",
    "QFI_EQUIVALENCE_TOL",
    "DPHI_FD_TOL",
    "EQ22_TOL",
]

RESPONSE_ORACLE_TOL = 1e-3
DYNAMICS_ORACLE_TOL = 1e-6
QFI_EQUIVALENCE_TOL = 1e-8
DPHI_FD_TOL = 1e-5
EQ22_TOL = 1e-10


@dataclass
class CheckResult:
    name: str
    points: int
    max_err: float
    tol: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  [{self.detail}]" if self.detail else ""
        return (
            f"{status}  {self.name}: max_err={self.max_err:.3e} "
            f"tol={self.tol:.0e} points={self.points}{extra}"
        )


def _boundary(R: float | None, alpha: float | None) -> BoundaryConfig:
    if R is None:
        return BoundaryConfig.unbounded()
    return BoundaryConfig.two_perpendicular_mirrors(R, alpha)


# (a, omega, R, alpha); R=None marks the unbounded vacuum. Points are chosen
# with non-tiny response so a relative comparison is meaningful.
RESPONSE_VERIFY_GRID: tuple[tuple[float, float, float | None, float | None], ...] = (
    (1.0, 10.0, None, None),
    (1.0, 3.0, None, None),
    (1.0, 1.0, None, None),
    (2.0, 5.0, None, None),
    (0.5, 2.0, None, None),
    (1.0, -1.0, None, None),
    (2.0, -0.5, None, None),
    (1.0, 0.0, None, None),
    (1.0, 10.0, 0.4, 0.25 * math.pi),
    (1.0, 10.0, 0.4, 0.1 * math.pi),
    (1.0, 10.0, 0.1, 0.1 * math.pi),
    (1.0, 10.0, 0.1, 0.3 * math.pi),
    (1.0, 3.0, 0.4, 0.3 * math.pi),
    (1.0, 2.0, 1.0, 0.2 * math.pi),
    (1.0, -1.0, 0.7, 0.25 * math.pi),
    (1.0, 0.0, 0.4, 0.25 * math.pi),
    (1.0, 0.0, 0.4, 0.1 * math.pi),
    (2.0, 5.0, 0.3, 0.3 * math.pi),
    (2.0, 2.0, 0.5, 0.15 * math.pi),
    (2.0, 0.0, 0.5, 0.25 * math.pi),
    (0.5, 3.0, 0.5, 0.4 * math.pi),
    (0.5, 2.0, 1.5, 0.35 * math.pi),
)


def check_response_oracle(
    window: float | None = None,
    epsilon_schedule: tuple[float, ...] | None = None,
    grid=RESPONSE_VERIFY_GRID,
) -> tuple[CheckResult, list[dict]]:
    """Closed-form response vs regulator-extrapolated quadrature."""
    rows: list[dict] = []
    max_rel = 0.0
    for a, omega, R, alpha in grid:
        boundary = _boundary(R, alpha)
        closed = response(a, boundary, omega).value
        try:
            oracle = response_numeric_oracle(
                WightmanParams(a=a, boundary=boundary),
                omega,
                window=window,
                epsilon_schedule=epsilon_schedule,
            )
        except (ValueError, OracleConvergenceError) as exc:
            return (
                CheckResult(
                    name="response_oracle",
                    points=len(rows),
                    max_err=math.inf,
                    tol=RESPONSE_ORACLE_TOL,
                    passed=False,
                    detail=str(exc),
                ),
                rows,
            )
        rel = abs(oracle - closed) / max(abs(closed), 1e-300)
        max_rel = max(max_rel, rel)
        rows.append(
            {
                "a": a,
                "omega": omega,
                "R": R,
                "alpha": alpha,
                "closed_form": closed,
                "oracle": oracle,
                "rel_err": rel,
            }
        )
    result = CheckResult(
        name="response_oracle",
        points=len(rows),
        max_err=max_rel,
        tol=RESPONSE_ORACLE_TOL,
        passed=max_rel <= RESPONSE_ORACLE_TOL,
    )
    return result, rows


def check_dynamics_oracle(convention: str = "eq7") -> CheckResult:
    """Closed-form Bloch propagation vs adaptive RK4 on a 10 x 10 grid."""
    detector = DetectorParams(omega0=10.0, coupling=1.0, a=1.0)
    phi = 0.7
    max_err = 0.0
    points = 0
    for boundary in (
        BoundaryConfig.unbounded(),
        BoundaryConfig.two_perpendicular_mirrors(0.4, 0.25 * math.pi),
    ):
        rates = decay_rates(detector, boundary, convention)
        gen = generator(rates, detector.omega0)
        for theta in np.linspace(0.0, math.pi, 10):
            s0 = BlochState.from_angles(theta, phi)
            for tau in np.linspace(0.0, 1.0, 10):
                analytic = evolve_analytic(s0, rates, detector.omega0, tau)
                numeric = evolve_numeric_oracle(s0, gen, tau)
                err = max(
                    abs(analytic.bx - numeric.bx),
                    abs(analytic.by - numeric.by),
                    abs(analytic.bz - numeric.bz),
                )
                max_err = max(max_err, err)
                points += 1
    return CheckResult(
        name="dynamics_oracle",
        points=points,
        max_err=max_err,
        tol=DYNAMICS_ORACLE_TOL,
        passed=max_err <= DYNAMICS_ORACLE_TOL,
    )


def _qfi_grid():
    detector = DetectorParams(omega0=10.0, coupling=1.0, a=1.0)
    boundaries = (
        BoundaryConfig.unbounded(),
        BoundaryConfig.two_perpendicular_mirrors(0.4, 0.25 * math.pi),
    )
    # the 10-point angle grid used by the dynamics check, plus the named angles
    thetas = sorted(
        set(np.linspace(0.0, math.pi, 10)) | {math.pi / 6.0, math.pi / 4.0, math.pi / 2.0}
    )
    taus = np.linspace(0.0, 1.0, 10)
    return detector, boundaries, thetas, taus


def check_qfi_equivalence(convention: str = "eq7") -> CheckResult:
    """General spectral/SLD route vs the closed-form squared coherence."""
    detector, boundaries, thetas, taus = _qfi_grid()
    phi = 0.3
    max_rel = 0.0
    points = 0
    for boundary in boundaries:
        rates = decay_rates(detector, boundary, convention)
        for theta in thetas:
            s0 = BlochState.from_angles(theta, phi)
            for tau in taus:
                evolved = evolve_analytic(s0, rates, detector.omega0, tau)
                decomp = spectral(evolved, tau, theta, phi, rates, detector.omega0)
                drho = dphi_rho(theta, phi, rates, detector.omega0, tau)
                general = qfi_general(decomp, drho)
                closed = qfi_closed_form(theta, rates, tau)
                rel = abs(general - closed) / max(general, 1e-15)
                max_rel = max(max_rel, rel)
                points += 1
    return CheckResult(
        name="qfi_equivalence",
        points=points,
        max_err=max_rel,
        tol=QFI_EQUIVALENCE_TOL,
        passed=max_rel <= QFI_EQUIVALENCE_TOL,
    )


def check_dphi_finite_difference(convention: str = "eq7") -> CheckResult:
    """Analytic phase derivative of the state vs central differences."""
    detector, boundaries, thetas, taus = _qfi_grid()
    phi = 0.3
    max_err = 0.0
    points = 0
    for boundary in boundaries:
        rates = decay_rates(detector, boundary, convention)
        for theta in thetas:
            for tau in taus:
                analytic = dphi_rho(theta, phi, rates, detector.omega0, tau, mode="analytic")
                fd = dphi_rho(theta, phi, rates, detector.omega0, tau, mode="finite-difference")
                err = float(np.max(np.abs(analytic - fd)))
                max_err = max(max_err, err)
                points += 1
    return CheckResult(
        name="dphi_finite_difference",
        points=points,
        max_err=max_err,
        tol=DPHI_FD_TOL,
        passed=max_err <= DPHI_FD_TOL,
    )


def check_eq22_consistency() -> CheckResult:
    """Direct bracket-exponent QFI vs the rate pipeline at theta = pi/2.

    Under the ``eq22`` dephasing convention the two must agree to 1e-10
    relative; under ``eq7`` the pipeline differs by exactly one extra factor
    of the zero-frequency exponent term, which is checked as well.
    """
    cases = [
        (DetectorParams(10.0, 1.0, 1.0), BoundaryConfig.unbounded()),
        (DetectorParams(10.0, 1.0, 1.0), BoundaryConfig.two_perpendicular_mirrors(0.4, 0.25 * math.pi)),
        (DetectorParams(10.0, 1.0, 2.0), BoundaryConfig.two_perpendicular_mirrors(0.4, 0.1 * math.pi)),
        (DetectorParams(5.0, 0.5, 0.7), BoundaryConfig.two_perpendicular_mirrors(1.0, 0.3 * math.pi)),
        (DetectorParams(2.0, 0.3, 1.5), BoundaryConfig.unbounded()),
    ]
    theta = 0.5 * math.pi
    max_rel = 0.0
    points = 0
    for detector, boundary in cases:
        for tau in (0.1, 0.4, 1.0):
            formula = qfi_max_eq22(detector, boundary, tau)

            rates22 = decay_rates(detector, boundary, "eq22")
            pipeline22 = qfi_closed_form(theta, rates22, tau)
            rel = abs(pipeline22 - formula) / formula
            max_rel = max(max_rel, rel)

            rates7 = decay_rates(detector, boundary, "eq7")
            pipeline7 = qfi_closed_form(theta, rates7, tau)
            br_zero = boundary_bracket(0.0, detector.a, boundary)
            extra = math.exp(
                -detector.coupling**2 * detector.a * tau / math.pi**2 * br_zero
            )
            rel7 = abs(pipeline7 / formula - extra) / extra
            max_rel = max(max_rel, rel7)
            points += 2
    return CheckResult(
        name="eq22_consistency",
        points=points,
        max_err=max_rel,
        tol=EQ22_TOL,
        passed=max_rel <= EQ22_TOL,
    )


def run_all_checks(
    window: float | None = None,
    epsilon_schedule: tuple[float, ...] | None = None,
) -> tuple[list[CheckResult], list[dict]]:
    """Run the whole suite; returns per-check results and the response rows."""
    response_result, response_rows = check_response_oracle(window, epsilon_schedule)
    results = [
        response_result,
        check_dynamics_oracle(),
        check_qfi_equivalence(),
        check_dphi_finite_difference(),
        check_eq22_consistency(),
    ]
    return results, response_rows
