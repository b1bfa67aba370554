"""Dissipative Bloch dynamics of the accelerated detector.

The detector's reduced state evolves under a completely positive Markovian
map whose rates come from the field response at the gap frequencies. The
Bloch vector obeys the linear equation dB/dtau = U B + v; both the analytic
solution of that equation and an independent adaptive RK4 integrator oracle
are provided.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .field_response import OracleConvergenceError, boundary_bracket, response
from .geometry import BoundaryConfig

__all__ = [
    "NegativeRateError",
    "DetectorParams",
    "DecayRates",
    "BlochState",
    "GeneratorMatrix",
    "decay_rates",
    "generator",
    "evolve_analytic",
    "evolve_numeric_oracle",
]

# Ratio of coupling to gap above which the weak-coupling derivation of the
# dissipator is considered strained.
WEAK_COUPLING_RATIO = 0.2

BLOCH_NORM_SLACK = 1e-12

GAMMA_Z_CONVENTIONS = ("eq7", "eq22")


class NegativeRateError(ValueError):
    """The response went negative at a rate frequency: the completely
    positive Markovian form is leaving its regime of validity."""

    def __init__(self, omega: float, bracket_value: float):
        self.omega = omega
        self.bracket_value = bracket_value
        super().__init__(
            f"negative decay rate at omega={omega!r} (boundary bracket {bracket_value!r}); "
            "refusing to build a non-positive dissipator"
        )


@dataclass(frozen=True)
class DetectorParams:
    """Two-level detector: energy gap, coupling strength, proper acceleration."""

    omega0: float
    coupling: float
    a: float

    def __post_init__(self):
        for name in ("omega0", "coupling", "a"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        # squared-acceleration scales appear throughout the correlation formulas
        if not math.isfinite(self.a * self.a):
            raise ValueError(f"acceleration {self.a!r} overflows squared-scale arithmetic")
        if not self.weak_coupling_ok:
            warnings.warn(
                f"coupling/omega0 = {self.coupling / self.omega0:.3g} exceeds "
                f"{WEAK_COUPLING_RATIO}; the weak-coupling dissipator is unreliable here",
                stacklevel=3,
            )

    @property
    def weak_coupling_ok(self) -> bool:
        return self.coupling / self.omega0 <= WEAK_COUPLING_RATIO


@dataclass(frozen=True)
class DecayRates:
    """Excitation, de-excitation and dephasing-channel rates (inverse proper time)."""

    gamma_plus: float
    gamma_minus: float
    gamma_z: float

    def __post_init__(self):
        for name in ("gamma_plus", "gamma_minus", "gamma_z"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0.0):
                raise ValueError(f"{name} must be non-negative and finite, got {value!r}")

    @property
    def transverse_decay(self) -> float:
        """Decay rate of the transverse Bloch components."""
        return 0.5 * (self.gamma_plus + self.gamma_minus + 4.0 * self.gamma_z)

    @property
    def longitudinal_decay(self) -> float:
        """Relaxation rate of the z Bloch component."""
        return self.gamma_plus + self.gamma_minus

    @property
    def bz_equilibrium(self) -> float:
        """Stationary z component (gamma_+ - gamma_-)/(gamma_+ + gamma_-).

        NaN when both rates vanish (no relaxation, no preferred value)."""
        total = self.gamma_plus + self.gamma_minus
        if total == 0.0:
            return math.nan
        return (self.gamma_plus - self.gamma_minus) / total


@dataclass(frozen=True)
class BlochState:
    """Bloch vector of a qubit state; must stay inside the unit ball."""

    bx: float
    by: float
    bz: float

    def __post_init__(self):
        n2 = self.bx * self.bx + self.by * self.by + self.bz * self.bz
        if not n2 <= 1.0 + BLOCH_NORM_SLACK:
            raise ValueError(f"Bloch vector norm^2 = {n2!r} outside the unit ball")

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "BlochState":
        """Pure state (sin t cos p, sin t sin p, cos t)."""
        st = math.sin(theta)
        return cls(st * math.cos(phi), st * math.sin(phi), math.cos(theta))

    @property
    def norm(self) -> float:
        return math.sqrt(self.bx * self.bx + self.by * self.by + self.bz * self.bz)

    @property
    def transverse_norm(self) -> float:
        return math.hypot(self.bx, self.by)

    def as_array(self) -> np.ndarray:
        return np.array([self.bx, self.by, self.bz], dtype=float)


@dataclass(frozen=True, eq=False)
class GeneratorMatrix:
    """Drift matrix and inhomogeneity of the linear Bloch equation."""

    drift: np.ndarray
    inhomogeneity: np.ndarray


def decay_rates(
    d: DetectorParams,
    b: BoundaryConfig,
    gamma_z_convention: str = "eq7",
) -> DecayRates:
    """Build the rate triple from the response at (+gap, -gap, 0).

    gamma_- = 2 lambda^2 G(omega0), gamma_+ = 2 lambda^2 G(-omega0), and the
    dephasing-channel rate is 2 lambda^2 G(0) under the ``eq7`` convention or
    half that under ``eq22`` (the two normalizations in circulation differ by
    exactly this factor; see the verify report for the residual each leaves).

    Raises
    ------
    NegativeRateError
        If any response value is negative (possible for oscillatory boundary
        brackets); carries the offending frequency and bracket value.
    """
    if gamma_z_convention not in GAMMA_Z_CONVENTIONS:
        raise ValueError(
            f"unknown gamma_z convention {gamma_z_convention!r}; expected one of {GAMMA_Z_CONVENTIONS}"
        )
    two_lambda2 = 2.0 * d.coupling * d.coupling
    raw = {}
    for omega in (d.omega0, -d.omega0, 0.0):
        resp = response(d.a, b, omega)
        if resp.value < 0.0:
            raise NegativeRateError(omega, boundary_bracket(omega, d.a, b))
        raw[omega] = two_lambda2 * resp.value
    gamma_z = raw[0.0] if gamma_z_convention == "eq7" else 0.5 * raw[0.0]
    return DecayRates(gamma_plus=raw[-d.omega0], gamma_minus=raw[d.omega0], gamma_z=gamma_z)


def generator(r: DecayRates, omega_eff: float) -> GeneratorMatrix:
    """Drift matrix U and inhomogeneity v with dB/dtau = U B + v.

    The transverse block rotates at the effective gap and decays at the
    transverse rate; the z component relaxes at the longitudinal rate toward
    the equilibrium set by v = (0, 0, gamma_+ - gamma_-).
    """
    gt = r.transverse_decay
    gl = r.longitudinal_decay
    drift = np.array(
        [
            [-gt, -omega_eff, 0.0],
            [omega_eff, -gt, 0.0],
            [0.0, 0.0, -gl],
        ]
    )
    inhomogeneity = np.array([0.0, 0.0, r.gamma_plus - r.gamma_minus])
    return GeneratorMatrix(drift=drift, inhomogeneity=inhomogeneity)


def evolve_analytic(s0: BlochState, r: DecayRates, omega_eff: float, tau: float) -> BlochState:
    """Closed-form solution of the Bloch equation after proper time ``tau``.

    The transverse components spiral down with decay exp(-transverse_decay
    tau) and phase omega_eff tau; the z component relaxes exponentially
    toward its equilibrium. When both gap-frequency rates vanish the
    equilibrium is undefined and z is simply conserved. Valid for any
    initial state in the ball, so the flow composes as a semigroup.
    """
    if tau < 0.0:
        raise ValueError(f"tau must be non-negative, got {tau!r}")
    if tau == 0.0:
        return s0
    gt = r.transverse_decay
    gl = r.longitudinal_decay
    damp_t = math.exp(-gt * tau)
    phase = omega_eff * tau
    c, s = math.cos(phase), math.sin(phase)
    bx = damp_t * (c * s0.bx - s * s0.by)
    by = damp_t * (s * s0.bx + c * s0.by)
    if gl == 0.0:
        bz = s0.bz
    else:
        b_eq = r.bz_equilibrium
        bz = math.exp(-gl * tau) * (s0.bz - b_eq) + b_eq
    return BlochState(bx, by, bz)


def evolve_numeric_oracle(
    s0: BlochState,
    g: GeneratorMatrix,
    tau: float,
    step: float | None = None,
    tol: float = 1e-9,
    max_refinements: int = 20,
) -> BlochState:
    """Integrate dB/dtau = U B + v with classical RK4 and step halving.

    Halves the step until two successive refinements agree componentwise to
    ``tol``. Independent of the closed-form propagator.
    """
    if tau < 0.0:
        raise ValueError(f"tau must be non-negative, got {tau!r}")
    if tau == 0.0:
        return s0
    if step is None:
        step = tau / 64.0
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step!r}")

    u = g.drift
    v = g.inhomogeneity

    def rk4(n_steps: int) -> np.ndarray:
        h = tau / n_steps
        b = s0.as_array()
        for _ in range(n_steps):
            k1 = u @ b + v
            k2 = u @ (b + 0.5 * h * k1) + v
            k3 = u @ (b + 0.5 * h * k2) + v
            k4 = u @ (b + h * k3) + v
            b = b + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        return b

    n = max(1, math.ceil(tau / step))
    previous = rk4(n)
    for _ in range(max_refinements):
        n *= 2
        current = rk4(n)
        if np.max(np.abs(current - previous)) < tol:
            return BlochState(*current)
        previous = current
    raise OracleConvergenceError(
        f"RK4 refinement did not reach componentwise tolerance {tol!r} within "
        f"{max_refinements} halvings"
    )
