"""Vacuum correlation functions along the accelerated worldline and their
frequency-domain response.

The response at frequency ``omega`` is the Fourier transform, in proper-time
difference, of the two-point correlation function evaluated on the uniformly
accelerated trajectory. Both a closed form (thermal prefactor times a
boundary bracket built from the special functions :func:`f1` / :func:`f2`)
and an independent quadrature oracle (:func:`response_numeric_oracle`) are
provided; the oracle integrates the regularized correlation function directly
and extrapolates the regulator to zero, and never touches the closed form.
"""

import cmath
import math
from dataclasses import dataclass

from scipy.integrate import quad

from .geometry import BoundaryConfig, image_distances

__all__ = [
    "RegularizationFault",
    "OracleConvergenceError",
    "WightmanParams",
    "ResponseValue",
    "wightman",
    "f1",
    "f2",
    "boundary_bracket",
    "response",
    "response_numeric_oracle",
]

# Relative floor below which a correlation-function denominator is treated as
# a genuine light-cone singularity rather than roundoff.
DENOMINATOR_FLOOR = 1e-12

# Regulator values used by the oracle unless the caller overrides them.
DEFAULT_EPSILON_SCHEDULE = (8e-3, 4e-3, 2e-3, 1e-3)

# The correlation function decays like exp(-a|s|); the quadrature window must
# push the truncated tail below 1e-12.
_MIN_WINDOW_EXPONENT = -math.log(1e-12)


class RegularizationFault(RuntimeError):
    """A regularized denominator collapsed below the configured floor."""


class OracleConvergenceError(RuntimeError):
    """A numeric oracle failed to converge within its configured budget."""


@dataclass(frozen=True)
class WightmanParams:
    """Inputs for direct evaluation of the regularized correlation function.

    ``epsilon`` is the dimensionless regulator entering sinh(a s / 2 - i eps);
    only the numeric oracle uses it, the closed forms do not.
    """

    a: float
    boundary: BoundaryConfig
    epsilon: float = 1e-3

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > 0.0):
            raise ValueError(f"acceleration must be positive and finite, got {self.a!r}")
        if not (math.isfinite(self.a * self.a)):
            raise ValueError(f"acceleration {self.a!r} overflows squared-scale arithmetic")
        if not (math.isfinite(self.epsilon) and self.epsilon > 0.0):
            raise ValueError(f"regulator epsilon must be positive, got {self.epsilon!r}")


@dataclass(frozen=True)
class ResponseValue:
    """Response at one frequency. A physically valid response is >= 0; signed
    values are reported as computed so that regime violations surface
    downstream (see the decay-rate constructor)."""

    omega: float
    value: float


def _inverse_term(z: complex, ad: float) -> complex:
    den = z - ad * ad
    scale = max(1.0, ad * ad)
    if abs(den) < DENOMINATOR_FLOOR * scale:
        raise RegularizationFault(
            f"denominator magnitude {abs(den):.3e} under floor for image separation a*d={ad!r}; "
            "epsilon is too small near an image light-cone crossing"
        )
    return 1.0 / den


def wightman(p: WightmanParams, dtau: float) -> complex:
    """Regularized vacuum correlation function at proper-time difference ``dtau``.

    With S = sinh^2(a dtau/2 - i eps) and the image separations d of the
    boundary geometry, returns

        -(a^2 / 16 pi^2) [ 1/S - 1/(S - (a R cos alpha)^2)
                               + 1/(S - (a R)^2) - 1/(S - (a R sin alpha)^2) ];

    the unbounded vacuum keeps only the first term.
    """
    z = cmath.sinh(0.5 * p.a * dtau - 1j * p.epsilon) ** 2
    total = _inverse_term(z, 0.0)
    if p.boundary.mirrors:
        d_cos, d_sin, d_diag = image_distances(p.boundary)
        total -= _inverse_term(z, p.a * d_cos)
        total += _inverse_term(z, p.a * d_diag)
        total -= _inverse_term(z, p.a * d_sin)
    return -(p.a * p.a) / (16.0 * math.pi**2) * total


def f1(omega: float, a: float, r: float) -> float:
    """Oscillatory boundary correction sin[(2 omega/a) asinh(a r)] / (2 r sqrt(1+a^2 r^2) omega).

    Even in omega; at omega = 0 returns the analytic limit :func:`f2`.
    """
    if not (a > 0.0 and r > 0.0):
        raise ValueError(f"f1 requires a > 0 and r > 0, got a={a!r}, r={r!r}")
    if omega == 0.0:
        return f2(a, r)
    ar = a * r
    return math.sin(2.0 * omega / a * math.asinh(ar)) / (
        2.0 * r * math.sqrt(1.0 + ar * ar) * omega
    )


def f2(a: float, r: float) -> float:
    """Zero-frequency limit of :func:`f1`: asinh(a r) / (a r sqrt(1 + a^2 r^2))."""
    if not (a > 0.0 and r > 0.0):
        raise ValueError(f"f2 requires a > 0 and r > 0, got a={a!r}, r={r!r}")
    ar = a * r
    return math.asinh(ar) / (ar * math.sqrt(1.0 + ar * ar))


def _bracket_series(omega: float, a: float, R: float, alpha: float) -> float:
    # Small-separation branch. The quadratic terms of the four-term bracket
    # cancel identically (cos^2 + sin^2 = 1), so direct evaluation loses all
    # significance once (aR)^4 drops toward machine epsilon; the quartic and
    # sextic terms below are exact in that regime.
    x2 = (a * R) ** 2
    nu2 = (2.0 * omega / a) ** 2
    c2 = math.cos(alpha) ** 2
    s2 = math.sin(alpha) ** 2
    k4 = 8.0 / 15.0 + nu2 / 6.0 + nu2 * nu2 / 120.0
    k6 = 16.0 / 35.0 + 7.0 / 45.0 * nu2 + nu2 * nu2 / 90.0 + nu2**3 / 5040.0
    return c2 * s2 * x2 * x2 * (2.0 * k4 - 3.0 * k6 * x2)


def boundary_bracket(omega: float, a: float, boundary: BoundaryConfig) -> float:
    """Boundary factor multiplying the thermal response prefactor.

    1 for the unbounded vacuum; with mirrors,
    1 - f1(R cos alpha) - f1(R sin alpha) + f1(R) at frequency ``omega``
    (the zero-frequency version via f2 is the omega = 0 case of the same
    expression). Oscillation of f1 can in principle drive this negative;
    the value is reported signed.
    """
    if not boundary.mirrors:
        return 1.0
    d_cos, d_sin, d_diag = image_distances(boundary)
    # Cancellation rescue: both expansion parameters must be small.
    if max(a * d_diag, 2.0 * abs(omega) * d_diag) <= 0.02:
        return _bracket_series(omega, a, boundary.R, boundary.alpha)
    return 1.0 - f1(omega, a, d_cos) - f1(omega, a, d_sin) + f1(omega, a, d_diag)


def _thermal_prefactor(omega: float, a: float) -> float:
    # omega / (2 pi (1 - exp(-2 pi omega / a))), stable for any omega != 0.
    x = 2.0 * math.pi * omega / a
    if x < -690.0:
        # deep emission suppression; avoids expm1 overflow
        return -(a / (4.0 * math.pi**2)) * x * math.exp(x)
    return omega / (2.0 * math.pi * (-math.expm1(-x)))


def response(a: float, boundary: BoundaryConfig, omega: float) -> ResponseValue:
    """Closed-form detector response at frequency ``omega``.

    omega/(2 pi (1 - e^{-2 pi omega/a})) times the boundary bracket; the
    removable omega = 0 point is evaluated on its own analytic branch,
    a/(4 pi^2) times the zero-frequency bracket.
    """
    if not (math.isfinite(a) and a > 0.0):
        raise ValueError(f"acceleration must be positive and finite, got {a!r}")
    br = boundary_bracket(omega, a, boundary)
    if omega == 0.0:
        value = a / (4.0 * math.pi**2) * br
    else:
        value = _thermal_prefactor(omega, a) * br
    return ResponseValue(omega=omega, value=value)


def _extrapolate_to_zero(xs: list[float], ys: list[float]) -> list[float]:
    # Neville tableau evaluated at 0; returns the estimate at each order.
    p = list(ys)
    n = len(p)
    estimates = [p[0]]
    for k in range(1, n):
        for i in range(n - k):
            p[i] = (xs[i + k] * p[i] - xs[i] * p[i + 1]) / (xs[i + k] - xs[i])
        estimates.append(p[0])
    return estimates


def response_numeric_oracle(
    p: WightmanParams,
    omega: float,
    window: float | None = None,
    epsilon_schedule: tuple[float, ...] | None = None,
    converge_rtol: float = 5e-4,
    converge_atol: float = 1e-7,
    quad_limit: int = 800,
) -> float:
    """Quadrature estimate of the response, independent of the closed form.

    For each regulator value the correlation function is integrated against
    exp(i omega s) over [-window, window] (folded onto [0, window] using
    hermiticity of the correlation function), then the regulator is
    extrapolated to zero with a Neville polynomial fit.

    Parameters
    ----------
    p : WightmanParams
        Acceleration and boundary geometry; ``p.epsilon`` is ignored in favor
        of the schedule.
    omega : float
        Frequency argument.
    window : float, optional
        Integration half-width. Must satisfy exp(-a * window) < 1e-12;
        defaults to 30/a.
    epsilon_schedule : sequence of float, optional
        Strictly decreasing regulator values.

    Raises
    ------
    OracleConvergenceError
        If the last two extrapolation orders disagree beyond the configured
        tolerance.
    """
    if window is None:
        window = 30.0 / p.a
    if p.a * window < _MIN_WINDOW_EXPONENT:
        raise ValueError(
            f"window {window!r} too small: need a*window >= {_MIN_WINDOW_EXPONENT:.2f} "
            "so the truncated tail is below 1e-12"
        )
    schedule = tuple(epsilon_schedule if epsilon_schedule is not None else DEFAULT_EPSILON_SCHEDULE)
    if len(schedule) < 2:
        raise ValueError("epsilon schedule needs at least two values")
    if any(e <= 0.0 for e in schedule) or any(
        schedule[i + 1] >= schedule[i] for i in range(len(schedule) - 1)
    ):
        raise ValueError(f"epsilon schedule must be positive and strictly decreasing, got {schedule}")

    breakpoints = []
    if p.boundary.mirrors:
        for d in image_distances(p.boundary):
            s_cross = 2.0 / p.a * math.asinh(p.a * d)
            if 0.0 < s_cross < window:
                breakpoints.append(s_cross)

    values = []
    for eps in schedule:
        params = WightmanParams(a=p.a, boundary=p.boundary, epsilon=eps)

        def integrand(s: float) -> float:
            # G(-s) = conj(G(s)) folds the two-sided transform onto s >= 0.
            return 2.0 * (cmath.exp(1j * omega * s) * wightman(params, s)).real

        value, _err = quad(
            integrand,
            0.0,
            window,
            points=sorted(breakpoints) or None,
            limit=quad_limit,
            epsabs=1e-12,
            epsrel=1e-10,
        )
        values.append(value)

    estimates = _extrapolate_to_zero(list(schedule), values)
    drift = abs(estimates[-1] - estimates[-2])
    if drift > converge_atol + converge_rtol * abs(estimates[-1]):
        raise OracleConvergenceError(
            f"extrapolation drift {drift:.3e} exceeds tolerance at omega={omega!r}, a={p.a!r}"
        )
    return estimates[-1]
