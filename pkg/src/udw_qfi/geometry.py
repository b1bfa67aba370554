"""Worldline and mirror geometry for a uniformly accelerated point detector.

Natural units c = 1 throughout the package: accelerations carry inverse-length
units and proper time carries length units.
"""

import math
from dataclasses import dataclass

__all__ = [
    "RindlerWorldline",
    "BoundaryConfig",
    "worldline_coords",
    "image_distances",
]


@dataclass(frozen=True)
class RindlerWorldline:
    """Trajectory of constant Rindler position xi = 1/a.

    The detector accelerates along +x with proper acceleration ``a`` and sits
    at inertial coordinates (t, x) = (0, 0) at proper time tau = 0.
    """

    a: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and self.a > 0.0):
            raise ValueError(f"proper acceleration must be positive and finite, got {self.a!r}")

    @property
    def xi(self) -> float:
        """Rindler position of the trajectory; xi * a == 1 identically."""
        return 1.0 / self.a


@dataclass(frozen=True)
class BoundaryConfig:
    """Field boundary geometry relative to the accelerated trajectory.

    Either the unbounded vacuum, or two perpendicular perfectly reflecting
    plane mirrors. ``R`` is the distance from the trajectory to the mirrors'
    intersection line and ``alpha`` the angular position of the trajectory
    between the mirrors, strictly inside (0, pi/2): contact with a mirror
    makes an image separation vanish and is rejected outright.
    """

    mirrors: bool = False
    R: float | None = None
    alpha: float | None = None

    def __post_init__(self):
        if self.mirrors:
            if self.R is None or self.alpha is None:
                raise ValueError("mirror configuration requires both R and alpha")
            if not (math.isfinite(self.R) and self.R > 0.0):
                raise ValueError(f"mirror distance R must be positive and finite, got {self.R!r}")
            if not (0.0 < self.alpha < 0.5 * math.pi):
                raise ValueError(
                    f"alpha must lie strictly inside (0, pi/2), got {self.alpha!r}"
                )
        else:
            if self.R is not None or self.alpha is not None:
                raise ValueError("unbounded configuration takes no R or alpha")

    @classmethod
    def unbounded(cls) -> "BoundaryConfig":
        return cls(mirrors=False)

    @classmethod
    def two_perpendicular_mirrors(cls, R: float, alpha: float) -> "BoundaryConfig":
        return cls(mirrors=True, R=R, alpha=alpha)


def worldline_coords(w: RindlerWorldline, tau: float) -> tuple[float, float]:
    """Inertial coordinates (t, x) of the detector at proper time ``tau``.

    t = sinh(a tau)/a and x = (cosh(a tau) - 1)/a, so the hyperbolic identity
    (a t)^2 - (a x + 1)^2 = -1 holds along the whole trajectory. Total for
    finite tau; coordinates that exceed float range saturate to infinity.
    """
    y = w.a * tau
    try:
        t = math.sinh(y) / w.a
        # cosh(y) - 1 without cancellation at small |y|
        x = 2.0 * math.sinh(0.5 * y) ** 2 / w.a
    except OverflowError:
        return math.copysign(math.inf, tau), math.inf
    return t, x


def image_distances(b: BoundaryConfig) -> tuple[float, float, float]:
    """Effective separations of the three image trajectories.

    Returned in the order (cos-term, sin-term, diagonal-term):
    (R cos(alpha), R sin(alpha), R). Only defined for mirror configurations.
    """
    if not b.mirrors:
        raise ValueError("unbounded configuration has no image trajectories")
    return b.R * math.cos(b.alpha), b.R * math.sin(b.alpha), b.R
