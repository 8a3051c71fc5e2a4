"""Closed-form volumes for a sphere centered on the cone axis (``b = 0``)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import InvalidInputError, WrongCaseError
from .geometry import SPHERE_FACTOR

HALF_PI_TOL = 1e-9


def cone_volume(rho: float, Z: float) -> float:
    return math.pi * rho * rho * Z / 3.0


def cap_volume(R: float, h: float) -> float:
    """Volume of a spherical cap of thickness ``h`` cut from radius ``R``."""
    # tolerate rounding right at the ends of [0, 2R]
    slack = 1e-12 * R
    if h < -slack or h > 2 * R + slack:
        raise InvalidInputError(f"cap thickness {h} outside [0, {2 * R}]")
    h = min(max(h, 0.0), 2 * R)
    return math.pi * h * h * (3 * R - h) / 3.0


def frustum_volume(rho1: float, rho2: float, height: float) -> float:
    return math.pi * height * (rho1 * rho1 + rho1 * rho2 + rho2 * rho2) / 3.0


@dataclass
class OnAxisBreakdown:
    """Transition altitudes/radii and the region volumes that sum to ``volume``."""

    Z: tuple[float, ...]
    rho: tuple[float, ...]
    regions: dict[str, float] = field(default_factory=dict)

    @property
    def volume(self) -> float:
        return sum(self.regions.values())


def transition_altitude(R: float, d: float, phi: float) -> float:
    """Altitude where the cone wall meets the sphere, apex inside."""
    s = math.sin(phi)
    disc = R * R - (d * s) ** 2
    if disc < 0:
        raise InvalidInputError("cone wall misses the sphere")
    return math.cos(phi) * math.sqrt(disc) + d * s * s - d


def on_axis_inside(R: float, d: float, phi: float) -> OnAxisBreakdown:
    """Cone up to the transition altitude plus the north cap above it."""
    if d * d > R * R * (1 + 1e-12):
        raise WrongCaseError(f"apex outside the sphere (d={d}, R={R})")
    if not 0 < phi <= math.pi / 2 + HALF_PI_TOL:
        raise WrongCaseError("inside formula needs 0 < phi <= pi/2")
    d = max(-R, min(R, d))
    if abs(phi - math.pi / 2) < HALF_PI_TOL:
        return OnAxisBreakdown((0.0,), (math.inf,), {"cap": cap_volume(R, R - d)})
    Z = max(transition_altitude(R, d, phi), 0.0)
    rho = Z * math.tan(phi)
    h = min(max(R - Z - d, 0.0), 2 * R)
    return OnAxisBreakdown((Z,), (rho,), {"cone": cone_volume(rho, Z), "cap": cap_volume(R, h)})


def on_axis_outside(R: float, d: float, phi: float) -> OnAxisBreakdown:
    """South cap + truncated cone + north cap for an apex below the sphere."""
    if d >= -R:
        raise WrongCaseError(f"apex not below the sphere (d={d}, R={R})")
    s, c = math.sin(phi), math.cos(phi)
    if s >= R / abs(d):
        return OnAxisBreakdown((), (), {"sphere": SPHERE_FACTOR * R**3})
    root = c * math.sqrt(R * R - (d * s) ** 2)
    Z1 = -root + d * s * s - d
    Z2 = root + d * s * s - d
    t = math.tan(phi)
    rho1, rho2 = Z1 * t, Z2 * t
    regions = {
        "south_cap": cap_volume(R, R + Z1 + d),
        "frustum": frustum_volume(rho1, rho2, Z2 - Z1),
        "north_cap": cap_volume(R, R - Z2 - d),
    }
    return OnAxisBreakdown((Z1, Z2), (rho1, rho2), regions)


def on_axis_volume(R: float, d: float, phi: float) -> OnAxisBreakdown:
    """Any on-axis placement, including ``phi > pi/2`` via the complement."""
    if phi >= math.pi:
        return OnAxisBreakdown((), (), {"sphere": SPHERE_FACTOR * R**3})
    if phi > math.pi / 2 + HALF_PI_TOL:
        inner = on_axis_volume(R, -d, math.pi - phi)
        return OnAxisBreakdown(inner.Z, inner.rho,
                               {"sphere": SPHERE_FACTOR * R**3, "complement": -inner.volume})
    if abs(phi - math.pi / 2) < HALF_PI_TOL:
        return OnAxisBreakdown((), (), {"cap": cap_volume(R, min(max(R - d, 0.0), 2 * R))})
    if abs(d) <= R:
        return on_axis_inside(R, d, phi)
    if d < -R:
        return on_axis_outside(R, d, phi)
    return OnAxisBreakdown((), (), {})
