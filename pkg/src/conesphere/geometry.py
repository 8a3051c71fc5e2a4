"""Canonical cone/sphere parameters and reduction from 3-D placements.

Cone frame: apex at the origin, axis along +z.  The sphere center sits at
``(-b, 0, -d)``, so ``d > 0`` puts the center behind the apex plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

SPHERE_FACTOR = 4.0 * math.pi / 3.0


@dataclass(frozen=True)
class CanonicalGeometry:
    """The four principal parameters.

    Attributes
    ----------
    R : float
        Sphere radius, ``R > 0``.
    d : float
        Signed axial distance; the sphere center is at ``z = -d``.
    b : float
        Distance of the sphere center from the cone axis, ``b >= 0``.
    phi : float
        Cone half-aperture in radians, ``0 < phi <= pi``.
    """

    R: float
    d: float
    b: float
    phi: float

    def __post_init__(self):
        for name in ("R", "d", "b", "phi"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidInputError(f"{name} must be finite")
        if self.R <= 0:
            raise InvalidInputError(f"R must be positive, got {self.R}")
        if self.b < 0:
            raise InvalidInputError(f"b must be nonnegative, got {self.b}")
        if not 0 < self.phi <= math.pi:
            raise InvalidInputError(f"phi must lie in (0, pi], got {self.phi}")

    @property
    def sphere_volume(self) -> float:
        return SPHERE_FACTOR * self.R**3

    @property
    def apex_inside(self) -> bool:
        return self.d * self.d + self.b * self.b <= self.R * self.R


@dataclass(frozen=True)
class SceneGeometry:
    """Raw placement: sphere center ``S``, apex ``C``, axis ``a``."""

    S: tuple[float, float, float]
    C: tuple[float, float, float]
    a: tuple[float, float, float]
    R: float
    phi: float


@dataclass(frozen=True)
class ReducedScalars:
    d_hat: float
    b_hat: float


def reduce_to_canonical(scene: SceneGeometry) -> CanonicalGeometry:
    """Project the sphere center onto the cone axis.

    ``t = (C - S).a / a.a`` locates the foot point, ``b = |S - C + t a|``
    and ``d = t |a|``.
    """
    S = np.asarray(scene.S, dtype=float)
    C = np.asarray(scene.C, dtype=float)
    a = np.asarray(scene.a, dtype=float)
    if S.shape != (3,) or C.shape != (3,) or a.shape != (3,):
        raise InvalidInputError("S, C and a must be 3-vectors")
    if not (np.all(np.isfinite(S)) and np.all(np.isfinite(C)) and np.all(np.isfinite(a))):
        raise InvalidInputError("scene coordinates must be finite")
    aa = float(a @ a)
    if aa == 0.0:
        raise InvalidInputError("cone axis vector must be nonzero")
    t = float((C - S) @ a) / aa
    b = float(np.linalg.norm(S - C + t * a))
    d = t * math.sqrt(aa)
    return CanonicalGeometry(R=scene.R, d=d, b=b, phi=scene.phi)


def normalize(geom: CanonicalGeometry) -> ReducedScalars:
    return ReducedScalars(geom.d / geom.R, geom.b / geom.R)
