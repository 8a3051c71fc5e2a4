"""Slice roots and case taxonomy.

In the symmetry plane the two cone generators are the lines through the
apex with directions ``(+sin phi, cos phi)`` (away from the sphere center)
and ``(-sin phi, cos phi)`` (toward it).  Their intersections with the
sphere, in units of ``zhat = z / (R cos phi)``, are the roots of

    zhat**2 + 2 (d cos + b sin) zhat + d**2 + b**2 - 1 = 0   (pair 1, far wall)
    zhat**2 + 2 (d cos - b sin) zhat + d**2 + b**2 - 1 = 0   (pair 2, near wall)

with ``d`` and ``b`` scaled by ``R``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction

from .geometry import CanonicalGeometry
from .onaxis import HALF_PI_TOL

DISC_TOL = 1e-12


class CaseLabel(str, enum.Enum):
    DISJOINT = "Disjoint"
    SPHERE_INSIDE_CONE = "SphereInsideCone"
    ON_AXIS_APEX_INSIDE = "OnAxisApexInside"
    ON_AXIS_APEX_OUTSIDE = "OnAxisApexOutside"
    OFF_AXIS_APEX_INSIDE = "OffAxisApexInside"
    OFF_AXIS_TWO_BRANCH = "OffAxisTwoBranch"
    OFF_AXIS_ONE_BRANCH = "OffAxisOneBranch"
    HALF_SPACE = "HalfSpace"
    STRETCHED = "Stretched"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class RootPair:
    """Roots of ``x**2 + 2 p x + q``: real ``lo <= hi`` or ``re +- i im``."""

    p: float
    q: float
    disc: float

    @property
    def real(self) -> bool:
        return self.disc >= -DISC_TOL

    def _real_roots(self) -> tuple[float, float]:
        # larger-magnitude root first, the other from the product q
        big = -self.p - math.copysign(math.sqrt(max(self.disc, 0.0)), self.p)
        small = self.q / big if big != 0.0 else 0.0
        return (big, small) if big <= small else (small, big)

    @property
    def lo(self) -> float:
        return self._real_roots()[0]

    @property
    def hi(self) -> float:
        return self._real_roots()[1]

    @property
    def re(self) -> float:
        return -self.p

    @property
    def im(self) -> float:
        return math.sqrt(max(-self.disc, 0.0))

    def residual(self, x: float) -> float:
        return x * x + 2 * self.p * x + self.q

    def roots(self) -> tuple[complex, complex]:
        if self.real:
            return (self.lo, self.hi)
        return (complex(self.re, -self.im), complex(self.re, self.im))


def _pair(p: float, q: float, disc: float) -> RootPair:
    return RootPair(p, q, disc)


@dataclass(frozen=True)
class SliceRoots:
    z1: RootPair
    z2: RootPair

    def all_roots(self) -> list[complex]:
        return [*self.z1.roots(), *self.z2.roots()]


def slice_roots(d_hat: float, b_hat: float, phi: float) -> SliceRoots:
    s, c = math.sin(phi), math.cos(phi)
    # exact before the single rounding; q is tiny when the apex nears the surface
    q = float(Fraction(d_hat) ** 2 + Fraction(b_hat) ** 2 - 1)
    p1 = d_hat * c + b_hat * s
    p2 = d_hat * c - b_hat * s
    # 1 - (d s -+ b c)**2 equals p**2 - q without the cancellation
    disc1 = 1.0 - (d_hat * s - b_hat * c) ** 2
    disc2 = 1.0 - (d_hat * s + b_hat * c) ** 2
    return SliceRoots(_pair(p1, q, disc1), _pair(p2, q, disc2))


def cap_inclusion(Z: float, phi: float, b: float) -> bool:
    """True when the polar cap beyond altitude ``Z`` lies inside the cone."""
    return Z * math.tan(phi) > b


def center_in_cone(geom: CanonicalGeometry) -> bool:
    return -geom.d > 0 and geom.b < -geom.d * math.tan(geom.phi)


def classify(geom: CanonicalGeometry) -> CaseLabel:
    R, d, b, phi = geom.R, geom.d, geom.b, geom.phi
    if phi > math.pi / 2 + HALF_PI_TOL:
        return CaseLabel.STRETCHED
    if abs(phi - math.pi / 2) < HALF_PI_TOL:
        return CaseLabel.HALF_SPACE
    if b == 0:
        if abs(d) <= R:
            return CaseLabel.ON_AXIS_APEX_INSIDE
        if d > R:
            return CaseLabel.DISJOINT
        if math.sin(phi) >= R / abs(d):
            return CaseLabel.SPHERE_INSIDE_CONE
        return CaseLabel.ON_AXIS_APEX_OUTSIDE
    dh, bh = d / R, b / R
    if dh * dh + bh * bh < 1:
        return CaseLabel.OFF_AXIS_APEX_INSIDE
    roots = slice_roots(dh, bh, phi)
    # with the apex outside both roots of a pair share a sign; only roots in
    # front of the apex (zhat > 0) belong to the cone rather than its mirror
    near = roots.z2
    if near.real and near.disc > DISC_TOL and near.hi > 0:
        far = roots.z1
        if far.real and far.disc > DISC_TOL and far.hi > 0:
            return CaseLabel.OFF_AXIS_TWO_BRANCH
        return CaseLabel.OFF_AXIS_ONE_BRANCH
    if center_in_cone(geom):
        return CaseLabel.SPHERE_INSIDE_CONE
    return CaseLabel.DISJOINT
