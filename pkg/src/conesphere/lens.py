"""Overlap of two planar circles.

The circle of radius ``r1`` is centered at the origin, the circle of radius
``r2`` at ``(-b, 0)``.  The lens chord sits at abscissa ``x1`` measured from
the first center (``x2 = b + x1`` from the second).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateError, InvalidInputError

ACOS_TOL = 1e-12


@dataclass(frozen=True)
class LensSection:
    x1: float
    x2: float
    rho: float
    alpha1: float
    alpha2: float
    area: float


def lens_ordinates(r1: float, r2: float, b: float) -> tuple[float, float]:
    if b == 0:
        raise DegenerateError("concentric circles have no lens chord")
    x1 = (r2 * r2 - r1 * r1 - b * b) / (2.0 * b)
    return x1, b + x1


def lens_section(r1: float, r2: float, b: float) -> LensSection:
    """Full lens description, including the disjoint and nested cases.

    For disjoint circles every field but the ordinates is zero; for nested
    circles the inner circle gets angle ``pi`` and the outer one ``0``.
    """
    if r1 < 0 or r2 < 0 or b < 0:
        raise InvalidInputError("radii and distance must be nonnegative")
    if b >= r1 + r2:
        x1, x2 = lens_ordinates(r1, r2, b) if b > 0 else (0.0, 0.0)
        return LensSection(x1, x2, 0.0, 0.0, 0.0, 0.0)
    if b + min(r1, r2) <= max(r1, r2):
        x1, x2 = lens_ordinates(r1, r2, b) if b > 0 else (0.0, 0.0)
        if r1 <= r2:
            return LensSection(x1, x2, 0.0, math.pi, 0.0, math.pi * r1 * r1)
        return LensSection(x1, x2, 0.0, 0.0, math.pi, math.pi * r2 * r2)

    x1, x2 = lens_ordinates(r1, r2, b)
    # factored form of ((b + r2)^2 - r1^2)(r1^2 - (r2 - b)^2)
    disc = (b + r2 - r1) * (b + r2 + r1) * (r1 - r2 + b) * (r1 + r2 - b)
    c1 = -x1 / r1
    c2 = x2 / r2
    if disc < 0 or abs(c1) > 1 + ACOS_TOL or abs(c2) > 1 + ACOS_TOL:
        # rounding at tangency: the rims only touch
        if r1 + r2 - b < b - abs(r1 - r2):
            return LensSection(x1, x2, 0.0, 0.0, 0.0, 0.0)
        small = min(r1, r2)
        return LensSection(x1, x2, 0.0, math.pi * (r1 <= r2), math.pi * (r2 < r1),
                           math.pi * small * small)
    rho = math.sqrt(disc) / (2.0 * b)
    # atan2 keeps full precision where acos of a value near -1 or 1 would not
    a1 = math.atan2(rho, -x1)
    a2 = math.atan2(rho, x2)
    area = a2 * r2 * r2 + a1 * r1 * r1 - rho * b
    return LensSection(x1, x2, rho, a1, a2, max(area, 0.0))


def lens_area(r1: float, r2: float, b: float) -> float:
    """Area of the intersection of two disks with center distance ``b``.

    Examples
    --------
    >>> round(lens_area(1.0, 1.0, 2 ** 0.5), 7)
    0.5707963
    """
    if r1 < 0 or r2 < 0:
        raise InvalidInputError("radii must be nonnegative")
    if b < 0:
        raise InvalidInputError("distance must be nonnegative")
    return lens_section(r1, r2, b).area
