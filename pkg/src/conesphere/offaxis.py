"""Off-axis intersection volume through complete elliptic integrals.

Each horizontal slice between two root altitudes is a lens whose area is
``alpha1 r1^2 + alpha2 r2^2 - rho b``.  Integrating the three terms in
``zhat = z / (R cos phi)`` and integrating the two arccos terms by parts
leaves integrals of ``zhat^m / sqrt(P)`` and ``1 / ((p - zhat) sqrt(P))``
with the quartic

    P(zhat) = 4 b^2 sin^2 zhat^2 - (zhat^2 + 2 d cos zhat + d^2 + b^2 - 1)^2

whose roots are the slice roots.  All lengths below are scaled by ``R``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from numpy.polynomial import Polynomial

from .classify import CaseLabel, RootPair, SliceRoots, cap_inclusion, slice_roots
from .elliptic import Quartic
from .errors import ConditioningError, WrongCaseError
from .geometry import CanonicalGeometry
from .onaxis import cap_volume, cone_volume

MIN_COS = 1e-3
# budget for rounding in the cancelling sums, relative to the total volume
CANCELLATION_BUDGET = 1e-9
_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class Endpoint:
    """A root used as an integration limit and the wall it belongs to."""

    zhat: float
    pair: int  # 1: far wall, 2: near wall


@dataclass
class SliceTerms:
    lower: float
    upper: float
    v1: float
    v2: float
    v_delta: float
    scale: float = 0.0

    @property
    def volume(self) -> float:
        return self.v1 + self.v2 - self.v_delta


@dataclass
class OffAxisBreakdown:
    regions: dict[str, float] = field(default_factory=dict)
    slices: dict[str, SliceTerms] = field(default_factory=dict)

    @property
    def volume(self) -> float:
        return sum(self.regions.values())


def build_quartic(roots: SliceRoots, lower: Endpoint, upper: Endpoint) -> Quartic:
    return Quartic(roots.all_roots(), lower.zhat, upper.zhat)


def _sector_angles(end: Endpoint, b_hat: float, sin_phi: float) -> tuple[float, float]:
    # far-wall root: cone disk internally tangent inside the sphere disk;
    # near-wall root: either the sphere disk sits inside the cone disk
    # (zhat sin > b) or the two touch externally
    if end.pair == 1:
        return math.pi, 0.0
    return 0.0, (math.pi if end.zhat * sin_phi > b_hat else 0.0)


def _triangle_parts(quartic: Quartic, geom: CanonicalGeometry) -> tuple[float, float]:
    pre = 0.5 * geom.R**3 * math.cos(geom.phi)
    val, scale = quartic.sqrt_integral_parts()
    return pre * val, pre * scale


def triangle_term(quartic: Quartic, geom: CanonicalGeometry) -> float:
    """``v_delta = (1/2) R^3 cos(phi) int sqrt(P) dzhat``."""
    return _triangle_parts(quartic, geom)[0]


def _cone_sector_parts(quartic, lower, upper, geom) -> tuple[float, float]:
    R, phi = geom.R, geom.phi
    d, b = geom.d / R, geom.b / R
    s, c = math.sin(phi), math.cos(phi)
    a_lo, _ = _sector_angles(lower, b, s)
    a_hi, _ = _sector_angles(upper, b, s)
    center, M = quartic.moments(4)
    zhat = Polynomial([center, 1.0])
    integrand = zhat**2 * (zhat**2 + (1.0 - d * d - b * b)) / 3.0
    terms = [upper.zhat**3 * a_hi / 3.0, -lower.zhat**3 * a_lo / 3.0]
    terms += [cf * M[m] for m, cf in enumerate(integrand.coef)]
    pre = R**3 * c * s * s
    return pre * math.fsum(terms), pre * sum(map(abs, terms))


def cone_sector_term(quartic: Quartic, lower: Endpoint, upper: Endpoint,
                     geom: CanonicalGeometry) -> float:
    """``v1 = int alpha1 r1^2 dz`` after one integration by parts.

    The arccos boundary values at the two roots are exactly 0 or pi; the
    remaining integral is ``(1/3) int zhat^2 (zhat^2 + 1 - d^2 - b^2) / sqrt(P)``.
    """
    return _cone_sector_parts(quartic, lower, upper, geom)[0]


def sphere_sector_polynomial(d: float, b: float, phi: float):
    """Pieces of the by-parts integrand for ``v2``.

    Returns ``(G, poly, (p_plus, c_plus), (p_minus, c_minus))`` such that

        int W alpha2 dzhat = [G alpha2] + int poly / sqrt(P)
                             + c_plus J(p_plus) + c_minus J(p_minus)

    with ``W = 1 - (zhat cos + d)^2`` and ``J(p) = int 1/((p - zhat) sqrt(P))``.
    """
    s2 = math.sin(phi) ** 2
    c = math.cos(phi)
    c2 = c * c
    G = Polynomial([0.0, 1.0]) - Polynomial([d, c]) ** 3 / (3.0 * c)
    # 3 cos^3 G N zbar / W split into polynomial part + two simple poles
    expansion = Polynomial([
        2 * s2 + 3 * d * d * s2 - 2 * b * b * c2 + d * d * c2 * (b * b - d * d),
        d * c * (-3 + 6 * c2 + 2 * b * b * c2 - 4 * d * d * c2),
        c2 * (2 + c2 + b * b * c2 - d * d * (1 + 5 * c2)),
        -2 * d * c**3 * (1 + c2),
        -(c2 * c2),
    ])
    x_minus = (2 - 3 * d) * (1 - d) ** 2 * s2 - b * b * (2 - 3 * d) * c2
    x_plus = (2 + 3 * d) * (1 + d) ** 2 * s2 - b * b * (2 + 3 * d) * c2
    poly = G * Polynomial([-2 * c * d, -2.0]) + expansion / (3 * c2)
    p_plus = (1 - d) / c
    p_minus = -(1 + d) / c
    return G, poly, (p_plus, -x_minus / (6 * c**3)), (p_minus, x_plus / (6 * c**3))


def sphere_sector_decomposition(d: float, b: float, phi: float, shift: float = 0.0,
                                center: float = 0.0):
    """By-parts pieces for ``v2`` with antiderivative ``G + shift``.

    Returns ``(G + shift, poly, [(p_plus, c_plus), (p_minus, c_minus)])`` with

        int W alpha2 dzhat = [(G + shift) alpha2] + int poly / sqrt(P)
                             + sum c_p J(p)

    obtained by dividing ``(G + shift) cos N zbar`` by ``W``.  ``G`` and
    ``poly`` are polynomials in ``zhat - center``; the pole positions stay in
    ``zhat``.  With ``shift = center = 0`` this reproduces
    :func:`sphere_sector_polynomial`; picking ``shift = -G(p)`` removes the
    pole at ``p`` outright.
    """
    c = math.cos(phi)
    zhat = Polynomial([center, 1.0])
    zbar = Polynomial([c * center + d, c])
    Gs = zhat - zbar**3 / (3.0 * c) + shift
    N = 1.0 - zhat**2 - 2.0 * c * d * zhat - d * d + b * b
    W = 1 - zbar**2
    dW = W.deriv()
    numer = c * Gs * N * zbar
    quot, _ = divmod(numer, W)
    poly = Gs * (-2.0 * (zhat + c * d)) + quot
    poles = []
    for p in ((1 - d) / c, -(1 + d) / c):
        # numer/W ~ A/(zhat - p) = -A/(p - zhat)
        x = p - center
        A = c * Gs(x) * N(x) * zbar(x) / dW(x)
        poles.append((p, -A))
    return Gs, poly, poles


def _sphere_sector_parts(quartic, lower, upper, geom) -> tuple[float, float]:
    R, phi = geom.R, geom.phi
    d, b = geom.d / R, geom.b / R
    s, c = math.sin(phi), math.cos(phi)
    # zero the residue of whichever sphere pole lies closer to the interval
    p_north, p_south = (1 - d) / c, -(1 + d) / c
    mid = 0.5 * (lower.zhat + upper.zhat)
    G0 = Polynomial([0.0, 1.0]) - Polynomial([d, c]) ** 3 / (3.0 * c)
    near = p_north if abs(p_north - mid) <= abs(p_south - mid) else p_south
    center, M = quartic.moments(4)
    G, poly, poles = sphere_sector_decomposition(d, b, phi, -G0(near), center)
    _, a_lo = _sector_angles(lower, b, s)
    _, a_hi = _sector_angles(upper, b, s)
    terms = [G(upper.zhat - center) * a_hi, -G(lower.zhat - center) * a_lo]
    terms += [cp * quartic.pole_integral(p) for p, cp in poles if p != near]
    terms += [cf * M[m] for m, cf in enumerate(poly.coef)]
    pre = R**3 * c
    return pre * math.fsum(terms), pre * sum(map(abs, terms))


def sphere_sector_term(quartic: Quartic, lower: Endpoint, upper: Endpoint,
                       geom: CanonicalGeometry) -> float:
    """``v2 = int alpha2 r2^2 dz`` after one integration by parts."""
    return _sphere_sector_parts(quartic, lower, upper, geom)[0]


def slice_terms(roots: SliceRoots, lower: Endpoint, upper: Endpoint,
                geom: CanonicalGeometry) -> SliceTerms:
    q = build_quartic(roots, lower, upper)
    v1, s1 = _cone_sector_parts(q, lower, upper, geom)
    v2, s2 = _sphere_sector_parts(q, lower, upper, geom)
    vt, st = _triangle_parts(q, geom)
    return SliceTerms(lower.zhat, upper.zhat, v1, v2, vt, s1 + s2 + st)


def _frustum(Z_lo: float, Z_hi: float, tan_phi: float) -> float:
    return cone_volume(Z_hi * tan_phi, Z_hi) - cone_volume(Z_lo * tan_phi, Z_lo)


def off_axis_breakdown(geom: CanonicalGeometry, label: CaseLabel) -> OffAxisBreakdown:
    """Region-by-region volume for the three off-axis labels.

    Raises :class:`ConditioningError` where the reduction is unreliable
    (grazing contact, nearly coincident roots, ``phi`` close to ``pi/2``).
    """
    R, d, b, phi = geom.R, geom.d, geom.b, geom.phi
    c = math.cos(phi)
    if c < MIN_COS:
        raise ConditioningError("phi too close to pi/2 for the zhat scaling")
    if b <= 0:
        raise WrongCaseError("off-axis routines need b > 0")
    tan_phi = math.tan(phi)
    roots = slice_roots(d / R, b / R, phi)
    unscale = R * c
    out = OffAxisBreakdown()

    def north_cap(z2: RootPair):
        Z = z2.hi * unscale
        if cap_inclusion(Z, phi, b):
            out.regions["north_cap"] = cap_volume(R, R - d - Z)

    def south_cap(z2: RootPair):
        Z = z2.lo * unscale
        if cap_inclusion(Z, phi, b):
            out.regions["south_cap"] = cap_volume(R, R + d + Z)

    def lens(name: str, lo: Endpoint, hi: Endpoint):
        terms = slice_terms(roots, lo, hi, geom)
        out.slices[name] = terms
        out.regions[name] = terms.volume

    z1, z2 = roots.z1, roots.z2
    if label is CaseLabel.OFF_AXIS_APEX_INSIDE:
        Z1 = z1.hi * unscale
        out.regions["cone"] = cone_volume(Z1 * tan_phi, Z1)
        lens("lens", Endpoint(z1.hi, 1), Endpoint(z2.hi, 2))
        north_cap(z2)
    elif label is CaseLabel.OFF_AXIS_TWO_BRANCH:
        south_cap(z2)
        lens("lens_south", Endpoint(z2.lo, 2), Endpoint(z1.lo, 1))
        out.regions["frustum"] = _frustum(z1.lo * unscale, z1.hi * unscale, tan_phi)
        lens("lens_north", Endpoint(z1.hi, 1), Endpoint(z2.hi, 2))
        north_cap(z2)
    elif label is CaseLabel.OFF_AXIS_ONE_BRANCH:
        south_cap(z2)
        lens("lens", Endpoint(z2.lo, 2), Endpoint(z2.hi, 2))
        north_cap(z2)
    else:
        raise WrongCaseError(f"{label} is not an off-axis case")
    scale = sum(t.scale for t in out.slices.values())
    total = abs(out.volume)
    if 16 * _EPS * scale > CANCELLATION_BUDGET * total:
        raise ConditioningError(
            f"lens terms cancel to {total:.3g} from magnitude {scale:.3g}")
    return out
