"""Top-level volume dispatch over case labels and methods."""

from __future__ import annotations

import logging
import math

from .classify import CaseLabel, classify
from .errors import ConditioningError, InvalidInputError, WrongCaseError
from .geometry import SPHERE_FACTOR, CanonicalGeometry
from .offaxis import off_axis_breakdown
from .onaxis import HALF_PI_TOL, cap_volume, on_axis_inside, on_axis_outside
from .oracle import McSpec, QuadratureSpec, mc_volume, quadrature_volume
from .results import VolumeResult

log = logging.getLogger(__name__)

METHODS = ("auto", "closed", "elliptic", "quadrature", "montecarlo")

_OFF_AXIS = {CaseLabel.OFF_AXIS_APEX_INSIDE, CaseLabel.OFF_AXIS_TWO_BRANCH,
             CaseLabel.OFF_AXIS_ONE_BRANCH}


def volume_on_axis_inside(R: float, d: float, phi: float) -> VolumeResult:
    br = on_axis_inside(R, d, phi)
    return VolumeResult(br.volume, CaseLabel.ON_AXIS_APEX_INSIDE, "closed", br.regions)


def volume_on_axis_outside(R: float, d: float, phi: float) -> VolumeResult:
    br = on_axis_outside(R, d, phi)
    label = CaseLabel.SPHERE_INSIDE_CONE if "sphere" in br.regions else CaseLabel.ON_AXIS_APEX_OUTSIDE
    return VolumeResult(br.volume, label, "closed", br.regions)


def volume_stretched(geom: CanonicalGeometry, method: str = "auto", **kw) -> VolumeResult:
    """``phi > pi/2``: the sphere minus the flipped cone's intersection."""
    if geom.phi <= math.pi / 2:
        raise WrongCaseError("stretched cones need phi > pi/2")
    full = SPHERE_FACTOR * geom.R**3
    if math.pi - geom.phi <= 0.0:
        # the complement is a bare ray
        return VolumeResult(full, CaseLabel.STRETCHED, "closed", {"sphere": full})
    flipped = CanonicalGeometry(geom.R, -geom.d, geom.b, math.pi - geom.phi)
    inner = compute_volume(flipped, method, **kw)
    return VolumeResult(full - inner.volume, CaseLabel.STRETCHED, inner.method,
                        {"sphere": full, "complement": -inner.volume},
                        inner.error, inner.fallback, inner.warning)


def _closed(geom: CanonicalGeometry, label: CaseLabel) -> VolumeResult | None:
    R, d = geom.R, geom.d
    if label is CaseLabel.DISJOINT:
        return VolumeResult(0.0, label, "closed")
    if label is CaseLabel.SPHERE_INSIDE_CONE:
        return VolumeResult(SPHERE_FACTOR * R**3, label, "closed", {"sphere": SPHERE_FACTOR * R**3})
    if label is CaseLabel.HALF_SPACE:
        h = min(max(R - d, 0.0), 2 * R)
        return VolumeResult(cap_volume(R, h), label, "closed", {"cap": cap_volume(R, h)})
    if label is CaseLabel.ON_AXIS_APEX_INSIDE:
        return volume_on_axis_inside(R, d, geom.phi)
    if label is CaseLabel.ON_AXIS_APEX_OUTSIDE:
        return volume_on_axis_outside(R, d, geom.phi)
    return None


def compute_volume(geom: CanonicalGeometry, method: str = "auto", *,
                   quad_spec: QuadratureSpec | None = None,
                   mc_spec: McSpec | None = None) -> VolumeResult:
    """Volume of the intersection of the solid cone and the solid sphere.

    ``method`` is one of ``auto``, ``closed``, ``elliptic``, ``quadrature``
    or ``montecarlo``.  ``auto`` uses closed forms where they exist, the
    elliptic reduction off-axis, and quadrature if the reduction reports a
    conditioning problem.  ``elliptic`` raises instead of falling back.
    """
    if method not in METHODS:
        raise InvalidInputError(f"unknown method {method!r}")
    if method == "montecarlo":
        est, sigma = mc_volume(geom, mc_spec)
        return VolumeResult(est, classify(geom), "montecarlo", {"samples": est}, sigma)
    if method == "quadrature":
        return quadrature_volume(geom, quad_spec)
    if geom.phi > math.pi / 2 + HALF_PI_TOL:
        return volume_stretched(geom, method, quad_spec=quad_spec, mc_spec=mc_spec)

    label = classify(geom)
    closed = _closed(geom, label)
    if closed is not None:
        return closed
    if method == "closed":
        raise InvalidInputError(f"no closed form for {label}")
    try:
        br = off_axis_breakdown(geom, label)
    except ConditioningError as exc:
        if method == "elliptic":
            raise
        log.debug("elliptic path ill-conditioned (%s); using quadrature", exc)
        res = quadrature_volume(geom, quad_spec)
        res.fallback = True
        return res
    regions = dict(br.regions)
    for name, t in br.slices.items():
        regions[f"{name}.v1"] = t.v1
        regions[f"{name}.v2"] = t.v2
        regions[f"{name}.v_delta"] = t.v_delta
    return VolumeResult(br.volume, label, "elliptic", regions)


def volume(R: float, d: float, b: float, phi: float, method: str = "auto", **kw) -> VolumeResult:
    return compute_volume(CanonicalGeometry(R, d, b, phi), method, **kw)
