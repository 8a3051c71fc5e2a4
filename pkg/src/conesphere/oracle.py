"""Independent numerical backends: slice quadrature and Monte Carlo."""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .classify import classify, slice_roots
from .geometry import SPHERE_FACTOR, CanonicalGeometry
from .lens import lens_area
from .onaxis import HALF_PI_TOL
from .results import VolumeResult


class AccuracyWarning(UserWarning):
    pass


@dataclass(frozen=True)
class QuadratureSpec:
    abs_tol: float = 1e-14
    rel_tol: float = 1e-12
    max_depth: int = 200
    # map each sub-interval through z = lo + (hi - lo)(1 - cos t)/2 so the
    # (z - root)^(3/2) behaviour at lens collapse becomes smooth
    endpoint_map: bool = True

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if not 1 <= self.max_depth <= 100_000:
            raise ValueError("max_depth out of range")


@dataclass(frozen=True)
class McSpec:
    samples: int = 1_000_000
    seed: int = 0
    stratification: bool = False
    block: int = 1 << 20
    workers: int = 1

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("samples must be >= 1")


def _half_space(phi: float) -> bool:
    return abs(phi - math.pi / 2) < HALF_PI_TOL


def slice_area(z: float, geom: CanonicalGeometry) -> float:
    """Area of the plane ``z = const`` cut through cone and sphere, ``phi <= pi/2``."""
    R, d, b, phi = geom.R, geom.d, geom.b, geom.phi
    if z < 0:
        return 0.0
    w = R * R - (z + d) ** 2
    if w <= 0:
        return 0.0
    r2 = math.sqrt(w)
    if _half_space(phi):
        return math.pi * w
    r1 = z * math.tan(phi)
    if r1 == 0:
        return 0.0
    return lens_area(r1, r2, b)


def _breakpoints(geom: CanonicalGeometry, z_lo: float, z_hi: float) -> list[float]:
    pts = {z_lo, z_hi}
    if not _half_space(geom.phi):
        scale = geom.R * math.cos(geom.phi)
        roots = slice_roots(geom.d / geom.R, geom.b / geom.R, geom.phi)
        for pair in (roots.z1, roots.z2):
            if pair.real:
                for r in (pair.lo, pair.hi):
                    z = r * scale
                    if z_lo < z < z_hi:
                        pts.add(z)
    return sorted(pts)


def integrate_slices(z_lo: float, z_hi: float, geom: CanonicalGeometry,
                     spec: QuadratureSpec | None = None) -> tuple[float, float, str | None]:
    """Integrate :func:`slice_area` over ``[z_lo, z_hi]``.

    Returns ``(volume, error_estimate, warning)``; the warning is set when
    some sub-interval did not reach tolerance.
    """
    spec = spec or QuadratureSpec()
    if z_hi < z_lo:
        raise ValueError("z_lo must not exceed z_hi")
    total, err, warn = 0.0, 0.0, None
    pts = _breakpoints(geom, z_lo, z_hi)
    atol = spec.abs_tol * geom.R**3
    for lo, hi in zip(pts[:-1], pts[1:]):
        if hi <= lo:
            continue
        if spec.endpoint_map:
            half = 0.5 * (hi - lo)

            def f(t, lo=lo, half=half):
                return slice_area(lo + half * (1 - math.cos(t)), geom) * half * math.sin(t)

            a, b = 0.0, math.pi
        else:
            f, a, b = (lambda z: slice_area(z, geom)), lo, hi
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, e = integrate.quad(f, a, b, epsabs=atol, epsrel=spec.rel_tol,
                                        limit=spec.max_depth)
            except integrate.IntegrationWarning as exc:
                warnings.simplefilter("ignore", integrate.IntegrationWarning)
                val, e = integrate.quad(f, a, b, epsabs=atol, epsrel=spec.rel_tol,
                                        limit=spec.max_depth)
                warn = f"quadrature tolerance not reached: {str(exc).splitlines()[0]}"
        total += val
        err += e
    return total, err, warn


def quadrature_volume(geom: CanonicalGeometry, spec: QuadratureSpec | None = None) -> VolumeResult:
    """Whole intersection volume by slice quadrature."""
    label = classify(geom)
    R, d, phi = geom.R, geom.d, geom.phi
    if phi >= math.pi:
        return VolumeResult(SPHERE_FACTOR * R**3, label, "quadrature", {"sphere": SPHERE_FACTOR * R**3})
    if phi > math.pi / 2 + HALF_PI_TOL:
        flipped = CanonicalGeometry(R, -d, geom.b, math.pi - phi)
        inner = quadrature_volume(flipped, spec)
        return VolumeResult(SPHERE_FACTOR * R**3 - inner.volume, label, "quadrature",
                            {"sphere": SPHERE_FACTOR * R**3, "complement": -inner.volume},
                            inner.error, warning=inner.warning)
    z_lo = max(0.0, -R - d)
    z_hi = max(0.0, R - d)
    vol, err, warn = integrate_slices(z_lo, z_hi, geom, spec)
    return VolumeResult(vol, label, "quadrature", {"slices": vol}, err, warning=warn)


def _block_hits(geom: CanonicalGeometry, n: int, seed_seq: np.random.SeedSequence,
                stratified: bool) -> int:
    rng = np.random.default_rng(seed_seq)
    R = geom.R
    v = rng.standard_normal((n, 3))
    v /= np.linalg.norm(v, axis=1)[:, None]
    u = rng.random(n)
    if stratified:
        u = (np.arange(n) + u) / n
    pts = v * (R * np.cbrt(u))[:, None]
    # cone frame: sphere center at (-b, 0, -d)
    x = pts[:, 0] - geom.b
    y = pts[:, 1]
    z = pts[:, 2] - geom.d
    inside = z >= np.sqrt(x * x + y * y + z * z) * math.cos(geom.phi)
    return int(np.count_nonzero(inside))


def mc_volume(geom: CanonicalGeometry, spec: McSpec | None = None) -> tuple[float, float]:
    """Monte Carlo estimate ``(volume, sigma)`` by sampling inside the sphere.

    Samples are split into fixed-size blocks, each with its own stream
    spawned from ``seed``; the result does not depend on ``workers``.
    """
    spec = spec or McSpec()
    sizes = [spec.block] * (spec.samples // spec.block)
    if spec.samples % spec.block:
        sizes.append(spec.samples % spec.block)
    streams = np.random.SeedSequence(spec.seed).spawn(len(sizes))
    jobs = list(zip(sizes, streams))

    def run(job):
        return _block_hits(geom, job[0], job[1], spec.stratification)

    if spec.workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(spec.workers) as pool:
            hits = sum(pool.map(run, jobs))
    else:
        hits = sum(map(run, jobs))
    n = spec.samples
    frac = hits / n
    vs = SPHERE_FACTOR * geom.R**3
    return vs * frac, vs * math.sqrt(frac * (1 - frac) / n)
