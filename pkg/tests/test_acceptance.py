"""Acceptance suite: one pass/fail line per criterion.

Run alone with ``pytest tests/test_acceptance.py -v``; the summary section at
the end of the run lists every criterion.
"""

import json
import math
import time

import numpy as np
import pytest
from scipy import integrate

from conesphere import (CanonicalGeometry, CaseLabel, ConditioningError, McSpec, QuadratureSpec,
                        SceneGeometry, classify, compute_volume, lens_area, mc_volume,
                        quadrature_volume, reduce_to_canonical, slice_roots, volume)
from conesphere.cli import main as cli_main
from conesphere.elliptic import ellint_E, ellint_K, r_sequence, v_sequence
from conesphere.onaxis import cap_volume, on_axis_volume

FULL = 4 * math.pi / 3
OFF_AXIS = {
    "apex-inside": CaseLabel.OFF_AXIS_APEX_INSIDE,
    "two-branch": CaseLabel.OFF_AXIS_TWO_BRANCH,
    "one-branch": CaseLabel.OFF_AXIS_ONE_BRANCH,
}


def test_criterion_1_on_axis_closed_forms(criterion):
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    worst, n_inside = 0.0, 0
    for _ in range(500):
        R = rng.uniform(0.2, 3.0)
        d = rng.uniform(-4.0, 1.0) * R
        phi = rng.uniform(0.01, math.pi / 2 - 0.01)
        n_inside += abs(d) <= R
        closed = on_axis_volume(R, d, phi).volume
        quad = quadrature_volume(CanonicalGeometry(R, d, 0.0, phi)).volume
        worst = max(worst, abs(closed - quad) / R**3)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 10 and 0 < n_inside < 500
    criterion(1, "on-axis closed forms vs slice quadrature", ok,
              f"max |dV|/R^3 = {worst:.2e}, {n_inside}/500 apex-inside, {elapsed:.1f} s")
    assert ok


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def test_criterion_2_limiting_cases(criterion):
    worst = {}
    phis = np.linspace(0.01, math.pi / 2 - 0.01, 100)
    Rs = np.linspace(0.1, 5.0, 100)
    ds = np.linspace(-0.99, 1.5, 100)
    worst["apex at center"] = max(_rel(volume(R, 0.0, 0.0, p).volume,
                                       2 * math.pi / 3 * R**3 * (1 - math.cos(p)))
                                  for R, p in zip(Rs, phis))
    worst["half-space cap"] = max(_rel(volume(1.3, d * 1.3, 0.0, math.pi / 2).volume,
                                       cap_volume(1.3, min(max(1.3 - 1.3 * d, 0.0), 2.6)))
                                  for d in ds if d < 1.0)
    worst["apex on surface"] = max(_rel(volume(R, -R, 0.0, p).volume,
                                        FULL * R**3 * math.sin(p) ** 2 * (1 + math.cos(p) ** 2))
                                   for R, p in zip(Rs, phis))
    comp = []
    for d, p in zip(np.linspace(-3, 3, 100), np.linspace(0.02, math.pi - 0.02, 100)):
        comp.append(_rel(volume(1.0, d, 0.0, p).volume + volume(1.0, -d, 0.0, math.pi - p).volume, FULL))
    worst["complement"] = max(comp)
    ok = all(v <= 1e-12 for v in worst.values())
    criterion(2, "limiting-case exactness", ok,
              ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))
    assert ok


def _draw(rng, label):
    while True:
        R = rng.uniform(0.5, 2.0)
        phi = rng.uniform(0.05, 1.5)
        if label is CaseLabel.OFF_AXIS_APEX_INSIDE:
            rad, ang = math.sqrt(rng.uniform(0, 1)), rng.uniform(0, math.pi)
            d, b = rad * math.cos(ang), rad * math.sin(ang)
        else:
            d, b = rng.uniform(-5, -1), rng.uniform(0, 3)
        g = CanonicalGeometry(R, d * R, b * R, phi)
        if classify(g) is label:
            return g


def test_criterion_3_backend_agreement(criterion):
    rng = np.random.default_rng(3)
    t0 = time.perf_counter()
    parts, ok = [], True
    for name, label in OFF_AXIS.items():
        flagged, worst = 0, 0.0
        for _ in range(500):
            g = _draw(rng, label)
            try:
                el = compute_volume(g, "elliptic").volume
            except ConditioningError:
                flagged += 1
                continue
            q = quadrature_volume(g).volume
            worst = max(worst, _rel(el, q))
        ok &= worst <= 1e-8 and flagged <= 10
        parts.append(f"{name}: max rel {worst:.1e}, flagged {flagged}/500")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60
    criterion(3, "elliptic vs quadrature", ok, "; ".join(parts) + f"; {elapsed:.1f} s")
    assert ok


def _geometries_for_mc():
    rng = np.random.default_rng(4)
    out = [
        CanonicalGeometry(1.0, 0.5, 3.0, 1.2),                   # Disjoint
        CanonicalGeometry(1.0, 5.0, 0.0, 0.3),                   # Disjoint, cone points away
        CanonicalGeometry(0.1, -5.0, 0.0, math.pi / 4),          # SphereInsideCone
        CanonicalGeometry(0.5, -4.0, 0.3, 0.5),                  # SphereInsideCone off axis
        CanonicalGeometry(1.0, 0.3, 0.4, math.pi / 2),           # HalfSpace
        CanonicalGeometry(1.0, -0.6, 1.1, math.pi / 2),          # HalfSpace
    ]
    wanted = {CaseLabel.ON_AXIS_APEX_INSIDE: 8, CaseLabel.ON_AXIS_APEX_OUTSIDE: 8,
              CaseLabel.OFF_AXIS_APEX_INSIDE: 10, CaseLabel.OFF_AXIS_TWO_BRANCH: 10,
              CaseLabel.OFF_AXIS_ONE_BRANCH: 10, CaseLabel.STRETCHED: 8}
    while any(wanted.values()):
        R = rng.uniform(0.5, 2.0)
        b = 0.0 if rng.uniform() < 0.3 else rng.uniform(0, 3) * R
        g = CanonicalGeometry(R, rng.uniform(-5, 1.2) * R, b, rng.uniform(0.05, 3.0))
        label = classify(g)
        if wanted.get(label, 0) > 0:
            wanted[label] -= 1
            out.append(g)
    return out


def test_criterion_4_monte_carlo_concordance(criterion):
    t0 = time.perf_counter()
    geoms = _geometries_for_mc()
    worst_z, labels = 0.0, set()
    for i, g in enumerate(geoms):
        res = compute_volume(g)
        est, _ = mc_volume(g, McSpec(samples=10_000_000, seed=1000 + i))
        labels.add(res.case)
        # binomial sigma at the backend's hit fraction: stays meaningful when
        # a sliver is so thin that the sampler records no hits at all
        p = min(max(res.volume / g.sphere_volume, 0.0), 1.0)
        sigma_ref = g.sphere_volume * math.sqrt(p * (1 - p) / 10_000_000)
        if sigma_ref > 0:
            z = abs(res.volume - est) / sigma_ref
        else:
            z = 0.0 if abs(res.volume - est) <= 1e-12 * g.sphere_volume else math.inf
        worst_z = max(worst_z, z)
    # scene-level check of the sign of d: sample in world coordinates
    scene = SceneGeometry((2, 1, 5), (1, 1, 1), (0, 0, 2), 1.5, 0.3)
    rng = np.random.default_rng(99)
    n = 4_000_000
    v = rng.normal(size=(n, 3))
    pts = v / np.linalg.norm(v, axis=1)[:, None] * (1.5 * np.cbrt(rng.uniform(size=n)))[:, None]
    rel = pts + np.array([2.0, 1.0, 5.0]) - np.array([1.0, 1.0, 1.0])
    axial = rel[:, 2]
    inside = axial >= np.linalg.norm(rel, axis=1) * math.cos(0.3)
    p = inside.mean()
    scene_est = FULL * 1.5**3 * p
    scene_sigma = FULL * 1.5**3 * math.sqrt(p * (1 - p) / n)
    scene_v = volume(*vars(reduce_to_canonical(scene)).values()).volume
    scene_z = abs(scene_v - scene_est) / scene_sigma
    # regression pins at 1e8 samples
    pin_z = 0.0
    for geom, pinned in (((1.0, 0.2, 0.3, 0.6), 0.17242308475968), ((1.0, -2.0, 0.0, 0.2), 1.0162531812040)):
        g = CanonicalGeometry(*geom)
        est, sigma = mc_volume(g, McSpec(samples=100_000_000, seed=2024))
        assert volume(*geom).volume == pytest.approx(pinned, rel=1e-12)
        pin_z = max(pin_z, abs(pinned - est) / sigma)
    elapsed = time.perf_counter() - t0
    ok = (worst_z <= 4 and scene_z <= 4 and pin_z <= 4 and scene_est > 0 and elapsed < 300
          and len(geoms) == 60)
    criterion(4, "Monte Carlo concordance", ok,
              f"{len(geoms)} geometries over {len(labels)} labels, 1e7 samples each, max |z| = {worst_z:.2f}; "
              f"scene sign check |z| = {scene_z:.2f}; 1e8-sample pins |z| <= {pin_z:.2f}; {elapsed:.0f} s")
    assert ok


def test_criterion_5_continuity_sutures(criterion):
    worst_b, worst_phi = 0.0, 0.0
    for d in np.linspace(-3.0, 0.9, 10):
        for phi in (0.1, 0.4, 0.9, 1.3):
            on = volume(1.0, d, 0.0, phi).volume
            off = volume(1.0, d, 1e-6, phi).volume
            if on > 0:
                worst_b = max(worst_b, _rel(off, on))
    for d in np.linspace(-0.9, 0.9, 7):
        cap = cap_volume(1.0, 1.0 - d)
        for b in (0.0, 0.2, 0.7, 1.5, 3.0):
            for phi in (math.pi / 2 - 1e-6, math.pi / 2 + 1e-6):
                worst_phi = max(worst_phi, _rel(volume(1.0, d, b, phi).volume, cap))
    ok = worst_b <= 1e-4 and worst_phi <= 1e-4
    criterion(5, "continuity sutures", ok,
              f"b -> 0: max rel {worst_b:.1e}; phi -> pi/2: max rel {worst_phi:.1e}")
    assert ok


def _amp_quad(f, k2, top=math.pi / 2):
    return integrate.quad(lambda th: f(math.sin(th), math.cos(th)) / math.sqrt(1 - k2 * math.sin(th) ** 2),
                          0.0, top, epsabs=0, epsrel=1e-13, limit=200)[0]


def test_criterion_6_elliptic_kernel(criterion):
    rng = np.random.default_rng(6)
    legendre = 0.0
    for k2 in rng.uniform(1e-6, 1 - 1e-6, 100):
        kp2 = 1 - k2
        lhs = ellint_E(k2) * ellint_K(kp2) + ellint_E(kp2) * ellint_K(k2) - ellint_K(k2) * ellint_K(kp2)
        legendre = max(legendre, abs(lhs - math.pi / 2))
    worst_v = worst_r = 0.0
    for _ in range(50):
        k2 = rng.uniform(0, 0.95)
        a2 = rng.uniform(-4, -0.01) if rng.uniform() < 0.5 else rng.uniform(0.01, 0.9)
        alpha = rng.uniform(-0.9, 0.9)
        V = v_sequence(6, a2, k2)
        R = r_sequence(6, alpha, k2)
        for m in range(7):
            worst_v = max(worst_v, _rel(V[m], _amp_quad(lambda s, c: (1 - a2 * s * s) ** -m, k2)))
            worst_r = max(worst_r, _rel(R[m], _amp_quad(lambda s, c: (1 + alpha * c) ** -m, k2)))
    ok = legendre <= 1e-12 and worst_v <= 1e-9 and worst_r <= 1e-9
    criterion(6, "elliptic kernel", ok,
              f"Legendre {legendre:.1e}, V_j {worst_v:.1e}, R_m {worst_r:.1e}")
    assert ok


def test_criterion_7_lens_area(criterion):
    rng = np.random.default_rng(7)
    classic = abs(lens_area(1.0, 1.0, math.sqrt(2)) - (math.pi / 2 - 1))
    sym = mono = 0
    worst_z = 0.0
    n = 1_000_000
    for _ in range(1000):
        r1, r2 = rng.uniform(0.1, 2.0, 2)
        b = rng.uniform(0, 1.2 * (r1 + r2))
        a = lens_area(r1, r2, b)
        sym += a != pytest.approx(lens_area(r2, r1, b), rel=1e-12, abs=1e-15)
        mono += lens_area(r1, r2, b * 1.01 + 1e-3) > a + 1e-15
        # box around the smaller circle
        rs, cx = (r1, 0.0) if r1 <= r2 else (r2, -b)
        pts = rng.uniform(-rs, rs, size=(n, 2))
        x, y = pts[:, 0] + cx, pts[:, 1]
        hit = (x * x + y * y <= r1 * r1) & ((x + b) ** 2 + y * y <= r2 * r2)
        box = 4 * rs * rs
        est = box * hit.mean()
        p = min(a / box, 1.0)
        sigma = box * math.sqrt(p * (1 - p) / n)
        z = abs(est - a) / sigma if sigma > 0 else (0.0 if abs(est - a) < 1e-12 else math.inf)
        worst_z = max(worst_z, z)
    ok = classic < 1e-15 and sym == 0 and mono == 0 and worst_z <= 4
    criterion(7, "lens area", ok,
              f"classic err {classic:.1e}, symmetry failures {sym}, monotonicity failures {mono}, "
              f"max |z| over 1000 triples {worst_z:.2f}")
    assert ok


def test_criterion_8_classifier(criterion):
    rng = np.random.default_rng(8)
    counts = {CaseLabel.DISJOINT: 0, CaseLabel.SPHERE_INSIDE_CONE: 0}
    bad = 0
    checked = 0
    while checked < 100:
        R = rng.uniform(0.3, 2.0)
        g = CanonicalGeometry(R, rng.uniform(-8, 2) * R, rng.uniform(0, 6) * R, rng.uniform(0.05, 1.5))
        r = slice_roots(g.d / R, g.b / R, g.phi)
        if r.z1.real or r.z2.real:
            continue
        label = classify(g)
        est, _ = mc_volume(g, McSpec(samples=1_000_000, seed=checked))
        if label is CaseLabel.DISJOINT:
            bad += est != 0.0
        elif label is CaseLabel.SPHERE_INSIDE_CONE:
            bad += est != pytest.approx(g.sphere_volume, rel=1e-12)
        else:
            bad += 1
        counts[label] = counts.get(label, 0) + 1
        checked += 1
    ok = bad == 0 and all(counts[k] > 0 for k in (CaseLabel.DISJOINT, CaseLabel.SPHERE_INSIDE_CONE))
    criterion(8, "classifier vs Monte Carlo on all-complex roots", ok,
              f"{checked} geometries, Disjoint {counts[CaseLabel.DISJOINT]}, "
              f"SphereInsideCone {counts[CaseLabel.SPHERE_INSIDE_CONE]}, mismatches {bad}")
    assert ok


def test_criterion_9_cli_determinism(criterion, tmp_path, capsys):
    rows = [{"R": 1, "d": 0.2, "b": 0.3, "phi": 0.6},
            {"R": 1, "d": -2, "b": 0.5, "phi": 0.35, "method": "montecarlo", "samples": 50_000},
            {"S": [2, 1, 5], "C": [1, 1, 1], "a": [0, 0, 2], "R": 1.5, "phi": 0.3,
             "method": "montecarlo", "samples": 50_000},
            {"R": 1, "d": 0.3, "b": 0.4, "phi": 0.5, "method": "quadrature"},
            {"R": 1, "d": 0.1, "b": 0.2, "phi": 30, "angle_unit": "degrees", "method": "montecarlo",
             "samples": 50_000}]
    src = tmp_path / "in.jsonl"
    src.write_text("".join(json.dumps(r) + "\n" for r in rows))
    outputs = {}
    for tag, workers in (("a", "1"), ("b", "1"), ("c", "4")):
        for fmt in ("csv", "jsonl"):
            out = tmp_path / f"{tag}.{fmt}"
            cli_main(["--batch", str(src), "--out", str(out), "--format", fmt, "--seed", "5",
                      "--workers", workers])
            outputs[tag, fmt] = out.read_bytes()
    capsys.readouterr()
    same_runs = all(outputs["a", f] == outputs["b", f] for f in ("csv", "jsonl"))
    same_threads = all(outputs["a", f] == outputs["c", f] for f in ("csv", "jsonl"))
    ok = same_runs and same_threads
    criterion(9, "CLI determinism", ok,
              f"repeat runs identical: {same_runs}, 1 vs 4 threads identical: {same_threads}")
    assert ok
