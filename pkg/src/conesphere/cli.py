"""Command-line front end.

Examples::

    conesphere --R 1 --d 0.2 --b 0.3 --phi 0.6
    conesphere --batch rows.csv --out results.csv
    conesphere --sweep phi --from 0.01 --to 1.57 --steps 50 --R 1 --d 0.2 --b 0.3 --crosscheck
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .errors import ConeSphereError, InvalidInputError
from .geometry import CanonicalGeometry, SceneGeometry, reduce_to_canonical
from .oracle import McSpec, QuadratureSpec
from .volume import METHODS, compute_volume

log = logging.getLogger("conesphere")

EXIT_OK, EXIT_PARTIAL, EXIT_INVALID, EXIT_ACCURACY = 0, 1, 2, 3

RESULT_FIELDS = ["row", "status", "R", "d", "b", "phi", "volume", "case", "method",
                 "error", "fallback", "warning", "regions", "message"]


def _vec(value) -> tuple[float, float, float]:
    if isinstance(value, str):
        value = [float(v) for v in value.replace(";", " ").replace(",", " ").split()]
    vec = tuple(float(v) for v in value)
    if len(vec) != 3:
        raise InvalidInputError(f"expected a 3-vector, got {value!r}")
    return vec


def _blank(v) -> bool:
    return v is None or (isinstance(v, str) and v.strip() == "")


def parse_query(rec: dict, defaults: argparse.Namespace) -> dict:
    """Turn one input record into ``{geom, method, quad_spec, mc_spec}``."""
    degrees = defaults.degrees
    unit = rec.get("angle_unit")
    if not _blank(unit):
        if unit not in ("radians", "degrees"):
            raise InvalidInputError(f"angle_unit must be radians or degrees, got {unit!r}")
        degrees = unit == "degrees"
    canonical = [k for k in ("d", "b") if not _blank(rec.get(k))]
    scene_keys = ("S", "C", "a")
    scene = [k for k in scene_keys if not _blank(rec.get(k))]
    if not scene and all(not _blank(rec.get(f"{k}x")) for k in scene_keys):
        rec = dict(rec)
        for k in scene_keys:
            rec[k] = [rec[f"{k}x"], rec[f"{k}y"], rec[f"{k}z"]]
        scene = list(scene_keys)
    if canonical and scene:
        raise InvalidInputError("give either canonical (d, b) or scene (S, C, a), not both")
    if _blank(rec.get("R")) or _blank(rec.get("phi")):
        raise InvalidInputError("R and phi are required")
    R = float(rec["R"])
    phi = float(rec["phi"])
    if degrees:
        phi = math.radians(phi)
    if scene:
        if len(scene) != 3:
            raise InvalidInputError("scene input needs S, C and a")
        geom = reduce_to_canonical(SceneGeometry(_vec(rec["S"]), _vec(rec["C"]),
                                                 _vec(rec["a"]), R, phi))
    else:
        if len(canonical) != 2:
            raise InvalidInputError("canonical input needs d and b")
        geom = CanonicalGeometry(R, float(rec["d"]), float(rec["b"]), phi)
    method = rec.get("method") or defaults.method
    if method not in METHODS:
        raise InvalidInputError(f"unknown method {method!r}")
    tol = float(rec["tol"]) if not _blank(rec.get("tol")) else defaults.tol
    samples = int(rec["samples"]) if not _blank(rec.get("samples")) else defaults.samples
    seed = int(rec["seed"]) if not _blank(rec.get("seed")) else defaults.seed
    return {"geom": geom, "method": method, "tol": tol, "samples": samples, "seed": seed}


def evaluate(query: dict, row: int | None = None, workers: int = 1) -> dict:
    geom = query["geom"]
    # batch rows get their own Monte Carlo stream derived from (seed, row)
    seed = query["seed"] if row is None else [query["seed"], row]
    res = compute_volume(
        geom, query["method"],
        quad_spec=QuadratureSpec(rel_tol=query["tol"]),
        mc_spec=McSpec(samples=query["samples"], seed=seed, workers=workers),
    )
    return {
        "status": "ok", "R": geom.R, "d": geom.d, "b": geom.b, "phi": geom.phi,
        "volume": res.volume, "case": str(res.case), "method": res.method,
        "error": res.error, "fallback": res.fallback, "warning": res.warning,
        "regions": {k: float(v) for k, v in res.regions.items()}, "message": None,
    }


def _format_value(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, dict):
        return json.dumps(v, sort_keys=True)
    if v is None:
        return ""
    return str(v)


def write_records(records: list[dict], fmt: str, out) -> None:
    if fmt == "jsonl":
        for rec in records:
            out.write(json.dumps({k: rec.get(k) for k in RESULT_FIELDS if k in rec}) + "\n")
        return
    fields = [f for f in RESULT_FIELDS if any(f in r for r in records)]
    writer = csv.DictWriter(out, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        writer.writerow({k: _format_value(rec.get(k)) for k in fields})


def read_records(path: Path, fmt: str | None) -> list[dict | str]:
    """Rows as dicts; unparseable JSON lines come back as the raw string."""
    fmt = fmt or ("jsonl" if path.suffix.lower() in (".jsonl", ".json", ".ndjson") else "csv")
    text = path.read_text()
    if fmt == "jsonl":
        rows = []
        for line in text.splitlines():
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
                rows.append(obj if isinstance(obj, dict) else line)
            except json.JSONDecodeError:
                rows.append(line)
        return rows
    return list(csv.DictReader(io.StringIO(text)))


def run_single(args) -> int:
    if args.scene_file:
        rec = json.loads(Path(args.scene_file).read_text())
        if any(getattr(args, k) is not None for k in ("d", "b")):
            raise InvalidInputError("--scene-file conflicts with --d/--b")
        rec.setdefault("R", args.R)
        rec.setdefault("phi", args.phi)
    else:
        rec = {"R": args.R, "d": args.d, "b": args.b, "phi": args.phi}
    query = parse_query(rec, args)
    out = evaluate(query, workers=args.workers)
    out["row"] = 0
    write_records([out], args.format or "jsonl", sys.stdout)
    if args.strict and out["warning"]:
        return EXIT_ACCURACY
    return EXIT_OK


def run_batch(args) -> int:
    path = Path(args.batch)
    rows = read_records(path, args.input_format)

    def work(item):
        i, rec = item
        try:
            if not isinstance(rec, dict):
                raise InvalidInputError(f"unparseable row: {rec!r}")
            out = evaluate(parse_query(rec, args), row=i)
        except (ConeSphereError, ValueError, KeyError, TypeError) as exc:
            out = {"status": "error", "message": str(exc)}
        out["row"] = i
        return out

    items = list(enumerate(rows))
    if args.workers > 1:
        with ThreadPoolExecutor(args.workers) as pool:
            results = list(pool.map(work, items))
    else:
        results = [work(it) for it in items]

    fmt = args.format or ("jsonl" if str(args.out or "").endswith(".jsonl") else "csv")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            write_records(results, fmt, fh)
    else:
        write_records(results, fmt, sys.stdout)

    cases = Counter(r["case"] for r in results if r["status"] == "ok")
    failed = sum(r["status"] != "ok" for r in results)
    fallbacks = sum(bool(r.get("fallback")) for r in results)
    summary = " ".join(f"{k}={v}" for k, v in sorted(cases.items()))
    print(f"rows={len(results)} failed={failed} fallbacks={fallbacks} {summary}".rstrip(),
          file=sys.stderr)
    if failed:
        return EXIT_PARTIAL
    if args.strict and any(r.get("warning") for r in results):
        return EXIT_ACCURACY
    return EXIT_OK


_AXES = ("R", "d", "b", "phi")


def run_sweep(args) -> int:
    axis = args.sweep
    if args.steps is None or args.steps < 2:
        raise InvalidInputError("--steps must be >= 2")
    if args.start is None or args.stop is None:
        raise InvalidInputError("--from and --to are required for a sweep")
    base = {"R": args.R, "d": args.d, "b": args.b, "phi": args.phi}
    missing = [k for k in _AXES if k != axis and base[k] is None]
    if missing:
        raise InvalidInputError(f"base geometry lacks {', '.join(missing)}")
    values = np.linspace(args.start, args.stop, args.steps)
    fields = [axis, "volume", "case"] + (["elliptic", "quadrature"] if args.crosscheck else [])
    writer = csv.writer(sys.stdout, lineterminator="\n")
    writer.writerow(fields)
    clipped = 0
    for v in values:
        rec = dict(base, **{axis: float(v)})
        phi = math.radians(rec["phi"]) if args.degrees else rec["phi"]
        if rec["R"] <= 0 or rec["b"] < 0 or not 0 < phi <= math.pi:
            clipped += 1
            continue
        geom = CanonicalGeometry(rec["R"], rec["d"], rec["b"], phi)
        res = compute_volume(geom, args.method, quad_spec=QuadratureSpec(rel_tol=args.tol),
                             mc_spec=McSpec(samples=args.samples, seed=args.seed))
        row = [repr(float(v)), repr(res.volume), str(res.case)]
        if args.crosscheck:
            auto = compute_volume(geom, "auto")
            quad = compute_volume(geom, "quadrature", quad_spec=QuadratureSpec(rel_tol=args.tol))
            row += [repr(auto.volume), repr(quad.volume)]
        writer.writerow(row)
    if clipped:
        log.warning("sweep: skipped %d points outside the valid parameter domain", clipped)
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_INVALID)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="conesphere",
                description="Volume of the intersection of a solid cone and a solid sphere.")
    g = p.add_argument_group("geometry")
    g.add_argument("--R", type=float, help="sphere radius")
    g.add_argument("--d", type=float, help="signed axial distance (sphere center at z = -d)")
    g.add_argument("--b", type=float, help="distance of the sphere center from the axis")
    g.add_argument("--phi", type=float, help="cone half-aperture")
    g.add_argument("--scene-file", help="JSON file with S, C, a, R, phi")
    g.add_argument("--degrees", action="store_true", help="angles are in degrees")
    m = p.add_argument_group("method")
    m.add_argument("--method", default="auto", choices=METHODS)
    m.add_argument("--tol", type=float, default=1e-12, help="quadrature relative tolerance")
    m.add_argument("--samples", type=int, default=1_000_000, help="Monte Carlo samples")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--workers", type=int, default=1, help="threads for batch rows / MC blocks")
    io_ = p.add_argument_group("batch / sweep")
    io_.add_argument("--batch", metavar="IN")
    io_.add_argument("--out", metavar="OUT")
    io_.add_argument("--input-format", choices=("csv", "jsonl"))
    io_.add_argument("--format", choices=("csv", "jsonl"))
    io_.add_argument("--sweep", choices=_AXES)
    io_.add_argument("--from", dest="start", type=float)
    io_.add_argument("--to", dest="stop", type=float)
    io_.add_argument("--steps", type=int)
    io_.add_argument("--crosscheck", action="store_true")
    p.add_argument("--strict", action="store_true", help="exit 3 on accuracy warnings")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.batch and args.sweep:
        print("conesphere: --batch and --sweep are exclusive", file=sys.stderr)
        return EXIT_INVALID
    try:
        if args.batch:
            return run_batch(args)
        if args.sweep:
            return run_sweep(args)
        return run_single(args)
    except (ConeSphereError, ValueError, OSError) as exc:
        print(f"conesphere: error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
