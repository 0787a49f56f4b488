"""Batch front-end: JSON scene configs in, deterministic CSV/JSON artifacts out.

Exit codes: 0 success, 1 invalid config, 2 completed with per-cell failures
(listed in the manifest).  All randomness flows from the config seed through
named counter-based streams, so identical config + seed reproduces artifacts
byte-for-byte; wall-clock data lives only in the manifest.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from math import comb
from pathlib import Path

import numpy as np

from . import __version__
from .artifacts import (
    compactum_fingerprint,
    config_hash,
    scan_manifest,
    write_csv,
    write_extremal_csv,
    write_green_csv,
    write_json,
    write_scan_csv,
)
from .compacta import CurveGenerator, ProjectivePoint, sample
from .extremal import extremal_profile
from .jensen import duality_check
from .polycore import HomogeneousPolynomial, coeff_l1_norm, polydisk_sup_lower
from .scanner import GridSpec, scan
from .spectrum import GradedAlgebraOnK, triple_norm
from .families import certify_exclusion, torus_exp_curve_probe
from .utils import make_rng

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["geometry", "task"],
    "properties": {
        "seed": {"type": "integer"},
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {"dir": {"type": "string"}},
        },
        "solver": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "m_con": {"type": "integer", "minimum": 8},
                "m_obj": {"type": "integer", "minimum": 8},
                "lp_tol": {"type": "number"},
            },
        },
        "geometry": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["circle_in_line", "entire_graph", "gap_series_graph",
                                  "torus_exp_curve", "explicit_cloud"]},
                "params": {"type": "object"},
                "count": {"type": "integer", "minimum": 8},
                "orbit_size": {"type": "integer", "minimum": 1},
            },
        },
        "task": {
            "type": "object",
            "additionalProperties": False,
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["extremal", "scan", "jensen", "norms", "spectrum", "example"]},
                "points": {"type": "array"},
                "degrees": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                "grid": {"type": "object"},
                "chart": {"type": "string"},
                "thresholds": {"type": "object"},
                "pole": {"type": "array"},
                "d_max": {"type": "integer", "minimum": 1},
                "h": {"type": "number", "exclusiveMinimum": 0},
                "draws": {"type": "integer", "minimum": 1},
                "n_max": {"type": "integer", "minimum": 1},
                "d_cap": {"type": "integer", "minimum": 1},
                "z": {"type": "array"},
                "name": {"type": "string"},
                "probes": {"type": "array"},
                "ladder": {"type": "array"},
            },
        },
    },
}


class ConfigError(ValueError):
    pass


def _validate(config: dict) -> None:
    import jsonschema

    try:
        jsonschema.validate(config, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(str(exc).splitlines()[0]) from exc


def _complex_vector(obj) -> np.ndarray:
    return np.array([complex(re, im) for re, im in obj], dtype=complex)


def _geometry(config: dict):
    g = config["geometry"]
    gen = CurveGenerator(g["kind"], dict(g.get("params", {})))
    return sample(gen, int(g.get("count", 256)), int(g.get("orbit_size", 1)))


def run(config: dict, out_dir: Path, threads: int = 1) -> int:
    """Execute the configured task; writes artifacts plus manifest.json."""
    t0 = time.time()
    _validate(config)
    task = config["task"]
    solver = {"m_con": 64, "m_obj": 64}
    solver.update(config.get("solver", {}))
    m_con, m_obj = int(solver["m_con"]), int(solver["m_obj"])
    seed = int(config.get("seed", 0))
    out_dir.mkdir(parents=True, exist_ok=True)
    artifacts: list[str] = []
    statuses: list[dict] = []
    kind = task["kind"]

    if kind == "extremal":
        K = _geometry(config)
        degrees = [int(d) for d in task["degrees"]]
        results = []
        for pt in task["points"]:
            z = _complex_vector(pt)
            x = ProjectivePoint.from_affine(z, K.n)
            prof = extremal_profile(K, x, degrees, m_con, m_obj)
            results.extend(prof)
            statuses.extend({"point": pt, "d": r.d, "status": r.status} for r in prof)
        path = out_dir / "extremal.csv"
        write_extremal_csv(path, results, K.n)
        artifacts.append(path.name)
    elif kind == "scan":
        K = _geometry(config)
        grid = GridSpec(task["grid"]["kind"], dict(task["grid"].get("params", {})))
        field = scan(K, task.get("chart", "z0"), grid, [int(d) for d in task["degrees"]],
                     task.get("thresholds"), m_con, m_obj, threads=threads)
        path = out_dir / "scan.csv"
        write_scan_csv(path, field, K.n)
        artifacts.append(path.name)
        mpath = out_dir / "scan_manifest.json"
        write_json(mpath, scan_manifest(field, compactum_fingerprint(K)))
        artifacts.append(mpath.name)
        statuses.extend({"cell": i, "classification": c.classification}
                        for i, c in enumerate(field.cells))
    elif kind == "jensen":
        K = _geometry(config)
        pole = complex(task["pole"][0], task["pole"][1])
        report = duality_check(K, pole, int(task.get("d_max", 8)),
                               float(task.get("h", 0.02)), m_con, m_obj)
        if "problem" in report:
            gpath = out_dir / "green_field.csv"
            write_green_csv(gpath, report["problem"])
            artifacts.append(gpath.name)
        rpath = out_dir / "jensen_report.json"
        write_json(rpath, {k: v for k, v in report.items()
                           if k not in ("problem", "extremal")})
        artifacts.append(rpath.name)
        statuses.append({"jensen_pass": bool(report.get("pass", False))})
    elif kind == "norms":
        rng = make_rng(seed, "norms-task")
        draws = int(task.get("draws", 200))
        n_max = int(task.get("n_max", 2))
        d_cap = int(task.get("d_cap", 6))
        rows = []
        for t in range(draws):
            n = int(rng.integers(1, n_max + 1))
            d = int(rng.integers(1, d_cap + 1))
            k = comb(n + d, d)
            P = HomogeneousPolynomial(n, d, rng.normal(size=k) + 1j * rng.normal(size=k))
            lower = polydisk_sup_lower(P, 8 * d)
            l1 = coeff_l1_norm(P)
            bound = ((n + 1) * 4.0 ** (n + 1)) ** d * lower
            rows.append([t, n, d, lower, l1, bound, bound / l1])
        path = out_dir / "norms.csv"
        write_csv(path, ["draw", "n", "d", "torus_lower", "coeff_l1", "upper_bound", "margin"], rows)
        artifacts.append(path.name)
        ok = all(r[3] <= r[4] * (1 + 1e-12) and r[4] <= r[5] * (1 + 1e-12) for r in rows)
        statuses.append({"norm_chain_violations": 0 if ok else sum(
            1 for r in rows if not (r[3] <= r[4] and r[4] <= r[5]))})
        if not ok:
            statuses.append({"error": "norm chain violated"})
    elif kind == "spectrum":
        K = _geometry(config)
        alg = GradedAlgebraOnK(K)
        degrees = [int(d) for d in task.get("degrees", [1, 2, 4, 8])]
        reports = []
        for zz in task["z"]:
            hom = triple_norm(alg, _complex_vector(zz), degrees, m_con, m_obj)
            reports.append(hom.to_json_dict())
        path = out_dir / "spectrum.json"
        write_json(path, {"reports": reports})
        artifacts.append(path.name)
    elif kind == "example":
        name = task.get("name", "")
        if name == "exp_graph":
            K = _geometry(config)
            ladder = [int(d) for d in task.get("ladder", [2, 4, 8, 16])]
            certs = []
            for z0re, z0im, w0re, w0im in task["probes"]:
                cert = certify_exclusion(K, (complex(z0re, z0im), complex(w0re, w0im)),
                                         ladder=ladder)
                certs.append(cert.to_json_dict())
                statuses.append({"probe": [z0re, z0im, w0re, w0im], "verdict": cert.verdict})
            path = out_dir / "certificates.json"
            write_json(path, {"family": "entire", "certificates": certs})
            artifacts.append(path.name)
        elif name == "gap_series":
            K = _geometry(config)
            ladder = [int(k) for k in task.get("ladder", [1, 2, 3, 4])]
            certs = []
            for z0re, z0im, w0re, w0im in task["probes"]:
                cert = certify_exclusion(K, (complex(z0re, z0im), complex(w0re, w0im)),
                                         ladder=ladder)
                certs.append(cert.to_json_dict())
                statuses.append({"probe": [z0re, z0im, w0re, w0im], "verdict": cert.verdict})
            path = out_dir / "certificates.json"
            write_json(path, {"family": "gap", "certificates": certs})
            artifacts.append(path.name)
        elif name == "torus":
            K = _geometry(config)
            probes = [(complex(a, b), complex(c, d)) for a, b, c, d in task["probes"]]
            report = torus_exp_curve_probe(K, probes,
                                           [int(d) for d in task.get("degrees", [1, 2, 3])],
                                           m_con, m_obj)
            rows = []
            for row in report["probes"]:
                rows.append({"z": [row["z"].real, row["z"].imag],
                             "w": [row["w"].real, row["w"].imag],
                             "classification": row["classification"],
                             "ladder": [{"d": r.d, "lam_lo": r.lam_lo, "lam_hi": r.lam_hi,
                                         "status": r.status} for r in row["profile"]]})
                statuses.append({"probe": rows[-1]["z"] + rows[-1]["w"],
                                 "classification": row["classification"]})
            path = out_dir / "torus_probe.json"
            write_json(path, {"probes": rows, "degrees": report["degrees"]})
            artifacts.append(path.name)
        else:
            raise ConfigError(f"unknown example name {name!r}")
    else:
        raise ConfigError(f"unknown task kind {kind!r}")

    failures = [s for s in statuses
                if s.get("status") == "interpolation_regime" or s.get("error")]
    manifest = {
        "config_hash": config_hash(config),
        "artifact_list": sorted(artifacts),
        "statuses": statuses,
        "failures": len(failures),
        "versions": {"prohull": __version__, "numpy": np.__version__},
        "wall_time_s": time.time() - t0,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    write_json(out_dir / "manifest.json", manifest)
    return 2 if failures else 0


def selftest(list_only: bool = False, names=None) -> int:
    from .acceptance import CRITERIA, run_all

    if list_only:
        for num, fn in CRITERIA:
            print(f"{num}  {fn.__name__}  {fn.__doc__.strip().splitlines()[0]}")
        return 0
    results = run_all(names)
    width = max(len(r["name"]) for r in results)
    ok = True
    for r in results:
        flag = "PASS" if r["passed"] else "FAIL"
        ok = ok and r["passed"]
        print(f"[{flag}] {r['name']:<{width}}  ({r['elapsed']:6.1f}s)  {r['detail']}")
    print("selftest:", "all criteria passed" if ok else "FAILURES present")
    return 0 if ok else 1


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="prohull", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    for name in ("extremal", "scan", "jensen", "norms", "spectrum"):
        p = sub.add_parser(name, help=f"run a {name} task from a config")
        p.add_argument("--config", required=True)
        p.add_argument("--out", default="out")
        p.add_argument("--threads", type=int, default=1)
        p.add_argument("--seed", type=int, default=None)
    p = sub.add_parser("example", help="run a named example family")
    p.add_argument("name", choices=["exp_graph", "gap_series", "torus"])
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="out")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=None)
    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.add_argument("--list", action="store_true")
    p.add_argument("--only", nargs="*", default=None)
    args = ap.parse_args(argv)

    if args.command == "selftest":
        return selftest(args.list, args.only)

    try:
        with open(args.config) as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1
    if args.seed is not None:
        config["seed"] = args.seed
    if args.command == "example":
        config.setdefault("task", {})
        config["task"]["kind"] = "example"
        config["task"]["name"] = args.name
    elif config.get("task", {}).get("kind") not in (None, args.command):
        print(f"error: config task kind {config['task'].get('kind')!r} "
              f"does not match command {args.command!r}", file=sys.stderr)
        return 1
    else:
        config.setdefault("task", {})
        config["task"].setdefault("kind", args.command)
    try:
        return run(config, Path(args.out), threads=args.threads)
    except (ConfigError, KeyError, ValueError) as exc:
        print(f"error: invalid config: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
