"""Command-line surface: reproducible runs with machine-readable outputs.

Commands: wave, spectrum, critical, simulate, verify.  A JSON config file
(--config) carries all numerical settings; --out prefixes the output
files; --jobs fans parameter sweeps out over a process pool (results are
merged in input order, so output is deterministic regardless of --jobs).

Exit codes: 0 = computed (an unstable simulation is a result, not a
failure), 1 = numerical failure, 2 = config error.
"""

from __future__ import annotations

import argparse
import cmath
import json
import math
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np
import jsonschema

from . import __version__
from .model import params_from, wave_profile, wave_jumps
from .spectral import (
    BranchCutError,
    boundary_matrix,
    branch_data,
    collision_exclusion_polys,
    dispersion,
    dispersion_eps,
    essential_membership,
)
from .rootscan import Rect, scan
from .hurwitz import (
    UniquenessViolationError,
    critical_curve,
    hurwitz_limit_poly,
    hurwitz_limit_poly_deriv,
    p7_coeffs,
    squared_form,
    transversality,
)
from .simulator import (
    InsufficientDataError,
    PerturbationSpec,
    SimConfig,
    detect_oscillation,
    run,
)
from .io_utils import fmt_float, write_csv, write_json, write_provenance

CONFIG_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "m": {"type": ["number", "array"], "items": {"type": "number"}},
        "epsilon": {"type": ["number", "array"], "items": {"type": "number"}},
        "wave": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "z_min": {"type": "number"},
                "z_max": {"type": "number"},
                "n": {"type": "integer", "minimum": 2},
            },
        },
        "spectrum": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "rect": {
                    "type": "array",
                    "items": {"type": "number"},
                    "minItems": 4,
                    "maxItems": 4,
                },
                "grid": {
                    "type": "array",
                    "items": {"type": "integer", "minimum": 2},
                    "minItems": 2,
                    "maxItems": 2,
                },
            },
        },
        "critical": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "eps_list": {
                    "type": "array",
                    "items": {"type": ["number", "string"]},
                    "minItems": 1,
                },
            },
            "required": ["eps_list"],
        },
        "sim": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "l_minus": {"type": "number"},
                "l_plus": {"type": "number"},
                "n_cells": {"type": "integer", "minimum": 8},
                "dt": {"type": "number", "exclusiveMinimum": 0},
                "t_end": {"type": "number", "exclusiveMinimum": 0},
                "dt_out": {"type": "number", "exclusiveMinimum": 0},
                "amplitude": {"type": "number"},
                "shape": {"type": "string"},
                "limit_mode": {"type": "boolean"},
                "advection": {"type": "string", "enum": ["upwind", "upwind2", "limited"]},
            },
        },
    },
}

DEFAULTS = {"m": 6.0, "epsilon": 0.01}


class ConfigError(Exception):
    pass


class OutPrefix:
    """Maps logical output names to paths under the --out prefix.

    A prefix ending in a path separator (or naming an existing
    directory) puts files inside that directory; otherwise it is a
    filename prefix.
    """

    def __init__(self, raw: str):
        self.raw = raw

    def path(self, name: str) -> Path:
        if self.raw.endswith(("/", "\\")) or Path(self.raw).is_dir():
            p = Path(self.raw) / name
        else:
            base = Path(self.raw)
            p = base.parent / (base.name + name)
        p.parent.mkdir(parents=True, exist_ok=True)
        return p


def load_config(path: str | None) -> dict:
    if path is None:
        return dict(DEFAULTS)
    try:
        raw = Path(path).read_text()
    except OSError as err:
        raise ConfigError(f"cannot read config: {err}") from err
    try:
        cfg = json.loads(raw)
    except json.JSONDecodeError as err:
        raise ConfigError(f"config is not valid JSON: {err}") from err
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as err:
        loc = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise ConfigError(f"config schema violation at {loc}: {err.message}") from err
    merged = dict(DEFAULTS)
    merged.update(cfg)
    return merged


def _param_pairs(cfg: dict) -> list:
    ms = cfg["m"] if isinstance(cfg["m"], list) else [cfg["m"]]
    es = cfg["epsilon"] if isinstance(cfg["epsilon"], list) else [cfg["epsilon"]]
    return [(m, e) for m in ms for e in es]


def cmd_wave(cfg: dict, out: OutPrefix, jobs: int) -> int:
    wave_cfg = cfg.get("wave", {})
    z_min = wave_cfg.get("z_min", -10.0)
    z_max = wave_cfg.get("z_max", 10.0)
    n = wave_cfg.get("n", 401)
    m, eps = _param_pairs(cfg)[0]
    p = params_from(m, eps)
    prof = wave_profile(p)
    z = np.linspace(z_min, z_max, n)
    rows = zip(z, prof.theta(z), prof.phi(z), prof.dtheta(z), prof.dphi(z))
    csv_path = out.path("wave.csv")
    write_csv(csv_path, ["z", "theta0", "phi0", "dtheta0", "dphi0"], rows)
    write_provenance(csv_path, "wave", cfg)
    jumps = wave_jumps(p)
    meta = {
        "m": p.m,
        "epsilon": p.epsilon,
        "theta_i": p.theta_i,
        "le": "inf" if p.le_is_infinite else p.le,
        "a_coeff": p.a_coeff,
        "dtheta_at_0": jumps["dtheta_at_0"],
        "d2theta_jump": jumps["d2theta_jump"],
        "d2phi_jump": jumps["d2phi_jump"],
    }
    meta_path = out.path("wave_meta.json")
    write_json(meta_path, meta)
    write_provenance(meta_path, "wave", cfg)
    print(f"wrote {csv_path} and {meta_path}")
    return 0


def _spectrum_task(args):
    m, eps, rect_spec, grid_n = args
    p = params_from(m, eps)
    rect = Rect(*rect_spec)
    res = np.linspace(rect.re_min, rect.re_max, grid_n[0])
    ims = np.linspace(rect.im_min, rect.im_max, grid_n[1])
    grid_rows = []
    for re in res:
        for im in ims:
            lam = complex(re, im)
            cls = essential_membership(lam, p)
            grid_rows.append((re, im, cls.label, cls.residual))
    rs = scan(p, rect)
    root_rows = []
    if rs.zero_eigenvalue is not None:
        z = rs.zero_eigenvalue
        root_rows.append((z.location.real, z.location.imag, z.residual, float(z.multiplicity), "zero-eigenvalue"))
    for r in rs.roots:
        root_rows.append((r.location.real, r.location.imag, r.residual, float(r.multiplicity), "point-root"))
    return grid_rows, root_rows


def cmd_spectrum(cfg: dict, out: OutPrefix, jobs: int) -> int:
    spec_cfg = cfg.get("spectrum", {})
    rect_spec = spec_cfg.get("rect", [-3.0, 1.0, -3.0, 3.0])
    grid_n = spec_cfg.get("grid", [41, 41])
    pairs = _param_pairs(cfg)
    tasks = [(m, e, tuple(rect_spec), tuple(grid_n)) for (m, e) in pairs]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_spectrum_task, tasks))
    else:
        results = [_spectrum_task(t) for t in tasks]

    index_rows = []
    for (m, e), (grid_rows, root_rows) in zip(pairs, results):
        tag = "" if len(pairs) == 1 else f"_m{m:g}_eps{e:g}"
        spath = out.path(f"spectrum{tag}.csv")
        rows = (
            (re, im, label, "" if resid is None else fmt_float(resid))
            for (re, im, label, resid) in grid_rows
        )
        write_csv(spath, ["re", "im", "classification", "absD"], rows)
        write_provenance(spath, "spectrum", cfg)
        rpath = out.path(f"roots{tag}.csv")
        write_csv(rpath, ["re", "im", "residual", "multiplicity", "kind"], root_rows)
        write_provenance(rpath, "spectrum", cfg)
        index_rows.append((f"{m:g}", f"{e:g}", spath.name, rpath.name))
        print(f"wrote {spath} and {rpath}")
    if len(pairs) > 1:
        ipath = out.path("spectrum_index.csv")
        write_csv(ipath, ["m", "epsilon", "spectrum_file", "roots_file"], index_rows)
        write_provenance(ipath, "spectrum", cfg)
    return 0


def cmd_critical(cfg: dict, out: OutPrefix, jobs: int) -> int:
    crit = cfg.get("critical")
    if not crit or not crit.get("eps_list"):
        raise ConfigError("critical command requires a non-empty critical.eps_list")
    eps_list = [Fraction(str(e)) for e in crit["eps_list"]]
    rows = []
    tv_rows = []
    try:
        points = critical_curve(eps_list)
    except UniquenessViolationError as err:
        # surfaced as a row-level status: recompute point by point
        points = []
        for e in eps_list:
            try:
                points.extend(critical_curve([e]))
                rowstatus = "ok"
            except UniquenessViolationError as err2:
                rows.append((float(e), None, None, None, None, None, f"uniqueness-violation: {err2}"))
    for pt in points:
        rows.append(
            (
                float(pt.epsilon),
                pt.m_c,
                pt.omega,
                pt.residuals["delta6"],
                pt.residuals["p7_at_i_omega"],
                pt.residuals["dispersion_at_i_omega"],
                "ok",
            )
        )
        tv = transversality(pt.epsilon, pt)
        tv_rows.append((float(pt.epsilon), tv.real, tv.imag))
    cpath = out.path("critical.csv")
    write_csv(
        cpath,
        ["epsilon", "m_c", "omega", "delta6_residual", "p7_residual", "dispersion_residual", "status"],
        rows,
    )
    write_provenance(cpath, "critical", cfg)
    tpath = out.path("transversality.csv")
    write_csv(tpath, ["epsilon", "re", "im"], tv_rows)
    write_provenance(tpath, "critical", cfg)
    print(f"wrote {cpath} and {tpath}")
    return 0


def cmd_simulate(cfg: dict, out: OutPrefix, jobs: int) -> int:
    m, eps = _param_pairs(cfg)[0]
    p = params_from(m, eps)
    sim = cfg.get("sim", {})
    config = SimConfig(
        params=p,
        l_minus=sim.get("l_minus", 25.0),
        l_plus=sim.get("l_plus", 25.0),
        n_cells=sim.get("n_cells", 500),
        dt=sim.get("dt", 1e-3),
        t_end=sim.get("t_end", 10.0),
        dt_out=sim.get("dt_out", 2e-2),
        perturbation=PerturbationSpec(
            amplitude=sim.get("amplitude", 1e-3), shape=sim.get("shape", "theta_bump")
        ),
        limit_mode=sim.get("limit_mode", False),
        advection=sim.get("advection", "upwind2"),
    )
    trace = run(config)
    tpath = out.path("trace.csv")
    write_csv(
        tpath,
        ["tau", "g", "gdot", "s", "wnorm", "stefan_diag"],
        zip(trace.tau, trace.g, trace.gdot, trace.s, trace.wnorm, trace.stefan_diag),
    )
    write_provenance(tpath, "simulate", cfg)
    verdict_payload = {
        "rejections": trace.meta["rejections"],
        "blowup": trace.meta["blowup"],
        "n_steps": trace.meta["n_steps"],
        "dt_final": trace.meta["dt_final"],
    }
    try:
        v = detect_oscillation(trace)
        verdict_payload.update(
            {
                "verdict": v.verdict,
                "freq": None if math.isnan(v.freq) else v.freq,
                "rate": v.rate,
                "freq_defined": v.freq_defined,
                "n_crossings": v.n_crossings,
            }
        )
    except InsufficientDataError as err:
        verdict_payload.update({"verdict": "undetermined", "reason": str(err)})
    vpath = out.path("verdict.json")
    write_json(vpath, verdict_payload)
    write_provenance(vpath, "simulate", cfg)
    print(f"wrote {tpath} and {vpath}")
    return 0


def _verify_checks():
    """The invariant battery; yields (name, passed, residual)."""
    rng = random.Random(20240811)

    # dispersion equivalence on a 10x10x20 grid
    worst = 0.0
    for m in np.linspace(2.5, 9.0, 10):
        for e in np.linspace(1e-3, 0.45, 10):
            p = params_from(m, e)
            for _ in range(20):
                lam = complex(rng.uniform(-0.2, 3.0), rng.uniform(-3.0, 3.0))
                d1 = dispersion(lam, p)
                d2 = dispersion_eps(lam, m, e)
                worst = max(worst, abs(d1 - d2) / max(abs(d2), 1e-30))
    yield "dispersion-equivalence", worst < 1e-11, worst

    # boundary determinant identity on 200 random off-cut points
    worst = 0.0
    for _ in range(200):
        m = rng.uniform(2.5, 9.0)
        e = rng.uniform(1e-3, 0.45)
        p = params_from(m, e)
        lam = complex(rng.uniform(-0.2, 3.0), rng.uniform(-3.0, 3.0))
        bd = branch_data(lam, p)
        det = np.linalg.det(boundary_matrix(lam, p))
        lhs = det * p.le * (bd.k2 - bd.k3)
        rhs = dispersion(lam, p)
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-30))
    yield "determinant-identity", worst < 1e-10, worst

    # squared-form identity on 100 random points
    worst = 0.0
    for _ in range(100):
        m = rng.uniform(2.5, 8.0)
        e = rng.uniform(1e-3, 0.45)
        lam = complex(rng.uniform(-0.2, 2.0), rng.uniform(-2.0, 2.0))
        sf = squared_form(lam, m, e)
        worst = max(worst, sf.identity_residual(p7_coeffs(Fraction(m), Fraction(e))))
    yield "squared-form-identity", worst < 1e-9, worst

    # exclusion-polynomial sign scan on a 1000-point grid: q > 0 > p below
    # 1/2 and q < 0, p < 0 above the threshold point, which makes the two
    # sides of the collision-point equation differ in sign everywhere
    ok = True
    thetas = np.linspace(1e-3, 1.0 - 1e-3, 1000)
    bar = (4 + math.sqrt(22)) / 12
    for t in thetas:
        rec = collision_exclusion_polys(float(t))
        if t < 0.5 and not (rec["q"] > 0 and rec["p"] < 0):
            ok = False
        if t > bar + 1e-9 and not (rec["q"] < 0 and rec["p"] < 0):
            ok = False
    yield "exclusion-sign-lemma", ok, 0.0

    # limit Hurwitz polynomial anchor, exact rational arithmetic
    v6 = hurwitz_limit_poly(Fraction(6))
    d6 = hurwitz_limit_poly_deriv(Fraction(6))
    yield "limit-hurwitz-anchor", v6 == 0 and d6 > 0, float(abs(v6))

    # zero eigenvalue: D(0) = 0 and rank 3 of the boundary matrix there
    p = params_from(6.0, 0.01)
    r0 = abs(dispersion(0.0, p))
    sv = np.linalg.svd(boundary_matrix(0.0, p), compute_uv=False)
    rank3 = sv[-1] < 1e-8 * sv[0] and sv[-2] > 1e-4 * sv[0]
    yield "zero-eigenvalue", r0 < 1e-12 and rank3, r0

    # conjugate symmetry spot check
    worst = 0.0
    for _ in range(50):
        m = rng.uniform(2.5, 9.0)
        e = rng.uniform(1e-3, 0.45)
        p = params_from(m, e)
        lam = complex(rng.uniform(-0.2, 3.0), rng.uniform(0.1, 3.0))
        d = dispersion(lam, p)
        dc = dispersion(lam.conjugate(), p)
        worst = max(worst, abs(dc - d.conjugate()) / max(abs(d), 1e-30))
    yield "conjugate-symmetry", worst == 0.0, worst


def cmd_verify(cfg: dict, out: OutPrefix, jobs: int) -> int:
    results = []
    failed = False
    for name, passed, residual in _verify_checks():
        results.append({"check": name, "passed": bool(passed), "residual": float(residual)})
        status = "PASS" if passed else "FAIL"
        print(f"{status} {name} (residual={residual:.3e})")
        failed = failed or not passed
    if out is not None:
        rpath = out.path("verify_report.json")
        write_json(rpath, {"results": results, "all_passed": not failed})
        write_provenance(rpath, "verify", cfg)
        print(f"wrote {rpath}")
    return 1 if failed else 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="frontspec",
        description="Traveling-wave spectral stability, Hopf critical curve and "
        "front-fixed simulation for a free-interface combustion model",
    )
    parser.add_argument("--version", action="version", version=f"frontspec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("wave", "write the traveling-wave profile and its interface data"),
        ("spectrum", "classify a lambda grid and scan for dispersion roots"),
        ("critical", "trace the Hopf critical curve m_c(eps), omega(eps)"),
        ("simulate", "run the front-fixed solver and classify the front motion"),
        ("verify", "run the identity/invariant battery"),
    ]:
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--config", default=None, help="JSON config file")
        sp.add_argument("--out", default="./", help="output path prefix")
        sp.add_argument("--jobs", type=int, default=1, help="parallel workers for sweeps")

    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2

    out = OutPrefix(args.out)

    handlers = {
        "wave": cmd_wave,
        "spectrum": cmd_spectrum,
        "critical": cmd_critical,
        "simulate": cmd_simulate,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](cfg, out, args.jobs)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except (ValueError, BranchCutError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2
    except Exception as err:  # numerical failures
        print(f"numerical failure: {type(err).__name__}: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
