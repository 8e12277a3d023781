"""Command line entry point: ``statics <command> input.json``."""
from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import dynamics, lifting, reciprocal, render, statics
from .complex import euler_characteristic, genus, validate_diagram
from .errors import NumericalGateError, SchemaError, StaticsError, ValidationError
from .io import dumps, read_diagram
from .numerics import Tolerance
from .sheaf import assemble_chain_complex, constant_cosheaf, homology

EXIT_SCHEMA, EXIT_VALIDATION, EXIT_NUMERICAL = 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    stress_index: int = 0
    convention: str = "cremona"
    alpha: float = 1.0
    steps: int = 100
    seed: int = 0
    output: str | None = None
    layers: tuple = ("form", "forces", "dual")
    tol: Tolerance = Tolerance()


def tolerance_from_env(env=None) -> Tolerance:
    raw = (env if env is not None else os.environ).get("STATICS_TOL")
    if raw is None:
        return Tolerance()
    try:
        return Tolerance(relative=float(raw))
    except ValueError:
        raise SchemaError(f"STATICS_TOL must be a positive number, got {raw!r}") from None


def normalized(vec) -> np.ndarray:
    """Scale so the first entry of significant size equals one."""
    v = np.asarray(vec, dtype=float)
    big = np.flatnonzero(np.abs(v) > 1e-9 * max(np.abs(v).max(initial=0.0), 1e-300))
    return v / v[big[0]] if big.size else v


def _dims(obj, tol):
    data = assemble_chain_complex(obj, tol)
    return [homology(data, k, tol).dimension for k in range(3)]


def _load(path, tol):
    d = read_diagram(path)
    report = validate_diagram(d)
    return d, report


def _pick_stress(d, cfg):
    ss = statics.self_stresses(d, cfg.tol)
    if not ss:
        return None
    if not 0 <= cfg.stress_index < len(ss):
        raise ValidationError(f"stress index {cfg.stress_index} out of range (have {len(ss)})")
    return normalized(ss[cfg.stress_index].vector)


def cmd_validate(path, cfg: RunConfig) -> tuple:
    d, report = _load(path, cfg.tol)
    return (0 if report.ok else EXIT_VALIDATION), {"ok": report.ok, "failures": report.failures}


def cmd_analyze(path, cfg: RunConfig) -> tuple:
    d, report = _load(path, cfg.tol)
    report.raise_if_failed()
    tol = cfg.tol
    cx = d.complex
    F = _dims(statics.force_cosheaf(d), tol)
    J = _dims(statics.position_sheaf(d), tol)
    Lk = _dims(statics.linkage_sheaf(d), tol)
    G = _dims(statics.force_sequence(d, tol).quotient, tol)
    V, E, Fc = cx.counts()
    modes = statics.freedom_modes(d, tol)
    out = {
        "counts": {"V": V, "E": E, "F": Fc},
        "closed": cx.closed,
        "euler_characteristic": euler_characteristic(cx),
        "genus": genus(cx) if cx.closed else None,
        "H0F": F[0], "H1F": F[1],
        "H0J": J[0], "H1J": J[1],
        "H0L": Lk[0], "H1L": Lk[1],
        "G": G,
        "constant_R2": _dims(constant_cosheaf(cx, 2), tol),
        "maxwell": statics.maxwell_rule_report(d, tol),
        "self_stresses": [dict(zip(cx.edges, normalized(s.vector))) for s in statics.self_stresses(d, tol)],
        "freedom_modes": [{"classification": m.classification,
                           "vertex_velocities": {v: list(x) for v, x in m.vertex_forces.items()}} for m in modes],
    }
    lifts = lifting.lift_space(d, tol)
    out["A"] = {"H2": lifts["dim_H2A"], "mod_affine": lifts["mod_affine"]}
    if cx.closed:
        r = reciprocal.genus_existence_check(d, cfg.convention, tol)
        lg = lifting.lift_genus_check(d, tol)
        out["reciprocal_bound"] = {"dim_self_stress": r["dim_self_stress"], "bound_4g": r["bound_4g"],
                                   "reciprocal_guaranteed": r["reciprocal_guaranteed"],
                                   "dim_reciprocal_stresses": r["dim_reciprocal_stresses"]}
        out["lift_bound"] = {"dim_self_stress": lg["dim_self_stress"], "bound_6g": lg["bound_6g"],
                             "lift_guaranteed": lg["lift_guaranteed"],
                             "lift_space_mod_affine": lg["lift_space_mod_affine"]}
    return 0, out


def cmd_reciprocal(path, cfg: RunConfig) -> tuple:
    d, report = _load(path, cfg.tol)
    report.raise_if_failed()
    w = _pick_stress(d, cfg)
    if w is None:
        w = np.zeros(len(d.complex.edges))
    dual = reciprocal.reciprocal_diagram(d, w, cfg.convention)
    doc = {
        "dimension": 2,
        "closed": dual.complex.closed,
        "cells": {"vertices": list(dual.complex.vertices), "edges": list(dual.complex.edges),
                  "faces": list(dual.complex.faces)},
        "incidence": [[lo, hi, s] for (lo, hi), s in dual.complex.incidence.items()],
        "realization": {v: list(dual.coordinates[v]) for v in dual.complex.vertices},
    }
    return 0, doc


def cmd_lift(path, cfg: RunConfig) -> tuple:
    d, report = _load(path, cfg.tol)
    report.raise_if_failed()
    w = _pick_stress(d, cfg)
    if w is None:
        w = np.zeros(len(d.complex.edges))
    lift = lifting.polyhedral_lift(d, w)
    return 0, lifting.lift_to_obj(d, lift)


def cmd_diffuse(path, cfg: RunConfig) -> tuple:
    d, report = _load(path, cfg.tol)
    report.raise_if_failed()
    L = dynamics.sheaf_laplacian(statics.position_sheaf(d), 0, None, cfg.tol)
    pert = dynamics.random_perturbation(d, cfg.seed)
    x0 = np.concatenate([pert[v] - d.point(v) for v in d.complex.vertices])
    trace = dynamics.diffuse(L, x0, cfg.alpha, "spectral", cfg.steps, tol=cfg.tol)
    return 0, trace.to_csv()


def cmd_render(path, cfg: RunConfig) -> tuple:
    d, report = _load(path, cfg.tol)
    report.raise_if_failed()
    w = _pick_stress(d, cfg)
    stress = dict(zip(d.complex.edges, w)) if w is not None else None
    dual = None
    if w is not None and d.complex.closed and "dual" in cfg.layers:
        try:
            dual = reciprocal.reciprocal_diagram(d, w, cfg.convention)
        except NumericalGateError:
            dual = None  # stresses on higher genus need not close up
    rotations = None
    if "rotations" in cfg.layers:
        modes = [m for m in statics.freedom_modes(d, cfg.tol) if m.classification != "translation"]
        if modes:
            rates = reciprocal.edge_rotations(d, modes[-1])
            rotations = dict(zip(d.complex.edges, rates))
    return 0, render.render_svg(d, stress, dual, rotations, cfg.layers)


COMMANDS = {"validate": cmd_validate, "analyze": cmd_analyze, "reciprocal": cmd_reciprocal,
            "lift": cmd_lift, "diffuse": cmd_diffuse, "render": cmd_render}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="statics", description="Homological statics of planar trusses.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("input", help="diagram JSON file")
    p.add_argument("--stress-index", type=int, default=0)
    p.add_argument("--convention", choices=reciprocal.CONVENTIONS, default="cremona")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--layers", default="form,forces,dual",
                   help=f"comma separated subset of {','.join(render.LAYERS)}")
    p.add_argument("-o", "--output", default=None)
    return p


def _emit(payload, output):
    text = payload if isinstance(payload, str) else dumps(payload)
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        tol = tolerance_from_env()
        layers = tuple(x for x in args.layers.split(",") if x)
        bad = [x for x in layers if x not in render.LAYERS]
        if bad:
            raise SchemaError(f"unknown layers {bad}")
        cfg = RunConfig(args.stress_index, args.convention, args.alpha, args.steps, args.seed,
                        args.output, layers, tol)
        code, payload = COMMANDS[args.command](args.input, cfg)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except NumericalGateError as exc:
        print(f"numerical gate failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValidationError, StaticsError, ValueError) as exc:
        print(f"validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    _emit(payload, args.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
