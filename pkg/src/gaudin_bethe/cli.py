"""Command-line entry point: ``gaudin-bethe <subcommand> --config run.json``.

Exit codes: 0 all checks pass, 1 a check failed, 2 the solver found no
solution, 3 the configuration is invalid.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import liealg, repmod
from .betheroots import BetheConfig, eigenvalue, multistart_solve, residual, validate_config
from .config import DEFAULT_SEED, TOL, sample_points
from .gaudin import CollisionError, make_space, marked_points
from .ketcalc import LabelError, p_series
from .verify import (TRANSCRIPTION_CORRECTIONS, VerificationReport, audit_commuting_family,
                     decomposition_error, dense_spectrum, evaluate_label_vec, fmt_num, random_label, theorem_report)

EXIT_OK, EXIT_CHECK, EXIT_SOLVER, EXIT_CONFIG = 0, 1, 2, 3
DECOMPOSITION_SHAPES = ((1, 1, 0), (1, 1, 1), (2, 1, 1), (2, 2, 0))


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    algebra: str
    weights: List[Tuple[int, ...]]
    z: List[complex]
    counts: Tuple[int, ...]
    max_iter: int = 100
    tol: float = TOL.newton
    attempts: int = 64
    seed: int = DEFAULT_SEED
    u_samples: int = 5
    residual_tol: float = TOL.residual
    roots: Optional[Tuple[Tuple, ...]] = None
    u: Optional[complex] = None

    def echo(self) -> dict:
        out = {
            "algebra": self.algebra,
            "sites": ", ".join(f"{w}@{fmt_num(z)}" for w, z in zip(self.weights, self.z)),
            "counts": self.counts,
            "solver": f"max_iter={self.max_iter} tol={self.tol:g} attempts={self.attempts} seed={self.seed}",
            "verification": f"u_samples={self.u_samples} residual_tol={self.residual_tol:g}",
        }
        if self.roots is not None:
            out["roots"] = _fmt_roots(self.roots)
        return out


def _complex(x, what: str) -> complex:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return complex(x)
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(v, (int, float)) for v in x):
        return complex(x[0], x[1])
    raise ConfigError(f"{what} must be a number or a [re, im] pair, got {x!r}")


def _root(x, what: str):
    """Roots may be exact rationals written as strings, e.g. "1/3"."""
    if isinstance(x, str):
        try:
            return Fraction(x)
        except ValueError:
            raise ConfigError(f"{what}: cannot parse {x!r} as a rational") from None
    return _complex(x, what)


def _int(d: dict, key: str, default: int, low: int = 0) -> int:
    v = d.get(key, default)
    if not isinstance(v, int) or isinstance(v, bool) or v < low:
        raise ConfigError(f"{key} must be an integer >= {low}")
    return v


def _pos(d: dict, key: str, default: float) -> float:
    v = d.get(key, default)
    if not isinstance(v, (int, float)) or isinstance(v, bool) or not v > 0:
        raise ConfigError(f"{key} must be a positive number")
    return float(v)


def parse_config(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("configuration must be a JSON object")
    alg = data.get("algebra")
    if alg not in (liealg.SL2, liealg.SL3):
        raise ConfigError(f"algebra must be 'sl2' or 'sl3', got {alg!r}")
    rank = 1 if alg == liealg.SL2 else 2
    sites = data.get("sites")
    if not isinstance(sites, list) or not sites:
        raise ConfigError("sites must be a nonempty list")
    weights, zs = [], []
    for i, s in enumerate(sites):
        if not isinstance(s, dict) or "weight" not in s or "z" not in s:
            raise ConfigError(f"site {i} needs 'weight' and 'z'")
        w = s["weight"]
        w = [w] if isinstance(w, int) else w
        if (not isinstance(w, list) or len(w) != rank
                or not all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in w)):
            raise ConfigError(f"site {i}: weight must be {rank} nonnegative integer(s)")
        weights.append(tuple(w))
        zs.append(_complex(s["z"], f"site {i} z"))
    keys = ("n",) if rank == 1 else ("k", "l")
    counts = tuple(_int(data, k, 0) for k in keys)
    solver = data.get("solver", {})
    ver = data.get("verification", {})
    if not isinstance(solver, dict) or not isinstance(ver, dict):
        raise ConfigError("solver and verification must be objects")
    cfg = RunConfig(
        algebra=alg, weights=weights, z=zs, counts=counts,
        max_iter=_int(solver, "max_iter", 100, 1), tol=_pos(solver, "tol", TOL.newton),
        attempts=_int(solver, "attempts", 64, 1), seed=_int(solver, "seed", DEFAULT_SEED),
        u_samples=_int(ver, "u_samples", 5, 1), residual_tol=_pos(ver, "residual_tol", TOL.residual),
    )
    if "roots" in data:
        r = data["roots"]
        names = ("w",) if rank == 1 else ("w1", "w2")
        if not isinstance(r, dict) or any(not isinstance(r.get(n, []), list) for n in names):
            raise ConfigError(f"roots must be an object with lists {names}")
        cfg.roots = tuple(tuple(_root(x, f"root {n}") for x in r.get(n, [])) for n in names)
        cfg.counts = tuple(len(f) for f in cfg.roots)
    if "u" in data:
        cfg.u = _complex(data["u"], "u")
    # cheap structural validation before anything is built
    try:
        pts = marked_points(alg, weights, zs)
        if cfg.roots is not None:
            validate_config(_numeric_roots(cfg.roots), pts)
        if cfg.u is not None:
            pts.check_point(cfg.u, "u")
    except (CollisionError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def _numeric_roots(roots) -> BetheConfig:
    return BetheConfig(tuple(tuple(complex(x) for x in f) for f in roots))


def _fmt_roots(roots) -> str:
    names = ("w",) if len(roots) == 1 else ("w1", "w2")
    return " ".join(f"{n}=[{', '.join(fmt_num(x) for x in f)}]" for n, f in zip(names, roots))


def _parse_u(text: str) -> complex:
    try:
        parts = [float(x) for x in text.split(",")]
    except ValueError:
        raise ConfigError(f"--u expects RE,IM, got {text!r}") from None
    if len(parts) == 1:
        parts.append(0.0)
    if len(parts) != 2:
        raise ConfigError(f"--u expects RE,IM, got {text!r}")
    return complex(parts[0], parts[1])


# --- subcommands ---------------------------------------------------------------


def cmd_check_algebra(cfg: RunConfig, rep: VerificationReport) -> int:
    alg = liealg.algebra(cfg.algebra)
    gens = alg.generators
    anti = sum(1 for a in gens for b in gens
               if liealg.combine(liealg.commutator(b, a), 1, dict(liealg.commutator(a, b))))
    rep.below("bracket antisymmetry defects", anti, 0)
    jac = sum(1 for a in gens for b in gens for c in gens if liealg.jacobi_defect(cfg.algebra, a, b, c))
    rep.below("Jacobi defects", jac, 0)
    for w in sorted(set(cfg.weights)):
        m = repmod.build_module(cfg.algebra, w)
        rep.below(f"module {w}: commutation defects", len(repmod.commutation_defects(m)), 0)
        rep.below(f"module {w}: dimension minus Weyl value", abs(m.dim - repmod.module_dimension(cfg.algebra, w)), 0)
        c = repmod.casimir_scalar(m)
        rep.below(f"module {w}: Casimir minus expected", abs(c - repmod.expected_casimir(cfg.algebra, w)), 0,
                  f"Casimir {c}")
    return EXIT_OK


def _solutions(cfg: RunConfig, space) -> List[BetheConfig]:
    if cfg.roots is not None:
        return [_numeric_roots(cfg.roots)]
    reps = multistart_solve(space, cfg.counts, cfg.seed, cfg.attempts, cfg.max_iter, cfg.tol)
    return [r.config for r in reps]


def cmd_solve(cfg: RunConfig, rep: VerificationReport) -> int:
    pts = marked_points(cfg.algebra, cfg.weights, cfg.z)
    reps = multistart_solve(pts, cfg.counts, cfg.seed, cfg.attempts, cfg.max_iter, cfg.tol)
    rep.system["distinct solutions"] = len(reps)
    if not reps:
        rep.above("converged solutions", 0, 0, "no start converged")
        return EXIT_SOLVER
    for i, r in enumerate(reps, 1):
        rep.note(f"solution {i}: {_fmt_roots(r.config.canonical().families)}")
        again = float(np.max(np.abs(residual(r.config, pts)), initial=0.0))
        rep.below(f"solution {i}: Bethe residual", again, 10 * cfg.tol, f"{r.iterations} iterations")
    return EXIT_OK


def cmd_expand(cfg: RunConfig, rep: VerificationReport) -> int:
    if cfg.algebra != liealg.SL3:
        raise ConfigError("expand needs an sl3 configuration")
    if cfg.roots is not None:
        w1, w2 = cfg.roots
    else:
        sols = _solutions(cfg, marked_points(cfg.algebra, cfg.weights, cfg.z))
        if not sols:
            rep.above("converged solutions", 0, 0, "no start converged")
            return EXIT_SOLVER
        w1, w2 = sols[0].canonical().families
    try:
        s = p_series(list(w1), list(w2))
    except LabelError as exc:
        raise ConfigError(str(exc)) from None
    rep.system["roots"] = _fmt_roots((w1, w2))
    rep.system["terms"] = len(s)
    rep.notes.extend(s.pretty().splitlines())
    return EXIT_OK


def cmd_verify(cfg: RunConfig, rep: VerificationReport) -> int:
    space = make_space(cfg.algebra, cfg.weights, cfg.z)
    sols = _solutions(cfg, space)
    if not sols:
        rep.above("converged solutions", 0, 0, "no start converged")
        return EXIT_SOLVER
    if space.n_sites >= 2 and space.dim <= TOL.dense_cap:
        rep.below("commuting family", audit_commuting_family(space), 1e-12)
    for i, sol in enumerate(sols, 1):
        sol = sol.canonical()
        sub = VerificationReport()
        rep.note(f"solution {i}: {_fmt_roots(sol.families)}")
        theorem_report(sol, space, cfg.u_samples, cfg.seed, cfg.residual_tol, cfg.u, sub)
        rep.notes.extend(f"  {n}" for n in sub.notes)
        for c in sub.checks:
            c.name = f"solution {i}: {c.name}"
            rep.checks.append(c)
    return EXIT_OK


def cmd_decompose(cfg: RunConfig, rep: VerificationReport) -> int:
    if cfg.algebra != liealg.SL3:
        raise ConfigError("decompose needs an sl3 configuration")
    space = make_space(cfg.algebra, cfg.weights, cfg.z)
    rng = np.random.default_rng(cfg.seed)
    fixes = ", ".join(TRANSCRIPTION_CORRECTIONS) or "none"
    rep.note(f"transcription corrections applied: {fixes}")
    for shape in DECOMPOSITION_SHAPES:
        label = random_label(shape, space, rng)
        entries = label.w1 + label.w2 + label.w3
        us = [cfg.u] if cfg.u is not None else sample_points(space.z, cfg.u_samples,
                                                             int(rng.integers(2**31)), avoid=entries)
        if np.linalg.norm(evaluate_label_vec(label, space)) < 1e-12:
            rep.note(f"shape {shape}: label vector vanishes in this module, check is vacuous")
        worst = max(decomposition_error(label, u, space) for u in us)
        rep.below(f"nine components vs direct I(u), shape {shape}", worst, TOL.decomposition,
                  f"{len(us)} u")
    return EXIT_OK


def cmd_spectrum(cfg: RunConfig, rep: VerificationReport) -> int:
    space = make_space(cfg.algebra, cfg.weights, cfg.z)
    u = cfg.u
    if u is None:
        u = sample_points(space.z, 1, cfg.seed)[0]
    space.check_point(u, "u")
    try:
        vals, _ = dense_spectrum(space.generating(u))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    rep.system["u"] = fmt_num(u)
    rep.system["dimension"] = space.dim
    vac = space.vacuum_tau(u)
    rep.note(f"vacuum tau(u): {fmt_num(vac)}")
    key = lambda x: (round(x.real, 9), round(x.imag, 9))
    groups: List[List[complex]] = []
    for x in sorted(vals, key=key):
        if groups and abs(x - groups[-1][0]) <= 1e-8 * max(1.0, abs(x)):
            groups[-1].append(x)
        else:
            groups.append([x])
    for g in groups:
        rep.note(f"{fmt_num(np.mean(g), 10)}  x{len(g)}")
    gap = min(abs(vals - vac))
    rep.below("vacuum tau in spectrum", gap, 1e-10 * max(1.0, abs(vac)))
    return EXIT_OK


COMMANDS = {
    "check-algebra": cmd_check_algebra,
    "solve": cmd_solve,
    "expand": cmd_expand,
    "verify": cmd_verify,
    "decompose": cmd_decompose,
    "spectrum": cmd_spectrum,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gaudin-bethe",
                                description="Bethe Ansatz solver and verifier for sl2/sl3 Gaudin models.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("--config", required=True, help="JSON run configuration")
    p.add_argument("--json", action="store_true", help="emit the report as JSON")
    p.add_argument("--tol", type=float, help="solver stopping tolerance")
    p.add_argument("--max-iter", type=int, help="Newton iteration cap")
    p.add_argument("--seed", type=int, help="random seed for starts and samples")
    p.add_argument("--samples", type=int, help="number of sampled evaluation points")
    p.add_argument("--u", help="evaluation point as RE,IM")
    return p


def load_config(args) -> RunConfig:
    try:
        with open(args.config) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {args.config}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {args.config}: {exc}") from None
    cfg = parse_config(data)
    if args.tol is not None:
        if not args.tol > 0:
            raise ConfigError("--tol must be positive")
        cfg.tol = args.tol
    if args.max_iter is not None:
        if args.max_iter < 1:
            raise ConfigError("--max-iter must be at least 1")
        cfg.max_iter = args.max_iter
    if args.seed is not None:
        cfg.seed = args.seed
    if args.samples is not None:
        if args.samples < 1:
            raise ConfigError("--samples must be at least 1")
        cfg.u_samples = args.samples
    if args.u is not None:
        cfg.u = _parse_u(args.u)
        try:
            marked_points(cfg.algebra, cfg.weights, cfg.z).check_point(cfg.u, "u")
        except CollisionError as exc:
            raise ConfigError(str(exc)) from None
    return cfg


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    rep = VerificationReport()
    rep.system["command"] = args.command
    try:
        cfg = load_config(args)
        rep.system.update(cfg.echo())
        code = COMMANDS[args.command](cfg, rep)
    except ConfigError as exc:
        rep.below("configuration valid", 1, 0, str(exc))
        code = EXIT_CONFIG
    if code == EXIT_OK and not rep.passed:
        code = EXIT_CHECK
    rep.system["exit code"] = code
    out.write((rep.to_json() if args.json else rep.to_text()) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
