"""Acceptance gate: nine criteria, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -s`` (or as a script) to see the lines.
"""

import io
import json
import sys
import tempfile
from fractions import Fraction as Fr
from itertools import product
from pathlib import Path

import numpy as np
import pytest

from gaudin_bethe.betheroots import BetheConfig, eigenvalue, multistart_solve
from gaudin_bethe.cli import run
from gaudin_bethe.config import DEFAULT_SEED, sample_points
from gaudin_bethe.gaudin import make_space
from gaudin_bethe.ketcalc import FormalKetSum, KetLabel, apply_P_power, p_power_closed, p_series
from gaudin_bethe.liealg import SL2, SL3, algebra, combine, commutator, jacobi_defect
from gaudin_bethe.repmod import (build_sl2_module, build_sl3_module, casimir_scalar,
                                 commutation_defects, expected_casimir, weyl_dimension)
from gaudin_bethe.verify import (TRANSCRIPTION_CORRECTIONS, audit_commuting_family, bethe_vector,
                                 decomposition_error, eigen_residual, eigenvalue_residue,
                                 lemma1_defect, lemma2_defect, match_to_spectrum, random_label)

RESULTS = {}


def record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS[n] = line
    print(line, file=sys.__stdout__, flush=True)
    return ok


# --- criteria -------------------------------------------------------------------


def criterion_1():
    bad = 0
    for alg in (SL2, SL3):
        gens = algebra(alg).generators
        bad += sum(1 for a, b in product(gens, repeat=2)
                   if combine(commutator(b, a), 1, dict(commutator(a, b))))
        bad += sum(1 for a, b, c in product(gens, repeat=3) if jacobi_defect(alg, a, b, c))
    for lam in range(4):
        m = build_sl2_module(lam)
        bad += len(commutation_defects(m)) + (m.dim != lam + 1)
        bad += casimir_scalar(m) != expected_casimir(SL2, (lam,))
    dims = []
    for pq in [(1, 0), (0, 1), (1, 1), (2, 0), (2, 1)]:
        m = build_sl3_module(*pq)
        dims.append(m.dim)
        bad += len(commutation_defects(m)) + (m.dim != weyl_dimension(*pq))
        bad += casimir_scalar(m) != expected_casimir(SL3, pq)
    return record(1, bad == 0, f"exact defects {bad}, sl3 dimensions {dims}")


def criterion_2():
    rng = np.random.default_rng(DEFAULT_SEED)
    z = rng.normal(size=3) + 1j * rng.normal(size=3)
    a = audit_commuting_family(make_space(SL2, [1, 1, 1], z))
    b = audit_commuting_family(make_space(SL3, [(1, 0)] * 3, z))
    return record(2, max(a, b) < 1e-12, f"normalized [H_i,H_j]: sl2 {a:.1e}, sl3 {b:.1e} (tol 1e-12)")


def _sl2_pipeline(cfg=None):
    sp = make_space(SL2, [1, 1], [-1, 1])
    if cfg is None:
        cfg = multistart_solve(sp, (1,))[0].config
    v = bethe_vector(cfg, sp)
    return sp, cfg, v, eigen_residual(v, cfg, sp, 5)


def criterion_3():
    sp, cfg, v, res = _sl2_pipeline()
    w = cfg.w[0]
    tau = eigenvalue(3, cfg, sp)
    residue = eigenvalue_residue(cfg, sp, 0)
    h1, ov = match_to_spectrum(v, sp.hamiltonian(0))
    ok = (abs(w) < 1e-10 and abs(tau - 0.046875) < 1e-12 and res < 1e-10
          and abs(residue - h1) < 1e-10 and abs(h1 - 0.75) < 1e-10 and ov > 1 - 1e-9)
    return record(3, ok, f"w={abs(w):.1e}, tau(3;w)={tau.real:.12g}, residual {res:.1e}, "
                         f"residue {residue.real:.12g} vs dense H1 {h1.real:.12g}")


def _sl3_pipeline(cfg=None):
    sp = make_space(SL3, [(1, 0), (0, 1)], [0, 1])
    if cfg is None:
        cfg = multistart_solve(sp, (1, 1))[0].config
    v = bethe_vector(cfg, sp)
    return sp, cfg, v, eigen_residual(v, cfg, sp, 5)


def criterion_4():
    sp, cfg, v, res = _sl3_pipeline()
    err = max(abs(cfg.w1[0] - 1 / 3), abs(cfg.w2[0] - 2 / 3))
    tau = eigenvalue(2, cfg, sp)
    val, ov = match_to_spectrum(v, sp.gaudin_I(2))
    ok = err < 1e-10 and res < 1e-9 and abs(tau - 1 / 3) < 1e-10 and abs(val - tau) < 1e-10 and ov > 1 - 1e-9
    return record(4, ok, f"roots off by {err:.1e}, residual {res:.1e}, tau(2)={tau.real:.12g}, "
                         f"dense {val.real:.12g}, overlap 1-{1 - ov:.1e}")


def criterion_5():
    sp = make_space(SL3, [(1, 1), (2, 1), (1, 2)], [0.1 + 0.2j, 1.3 - 0.4j, -0.7 + 0.9j])
    rng = np.random.default_rng(DEFAULT_SEED)
    worst = 0.0
    for shape in [(1, 1, 0), (1, 1, 1), (2, 1, 1), (2, 2, 0)]:
        label = random_label(shape, sp, rng)
        for u in sample_points(sp.z, 3, int(rng.integers(2**31)), avoid=label.w1 + label.w2 + label.w3):
            worst = max(worst, decomposition_error(label, u, sp))
    fixes = ", ".join(TRANSCRIPTION_CORRECTIONS) or "none"
    return record(5, worst < 1e-10, f"max relative error {worst:.1e} (tol 1e-10), corrections: {fixes}")


def criterion_6():
    sp = make_space(SL3, [(1, 1), (2, 1), (1, 2)], [0.1 + 0.2j, 1.3 - 0.4j, -0.7 + 0.9j])
    l1 = l2 = 0.0
    systems = [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3)]
    for k, l in systems:
        w2 = tuple(sample_points(sp.z, l, DEFAULT_SEED + 10 * k + l))
        part = multistart_solve(sp, (k, l), fixed=BetheConfig(((), w2)))
        full = multistart_solve(sp, (k, l), attempts=16)
        if not part or not full:
            return record(6, False, f"no Bethe solution for (k,l)=({k},{l})")
        for u in sample_points(sp.z, 2, DEFAULT_SEED, avoid=list(part[0].config.flat()) + list(full[0].config.flat())):
            l1 = max([l1] + [lemma1_defect(n, part[0].config, sp, u) for n in (0, 1, 2)])
            l2 = max([l2] + [lemma2_defect(n, full[0].config, sp, u) for n in (1, 2)])
    return record(6, max(l1, l2) < 1e-10, f"first cancellation {l1:.1e}, second {l2:.1e} "
                                           f"(tol 1e-10, (k,l) up to (3,3))")


def criterion_7():
    a1, b1 = Fr(1, 5), Fr(3, 4)
    one = dict(p_series([a1], [b1]))
    ok1 = one == {KetLabel([a1], [b1]): 1, KetLabel([], [], [a1]): 1 / (b1 - a1)}
    a2, b2 = Fr(2, 7), Fr(5, 3)
    two = dict(p_series([a1, a2], [b1, b2]))
    want = {
        KetLabel([a1, a2], [b1, b2]): 1,
        KetLabel([a1], [b1], [a2]): 1 / (b2 - a2),
        KetLabel([a1], [b2], [a2]): 1 / (b1 - a2),
        KetLabel([a2], [b1], [a1]): 1 / (b2 - a1),
        KetLabel([a2], [b2], [a1]): 1 / (b1 - a1),
        KetLabel([], [], [a1, a2]): 1 / ((b2 - a2) * (b1 - a1)) + 1 / ((b1 - a2) * (b2 - a1)),
    }
    ok2 = two == want
    return record(7, ok1 and ok2, f"single pair exact: {ok1}, two pairs exact (both F3F3 terms): {ok2}")


def criterion_8():
    rng = np.random.default_rng(DEFAULT_SEED)
    worst = 0.0
    for k, l in product(range(1, 4), repeat=2):
        pts = rng.normal(size=k + l) + 1j * rng.normal(size=k + l)
        w1, w2 = list(pts[:k]), list(pts[k:])
        base = FormalKetSum.single(KetLabel(w1, w2, ()), 1.0)
        for n in range(min(k, l) + 1):
            closed, it = p_power_closed(w1, w2, n), apply_P_power(base, n)
            if set(closed.labels()) != set(it.labels()):
                return record(8, False, f"label sets differ at k={k}, l={l}, n={n}")
            worst = max([worst] + [abs(c - it[lab]) / max(1.0, abs(c)) for lab, c in closed])
    return record(8, worst < 1e-12, f"max coefficient gap {worst:.1e} (tol 1e-12)")


def criterion_9():
    gaps = []
    _, cfg, _, _ = _sl2_pipeline()
    _, cfg3, _, _ = _sl3_pipeline()
    for base, pipe in ((cfg, _sl2_pipeline), (cfg3, _sl3_pipeline)):
        x = base.flat()
        for i in range(x.size):
            y = x.copy()
            y[i] += 1e-2
            gaps.append(pipe(base.with_flat(y))[3])
    codes = []
    with tempfile.TemporaryDirectory() as tmp:
        for roots, alg, sites in (
            ({"w": [[0.01, 0]]}, SL2, [{"weight": [1], "z": [-1, 0]}, {"weight": [1], "z": [1, 0]}]),
            ({"w1": [[1 / 3 + 0.01, 0]], "w2": [[2 / 3, 0]]}, SL3,
             [{"weight": [1, 0], "z": [0, 0]}, {"weight": [0, 1], "z": [1, 0]}]),
        ):
            path = Path(tmp) / f"{alg}.json"
            path.write_text(json.dumps({"algebra": alg, "sites": sites, "roots": roots}))
            codes.append(run(["verify", "--config", str(path)], out=io.StringIO()))
    ok = min(gaps) > 1e-4 and codes == [1, 1]
    return record(9, ok, f"smallest perturbed residual {min(gaps):.1e} (must exceed 1e-4), exit codes {codes}")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


@pytest.mark.parametrize("check", CRITERIA, ids=[f"criterion_{i}" for i in range(1, 10)])
def test_criterion(check):
    assert check()


if __name__ == "__main__":
    results = [c() for c in CRITERIA]
    sys.exit(0 if all(results) else 1)
