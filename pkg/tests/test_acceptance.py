"""The twelve acceptance criteria, each at its stated tolerance and runtime bound.

Every criterion prints one ``PASS``/``FAIL`` line.  Run directly with
``python tests/test_acceptance.py`` for the summary alone.
"""

import math
import random
import sys
import time
from fractions import Fraction as F

import numpy as np
import pytest

from afflab.catalogue import canonical_model, canonical_params, label, parameter_grid, q_catalogue
from afflab.classify import classify
from afflab.closed_forms import SAMPLES, closed_form_geodesic
from afflab.completeness import (COMPLETE, collinearity_check, completeness_probe, tau_family,
                                 verdict)
from afflab.connection import TypeAModel, ricci_rank, ricci_type_a
from afflab.exp_poly import ExpPoly, span_equal
from afflab.geodesics import BLOWUP, integrate
from afflab.maps import MAP_NAMES, catalogue_map, grid_points, verify_affine_map
from afflab.projective import flatten, linear_transform, projective_change
from afflab.quasi_einstein import qe_apply, qe_solve_type_a

GRID = parameter_grid()


def rand_q(rng, bound=3, max_den=7):
    while True:
        q = F(rng.randint(-bound * max_den, bound * max_den), rng.randint(1, max_den))
        if abs(q) <= bound:
            return q


def rand_model(rng, bound=3, max_den=7):
    return TypeAModel(*(rand_q(rng, bound, max_den) for _ in range(6)))


def c1_ricci_rank():
    bad = [str(lab) for lab in GRID if ricci_rank(canonical_model(lab)) != lab.rank]
    return not bad, f"{len(GRID)} labels, mismatches {bad}"


def c2_annihilation():
    count, worst = 0, 0.0
    for lab in GRID:
        m = canonical_model(lab)
        for f in q_catalogue(lab):
            r = qe_apply(m, f)
            count += 1
            if m.is_exact and f.is_exact:
                if not r.exact_zero:
                    return False, f"{lab}: {f} leaves a nonzero residual"
            else:
                worst = max(worst, r.max_abs)
    return worst < 1e-12, f"{count} basis elements exact zero, float worst {worst:.1e}"


def c3_solver_equivalence():
    bad = [str(lab) for lab in GRID if not span_equal(qe_solve_type_a(canonical_model(lab)), q_catalogue(lab))]
    return not bad, f"{len(GRID)} labels, mismatches {bad}"


def c4_flatten():
    rng = random.Random(4)
    worst, exact_cases = 0.0, 0
    for _ in range(1000):
        m = rand_model(rng)
        rho = ricci_type_a(flatten(m).model)
        if m.b == 0:
            exact_cases += 1
            if not rho.is_zero():
                return False, f"{m}: flat model not exactly flat"
        else:
            worst = max(worst, max(abs(float(v)) for v in rho.components()))
    return worst < 1e-9, f"1000 models, {exact_cases} exact, worst |rho| {worst:.1e}"


def c5_transformation_law():
    rng = random.Random(5)
    for _ in range(100):
        m = rand_model(rng)
        w = (rand_q(rng), rand_q(rng))
        lhs = qe_solve_type_a(projective_change(m, w))
        if not span_equal(lhs, qe_solve_type_a(m).scale(ExpPoly.exp(*w))):
            return False, f"{m}, w={w}"
    return True, "100 (model, w) pairs"


def c6_affine_maps():
    specs = [catalogue_map(n) for n in MAP_NAMES if n != "Psi"]
    specs += [catalogue_map("Psi", *p) for p in ((0, 1, 0, 0), (1, 0, 2, 1))]
    worst = max(verify_affine_map(s, grid_points(5)) for s in specs)
    return worst < 1e-9, f"{len(specs)} maps, worst residual {worst:.1e}"


def c7_integrator():
    worst = 0.0
    for case, params in SAMPLES:
        cf = closed_form_geodesic(case, *params)
        lo, hi = cf.middle()
        t0 = cf.t0 if lo <= cf.t0 <= hi else 0.5 * (lo + hi)
        for m in cf.models:
            for end in (hi, lo):
                tr = integrate(m, cf.pos(t0), cf.vel(t0), end - t0, t0=t0)
                for t in np.linspace(t0, end, 25):
                    worst = max(worst, float(np.max(np.abs(tr.position_at(t) - cf.pos(t)))))
    tr = integrate(canonical_model(label("M_1^1")), (0, 0), (0, 0.5), -2)
    t_star = tr.termination.t_star if tr.termination.kind == BLOWUP else math.nan
    ok = worst < 1e-6 and abs(abs(t_star) - 1) < 1e-3
    return ok, f"max position error {worst:.1e}, M_1^1 blow-up at t* = {t_star:.6f}"


PROBE_COMPLETE = [label("M_0^0"), label("M_4^0"), label("M_3^1", F(-1, 2)), label("M_2^2", -1, 0),
                  label("M_2^2", -1, 1), label("M_2^2", -1, 2), label("N")]
PROBE_INCOMPLETE = [label("M_1^0"), label("M_2^0"), label("M_3^0"), label("M_5^0"), label("M_1^1"),
                    label("M_2^1", F(1, 3)), label("M_3^1", F(1, 3)), label("M_4^1", 1),
                    label("M_5^1", 0), label("M_5^1", 1), label("M_1^2", 2, 2), label("M_2^2", 2, 3),
                    label("M_3^2", 1), label("M_4^2", 1), label("M_4^2", -1)]


def c8_theorem_reproduction():
    complete, wrong = set(), []
    for lab in PROBE_COMPLETE + PROBE_INCOMPLETE:
        rep = completeness_probe(lab, n=64, t_max=32)
        if rep.all_reached:
            complete.add(str(lab))
        if rep.all_reached != (verdict(lab).kind == COMPLETE):
            wrong.append(str(lab))
    want = {str(lab) for lab in PROBE_COMPLETE}
    n = len(PROBE_COMPLETE) + len(PROBE_INCOMPLETE)
    return complete == want and not wrong, f"{n} models, Complete = {sorted(complete)}, disagreements {wrong}"


def c9_collinearity():
    rng = random.Random(9)
    worst, count = 0.0, 0
    for lab in GRID:
        m, span = canonical_model(lab), q_catalogue(lab)
        for _ in range(20):
            a = rng.uniform(0, 2 * math.pi)
            speed = rng.uniform(0.2, 1.0)
            span_t = rng.choice((-1, 1)) * rng.uniform(0.5, 3.0)
            tr = integrate(m, (0, 0), (speed * math.cos(a), speed * math.sin(a)), span_t)
            worst = max(worst, collinearity_check(tr, span))
            count += 1
    return worst < 1e-6, f"{count} traces over {len(GRID)} labels, worst deviation {worst:.1e}"


def c10_tau_family():
    worst, excursion_ok = 0.0, True
    for b2, a, b in ((0, 1, 1), (1, 0, 1), (2, 1, -1)):
        fam = tau_family(b2, a, b)
        for span in (20.0, -20.0):
            _, tau = fam.integrate_tau(span)
            worst = max(worst, float(np.max(fam.residual(tau))))
            if b != 0:
                excursion_ok &= float(np.ptp(tau)) <= math.pi
    return worst < 1e-10 and excursion_ok, f"residual {worst:.1e}, excursion <= pi: {excursion_ok}"


def c11_classification():
    rng = random.Random(11)
    fails = []
    for lab in GRID:
        want = canonical_params(lab)
        for _ in range(10):
            while True:
                A = [[rand_q(rng, 3, 3) for _ in range(2)] for _ in range(2)]
                if A[0][0] * A[1][1] != A[0][1] * A[1][0]:
                    break
            m = linear_transform(canonical_model(lab), A)
            res = classify(m)
            if res.label != want or linear_transform(m, res.A) != canonical_model(res.label):
                fails.append(str(lab))
    return not fails, f"{len(GRID) * 10} scrambles, failures {sorted(set(fails))}"


def c12_ricci_evidence():
    rows, ok = [], True
    for lab in (label("M_1^1"), label("M_2^1", F(1, 3)), label("M_4^1", 1), label("M_5^1", 1)):
        rep = completeness_probe(lab, n=32)
        ok &= bool(rep.blowups()) and rep.ricci_max > 1e6
        rows.append(f"{lab}: {rep.ricci_max:.1e}")
    return ok, "max terminal |rho(u, d_i)| " + ", ".join(rows)


CRITERIA = [
    (1, "Ricci/rank conformance", c1_ricci_rank, 1),
    (2, "quasi-Einstein annihilation", c2_annihilation, 5),
    (3, "solver/catalogue equivalence", c3_solver_equivalence, 30),
    (4, "flattening soundness", c4_flatten, 10),
    (5, "Q-transformation law", c5_transformation_law, 60),
    (6, "affine-map verification", c6_affine_maps, 5),
    (7, "integrator accuracy", c7_integrator, 10),
    (8, "completeness classification", c8_theorem_reproduction, 120),
    (9, "collinearity", c9_collinearity, 60),
    (10, "tau-family machinery", c10_tau_family, 5),
    (11, "classification round-trip", c11_classification, 60),
    (12, "Ricci divergence evidence", c12_ricci_evidence, 10),
]


def evaluate(fn, budget):
    start = time.perf_counter()
    ok, detail = fn()
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < budget
    return ok, f"{detail}; {elapsed:.2f}s of {budget}s"


@pytest.mark.parametrize("num,name,fn,budget", CRITERIA, ids=[f"criterion{c[0]}" for c in CRITERIA])
def test_criterion(num, name, fn, budget, capsys):
    ok, detail = evaluate(fn, budget)
    with capsys.disabled():
        print(f"\n{'PASS' if ok else 'FAIL'} {num:2d} {name}: {detail}")
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for num, name, fn, budget in CRITERIA:
        ok, detail = evaluate(fn, budget)
        failed += not ok
        print(f"{'PASS' if ok else 'FAIL'} {num:2d} {name}: {detail}", flush=True)
    sys.exit(1 if failed else 0)
