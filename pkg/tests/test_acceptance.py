"""Acceptance criteria, one test each.

Every test appends a single PASS/FAIL line to the acceptance summary that
pytest prints at the end of the run, and also echoes it to stdout.  Run
alone with ``python3 -m pytest tests/test_acceptance.py -v``.
"""

import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, SYMMETRIC_ALPHA
from oracles import aligned_diff, circle_lift_euler_class, max_gen_diff
from twistlab import bracket, construct, dynamics, ergodics, euler, hyp2, surface
from twistlab.bracket import TangentCocycle
from twistlab.ergodics import WalkConfig
from twistlab.hyp2 import LieVector
from twistlab.surface import B, D

# tolerances and budgets
PRODUCT_TOL = 1e-9
ANGLE_TOL = 1e-9
ACTION_TOL = 1e-8
VOLUME_TOL = 1e-8
CONSTRUCT_BUDGET_S = 10.0
TWIST_FLOW_TOL = 1e-9
PERIOD_TOL = 1e-9
ELLIPTIC_MARGIN = 1e-9
SEPARATION_TOL = 1e-6
GRID_MATCH_TOL = 1e-5
ZERO_COUNT_BUDGET_S = 60.0
GRADIENT_TOL = 1e-5
COCYCLE_FD_TOL = 1e-6
COBOUNDARY_TOL = 1e-9
IN_E_M_MAX = 8
KS_THRESHOLD = 0.05
FROZEN_TOL = 1e-8
WALK_BUDGET_S = 120.0


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)


def alpha_for(rng, n):
    return construct.sample_alpha(n, rng, margin=0.02)


def interior_rep(rng, n, margin=1e-6):
    av = alpha_for(rng, n)
    while True:
        x = construct.sample_polytope(av, 1, rng)[0]
        if construct.polytope_contains(av, x, margin):
            return construct.build_rep(av, x, rng.uniform(0.0, math.pi, n - 3))


def test_criterion_1_constructor():
    rng = np.random.default_rng(101)
    worst = dict(product=0.0, angle=0.0, action=0.0, volume=0.0)
    wrong_k = 0
    start = time.perf_counter()
    for trial in range(500):
        n = 3 + trial % 6
        av = alpha_for(rng, n)
        x = construct.sample_polytope(av, 1, rng)[0]
        rep = construct.build_rep(av, x, rng.uniform(0.0, math.pi, n - 3))
        worst["product"] = max(worst["product"], rep.product_defect())
        worst["angle"] = max(worst["angle"], rep.angle_defect())
        for i in range(1, n - 2):
            got = hyp2.rotation_angle(surface.holonomy(rep, B(i)))
            worst["action"] = max(worst["action"], abs(got - x[i - 1]))
        report = euler.relative_euler_class(rep)
        wrong_k += report.k != n - 1
        worst["volume"] = max(worst["volume"], abs(report.vol + av.lam))
    elapsed = time.perf_counter() - start
    ok = (
        worst["product"] <= PRODUCT_TOL
        and worst["angle"] <= ANGLE_TOL
        and worst["action"] <= ACTION_TOL
        and worst["volume"] <= VOLUME_TOL
        and wrong_k == 0
        and elapsed <= CONSTRUCT_BUDGET_S
    )
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + f", wrong k {wrong_k}, {elapsed:.2f}s"
    record(1, "constructor correctness on 500 reps, n = 3..8", ok, detail)
    assert ok, detail


def test_criterion_2_dehn_twist_equals_half_angle_flow():
    rng = np.random.default_rng(102)
    worst = 0.0
    for trial in range(200):
        rep = interior_rep(rng, 4 + trial % 5)
        for c in dynamics.generators(rep.n):
            worst = max(worst, max_gen_diff(dynamics.dehn_twist(rep, c), dynamics.dehn_twist_direct(rep, c)))
    ok = worst <= TWIST_FLOW_TOL
    record(2, "Dehn twist = flow at half angle, 200 reps, b and d", ok, f"max entry diff {worst:.1e}")
    assert ok


def test_criterion_3_pi_periodicity():
    rng = np.random.default_rng(103)
    worst = 0.0
    for trial in range(200):
        rep = interior_rep(rng, 4 + trial % 5)
        for c in dynamics.generators(rep.n):
            worst = max(worst, max_gen_diff(dynamics.twist_flow(rep, c, math.pi), rep))
    ok = worst <= PERIOD_TOL
    record(3, "flows are pi-periodic, 200 reps", ok, f"max entry diff {worst:.1e}")
    assert ok


def test_criterion_4_total_ellipticity_along_words():
    rng = np.random.default_rng(104)
    worst = 0.0
    for trial in range(100):
        rep = interior_rep(rng, 4 + trial % 4)
        letters = dynamics.generators(rep.n)
        curves = surface.chain_curves(rep.n)
        for step in range(1, 1001):
            c = letters[rng.integers(len(letters))]
            rep = dynamics.dehn_twist_power(rep, c, int(rng.choice([-3, -2, -1, 1, 2, 3])))
            if step % dynamics.RECANON_EVERY == 0:
                rep = rep.renormalized().verify()
            worst = max(worst, max(abs(surface.holonomy(rep, k).trace) for k in curves))
    ok = worst < 2.0 - ELLIPTIC_MARGIN
    record(4, "total ellipticity along 100 words of 1000 letters", ok, f"max |trace| {worst:.12f}")
    assert ok


def test_criterion_5_bracket_zero_campaign():
    rng = np.random.default_rng(105)
    start = time.perf_counter()
    records = []
    for n in (4, 5, 6):
        for _ in range(1000):
            rep = interior_rep(rng, n)
            records += [bracket.key_lemma_check(rep, i) for i in range(1, n - 2)]
    elapsed = time.perf_counter() - start
    degenerate = sum(r.degenerate is not None for r in records)
    finite = [r for r in records if r.degenerate is None]
    max_zeros = max(r.zeros for r in records)
    sep = max(r.separation_error for r in finite)
    match = max(r.grid_match_error for r in finite)
    count_mismatch = sum(r.grid_zeros != r.zeros for r in finite)
    ok = (
        degenerate == 0
        and max_zeros <= 2
        and sep <= SEPARATION_TOL
        and match <= GRID_MATCH_TOL
        and count_mismatch == 0
        and elapsed <= ZERO_COUNT_BUDGET_S
    )
    detail = (
        f"{len(records)} orbits, max zeros {max_zeros}, separation err {sep:.1e}, grid match {match:.1e}, "
        f"count mismatches {count_mismatch}, degenerate {degenerate}, {elapsed:.1f}s"
    )
    record(5, "bracket zero count, 1000 reps for each n in {4,5,6}", ok, detail)
    assert ok, detail


def _fd_angle(rep, c, v, h=1e-6):
    def angle(s):
        moved = rep.with_gens([hyp2.expm(x * s) @ g for x, g in zip(v.values, rep.gens)])
        return hyp2.rotation_angle(surface.holonomy(moved, c))

    return (angle(h) - angle(-h)) / (2 * h)


def test_criterion_6_gradient_and_cocycle_consistency():
    rng = np.random.default_rng(106)
    # zero test against finite differences, on a mix of generic and annihilating cocycles
    worst_grad = 0.0
    zero_set_mismatch = 0
    for trial in range(500):
        rep = interior_rep(rng, 4 + trial % 4)
        curves = surface.chain_curves(rep.n)
        c = curves[rng.integers(len(curves))]
        kind = trial % 4
        if kind == 0:
            v = TangentCocycle(tuple(LieVector(*rng.normal(size=3)) for _ in range(rep.n)))
        elif kind == 1:
            v = bracket.coboundary(rep, LieVector(*rng.normal(size=3)))
        elif kind == 2 and not isinstance(c, surface.Peripheral):
            v = bracket.twist_cocycle(rep, c)
        else:
            i = 1 + int(rng.integers(rep.n - 3))
            t0 = bracket.find_bracket_zeros(rep, i).zeros[0]
            rep = dynamics.twist_flow(rep, B(i), t0)
            v, c = bracket.twist_cocycle(rep, B(i)), D(i)
        scale = max(1.0, max(x.norm() for x in v.values)) * max(
            1.0, max(abs(e) for e in surface.holonomy(rep, c).entries())
        )
        zero = bracket.differential_zero_test(rep, c, v) / scale
        fd = _fd_angle(rep, c, v) * math.sin(0.5 * bracket.angle_fn(rep, c)) / scale
        worst_grad = max(worst_grad, abs(abs(zero) - abs(fd)))
        zero_set_mismatch += (abs(zero) <= GRADIENT_TOL) != (abs(fd) <= GRADIENT_TOL)

    # Hamiltonian cocycle of b_i against flow finite differences
    worst_flow = 0.0
    h = 1e-5
    for trial in range(100):
        rep = interior_rep(rng, 4 + trial % 4)
        i = 1 + int(rng.integers(rep.n - 3))
        norm = surface.normalize_at(rep, B(i))
        v = bracket.hamiltonian_cocycle_b(norm, i)
        plus, minus = dynamics.twist_flow(norm, B(i), h), dynamics.twist_flow(norm, B(i), -h)
        for j, g in enumerate(norm.gens):
            numeric = (aligned_diff(plus.gens[j], g) - aligned_diff(minus.gens[j], g)) / (2 * h)
            numeric = numeric @ np.linalg.inv(np.array(g.rows()))
            worst_flow = max(worst_flow, np.abs(numeric - np.array(v.values[j].rows())).max())

    # coboundaries annihilate every angle differential
    worst_cob = 0.0
    for trial in range(100):
        rep = interior_rep(rng, 4 + trial % 4)
        cob = bracket.coboundary(rep, LieVector(*rng.normal(size=3)))
        for c in surface.chain_curves(rep.n):
            worst_cob = max(worst_cob, abs(bracket.differential_zero_test(rep, c, cob)))

    ok = (
        worst_grad <= GRADIENT_TOL
        and zero_set_mismatch == 0
        and worst_flow <= COCYCLE_FD_TOL
        and worst_cob <= COBOUNDARY_TOL
    )
    detail = (
        f"zero test vs FD {worst_grad:.1e}, zero-set mismatches {zero_set_mismatch}, "
        f"cocycle vs flow {worst_flow:.1e}, coboundary {worst_cob:.1e}"
    )
    record(6, "gradient and cocycle consistency, 500 triples", ok, detail)
    assert ok, detail


def test_criterion_7_euler_oracle_equivalence():
    rng = np.random.default_rng(107)
    mismatches = 0
    worst_frac = 0.0
    for trial in range(200):
        rep = interior_rep(rng, 3 + trial % 6)
        lifted = circle_lift_euler_class(rep.gens)
        worst_frac = max(worst_frac, abs(lifted - round(lifted)))
        mismatches += round(lifted) != euler.relative_euler_class(rep).k
    for _ in range(50):
        beta = rng.dirichlet(np.ones(4))[:3] * 2 * math.pi
        triple = construct.small_pants_rep(*beta)
        lifted = circle_lift_euler_class(triple)
        worst_frac = max(worst_frac, abs(lifted - round(lifted)))
        mismatches += not (round(lifted) == euler.pants_euler_class(*triple) == 1)
    ok = mismatches == 0 and worst_frac < 1e-6
    record(7, "Euler class equals circle-lift oracle, 200 reps and 50 k=1 triples", ok,
           f"mismatches {mismatches}, max non-integrality {worst_frac:.1e}")
    assert ok


def test_criterion_8_symmetric_fixed_point():
    rep = bracket.symmetric_fixed_points(SYMMETRIC_ALPHA[0])[0]
    # the representative is literally fixed by the d_1-flow
    fixed = max_gen_diff(dynamics.twist_flow(rep, D(1), 0.7), rep)
    in_e = bracket.in_E(rep, 1, m_max=IN_E_M_MAX)
    zeros = bracket.find_bracket_zeros(rep, 1).zeros
    gap = abs(abs(zeros[1] - zeros[0]) - math.pi / 2) if len(zeros) == 2 else math.inf
    ok = not in_e and len(zeros) == 2 and gap <= SEPARATION_TOL and fixed <= 1e-9
    record(8, "symmetric n=4 fixed point lies outside E", ok,
           f"in_E {in_e}, zeros {len(zeros)}, separation err {gap:.1e}, d-flow displacement {fixed:.1e}")
    assert ok


def test_criterion_9_equidistribution_smoke_test():
    start = time.perf_counter()
    cfg = WalkConfig(SYMMETRIC_ALPHA, 100_000, 42, thinning=10)
    x = np.array([s.x[0] for s in ergodics.random_walk(cfg)])
    ks = ergodics.ks_statistic(x, ergodics.uniform_cdf(math.pi / 2, 3 * math.pi / 2))
    control = WalkConfig(SYMMETRIC_ALPHA, 100_000, 42, (B(1),), thinning=10)
    frozen = np.array([s.x[0] for s in ergodics.random_walk(control)])
    spread = float(np.ptp(frozen))
    elapsed = time.perf_counter() - start
    ok = ks < KS_THRESHOLD and spread <= FROZEN_TOL and elapsed <= WALK_BUDGET_S
    record(9, "walk equidistribution, n=4, 1e5 steps, thinning 10", ok,
           f"KS {ks:.4f} on {len(x)} samples, b-only spread {spread:.1e}, {elapsed:.1f}s")
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
