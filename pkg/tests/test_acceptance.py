"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
lines. Every tolerance is pinned here; nothing is deferred to calibration.
"""

import math

import numpy as np
import pytest

from nonlocality import (
    ANGLE_PRESETS,
    BUILTIN_BOXES,
    QUANTUM_BOUND,
    Event,
    JammingConfiguration,
    SingletModel,
    SuperquantumModel,
    achievable_orderings,
    apply_jamming,
    binary_condition,
    box_from_model,
    builtin_box,
    check_no_signalling,
    check_unary,
    chsh,
    chsh_at_angles,
    detect_causal_loops,
    enumerate_deterministic,
    latest_jammer_time,
    maximize_chsh,
    sample_outcomes,
    validate_configuration,
)

from conftest import (
    apex_check_1d,
    boost_configuration,
    canonical_pair,
    random_boost,
    random_holding_configuration,
    random_holding_scenario,
    random_valid_configuration,
)


def _report(num, ok, desc, detail=""):
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[acceptance] criterion {num:2d}: {status} - {desc}{suffix}")
    assert ok, f"criterion {num} failed: {desc}{suffix}"


def test_criterion_01_classical_bound():
    strategies = enumerate_deterministic()
    values = [s.result.value for s in strategies]
    ok = (
        len(values) == 16
        and all(abs(v) == 2.0 for v in values)
        and max(abs(v) for v in values) == 2.0
    )
    _report(1, ok, "all 16 deterministic strategies give |CHSH| = 2 exactly")


def test_criterion_02_quantum_bound():
    opt = maximize_chsh(SingletModel())
    err = abs(opt.value - QUANTUM_BOUND)
    _report(2, err <= 1e-6, "singlet optimum reaches 2*sqrt(2)", f"err={err:.2e}")


def test_criterion_03_superquantum_maximum():
    res = chsh_at_angles(SuperquantumModel(), *ANGLE_PRESETS["eq2"])
    err = abs(res.value - 4.0)
    _report(3, err <= 1e-12, "superquantum at the eq2 preset equals 4", f"err={err:.2e}")


def test_criterion_04_no_signalling_builtins():
    worst = 0.0
    for name in BUILTIN_BOXES:
        worst = max(worst, check_no_signalling(builtin_box(name)).max_deviation)
    _report(4, worst <= 1e-12, "every built-in box is no-signalling", f"max dev={worst:.2e}")


def test_criterion_05_one_dimensional_window():
    res = latest_jammer_time(1)
    ok = abs(res.time - 1.0) <= 1e-6 and not res.attained
    _report(
        5,
        ok,
        "1-d jammer window is t = 1, not attained",
        f"time={res.time:.9f} attained={res.attained}",
    )


def test_criterion_06_dimension_theorem():
    res = latest_jammer_time(2)
    ok_latest = abs(res.time) <= 1e-6
    passing = 0
    evaluated = {2: 0, 3: 0}
    rng = np.random.default_rng(2026)
    for d in (2, 3):
        a, b = canonical_pair(d)
        for _ in range(100_000):
            spatial = rng.uniform(-2.0, 2.0, size=d)
            jt = rng.uniform(1e-3, 1.2)
            cfg = JammingConfiguration(a=a, b=b, j=Event(tuple(spatial), jt))
            if not validate_configuration(cfg).valid:
                continue
            evaluated[d] += 1
            if binary_condition(cfg).holds:
                passing += 1
    ok = ok_latest and passing == 0 and min(evaluated.values()) > 10_000
    _report(
        6,
        ok,
        "d >= 2: no jammer later than t = 0",
        f"latest={res.time:.2e}, passing={passing}, "
        f"valid candidates d2={evaluated[2]} d3={evaluated[3]}",
    )


def test_criterion_07_lorentz_invariance():
    rng = np.random.default_rng(7)
    checked = 0
    flipped = 0
    while checked < 1000:
        d = int(rng.integers(1, 4))
        if rng.random() < 0.5:
            cfg = random_holding_configuration(rng, d)
        else:
            cfg = random_valid_configuration(rng, d)
        verdict = binary_condition(cfg)
        if abs(verdict.margin) <= 1e-7:
            continue
        moved = boost_configuration(cfg, random_boost(rng, d, max_speed=0.9))
        if binary_condition(moved).holds != verdict.holds:
            flipped += 1
        checked += 1
    _report(7, flipped == 0, "binary verdict is Lorentz invariant", f"{checked} samples")


def test_criterion_08_one_dimensional_oracle_equivalence():
    rng = np.random.default_rng(8)
    target = 100_000
    batch = 3 * target
    xa = rng.uniform(-3.0, 3.0, size=batch)
    sep = rng.uniform(0.5, 4.0, size=batch)
    xb = xa + sep
    ta = rng.uniform(-3.0, 3.0, size=batch)
    tb = ta + rng.uniform(-0.9, 0.9, size=batch) * sep
    mid_x = (xa + xb) / 2.0
    mid_t = (ta + tb) / 2.0
    xj = mid_x + rng.uniform(-1.0, 1.0, size=batch) * sep
    tj = mid_t + rng.uniform(-1.0, 1.0, size=batch) * sep
    valid = (
        ((tj - ta) ** 2 - (xj - xa) ** 2 < -1e-9)
        & ((tj - tb) ** 2 - (xj - xb) ** 2 < -1e-9)
    )
    idx = np.nonzero(valid)[0][:target]
    assert len(idx) == target, "generator did not produce enough valid configurations"
    disagreements = 0
    for i in idx:
        cfg = JammingConfiguration(
            a=Event((xa[i],), ta[i]),
            b=Event((xb[i],), tb[i]),
            j=Event((xj[i],), tj[i]),
        )
        if binary_condition(cfg).holds != apex_check_1d(cfg):
            disagreements += 1
    _report(
        8,
        disagreements == 0,
        "d = 1 general algorithm matches the closed-form apex check",
        f"{target} configurations",
    )


def test_criterion_09_jamming_causality_suite():
    ok = True
    detail = []
    for name in BUILTIN_BOXES:
        box = builtin_box(name)
        jammed = apply_jamming(box)
        unary = check_unary(box, jammed)
        value = abs(chsh(jammed).value)
        if not (unary.holds and unary.max_deviation == 0.0 and value <= 2.0 + 1e-12):
            ok = False
            detail.append(name)
    _report(9, ok, "jamming preserves marginals and classicalizes every built-in box",
            ",".join(detail))


def test_criterion_10_loop_theorem():
    rng = np.random.default_rng(10)
    cycles = 0
    for _ in range(10_000):
        d = 1 if rng.random() < 0.8 else 2
        scenario = random_holding_scenario(rng, d, int(rng.integers(2, 7)))
        for cfg in scenario.configurations:
            assert binary_condition(cfg).holds
        if not detect_causal_loops(scenario).acyclic:
            cycles += 1
    _report(10, cycles == 0, "10^4 multi-jammer scenarios produce no causal loop")


def test_criterion_11_reordering_witness():
    # Full reversal (jammer first in one frame, last in another) requires the
    # jammer spatially outside the pair: for the simultaneous canonical
    # triple with j at x = 3, boosts order the three events by position.
    a = Event((-1.0,), 0.0)
    b = Event((1.0,), 0.0)
    j = Event((3.0,), 0.0)
    found = achievable_orderings([a, b, j])
    j_first = [perm for perm in found if perm[0] == 2]
    j_last = [perm for perm in found if perm[-1] == 2]
    # the midpoint jammer additionally realizes the a,j,b <-> b,j,a flip
    mid = Event((0.0,), 0.5)
    flips = achievable_orderings([a, b, mid])
    ok = bool(j_first) and bool(j_last) and (0, 2, 1) in flips and (1, 2, 0) in flips
    _report(
        11,
        ok,
        "a frame puts both measurements before the jammer and another reverses it",
        f"j-first={len(j_first)} j-last={len(j_last)}",
    )


def test_criterion_12_monte_carlo():
    box = box_from_model(SuperquantumModel(), *ANGLE_PRESETS["eq2"])
    hits = 0
    for seed in range(100):
        rep = sample_outcomes(box, 1_000_000, seed=seed)
        if abs(rep.chsh_estimate - 4.0) <= 5.0 * rep.std_error:
            hits += 1
    _report(12, hits >= 99, "10^6-sample CHSH estimate within 5 sigma of 4", f"{hits}/100")
