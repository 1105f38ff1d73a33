"""Acceptance suite: one PASS/FAIL line per criterion.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""
import itertools
import math
import subprocess
import sys
import time
from fractions import Fraction

import numpy as np

from macregion.equivalence import check_mi_equalities
from macregion.errors import CapExceededError
from macregion.information import cond_mutual_info, entropy, eta
from macregion.io import load_fixture
from macregion.model import S, XA, XB, Y, JointDistribution, uniform_policy
from macregion.oracle import (ENCODER_PAIR_CAP, brute_force_best_code, check_factorization, encoder_count,
                              converse_sweep, random_encoder_pair, state_weights)
from macregion.policy_search import SearchConfig, capacity_region, sample_policies
from macregion.region import contains, inflate, pentagon_of_policy, polygon_support

RESULTS: list[tuple[str, bool, str]] = []
FIXTURES = ("adder", "xorstate")


def _record(label: str, ok: bool, detail: str, elapsed: float, budget: float | None):
    within = budget is None or elapsed < budget
    limit = f" < {budget:g}s" if budget is not None else ""
    ok = ok and within
    RESULTS.append((label, ok, f"{detail}; {elapsed:.1f}s{limit}"))
    return ok


# region computations are shared by criteria 4 and 5
_REGIONS: dict = {}


def _region(name):
    if name not in _REGIONS:
        start = time.perf_counter()
        result = capacity_region(load_fixture(name), SearchConfig(grid_resolution=8, n_directions=17))
        _REGIONS[name] = (result, time.perf_counter() - start)
    return _REGIONS[name]


def criterion_1():
    start = time.perf_counter()
    worst = 0.0
    for name in FIXTURES:
        model = load_fixture(name)
        for policy in sample_policies(model, 200, seed=1):
            worst = max(worst, check_mi_equalities(model, policy).max_deviation)
    ok = worst <= 1e-9
    return _record("1 strategy-channel identities", ok, f"400 policies, max deviation {worst:.2e} <= 1e-9",
                   time.perf_counter() - start, 30)


def criterion_2():
    start = time.perf_counter()
    configs = list(itertools.product((1, 2, 3), (1, 2, 4), (1, 2, 4)))
    worst, control = 0.0, 0.0
    for name in FIXTURES:
        model = load_fixture(name)
        rng = np.random.default_rng(2)
        for k in range(200):
            n, wa, wb = configs[k % len(configs)]
            worst = max(worst, check_factorization(random_encoder_pair(rng, model, n, (wa, wb)), model))
    xor = load_fixture("xorstate")
    rng = np.random.default_rng(3)
    for _ in range(20):
        pair = random_encoder_pair(rng, xor, 2, (2, 2))
        control = max(control, check_factorization(pair, xor, swap_quantizers=True))
    ok = worst <= 1e-12 and control > 1e-2
    return _record("2 per-history factorization", ok,
                   f"400 pairs, max dev {worst:.2e} <= 1e-12, negative control {control:.3f} > 1e-2",
                   time.perf_counter() - start, 120)


def criterion_3():
    start = time.perf_counter()
    rep = converse_sweep(load_fixture("adder"), 1, (2, 2), decoders="all", cap=ENCODER_PAIR_CAP)
    ok = not rep.violations and rep.min_slack >= -1e-9
    return _record("3 converse bound sweep", ok,
                   f"{rep.codes} codes, {rep.checked} with eps < 1/2, min slack {rep.min_slack:.4f}, "
                   f"{len(rep.violations)} violations", time.perf_counter() - start, 120)


def criterion_4():
    adder, t_a = _region("adder")
    xor, t_x = _region("xorstate")
    poly = adder.polygon
    s11, s10, s01 = (polygon_support(poly, w) for w in ((1, 1), (1, 0), (0, 1)))
    model = load_fixture("xorstate")
    corners = pentagon_of_policy(model, uniform_policy(model)).corners()
    inside = all(contains(xor.polygon, c, 1e-9) for c in corners)
    ok = abs(s11 - 1.5) <= 1e-2 and abs(s10 - 1.0) <= 1e-2 and abs(s01 - 1.0) <= 1e-2 and inside
    detail = (f"ADDER support (1,1)={s11:.6f} (1,0)={s10:.6f} (0,1)={s01:.6f}; "
              f"XORSTATE contains (0.5,0.5,0.5): {inside}")
    # the budget applies to each region computation
    return _record("4 region anchors", ok and max(t_a, t_x) < 60, detail, max(t_a, t_x), 60)


def criterion_5():
    start = time.perf_counter()
    checked, skipped = 0, 0
    outside = []
    for name in FIXTURES:
        model = load_fixture(name)
        poly = _region(name)[0].polygon
        va, vb = len(model.obs_a_labels), len(model.obs_b_labels)
        for n, wa, wb in itertools.product((1, 2), range(1, 5), range(1, 5)):
            count = (encoder_count(wa, va, model.n_inputs_a, n) * encoder_count(wb, vb, model.n_inputs_b, n))
            if count > ENCODER_PAIR_CAP:
                skipped += 1
                continue
            try:
                best = brute_force_best_code(model, n, (wa, wb))
            except CapExceededError:
                skipped += 1
                continue
            if best.eps > 0.01:
                continue
            checked += 1
            rates = best.code.rates
            delta = eta(best.eps, model.n_outputs) + 1e-2
            if not contains(inflate(poly, delta), rates, 1e-9):
                outside.append((name, n, wa, wb, rates))
    ok = checked > 0 and not outside
    return _record("5 achievable codes inside region", ok,
                   f"{checked} codes with eps <= 0.01 checked, {len(outside)} outside, {skipped} sizes over cap",
                   time.perf_counter() - start, 300)


def criterion_6():
    start = time.perf_counter()
    rng = np.random.default_rng(6)
    worst_chain, min_val = 0.0, math.inf
    for _ in range(500):
        shape = tuple(int(k) for k in rng.integers(1, 4, size=4))
        t = rng.dirichlet(np.ones(int(np.prod(shape)))).reshape(shape)
        joint = JointDistribution(t)
        total = cond_mutual_info(joint, [XA, XB], [Y], [S])
        first = cond_mutual_info(joint, [XA], [Y], [S])
        second = cond_mutual_info(joint, [XB], [Y], [XA, S])
        h = entropy(t.ravel())
        min_val = min(min_val, total, first, second, h)
        worst_chain = max(worst_chain, abs(total - first - second))
    dyadic = [Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 8)]
    exact = all(sum(state_weights(n, dyadic).values()) == 1 for n in range(1, 7))
    grid = np.linspace(0.0, 0.5, 201)
    etas = [eta(e, 3) for e in grid]
    monotone = eta(0.0, 3) == 0.0 and all(b > a for a, b in zip(etas, etas[1:]))
    ok = min_val >= 0.0 and worst_chain <= 1e-9 and exact and monotone
    return _record("6 numerical bedrock", ok,
                   f"chain gap {worst_chain:.2e}, min value {min_val:.2e}, exact mass {exact}, "
                   f"eta(0)=0 and increasing {monotone}", time.perf_counter() - start, 10)


def criterion_7(tmp_dir):
    start = time.perf_counter()
    spec = tmp_dir / "xorstate.json"
    subprocess.run([sys.executable, "-m", "macregion", "fixture", "xorstate", "--out", str(spec)], check=True)
    outs = []
    for k in range(2):
        out = tmp_dir / f"region{k}.txt"
        subprocess.run([sys.executable, "-m", "macregion", "region", "--spec", str(spec), "--seed", "12345",
                        "--out", str(out)], check=True, capture_output=True)
        outs.append(out.read_bytes())
    ok = outs[0] == outs[1] and len(outs[0]) > 0
    return _record("7 region determinism", ok, f"two runs, {len(outs[0])} bytes, identical {outs[0] == outs[1]}",
                   time.perf_counter() - start, None)


def test_criterion_1_strategy_identities():
    assert criterion_1()


def test_criterion_2_factorization():
    assert criterion_2()


def test_criterion_3_converse_sweep():
    assert criterion_3()


def test_criterion_4_region_anchors():
    assert criterion_4()


def test_criterion_5_codes_inside_region():
    assert criterion_5()


def test_criterion_6_numerical_bedrock():
    assert criterion_6()


def test_criterion_7_determinism(tmp_path):
    assert criterion_7(tmp_path)


def report_lines():
    return [f"{'PASS' if ok else 'FAIL'}  criterion {label}: {detail}" for label, ok, detail in RESULTS]


if __name__ == "__main__":
    import pathlib
    import tempfile

    with tempfile.TemporaryDirectory() as d:
        for fn in (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6):
            fn()
            print(report_lines()[-1], flush=True)
        criterion_7(pathlib.Path(d))
        print(report_lines()[-1])
    sys.exit(0 if all(ok for _, ok, _ in RESULTS) else 1)
