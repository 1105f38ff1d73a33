import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import seeds
from oracles import brute_cmi
from macregion.information import binary_entropy, cmi_axes, cond_mutual_info, entropy, eta
from macregion.model import S, XA, XB, Y, JointDistribution, ModelError, build_joint, uniform_policy


@pytest.mark.parametrize("p, expected", [
    ((1.0, 0.0), 0.0),
    ((0.5, 0.5), 1.0),
    ((0.25, 0.5, 0.25), 2 * (0.25 * 2) + 0.5 * 1),
])
def test_entropy_examples(p, expected):
    assert entropy(p) == pytest.approx(expected, abs=1e-12)


def test_entropy_rejects_bad_vectors():
    with pytest.raises(ValueError):
        entropy([1.1, -0.1])
    with pytest.raises(ValueError):
        entropy([0.5, 0.6])


def test_binary_entropy_examples():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == 1.0
    direct = -0.01 * math.log2(0.01) - 0.99 * math.log2(0.99)
    assert binary_entropy(0.01) == pytest.approx(0.080793, abs=1e-5)
    assert binary_entropy(0.01) == pytest.approx(direct, abs=1e-15)
    for bad in (-0.1, 1.5):
        with pytest.raises(ValueError):
            binary_entropy(bad)


def test_cmi_examples(adder, xorstate):
    ja = build_joint(adder, uniform_policy(adder))
    assert cond_mutual_info(ja, [XA, XB], [Y], [S]) == pytest.approx(1.5, abs=1e-12)
    jx = build_joint(xorstate, uniform_policy(xorstate))
    assert cond_mutual_info(jx, [XA], [Y], [XB, S]) == pytest.approx(0.5, abs=1e-12)
    # oracle: clean state 1 bit at weight 1/2, noisy state nothing
    assert brute_cmi(jx.tensor, (1,), (3,), (0, 2)) == pytest.approx(0.5, abs=1e-12)


def test_cmi_zero_when_output_ignores_input(blind):
    joint = build_joint(blind, uniform_policy(blind))
    assert cond_mutual_info(joint, [XA], [Y], [XB, S]) == 0.0
    assert cond_mutual_info(joint, [XA, XB], [Y], [S]) == 0.0


def test_cmi_rejects_overlap(adder):
    joint = build_joint(adder, uniform_policy(adder))
    with pytest.raises(ModelError):
        cond_mutual_info(joint, [XA], [XA, Y], [S])
    with pytest.raises(ModelError):
        cond_mutual_info(joint, [XA], [Y], [Y])


def test_eta_examples():
    assert eta(0.0, 2) == 0.0
    assert eta(0.0, 17) == 0.0
    assert eta(0.5, 2) == pytest.approx(3.0, abs=1e-12)
    assert eta(0.01, 2) == pytest.approx(0.091710, abs=1e-5)
    assert eta(0.01, 2) == pytest.approx((0.01 + 0.080793) / 0.99, abs=1e-5)
    with pytest.raises(ValueError):
        eta(1.0, 2)


def test_eta_strictly_increasing_on_half_interval():
    grid = np.linspace(0.0, 0.5, 100)
    for y_size in (2, 3, 8):
        values = [eta(e, y_size) for e in grid]
        assert all(b > a for a, b in zip(values, values[1:]))


def _random_joint(seed, shape=None):
    rng = np.random.default_rng(seed)
    if shape is None:
        shape = tuple(int(k) for k in rng.integers(1, 4, size=4))
    t = rng.dirichlet(np.ones(int(np.prod(shape)))).reshape(shape)
    t = np.where(rng.random(shape) < 0.2, 0.0, t)
    if t.sum() == 0:
        t.flat[0] = 1.0
    return JointDistribution(t / t.sum())


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_cmi_matches_brute_force_definition(seed):
    joint = _random_joint(seed)
    for left, right, given_ in [((1,), (3,), (0, 2)), ((2,), (3,), (0, 1)), ((1, 2), (3,), (0,)),
                                ((0,), (1,), ()), ((1,), (2, 3), (0,))]:
        expected = brute_cmi(joint.tensor, left, right, given_)
        got = cmi_axes(joint.tensor, left, right, given_)
        assert got == pytest.approx(expected, abs=1e-9)


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_cmi_nonnegative_and_chain_rule(seed):
    joint = _random_joint(seed)
    total = cond_mutual_info(joint, [XA, XB], [Y], [S])
    first = cond_mutual_info(joint, [XA], [Y], [S])
    second = cond_mutual_info(joint, [XB], [Y], [XA, S])
    assert min(total, first, second) >= 0.0
    assert total == pytest.approx(first + second, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(seeds, st.integers(0, 3))
def test_cmi_invariant_under_label_permutation(seed, axis):
    joint = _random_joint(seed)
    rng = np.random.default_rng(seed + 1)
    perm = rng.permutation(joint.tensor.shape[axis])
    permuted = JointDistribution(np.take(joint.tensor, perm, axis=axis))
    for args in (([XA], [Y], [XB, S]), ([XB], [Y], [XA, S]), ([XA, XB], [Y], [S])):
        assert cond_mutual_info(permuted, *args) == pytest.approx(cond_mutual_info(joint, *args), abs=1e-12)
