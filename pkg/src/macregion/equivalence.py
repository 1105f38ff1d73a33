"""Equivalent memoryless MAC whose inputs are strategy functions u_i: V_i -> X_i."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapExceededError
from .information import cond_mutual_info
from .model import S, XA, XB, Y, JointDistribution, MacModel, ModelError, TeamPolicy, build_joint

STRATEGY_CAP = 4096
UA, UB, Z = "UA", "UB", "Z"


@dataclass(frozen=True)
class StrategySpace:
    """All maps {0..n_obs-1} -> {0..n_inputs-1}, indexed lexicographically in (u(0), u(1), ...)."""

    n_obs: int
    n_inputs: int

    @property
    def size(self) -> int:
        return self.n_inputs ** self.n_obs

    def to_map(self, index: int) -> tuple[int, ...]:
        if not 0 <= index < self.size:
            raise IndexError(f"strategy index {index} outside 0..{self.size - 1}")
        digits = []
        for _ in range(self.n_obs):
            index, d = divmod(index, self.n_inputs)
            digits.append(d)
        return tuple(reversed(digits))

    def to_index(self, u) -> int:
        if len(u) != self.n_obs or any(not 0 <= x < self.n_inputs for x in u):
            raise ValueError(f"{u} is not a map from {self.n_obs} observations to {self.n_inputs} inputs")
        index = 0
        for x in u:
            index = index * self.n_inputs + int(x)
        return index

    def table(self) -> np.ndarray:
        """``table[k, v]`` = u_k(v)."""
        idx = np.arange(self.size)
        powers = self.n_inputs ** np.arange(self.n_obs - 1, -1, -1)
        return (idx[:, None] // powers[None, :]) % self.n_inputs


@dataclass(frozen=True, eq=False)
class EquivalentMac:
    space_a: StrategySpace
    space_b: StrategySpace
    n_states: int
    n_outputs: int
    kernel: np.ndarray  # Q[u_a, u_b, z] with z = s * |Y| + y

    def z_index(self, s: int, y: int) -> int:
        return s * self.n_outputs + y


@dataclass(frozen=True, eq=False)
class ProductInputDistribution:
    mu_a: np.ndarray
    mu_b: np.ndarray


def strategy_spaces(model: MacModel) -> tuple[StrategySpace, StrategySpace]:
    return (StrategySpace(len(model.obs_a_labels), model.n_inputs_a),
            StrategySpace(len(model.obs_b_labels), model.n_inputs_b))


def build_equivalent_mac(model: MacModel, cap: int = STRATEGY_CAP) -> EquivalentMac:
    """Q((s, y) | u_a, u_b) = P(s) P(y | s, u_a(q_a(s)), u_b(q_b(s)))."""
    space_a, space_b = strategy_spaces(model)
    for name, space in (("a", space_a), ("b", space_b)):
        if space.size > cap:
            raise CapExceededError(f"strategy space of encoder {name}", space.size, cap)
    xa = space_a.table()[:, model.quantizer_a]  # (Ua, S)
    xb = space_b.table()[:, model.quantizer_b]  # (Ub, S)
    s = np.arange(model.n_states)
    q = model.kernel[s[None, None, :], xa[:, None, :], xb[None, :, :], :]  # (Ua, Ub, S, Y)
    q = q * model.prior[None, None, :, None]
    q = q.reshape(space_a.size, space_b.size, model.n_states * model.n_outputs)
    q.setflags(write=False)
    return EquivalentMac(space_a, space_b, model.n_states, model.n_outputs, q)


def _lift(pi: np.ndarray, space: StrategySpace) -> np.ndarray:
    table = space.table()
    return np.prod(pi[np.arange(space.n_obs)[None, :], table], axis=1)


def lift_policy(policy: TeamPolicy, spaces: tuple[StrategySpace, StrategySpace]) -> ProductInputDistribution:
    """mu_i(u_i) = prod_v pi_i(u_i(v) | v)."""
    space_a, space_b = spaces
    for name, pi, space in (("a", policy.pi_a, space_a), ("b", policy.pi_b, space_b)):
        if pi.shape != (space.n_obs, space.n_inputs):
            raise ModelError(f"pi_{name} has shape {pi.shape}, strategy space expects "
                             f"{(space.n_obs, space.n_inputs)}")
    return ProductInputDistribution(_lift(policy.pi_a, space_a), _lift(policy.pi_b, space_b))


def equivalent_joint(mac: EquivalentMac, mu: ProductInputDistribution) -> JointDistribution:
    if mu.mu_a.shape != (mac.space_a.size,) or mu.mu_b.shape != (mac.space_b.size,):
        raise ModelError("input distribution does not match the strategy spaces")
    t = mu.mu_a[:, None, None] * mu.mu_b[None, :, None] * mac.kernel
    return JointDistribution(t, (UA, UB, Z))


def push_forward(model: MacModel, mac: EquivalentMac, joint: JointDistribution) -> JointDistribution:
    """Map (U_a, U_b, Z=(S,Y)) to (S, X_a, X_b, Y) through X_i = U_i(q_i(S))."""
    t = joint.tensor.reshape(mac.space_a.size, mac.space_b.size, mac.n_states, mac.n_outputs)
    xa = mac.space_a.table()[:, model.quantizer_a]
    xb = mac.space_b.table()[:, model.quantizer_b]
    out = np.zeros((model.n_states, model.n_inputs_a, model.n_inputs_b, model.n_outputs))
    ua, ub, s = np.meshgrid(np.arange(mac.space_a.size), np.arange(mac.space_b.size),
                            np.arange(mac.n_states), indexing="ij")
    np.add.at(out, (s, xa[ua, s], xb[ub, s]), t)
    return JointDistribution(out)


@dataclass(frozen=True)
class MiEqualityReport:
    original: tuple[float, float, float]
    equivalent: tuple[float, float, float]

    @property
    def deviations(self) -> tuple[float, float, float]:
        return tuple(abs(a - b) for a, b in zip(self.original, self.equivalent))

    @property
    def max_deviation(self) -> float:
        return max(self.deviations)


def check_mi_equalities(model: MacModel, policy: TeamPolicy, cap: int = STRATEGY_CAP) -> MiEqualityReport:
    """Compare the three rate bounds computed on the original and on the strategy MAC."""
    joint = build_joint(model, policy)
    original = (cond_mutual_info(joint, [XA], [Y], [S, XB]),
                cond_mutual_info(joint, [XB], [Y], [S, XA]),
                cond_mutual_info(joint, [XA, XB], [Y], [S]))
    mac = build_equivalent_mac(model, cap)
    ejoint = equivalent_joint(mac, lift_policy(policy, (mac.space_a, mac.space_b)))
    equivalent = (cond_mutual_info(ejoint, [UA], [Z], [UB]),
                  cond_mutual_info(ejoint, [UB], [Z], [UA]),
                  cond_mutual_info(ejoint, [UA, UB], [Z]))
    return MiEqualityReport(original, equivalent)
