"""Finite-state MAC with quantized encoder CSI, team policies and induced joints."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

logger = logging.getLogger(__name__)

S, XA, XB, Y = "S", "XA", "XB", "Y"
JOINT_AXES = (S, XA, XB, Y)

INPUT_TOL = 1e-12
DERIVED_TOL = 1e-10


class ModelError(ValueError):
    """Raised when a model, policy or joint is malformed or inconsistent."""


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


def dense_reindex(values: Sequence) -> tuple[np.ndarray, tuple]:
    """Map arbitrary hashable quantizer outputs to 0..k-1 in order of first appearance."""
    image: dict = {}
    for v in values:
        image.setdefault(v, len(image))
    return np.array([image[v] for v in values], dtype=np.int64), tuple(image)


@dataclass(frozen=True, eq=False)
class MacModel:
    """Two-user MAC with i.i.d. state, encoder observations q_i(s) and kernel P(y|s,x_a,x_b).

    ``kernel`` has shape (|S|, |X_a|, |X_b|, |Y|). Quantizers are integer arrays
    over states whose values index the dense observation alphabets.
    """

    prior: np.ndarray
    quantizer_a: np.ndarray
    quantizer_b: np.ndarray
    kernel: np.ndarray
    state_labels: tuple = ()
    input_a_labels: tuple = ()
    input_b_labels: tuple = ()
    output_labels: tuple = ()
    obs_a_labels: tuple = ()
    obs_b_labels: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "prior", _frozen(self.prior))
        object.__setattr__(self, "kernel", _frozen(self.kernel))
        object.__setattr__(self, "quantizer_a", _frozen(self.quantizer_a, np.int64))
        object.__setattr__(self, "quantizer_b", _frozen(self.quantizer_b, np.int64))
        if self.kernel.ndim != 4:
            raise ModelError(f"kernel must be 4-dimensional (s, x_a, x_b, y), got shape {self.kernel.shape}")
        n_s = self.kernel.shape[0]
        for name, arr in (("prior", self.prior), ("quantizer_a", self.quantizer_a),
                          ("quantizer_b", self.quantizer_b)):
            if arr.shape != (n_s,):
                raise ModelError(f"{name} has shape {arr.shape}, expected ({n_s},) to match the kernel")
        defaults = {
            "state_labels": n_s, "input_a_labels": self.kernel.shape[1],
            "input_b_labels": self.kernel.shape[2], "output_labels": self.kernel.shape[3],
            "obs_a_labels": self.n_obs_a, "obs_b_labels": self.n_obs_b,
        }
        for name, size in defaults.items():
            labels = getattr(self, name)
            if not labels:
                object.__setattr__(self, name, tuple(range(size)))
            elif len(labels) != size:
                raise ModelError(f"{name} has {len(labels)} entries, expected {size}")
            else:
                object.__setattr__(self, name, tuple(labels))

    @property
    def n_states(self) -> int:
        return self.kernel.shape[0]

    @property
    def n_inputs_a(self) -> int:
        return self.kernel.shape[1]

    @property
    def n_inputs_b(self) -> int:
        return self.kernel.shape[2]

    @property
    def n_outputs(self) -> int:
        return self.kernel.shape[3]

    @property
    def n_obs_a(self) -> int:
        return int(self.quantizer_a.max()) + 1 if self.quantizer_a.size else 0

    @property
    def n_obs_b(self) -> int:
        return int(self.quantizer_b.max()) + 1 if self.quantizer_b.size else 0

    def identical_to(self, other: "MacModel") -> bool:
        """Bit-level equality of every array and label tuple."""
        arrays = ("prior", "quantizer_a", "quantizer_b", "kernel")
        labels = ("state_labels", "input_a_labels", "input_b_labels", "output_labels",
                  "obs_a_labels", "obs_b_labels")
        return (all(getattr(self, a).shape == getattr(other, a).shape
                    and getattr(self, a).dtype == getattr(other, a).dtype
                    and getattr(self, a).tobytes() == getattr(other, a).tobytes() for a in arrays)
                and all(getattr(self, n) == getattr(other, n) for n in labels))


def make_model(prior, quantizer_a, quantizer_b, kernel, *, state_labels=(), input_a_labels=(),
               input_b_labels=(), output_labels=(), obs_a_labels=None, obs_b_labels=None) -> MacModel:
    """Build a model from raw quantizer outputs, re-indexing each image densely.

    ``obs_*_labels`` optionally declare the observation alphabet; declared symbols that
    no state maps to are dropped with a warning.
    """
    qa, image_a = dense_reindex(list(quantizer_a))
    qb, image_b = dense_reindex(list(quantizer_b))
    for name, declared, image in (("a", obs_a_labels, image_a), ("b", obs_b_labels, image_b)):
        if declared is None:
            continue
        unused = [lab for lab in declared if lab not in image]
        if unused:
            logger.warning("dropping unused observation labels for encoder %s: %s", name, unused)
        unknown = [lab for lab in image if lab not in declared]
        if unknown:
            raise ModelError(f"quantizer_{name} produces undeclared observations {unknown}")
    return MacModel(prior=prior, quantizer_a=qa, quantizer_b=qb, kernel=kernel,
                    state_labels=tuple(state_labels), input_a_labels=tuple(input_a_labels),
                    input_b_labels=tuple(input_b_labels), output_labels=tuple(output_labels),
                    obs_a_labels=image_a, obs_b_labels=image_b)


@dataclass(frozen=True)
class Violation:
    kind: str
    location: tuple
    magnitude: float
    message: str

    def __str__(self):
        return self.message


def validate_model(model: MacModel) -> list[Violation]:
    """Report every invariant violation of ``model``; an empty list means valid."""
    out: list[Violation] = []
    prior = model.prior
    for s in np.flatnonzero(prior < 0):
        out.append(Violation("prior_negative", (int(s),), float(prior[s]),
                             f"prior entry {s} negative: {prior[s]:.12g}"))
    total = float(prior.sum())
    if abs(total - 1.0) > INPUT_TOL:
        out.append(Violation("prior_sum", (), total, f"prior sum {total:.12g}"))
    if not np.all(np.isfinite(model.kernel)):
        out.append(Violation("kernel_nonfinite", (), float("nan"), "kernel has non-finite entries"))
    rows = model.kernel.sum(axis=-1)
    for idx in zip(*np.nonzero(np.abs(rows - 1.0) > INPUT_TOL)):
        idx = tuple(int(i) for i in idx)
        out.append(Violation("kernel_row_sum", idx, float(rows[idx]),
                             f"kernel row sum {rows[idx]:.12g} at (s, x_a, x_b) = {idx}"))
    for idx in zip(*np.nonzero(model.kernel < 0)):
        idx = tuple(int(i) for i in idx)
        out.append(Violation("kernel_negative", idx, float(model.kernel[idx]),
                             f"kernel entry negative {model.kernel[idx]:.12g} at (s, x_a, x_b, y) = {idx}"))
    for name, q, size in (("a", model.quantizer_a, len(model.obs_a_labels)),
                          ("b", model.quantizer_b, len(model.obs_b_labels))):
        for s in np.flatnonzero((q < 0) | (q >= size)):
            out.append(Violation(f"quantizer_{name}_range", (int(s),), float(q[s]),
                                 f"quantizer_{name}[{s}] = {q[s]} outside 0..{size - 1}"))
    return out


def require_valid(model: MacModel) -> MacModel:
    problems = validate_model(model)
    if problems:
        raise ModelError("; ".join(str(p) for p in problems))
    return model


@dataclass(frozen=True, eq=False)
class TeamPolicy:
    """Per-encoder conditionals: ``pi_a[v_a, x_a]`` and ``pi_b[v_b, x_b]``."""

    pi_a: np.ndarray
    pi_b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "pi_a", _frozen(self.pi_a))
        object.__setattr__(self, "pi_b", _frozen(self.pi_b))
        if self.pi_a.ndim != 2 or self.pi_b.ndim != 2:
            raise ModelError("policy conditionals must be 2-D arrays indexed (v, x)")

    def key(self) -> bytes:
        """Serialization used for deterministic ordering."""
        return self.pi_a.tobytes() + b"|" + self.pi_b.tobytes()


def validate_policy(policy: TeamPolicy, model: MacModel | None = None) -> list[str]:
    out = []
    for name, pi in (("pi_a", policy.pi_a), ("pi_b", policy.pi_b)):
        if np.any(pi < -INPUT_TOL):
            out.append(f"{name} has negative entries (min {pi.min():.3g})")
        sums = pi.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > INPUT_TOL)
        for v in bad:
            out.append(f"{name}[{v}] sums to {sums[v]:.12g}")
    if model is not None:
        want_a = (len(model.obs_a_labels), model.n_inputs_a)
        want_b = (len(model.obs_b_labels), model.n_inputs_b)
        if policy.pi_a.shape != want_a:
            out.append(f"pi_a has shape {policy.pi_a.shape}, model needs (|V_a|, |X_a|) = {want_a}")
        if policy.pi_b.shape != want_b:
            out.append(f"pi_b has shape {policy.pi_b.shape}, model needs (|V_b|, |X_b|) = {want_b}")
    return out


def uniform_policy(model: MacModel) -> TeamPolicy:
    va, vb = len(model.obs_a_labels), len(model.obs_b_labels)
    return TeamPolicy(np.full((va, model.n_inputs_a), 1.0 / model.n_inputs_a),
                      np.full((vb, model.n_inputs_b), 1.0 / model.n_inputs_b))


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """Probability tensor with one named axis per random variable."""

    tensor: np.ndarray
    names: tuple = JOINT_AXES

    def __post_init__(self):
        object.__setattr__(self, "tensor", _frozen(self.tensor))
        object.__setattr__(self, "names", tuple(self.names))
        if self.tensor.ndim != len(self.names):
            raise ModelError(f"tensor has {self.tensor.ndim} axes but {len(self.names)} names")
        if len(set(self.names)) != len(self.names):
            raise ModelError(f"duplicate axis names {self.names}")

    def axes(self, variables: Iterable[str]) -> tuple[int, ...]:
        try:
            return tuple(self.names.index(v) for v in variables)
        except ValueError:
            raise ModelError(f"unknown variable in {list(variables)}; axes are {self.names}") from None


def build_joint(model: MacModel, policy: TeamPolicy) -> JointDistribution:
    """nu(s, x_a, x_b, y) = P(s) pi_a(x_a|q_a(s)) pi_b(x_b|q_b(s)) P(y|s, x_a, x_b)."""
    problems = [p for p in validate_policy(policy, model) if "shape" in p]
    if problems:
        raise ModelError("; ".join(problems))
    pa = policy.pi_a[model.quantizer_a]  # (S, Xa)
    pb = policy.pi_b[model.quantizer_b]  # (S, Xb)
    nu = (model.prior[:, None, None, None] * pa[:, :, None, None]
          * pb[:, None, :, None] * model.kernel)
    return JointDistribution(nu)


def marginal(joint: JointDistribution, keep: Iterable[str]) -> JointDistribution:
    """Sum out every axis not in ``keep``; kept axes stay in the joint's order."""
    keep = set(keep)
    if not keep:
        raise ModelError("marginal needs at least one variable to keep")
    unknown = keep - set(joint.names)
    if unknown:
        raise ModelError(f"unknown variables {sorted(unknown)}; axes are {joint.names}")
    drop = tuple(i for i, n in enumerate(joint.names) if n not in keep)
    names = tuple(n for n in joint.names if n in keep)
    if not drop:
        return joint
    return JointDistribution(joint.tensor.sum(axis=drop), names)


def check_joint(joint: JointDistribution, prior: np.ndarray | None = None) -> list[str]:
    """Invariant check for derived joints (nonnegative, unit mass, state marginal)."""
    out = []
    t = joint.tensor
    if np.any(t < 0):
        out.append(f"negative entry {t.min():.3g}")
    if abs(t.sum() - 1.0) > DERIVED_TOL:
        out.append(f"total mass {t.sum():.15g}")
    if prior is not None and S in joint.names:
        dev = np.max(np.abs(marginal(joint, [S]).tensor - prior))
        if dev > DERIVED_TOL:
            out.append(f"state marginal deviates from prior by {dev:.3g}")
    return out


def conditional_independence_gap(joint: JointDistribution) -> float:
    """Max |P(x_a,x_b|s) - P(x_a|s)P(x_b|s)| over states with positive mass."""
    t = marginal(joint, [S, XA, XB]).tensor
    ps = t.sum(axis=(1, 2))
    gap = 0.0
    for s in np.flatnonzero(ps > 0):
        cond = t[s] / ps[s]
        prod = np.outer(cond.sum(axis=1), cond.sum(axis=0))
        gap = max(gap, float(np.max(np.abs(cond - prod))))
    return gap
