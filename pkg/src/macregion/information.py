"""Entropy, conditional mutual information (bits) and the Fano slack eta(eps)."""
from __future__ import annotations

import math
from typing import Iterable

import numpy as np

from .model import JointDistribution, ModelError

CLAMP_TOL = 1e-10


def _plogp_sum(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def entropy(p) -> float:
    """Shannon entropy in bits, with 0 log 0 = 0."""
    p = np.asarray(p, dtype=float).ravel()
    if np.any(p < -1e-12):
        raise ValueError(f"negative probability {p.min():.3g}")
    if abs(p.sum() - 1.0) > 1e-10:
        raise ValueError(f"probabilities sum to {p.sum():.15g}, not 1")
    return max(_plogp_sum(p), 0.0)


def binary_entropy(eps: float) -> float:
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"binary entropy argument {eps} outside [0, 1]")
    if eps == 0.0 or eps == 1.0:
        return 0.0
    return -eps * math.log2(eps) - (1.0 - eps) * math.log2(1.0 - eps)


def _marginal_entropy(t: np.ndarray, keep: tuple[int, ...]) -> float:
    if not keep:
        return 0.0
    drop = tuple(i for i in range(t.ndim) if i not in keep)
    return _plogp_sum(t.sum(axis=drop) if drop else t)


def cmi_axes(t: np.ndarray, left: tuple[int, ...], right: tuple[int, ...],
             given: tuple[int, ...] = ()) -> float:
    """I(left; right | given) on a raw probability tensor, axes given by index.

    Evaluated as H(L,G) + H(R,G) - H(L,R,G) - H(G); zero-mass atoms drop out
    of every entropy term, which matches skipping null conditioning events.
    """
    lg = tuple(sorted(set(left) | set(given)))
    rg = tuple(sorted(set(right) | set(given)))
    lrg = tuple(sorted(set(left) | set(right) | set(given)))
    value = (_marginal_entropy(t, lg) + _marginal_entropy(t, rg)
             - _marginal_entropy(t, lrg) - _marginal_entropy(t, tuple(sorted(given))))
    if abs(value) <= CLAMP_TOL:
        return 0.0
    return value


def cond_mutual_info(joint: JointDistribution, left: Iterable[str], right: Iterable[str],
                     given: Iterable[str] = ()) -> float:
    """I(left; right | given) in bits for named variable subsets of ``joint``."""
    left, right, given = set(left), set(right), set(given)
    if not left or not right:
        raise ModelError("left and right variable sets must be non-empty")
    if left & right or left & given or right & given:
        raise ModelError(f"variable sets overlap: {sorted(left)}, {sorted(right)}, {sorted(given)}")
    return cmi_axes(joint.tensor, joint.axes(left), joint.axes(right), joint.axes(given))


def eta(eps: float, y_size: int) -> float:
    """Converse slack: eps/(1-eps) log2|Y| + H(eps)/(1-eps)."""
    if y_size < 1:
        raise ValueError("y_size must be a positive integer")
    if not 0.0 <= eps < 1.0:
        raise ValueError(f"eta is defined for eps in [0, 1), got {eps}")
    return (eps * math.log2(y_size) + binary_entropy(eps)) / (1.0 - eps)
