"""Search over memoryless stationary team policies to approximate the capacity region."""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import CapExceededError
from .information import CLAMP_TOL
from .model import MacModel, TeamPolicy
from .region import Pentagon, Polygon, RatePair, hull_union, pentagon_support, polygon_support

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchConfig:
    grid_resolution: int = 8
    sample_count: int = 0
    seed: int = 0
    restarts: int = 8
    ascent_tol: float = 1e-8
    max_iters: int = 100
    enumeration_cap: int = 2_000_000
    n_directions: int = 17
    fallback_samples: int = 10_000
    inner_starts: int = 1

    def __post_init__(self):
        if self.grid_resolution < 1:
            raise ValueError("grid_resolution must be >= 1")
        if self.sample_count < 0:
            raise ValueError("sample_count must be >= 0")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be >= 1")
        if not self.ascent_tol > 0:
            raise ValueError("ascent_tol must be > 0")
        if self.n_directions < 2:
            raise ValueError("need at least two weight directions")


def simplex_grid(k: int, resolution: int) -> np.ndarray:
    """All points of the (k-1)-simplex with coordinates in multiples of 1/resolution."""
    rows = []
    for bars in itertools.combinations(range(resolution + k - 1), k - 1):
        edges = (-1,) + bars + (resolution + k - 1,)
        rows.append([edges[i + 1] - edges[i] - 1 for i in range(k)])
    return np.array(rows, dtype=float) / resolution


def policy_count(model: MacModel, resolution: int) -> int:
    per_a = math.comb(resolution + model.n_inputs_a - 1, model.n_inputs_a - 1)
    per_b = math.comb(resolution + model.n_inputs_b - 1, model.n_inputs_b - 1)
    return per_a ** len(model.obs_a_labels) * per_b ** len(model.obs_b_labels)


def enumerate_policies(model: MacModel, resolution: int,
                       cap: int = SearchConfig.enumeration_cap) -> Iterator[TeamPolicy]:
    """Every policy on the simplex grid; raises before yielding if the count exceeds ``cap``."""
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    count = policy_count(model, resolution)
    if count > cap:
        raise CapExceededError("grid policy count", count, cap)
    return _grid_policies(model, resolution)


def _grid_policies(model: MacModel, resolution: int) -> Iterator[TeamPolicy]:
    grid_a = simplex_grid(model.n_inputs_a, resolution)
    grid_b = simplex_grid(model.n_inputs_b, resolution)
    rows_a = itertools.product(range(len(grid_a)), repeat=len(model.obs_a_labels))
    for ia in rows_a:
        pi_a = grid_a[list(ia)]
        for ib in itertools.product(range(len(grid_b)), repeat=len(model.obs_b_labels)):
            yield TeamPolicy(pi_a, grid_b[list(ib)])


def _random_conditionals(rng: np.random.Generator, n_obs: int, n_inputs: int) -> np.ndarray:
    # normalized exponential spacings are uniform on the simplex
    e = rng.standard_exponential((n_obs, n_inputs))
    return e / e.sum(axis=1, keepdims=True)


def random_policy(model: MacModel, rng: np.random.Generator) -> TeamPolicy:
    pi_a = _random_conditionals(rng, len(model.obs_a_labels), model.n_inputs_a)
    pi_b = _random_conditionals(rng, len(model.obs_b_labels), model.n_inputs_b)
    return TeamPolicy(pi_a, pi_b)


def sample_policies(model: MacModel, count: int, seed: int) -> list[TeamPolicy]:
    """``count`` policies drawn uniformly per conditional; a longer run extends a shorter one."""
    if count < 0:
        raise ValueError("count must be >= 0")
    rng = np.random.default_rng(seed)
    return [random_policy(model, rng) for _ in range(count)]


def _h(p: np.ndarray) -> float:
    p = p[p > 0]
    return float(-np.dot(p, np.log2(p)))


class PentagonEvaluator:
    """Pentagon bounds for raw conditionals, skipping validation (hot loop of the search).

    Uses I(.;Y|.) = H(Y|.) - H(Y|S,X), with the last term a fixed linear
    functional of the input conditionals.
    """

    def __init__(self, model: MacModel):
        self.model = model
        k = model.kernel
        with np.errstate(divide="ignore", invalid="ignore"):
            logk = np.where(k > 0, np.log2(np.where(k > 0, k, 1.0)), 0.0)
        self.row_entropy = -(k * logk).sum(axis=-1)  # H(Y|s, x_a, x_b)
        self.qa = model.quantizer_a
        self.qb = model.quantizer_b

    def bounds(self, pi_a: np.ndarray, pi_b: np.ndarray) -> tuple[float, float, float]:
        m = self.model
        ps = m.prior
        w = ps[:, None, None] * pi_a[self.qa][:, :, None] * pi_b[self.qb][:, None, :]  # P(s, x_a, x_b)
        h_y_sx = float(np.sum(w * self.row_entropy))
        nu = w[..., None] * m.kernel
        sxay = nu.sum(axis=2)
        sxby = nu.sum(axis=1)
        sy = sxay.sum(axis=1)
        h_s = _h(ps)
        i_sum = _h(sy) - h_s - h_y_sx
        i_a = _h(sxby) - _h(w.sum(axis=1)) - h_y_sx
        i_b = _h(sxay) - _h(w.sum(axis=2)) - h_y_sx
        return tuple(0.0 if abs(v) <= CLAMP_TOL else v for v in (i_a, i_b, i_sum))

    def pentagon(self, pi_a: np.ndarray, pi_b: np.ndarray) -> Pentagon:
        return Pentagon(*self.bounds(pi_a, pi_b))


def fast_pentagon(model: MacModel, pi_a: np.ndarray, pi_b: np.ndarray) -> Pentagon:
    return PentagonEvaluator(model).pentagon(np.asarray(pi_a, float), np.asarray(pi_b, float))


def _support_value(bounds, la: float, lb: float) -> float:
    i_a, i_b, i_sum = bounds
    if la >= lb:
        return la * i_a + lb * min(i_b, max(i_sum - i_a, 0.0))
    return la * min(i_a, max(i_sum - i_b, 0.0)) + lb * i_b


def project_simplex(c: np.ndarray) -> np.ndarray:
    """Euclidean projection of each row onto the probability simplex."""
    c = np.atleast_2d(c)
    u = -np.sort(-c, axis=1)
    css = np.cumsum(u, axis=1) - 1.0
    k = np.arange(1, c.shape[1] + 1)
    rho = np.count_nonzero(u - css / k > 0, axis=1)
    theta = css[np.arange(c.shape[0]), rho - 1] / rho
    return np.maximum(c - theta[:, None], 0.0)


def _hill_climb(objective, x: np.ndarray, step: float = 0.25, min_step: float = 1e-6):
    """Greedy ascent along pairwise mass transfers, projected back onto the simplex rows."""
    best = objective(x)
    n_obs, n_in = x.shape
    moves = [(v, i, j) for v in range(n_obs) for i in range(n_in) for j in range(n_in) if i != j]
    while step >= min_step:
        improved = False
        for v, i, j in moves:
            cand = x.copy()
            cand[v, i] += step
            cand[v, j] -= step
            cand[v] = project_simplex(cand[v])[0]
            val = objective(cand)
            if val > best:
                x, best, improved = cand, val, True
        if not improved:
            step /= 2
    return x, best


@dataclass
class AscentResult:
    policy: TeamPolicy
    rate: RatePair
    value: float
    history: list = field(default_factory=list)
    evaluations: int = 0


def _weight(weight) -> tuple[float, float]:
    la, lb = float(weight[0]), float(weight[1])
    if la < 0 or lb < 0 or (la == 0 and lb == 0) or not (math.isfinite(la) and math.isfinite(lb)):
        raise ValueError(f"weight must be nonnegative and not both zero, got {weight}")
    return la, lb


def maximize_weighted_rate(model: MacModel, weight, config: SearchConfig = SearchConfig(),
                           rng: np.random.Generator | None = None) -> AscentResult:
    """Coordinate ascent on the pentagon support, alternating between the two encoders.

    Each block update runs a projected hill climb from the current iterate plus
    ``config.inner_starts`` random points and keeps the best; updates that do not
    improve are rejected, so the value is monotone. Best of ``config.restarts``
    random initializations is returned.
    """
    lam = _weight(weight)
    if rng is None:
        rng = np.random.default_rng(config.seed)
    counter = [0]
    ev = PentagonEvaluator(model)

    def value(pa, pb):
        counter[0] += 1
        return _support_value(ev.bounds(pa, pb), *lam)

    best: AscentResult | None = None
    va, vb = len(model.obs_a_labels), len(model.obs_b_labels)
    for _ in range(config.restarts):
        pa = _random_conditionals(rng, va, model.n_inputs_a)
        pb = _random_conditionals(rng, vb, model.n_inputs_b)
        current = value(pa, pb)
        history = [current]
        for _ in range(config.max_iters):
            start = current
            for side in ("a", "b"):
                if side == "a":
                    f = lambda x: value(x, pb)
                    starts = [pa] + [_random_conditionals(rng, va, model.n_inputs_a)
                                     for _ in range(config.inner_starts)]
                else:
                    f = lambda x: value(pa, x)
                    starts = [pb] + [_random_conditionals(rng, vb, model.n_inputs_b)
                                     for _ in range(config.inner_starts)]
                cand, cand_val = max((_hill_climb(f, s) for s in starts), key=lambda r: r[1])
                if cand_val > current:
                    current = cand_val
                    if side == "a":
                        pa = cand
                    else:
                        pb = cand
            history.append(current)
            if current - start < config.ascent_tol:
                break
        if best is None or current > best.value:
            policy = TeamPolicy(pa, pb)
            _, corner = pentagon_support(ev.pentagon(pa, pb), lam)
            best = AscentResult(policy, corner, current, history)
    best.evaluations = counter[0]
    return best


def weight_fan(n: int = 17) -> list[tuple[float, float]]:
    """lambda = (cos theta, sin theta) for theta evenly spaced on [0, pi/2]."""
    out = []
    for k in range(n):
        theta = (math.pi / 2) * k / (n - 1)
        # exact axis directions avoid cos(pi/2) = 6e-17
        la = 0.0 if k == n - 1 else math.cos(theta)
        lb = 0.0 if k == 0 else math.sin(theta)
        out.append((la, lb))
    return out


@dataclass
class DirectionDiagnostic:
    weight: tuple[float, float]
    hull_support: float
    ascent_value: float

    @property
    def gap(self) -> float:
        return self.hull_support - self.ascent_value


@dataclass
class RegionResult:
    polygon: Polygon
    pentagons: list[tuple[TeamPolicy, Pentagon]]
    directions: list[DirectionDiagnostic]
    grid_policies: int
    sampled_policies: int
    used_grid: bool

    @property
    def n_evaluated(self) -> int:
        return len(self.pentagons)


def capacity_region(model: MacModel, config: SearchConfig = SearchConfig()) -> RegionResult:
    """Inner approximation: hull of grid/sampled policy pentagons plus ascent optima."""
    policies: dict[bytes, TeamPolicy] = {}
    grid_count = 0
    used_grid = True
    n_samples = config.sample_count
    try:
        for p in enumerate_policies(model, config.grid_resolution, config.enumeration_cap):
            policies.setdefault(p.key(), p)
            grid_count += 1
    except CapExceededError as exc:
        used_grid = False
        n_samples = max(n_samples, config.fallback_samples)
        logger.warning("%s; falling back to %d sampled policies", exc, n_samples)
    for p in sample_policies(model, n_samples, config.seed):
        policies.setdefault(p.key(), p)

    ascents = []
    rng = np.random.default_rng(config.seed)
    for lam in weight_fan(config.n_directions):
        res = maximize_weighted_rate(model, lam, config, rng=rng)
        ascents.append((lam, res.value))
        policies.setdefault(res.policy.key(), res.policy)

    ordered = [policies[k] for k in sorted(policies)]
    ev = PentagonEvaluator(model)
    pentagons = [(p, ev.pentagon(p.pi_a, p.pi_b)) for p in ordered]
    polygon = hull_union([pg for _, pg in pentagons])
    directions = [DirectionDiagnostic(lam, polygon_support(polygon, lam), val) for lam, val in ascents]
    return RegionResult(polygon, pentagons, directions, grid_count, n_samples, used_grid)
