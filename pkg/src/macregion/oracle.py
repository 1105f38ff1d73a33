"""Exact converse machinery for tiny block codes.

Everything here is computed by exhaustive enumeration over messages, state
sequences and output sequences; :func:`simulate_block` is the only sampled
quantity and exists as a cross-check.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .errors import CapExceededError
from .information import cond_mutual_info, eta
from .model import S, XA, XB, Y, JointDistribution, MacModel, ModelError, TeamPolicy, build_joint

ENCODER_PAIR_CAP = 10 ** 7
ATOM_CAP = 10 ** 6
DECODER_CAP = 10 ** 6


# --------------------------------------------------------------------------- codes

@dataclass(frozen=True, eq=False)
class BlockEncoder:
    """Causal encoder: ``maps[t-1][w, v_1, ..., v_t]`` is the input sent at time t."""

    n_messages: int
    n_obs: int
    n_inputs: int
    maps: tuple

    def __post_init__(self):
        if self.n_messages < 1 or not self.maps:
            raise ModelError("encoder needs at least one message and block length >= 1")
        frozen = []
        for t, table in enumerate(self.maps, start=1):
            table = np.array(table, dtype=np.int64)
            want = (self.n_messages,) + (self.n_obs,) * t
            if table.shape != want:
                raise ModelError(f"map at t={t} has shape {table.shape}, expected {want}")
            if table.size and (table.min() < 0 or table.max() >= self.n_inputs):
                raise ModelError(f"map at t={t} outputs symbols outside 0..{self.n_inputs - 1}")
            table.setflags(write=False)
            frozen.append(table)
        object.__setattr__(self, "maps", tuple(frozen))

    @property
    def n(self) -> int:
        return len(self.maps)

    def output(self, w: int, observations: Sequence[int]) -> int:
        return int(self.maps[len(observations) - 1][(w, *observations)])


@dataclass(frozen=True, eq=False)
class BlockCode:
    """Encoder pair plus decoder table ``decoder[s_hist, y_hist] = w_a * |W_b| + w_b``.

    State and output histories are flattened lexicographically (first symbol most significant).
    """

    encoder_a: BlockEncoder
    encoder_b: BlockEncoder
    decoder: np.ndarray

    def __post_init__(self):
        if self.encoder_a.n != self.encoder_b.n:
            raise ModelError("encoders have different block lengths")
        dec = np.array(self.decoder, dtype=np.int64)
        if dec.ndim != 2 or dec.size == 0:
            raise ModelError("decoder must be a 2-D table indexed (state history, output history)")
        if dec.min() < 0 or dec.max() >= self.n_messages:
            raise ModelError("decoder outputs message pairs out of range")
        dec.setflags(write=False)
        object.__setattr__(self, "decoder", dec)

    @property
    def n(self) -> int:
        return self.encoder_a.n

    @property
    def w_sizes(self) -> tuple[int, int]:
        return self.encoder_a.n_messages, self.encoder_b.n_messages

    @property
    def n_messages(self) -> int:
        return self.encoder_a.n_messages * self.encoder_b.n_messages

    @property
    def rates(self) -> tuple[float, float]:
        return math.log2(self.encoder_a.n_messages) / self.n, math.log2(self.encoder_b.n_messages) / self.n

    def decode(self, states: Sequence[int], outputs: Sequence[int], n_states: int, n_outputs: int):
        w = int(self.decoder[_flat(states, n_states), _flat(outputs, n_outputs)])
        return divmod(w, self.encoder_b.n_messages)


def _flat(seq: Sequence[int], base: int) -> int:
    idx = 0
    for s in seq:
        idx = idx * base + int(s)
    return idx


def _histories(base: int, n: int) -> np.ndarray:
    """(base**n, n) array of all sequences in lexicographic order."""
    idx = np.arange(base ** n)
    powers = base ** np.arange(n - 1, -1, -1)
    return (idx[:, None] // powers[None, :]) % base


def encoder_size(n_messages: int, n_obs: int, n: int) -> int:
    """Number of free symbols (table entries) of an encoder."""
    return n_messages * sum(n_obs ** t for t in range(1, n + 1))


def encoder_count(n_messages: int, n_obs: int, n_inputs: int, n: int) -> int:
    return n_inputs ** encoder_size(n_messages, n_obs, n)


def encoder_from_digits(digits: Sequence[int], n_messages: int, n_obs: int, n_inputs: int,
                        n: int) -> BlockEncoder:
    digits = np.asarray(digits, dtype=np.int64)
    maps, offset = [], 0
    for t in range(1, n + 1):
        size = n_messages * n_obs ** t
        maps.append(digits[offset:offset + size].reshape((n_messages,) + (n_obs,) * t))
        offset += size
    return BlockEncoder(n_messages, n_obs, n_inputs, tuple(maps))


def _index_digits(indices: np.ndarray, n_digits: int, base: int) -> np.ndarray:
    """Digit 0 is least significant."""
    indices = np.asarray(indices, dtype=np.int64)
    powers = np.array([base ** k for k in range(n_digits)], dtype=np.int64)
    return (indices[:, None] // powers[None, :]) % base


def encoder_from_index(index: int, n_messages: int, n_obs: int, n_inputs: int, n: int) -> BlockEncoder:
    size = encoder_size(n_messages, n_obs, n)
    digits = [(index // n_inputs ** k) % n_inputs for k in range(size)]
    return encoder_from_digits(digits, n_messages, n_obs, n_inputs, n)


def random_encoder(rng: np.random.Generator, n_messages: int, n_obs: int, n_inputs: int,
                   n: int) -> BlockEncoder:
    digits = rng.integers(0, n_inputs, size=encoder_size(n_messages, n_obs, n))
    return encoder_from_digits(digits, n_messages, n_obs, n_inputs, n)


def random_encoder_pair(rng: np.random.Generator, model: MacModel, n: int,
                        w_sizes: tuple[int, int]) -> tuple[BlockEncoder, BlockEncoder]:
    return (random_encoder(rng, w_sizes[0], len(model.obs_a_labels), model.n_inputs_a, n),
            random_encoder(rng, w_sizes[1], len(model.obs_b_labels), model.n_inputs_b, n))


def _encoders_of(code) -> tuple[BlockEncoder, BlockEncoder]:
    if isinstance(code, BlockCode):
        return code.encoder_a, code.encoder_b
    enc_a, enc_b = code
    if enc_a.n != enc_b.n:
        raise ModelError("encoders have different block lengths")
    return enc_a, enc_b


def _check_encoders(model: MacModel, enc_a: BlockEncoder, enc_b: BlockEncoder):
    if (enc_a.n_obs, enc_a.n_inputs) != (len(model.obs_a_labels), model.n_inputs_a):
        raise ModelError("encoder a does not match the model's observation/input alphabets")
    if (enc_b.n_obs, enc_b.n_inputs) != (len(model.obs_b_labels), model.n_inputs_b):
        raise ModelError("encoder b does not match the model's observation/input alphabets")


# --------------------------------------------------------------------------- history weights

def state_weights(n: int, prior) -> dict[tuple, float]:
    """alpha_sigma = P(S_[t-1] = sigma) / n for every history of length 0..n-1.

    Works in exact arithmetic when ``prior`` holds :class:`fractions.Fraction` values.
    """
    if n < 1:
        raise ValueError("block length must be >= 1")
    prior = list(prior)
    exact = all(isinstance(p, Fraction) for p in prior)
    scale = Fraction(1, n) if exact else 1.0 / n
    out = {}
    for length in range(n):
        for sigma in itertools.product(range(len(prior)), repeat=length):
            w = scale
            for s in sigma:
                w = w * prior[s]
            out[sigma] = w
    return out


# --------------------------------------------------------------------------- per-history laws

def induced_policy(enc: BlockEncoder, t: int, sigma: Sequence[int], quantizer: np.ndarray) -> np.ndarray:
    """pi_sigma(x | v): fraction of messages w with phi_t(w, q(sigma), v) = x."""
    if not 1 <= t <= enc.n:
        raise ValueError(f"time index {t} outside 1..{enc.n}")
    if len(sigma) != t - 1:
        raise ValueError(f"history must have length {t - 1}, got {len(sigma)}")
    past = tuple(int(quantizer[s]) for s in sigma)
    out = np.zeros((enc.n_obs, enc.n_inputs))
    table = enc.maps[t - 1]
    for v in range(enc.n_obs):
        for w in range(enc.n_messages):
            out[v, table[(w, *past, v)]] += 1
    return out / enc.n_messages


def _prob_of_history(prior: np.ndarray, sigma: Sequence[int]) -> float:
    p = 1.0
    for s in sigma:
        p *= prior[s]
    return p


def empirical_joint_at(code, model: MacModel, t: int, sigma: Sequence[int],
                       cap: int = ATOM_CAP) -> JointDistribution:
    """nu_sigma(s, x, y) = P(S_t=s, X_t=x, Y_t=y | S_[t-1]=sigma), by brute-force enumeration.

    Sums over both messages and all past outputs; past outputs are enumerated
    explicitly instead of being assumed to marginalize out.
    """
    enc_a, enc_b = _encoders_of(code)
    _check_encoders(model, enc_a, enc_b)
    if not 1 <= t <= enc_a.n:
        raise ValueError(f"time index {t} outside 1..{enc_a.n}")
    if len(sigma) != t - 1:
        raise ValueError(f"history must have length {t - 1}, got {len(sigma)}")
    atoms = enc_a.n_messages * enc_b.n_messages * model.n_states * model.n_outputs
    if atoms > cap:
        raise CapExceededError("per-history joint enumeration", atoms, cap)
    prior, kernel, qa, qb = model.prior, model.kernel, model.quantizer_a, model.quantizer_b
    p_sigma = _prob_of_history(prior, sigma)
    if p_sigma <= 0:
        raise ValueError(f"history {tuple(sigma)} has zero probability")
    va = tuple(int(qa[s]) for s in sigma)
    vb = tuple(int(qb[s]) for s in sigma)
    w_mass = 1.0 / (enc_a.n_messages * enc_b.n_messages)
    nu = np.zeros(kernel.shape)
    past_outputs = list(itertools.product(range(model.n_outputs), repeat=t - 1))
    for wa in range(enc_a.n_messages):
        for wb in range(enc_b.n_messages):
            past_x = [(enc_a.output(wa, va[:j + 1]), enc_b.output(wb, vb[:j + 1])) for j in range(t - 1)]
            path = 0.0
            for ys in past_outputs:
                p = 1.0
                for j, y in enumerate(ys):
                    p *= kernel[sigma[j], past_x[j][0], past_x[j][1], y]
                path += p
            for s in range(model.n_states):
                xa = enc_a.output(wa, va + (int(qa[s]),))
                xb = enc_b.output(wb, vb + (int(qb[s]),))
                nu[s, xa, xb, :] += w_mass * p_sigma * prior[s] * path * kernel[s, xa, xb, :]
    return JointDistribution(nu / p_sigma)


def _factorized(model: MacModel, pi_a: np.ndarray, pi_b: np.ndarray, qa: np.ndarray,
                qb: np.ndarray) -> np.ndarray:
    return (model.prior[:, None, None, None] * pi_a[qa][:, :, None, None]
            * pi_b[qb][:, None, :, None] * model.kernel)


def check_factorization(code, model: MacModel, swap_quantizers: bool = False) -> float:
    """Max |nu_sigma - P(s) pi_sigma^a pi_sigma^b P(y|s,x)| over t, positive-probability sigma and atoms.

    ``swap_quantizers`` corrupts the product side only: encoder a's induced law is
    built from q_b and encoder b's from q_a (reduced modulo the observation
    alphabet sizes). It is a negative control and should report a large deviation
    whenever q_a and q_b differ in a way the encoders react to.
    """
    enc_a, enc_b = _encoders_of(code)
    _check_encoders(model, enc_a, enc_b)
    qa, qb = model.quantizer_a, model.quantizer_b
    if swap_quantizers:
        qa, qb = model.quantizer_b % enc_a.n_obs, model.quantizer_a % enc_b.n_obs
    worst = 0.0
    for t in range(1, enc_a.n + 1):
        for sigma in itertools.product(range(model.n_states), repeat=t - 1):
            if _prob_of_history(model.prior, sigma) <= 0:
                continue
            nu = empirical_joint_at((enc_a, enc_b), model, t, sigma).tensor
            pa = induced_policy(enc_a, t, sigma, qa)
            pb = induced_policy(enc_b, t, sigma, qb)
            if swap_quantizers:
                product = _factorized(model, pa, pb, qa, qb)
            else:
                product = build_joint(model, TeamPolicy(pa, pb)).tensor
            worst = max(worst, float(np.max(np.abs(nu - product))))
    return worst


# --------------------------------------------------------------------------- error probability

def _codewords(enc_digits: np.ndarray, n_messages: int, n_obs: int, n: int, quantizer: np.ndarray,
               n_states: int) -> np.ndarray:
    """(E, W, |S|^n, n) table of the input sent for each message and state sequence."""
    shist = _histories(n_states, n)
    obs = quantizer[shist]  # (Sn, n)
    pos = np.empty((n_messages, len(shist), n), dtype=np.int64)
    offset = 0
    for t in range(1, n + 1):
        vidx = np.zeros(len(shist), dtype=np.int64)
        for j in range(t):
            vidx = vidx * n_obs + obs[:, j]
        pos[:, :, t - 1] = offset + np.arange(n_messages)[:, None] * n_obs ** t + vidx[None, :]
        offset += n_messages * n_obs ** t
    return enc_digits[:, pos]


def _likelihoods(model: MacModel, ca: np.ndarray, cb: np.ndarray, n: int) -> np.ndarray:
    """P(y^n | s^n, w_a, w_b) with shape (E_a, E_b, W_a, W_b, |S|^n, |Y|^n).

    ``ca``: (E_a, W_a, Sn, n) codewords of a batch of encoders a; ``cb``: (E_b, W_b, Sn, n).
    """
    shist = _histories(model.n_states, n)
    lik = None
    for t in range(n):
        kt = model.kernel[shist[None, None, None, None, :, t], ca[:, None, :, None, :, t],
                          cb[None, :, None, :, :, t], :]
        if lik is None:
            lik = kt
        else:
            lik = (lik[..., :, None] * kt[..., None, :]).reshape(kt.shape[:-1] + (-1,))
    return lik


def _history_prior(model: MacModel, n: int) -> np.ndarray:
    return np.prod(model.prior[_histories(model.n_states, n)], axis=1)


def _encoder_digits(enc: BlockEncoder) -> np.ndarray:
    return np.concatenate([m.ravel() for m in enc.maps])[None, :]


def _pair_likelihood(code, model: MacModel) -> np.ndarray:
    enc_a, enc_b = _encoders_of(code)
    _check_encoders(model, enc_a, enc_b)
    n = enc_a.n
    ca = _codewords(_encoder_digits(enc_a), enc_a.n_messages, enc_a.n_obs, n, model.quantizer_a,
                    model.n_states)[0]
    cb = _codewords(_encoder_digits(enc_b), enc_b.n_messages, enc_b.n_obs, n, model.quantizer_b,
                    model.n_states)
    return _likelihoods(model, ca[None], cb, n)[0, 0]  # (Wa, Wb, Sn, Yn)


def map_decoder(encoders, model: MacModel) -> np.ndarray:
    """MAP (= ML under uniform messages) decoder; ties go to the smallest joint message index."""
    lik = _pair_likelihood(encoders, model)
    wa, wb, sn, yn = lik.shape
    return np.argmax(lik.reshape(wa * wb, sn, yn), axis=0)


def error_probability(code: BlockCode, model: MacModel) -> float:
    """Exact P(decoded pair != sent pair) by enumeration over (w, s^n, y^n)."""
    lik = _pair_likelihood(code, model)
    wa, wb, sn, yn = lik.shape
    if code.decoder.shape != (sn, yn):
        raise ModelError(f"decoder table has shape {code.decoder.shape}, expected {(sn, yn)}")
    flat = lik.reshape(wa * wb, sn, yn)
    hit = flat[code.decoder, np.arange(sn)[:, None], np.arange(yn)[None, :]]
    correct = float(np.sum(_history_prior(model, code.n)[:, None] * hit)) / (wa * wb)
    return min(1.0, max(0.0, 1.0 - correct))


def _code_checks(model: MacModel, n: int, w_sizes: tuple[int, int]):
    if n < 1:
        raise ValueError("block length must be >= 1")
    if min(w_sizes) < 1:
        raise ValueError("message set sizes must be >= 1")


# --------------------------------------------------------------------------- Fano / converse bounds

@dataclass
class FanoResult:
    eps: float
    bound_a: float
    bound_b: float
    bound_sum: float
    info_a: float
    info_b: float
    info_sum: float

    def slacks(self, rates: tuple[float, float]) -> tuple[float, float, float]:
        ra, rb = rates
        return self.bound_a - ra, self.bound_b - rb, self.bound_sum - ra - rb


def history_information(code, model: MacModel) -> tuple[float, float, float]:
    """sum_sigma alpha_sigma (I(X_a;Y|X_b,S), I(X_b;Y|X_a,S), I(X;Y|S)) under nu_sigma."""
    enc_a, _ = _encoders_of(code)
    totals = [0.0, 0.0, 0.0]
    for sigma, alpha in state_weights(enc_a.n, model.prior).items():
        if alpha <= 0:
            continue
        joint = empirical_joint_at(code, model, len(sigma) + 1, sigma)
        terms = (cond_mutual_info(joint, [XA], [Y], [XB, S]),
                 cond_mutual_info(joint, [XB], [Y], [XA, S]),
                 cond_mutual_info(joint, [XA, XB], [Y], [S]))
        for k in range(3):
            totals[k] += alpha * terms[k]
    return tuple(totals)


def _fano(eps: float, info, y_size: int) -> FanoResult:
    slack = math.inf if eps >= 1.0 else eta(eps, y_size)
    return FanoResult(eps, info[0] + slack, info[1] + slack, info[2] + slack, *info)


def fano_bounds(code: BlockCode, model: MacModel) -> FanoResult:
    """Exact error probability and the three converse rate bounds of the code."""
    eps = error_probability(code, model)
    return _fano(eps, history_information(code, model), model.n_outputs)


# --------------------------------------------------------------------------- exhaustive search

@dataclass
class BestCode:
    code: BlockCode
    eps: float
    pairs_searched: int
    pair_index: tuple[int, int]


def _chunks(total: int, size: int) -> Iterator[tuple[int, int]]:
    for lo in range(0, total, size):
        yield lo, min(total, lo + size)


def brute_force_best_code(model: MacModel, n: int, w_sizes: tuple[int, int],
                          cap: int = ENCODER_PAIR_CAP, tie_tol: float = 1e-15) -> BestCode:
    """Minimum exact error probability over all encoder pairs with MAP decoding.

    Pairs are visited in (index_a, index_b) order; a later pair replaces the
    incumbent only if it is better by more than ``tie_tol``.
    """
    _code_checks(model, n, w_sizes)
    wa, wb = w_sizes
    va, vb = len(model.obs_a_labels), len(model.obs_b_labels)
    count_a = encoder_count(wa, va, model.n_inputs_a, n)
    count_b = encoder_count(wb, vb, model.n_inputs_b, n)
    total = count_a * count_b
    if total > cap:
        raise CapExceededError("encoder pair enumeration", total, cap)
    size_a, size_b = encoder_size(wa, va, n), encoder_size(wb, vb, n)
    ps = _history_prior(model, n)
    sn, yn = model.n_states ** n, model.n_outputs ** n
    budget = max(1, 4_000_000 // (wa * wb * sn * yn))
    block_b = min(count_b, budget)
    block_a = max(1, min(count_a, budget // block_b))

    best_eps, best_idx = math.inf, (0, 0)
    for lo_a, hi_a in _chunks(count_a, block_a):
        da = _index_digits(np.arange(lo_a, hi_a), size_a, model.n_inputs_a)
        ca = _codewords(da, wa, va, n, model.quantizer_a, model.n_states)
        for lo_b, hi_b in _chunks(count_b, block_b):
            db = _index_digits(np.arange(lo_b, hi_b), size_b, model.n_inputs_b)
            cb = _codewords(db, wb, vb, n, model.quantizer_b, model.n_states)
            lik = _likelihoods(model, ca, cb, n)
            top = lik.reshape(hi_a - lo_a, hi_b - lo_b, wa * wb, sn, yn).max(axis=2)
            eps = 1.0 - (top * ps[None, None, :, None]).sum(axis=(2, 3)) / (wa * wb)
            # first pair (row-major) within tie_tol of the block minimum
            k = int(np.argmax(eps.ravel() <= eps.min() + tie_tol))
            cand_eps = float(eps.ravel()[k])
            cand_idx = (lo_a + k // (hi_b - lo_b), lo_b + k % (hi_b - lo_b))
            if cand_eps < best_eps - tie_tol or (cand_eps <= best_eps + tie_tol and cand_idx < best_idx):
                best_eps, best_idx = cand_eps, cand_idx

    enc_a = encoder_from_index(best_idx[0], wa, va, model.n_inputs_a, n)
    enc_b = encoder_from_index(best_idx[1], wb, vb, model.n_inputs_b, n)
    code = BlockCode(enc_a, enc_b, map_decoder((enc_a, enc_b), model))
    return BestCode(code, min(1.0, max(0.0, best_eps)), total, best_idx)


def all_encoder_pairs(model: MacModel, n: int, w_sizes: tuple[int, int],
                      cap: int = ENCODER_PAIR_CAP) -> Iterator[tuple[BlockEncoder, BlockEncoder]]:
    _code_checks(model, n, w_sizes)
    wa, wb = w_sizes
    va, vb = len(model.obs_a_labels), len(model.obs_b_labels)
    count_a = encoder_count(wa, va, model.n_inputs_a, n)
    count_b = encoder_count(wb, vb, model.n_inputs_b, n)
    if count_a * count_b > cap:
        raise CapExceededError("encoder pair enumeration", count_a * count_b, cap)
    encs_b = [encoder_from_index(i, wb, vb, model.n_inputs_b, n) for i in range(count_b)]
    for ia in range(count_a):
        enc_a = encoder_from_index(ia, wa, va, model.n_inputs_a, n)
        for enc_b in encs_b:
            yield enc_a, enc_b


@dataclass
class ConverseReport:
    n: int
    w_sizes: tuple[int, int]
    codes: int = 0
    checked: int = 0
    min_slack: float = math.inf
    violations: list = field(default_factory=list)


def converse_sweep(model: MacModel, n: int, w_sizes: tuple[int, int], decoders: str = "map",
                 cap: int = ENCODER_PAIR_CAP, decoder_cap: int = DECODER_CAP,
                 tol: float = 1e-9) -> ConverseReport:
    """Check the three converse inequalities for every enumerated code with eps < 1/2.

    ``decoders="all"`` pairs each encoder pair with every decoder table;
    ``"map"`` uses the MAP decoder only.
    """
    if decoders not in ("map", "all"):
        raise ValueError("decoders must be 'map' or 'all'")
    report = ConverseReport(n, tuple(w_sizes))
    n_msg = w_sizes[0] * w_sizes[1]
    sn, yn = model.n_states ** n, model.n_outputs ** n
    all_tables = None
    if decoders == "all":
        n_dec = n_msg ** (sn * yn)
        if n_dec * encoder_count(w_sizes[0], len(model.obs_a_labels), model.n_inputs_a, n) \
                * encoder_count(w_sizes[1], len(model.obs_b_labels), model.n_inputs_b, n) > cap \
                or n_dec > decoder_cap:
            raise CapExceededError("code enumeration with all decoders", n_dec, decoder_cap)
        all_tables = _index_digits(np.arange(n_dec), sn * yn, n_msg)
    ps = _history_prior(model, n)
    rates = (math.log2(w_sizes[0]) / n, math.log2(w_sizes[1]) / n)
    for pair in all_encoder_pairs(model, n, w_sizes, cap):
        lik = _pair_likelihood(pair, model).reshape(n_msg, sn * yn)
        weighted = lik * np.repeat(ps, yn)[None, :] / n_msg
        if all_tables is None:
            tables = np.argmax(lik, axis=0)[None, :]
        else:
            tables = all_tables
        correct = weighted[tables, np.arange(sn * yn)[None, :]].sum(axis=1)
        eps_all = np.clip(1.0 - correct, 0.0, 1.0)
        report.codes += len(tables)
        usable = np.flatnonzero(eps_all < 0.5)
        if usable.size == 0:
            continue
        info = history_information(pair, model)
        for d in usable:
            res = _fano(float(eps_all[d]), info, model.n_outputs)
            slack = min(res.slacks(rates))
            report.checked += 1
            report.min_slack = min(report.min_slack, slack)
            if slack < -tol:
                report.violations.append((pair, int(d), res))
    return report


# --------------------------------------------------------------------------- Monte Carlo

def simulate_block(model: MacModel, code: BlockCode, trials: int, seed: int) -> float:
    """Empirical block error rate over ``trials`` independent transmissions."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    enc_a, enc_b = code.encoder_a, code.encoder_b
    n = code.n
    wa = rng.integers(0, enc_a.n_messages, size=trials)
    wb = rng.integers(0, enc_b.n_messages, size=trials)
    states = rng.choice(model.n_states, size=(trials, n), p=model.prior)
    oa, ob = model.quantizer_a[states], model.quantizer_b[states]
    cdf = np.cumsum(model.kernel, axis=-1)
    u = rng.random((trials, n))
    s_idx = np.zeros(trials, dtype=np.int64)
    y_idx = np.zeros(trials, dtype=np.int64)
    for t in range(n):
        xa = enc_a.maps[t][(wa, *[oa[:, j] for j in range(t + 1)])]
        xb = enc_b.maps[t][(wb, *[ob[:, j] for j in range(t + 1)])]
        rows = cdf[states[:, t], xa, xb]
        y = np.minimum((u[:, t:t + 1] >= rows).sum(axis=1), model.n_outputs - 1)
        s_idx = s_idx * model.n_states + states[:, t]
        y_idx = y_idx * model.n_outputs + y
    decoded = code.decoder[s_idx, y_idx]
    return float(np.mean(decoded != wa * enc_b.n_messages + wb))


# --------------------------------------------------------------------------- serialization

def code_to_dict(code: BlockCode) -> dict:
    def enc(e: BlockEncoder):
        return {"messages": e.n_messages, "observations": e.n_obs, "inputs": e.n_inputs,
                "maps": [m.tolist() for m in e.maps]}
    return {"n": code.n, "encoder_a": enc(code.encoder_a), "encoder_b": enc(code.encoder_b),
            "decoder": code.decoder.tolist()}


def code_from_dict(doc: dict) -> BlockCode:
    def enc(d):
        return BlockEncoder(d["messages"], d["observations"], d["inputs"],
                            tuple(np.array(m, dtype=np.int64) for m in d["maps"]))
    try:
        return BlockCode(enc(doc["encoder_a"]), enc(doc["encoder_b"]), np.array(doc["decoder"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelError(f"malformed code document: {exc}") from None
