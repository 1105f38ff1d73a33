"""Slow, loop-based reference computations kept independent of the numpy code paths."""
import itertools
import math
from collections import defaultdict


def as_dict(tensor):
    return {idx: float(tensor[idx]) for idx in itertools.product(*map(range, tensor.shape))}


def brute_cmi(tensor, left, right, given=()):
    """sum_g P(g) sum_{l,r} P(l,r|g) log2 P(l,r|g) / (P(l|g) P(r|g)), skipping null atoms."""
    p = as_dict(tensor)
    plrg, plg, prg, pg = (defaultdict(float) for _ in range(4))
    for idx, v in p.items():
        l = tuple(idx[i] for i in left)
        r = tuple(idx[i] for i in right)
        g = tuple(idx[i] for i in given)
        plrg[l, r, g] += v
        plg[l, g] += v
        prg[r, g] += v
        pg[g] += v
    total = 0.0
    for (l, r, g), v in plrg.items():
        if v <= 0:
            continue
        total += v * math.log2(v * pg[g] / (plg[l, g] * prg[r, g]))
    return total


def brute_error_probability(code, model):
    """Loop over messages, state sequences and output sequences."""
    enc_a, enc_b = code.encoder_a, code.encoder_b
    n = enc_a.n
    correct = 0.0
    for wa in range(enc_a.n_messages):
        for wb in range(enc_b.n_messages):
            for states in itertools.product(range(model.n_states), repeat=n):
                ps = math.prod(model.prior[s] for s in states)
                va = [int(model.quantizer_a[s]) for s in states]
                vb = [int(model.quantizer_b[s]) for s in states]
                for ys in itertools.product(range(model.n_outputs), repeat=n):
                    p = ps
                    for t in range(n):
                        xa = enc_a.output(wa, va[:t + 1])
                        xb = enc_b.output(wb, vb[:t + 1])
                        p *= model.kernel[states[t], xa, xb, ys[t]]
                    if code.decode(states, ys, model.n_states, model.n_outputs) == (wa, wb):
                        correct += p
    return 1.0 - correct / (enc_a.n_messages * enc_b.n_messages)
