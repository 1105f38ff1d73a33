"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input, 3 an
enumeration cap was exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import __version__
from .equivalence import check_mi_equalities
from .errors import CapExceededError
from .io import SpecError, dump_spec, fixture_text, format_polygon, load_spec, parse_policy
from .model import ModelError, uniform_policy
from .oracle import (BlockCode, brute_force_best_code, check_factorization, code_from_dict, code_to_dict,
                     encoder_count, error_probability, converse_sweep, random_encoder_pair, simulate_block)
from .policy_search import SearchConfig, capacity_region, random_policy
from .region import pentagon_of_policy

EXIT_OK, EXIT_CHECK_FAILED, EXIT_INVALID, EXIT_CAP = 0, 1, 2, 3


def _messages(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected A,B message set sizes, got {text!r}") from None
    if a < 1 or b < 1:
        raise argparse.ArgumentTypeError("message set sizes must be >= 1")
    return a, b


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return value


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="macregion", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"macregion {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec=True):
        if spec:
            p.add_argument("--spec", required=True, help="channel spec (JSON)")
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--seed", type=_u64, default=0)
        p.add_argument("--tol", type=float, default=None, help="tolerance override")
        p.add_argument("-v", "--verbose", action="store_true")

    p = sub.add_parser("region", help="approximate the capacity region polygon")
    common(p)
    p.add_argument("--grid", type=_positive, default=SearchConfig.grid_resolution)
    p.add_argument("--samples", type=_nonneg, default=SearchConfig.sample_count)
    p.add_argument("--restarts", type=_positive, default=SearchConfig.restarts)

    p = sub.add_parser("pentagon", help="rate bounds of one policy (uniform if no --policy)")
    common(p)
    p.add_argument("--policy", help="policy file with pi_a and pi_b")

    p = sub.add_parser("equiv-check", help="compare rate bounds on the original and strategy MAC")
    common(p)
    p.add_argument("--policy", help="policy file; otherwise uniform plus --samples random policies")
    p.add_argument("--samples", type=_nonneg, default=100)

    p = sub.add_parser("oracle-check", help="factorization and converse-bound sweeps on small codes")
    common(p)
    p.add_argument("--block-n", type=_positive, default=3, help="largest block length for factorization")
    p.add_argument("--messages", type=_messages, default=(2, 2))
    p.add_argument("--samples", type=_positive, default=200, help="random encoder pairs per block length")
    p.add_argument("--sweep-cap", type=_positive, default=20_000,
                   help="largest encoder-pair count for the exhaustive bound sweeps")

    p = sub.add_parser("best-code", help="exhaustive search for the minimum-error code")
    common(p)
    p.add_argument("--block-n", type=_positive, default=1)
    p.add_argument("--messages", type=_messages, default=(2, 2))

    p = sub.add_parser("simulate", help="Monte Carlo block error rate of a code")
    common(p)
    p.add_argument("--code", help="code file written by best-code; otherwise search one")
    p.add_argument("--block-n", type=_positive, default=1)
    p.add_argument("--messages", type=_messages, default=(2, 2))
    p.add_argument("--trials", type=_positive, default=10_000)

    p = sub.add_parser("fixture", help="write a bundled channel spec")
    p.add_argument("name", choices=["adder", "xorstate"])
    p.add_argument("--out")
    return parser


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def cmd_region(args, model) -> int:
    cfg = SearchConfig(grid_resolution=args.grid, sample_count=args.samples, seed=args.seed,
                       restarts=args.restarts,
                       ascent_tol=args.tol if args.tol is not None else SearchConfig.ascent_tol)
    result = capacity_region(model, cfg)
    _emit(format_polygon(result.polygon, __version__, args.seed), args.out)
    diag = sys.stdout if args.out else sys.stderr
    print(f"policies evaluated: {result.n_evaluated} (grid {result.grid_policies}, "
          f"sampled {result.sampled_policies})", file=diag)
    for d in result.directions:
        print(f"direction ({d.weight[0]:.6f}, {d.weight[1]:.6f}): hull {_fmt(d.hull_support)} "
              f"ascent {_fmt(d.ascent_value)} gap {d.gap:.3e}", file=diag)
    return EXIT_OK


def _read_policy(args, model):
    if args.policy:
        with open(args.policy, encoding="utf-8") as fh:
            return parse_policy(fh.read(), model)
    return uniform_policy(model)


def cmd_pentagon(args, model) -> int:
    p = pentagon_of_policy(model, _read_policy(args, model))
    _emit(f"{_fmt(p.i_a)} {_fmt(p.i_b)} {_fmt(p.i_sum)}\n", args.out)
    return EXIT_OK


def cmd_equiv(args, model) -> int:
    tol = args.tol if args.tol is not None else 1e-9
    if args.policy:
        policies = [_read_policy(args, model)]
    else:
        rng = np.random.default_rng(args.seed)
        policies = [uniform_policy(model)] + [random_policy(model, rng) for _ in range(args.samples)]
    worst = [0.0, 0.0, 0.0]
    for policy in policies:
        dev = check_mi_equalities(model, policy).deviations
        worst = [max(w, d) for w, d in zip(worst, dev)]
    ok = max(worst) <= tol
    lines = [f"policies checked: {len(policies)}",
             f"max deviation I(X_a;Y|S,X_b) vs I(U_a;Z|U_b): {worst[0]:.3e}",
             f"max deviation I(X_b;Y|S,X_a) vs I(U_b;Z|U_a): {worst[1]:.3e}",
             f"max deviation I(X;Y|S) vs I(U;Z): {worst[2]:.3e}",
             f"{'PASS' if ok else 'FAIL'} (tol {tol:g})"]
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_oracle(args, model) -> int:
    tol = args.tol if args.tol is not None else 1e-12
    rng = np.random.default_rng(args.seed)
    fact = 0.0
    pairs = 0
    for n in range(1, args.block_n + 1):
        for _ in range(args.samples):
            fact = max(fact, check_factorization(random_encoder_pair(rng, model, n, args.messages), model))
            pairs += 1
    lines = [f"factorization: {pairs} random encoder pairs, n <= {args.block_n}, "
             f"messages {args.messages}, max dev {fact:.3e}"]
    violations = 0
    for n in (1, 2):
        for wa in range(1, args.messages[0] + 1):
            for wb in range(1, args.messages[1] + 1):
                count = (encoder_count(wa, len(model.obs_a_labels), model.n_inputs_a, n)
                         * encoder_count(wb, len(model.obs_b_labels), model.n_inputs_b, n))
                label = f"converse sweep n={n} messages=({wa}, {wb})"
                if count > args.sweep_cap:
                    lines.append(f"{label}: skipped ({count} encoder pairs > sweep cap {args.sweep_cap})")
                    continue
                try:
                    rep = converse_sweep(model, n, (wa, wb), decoders="all")
                    mode = "all decoders"
                except CapExceededError:
                    rep = converse_sweep(model, n, (wa, wb), decoders="map")
                    mode = "MAP decoder"
                violations += len(rep.violations)
                lines.append(f"{label} ({mode}): {rep.codes} codes, {rep.checked} with eps < 1/2, "
                             f"min slack {rep.min_slack:.6g}, violations {len(rep.violations)}")
    ok = fact <= tol and violations == 0
    relation = "<=" if fact <= tol else ">"
    lines.append(f"factorization max dev {relation} {tol:g}; Lemma 1 violations: {violations}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_best_code(args, model) -> int:
    best = brute_force_best_code(model, args.block_n, args.messages)
    ra, rb = best.code.rates
    summary = (f"n={args.block_n} messages={args.messages} pairs searched={best.pairs_searched} "
               f"eps*={best.eps!r} rates=({ra:.6g}, {rb:.6g})\n")
    if args.out:
        doc = {"eps": best.eps, "pair_index": list(best.pair_index), "code": code_to_dict(best.code)}
        _emit(json.dumps(doc) + "\n", args.out)
        sys.stdout.write(summary)
    else:
        sys.stdout.write(summary)
    return EXIT_OK


def cmd_simulate(args, model) -> int:
    if args.code:
        with open(args.code, encoding="utf-8") as fh:
            doc = json.load(fh)
        code: BlockCode = code_from_dict(doc.get("code", doc))
    else:
        code = brute_force_best_code(model, args.block_n, args.messages).code
    rate = simulate_block(model, code, args.trials, args.seed)
    exact = error_probability(code, model)
    _emit(f"trials={args.trials} seed={args.seed} empirical={rate!r} exact={exact!r}\n", args.out)
    return EXIT_OK


COMMANDS = {"region": cmd_region, "pentagon": cmd_pentagon, "equiv-check": cmd_equiv,
            "oracle-check": cmd_oracle, "best-code": cmd_best_code, "simulate": cmd_simulate}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "fixture":
            _emit(fixture_text(args.name), args.out)
            return EXIT_OK
        model = load_spec(args.spec)
        return COMMANDS[args.command](args, model)
    except CapExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (SpecError, ModelError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
