"""Exhaustive minimum-error codes for small block lengths, compared with the region.

For each (n, |W_a|, |W_b|) under the enumeration cap, prints eps*, the rate
pair, and whether the pair lies in the computed region inflated by
eta(eps*) + slack.
"""
import argparse
import itertools
import json
import pathlib

from macregion.errors import CapExceededError
from macregion.information import eta
from macregion.io import load_fixture
from macregion.oracle import brute_force_best_code, code_to_dict, simulate_block
from macregion.policy_search import SearchConfig, capacity_region
from macregion.region import contains, inflate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/codes")
    ap.add_argument("--max-n", type=int, default=2)
    ap.add_argument("--max-messages", type=int, default=4)
    ap.add_argument("--slack", type=float, default=1e-2)
    ap.add_argument("--trials", type=int, default=20_000)
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    for name in ("adder", "xorstate"):
        model = load_fixture(name)
        poly = capacity_region(model, SearchConfig()).polygon
        print(f"# {name}")
        print(" n  Wa Wb  eps*        simulated   R_a     R_b     inside")
        for n, wa, wb in itertools.product(range(1, args.max_n + 1), range(1, args.max_messages + 1),
                                           range(1, args.max_messages + 1)):
            try:
                best = brute_force_best_code(model, n, (wa, wb))
            except CapExceededError as exc:
                print(f"{n:2d} {wa:3d} {wb:2d}  skipped: {exc}")
                continue
            ra, rb = best.code.rates
            sim = simulate_block(model, best.code, args.trials, seed=n * 100 + wa * 10 + wb)
            inside = "-"
            if best.eps < 1:
                inside = contains(inflate(poly, eta(best.eps, model.n_outputs) + args.slack), (ra, rb), 1e-9)
            print(f"{n:2d} {wa:3d} {wb:2d}  {best.eps:.8f}  {sim:.6f}  {ra:.4f}  {rb:.4f}  {inside}")
            doc = {"eps": best.eps, "pair_index": list(best.pair_index), "code": code_to_dict(best.code)}
            (out / f"{name}_n{n}_{wa}x{wb}.json").write_text(json.dumps(doc) + "\n")


if __name__ == "__main__":
    main()
