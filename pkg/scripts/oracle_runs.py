"""Factorization and converse-bound sweeps on the bundled channels.

Writes one report per fixture and prints the summary lines.
"""
import argparse
import pathlib

from macregion.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/oracle")
    ap.add_argument("--seed", default="0")
    ap.add_argument("--samples", default="200")
    args = ap.parse_args()
    out = pathlib.Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    status = 0
    for name in ("adder", "xorstate"):
        spec = out / f"{name}.json"
        cli_main(["fixture", name, "--out", str(spec)])
        report = out / f"{name}_oracle.txt"
        status |= cli_main(["oracle-check", "--spec", str(spec), "--seed", args.seed,
                            "--samples", args.samples, "--messages", "2,2", "--out", str(report)])
        status |= cli_main(["equiv-check", "--spec", str(spec), "--seed", args.seed, "--samples", args.samples,
                            "--out", str(out / f"{name}_equiv.txt")])
        print(f"== {name}")
        print(report.read_text().rstrip())
        print((out / f"{name}_equiv.txt").read_text().rstrip())
    return status


if __name__ == "__main__":
    raise SystemExit(main())
