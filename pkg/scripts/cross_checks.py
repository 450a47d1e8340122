"""Run the oracle and multiplicativity suites through the CLI and report exit codes.

    python scripts/cross_checks.py --seed 1234
"""
import argparse
import sys

from entfid.cli import DEFAULT_SEED, main as cli


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    args = ap.parse_args(argv)
    s = str(args.seed)
    runs = [
        ["crosscheck", "--random", "50", "--seed", s],
        ["multiplicativity", "--random", "30", "--dims", "2,2", "--seed", s],
        ["multiplicativity", "--random", "10", "--dims", "2,3", "--seed", s],
        ["multiplicativity", "--families"],
    ]
    codes = []
    for argv_ in runs:
        print("$ entfid " + " ".join(argv_))
        codes.append(cli(argv_))
    print("exit codes:", codes)
    return max(codes)


if __name__ == "__main__":
    sys.exit(main())
