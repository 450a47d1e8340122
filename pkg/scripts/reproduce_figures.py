"""Write the extremal-qubit sweeps behind the E-versus-c and O-versus-c figures.

One CSV per b in {0.1, 0.3, 0.5, 0.7, 0.9}, each with c on a uniform grid that
includes the c = 0 endpoint, where E drops to zero. Plotting is left to any
external tool.

    python scripts/reproduce_figures.py --out results --count 51
"""
import argparse
import os
import sys

from entfid.cli import DEFAULT_SEED, SweepSpec, run_sweep, sweep_csv, sweep_violations

B_VALUES = (0.1, 0.3, 0.5, 0.7, 0.9)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--count", type=int, default=51)
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)
    os.makedirs(args.out, exist_ok=True)
    failed = 0
    for b in B_VALUES:
        rows = run_sweep(SweepSpec("pcubed", {"b": b}, "c", 0.0, 1.0, args.count),
                         seed=args.seed, workers=args.workers)
        path = os.path.join(args.out, f"pcubed_b{b:.1f}.csv")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(sweep_csv(rows))
        bad = sweep_violations(rows)
        failed += len(bad)
        e = [r[4] for r in rows]
        o = [r[2] for r in rows]
        monotone = all(x <= y + 1e-12 for x, y in zip(e[1:], e[2:])) and all(
            x <= y + 1e-12 for x, y in zip(o, o[1:]))
        print(f"b={b:.1f}: {path}  E(0)={e[0]:.3f}  E(c1)={e[1]:.4f}  E(1)={e[-1]:.4f}  "
              f"O {o[0]:.4f}->{o[-1]:.4f}  monotone={monotone}  mismatches={len(bad)}")
        failed += not monotone
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
