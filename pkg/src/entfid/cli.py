"""Command-line interface.

Subcommands::

    entfid validate channel.json
    entfid analyze ad:p=0.5 [--json] [--oracle] [--seed N]
    entfid sweep pcubed:b=0.5 --param c --start 0 --stop 1 --count 51 --out fig2_b0.5.csv
    entfid multiplicativity ad:p=0.5 qutritM:lambda=0.6
    entfid multiplicativity --random 30 --dims 2,2
    entfid multiplicativity --families
    entfid crosscheck --random 50

Exit codes: 0 pass, 1 domain failure (invalid channel, closed-form mismatch,
gap above tolerance), 2 I/O or parse failure. All randomness flows from
``--seed`` (default :data:`DEFAULT_SEED`).
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channels import Channel, channel_from_json, choi, require_valid, validate_channel
from .entanglement import input_entanglement
from .errors import EntfidError, InvalidChannel, OutOfRange, ParseError
from .families import FAMILIES, build_family, is_family_spec, parse_family_params, parse_family_spec
from .fidelity import MULTIPLICATIVITY_TOL, check_multiplicativity, max_fidelity, oracle_max_fidelity
from .sampling import random_channel

log = logging.getLogger("entfid")

DEFAULT_SEED = 1234
O_TOL = 1e-9
E_TOL = 1e-7
ORACLE_TOL = 1e-6
SWEEP_HEADER = ("param", "O_closed", "O_computed", "E_closed", "E_computed", "degeneracy")

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_IO = 2

FAMILY_SUITE = (
    "id:d=2",
    "ad:p=0.5",
    "dephasing:q=0.25",
    "pcubed:b=0.3,c=0.7",
    "pcubed:b=0.5,c=0",
    "uv:u=1.0,v=0.5",
    "pauli:0.5,0.2,0.2,0.1",
    "pauli:0.4,0.4,0.1,0.1",
    "qutritM:lambda=0.6",
    "qutritP:z=0.4",
)

ORACLE_GRID = (
    ("ad", "p", {}, np.linspace(0, 1, 21)),
    ("pcubed", "c", {"b": 0.5}, np.linspace(0, 1, 21)),
    ("pcubed", "b", {"c": 0.5}, np.linspace(0, 1, 21)),
    ("qutritM", "lambda", {}, np.linspace(0, 1, 21)),
    ("qutritP", "z", {}, np.linspace(0, 1, 21)),
)


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


def load_channel(source: str) -> Channel:
    """A family spec string, or a path to a Channel JSON file."""
    if is_family_spec(source) and not os.path.exists(source):
        return parse_family_spec(source)
    try:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {source}: {exc.strerror}") from exc
    c = channel_from_json(text)
    return Channel(c.dim_in, c.dim_out, c.kraus, label=source)


@dataclass
class AnalysisResult:
    label: str
    o_value: float
    e_value: float
    degeneracy: int
    report: dict
    o_closed: float | None = None
    e_closed: float | None = None
    oracle: float | None = None
    failures: list = field(default_factory=list)


def analyze_channel(c: Channel, seed: int = DEFAULT_SEED, oracle: bool = False,
                    o_tol: float = O_TOL, e_tol: float = E_TOL) -> AnalysisResult:
    require_valid(c)
    fid = max_fidelity(c)
    ent = input_entanglement(c, seed=seed, report=fid)
    rep = fid.to_dict()
    rep["e_value"] = ent.e_value
    rep["entanglement"] = ent.to_dict()
    res = AnalysisResult(c.label, fid.o_value, ent.e_value, fid.degeneracy, rep)
    cf = c.closed_form
    if cf is not None:
        res.o_closed, res.e_closed = cf.o_value, cf.e_value
        rep["closed_form"] = {"family": cf.family, "params": cf.params,
                              "o_value": cf.o_value, "e_value": cf.e_value}
        if abs(cf.o_value - fid.o_value) > o_tol:
            res.failures.append(f"O closed {cf.o_value!r} vs computed {fid.o_value!r}")
        if cf.e_value is not None and abs(cf.e_value - ent.e_value) > e_tol:
            res.failures.append(f"E closed {cf.e_value!r} vs computed {ent.e_value!r}")
    if oracle:
        res.oracle = oracle_max_fidelity(c, seed=seed)
        rep["oracle"] = {"o_value": res.oracle, "gap": res.oracle - fid.o_value}
        if abs(res.oracle - fid.o_value) > ORACLE_TOL:
            res.failures.append(f"oracle {res.oracle!r} vs eigenvalue route {fid.o_value!r}")
    return res


def cmd_validate(args) -> int:
    c = load_channel(args.source)
    rep = validate_channel(c)
    d = rep.to_dict()
    if args.json:
        print(json.dumps(d, indent=2))
    else:
        print(f"dims            {c.dim_in} -> {c.dim_out}, {len(c.kraus)} Kraus operators")
        print(f"TP residual     {rep.tp_residual:.3e}")
        print(f"Choi min eig    {rep.choi_min_eigenvalue:.3e}")
        un = "n/a" if rep.unital_residual is None else f"{rep.unital_residual:.3e}"
        print(f"unital residual {un}")
        print("valid" if rep.valid else "INVALID")
    return EXIT_OK if rep.valid else EXIT_DOMAIN


def cmd_analyze(args) -> int:
    c = load_channel(args.source)
    kw = {} if args.tol is None else {"o_tol": args.tol, "e_tol": args.tol}
    res = analyze_channel(c, seed=args.seed, oracle=args.oracle, **kw)
    if args.json:
        print(json.dumps(res.report, indent=2))
    else:
        r = res.report
        print(f"channel      {res.label or args.source}")
        print(f"O            {res.o_value:.12f}")
        print(f"E (bits)     {res.e_value:.12f}")
        print(f"degeneracy   {res.degeneracy}")
        print(f"input kind   {r['input_kind']}")
        print(f"E method     {r['entanglement']['method']}")
        w = r["entanglement"]["separable_witness"]
        if w is not None:
            amps = " ".join(f"{re:+.6f}{im:+.6f}j" for re, im in w)
            print(f"witness      [{amps}]")
        if res.o_closed is not None:
            print(f"O closed     {res.o_closed:.12f}  (diff {res.o_value - res.o_closed:+.2e})")
        if res.e_closed is not None:
            print(f"E closed     {res.e_closed:.12f}  (diff {res.e_value - res.e_closed:+.2e})")
        if res.oracle is not None:
            print(f"oracle O     {res.oracle:.12f}  (gap {res.oracle - res.o_value:+.2e})")
    for f in res.failures:
        print(f"MISMATCH: {f}", file=sys.stderr)
    return EXIT_DOMAIN if res.failures else EXIT_OK


@dataclass(frozen=True)
class SweepSpec:
    family: str
    fixed: dict
    param: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise OutOfRange("sweep count must be at least 2")
        if self.family not in FAMILIES:
            raise ParseError(f"unknown family {self.family!r}")
        if self.param not in FAMILIES[self.family][1]:
            raise ParseError(f"{self.family} has no parameter {self.param!r}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


def _sweep_point(family: str, params: dict, x: float, seed: int) -> tuple:
    c = build_family(family, params)
    fid = max_fidelity(c)
    ent = input_entanglement(c, seed=seed, report=fid)
    cf = c.closed_form
    return (x, cf.o_value, fid.o_value, cf.e_value, ent.e_value, fid.degeneracy)


def run_sweep(spec: SweepSpec, seed: int = DEFAULT_SEED, workers: int = 1) -> list[tuple]:
    """Rows in sweep order; points are independent and may run in worker processes."""
    xs = [float(x) for x in spec.values()]
    jobs = [(spec.family, {**spec.fixed, spec.param: x}, x, seed) for x in xs]
    for _, p, _, _ in jobs:
        build_family(spec.family, p)  # surface OutOfRange before spawning work
    if workers <= 1:
        return [_sweep_point(*j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_sweep_point, *zip(*jobs)))


def sweep_csv(rows: list[tuple]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_HEADER)
    for x, oc, o, ec, e, deg in rows:
        w.writerow([_fmt(x), _fmt(oc), _fmt(o), _fmt(ec), _fmt(e), deg])
    return buf.getvalue()


def sweep_violations(rows, o_tol: float = O_TOL, e_tol: float = E_TOL) -> list[str]:
    bad = []
    for x, oc, o, ec, e, _ in rows:
        if abs(oc - o) > o_tol:
            bad.append(f"param={x!r}: O closed {oc!r} vs computed {o!r}")
        if ec is not None and abs(ec - e) > e_tol:
            bad.append(f"param={x!r}: E closed {ec!r} vs computed {e!r}")
    return bad


def cmd_sweep(args) -> int:
    family, fixed = parse_family_params(args.family)
    fixed.pop(args.param, None)
    spec = SweepSpec(family, fixed, args.param, args.start, args.stop, args.count)
    rows = run_sweep(spec, seed=args.seed, workers=args.workers)
    text = sweep_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        print(f"wrote {len(rows)} rows to {args.out}")
    else:
        sys.stdout.write(text)
    kw = {} if args.tol is None else {"o_tol": args.tol, "e_tol": args.tol}
    bad = sweep_violations(rows, **kw)
    for b in bad:
        print(f"MISMATCH: {b}", file=sys.stderr)
    return EXIT_DOMAIN if bad else EXIT_OK


def _parse_dims(text: str) -> tuple[int, int]:
    try:
        a, b = (int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("dims must look like 2,3") from None
    if a < 1 or b < 1:
        raise argparse.ArgumentTypeError("dims must be positive")
    return a, b


def multiplicativity_pairs(args) -> list[tuple[Channel, Channel]]:
    pairs: list[tuple[Channel, Channel]] = []
    if args.specs:
        if len(args.specs) != 2:
            raise ParseError("give exactly two channel sources")
        pairs.append((load_channel(args.specs[0]), load_channel(args.specs[1])))
    if args.random:
        rng = np.random.default_rng(args.seed)
        da, db = args.dims
        for i in range(args.random):
            c1 = random_channel(rng, da)
            c2 = random_channel(rng, db)
            pairs.append((Channel(da, da, c1.kraus, label=f"random{i}a"),
                          Channel(db, db, c2.kraus, label=f"random{i}b")))
    if args.families:
        chans = [parse_family_spec(s) for s in FAMILY_SUITE]
        pairs.extend(itertools.combinations_with_replacement(chans, 2))
    if not pairs:
        raise ParseError("nothing to check: give two sources, --random N or --families")
    return pairs


def cmd_multiplicativity(args) -> int:
    tol = MULTIPLICATIVITY_TOL if args.tol is None else args.tol
    failed = 0
    for c1, c2 in multiplicativity_pairs(args):
        rep = check_multiplicativity(c1, c2)
        ok = rep.passed(tol)
        failed += not ok
        print(f"{c1.label or '?'} x {c2.label or '?'}: lhs={rep.lhs:.15f} rhs={rep.rhs:.15f} "
              f"gap={rep.gap:+.3e} {'ok' if ok else 'FAIL'}")
    return EXIT_DOMAIN if failed else EXIT_OK


def cmd_crosscheck(args) -> int:
    tol = ORACLE_TOL if args.tol is None else args.tol
    worst = 0.0
    failed = 0
    chans: list[Channel] = []
    for family, param, fixed, xs in ORACLE_GRID:
        chans.extend(build_family(family, {**fixed, param: float(x)}) for x in xs)
    rng = np.random.default_rng(args.seed)
    for i in range(args.random):
        d = 2 if i % 2 == 0 else 3
        chans.append(Channel(d, d, random_channel(rng, d).kraus, label=f"random{i}(d={d})"))
    for c in chans:
        o = max_fidelity(c).o_value
        gap = oracle_max_fidelity(c, seed=args.seed) - o
        worst = max(worst, abs(gap))
        if abs(gap) > tol:
            failed += 1
            print(f"FAIL {c.label}: eigenvalue route {o!r}, oracle gap {gap:+.3e}")
    print(f"{len(chans)} channels, worst oracle gap {worst:.3e}, {failed} failures")
    return EXIT_DOMAIN if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="entfid", description=__doc__.split("\n")[0])
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=True, tol=True):
        if seed:
            sp.add_argument("--seed", type=int, default=DEFAULT_SEED,
                            help=f"seed for all randomness (default {DEFAULT_SEED})")
        if tol:
            sp.add_argument("--tol", type=float, default=None,
                            help="override the comparison tolerance")

    v = sub.add_parser("validate", help="check a Channel JSON file (or family spec)")
    v.add_argument("source")
    v.add_argument("--json", action="store_true")
    v.set_defaults(func=cmd_validate)

    a = sub.add_parser("analyze", help="O, E, optimal input and closed-form comparison")
    a.add_argument("source", help="Channel JSON path or family spec such as ad:p=0.5")
    a.add_argument("--json", action="store_true", help="print the full report as JSON")
    a.add_argument("--oracle", action="store_true", help="append the hill-climbing cross-check")
    common(a)
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("sweep", help="CSV of closed-form and computed values over one parameter")
    s.add_argument("family", help="family with fixed parameters, e.g. pcubed:b=0.5")
    s.add_argument("--param", required=True)
    s.add_argument("--start", type=float, default=0.0)
    s.add_argument("--stop", type=float, default=1.0)
    s.add_argument("--count", type=int, default=51)
    s.add_argument("--out", help="CSV path (default: stdout)")
    s.add_argument("--workers", type=int, default=1, help="worker processes")
    common(s)
    s.set_defaults(func=cmd_sweep)

    m = sub.add_parser("multiplicativity", help="compare O(N1 x N2) with O(N1) O(N2)")
    m.add_argument("specs", nargs="*", help="two channel sources")
    m.add_argument("--random", type=int, default=0, metavar="N", help="N random channel pairs")
    m.add_argument("--dims", type=_parse_dims, default=(2, 2), help="dims of random pairs (default 2,2)")
    m.add_argument("--families", action="store_true", help="all pairs from the built-in family suite")
    common(m)
    m.set_defaults(func=cmd_multiplicativity)

    x = sub.add_parser("crosscheck", help="oracle vs eigenvalue route on family grids and random channels")
    x.add_argument("--random", type=int, default=50, metavar="N")
    common(x)
    x.set_defaults(func=cmd_crosscheck)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ParseError, OutOfRange, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (InvalidChannel, EntfidError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
