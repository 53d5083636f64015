"""Batch driver exposing verification and generation workflows as subcommands.

Every subcommand emits a deterministic JSON report (CSV optionally for
moment tables).  Exit codes: 0 when verified, 2 when a mathematical
counterexample was found, 1 on usage or configuration errors, so CI can
assert theorems as tests.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .family import MomentChar, ToyCMContext, kummer_certify, measure_moment, \
    sample_points
from .padic import RingCtx
from .pullback import build_restriction, check_pure_commutation, extend_via_weyl
from .series import ShiftedSeries, VarLabel, random_series, variable_labels
from .symmetrizer import lcan_expand
from .theta import congruence_sweep, phi_equivalence_report, theta_kappa_apply
from .weights import PAdicCharacterApprox, PartitionedSignature, Signature, \
    Weight, is_pure


def parse_signature(text: str) -> Signature:
    """Places separated by ';', each place 'a+,a-'."""
    places = []
    for chunk in text.split(";"):
        a, b = chunk.split(",")
        places.append((int(a), int(b)))
    return Signature(tuple(places))


def parse_weight(sig: Signature, text: str) -> Weight:
    vectors = []
    for chunk in text.split(";"):
        vectors.append(tuple(int(x) for x in chunk.split(",")))
    return Weight(sig, tuple(vectors))


def parse_partition(text: str) -> PartitionedSignature:
    """Parts separated by '/', each part a signature string."""
    return PartitionedSignature(tuple(parse_signature(part)
                                      for part in text.split("/")))


def emit(report: dict, args) -> None:
    payload = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if getattr(args, "format", "json") == "csv" and "entries" in report.get(
            "table", {}):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["alpha", "coeff"])
        for entry in report["table"]["entries"]:
            alpha = ";".join(",".join(str(x) for x in row)
                             for row in entry["alpha"])
            writer.writerow([alpha, entry["coeff"]])
        payload = buf.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def witness_series(args, ctx: RingCtx, sig: Signature,
                   part: PartitionedSignature = None) -> ShiftedSeries:
    vars_ = variable_labels(sig)
    if args.witness == "builtin":
        if part is not None:
            # the standard non-commutation witness: the monomial over all
            # cross-block variables, e.g. (1+t14)(1+t23) for (1,1)+(1,1)
            keep = build_restriction(part).keep
            dropped = [l for l in vars_ if l not in keep]
            exponents = {l: 1 for l in (dropped or vars_[:1])}
        else:
            exponents = {l: k + 1 for k, l in enumerate(vars_)
                         if k + 1 + sum(range(1, k + 1)) <= args.cap}
        return ShiftedSeries.shifted_power(ctx, vars_, exponents, cap=args.cap)
    return random_series(ctx, vars_, cap=args.cap, seed=args.seed)


def cmd_lcan(args) -> int:
    sig = parse_signature(args.sig)
    kappa = parse_weight(sig, args.kappa)
    functional = lcan_expand(kappa)
    report = {
        "command": "lcan",
        "config": {"sig": sig.to_json(), "kappa": kappa.to_json()},
        "status": "ok",
        "functional": functional.to_json(),
        "is_zero": functional.is_zero(),
    }
    emit(report, args)
    return 0


def cmd_phi(args) -> int:
    sig = parse_signature(args.sig)
    kappa = parse_weight(sig, args.kappa)
    rep = phi_equivalence_report(kappa)
    report = {
        "command": "phi",
        "config": {"sig": sig.to_json(), "kappa": kappa.to_json()},
        "status": rep["status"],
        "report": rep,
    }
    emit(report, args)
    # the minor formula must at least match the multiplicity-weighted
    # expansion; anything else is a genuine defect
    return 0 if rep["weighted_equal"] else 2


def cmd_theta_apply(args) -> int:
    sig = parse_signature(args.sig)
    kappa = parse_weight(sig, args.kappa)
    ctx = RingCtx(args.p, args.M, n_bound=sig.n)
    if args.series:
        with open(args.series) as fh:
            series = ShiftedSeries.from_json(json.load(fh), ctx)
    else:
        series = witness_series(args, ctx, sig)
    result = theta_kappa_apply(series, kappa)
    report = {
        "command": "theta-apply",
        "config": {"sig": sig.to_json(), "kappa": kappa.to_json(),
                   "p": args.p, "M": args.M, "seed": args.seed},
        "status": "ok",
        "input": series.to_json(),
        "output": result.to_json(),
    }
    emit(report, args)
    return 0


def cmd_congruence(args) -> int:
    sig = parse_signature(args.sig)
    kappa = parse_weight(sig, args.kappa)
    kappa_prime = parse_weight(sig, args.kappa_prime)
    RingCtx(args.p, args.m + 1, n_bound=sig.n)  # validate p prime, p > n
    rep = congruence_sweep(kappa, kappa_prime, args.m, args.p,
                           bound=args.bound, max_points=args.max_points,
                           seed=args.seed)
    report = {
        "command": "congruence",
        "config": {"sig": sig.to_json(), "kappa": kappa.to_json(),
                   "kappa_prime": kappa_prime.to_json(), "p": args.p,
                   "m": args.m, "seed": args.seed},
        "status": rep["status"],
        "report": rep,
    }
    emit(report, args)
    return 0 if rep["status"] == "ok" else 2


def cmd_restrict(args) -> int:
    sig = parse_signature(args.sig)
    part = parse_partition(args.part)
    lam = parse_weight(sig, args.lam)
    ctx = RingCtx(args.p, args.M, n_bound=sig.n)
    series = witness_series(args, ctx, sig, part)
    result = check_pure_commutation(lam, part, series)
    keep = build_restriction(part).keep
    report = {
        "command": "restrict",
        "config": {"sig": sig.to_json(), "part": part.to_json(),
                   "lambda": lam.to_json(), "p": args.p, "M": args.M,
                   "witness": args.witness, "seed": args.seed},
        "status": "ok" if result["commutes"] else "counterexample",
        "hypotheses_met": result["hypotheses_met"],
        "keep": sorted([list(l) for l in keep]),
        "lhs": result["lhs"].to_json(),
        "rhs": result["rhs"].to_json(),
    }
    emit(report, args)
    return 0 if result["commutes"] else 2


def cmd_weyl_extend(args) -> int:
    sig = parse_signature(args.sig)
    part = parse_partition(args.part)
    lam = parse_weight(sig, args.lam)
    ctx = RingCtx(args.p, args.M, n_bound=sig.n)
    pure, _ = is_pure(lam, part)
    if not pure:
        print("error: weight is not pure for the partition", file=sys.stderr)
        return 1
    chi = PAdicCharacterApprox(lam, args.m, symmetric=False)
    series = witness_series(args, ctx, sig)
    result = extend_via_weyl(chi, part, series)
    report = {
        "command": "weyl-extend",
        "config": {"sig": sig.to_json(), "part": part.to_json(),
                   "lambda": lam.to_json(), "p": args.p, "M": args.M,
                   "m": args.m, "seed": args.seed},
        "status": "ok" if result["holds"] else "counterexample",
        "sigma": result["sigma"],
        "dominant_conjugate": result["dominant_conjugate"],
        "lhs": result["lhs"].to_json(),
        "rhs": result["rhs"].to_json(),
    }
    emit(report, args)
    return 0 if result["holds"] else 2


def cmd_family(args) -> int:
    ctx = RingCtx(args.p, args.M, n_bound=2 * args.n)
    toy = ToyCMContext(ctx)
    sig = Signature(((args.n, args.n),))
    kappa = parse_weight(sig, args.kappa)
    char = MomentChar.basic(args.k, args.nu, args.n)
    part = parse_partition(args.part) if args.part else None
    table = measure_moment(char, kappa, args.height_cap, toy, part=part)
    report = {
        "command": "family",
        "config": {"p": args.p, "M": args.M, "n": args.n, "k": args.k,
                   "nu": args.nu, "kappa": kappa.to_json(),
                   "height_cap": args.height_cap,
                   "part": part.to_json() if part else None},
        "status": "ok",
        "table": table.to_json(),
    }
    emit(report, args)
    return 0


def cmd_certify(args) -> int:
    ctx = RingCtx(args.p, args.M, n_bound=2 * args.n)
    toy = ToyCMContext(ctx)
    sig = Signature(((args.n, args.n),))
    kappa = parse_weight(sig, args.kappa)
    kappa_prime = parse_weight(sig, args.kappa_prime)
    char = MomentChar.basic(args.k, args.nu, args.n)
    char_prime = MomentChar.basic(args.k_prime if args.k_prime is not None
                                  else args.k, args.nu, args.n)
    samples = sample_points(toy, args.n, args.samples, seed=args.seed)
    tests = [[(1, char, kappa), (-1, char_prime, kappa_prime)]]
    rep = kummer_certify(tests, args.m, samples, args.height_cap, toy)
    report = {
        "command": "certify",
        "config": {"p": args.p, "M": args.M, "m": args.m, "n": args.n,
                   "k": args.k, "k_prime": args.k_prime, "nu": args.nu,
                   "kappa": kappa.to_json(),
                   "kappa_prime": kappa_prime.to_json(),
                   "height_cap": args.height_cap, "samples": args.samples,
                   "seed": args.seed},
        "status": rep["status"],
        "report": rep,
    }
    emit(report, args)
    return 0 if rep["status"] == "ok" else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stheta",
        description="theta operators on Serre-Tate expansions: verification "
                    "and family workflows with JSON reports")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, ring=True):
        p.add_argument("--out", default=None, help="report path (default stdout)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--cap", type=int, default=8, help="series degree cap")
        if ring:
            p.add_argument("--p", type=int, default=5)
            p.add_argument("--M", type=int, default=4)

    p = sub.add_parser("lcan", help="expand the canonical functional")
    p.add_argument("--sig", required=True)
    p.add_argument("--kappa", required=True)
    common(p, ring=False)
    p.set_defaults(fn=cmd_lcan)

    p = sub.add_parser("phi", help="minor formula vs symmetrizer expansion")
    p.add_argument("--sig", required=True)
    p.add_argument("--kappa", required=True)
    common(p, ring=False)
    p.set_defaults(fn=cmd_phi)

    p = sub.add_parser("theta-apply", help="apply a theta operator to a series")
    p.add_argument("--sig", required=True)
    p.add_argument("--kappa", required=True)
    p.add_argument("--series", default=None, help="JSON series file")
    p.add_argument("--witness", default="random", choices=["random", "builtin"])
    common(p)
    p.set_defaults(fn=cmd_theta_apply)

    p = sub.add_parser("congruence", help="weight-congruence sweep")
    p.add_argument("--sig", required=True)
    p.add_argument("--kappa", required=True)
    p.add_argument("--kappa-prime", dest="kappa_prime", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--max-points", type=int, default=10 ** 6)
    common(p)
    p.set_defaults(fn=cmd_congruence)

    p = sub.add_parser("restrict", help="restriction-commutation check")
    p.add_argument("--sig", required=True)
    p.add_argument("--part", required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--witness", default="builtin", choices=["random", "builtin"])
    common(p)
    p.set_defaults(fn=cmd_restrict)

    p = sub.add_parser("weyl-extend", help="Weyl-conjugation extension check")
    p.add_argument("--sig", required=True)
    p.add_argument("--part", required=True)
    p.add_argument("--lambda", dest="lam", required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--witness", default="random", choices=["random", "builtin"])
    common(p)
    p.set_defaults(fn=cmd_weyl_extend)

    p = sub.add_parser("family", help="measure moment table")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--nu", type=int, default=0)
    p.add_argument("--kappa", required=True)
    p.add_argument("--height-cap", dest="height_cap", type=int, default=5)
    p.add_argument("--part", default=None)
    p.add_argument("--format", default="json", choices=["json", "csv"])
    common(p)
    p.set_defaults(fn=cmd_family)

    p = sub.add_parser("certify", help="Kummer-congruence certificate")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--k-prime", dest="k_prime", type=int, default=None)
    p.add_argument("--nu", type=int, default=0)
    p.add_argument("--kappa", required=True)
    p.add_argument("--kappa-prime", dest="kappa_prime", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--height-cap", dest="height_cap", type=int, default=5)
    p.add_argument("--samples", type=int, default=50)
    common(p)
    p.set_defaults(fn=cmd_certify)

    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ValueError, ZeroDivisionError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
