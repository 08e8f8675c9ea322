"""Command line interface.

Exit codes: 0 pass, 1 verification failure, 2 input error, 3 search budget
exceeded.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .catalog import NotAGroupWithinCap, ParseError, load_group
from .cover import SearchBudgetExhausted
from .perm import CapExceeded
from .pipeline import (BudgetError, DegreeCapExceeded, InputError, NoEligibleQ,
                       RealizeOptions, canonical_json, emit, realize, remark3_plan,
                       remark4_plan, revalidate)
from .psl2 import SearchExhausted, find_generating_triple, projective_perm
from .triangle import (BadPrime, NonIntegralGenus, NotHyperbolic, SearchBoundExceeded,
                       Triple, classify_triple, find_q, genus_rh, is_hyperbolic,
                       modulus_k)

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def _print(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def cmd_realize(args) -> int:
    group = load_group(args.group, cap=args.group_cap)
    opts = RealizeOptions(
        triple=Triple.parse(args.triple) if args.triple else None,
        q=args.q, seed=args.seed, group_cap=args.group_cap, dart_cap=args.dart_cap,
        tables=args.tables,
    )
    result = realize(group, opts)
    cert = result.certificate
    if args.stdout:
        sys.stdout.write(canonical_json(cert))
    if args.out:
        cpath, dpath = emit(result, args.out, timings=args.timings)
        print("wrote %s and %s" % (cpath, dpath), file=sys.stderr)
    if not args.stdout:
        cv = cert["cover"]
        print("group %s (order %d, rank %d): triple %s, q=%d, base genus %d, "
              "%d darts, cover genus %d, |Aut| = %d: %s"
              % (cert["group"]["name"], cert["group"]["order"], cert["group"]["rank"],
                 tuple(cert["triple"]), cert["q"], cert["base"]["genus_formula"],
                 cv["darts"], cv["genus_euler"], cv["aut_order"], cert["verdict"].upper()))
        for k, v in cert["checks"].items():
            if not v:
                print("  failed check: %s" % k)
    return EXIT_PASS if result.passed else EXIT_FAIL


def cmd_triple_info(args) -> int:
    t = Triple.parse(args.triple)
    info = {"triple": list(t), "hyperbolic": is_hyperbolic(t)}
    if info["hyperbolic"]:
        info["k"] = modulus_k(t)
        info["classification"] = vars(classify_triple(t, tables=args.tables))
    _print(info)
    return EXIT_PASS


def cmd_find_q(args) -> int:
    t = Triple.parse(args.triple)
    r = find_q(t, args.rank)
    _print({"triple": list(t), "k": r.k, "q": r.q, "g": r.g, "rank": args.rank})
    return EXIT_PASS


def cmd_psl2_triple(args) -> int:
    gt = find_generating_triple(args.q, args.l, args.m, args.n, seed=args.seed)
    _print({
        "q": args.q,
        "orders": [args.l, args.m, args.n],
        "x": list(gt.x.entries()), "y": list(gt.y.entries()), "z": list(gt.z.entries()),
        "generated_order": gt.generated_order(),
        "x_perm": list(projective_perm(gt.x).images),
        "y_perm": list(projective_perm(gt.y).images),
    })
    return EXIT_PASS


def cmd_remark3(args) -> int:
    _print(remark3_plan(Triple.parse(args.triple), q_bound=args.q_bound,
                        degree_cap=args.degree_cap))
    return EXIT_PASS


def cmd_remark4(args) -> int:
    _print(remark4_plan(args.p, construct=True if args.construct else None,
                        degree_cap=args.degree_cap))
    return EXIT_PASS


def cmd_verify(args) -> int:
    cert = json.loads(Path(args.certificate).read_text())
    dessin = json.loads(Path(args.dessin).read_text())
    ok, checks = revalidate(cert, dessin)
    for k, v in checks.items():
        if not v:
            print("FAIL %s" % k)
    print("verification %s" % ("passed" if ok else "FAILED"))
    return EXIT_PASS if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dessinaut", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("realize", help="realize a finite group as Aut of a dessin")
    r.add_argument("--group", required=True, help="catalog name (C6, S3, Q8, ...) or JSON file")
    r.add_argument("--triple", help="pin the triple, e.g. 4,6,12")
    r.add_argument("--q", type=int, help="pin the prime q")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out", help="directory for certificate.json and dessin.json")
    r.add_argument("--stdout", action="store_true", help="print the certificate")
    r.add_argument("--timings", action="store_true", help="also write timings.json")
    r.add_argument("--tables", action="store_true", help="use the classification tables")
    r.add_argument("--group-cap", type=int, default=500)
    r.add_argument("--dart-cap", type=int, default=10**6)
    r.set_defaults(func=cmd_realize)

    t = sub.add_parser("triple-info", help="admissibility and classification of a triple")
    t.add_argument("triple")
    t.add_argument("--tables", action="store_true")
    t.set_defaults(func=cmd_triple_info)

    f = sub.add_parser("find-q", help="smallest admissible prime with genus >= rank")
    f.add_argument("triple")
    f.add_argument("--rank", type=int, default=0)
    f.set_defaults(func=cmd_find_q)

    s = sub.add_parser("psl2-triple", help="generating triple of PSL(2,q)")
    for name in ("q", "l", "m", "n"):
        s.add_argument(name, type=int)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_psl2_triple)

    r3 = sub.add_parser("remark3", help="A4 coset variant: eligible q and genus")
    r3.add_argument("triple")
    r3.add_argument("--q-bound", type=int, default=10**4)
    r3.add_argument("--degree-cap", type=int, default=20_000)
    r3.set_defaults(func=cmd_remark3)

    r4 = sub.add_parser("remark4", help="S_p cycle variant: triple and genus")
    r4.add_argument("p", type=int)
    r4.add_argument("--construct", action="store_true")
    r4.add_argument("--degree-cap", type=int, default=5040)
    r4.set_defaults(func=cmd_remark4)

    v = sub.add_parser("verify", help="re-validate a certificate against its dessin")
    v.add_argument("--certificate", required=True)
    v.add_argument("--dessin", required=True)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (SearchBudgetExhausted, SearchExhausted, BudgetError, SearchBoundExceeded) as exc:
        print("search budget exceeded: %s" % exc, file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, ParseError, NotAGroupWithinCap, CapExceeded, NotHyperbolic,
            NonIntegralGenus, BadPrime, NoEligibleQ, DegreeCapExceeded, ValueError,
            OSError) as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
