"""Command-line surface for the wiretap lab.

Subcommands: classify, antilatin {verify,xi,pair-check,find,maxset},
capacity, mincut, mds {build,verify}, wiretap2, han.  No environment
variables are read.  Exit codes: 0 success, 1 expectation failed,
2 usage error, 3 search budget exhausted.  All randomized searches take
an explicit seed (fixed default), so identical arguments produce byte-
identical JSON.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Optional, Sequence

from . import anti_latin as al
from . import attack_engine as ae
from . import network_capacity as nc
from .algebra import Matrix, build_mds_generator, verify_mds
from .errors import BudgetError
from .info_theory import (
    JointDistribution,
    check_han_collection,
    check_han_subsets,
    random_rational_distribution,
)
from .onehop_codes import (
    anti_latin_code,
    check_correctness,
    scalar_linear_code,
    standard_nonlinear_code,
    vector_linear_code,
)

SCHEMA = "wiretaplab/v1"
DEFAULT_SEED = al.DEFAULT_SEED

# shorthand: "active" is modification without re-selection, "adaptive"
# is re-selection without modification; the combined strongest class
# keeps its full name
_CLASS_ALIASES = {
    "passive": ae.AttackClass.DETERMINISTIC_PASSIVE,
    "active": ae.AttackClass.DETERMINISTIC_ACTIVE,
    "adaptive": ae.AttackClass.ADAPTIVE_PASSIVE,
}


def _parse_class(name: str) -> ae.AttackClass:
    if name in _CLASS_ALIASES:
        return _CLASS_ALIASES[name]
    return ae.AttackClass.from_name(name)


def _emit_json(payload: dict) -> None:
    print(json.dumps({"schema": SCHEMA, **payload}, sort_keys=True))


def _load_square(path: str) -> al.AntiLatinSquare:
    with open(path, "r", encoding="utf-8") as fh:
        return al.AntiLatinSquare.from_text(fh.read())


def _load_network(spec: str) -> nc.WiretapNetwork:
    try:
        with open(spec, "r", encoding="utf-8") as fh:
            return nc.WiretapNetwork.from_text(fh.read())
    except FileNotFoundError:
        if spec in nc.BUILTIN_NETWORKS:
            return nc.WiretapNetwork.from_text(nc.BUILTIN_NETWORKS[spec])
        raise


def _build_family_code(family: str, d: int, seed: int):
    if family == "scalar-linear":
        return scalar_linear_code(d)
    if family == "scalar-linear-norand":
        return scalar_linear_code(d, relay_randomness=False)
    if family == "standard":
        return standard_nonlinear_code(d)
    if family == "vector-linear":
        return vector_linear_code(d)
    if family == "anti-latin":
        if d in (3, 4):
            return anti_latin_code(*al.reference_decodable_pair(d))
        result = al.find_decodable_pair(d, seed=seed)
        if not result.found:
            raise BudgetError(f"no decodable anti-Latin pair found for d={d}")
        return anti_latin_code(*result.pair)
    raise ValueError(f"unknown code family {family!r}")


# ---------------------------------------------------------------------------
# classify

def cmd_classify(args) -> int:
    if args.selftest:
        return _selftest_classify()
    if args.table:
        d_list = [int(tok) for tok in args.d.split(",")]
        table = ae.classification_table(d_list)
        if args.format == "json":
            _emit_json({"table": table.to_json_dict()})
        elif args.format == "csv":
            print(table.to_csv(), end="")
        else:
            print(table.to_text(), end="")
        if args.expect_table1:
            mismatches = ae.table_mismatches(table)
            if mismatches:
                for line in mismatches:
                    print(f"MISMATCH {line}", file=sys.stderr)
                return 1
        return 0
    if not args.family or not args.klass:
        raise ValueError("classify needs --family and --class (or --table)")
    d = int(args.d)
    code = _build_family_code(args.family, d, args.seed)
    verdict = ae.classify(code, _parse_class(args.klass))
    if args.format == "json":
        _emit_json({"verdict": verdict.to_json_dict()})
    else:
        print(f"{verdict.code_id} vs {verdict.klass.value}: {verdict.level.value}")
        print(f"max leakage: {verdict.max_leakage_bits:.6f} bits")
        print(f"witness: {json.dumps(verdict.witness.to_json_dict(), sort_keys=True)}")
    return 0


def _selftest_classify() -> int:
    ok = True
    code = scalar_linear_code(2)
    first, y34, decoded = code.transmit(1, (0,), 1)
    ok &= _report("scalar transcript", (first, y34, decoded) == ((0, 1), (1, 0), 1))
    std = standard_nonlinear_code(3)
    ok &= _report("standard zero-scramble", std.transmit(1, (0,))[1] == (0, 1))
    ok &= _report("built-ins correct", all(
        check_correctness(c) for c in (code, std, vector_linear_code(2))))
    return 0 if ok else 1


def _report(name: str, passed: bool) -> bool:
    print(f"selftest {name}: {'ok' if passed else 'FAIL'}")
    return passed


# ---------------------------------------------------------------------------
# antilatin

def cmd_antilatin_verify(args) -> int:
    if args.selftest:
        ok = _report("constant matrix", al.is_anti_latin([[0, 0], [0, 0]]))
        ok &= _report("latin square rejected",
                      not al.is_anti_latin([[0, 1, 2], [1, 2, 0], [2, 0, 1]]))
        return 0 if ok else 1
    with open(args.file, "r", encoding="utf-8") as fh:
        rows = [[int(t) for t in line.split()]
                for line in fh.read().strip().splitlines() if line.strip()]
    result = al.is_anti_latin(rows)
    if args.format == "json":
        _emit_json({"anti_latin": result})
    else:
        print("anti-Latin" if result else "not anti-Latin")
    return 0


def cmd_antilatin_xi(args) -> int:
    if args.selftest:
        a = al.AntiLatinSquare.from_rows([[0, 0, 0], [0, 0, 0], [0, 0, 0]])
        b = al.reference_decodable_pair(3)[1]
        xs = al.xi_set(a, b, 0, 0)
        ok = _report("diagonal xi set",
                     xs.members == frozenset(b.entry(l, l) for l in range(3)))
        ok &= _report("empty xi set", al.xi_set(a, b, 1, 0).members == frozenset())
        return 0 if ok else 1
    a, b = _load_square(args.a), _load_square(args.b)
    xs = al.xi_set(a, b, args.z, args.m)
    if args.format == "json":
        _emit_json({"z": xs.z, "m": xs.m, "members": sorted(xs.members)})
    else:
        print(f"Xi(z={xs.z}, m={xs.m}) = {{{', '.join(map(str, sorted(xs.members)))}}}")
    return 0


def cmd_antilatin_pair_check(args) -> int:
    if args.selftest:
        pair = al.reference_decodable_pair(3)
        ok = _report("reference pair one-to-one", al.is_one_to_one_pair(*pair))
        ok &= _report("reference pair decodable", al.is_decodable_pair(*pair))
        return 0 if ok else 1
    a, b = _load_square(args.a), _load_square(args.b)
    payload = {"one_to_one": al.is_one_to_one_pair(a, b),
               "decodable": al.is_decodable_pair(a, b)}
    if args.format == "json":
        _emit_json(payload)
    else:
        print(f"one-to-one: {payload['one_to_one']}")
        print(f"decodable:  {payload['decodable']}")
    return 0


def cmd_antilatin_find(args) -> int:
    if args.selftest:
        r2 = al.find_decodable_pair(2)
        ok = _report("d=2 proven not found", not r2.found and r2.proven_empty)
        return 0 if ok else 1
    result = al.find_decodable_pair(args.d, seed=args.seed, budget=args.budget)
    if result.found:
        a, b = result.pair
        if args.format == "json":
            _emit_json({"found": True, "method": result.method,
                        "examined": result.examined,
                        "a": [list(r) for r in a.rows],
                        "b": [list(r) for r in b.rows]})
        else:
            print(f"found ({result.method}, {result.examined} candidates)")
            print(a.to_text(), end="")
            print("--")
            print(b.to_text(), end="")
        return 0
    if result.proven_empty:
        if args.format == "json":
            _emit_json({"found": False, "proven_empty": True,
                        "examined": result.examined})
        else:
            print(f"NotFound: no decodable pair exists for d={args.d} "
                  f"(exhaustive over {result.examined} candidate pairs)")
        return 0
    print(f"budget exhausted after {result.examined} steps", file=sys.stderr)
    return 3


def cmd_antilatin_maxset(args) -> int:
    if args.selftest:
        r = al.max_mutual_set(2, "decodable", "exact")
        ok = _report("d=2 singleton", r.size == 1 and r.exact)
        return 0 if ok else 1
    result = al.max_mutual_set(args.d, args.mode, args.method,
                               seed=args.seed, budget=args.budget)
    payload = {"d": args.d, "mode": result.mode, "method": result.method,
               "exact": result.exact, "size": result.size,
               "squares": [[list(r) for r in sq.rows] for sq in result.squares]}
    if args.format == "json":
        _emit_json(payload)
    else:
        kind = "maximum" if result.exact else "lower bound"
        print(f"{result.mode} mutual set, {kind}: size {result.size}")
        for sq in result.squares:
            print(sq.to_text(), end="")
            print("--")
    return 0


# ---------------------------------------------------------------------------
# capacity / mincut

def cmd_capacity(args) -> int:
    if args.selftest:
        caps = nc.unicast_capacities(nc.LayeredUnicastNetwork((2,), (1,), 2))
        ok = _report("single-layer formula", caps.c1_bits == 1.0
                     and caps.c2_bits == 1.0)
        r0 = nc.rwiretap_capacities(nc.one_hop_network(), 0)
        ok &= _report("r=0 gives mincut", r0.c2 == 2)
        return 0 if ok else 1
    if args.layered:
        net = nc.LayeredUnicastNetwork.from_json_dict(json.loads(args.layered))
        caps = nc.unicast_capacities(net)
        if args.format == "json":
            _emit_json(caps.to_json_dict())
        else:
            print(f"C1 = {caps.c1_bits:.6f} bits/use")
            print(f"C2 = {caps.c2_bits:.6f} bits/use")
        return 0
    if not args.net:
        raise ValueError("capacity needs --layered JSON or --net FILE with --r")
    net = _load_network(args.net)
    caps = nc.rwiretap_capacities(net, args.r)
    if args.format == "json":
        _emit_json(caps.to_json_dict())
    else:
        print(f"mincut1 = {caps.mincut1}, mincut2 = {caps.mincut2}")
        print(f"C2 = {caps.c2}")
        print(f"C1 in [{caps.c1_lower}, {caps.c1_upper}]"
              + (" (collapsed)" if caps.collapsed else ""))
        if caps.clamped:
            print("note: r exceeds a cut; capacities clamped at 0")
    return 0


def cmd_mincut(args) -> int:
    if args.selftest:
        net = nc.one_hop_network()
        ok = _report("one-hop cuts", nc.mincut1(net) == 2 and nc.mincut2(net) == 2)
        single = nc.WiretapNetwork.from_text(
            "node s source message\nnode t terminal\nedge s t\n")
        ok &= _report("single edge", nc.mincut1(single) == 1)
        return 0 if ok else 1
    net = _load_network(args.net)
    m1, m2 = nc.mincut1(net), nc.mincut2(net)
    if args.format == "json":
        _emit_json({"mincut1": m1, "mincut2": m2,
                    "pseudo_sources": list(net.pseudo_sources())})
    else:
        print(f"mincut1 = {m1}")
        print(f"mincut2 = {m2}")
    return 0


# ---------------------------------------------------------------------------
# mds / wiretap2

def cmd_mds_build(args) -> int:
    if args.selftest:
        g = build_mds_generator(2, 1, 2)
        ok = _report("smallest generator", g.entries == (1, 1))
        return 0 if ok else 1
    matrix = build_mds_generator(args.k, args.r, args.q)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(matrix.to_text())
    if args.format == "json":
        _emit_json({"k": args.k, "r": args.r, "q": args.q,
                    "rows": [list(matrix.row(i)) for i in range(matrix.rows)]})
    else:
        print(matrix.to_text(), end="")
    return 0


def cmd_mds_verify(args) -> int:
    if args.selftest:
        ok = _report("identity MDS", verify_mds(Matrix.from_rows([[1, 0], [0, 1]], 3)))
        ok &= _report("equal columns rejected",
                      not verify_mds(Matrix.from_rows([[1, 1], [2, 2]], 5)))
        return 0 if ok else 1
    with open(args.file, "r", encoding="utf-8") as fh:
        matrix = Matrix.from_text(fh.read())
    result = verify_mds(matrix)
    if args.format == "json":
        _emit_json({"mds": result})
    else:
        print("MDS" if result else "not MDS")
    return 0 if result or not args.expect else 1


def cmd_wiretap2(args) -> int:
    if args.selftest:
        report = nc.wiretap2_verify(nc.WiretapIICode.build(2, 0, 2))
        ok = _report("r=0 invertible map", report.decode_ok and report.all_taps_zero)
        return 0 if ok else 1
    code = nc.WiretapIICode.build(args.k, args.r, args.q)
    report = nc.wiretap2_verify(code)
    if args.format == "json":
        _emit_json(report.to_json_dict())
    else:
        print(f"(k={report.k}, r={report.r}) over F_{report.q}: "
              f"decode {'ok' if report.decode_ok else 'FAILED'}, "
              f"{report.subsets_checked} tap subsets, "
              f"leakage {'all zero' if report.all_taps_zero else report.max_leakage_bits}")
    return 0 if report.decode_ok and report.all_taps_zero else 1


# ---------------------------------------------------------------------------
# han

def cmd_han(args) -> int:
    if args.selftest:
        dist = JointDistribution.uniform((("Y1", 2), ("Y2", 2)))
        res = check_han_collection(dist, ("Y1", "Y2"), (), [(0, 1)], 1)
        ok = _report("single-collection equality", res.holds and res.slack == 0.0)
        res = check_han_subsets(dist, ("Y1", "Y2"), (), 2)
        ok &= _report("r=k equality", res.holds and res.slack == 0.0)
        return 0 if ok else 1
    rng = random.Random(args.seed)
    variables = [("X", 2)] + [(f"Y{i + 1}", 2) for i in range(args.k)]
    groups = [f"Y{i + 1}" for i in range(args.k)]
    violations = 0
    min_slack = None
    for _ in range(args.samples):
        dist = random_rational_distribution(rng, variables)
        res = check_han_subsets(dist, groups, "X", args.r)
        if not res.holds:
            violations += 1
        if min_slack is None or res.slack < min_slack:
            min_slack = res.slack
    payload = {"k": args.k, "r": args.r, "samples": args.samples,
               "seed": args.seed, "violations": violations,
               "min_slack": min_slack}
    if args.format == "json":
        _emit_json(payload)
    else:
        print(f"k={args.k} r={args.r}: {args.samples} seeded distributions, "
              f"{violations} violations, min slack {min_slack:.6g}")
    return 0 if violations == 0 else 1


# ---------------------------------------------------------------------------
# parser

def _add_common(sub, *, fmt=("text", "json"), seed=False, budget=None):
    sub.add_argument("--format", choices=fmt, default="text")
    sub.add_argument("--selftest", action="store_true",
                     help="run this command's built-in examples and exit")
    if seed:
        sub.add_argument("--seed", type=int, default=DEFAULT_SEED)
    if budget is not None:
        sub.add_argument("--budget", type=int, default=budget)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wiretaplab",
        description="verification lab for one-hop secure network coding")
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("classify", help="classify a code family against an attack class")
    p.add_argument("--family",
                   choices=["scalar-linear", "scalar-linear-norand", "standard",
                            "anti-latin", "vector-linear"])
    p.add_argument("--d", default="2",
                   help="alphabet size (comma list with --table)")
    p.add_argument("--class", dest="klass",
                   help="deterministic-passive, adaptive-passive, deterministic-active, "
                        "adaptive-active, or shorthand passive/active/adaptive")
    p.add_argument("--table", action="store_true",
                   help="print the full classification grid for --d values")
    p.add_argument("--expect-table1", action="store_true",
                   help="exit 1 unless the grid matches the expected summary")
    _add_common(p, fmt=("text", "json", "csv"), seed=True)
    p.set_defaults(func=cmd_classify)

    anti = subs.add_parser("antilatin", help="anti-Latin square tools")
    anti_subs = anti.add_subparsers(dest="verb", required=True)

    p = anti_subs.add_parser("verify", help="check the anti-Latin property")
    p.add_argument("--file", help="square file: d lines of d integers")
    _add_common(p)
    p.set_defaults(func=cmd_antilatin_verify)

    p = anti_subs.add_parser("xi", help="compute one Xi set")
    p.add_argument("--a")
    p.add_argument("--b")
    p.add_argument("--z", type=int, default=0)
    p.add_argument("--m", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_antilatin_xi)

    p = anti_subs.add_parser("pair-check", help="one-to-one and decodability checks")
    p.add_argument("--a")
    p.add_argument("--b")
    _add_common(p)
    p.set_defaults(func=cmd_antilatin_pair_check)

    p = anti_subs.add_parser("find", help="search for a decodable pair")
    p.add_argument("--d", type=int, required=False, default=3)
    _add_common(p, seed=True, budget=400_000)
    p.set_defaults(func=cmd_antilatin_find)

    p = anti_subs.add_parser("maxset", help="mutually compatible square sets")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--mode", choices=["decodable", "one-to-one"], default="decodable")
    p.add_argument("--method", choices=["exact", "heuristic"], default="exact")
    _add_common(p, seed=True, budget=60_000)
    p.set_defaults(func=cmd_antilatin_maxset)

    p = subs.add_parser("capacity", help="r-wiretap or layered unicast capacities")
    p.add_argument("--layered", help='JSON like {"c":2,"k":[2,2],"r":[1,1],"q":2}')
    p.add_argument("--net", help="network file or builtin name (fig1, one-hop)")
    p.add_argument("--r", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_capacity)

    p = subs.add_parser("mincut", help="both mincuts of a wiretap network")
    p.add_argument("--net", required=False, default="fig1")
    _add_common(p)
    p.set_defaults(func=cmd_mincut)

    mds = subs.add_parser("mds", help="MDS generator matrices")
    mds_subs = mds.add_subparsers(dest="verb", required=True)

    p = mds_subs.add_parser("build", help="build a systematic MDS generator")
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--q", type=int, default=7)
    p.add_argument("--out", help="also write the matrix to this file")
    _add_common(p)
    p.set_defaults(func=cmd_mds_build)

    p = mds_subs.add_parser("verify", help="verify every square submatrix invertible")
    p.add_argument("--file", required=False)
    p.add_argument("--expect", action="store_true",
                   help="exit 1 when the matrix is not MDS")
    _add_common(p)
    p.set_defaults(func=cmd_mds_verify)

    p = subs.add_parser("wiretap2", help="verify a (k, r) wiretap-II code")
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--r", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_wiretap2)

    p = subs.add_parser("han", help="sweep the entropy subset inequality")
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--samples", type=int, default=1000)
    _add_common(p, seed=True)
    p.set_defaults(func=cmd_han)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
