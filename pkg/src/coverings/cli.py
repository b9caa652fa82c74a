"""Command-line front end.

Exit codes: 0 all checks pass, 1 a verified inequality failed, 2 input or
precondition error, 3 capacity guard hit.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from typing import Any, Sequence

from coverings import abgroup, characters, cyclotomic, search, zcover
from coverings.arith import mycielski_f
from coverings.errors import CapacityError, DomainError, PreconditionError
from coverings.report import BoundReport, render_number

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_CAPACITY = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _load_json(path: str) -> dict[str, Any]:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read system from {path}: {exc}") from exc


def _parse_element(text: str) -> tuple[int, ...] | int:
    parts = [p for p in text.replace("(", "").replace(")", "").split(",") if p.strip()]
    try:
        values = [int(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"bad element {text!r}") from exc
    return values[0] if len(values) == 1 else tuple(values)


def _parse_gens(text: str) -> list[tuple[int, ...] | int]:
    """``"1,0;0,2"`` -> two generators."""
    return [_parse_element(chunk) for chunk in text.split(";") if chunk.strip()]


def _emit(args: argparse.Namespace, payload: dict[str, Any], text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _emit_reports(args: argparse.Namespace, reports: list[BoundReport], summary: dict[str, Any]) -> int:
    ok = all(r.verdict for r in reports)
    payload = {"summary": render_number(summary), "verdict": "pass" if ok else "fail", "reports": [r.to_dict() for r in reports]}
    lines = [f"{k}: {render_number(v)}" for k, v in summary.items()]
    lines += [r.to_text() for r in reports]
    lines.append("PASS" if ok else "FAIL")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAILED


# -- verbs ----------------------------------------------------------------------


def cmd_mycielski(args: argparse.Namespace) -> int:
    value = mycielski_f(args.n)
    _emit(args, {"n": args.n, "f": value}, f"f({args.n}) = {value}")
    return EXIT_OK


def cmd_verify_z(args: argparse.Namespace) -> int:
    system, file_m = zcover.system_from_json(_load_json(args.file))
    m = args.m if args.m is not None else file_m
    if not zcover.is_m_cover(system, m):
        raise PreconditionError(f"{system} is not a {m}-cover of Z")
    if args.a is not None:
        points = [int(_parse_element(args.a))]
    else:
        w = zcover.coverage(system)
        points = [int(x) for x in (w == m).nonzero()[0]]
    reports = [zcover.check_theorem_2_1(system, m, a) for a in points]
    irr = sorted(zcover.irredundant_indices(system, m))
    summary = {
        "system": str(system),
        "k": system.k,
        "m": m,
        "period": system.period,
        "m_cover": True,
        "exact": zcover.is_exact_m_cover(system, m),
        "minimal": len(irr) == system.k,
        "irredundant": irr,
        "base_points": points,
    }
    return _emit_reports(args, reports, summary)


def cmd_verify_group(args: argparse.Namespace) -> int:
    system, file_m = abgroup.system_from_json(_load_json(args.file))
    m = args.m if args.m is not None else file_m
    G = system.group
    reports = [abgroup.check_theorem_1_3(system, m)]
    if args.K is not None:
        K = abgroup.subgroup_from_generators(G, _parse_gens(args.K))
        if args.a is not None:
            points = [G.element(_parse_element(args.a))]
        else:
            w = abgroup.coverage(system)
            points = [x for x in G.elements if w[x] == m]
        reports += [abgroup.check_corollary_1_1(system, m, a, K) for a in points]
    summary = {
        "group": str(G),
        "k": system.k,
        "m": m,
        "exact": abgroup.is_exact_m_cover(system, m),
        "minimal": abgroup.is_minimal_m_cover(system, m),
    }
    return _emit_reports(args, reports, summary)


def cmd_divides(args: argparse.Namespace) -> int:
    orders = cyclotomic.OrderMultiset(args.orders)
    deficits = cyclotomic.divisibility_deficits(args.n, orders)
    verdict = all(s >= e for s, e in deficits.values())
    failing = [f"p={p}: {render_number(s)} < {e}" for p, (s, e) in deficits.items() if s < e]
    text = "YES" if verdict else f"NO ({'; '.join(failing)})"
    payload = {
        "n": args.n,
        "orders": list(orders),
        "divides": verdict,
        "per_prime": {str(p): {"sum": render_number(s), "ord_p(n)": e} for p, (s, e) in deficits.items()},
    }
    _emit(args, payload, text)
    return EXIT_OK


def cmd_minimal_k(args: argparse.Namespace) -> int:
    k, cert = cyclotomic.minimal_k(args.n)
    _emit(
        args,
        {"n": args.n, "f": k, "certificate": list(cert)},
        f"f({args.n}) = {k}; certificate orders: {' '.join(map(str, cert))}",
    )
    return EXIT_OK


def cmd_construct(args: argparse.Namespace) -> int:
    kind, params = args.kind, args.params
    try:
        if kind == "extremal-z":
            k, m = (int(v) for v in params)
            payload = zcover.build_extremal_zcover(k, m).to_json(m)
        elif kind == "cpcp":
            (p,) = (int(v) for v in params)
            payload = abgroup.build_cp_cp_cover(p).to_json(1)
        elif kind == "partition":
            G = abgroup.AbelianGroup(tuple(int(v) for v in params))
            H = abgroup.subgroup_from_generators(G, _parse_gens(args.H)) if args.H else None
            payload = abgroup.build_partition(G, H).to_json(1)
        else:
            raise UsageError(f"unknown construction {kind!r}")
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise UsageError(f"bad parameters for {kind}: {params}") from exc
    print(json.dumps(payload))
    return EXIT_OK


def cmd_search(args: argparse.Namespace) -> int:
    if args.mode == "bounds":
        config = search.SearchConfig(
            tuple(args.orders or (2, 2)),
            max_k=args.max_k,
            m=args.m,
            max_m=args.max_m,
            proper_cosets_only=args.proper,
            dedup_by_symmetry=args.dedup,
            naive=args.naive,
            jobs=args.jobs,
        )
        report = search.verify_bounds_exhaustively(config)
    elif args.mode == "sweep":
        report = search.sweep_theorem_1_3(args.max_order, args.max_k, args.max_m or 4, jobs=args.jobs)
    elif args.mode == "gg":
        G = abgroup.AbelianGroup(tuple(args.orders or (2, 2)))
        result = search.min_proper_coset_cover(G, dedup_by_symmetry=args.dedup)
        report = BoundReport(
            "min-proper-coset-cover",
            details={
                "group": str(G),
                "k_min": result.k_min,
                "f(|G|)": mycielski_f(G.order),
                "nodes": result.nodes,
                "witness": [str(c) for c in result.witness],
            },
        )
        report.add(str(G), "k_min >= f(|G|)", result.k_min, mycielski_f(G.order))
    elif args.mode == "divisibility":
        # one n via --orders N, otherwise every n up to --max-order
        ns = [args.orders[0]] if args.orders else list(range(2, args.max_order + 1))
        report = BoundReport("min-multiset-divisibility")
        for n in ns:
            k, witness = search.min_multiset_for_divisibility(n)
            report.details[f"witness({n})"] = list(witness)
            report.add(n, "k_min == f(n)", k, mycielski_f(n), relation="==")
    else:
        raise UsageError(f"unknown search mode {args.mode!r}")
    payload = report.to_dict()
    _emit(args, payload, report.to_text())
    return EXIT_OK if report.verdict else EXIT_FAILED


def cmd_characters(args: argparse.Namespace) -> int:
    data = _load_json(args.file)
    a = _parse_element(args.a)
    if data.get("type") == "Z":
        # a cover of Z is read on the cyclic group of order its period
        zsys, file_m = zcover.system_from_json(data)
        system = abgroup.zcover_to_group(zsys)
        if not isinstance(a, int):
            raise UsageError(f"base point for a Z system must be an integer, got {args.a!r}")
        a = (a % zsys.period,)
    else:
        system, file_m = abgroup.system_from_json(data)
    m = args.m if args.m is not None else file_m
    report = characters.verify_divisibility(system, m, a)
    return _emit_reports(args, [report], {"group": str(system.group), "k": system.k, "m": m})


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")

    parser = argparse.ArgumentParser(prog="coverings", description=__doc__.splitlines()[0], parents=[common])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("mycielski", parents=[common], help="print f(n)")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_mycielski)

    p = sub.add_parser("verify-z", parents=[common], help="check a cover of Z")
    p.add_argument("file", help="system JSON, or - for stdin")
    p.add_argument("--m", type=int)
    p.add_argument("--a", help="base point (default: every point covered exactly m times)")
    p.set_defaults(func=cmd_verify_z)

    p = sub.add_parser("verify-group", parents=[common], help="check a coset cover of a finite abelian group")
    p.add_argument("file")
    p.add_argument("--m", type=int)
    p.add_argument("--K", help="generators of K, e.g. '1,0;0,1'")
    p.add_argument("--a", help="base point for the K check, e.g. '1,0'")
    p.set_defaults(func=cmd_verify_group)

    p = sub.add_parser("divides", parents=[common], help="does n divide prod(1 - zeta) for roots of these orders?")
    p.add_argument("n", type=int)
    p.add_argument("orders", type=int, nargs="*")
    p.set_defaults(func=cmd_divides)

    p = sub.add_parser("minimal-k", parents=[common], help="f(n) with a certificate multiset")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_minimal_k)

    p = sub.add_parser("construct", parents=[common], help="emit a system as JSON")
    p.add_argument("kind", choices=("extremal-z", "cpcp", "partition"))
    p.add_argument("params", nargs="+")
    p.add_argument("--H", help="partition subgroup generators (default: trivial subgroup)")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("search", parents=[common], help="exhaustive searches")
    p.add_argument("mode", choices=("bounds", "sweep", "gg", "divisibility"))
    p.add_argument("--orders", type=int, nargs="+", default=None, help="group orders (default 2 2); for divisibility, the n to test")
    p.add_argument("--max-k", type=int, default=4)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--max-m", type=int)
    p.add_argument("--max-order", type=int, default=12)
    p.add_argument("--proper", action="store_true")
    p.add_argument("--dedup", action="store_true")
    p.add_argument("--naive", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("characters", parents=[common], help="re-run the character argument at a base point")
    p.add_argument("file")
    p.add_argument("--m", type=int)
    p.add_argument("--a", required=True)
    p.set_defaults(func=cmd_characters)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (DomainError, PreconditionError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
