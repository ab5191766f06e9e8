"""Command line interface.

Exit codes: 0 pass, 1 a mathematical violation was found, 2 usage or
configuration error, 3 numerical failure (non-convergence or a size guard).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .errors import NumericalError, SizeError
from .expansion import build_identity, commutative_coefficients, type_counts
from .families import FamilySpec
from .groups import count_Nq, format_word, is_p_dissociate, parse_set
from .io import FamilyFormatError, dumps_csv, dumps_json, load_family, save_family
from .lattice import SetPartition, enumerate_partitions, mobius_closed_form, mobius_table, sum_abs_mobius
from .noncrossing import catalan, enumerate_Snc, pair_partition_of_permutation
from .records import jsonable
from .suite import SUITES, SuiteConfig, SuiteError, run_suite

EXIT_PASS, EXIT_VIOLATION, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _emit(fmt: str, payload: dict, header: list[str], rows: list[list]) -> None:
    if fmt == "csv":
        sys.stdout.write(dumps_csv(header, rows))
    else:
        sys.stdout.write(dumps_json(jsonable(payload)))


def _blocks_text(pi: SetPartition) -> str:
    return "|".join(" ".join(str(x) for x in b) for b in pi.blocks)


def cmd_mobius(args) -> int:
    n = args.n
    if not 1 <= n <= 10:
        raise SizeError(f"n must be in 1..10, got {n}")
    lattice = enumerate_partitions(n)
    recursive = mobius_table(SetPartition.finest(n), SetPartition.coarsest(n)) if n <= 8 else None
    rows = []
    for pi in lattice:
        mu = mobius_closed_form(pi)
        rows.append([_blocks_text(pi), pi.nblocks, mu] + ([recursive[pi]] if recursive else []))
    total = sum_abs_mobius(n)
    agree = recursive is None or all(r[2] == r[3] for r in rows)
    ok = total == math.factorial(n) and agree
    header = ["blocks", "nblocks", "mu"] + (["mu_recursive"] if recursive else [])
    payload = {
        "n": n,
        "partitions": [dict(zip(header, r)) for r in rows],
        "sum_abs_mu": total,
        "n_factorial": math.factorial(n),
        "recursive_agrees": agree,
        "passed": ok,
    }
    _emit(args.format, payload, header, rows)
    return EXIT_PASS if ok else EXIT_VIOLATION


def cmd_expand(args) -> int:
    p = args.p
    if p < 2 or p > 10:
        raise SizeError(f"p must be in 2..10, got {p}")
    if args.commutative:
        coeffs = commutative_coefficients(p)
        header = ["type", "coefficient"]
        rows = [[" ".join(map(str, t)), c] for t, c in coeffs.items()]
        payload = {"p": p, "coefficients": [{"type": list(t), "coefficient": c} for t, c in coeffs.items()]}
    else:
        identity = build_identity(p)
        counts = type_counts(p)
        header = ["type", "partitions", "mu"]
        rows = [[" ".join(map(str, t)), cnt, mu] for t, (cnt, mu) in sorted(identity.by_type().items(), reverse=True)]
        assert all(counts[tuple(map(int, r[0].split()))] == r[1] for r in rows)
        payload = {
            "p": p,
            "convention": identity.convention,
            "terms": [{"blocks": [list(b) for b in pi.blocks], "mu": mu} for pi, mu in identity.terms],
            "by_type": [dict(zip(header, r)) for r in rows],
        }
    _emit(args.format, payload, header, rows)
    return EXIT_PASS


def _load_any_family(path: str):
    try:
        return load_family(path)
    except FileNotFoundError:
        raise UsageError(f"family file not found: {path}") from None
    except (FamilyFormatError, KeyError, TypeError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def cmd_check_orthogonal(args) -> int:
    from .tracial import is_p_orthogonal

    d = _load_any_family(args.family)
    if args.p < 2 or args.p % 2:
        raise UsageError(f"--p must be an even integer >= 2, got {args.p}")
    result = is_p_orthogonal(d, args.p, args.tol)
    out = {
        "p": args.p, "size": len(d), "dim": d.dim, "tol": args.tol,
        "p_orthogonal": result.flag,
        "witness": None if result.witness is None else [i + 1 for i in result.witness],
    }
    sys.stdout.write(dumps_json(out))
    return EXIT_PASS if result.flag else EXIT_VIOLATION


def _element_text(t) -> str | int:
    if hasattr(t, "letters"):
        return format_word(t)
    return t.value


def cmd_check_dissociate(args) -> int:
    try:
        elements = parse_set(args.set, args.group)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not elements:
        raise UsageError("--set is empty")
    result = is_p_dissociate(elements, args.p)
    out = {
        "group": args.group, "set": [_element_text(t) for t in elements], "p": args.p,
        "dissociate": result.flag,
        "witness": None if result.witness is None else [_element_text(t) for t in result.witness],
    }
    if args.nq is not None:
        count = count_Nq(elements, args.nq)
        out["q"] = args.nq
        out["N_q"] = count.count
        out["N_q_argmax"] = None if count.argmax is None else _element_text(count.argmax)
    sys.stdout.write(dumps_json(out))
    return EXIT_PASS if result.flag else EXIT_VIOLATION


def cmd_noncrossing(args) -> int:
    perms = enumerate_Snc(args.q)
    header = ["permutation", "pair_partition"]
    rows = [[" ".join(map(str, perm)), _blocks_text(pair_partition_of_permutation(perm))] for perm in perms]
    ok = len(perms) == catalan(args.q)
    payload = {
        "q": args.q, "count": len(perms), "catalan": catalan(args.q), "passed": ok,
        "permutations": [list(perm) for perm in perms],
    }
    _emit(args.format, payload, header, rows)
    return EXIT_PASS if ok else EXIT_VIOLATION


def _read_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"config file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(data, dict):
        raise UsageError(f"{path}: config must be a JSON object")
    if "suite" in data:
        data["suites"] = data.pop("suite")
    return data


def cmd_verify(args) -> int:
    data = _read_config(args.config)
    out_path = data.pop("out", None)
    for key in ("p", "seed", "trials", "workers", "tol"):
        value = getattr(args, key)
        if value is not None:
            data[key] = value
    if args.suite is not None:
        data["suites"] = args.suite
    if args.out is not None:
        out_path = args.out
    try:
        cfg = SuiteConfig.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"invalid configuration: {exc}") from None
    report = run_suite(cfg)
    text = dumps_json(report.to_dict())
    if out_path:
        Path(out_path).write_text(text)
    agg = report.to_dict()["aggregate"]
    status = "PASS" if agg["passed"] else "FAIL"
    print(
        f"{status}: {agg['records']} records, {len(agg['failures'])} failures, "
        f"{agg['expected_failures']} expected-fail controls, {agg['report_only']} report-only",
        file=sys.stderr,
    )
    for name in agg["failures"]:
        print(f"  failed: {name}", file=sys.stderr)
    if not out_path:
        sys.stdout.write(text)
    return EXIT_PASS if report.passed else EXIT_VIOLATION


def cmd_make_family(args) -> int:
    try:
        spec = FamilySpec.from_json(Path(args.spec).read_text()) if Path(args.spec).exists() else FamilySpec.from_json(args.spec)
    except (json.JSONDecodeError, ValueError) as exc:
        raise UsageError(f"invalid family spec: {exc}") from None
    d = spec.build()
    save_family(d, args.out)
    print(f"wrote {len(d)} elements of dimension {d.dim} to {args.out}")
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="porthogonal", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    fmt = dict(choices=("json", "csv"), default="json")

    p = sub.add_parser("mobius", help="Möbius values on the partition lattice")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--format", **fmt)
    p.set_defaults(func=cmd_mobius)

    p = sub.add_parser("expand", help="expansion identity or commutative coefficients")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--commutative", action="store_true")
    p.add_argument("--format", **fmt)
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("check-orthogonal", help="test a family file for p-orthogonality")
    p.add_argument("--family", required=True, help="family file or family spec JSON")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_check_orthogonal)

    p = sub.add_parser("check-dissociate", help="test a subset of a group for p-dissociateness")
    p.add_argument("--group", required=True, help="z, zmod:N or free")
    p.add_argument("--set", required=True, help="comma separated integers, or slash separated words")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--nq", type=int, help="also report N_q for this q")
    p.set_defaults(func=cmd_check_dissociate)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=("all",) + SUITES)
    p.add_argument("--p", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--out")
    p.add_argument("--config", help="JSON config; flags override its values")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("noncrossing", help="permutations with non-crossing induced pairing")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--format", **fmt)
    p.set_defaults(func=cmd_noncrossing)

    p = sub.add_parser("make-family", help="write a generated family to a family file")
    p.add_argument("--spec", required=True, help="family spec JSON text or file")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_make_family)
    return parser


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SuiteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL if isinstance(exc.cause, (NumericalError, SizeError)) else EXIT_USAGE
    except (NumericalError, SizeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
