"""Command-line entry point.

Exit codes: 0 success, 1 negative verdict under --require-generic (or a
table mismatch), 2 input error, 3 search bound exceeded, 4 generator failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any

from . import __version__, combinat, curves, dims, generate, phimod, serialize
from .exactlinalg import format_rational
from .serialize import SchemaError

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_BOUND, EXIT_GEN = 0, 1, 2, 3, 4
NESTED_BOUND = 12

log = logging.getLogger("phifern")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_json(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(EXIT_INPUT, f"cannot read {path}: {exc}") from None


def _load_module(path: str) -> phimod.FilteredPhiModule:
    try:
        return serialize.module_from_dict(_read_json(path))
    except SchemaError as exc:
        raise CliError(EXIT_INPUT, f"{path}: {exc}") from None


def _bound(args, default: int) -> int:
    return args.bound if args.bound is not None else default


def _characters(d, f) -> list:
    return [[k, format_rational(v)] for k, v in phimod.refinement_to_characters(d, f)]


def analyze_payload(d: phimod.FilteredPhiModule, bound: int) -> dict:
    if d.rank > bound:
        raise phimod.SearchBoundExceeded(f"rank {d.rank} exceeds search bound {bound}")
    wa = phimod.is_weakly_admissible(d)
    reports = phimod.classify_refinements(d, bound)
    payload: dict[str, Any] = {
        "module": serialize.module_to_dict(d),
        "rank": d.rank,
        "weakly_admissible": wa,
        "admissible_subobjects": [sorted(s) for s in phimod.admissible_subobjects(d)] if wa else None,
        "complementary_pairs": [[sorted(a), sorted(b)] for a, b in phimod.admissible_complementary_pairs(d)] if wa else None,
        "ratio_condition": phimod.satisfies_ratio_condition(d),
        "refinements": [serialize.report_to_dict(r) for r in reports],
        "generic": phimod.is_generic(d, bound),
    }
    if wa:
        nested = phimod.find_nested_noncritical(d, bound)
        payload["nested_noncritical"] = None if nested is None else serialize.nested_refinements_to_dict(nested)
    else:
        payload["nested_noncritical"] = None
    if d.rank <= min(bound, phimod.DEFAULT_WEAK_BOUND):
        ok, witness = phimod.is_weakly_generic_regular(d, bound)
        payload["weakly_generic_regular"] = {
            "holds": ok, "witness": None if witness is None else serialize.weak_witness_to_dict(witness)}
    else:
        payload["weakly_generic_regular"] = {"holds": None, "witness": None,
                                             "skipped": f"rank above weak-search bound {phimod.DEFAULT_WEAK_BOUND}"}
    payload["sen_polynomial"] = phimod.sen_polynomial(d)
    payload["characters"] = [{"ordering": list(r.refinement.ordering),
                              "characters": _characters(d, r.refinement)} for r in reports]
    return payload


def cmd_analyze(args) -> tuple[dict, int]:
    d = _load_module(args.file)
    payload = analyze_payload(d, _bound(args, phimod.DEFAULT_SCAN_BOUND))
    code = EXIT_NEGATIVE if args.require_generic and not payload["generic"] else EXIT_OK
    return payload, code


def cmd_classify(args) -> tuple[dict, int]:
    d = _load_module(args.file)
    reports = phimod.classify_refinements(d, _bound(args, phimod.DEFAULT_SCAN_BOUND))
    generic = phimod.is_generic(d, _bound(args, phimod.DEFAULT_SCAN_BOUND))
    payload = {"refinements": [serialize.report_to_dict(r) for r in reports], "generic": generic}
    return payload, EXIT_NEGATIVE if args.require_generic and not generic else EXIT_OK


def cmd_nested(args) -> tuple[dict, int]:
    n = args.n
    if n < 1:
        raise CliError(EXIT_INPUT, "n must be positive")
    if args.weak:
        bound = _bound(args, phimod.DEFAULT_WEAK_BOUND)
        if n > bound:
            raise phimod.SearchBoundExceeded(f"n = {n} exceeds weak bound {bound}")
        seqs = [serialize.weakly_nested_to_dict(s) for s in combinat.enumerate_weakly_nested(n)]
        return {"n": n, "weak": True, "count": len(seqs), "sequences": seqs}, EXIT_OK
    bound = _bound(args, NESTED_BOUND)
    if n > bound:
        raise phimod.SearchBoundExceeded(f"n = {n} exceeds bound {bound}")
    seqs = combinat.enumerate_nested(n)
    expected = 2 ** (n - 2) if n >= 2 else 1
    assert len(seqs) == expected, (len(seqs), expected)
    return {"n": n, "weak": False, "count": len(seqs), "expected": expected,
            "sequences": [serialize.nested_to_dict(s) for s in seqs]}, EXIT_OK


def cmd_sym(args) -> tuple[dict, int]:
    d2 = _load_module(args.file)
    try:
        s = phimod.sym_power(d2, args.n)
    except ValueError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None
    bound = _bound(args, phimod.DEFAULT_SCAN_BOUND)
    reports = phimod.classify_refinements(s, bound)
    return {"module": serialize.module_to_dict(s),
            "all_noncritical": all(r.noncritical for r in reports),
            "refinements": [serialize.report_to_dict(r) for r in reports]}, EXIT_OK


def cmd_dims(args) -> tuple[dict, int]:
    try:
        ledger = dims.tangent_ledger(args.n)
        glob = dims.global_dims(args.n, args.deg_f, args.defect)
        payload = {"ledger": serialize.dataclass_to_dict(ledger), "global": serialize.dataclass_to_dict(glob)}
        if args.partition:
            payload["paraboline"] = {"partition": args.partition, "dim": dims.paraboline_dim(args.partition)}
    except ValueError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None
    return payload, EXIT_OK


def cmd_classicality(args) -> tuple[dict, int]:
    try:
        res = dims.classicality_check(args.weights, args.eigenvalues, args.prime)
    except ValueError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None
    return serialize.dataclass_to_dict(res), EXIT_OK


def cmd_transversality(args) -> tuple[dict, int]:
    d = _load_module(args.file)
    try:
        f = serialize.refinement_from_dict(args.f, d.rank)
        fp = serialize.refinement_from_dict(args.f_prime, d.rank)
    except SchemaError as exc:
        raise CliError(EXIT_INPUT, str(exc)) from None
    return serialize.dataclass_to_dict(dims.transversality_hypotheses(d, f, fp)), EXIT_OK


def cmd_curve(args) -> tuple[dict, int]:
    if args.table:
        table = curves.corpus_table()
        reports = [serialize.obstruction_to_dict(curves.unobstruction_report(c)) for c in curves.corpus_curves()]
        ok = all(table["match"].values()) and all(r["status"] == curves.CERTIFIED for r in reports)
        return {"table": table, "reports": reports}, EXIT_OK if ok else EXIT_NEGATIVE
    if not args.file:
        raise CliError(EXIT_INPUT, "curve needs a CurveSpec file or --table")
    data = _read_json(args.file)
    try:
        if not isinstance(data, dict):
            raise ValueError("CurveSpec payload must be a JSON object")
        spec = curves.CurveSpec.from_dict(data)
        report = curves.unobstruction_report(spec)
    except (ValueError, TypeError) as exc:
        raise CliError(EXIT_INPUT, f"{args.file}: {exc}") from None
    return serialize.obstruction_to_dict(report), EXIT_OK


def cmd_gen(args) -> tuple[dict, int]:
    if args.rank < 1 or args.rank > generate.MAX_GEN_RANK:
        raise phimod.SearchBoundExceeded(f"rank {args.rank} outside 1..{generate.MAX_GEN_RANK}")
    seed = args.seed if args.seed is not None else 0
    try:
        mods, stats = generate.corpus(args.rank, seed, args.count, args.prime)
    except generate.GenerationError as exc:
        raise CliError(EXIT_GEN, str(exc)) from None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    files = []
    for i, d in enumerate(mods):
        path = out / f"module_r{args.rank}_s{seed}_{i:04d}.json"
        path.write_text(json.dumps(serialize.module_to_dict(d), indent=2) + "\n")
        files.append(str(path))
    return {"rank": args.rank, "seed": seed, "count": len(files), "files": files,
            "rejections": stats.rejected}, EXIT_OK


def _render_text(payload: Any, indent: int = 0) -> str:
    pad = "  " * indent
    lines = []
    items = payload.items() if isinstance(payload, dict) else ((None, v) for v in payload)
    for k, v in items:
        head = f"{pad}{k}:" if k is not None else f"{pad}-"
        flat = json.dumps(v)
        if not isinstance(v, (dict, list)) or len(flat) <= 72:
            lines.append(f"{head} {flat}")
        else:
            lines.append(head)
            lines.append(_render_text(v, indent + 1))
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON (default: text summary)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--bound", type=int, default=None, help="override the search bound")
    common.add_argument("--require-generic", action="store_true")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="phifern", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="full report for a filtered phi-module")
    p.add_argument("file")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("classify", parents=[common], help="non-criticality and regularity of all refinements")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("nested", parents=[common], help="list nested or weakly nested sequences in S_n")
    p.add_argument("n", type=int)
    p.add_argument("--weak", action="store_true")
    p.set_defaults(func=cmd_nested)

    p = sub.add_parser("sym", parents=[common], help="symmetric power of a rank-2 module")
    p.add_argument("file")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_sym)

    p = sub.add_parser("dims", parents=[common], help="dimension ledger")
    p.add_argument("n", type=int)
    p.add_argument("--deg-f", type=int, default=1)
    p.add_argument("--defect", type=int, default=0)
    p.add_argument("--partition", type=int, nargs="+")
    p.set_defaults(func=cmd_dims)

    p = sub.add_parser("classicality", parents=[common], help="slope/weight classicity clauses")
    p.add_argument("--weights", type=int, nargs=3, required=True)
    p.add_argument("--eigenvalues", nargs=3, required=True)
    p.add_argument("--prime", type=int, required=True)
    p.set_defaults(func=cmd_classicality)

    p = sub.add_parser("transversality", parents=[common], help="hypotheses for two refinements")
    p.add_argument("file")
    p.add_argument("--f", type=int, nargs="+", required=True)
    p.add_argument("--f-prime", type=int, nargs="+", required=True)
    p.set_defaults(func=cmd_transversality)

    p = sub.add_parser("curve", parents=[common], help="unobstructedness report for an elliptic curve")
    p.add_argument("file", nargs="?")
    p.add_argument("--table", action="store_true", help="run the bundled ten-class curve corpus")
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("gen", parents=[common], help="seeded weakly admissible modules")
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--prime", type=int, default=5)
    p.add_argument("--out", default="corpus")
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        payload, code = args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except phimod.SearchBoundExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BOUND
    except phimod.NotWeaklyAdmissible as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.json:
        sys.stdout.write(serialize.dumps({"command": args.command, **payload}))
    else:
        print(f"phifern {__version__} {args.command}")
        print(_render_text(payload))
    return code


if __name__ == "__main__":
    sys.exit(main())
