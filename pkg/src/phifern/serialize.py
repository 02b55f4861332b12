"""JSON payloads: rationals as "num/den" strings, flags column by column,
permutations and orderings 1-based.
"""

from __future__ import annotations

import json
from dataclasses import asdict
from fractions import Fraction
from typing import Any

from . import __version__
from .combinat import NestedSequence, WeaklyNestedSequence
from .curves import ObstructionReport, Verdict
from .exactlinalg import format_rational, to_rational
from .phimod import (
    FilteredPhiModule,
    NestedRefinements,
    Refinement,
    RefinementReport,
    WeaklyNestedRefinements,
)


class SchemaError(ValueError):
    pass


def _rational(x: Any, where: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise SchemaError(f"{where}: expected an integer or a 'num/den' string, got {x!r}")
    try:
        return to_rational(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"{where}: {exc}") from None


def module_from_dict(data: Any) -> FilteredPhiModule:
    if not isinstance(data, dict):
        raise SchemaError("module payload must be a JSON object")
    for key in ("prime", "eigenvalues", "weights", "flag"):
        if key not in data:
            raise SchemaError(f"missing field {key!r}")
    prime, eig, wts, flag = data["prime"], data["eigenvalues"], data["weights"], data["flag"]
    if not isinstance(prime, int) or isinstance(prime, bool):
        raise SchemaError("prime must be an integer")
    if not isinstance(eig, list) or not isinstance(wts, list) or not isinstance(flag, list):
        raise SchemaError("eigenvalues, weights and flag must be lists")
    if not all(isinstance(k, int) and not isinstance(k, bool) for k in wts):
        raise SchemaError("weights must be integers")
    n = len(eig)
    if len(flag) != n or not all(isinstance(c, list) and len(c) == n for c in flag):
        raise SchemaError(f"flag must list {n} columns of length {n}")
    eigenvalues = [_rational(x, f"eigenvalues[{i}]") for i, x in enumerate(eig)]
    columns = [[_rational(x, f"flag[{j}][{i}]") for i, x in enumerate(col)] for j, col in enumerate(flag)]
    try:
        return FilteredPhiModule.build(prime, eigenvalues, wts, columns)
    except ValueError as exc:
        raise SchemaError(str(exc)) from None


def module_to_dict(d: FilteredPhiModule) -> dict:
    return {
        "prime": d.prime,
        "eigenvalues": [format_rational(x) for x in d.eigenvalues],
        "weights": list(d.weights),
        "flag": [[format_rational(x) for x in col] for col in d.flag.to_columns()],
    }


def refinement_from_dict(data: Any, n: int) -> Refinement:
    if isinstance(data, dict):
        data = data.get("ordering")
    if not isinstance(data, list) or len(data) != n:
        raise SchemaError(f"ordering must be a list of {n} indices")
    try:
        return Refinement(tuple(int(x) for x in data))
    except (TypeError, ValueError) as exc:
        raise SchemaError(str(exc)) from None


def refinement_to_dict(f: Refinement) -> dict:
    return {"ordering": list(f.ordering)}


def report_to_dict(r: RefinementReport) -> dict:
    return {"ordering": list(r.refinement.ordering), "noncritical": r.noncritical, "regular": r.regular}


def nested_to_dict(seq: NestedSequence) -> dict:
    return {
        "choices": list(seq.interval.choices),
        "y": list(seq.interval.y),
        "y_star": list(seq.interval.y_star),
        "perms": [list(p) for p in seq.perms],
    }


def weakly_nested_to_dict(seq: WeaklyNestedSequence) -> dict:
    return {
        "choices": list(seq.interval.choices),
        "y": list(seq.interval.y),
        "y_star": list(seq.interval.y_star),
        "taus": [list(t) for t in seq.taus],
        "sigmas": [list(p) for p in seq.sigmas],
        "sigma_stars": [list(p) for p in seq.sigma_stars],
    }


def nested_refinements_to_dict(w: NestedRefinements) -> dict:
    return {
        "method": w.method,
        "base": list(w.base.ordering),
        "sequence": nested_to_dict(w.sequence),
        "refinements": [list(f.ordering) for f in w.refinements],
    }


def weak_witness_to_dict(w: WeaklyNestedRefinements) -> dict:
    return {
        "method": w.method,
        "base": list(w.base.ordering),
        "sequence": weakly_nested_to_dict(w.sequence),
        "refinements": [list(f.ordering) for f in w.refinements],
        "star_refinements": [list(f.ordering) for f in w.star_refinements],
    }


def _plain(x: Any) -> Any:
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, float) and x == float("inf"):
        return "inf"
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(_plain(v) for v in x)
    return x


def verdict_to_dict(v: Verdict) -> dict:
    return {"clause": v.clause, "prime": v.prime, "status": v.status, "evidence": _plain(v.evidence)}


def obstruction_to_dict(r: ObstructionReport) -> dict:
    return {
        "label": r.label,
        "p": r.p,
        "status": r.status,
        "primes_checked": list(r.primes_checked),
        "setup": [verdict_to_dict(v) for v in r.setup],
        "local": [verdict_to_dict(v) for v in r.local],
        "modular_degree": verdict_to_dict(r.degree),
        "class_numbers": verdict_to_dict(r.class_numbers),
        "undecided": [verdict_to_dict(v) for v in r.undecided()],
    }


def dataclass_to_dict(obj: Any) -> dict:
    return _plain(asdict(obj))


def dumps(payload: dict) -> str:
    """Stable JSON text: explicit field order, version stamp, trailing newline."""
    return json.dumps({"version": __version__, **_plain(payload)}, indent=2) + "\n"
