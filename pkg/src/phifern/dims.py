"""Closed-form deformation dimensions, tangent ledgers and the classicity predicate.

The calculators assume the smoothness hypotheses under which the formulas
hold; every record carries them in ``hypotheses`` so reports stay honest
about what was assumed rather than computed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .exactlinalg import RationalLike, is_prime, padic_valuation, to_rational
from .phimod import FilteredPhiModule, _as_refinement, is_noncritical_refinement
from . import combinat

LOCAL_HYPOTHESES = (
    "(i) distinct Frobenius eigenvalues",
    "(ii) no eigenvalue ratio equal to p",
    "(iii) End(D) = L",
    "(iv) distinct integral Hodge-Tate weights",
    "refinement non-critical where a trianguline dimension is used",
)


def paraboline_dim(blocks: Sequence[int]) -> int:
    """1 + sum_{i <= j} n_i n_j for the block sizes of a phi-stable flag."""
    blocks = list(blocks)
    if not blocks:
        raise ValueError("empty partition")
    if any(int(b) != b or b <= 0 for b in blocks):
        raise ValueError(f"blocks must be positive integers: {blocks}")
    return 1 + sum(blocks[i] * blocks[j] for i in range(len(blocks)) for j in range(i, len(blocks)))


def full_dim(n: int) -> int:
    return n * n + 1


def trianguline_dim(n: int) -> int:
    return n * (n + 1) // 2 + 1


def crystalline_dim(n: int) -> int:
    if n < 1:
        raise ValueError("n must be positive")
    return n * (n - 1) // 2 + 1


def mirabolic_dim(n: int) -> int:
    if n < 2:
        raise ValueError("mirabolic deformations need n >= 2")
    return n * n - n + 1


@dataclass(frozen=True)
class TangentLedger:
    n: int
    full: int
    trianguline: int
    crystalline: int
    mirabolic: int | None
    trianguline_excess: int
    full_excess: int
    mirabolic_excess: int | None
    hypotheses: tuple[str, ...] = LOCAL_HYPOTHESES


def tangent_ledger(n: int) -> TangentLedger:
    if n < 1:
        raise ValueError("n must be positive")
    full, tri, crys = full_dim(n), trianguline_dim(n), crystalline_dim(n)
    mira = mirabolic_dim(n) if n >= 2 else None
    assert tri == paraboline_dim([1] * n)
    assert full == paraboline_dim([n])
    assert tri - crys == n
    assert full - crys == n * (n + 1) // 2
    if mira is not None:
        assert (tri - crys) + (mira - crys) == full - crys
    return TangentLedger(n, full, tri, crys, mira, tri - crys, full - crys,
                         None if mira is None else mira - crys)


@dataclass(frozen=True)
class GlobalDims:
    n: int
    deg_f: int
    leopoldt_defect: int
    deformation: int
    eigenvariety: int
    hilbert_lower_bound: int
    adjoint_minus: int
    selmer_excess: int
    adjoint_split: tuple[int, int]
    hypotheses: tuple[str, ...] = (
        "residual representation unobstructed",
        "p splits in E",
        "Leopoldt defect supplied by the caller",
    )


def global_dims(n: int, deg_f: int, leopoldt_defect: int = 0) -> GlobalDims:
    if n < 1 or deg_f < 1 or leopoldt_defect < 0:
        raise ValueError("need n >= 1, deg_f >= 1, leopoldt_defect >= 0")
    split = (n * (n - 1) // 2, n * (n + 1) // 2)
    assert sum(split) == n * n
    return GlobalDims(
        n=n, deg_f=deg_f, leopoldt_defect=leopoldt_defect,
        deformation=deg_f * n * (n + 1) // 2,
        eigenvariety=n * deg_f,
        hilbert_lower_bound=1 + leopoldt_defect + 2 * deg_f,
        adjoint_minus=n * (n + 1) // 2,
        selmer_excess=n * deg_f,
        adjoint_split=split,
    )


def adjoint_decomposition_rank3(p: int = 5) -> dict:
    """Dimensions in Ad' = rho ⊕ eps ⊕ Sym^4(A[p])(-2) ⊗ eps for n = 3."""
    parts = {"rho_bar": 3, "epsilon": 1, "sym4_twist": 5}
    total = sum(parts.values())
    assert total == 3 * 3
    return {"parts": parts, "total": total, "n_squared": 9}


@dataclass(frozen=True)
class ClauseVerdict:
    name: str
    holds: bool
    evidence: dict


@dataclass(frozen=True)
class ClassicalityResult:
    classical: bool
    clauses: tuple[ClauseVerdict, ...]


def classicality_check(weights: Sequence[int], eigenvalues: Sequence[RationalLike], p: int) -> ClassicalityResult:
    """Slope/weight criterion for a rank-3 point; all three clauses are always reported."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if len(weights) != 3 or len(eigenvalues) != 3:
        raise ValueError("classicality_check takes three weights and three eigenvalues")
    k1, k2, k3 = (int(k) for k in weights)
    phis = [to_rational(x) for x in eigenvalues]
    v1, v3 = padic_valuation(phis[0], p), padic_valuation(phis[2], p)
    c1 = ClauseVerdict("i", k1 < k2 < k3, {"weights": [k1, k2, k3]})
    c2 = ClauseVerdict("ii", v1 < k2 < v3, {"v_phi1": v1, "k2": k2, "v_phi3": v3})
    bad = [(i + 1, j + 1) for i, j in itertools.permutations(range(3), 2) if phis[i] / phis[j] == p]
    c3 = ClauseVerdict("iii", not bad, {"pairs_with_ratio_p": bad})
    clauses = (c1, c2, c3)
    return ClassicalityResult(all(c.holds for c in clauses), clauses)


@dataclass(frozen=True)
class TransversalityResult:
    holds: bool
    starts_with_last: bool
    noncritical: dict


def transversality_hypotheses(d: FilteredPhiModule, f, f_prime) -> TransversalityResult:
    """Hypotheses under which the two trianguline functors meet in the twisted-crystalline locus."""
    f, fp = _as_refinement(f), _as_refinement(f_prime)
    n = d.rank
    c = combinat.cycle(n, tuple(range(1, n + 1))) if n > 1 else combinat.identity(1)
    cf = f.act(c)
    a = fp.ordering[0] == f.ordering[-1]
    nc = {
        "F": is_noncritical_refinement(d, f),
        "c(F)": is_noncritical_refinement(d, cf),
        "F'": is_noncritical_refinement(d, fp),
    }
    return TransversalityResult(a and all(nc.values()), a, nc)
