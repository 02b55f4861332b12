"""Filtered phi-modules with distinct Frobenius eigenvalues.

The module is stored in its phi-eigenbasis e_1, ..., e_n, so the
phi-stable subspaces are exactly the coordinate subspaces span{e_i : i in s}.
Weak admissibility then becomes a finite check over index subsets.

Flag encoding: column j of ``flag`` is the direction entering the Hodge
filtration at the jump ``weights[j]``, so Fil^{k_j} is spanned by columns
j, ..., n.  Index subsets and refinement orderings are 1-based throughout
the public API.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterable, Optional, Sequence

from . import combinat
from .combinat import Perm
from .exactlinalg import (
    Matrix,
    RationalLike,
    hstack,
    inverse,
    is_prime,
    padic_valuation,
    rank,
    to_rational,
    unit_columns,
)

log = logging.getLogger(__name__)

DEFAULT_SCAN_BOUND = 7
DEFAULT_WEAK_BOUND = 6


class SearchBoundExceeded(ValueError):
    pass


class NotWeaklyAdmissible(ValueError):
    pass


@dataclass(frozen=True)
class FilteredPhiModule:
    prime: int
    eigenvalues: tuple[Fraction, ...]
    weights: tuple[int, ...]
    flag: Matrix

    def __post_init__(self):
        if not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")
        n = len(self.eigenvalues)
        if n == 0:
            raise ValueError("rank must be positive")
        if any(x == 0 for x in self.eigenvalues):
            raise ValueError("eigenvalues must be nonzero")
        if len(set(self.eigenvalues)) != n:
            raise ValueError("eigenvalues must be pairwise distinct")
        if len(self.weights) != n:
            raise ValueError("need one weight per eigenvalue")
        if any(a >= b for a, b in zip(self.weights, self.weights[1:])):
            raise ValueError("weights must be strictly increasing")
        if self.flag.rows != n or self.flag.cols != n:
            raise ValueError(f"flag must be {n}x{n}")
        if rank(self.flag) != n:
            raise ValueError("flag matrix must be invertible")

    @classmethod
    def build(cls, prime: int, eigenvalues: Sequence[RationalLike], weights: Sequence[int],
              flag_columns: Sequence[Sequence[RationalLike]]) -> "FilteredPhiModule":
        return cls(prime, tuple(to_rational(x) for x in eigenvalues),
                   tuple(int(k) for k in weights), Matrix.from_columns(flag_columns))

    @property
    def rank(self) -> int:
        return len(self.eigenvalues)

    def fil(self, j: int) -> Matrix:
        """Basis of Fil^{k_j} (1-based j); j = n+1 gives the zero space."""
        n = self.rank
        return self.flag.select_columns(range(j - 1, n)) if j <= n else Matrix.zero(n, 0)


@dataclass(frozen=True)
class Refinement:
    ordering: tuple[int, ...]

    def __post_init__(self):
        if not combinat.is_permutation(self.ordering):
            raise ValueError(f"{self.ordering} is not a permutation of 1..{len(self.ordering)}")

    def values(self, d: FilteredPhiModule) -> tuple[Fraction, ...]:
        return tuple(d.eigenvalues[i - 1] for i in self.ordering)

    def prefix(self, i: int) -> frozenset[int]:
        return frozenset(self.ordering[:i])

    def act(self, sigma: Perm) -> "Refinement":
        """sigma((phi_i)) = (phi_{sigma^-1(i)})."""
        inv = combinat.invert(sigma)
        return Refinement(tuple(self.ordering[inv[i] - 1] for i in range(len(self.ordering))))

    def reversed(self) -> "Refinement":
        return Refinement(tuple(reversed(self.ordering)))


@dataclass(frozen=True)
class RefinementReport:
    refinement: Refinement
    noncritical: bool
    regular: bool


def _as_refinement(f) -> Refinement:
    return f if isinstance(f, Refinement) else Refinement(tuple(f))


def _check_subset(d: FilteredPhiModule, s: Iterable[int]) -> list[int]:
    s = sorted(set(s))
    if any(i < 1 or i > d.rank for i in s):
        raise IndexError(f"subset {s} out of range 1..{d.rank}")
    return s


def _all_subsets(n: int):
    for r in range(n + 1):
        for c in itertools.combinations(range(1, n + 1), r):
            yield frozenset(c)


def newton_number(d: FilteredPhiModule, s: Iterable[int]) -> int:
    s = _check_subset(d, s)
    return sum(padic_valuation(d.eigenvalues[i - 1], d.prime) for i in s)


def induced_hodge_number(d: FilteredPhiModule, s: Iterable[int]) -> int:
    s = _check_subset(d, s)
    n = d.rank
    if not s:
        return 0
    w = unit_columns(n, [i - 1 for i in s])
    # W and Fil^{k_j} have known dimensions |s| and n - j + 1
    dims = [len(s) + (n - j + 1) - rank(hstack(w, d.fil(j))) for j in range(1, n + 1)] + [0]
    return sum(d.weights[j] * (dims[j] - dims[j + 1]) for j in range(n))


def is_weakly_admissible(d: FilteredPhiModule) -> bool:
    full = range(1, d.rank + 1)
    if newton_number(d, full) != induced_hodge_number(d, full):
        return False
    return all(newton_number(d, s) >= induced_hodge_number(d, s) for s in _all_subsets(d.rank))


def admissible_subobjects(d: FilteredPhiModule) -> list[frozenset[int]]:
    """Proper nonempty phi-stable subspaces with t_N = t_H (sub-objects that are themselves admissible)."""
    if not is_weakly_admissible(d):
        raise NotWeaklyAdmissible("module is not weakly admissible")
    return [s for s in _all_subsets(d.rank)
            if 0 < len(s) < d.rank and newton_number(d, s) == induced_hodge_number(d, s)]


def admissible_complementary_pairs(d: FilteredPhiModule) -> list[tuple[frozenset[int], frozenset[int]]]:
    """Pairs (A, complement of A) both admissible, i.e. a splitting of D."""
    subs = set(admissible_subobjects(d))
    full = frozenset(range(1, d.rank + 1))
    return [(a, full - a) for a in sorted(subs, key=lambda x: (len(x), sorted(x)))
            if (full - a) in subs and min(a) == 1]


def is_noncritical_subspace(d: FilteredPhiModule, s: Iterable[int]) -> bool:
    s = _check_subset(d, s)
    n, i = d.rank, len(s)
    if i in (0, n):
        return True
    m = hstack(unit_columns(n, [j - 1 for j in s]), d.fil(i + 1))
    return rank(m) == n


def is_noncritical_refinement(d: FilteredPhiModule, f) -> bool:
    f = _as_refinement(f)
    if len(f.ordering) != d.rank:
        raise ValueError("refinement rank mismatch")
    return all(is_noncritical_subspace(d, f.prefix(i)) for i in range(1, d.rank))


def noncritical_table(d: FilteredPhiModule) -> dict[frozenset[int], bool]:
    """Non-criticality of every coordinate subspace; refinements only need these 2^n answers."""
    return {s: is_noncritical_subspace(d, s) for s in _all_subsets(d.rank)}


def _noncritical_with(table: dict[frozenset[int], bool], f: Refinement) -> bool:
    return all(table[f.prefix(i)] for i in range(1, len(f.ordering)))


def is_regular_refinement(values: Sequence[RationalLike]) -> bool:
    vals = [to_rational(x) for x in values]
    if len(set(vals)) != len(vals):
        raise ValueError("values must be pairwise distinct")
    n = len(vals)
    for j in range(1, n + 1):
        target = prod(vals[:j])
        hits = 0
        for sub in itertools.combinations(vals, j):
            if prod(sub) == target:
                hits += 1
                if hits > 1:
                    return False
    return True


def satisfies_ratio_condition(d: FilteredPhiModule) -> bool:
    return all(a / b != d.prime for a, b in itertools.permutations(d.eigenvalues, 2))


def _check_bound(n: int, bound: int):
    if n > bound:
        raise SearchBoundExceeded(f"rank {n} exceeds search bound {bound}")


def classify_refinements(d: FilteredPhiModule, bound: int = DEFAULT_SCAN_BOUND) -> list[RefinementReport]:
    _check_bound(d.rank, bound)
    table = noncritical_table(d)
    out = []
    for order in itertools.permutations(range(1, d.rank + 1)):
        f = Refinement(order)
        out.append(RefinementReport(f, _noncritical_with(table, f), is_regular_refinement(f.values(d))))
    return out


def is_generic(d: FilteredPhiModule, bound: int = DEFAULT_SCAN_BOUND) -> bool:
    _check_bound(d.rank, bound)
    if not satisfies_ratio_condition(d):
        return False
    table = noncritical_table(d)
    return all(_noncritical_with(table, Refinement(order)) for order in itertools.permutations(range(1, d.rank + 1)))


def dual(d: FilteredPhiModule) -> FilteredPhiModule:
    n = d.rank
    g = inverse(d.flag).transpose()
    cols = g.to_columns()[::-1]
    return FilteredPhiModule(d.prime, tuple(1 / x for x in d.eigenvalues),
                             tuple(-k for k in reversed(d.weights)), Matrix.from_columns(cols, nrows=n))


def twist(d: FilteredPhiModule, m: int) -> FilteredPhiModule:
    """Tensor with the m-th power of the cyclotomic character (weight -1 convention)."""
    scale = Fraction(d.prime) ** (-m)
    return FilteredPhiModule(d.prime, tuple(x * scale for x in d.eigenvalues),
                             tuple(k - m for k in d.weights), d.flag)


def _sym_product(n: int, factors: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Coefficients of a product of linear forms in the monomial basis e1^(n-i) e2^i."""
    coeffs = [Fraction(1)]
    for a, b in factors:
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] += c * a
            nxt[i + 1] += c * b
        coeffs = nxt
    assert len(coeffs) == n + 1
    return coeffs


def sym_power(d2: FilteredPhiModule, n: int) -> FilteredPhiModule:
    """n-th symmetric power of a rank-2 module, in the basis e1^(n-i) e2^i, i = 0..n."""
    if d2.rank != 2:
        raise ValueError("sym_power needs a rank-2 module")
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return d2
    alpha, beta = d2.eigenvalues
    r = beta / alpha
    for i in range(1, n + 1):
        if r ** i == 1:
            raise ValueError(f"eigenvalue ratio {r} has r^{i} = 1; eigenvalues would collide")
    a, b = d2.weights
    u, line = d2.flag.column(0), d2.flag.column(1)
    eig = tuple(alpha ** (n - i) * beta ** i for i in range(n + 1))
    wts = tuple((n - i) * a + i * b for i in range(n + 1))
    # Fil at weight (n-i)a + ib is line^i * Sym^(n-i); its basis is line^j u^(n-j), j >= i.
    cols = [_sym_product(n, [line] * i + [u] * (n - i)) for i in range(n + 1)]
    return FilteredPhiModule(d2.prime, eig, wts, Matrix.from_columns(cols, nrows=n + 1))


def refinement_to_characters(d: FilteredPhiModule, f) -> list[tuple[int, Fraction]]:
    """(k_i, phi_{sigma(i)} p^{-k_i}) per step: weight and the character's value at p."""
    f = _as_refinement(f)
    p = Fraction(d.prime)
    return [(k, phi * p ** (-k)) for k, phi in zip(d.weights, f.values(d))]


def sen_polynomial(d: FilteredPhiModule) -> list[int]:
    """Coefficients of prod (T - k_i), highest degree first."""
    coeffs = [1]
    for k in d.weights:
        coeffs = [a - k * b for a, b in zip(coeffs + [0], [0] + coeffs)]
    return coeffs


# Nested sequences of refinements.

@dataclass(frozen=True)
class NestedRefinements:
    base: Refinement
    sequence: combinat.NestedSequence
    refinements: tuple[Refinement, ...]
    method: str


@dataclass(frozen=True)
class WeaklyNestedRefinements:
    base: Refinement
    sequence: combinat.WeaklyNestedSequence
    refinements: tuple[Refinement, ...]        # F_0 .. F_{n-1}
    star_refinements: tuple[Refinement, ...]   # F_1* .. F_{n-1}*
    method: str


def _match_nested(base: Refinement, orders: Sequence[Sequence[int]]) -> Optional[combinat.NestedSequence]:
    n = len(base.ordering)
    for seq in combinat.enumerate_nested(n):
        if all(base.act(s).ordering == tuple(o) for s, o in zip(seq.perms, orders)):
            return seq
    return None


def _rank3_constructive(d: FilteredPhiModule) -> Optional[list[tuple[int, ...]]]:
    """Nested triple from the critical-line / critical-plane case analysis in rank 3."""
    crit_lines = [j for j in (1, 2, 3) if not is_noncritical_subspace(d, {j})]
    crit_planes = [s for s in itertools.combinations((1, 2, 3), 2) if not is_noncritical_subspace(d, s)]
    if crit_lines:
        if len(crit_lines) > 1 or crit_planes:
            log.warning("rank-3 case analysis: lines %s, planes %s", crit_lines, crit_planes)
            return None
        phi = crit_lines[0]
        p1, p2 = [j for j in (1, 2, 3) if j != phi]
        return [(p1, phi, p2), (p2, p1, phi), (p2, phi, p1)]
    if crit_planes:
        if len(crit_planes) > 1:
            log.warning("rank-3 case analysis: planes %s", crit_planes)
            return None
        p1, p2 = crit_planes[0]
        phi = ({1, 2, 3} - {p1, p2}).pop()
        return [(p1, phi, p2), (phi, p2, p1), (p2, phi, p1)]
    return [(1, 2, 3), (3, 1, 2), (3, 2, 1)]


def _search_nested(d: FilteredPhiModule) -> Optional[NestedRefinements]:
    n = d.rank
    seqs = combinat.enumerate_nested(n)
    table = noncritical_table(d)

    def ok(f: Refinement) -> bool:
        return _noncritical_with(table, f)

    for order in itertools.permutations(range(1, n + 1)):
        base = Refinement(order)
        if not ok(base):
            continue
        for seq in seqs:
            refs = tuple(base.act(s) for s in seq.perms)
            if all(ok(f) for f in refs):
                return NestedRefinements(base, seq, refs, "search")
    return None


def find_nested_noncritical(d: FilteredPhiModule, bound: int = DEFAULT_SCAN_BOUND) -> Optional[NestedRefinements]:
    if not is_weakly_admissible(d):
        raise NotWeaklyAdmissible("nested search requires a weakly admissible module")
    _check_bound(d.rank, bound)
    if d.rank == 1:
        base = Refinement((1,))
        seq = combinat.enumerate_nested(1)[0]
        return NestedRefinements(base, seq, (base,), "trivial")
    if d.rank == 3 and not admissible_complementary_pairs(d):
        orders = _rank3_constructive(d)
        if orders is not None:
            refs = tuple(Refinement(o) for o in orders)
            seq = _match_nested(refs[0], orders)
            if seq is not None and all(is_noncritical_refinement(d, f) for f in refs):
                return NestedRefinements(refs[0], seq, refs, "constructive")
            log.warning("rank-3 constructive triple %s failed verification; searching", orders)
    return _search_nested(d)


def is_weakly_generic_regular(d: FilteredPhiModule, bound: int = DEFAULT_WEAK_BOUND
                              ) -> tuple[bool, Optional[WeaklyNestedRefinements]]:
    _check_bound(d.rank, bound)
    if not satisfies_ratio_condition(d):
        return False, None
    n = d.rank
    table = noncritical_table(d)
    reg: dict[tuple[int, ...], bool] = {}

    def noncrit(f: Refinement) -> bool:
        return _noncritical_with(table, f)

    def regular(f: Refinement) -> bool:
        if f.ordering not in reg:
            reg[f.ordering] = is_regular_refinement(f.values(d))
        return reg[f.ordering]

    def good(base: Refinement, seq: combinat.WeaklyNestedSequence) -> Optional[WeaklyNestedRefinements]:
        refs = tuple(base.act(s) for s in seq.sigmas)
        stars = tuple(base.act(s) for s in seq.sigma_stars)
        if all(noncrit(f) and regular(f) for f in refs) and all(noncrit(f) for f in stars):
            return refs, stars
        return None

    bases = [Refinement(o) for o in itertools.permutations(range(1, n + 1))]
    if n == 1:
        base = bases[0]
        seq = combinat.weakly_nested_from_taus(combinat.NestedIntervalSequence(1, ()), [])
        if regular(base):
            return True, WeaklyNestedRefinements(base, seq, (base,), (), "trivial")
        return False, None

    canon = [(v, combinat.canonical_weakly_nested(n, v)) for v in ("transposition", "selfdual")]
    for base in bases:
        for variant, seq in canon:
            hit = good(base, seq)
            if hit:
                return True, WeaklyNestedRefinements(base, seq, hit[0], hit[1], f"canonical-{variant}")

    for base in bases:
        if not (noncrit(base) and regular(base)):
            continue
        found = _weak_dfs(n, base, noncrit, regular)
        if found is not None:
            refs = tuple(base.act(s) for s in found.sigmas)
            stars = tuple(base.act(s) for s in found.sigma_stars)
            return True, WeaklyNestedRefinements(base, found, refs, stars, "search")
    return False, None


def _weak_dfs(n, base, noncrit, regular) -> Optional[combinat.WeaklyNestedSequence]:
    def rec(choices, sigma, taus):
        i = len(choices) + 1
        if i == n:
            interval = combinat.NestedIntervalSequence(n, tuple(choices))
            return combinat.weakly_nested_from_taus(interval, taus)
        remaining = n - i + 1
        options = ("min",) if remaining == 2 else ("min", "max")
        for ch in options:
            partial = tuple(choices) + (ch,) + ("min",) * (n - 1 - i)
            interval = combinat.NestedIntervalSequence(n, partial)
            star = combinat.compose(interval.step_cycle(i), sigma)
            if not noncrit(base.act(star)):
                continue
            for tau in combinat.step_taus(interval, i):
                nxt = combinat.compose(tau, sigma)
                f = base.act(nxt)
                if noncrit(f) and regular(f):
                    out = rec(choices + [ch], nxt, taus + [tau])
                    if out is not None:
                        return out
        return None

    return rec([], combinat.identity(n), [])
