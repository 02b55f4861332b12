"""Nested intervals, ordered cycles and (weakly) nested permutation sequences.

Permutations are tuples of 1-based images ``(s(1), ..., s(n))``.  Products
compose right to left: ``compose(a, b)(j) == a(b(j))``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Literal, Sequence

Perm = tuple[int, ...]
Choice = Literal["min", "max"]


def identity(n: int) -> Perm:
    return tuple(range(1, n + 1))


def compose(a: Perm, b: Perm) -> Perm:
    if len(a) != len(b):
        raise ValueError("permutations of different degree")
    return tuple(a[x - 1] for x in b)


def invert(a: Perm) -> Perm:
    out = [0] * len(a)
    for i, x in enumerate(a, start=1):
        out[x - 1] = i
    return tuple(out)


def is_permutation(a: Sequence[int]) -> bool:
    return sorted(a) == list(range(1, len(a) + 1))


def cycle(n: int, elems: Sequence[int]) -> Perm:
    """The cycle ``elems[0] -> elems[1] -> ... -> elems[0]`` in S_n."""
    if len(set(elems)) != len(elems):
        raise ValueError(f"repeated entries in cycle {tuple(elems)}")
    img = list(range(1, n + 1))
    for a, b in zip(elems, list(elems[1:]) + list(elems[:1])):
        img[a - 1] = b
    return tuple(img)


def ordered_cycle(n: int, indices: Sequence[int], direction: Literal["forward", "backward"] = "forward") -> Perm:
    """Ordered cycle on a set: ``(i_1 ... i_r)`` forward, ``(i_r ... i_1)`` backward."""
    elems = sorted(indices)
    if not elems:
        raise ValueError("ordered cycle on an empty set")
    if elems[0] < 1 or elems[-1] > n:
        raise ValueError(f"indices out of range for S_{n}")
    if direction == "backward":
        elems.reverse()
    elif direction != "forward":
        raise ValueError(f"unknown direction {direction!r}")
    return cycle(n, elems)


@dataclass(frozen=True)
class NestedIntervalSequence:
    """I_0 = {1..n} ⊃ I_1 ⊃ ... ⊃ I_{n-1}, removing Min or Max at each step."""

    n: int
    choices: tuple[Choice, ...]
    intervals: tuple[tuple[int, ...], ...] = field(init=False)
    y: tuple[int, ...] = field(init=False)
    y_star: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if len(self.choices) != self.n - 1:
            raise ValueError(f"need {self.n - 1} choices, got {len(self.choices)}")
        cur = list(range(1, self.n + 1))
        intervals, ys, stars = [tuple(cur)], [], []
        for ch in self.choices:
            lo, hi = cur[0], cur[-1]
            if ch == "min":
                y, ys_ = lo, hi
            elif ch == "max":
                y, ys_ = hi, lo
            else:
                raise ValueError(f"choice must be 'min' or 'max', got {ch!r}")
            cur = [x for x in cur if x != y]
            intervals.append(tuple(cur))
            ys.append(y)
            stars.append(ys_)
        object.__setattr__(self, "intervals", tuple(intervals))
        object.__setattr__(self, "y", tuple(ys))
        object.__setattr__(self, "y_star", tuple(stars))

    def step_cycle(self, i: int) -> Perm:
        """c_i: the ordered cycle on I_{i-1} with c_i(y_i*) = y_i (1 <= i <= n-1)."""
        direction = "forward" if self.choices[i - 1] == "min" else "backward"
        return ordered_cycle(self.n, self.intervals[i - 1], direction)


@dataclass(frozen=True)
class NestedSequence:
    interval: NestedIntervalSequence
    perms: tuple[Perm, ...]


@dataclass(frozen=True)
class WeaklyNestedSequence:
    interval: NestedIntervalSequence
    sigmas: tuple[Perm, ...]          # sigma_0 .. sigma_{n-1}
    sigma_stars: tuple[Perm, ...]     # sigma_1* .. sigma_{n-1}*
    taus: tuple[Perm, ...]            # tau_1 .. tau_{n-1}

    @property
    def perms(self) -> tuple[Perm, ...]:
        """Flat list sigma_0, sigma_1, sigma_1*, ..., sigma_{n-1}, sigma_{n-1}*."""
        out = [self.sigmas[0]]
        for s, t in zip(self.sigmas[1:], self.sigma_stars):
            out += [s, t]
        return tuple(out)


def nested_from_choices(interval: NestedIntervalSequence) -> NestedSequence:
    perms = [identity(interval.n)]
    for i in range(1, interval.n):
        perms.append(compose(interval.step_cycle(i), perms[-1]))
    return NestedSequence(interval, tuple(perms))


def enumerate_nested(n: int) -> list[NestedSequence]:
    """All nested sequences in S_n; 2^(n-2) of them for n >= 2.

    On a two-element interval both choices give the same transposition, so
    the final choice is pinned to Min.  Order is lexicographic in the
    remaining Min/Max bits with Min first.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return [nested_from_choices(NestedIntervalSequence(1, ()))]
    out = []
    for bits in itertools.product(("min", "max"), repeat=n - 2):
        out.append(nested_from_choices(NestedIntervalSequence(n, tuple(bits) + ("min",))))
    return out


def weakly_nested_from_taus(interval: NestedIntervalSequence, taus: Sequence[Perm]) -> WeaklyNestedSequence:
    n = interval.n
    sig, stars = [identity(n)], []
    for i, tau in enumerate(taus, start=1):
        stars.append(compose(interval.step_cycle(i), sig[-1]))
        sig.append(compose(tuple(tau), sig[-1]))
    return WeaklyNestedSequence(interval, tuple(sig), tuple(stars), tuple(tuple(t) for t in taus))


def is_weakly_nested(perms: Sequence[Perm], interval: NestedIntervalSequence,
                     taus: Sequence[Perm] | None = None) -> bool:
    """Check sigma_0, sigma_1, sigma_1*, ... against every defining constraint.

    ``taus`` may be omitted, in which case tau_i = sigma_i sigma_{i-1}^{-1}.
    """
    n = interval.n
    if len(perms) != 2 * n - 1:
        raise ValueError(f"expected {2 * n - 1} permutations, got {len(perms)}")
    if taus is not None and len(taus) != n - 1:
        raise ValueError(f"expected {n - 1} taus, got {len(taus)}")
    perms = [tuple(p) for p in perms]
    if any(len(p) != n or not is_permutation(p) for p in perms):
        return False
    if perms[0] != identity(n):
        return False
    sigmas = [perms[0]] + perms[1::2]
    stars = perms[2::2]
    for i in range(1, n):
        prev = sigmas[i - 1]
        tau = tuple(taus[i - 1]) if taus is not None else compose(sigmas[i], invert(prev))
        if len(tau) != n or not is_permutation(tau):
            return False
        if compose(tau, prev) != sigmas[i]:
            return False
        if stars[i - 1] != compose(interval.step_cycle(i), prev):
            return False
        if tau[interval.y_star[i - 1] - 1] != interval.y[i - 1]:
            return False
        inside = set(interval.intervals[i - 1])
        if any(tau[j - 1] != j for j in range(1, n + 1) if j not in inside):
            return False
    return True


def canonical_weakly_nested(n: int, variant: Literal["transposition", "selfdual"] = "transposition") -> WeaklyNestedSequence:
    """Weakly nested sequence on y_i = i with a fixed tau family.

    ``transposition``: tau_i = (i, n).
    ``selfdual``: tau_i = (i, n-i, n) for i <= n // 2, degenerating to
    (i, n) when i = n - i; tau_i = (i, n) for the remaining i.
    """
    if n < 2:
        raise ValueError("canonical weakly nested sequences need n >= 2")
    interval = NestedIntervalSequence(n, ("min",) * (n - 1))
    taus = []
    for i in range(1, n):
        if variant == "transposition":
            taus.append(cycle(n, (i, n)))
        elif variant == "selfdual":
            if i <= n // 2 and len({i, n - i, n}) == 3:
                taus.append(cycle(n, (i, n - i, n)))
            else:
                taus.append(cycle(n, (i, n)))
        else:
            raise ValueError(f"unknown variant {variant!r}")
    return weakly_nested_from_taus(interval, taus)


def step_taus(interval: NestedIntervalSequence, i: int) -> Iterator[Perm]:
    """Every tau_i allowed at step i: supported on I_{i-1}, tau(y_i*) = y_i."""
    n = interval.n
    inside = interval.intervals[i - 1]
    for images in itertools.permutations(inside):
        tau = list(range(1, n + 1))
        for a, b in zip(inside, images):
            tau[a - 1] = b
        if tau[interval.y_star[i - 1] - 1] == interval.y[i - 1]:
            yield tuple(tau)


# Self-dual orderings.  A symbol is (index, sign) standing for X_index^sign.

def _selfdual_symbols(n: int) -> list[tuple[int, int]]:
    if n <= 0 or n % 2:
        raise ValueError(f"n must be a positive even integer, got {n}")
    k = n // 2
    return [(i, 1) for i in range(1, k + 1)] + [(i, -1) for i in range(k, 0, -1)]


def _prefix_pair_free(order: Sequence[tuple[int, int]], k: int) -> bool:
    return len({i for i, _ in order[:k]}) == k


def _is_selfdual_shape(order: Sequence[tuple[int, int]]) -> bool:
    n = len(order)
    return all(order[n - 1 - j] == (order[j][0], -order[j][1]) for j in range(n))


def is_symbolically_regular(order: Sequence[tuple[int, int]]) -> bool:
    """Regularity for independent indeterminates X_i.

    Each subset product is the Laurent monomial with exponent vector
    [X_i in I] - [X_i^-1 in I]; a prefix is regular when no other subset of
    the same size has the same exponent vector.
    """
    syms = list(order)
    n = len(syms)

    def exponents(sub):
        e = {}
        for i, s in sub:
            e[i] = e.get(i, 0) + s
        return tuple(sorted((i, v) for i, v in e.items() if v))

    for j in range(1, n + 1):
        target = exponents(syms[:j])
        hits = sum(1 for sub in itertools.combinations(syms, j) if exponents(sub) == target)
        if hits != 1:
            return False
    return True


def selfdual_regular_orderings(n: int) -> list[tuple[tuple[int, int], ...]]:
    """Self-dual reorderings of (X_1..X_k, X_k^-1..X_1^-1) with pair-free first half.

    Self-dual means entry n+1-j is the inverse of entry j, so the reordered
    sequence keeps the shape of the original.  Found by exhaustive search
    over all n! reorderings.
    """
    syms = _selfdual_symbols(n)
    k = n // 2
    return [order for order in itertools.permutations(syms)
            if _is_selfdual_shape(order) and _prefix_pair_free(order, k) and is_symbolically_regular(order)]


def count_selfdual_regular_orderings(n: int) -> int:
    count = len(selfdual_regular_orderings(n))
    k = n // 2
    assert count == 2 ** k * math.factorial(k), (n, count)
    return count


def count_pair_free_orderings(n: int) -> int:
    """All reorderings whose first half is pair-free, with no self-duality imposed.

    Equals 2^k (k!)^2; every such ordering is symbolically regular.
    """
    syms = _selfdual_symbols(n)
    return sum(1 for order in itertools.permutations(syms) if _prefix_pair_free(order, n // 2))


def enumerate_weakly_nested(n: int) -> Iterator[WeaklyNestedSequence]:
    """Every weakly nested sequence in S_n, as (intervals, taus) pairs.

    Distinct pairs can give the same permutations when tau_i(y_i) = y_i*;
    no deduplication is attempted.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        yield weakly_nested_from_taus(NestedIntervalSequence(1, ()), [])
        return
    for bits in itertools.product(("min", "max"), repeat=n - 2):
        interval = NestedIntervalSequence(n, tuple(bits) + ("min",))
        for taus in itertools.product(*(list(step_taus(interval, i)) for i in range(1, n))):
            yield weakly_nested_from_taus(interval, taus)
