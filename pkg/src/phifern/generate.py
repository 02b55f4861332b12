"""Seeded random instances.

Weak admissibility is arranged by construction: eigenvalue valuations are a
permutation of the weights, so Newton and Hodge numbers agree on the whole
space, and a flag in general position keeps every coordinate subspace below
the Newton line.  Small integer flags often hit special position, so every
draw is still verified and rejected if needed.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .exactlinalg import Matrix, rank
from .phimod import FilteredPhiModule, is_weakly_admissible

log = logging.getLogger(__name__)

MAX_GEN_RANK = 6


class GenerationError(RuntimeError):
    pass


@dataclass
class RejectionStats:
    accepted: int = 0
    rejected: dict = field(default_factory=dict)

    def reject(self, reason: str):
        self.rejected[reason] = self.rejected.get(reason, 0) + 1


def random_invertible(n: int, rng: random.Random, lo: int = -2, hi: int = 2,
                      stats: Optional[RejectionStats] = None, budget: int = 10_000) -> Matrix:
    for _ in range(budget):
        m = Matrix.from_rows([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)], ncols=n)
        if rank(m) == n:
            return m
        if stats is not None:
            stats.reject("singular flag")
    raise GenerationError(f"no invertible {n}x{n} matrix in {budget} draws")


def _units(p: int, lo: int = -9, hi: int = 9) -> list[int]:
    return [u for u in range(lo, hi + 1) if u != 0 and u % p]


def random_weakly_admissible(rank_: int, rng: random.Random, p: int = 5, lo: int = -2, hi: int = 2,
                             accept: Optional[Callable[[FilteredPhiModule], bool]] = None,
                             stats: Optional[RejectionStats] = None, budget: int = 5_000) -> FilteredPhiModule:
    """One weakly admissible module, optionally filtered by ``accept``."""
    stats = stats if stats is not None else RejectionStats()
    units = _units(p)
    for _ in range(budget):
        weights = tuple(sorted(rng.sample(range(0, 2 * rank_ + 1), rank_)))
        vals = list(weights)
        rng.shuffle(vals)
        us = rng.sample(units, rank_)
        eig = tuple(Fraction(u) * Fraction(p) ** v for u, v in zip(us, vals))
        if len(set(eig)) != rank_:
            stats.reject("eigenvalue collision")
            continue
        flag = random_invertible(rank_, rng, lo, hi, stats)
        d = FilteredPhiModule(p, eig, weights, flag)
        if not is_weakly_admissible(d):
            stats.reject("not weakly admissible")
            continue
        if accept is not None and not accept(d):
            stats.reject("filter")
            continue
        stats.accepted += 1
        return d
    log.info("rejections: %s", stats.rejected)
    raise GenerationError(f"rejection budget of {budget} exhausted; rejections: {stats.rejected}")


def corpus(rank_: int, seed: int, count: int, p: int = 5,
           accept: Optional[Callable[[FilteredPhiModule], bool]] = None) -> tuple[list[FilteredPhiModule], RejectionStats]:
    if rank_ < 1 or rank_ > MAX_GEN_RANK:
        raise ValueError(f"rank must be in 1..{MAX_GEN_RANK}")
    rng = random.Random(seed)
    stats = RejectionStats()
    out = [random_weakly_admissible(rank_, rng, p, accept=accept, stats=stats) for _ in range(count)]
    log.info("generated %d modules of rank %d; rejections %s", count, rank_, stats.rejected)
    return out, stats


def random_flag_line(rng: random.Random, lo: int = -20, hi: int = 20) -> tuple[int, int]:
    """Nonzero vector in the plane; may be an eigenline, callers reject those."""
    while True:
        v = (rng.randint(lo, hi), rng.randint(lo, hi))
        if v != (0, 0):
            return v
