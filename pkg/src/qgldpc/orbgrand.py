"""ORBGRAND pattern scheduling: rank-ordered candidate noise patterns.

Positions are ranked by ascending reliability |L_A| (ties by index).
Patterns are sets of flipped ranks, emitted in increasing logistic
weight (sum of flipped ranks); equal-weight patterns are emitted in
ascending lexicographic order of their sorted rank tuples.  This is a
likelihood order exactly when reliabilities are homogeneous and an
approximate one otherwise.

Patterns represent deviations from the bitwise hard decision, so the
empty pattern always comes first and is the a-priori most likely.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


def distinct_part_subsets(n: int):
    """Yield all subsets of {1..n} as ascending tuples.

    Order: total sum ascending, then lexicographic on the tuples.
    Implemented as enumeration of integer partitions into distinct parts,
    by successively larger targets.
    """
    max_weight = n * (n + 1) // 2

    def parts(total: int, lo: int):
        for a in range(lo, n + 1):
            if a > total:
                break
            rem = total - a
            if rem == 0:
                yield (a,)
                continue
            # parts above a can contribute at most sum(a+1..n)
            if rem > (n * (n + 1) - a * (a + 1)) // 2:
                continue
            for rest in parts(rem, a + 1):
                yield (a, *rest)

    yield ()
    for weight in range(1, max_weight + 1):
        yield from parts(weight, 1)


@lru_cache(maxsize=32)
def rank_flip_table(n: int, count: int) -> np.ndarray:
    """First ``count`` patterns as a (count, n) 0/1 array over ranks 1..n.

    The schedule depends only on n, so blocks are cached and shared by all
    component decodes of the same length.
    """
    count = min(count, 1 << n)
    table = np.zeros((count, n), dtype=np.uint8)
    for row, ranks in zip(range(count), distinct_part_subsets(n)):
        for r in ranks:
            table[row, r - 1] = 1
    return table


@dataclass(frozen=True)
class RankedInput:
    """Reliability ranking of a soft-input vector."""

    perm: np.ndarray      # perm[r] = original position of rank r (0-based)
    q: np.ndarray         # deviation flip probability per rank, ascending reliability

    @classmethod
    def from_llr(cls, L_A) -> "RankedInput":
        L_A = np.asarray(L_A, dtype=float)
        abs_llr = np.abs(L_A)
        perm = np.lexsort((np.arange(L_A.shape[0]), abs_llr))
        # q = 1 / (1 + exp(|L|)), computed stably
        q = np.exp(-np.logaddexp(0.0, abs_llr[perm]))
        return cls(perm=perm, q=q)


@dataclass(frozen=True)
class PatternQuery:
    flipped_ranks: tuple[int, ...]  # 1-based ranks
    logistic_weight: int
    pattern: np.ndarray             # 0/1 deviation in original position order


class PatternGenerator:
    """Streaming generator of ORBGRAND queries for one soft input."""

    def __init__(self, L_A):
        L_A = np.asarray(L_A, dtype=float)
        if not np.all(np.isfinite(L_A)):
            raise ValueError("soft input must be finite (clamp upstream)")
        self.n = L_A.shape[0]
        self.ranked = RankedInput.from_llr(L_A)
        self._stream = distinct_part_subsets(self.n)

    def __iter__(self):
        return self

    def __next__(self) -> PatternQuery:
        ranks = next(self._stream)  # raises StopIteration when exhausted
        pattern = np.zeros(self.n, dtype=np.uint8)
        for r in ranks:
            pattern[self.ranked.perm[r - 1]] = 1
        return PatternQuery(flipped_ranks=ranks,
                            logistic_weight=sum(ranks),
                            pattern=pattern)


def make_generator(L_A) -> PatternGenerator:
    return PatternGenerator(L_A)


def next_pattern(gen: PatternGenerator) -> PatternQuery | None:
    """Next query, or None when the pattern space is exhausted."""
    return next(gen, None)


def pattern_probability(q, w) -> float:
    """prod q_i^{w_i} (1-q_i)^{1-w_i}, evaluated in the log domain."""
    q = np.asarray(q, dtype=float)
    w = np.asarray(w, dtype=np.uint8)
    if q.shape != w.shape:
        raise ValueError("q and w must have equal length")
    if np.any((q <= 0.0) | (q >= 1.0)):
        raise ValueError("flip probabilities must lie in (0, 1)")
    log_p = np.where(w == 1, np.log(q), np.log1p(-q)).sum()
    return float(np.exp(log_p))
