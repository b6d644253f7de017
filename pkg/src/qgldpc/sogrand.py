"""Soft-in/soft-out component decoding via list-based guessing (SOGRAND).

For one check node: query candidate deviations from the hard decision in
ORBGRAND order, keep those whose implied error pattern satisfies the local
syndrome, track the explored probability mass P_g, estimate the mass of
syndrome-consistent patterns never queried as P_Lc = (1 - P_g) * 2^-m_c,
and convert the list into bitwise APP and extrinsic LLRs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import LLR_CLAMP, clamp_llr
from .codes import ComponentCode
from .orbgrand import RankedInput, rank_flip_table


@dataclass(frozen=True)
class SograndParams:
    list_max: int = 4
    query_budget: int | None = None  # default 2^(m_c+4), resolved per component
    confidence_stop: float | None = None  # e.g. 0.999: stop once top mass dominates

    def __post_init__(self):
        if self.list_max < 1:
            raise ValueError("list_max must be >= 1")
        if self.query_budget is not None and self.query_budget < 1:
            raise ValueError("query_budget must be >= 1")

    def resolve_budget(self, n_c: int, m_c: int) -> int:
        budget = self.query_budget if self.query_budget is not None else 1 << (m_c + 4)
        return min(budget, 1 << n_c)


@dataclass
class CandidateList:
    m_c: int
    patterns: list[np.ndarray] = field(default_factory=list)
    masses: list[float] = field(default_factory=list)
    P_g: float = 0.0

    @property
    def P_L(self) -> float:
        return math.fsum(self.masses)

    @property
    def P_Lc(self) -> float:
        return estimate_missing_mass(self.P_g, self.m_c)

    @property
    def P_tot(self) -> float:
        return self.P_L + self.P_Lc


@dataclass(frozen=True)
class SoftOutput:
    L_APP: np.ndarray
    L_E: np.ndarray
    best_pattern: np.ndarray
    found: bool
    queries_used: int = 0
    cand: CandidateList | None = None


def estimate_missing_mass(P_g: float, m_c: int) -> float:
    """Mass of syndrome-consistent patterns outside the explored prefix.

    Consistent patterns are modelled as uniformly spread over the guessing
    order, one in every 2^m_c queries: (1 - P_g) * 2^-m_c.
    """
    if not 0.0 <= P_g <= 1.0 + 1e-12:
        raise ValueError(f"P_g must lie in [0, 1], got {P_g}")
    return (1.0 - min(P_g, 1.0)) * 2.0 ** (-m_c)


def sogrand_decode(component: ComponentCode, L_A, s_local,
                   params: SograndParams = SograndParams()) -> SoftOutput:
    """List-decode one local view under its local syndrome constraint."""
    L_A = clamp_llr(np.asarray(L_A, dtype=float))
    n_c, m_c = component.n_c, component.m_c
    if L_A.shape[0] != n_c:
        raise ValueError(f"soft input length {L_A.shape[0]} != n_c = {n_c}")
    s_local = np.asarray(s_local, dtype=np.uint8) % 2
    if s_local.shape[0] != m_c:
        raise ValueError(f"local syndrome length {s_local.shape[0]} != m_c = {m_c}")

    hard = (L_A < 0).astype(np.uint8)
    ranked = RankedInput.from_llr(L_A)
    budget = params.resolve_budget(n_c, m_c)

    # All candidate deviations up to the budget, in schedule order, over ranks.
    flips = rank_flip_table(n_c, budget)          # (budget, n_c)
    n_queries_avail = flips.shape[0]

    # Residual syndrome once the hard decision is peeled off: the deviation d
    # must satisfy H (hard ^ d) = s, i.e. H d = s ^ H hard.
    H = component.H
    s_res = (s_local + H @ hard) % 2
    H_ranked = H[:, ranked.perm]                  # columns in rank order
    synd = (flips @ H_ranked.T.astype(np.int64)) % 2
    consistent = np.all(synd == s_res, axis=1)

    # Log-mass of each queried deviation under the flip probabilities q.
    log_q = np.log(ranked.q)
    log_1mq = np.log1p(-ranked.q)
    log_masses = flips @ (log_q - log_1mq) + log_1mq.sum()
    masses = np.exp(log_masses)

    hits = np.flatnonzero(consistent)
    cand = CandidateList(m_c=m_c)
    queries_used = n_queries_avail
    if hits.size:
        cum_mass = np.cumsum(masses)
        taken = 0
        stop_at = n_queries_avail - 1
        top_mass = 0.0
        for idx in hits:
            deviation = flips[idx]
            pattern = hard.copy()
            pattern[ranked.perm[deviation == 1]] ^= 1
            assert np.array_equal((H @ pattern) % 2, s_local)
            cand.patterns.append(pattern)
            cand.masses.append(float(masses[idx]))
            top_mass = max(top_mass, float(masses[idx]))
            taken += 1
            if taken >= params.list_max:
                stop_at = int(idx)
                break
            if params.confidence_stop is not None:
                p_g_here = float(cum_mass[idx])
                p_tot_here = cand.P_L + estimate_missing_mass(min(p_g_here, 1.0), m_c)
                if p_tot_here > 0 and top_mass >= params.confidence_stop * p_tot_here:
                    stop_at = int(idx)
                    break
        else:
            stop_at = n_queries_avail - 1
        queries_used = stop_at + 1
        cand.P_g = min(float(cum_mass[stop_at]), 1.0)
    else:
        cand.P_g = min(float(masses.sum()), 1.0)

    out = extract_soft(cand, L_A)
    return SoftOutput(L_APP=out.L_APP, L_E=out.L_E, best_pattern=out.best_pattern,
                      found=out.found, queries_used=queries_used, cand=cand)


def extract_soft(cand: CandidateList, L_A) -> SoftOutput:
    """Bitwise APP/extrinsic LLRs from a finalized candidate list.

    The unexplored mass P_Lc is apportioned to each bit's flip probability
    by the prior q_i, so an empty list passes the prior through unchanged
    and a saturated search (P_g = 1) reproduces exact coset marginals.
    """
    L_A = np.asarray(L_A, dtype=float)
    n_c = L_A.shape[0]
    if not cand.patterns:
        return SoftOutput(L_APP=L_A.copy(), L_E=np.zeros(n_c),
                          best_pattern=(L_A < 0).astype(np.uint8), found=False)

    P_L = cand.P_L
    P_Lc = cand.P_Lc
    P_tot = P_L + P_Lc
    q_prior = np.exp(-np.logaddexp(0.0, L_A))  # P(bit = 1 | L_A)

    flip_mass = np.zeros(n_c)
    for pattern, mass in zip(cand.patterns, cand.masses):
        flip_mass += mass * pattern
    p1 = (flip_mass + P_Lc * q_prior) / P_tot

    with np.errstate(divide="ignore"):
        L_APP = clamp_llr(np.log(np.maximum(P_tot - flip_mass - P_Lc * q_prior, 0.0))
                          - np.log(np.maximum(p1 * P_tot, 0.0)))
    L_E = L_APP - L_A
    best = cand.patterns[int(np.argmax(cand.masses))]
    return SoftOutput(L_APP=L_APP, L_E=L_E, best_pattern=best.copy(), found=True)
