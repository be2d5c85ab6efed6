"""Exact finite-N expectation of the normalised trace of a word.

    E tr(word) = sum_{p, q} Wg_N(p, q) * |A(p, q)| / N

where p, q run over pairings joining positions of opposite signature and
A(p, q) is the set of index tuples i in [N]^m whose entry coordinates
(k, l) = theta(i) satisfy k_s = k_{p(s)} and l_s = l_{q(s)} for all s.
Tuple sets are counted by brute force over [N]^m.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .pairings import enumerate_eps_pairings, join
from .weingarten import wg_of_pairings
from .words import epsilon_signature, theta_arrays

DEFAULT_BUDGET = 10**8
CHUNK = 1 << 16


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class SummandReport:
    p: object
    q: object
    wg: Fraction
    tuple_count: int
    value: Fraction


@dataclass(frozen=True)
class MomentResult:
    word: object
    N: int
    total: Fraction
    breakdown: tuple


def _check_budget(N, m, budget):
    if N**m > budget:
        raise BudgetExceeded(f"N^m = {N}^{m} exceeds tuple budget {budget}")


def _index_chunks(N, m):
    total = N**m
    weights = N ** np.arange(m - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, CHUNK):
        lin = np.arange(start, min(start + CHUNK, total), dtype=np.int64)
        yield (lin[:, None] // weights) % N


def _theta_chunks(word, N):
    maps = word.resolve(N)
    for I in _index_chunks(N, word.m):
        yield theta_arrays(word, I, N, maps)


def _pair_mask(X, p):
    mask = np.ones(X.shape[0], dtype=bool)
    for a, b in p.pairs:
        mask &= X[:, a - 1] == X[:, b - 1]
    return mask


def _require_eps(word, *pairings):
    eps = epsilon_signature(word)
    for p in pairings:
        if p.m != word.m:
            raise ValueError(f"pairing on [{p.m}] but word has m={word.m}")
        if any(eps[a - 1] == eps[b - 1] for a, b in p.pairs):
            raise ValueError(f"pairing {p} joins positions of equal signature")


def count_matrix(word, N, ps, qs, budget=DEFAULT_BUDGET):
    """|A(p, q)| for every p in ps, q in qs, as an int64 array."""
    _check_budget(N, word.m, budget)
    counts = np.zeros((len(ps), len(qs)), dtype=np.int64)
    for K, L in _theta_chunks(word, N):
        MK = np.stack([_pair_mask(K, p) for p in ps], axis=1).astype(np.float32)
        ML = np.stack([_pair_mask(L, q) for q in qs], axis=1).astype(np.float32)
        # per-chunk counts are < 2^24, so float32 products are exact
        counts += np.rint(MK.T @ ML).astype(np.int64)
    return counts


def tuple_count(word, p, q, N, budget=DEFAULT_BUDGET):
    _require_eps(word, p, q)
    return int(count_matrix(word, N, [p], [q], budget)[0, 0])


def restricted_tuple_count(word, p, q, S, N, budget=DEFAULT_BUDGET):
    """Number of distinct restrictions to positions S of admissible coordinate tuples."""
    _require_eps(word, p, q)
    _check_budget(N, word.m, budget)
    cols = [s - 1 for s in sorted(set(S))]
    seen = set()
    nonempty = False
    for K, L in _theta_chunks(word, N):
        mask = _pair_mask(K, p) & _pair_mask(L, q)
        if not mask.any():
            continue
        nonempty = True
        if cols:
            proj = np.concatenate([K[mask][:, cols], L[mask][:, cols]], axis=1)
            seen.update(map(bytes, np.unique(proj, axis=0)))
    if not cols:
        return int(nonempty)
    return len(seen)


def d_set(p, q, S, T):
    """{t in T : p(t) in S and q(t) in S}."""
    S = set(S)
    return {t for t in T if p(t) in S and q(t) in S}


def b_set(p, q, S, T):
    """Blocks of p v q contained in S u T but not in S."""
    S, ST = set(S), set(S) | set(T)
    return {B for B in join(p, q).blocks if set(B) <= ST and not set(B) <= S}


def summand(word, p, q, N, budget=DEFAULT_BUDGET):
    count = tuple_count(word, p, q, N, budget)
    wg = wg_of_pairings(p, q, N)
    return SummandReport(p, q, wg, count, wg * count / N)


def exact_moment(word, N, budget=DEFAULT_BUDGET):
    pairs = enumerate_eps_pairings(epsilon_signature(word))
    if not pairs:
        return MomentResult(word, N, Fraction(0), ())
    counts = count_matrix(word, N, pairs, pairs, budget)
    rows = []
    for a, p in enumerate(pairs):
        for b, q in enumerate(pairs):
            wg = wg_of_pairings(p, q, N)
            c = int(counts[a, b])
            rows.append(SummandReport(p, q, wg, c, wg * c / N))
    total = sum((r.value for r in rows), Fraction(0))
    return MomentResult(word, N, total, tuple(rows))
