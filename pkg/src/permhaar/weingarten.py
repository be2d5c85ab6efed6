"""Unitary Weingarten function.

``Wg_N`` is the inverse, in the group algebra of S_n, of the function
``sigma -> N^{#cycles(sigma)}``.  It is obtained here by solving the Gram
system ``sum_tau N^{#(sigma^-1 tau)} Wg_N(tau) = [sigma = e]`` over the
whole of S_n with fraction-free elimination, then keyed by cycle type.
"""

from __future__ import annotations

import logging
import threading
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np

from .pairings import catalan, join, pairing_cycle_type

log = logging.getLogger(__name__)

MAX_EXACT_ORDER = 5


class WeingartenError(ValueError):
    pass


def cycle_type(perm):
    """Cycle type of a 0-based permutation tuple, largest part first."""
    seen = [False] * len(perm)
    parts = []
    for s in range(len(perm)):
        if not seen[s]:
            k, x = 0, s
            while not seen[x]:
                seen[x] = True
                x = perm[x]
                k += 1
            parts.append(k)
    return tuple(sorted(parts, reverse=True))


def _ncycles(perm):
    return len(cycle_type(perm))


def _compose(a, b):
    return tuple(a[x] for x in b)


def _inverse(a):
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


def symmetric_group(n):
    """S_n as 0-based tuples in lexicographic order; the identity comes first."""
    return list(permutations(range(n)))


def gram_matrix(n, N, max_order=None):
    """Integer matrix G[s][t] = N^{#cycles(s^-1 t)} indexed by ``symmetric_group(n)``."""
    if n < 1:
        raise WeingartenError("n must be >= 1")
    if max_order is not None and n > max_order:
        raise WeingartenError(f"order n={n} exceeds configured maximum {max_order}")
    group = symmetric_group(n)
    inv = [_inverse(s) for s in group]
    return [[N ** _ncycles(_compose(si, t)) for t in group] for si in inv]


def bareiss_solve(A, b):
    """Solve A x = b exactly for an integer matrix A by fraction-free elimination.

    Raises ``ZeroDivisionError`` if A is singular.
    """
    n = len(A)
    M = [list(row) + [rhs] for row, rhs in zip(A, b)]
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if M[r][k] != 0), None)
            if swap is None:
                raise ZeroDivisionError("singular matrix")
            M[k], M[swap] = M[swap], M[k]
        pk = M[k][k]
        rowk = M[k]
        for i in range(k + 1, n):
            rowi = M[i]
            f = rowi[k]
            for j in range(k + 1, n + 1):
                rowi[j] = (rowi[j] * pk - f * rowk[j]) // prev
            rowi[k] = 0
        prev = pk
    if M[n - 1][n - 1] == 0:
        raise ZeroDivisionError("singular matrix")
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(M[i][n])
        for j in range(i + 1, n):
            acc -= M[i][j] * x[j]
        x[i] = acc / M[i][i]
    return x


@dataclass(frozen=True)
class WeingartenTable:
    n: int
    N: int
    values: dict  # cycle type -> Fraction (float when not exact)
    exact: bool = True

    def __getitem__(self, ctype):
        return self.values[tuple(sorted(ctype, reverse=True))]

    def of_permutation(self, perm):
        return self.values[cycle_type(perm)]


_cache = {}
_lock = threading.Lock()


def weingarten_table(n, N, max_exact=MAX_EXACT_ORDER):
    if n < 1:
        raise WeingartenError("n must be >= 1")
    if N < n:
        raise WeingartenError(f"unsupported: Gram matrix is singular for N={N} < n={n}")
    key = (n, N, n <= max_exact)
    with _lock:
        if key in _cache:
            return _cache[key]
    group = symmetric_group(n)
    G = gram_matrix(n, N)
    rhs = [1] + [0] * (len(group) - 1)
    if n <= max_exact:
        try:
            x = bareiss_solve(G, rhs)
        except ZeroDivisionError:
            raise WeingartenError(f"unsupported: singular Gram matrix for n={n}, N={N}") from None
        exact = True
    else:
        warnings.warn(f"Weingarten order n={n} > {max_exact}: using double precision", RuntimeWarning)
        x = np.linalg.solve(np.array(G, dtype=float), np.array(rhs, dtype=float)).tolist()
        exact = False
    values = {}
    for perm, val in zip(group, x):
        values.setdefault(cycle_type(perm), val)
    table = WeingartenTable(n, N, values, exact)
    with _lock:
        _cache[key] = table
    return table


def wg_of_pairings(p, q, N):
    ctype = pairing_cycle_type(p, q)
    return weingarten_table(sum(ctype), N)[ctype]


def wg_leading(p, q, N):
    """Leading large-N term N^{-m+|p v q|} prod (-1)^{|B|/2-1} Cat_{|B|/2-1}."""
    blocks = join(p, q).blocks
    coef = 1
    for block in blocks:
        h = len(block) // 2 - 1
        coef *= (-1) ** h * catalan(h)
    return coef * float(N) ** (len(blocks) - p.m)
