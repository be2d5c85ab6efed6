"""Pair partitions, their join in the partition lattice, and non-crossing
partitions.  Positions are 1-based throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb


@dataclass(frozen=True)
class PairPartition:
    """Perfect matching of [m], stored as a sorted tuple of pairs (a, b), a < b."""

    pairs: tuple

    def __post_init__(self):
        pairs = tuple(sorted(tuple(sorted(p)) for p in self.pairs))
        seen = [x for p in pairs for x in p]
        if sorted(seen) != list(range(1, len(seen) + 1)) or any(a == b for a, b in pairs):
            raise ValueError(f"not a pair partition of [m]: {self.pairs}")
        object.__setattr__(self, "pairs", pairs)
        match = [0] * len(seen)
        for a, b in pairs:
            match[a - 1], match[b - 1] = b, a
        object.__setattr__(self, "_match", tuple(match))

    @property
    def m(self):
        return 2 * len(self.pairs)

    def __call__(self, s):
        return self._match[s - 1]

    @property
    def match(self):
        """1-based involution as a tuple: match[s-1] is the partner of s."""
        return self._match

    def __str__(self):
        return "[" + ",".join(f"({a},{b})" for a, b in self.pairs) + "]"


@dataclass(frozen=True)
class Partition:
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        object.__setattr__(self, "blocks", blocks)

    def __len__(self):
        return len(self.blocks)

    def __str__(self):
        return "[" + ",".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "]"


def enumerate_pair_partitions(m):
    """All (m-1)!! pairings; smallest unmatched element is matched first."""
    if m % 2:
        return []
    out = []

    def rec(free, acc):
        if not free:
            out.append(PairPartition(tuple(acc)))
            return
        a = free[0]
        for k in range(1, len(free)):
            rec(free[1:k] + free[k + 1:], acc + [(a, free[k])])

    rec(list(range(1, m + 1)), [])
    return out


def enumerate_eps_pairings(eps):
    """Pairings of [len(eps)] joining only positions with different signature."""
    eps = tuple(eps)
    m = len(eps)
    if m % 2 or 2 * sum(1 for e in eps if e == eps[0]) != m:
        return []
    out = []

    def rec(free, acc):
        if not free:
            out.append(PairPartition(tuple(acc)))
            return
        a = free[0]
        for k in range(1, len(free)):
            if eps[free[k] - 1] != eps[a - 1]:
                rec(free[1:k] + free[k + 1:], acc + [(a, free[k])])

    rec(list(range(1, m + 1)), [])
    return out


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, x, y):
        x, y = self.find(x), self.find(y)
        if x != y:
            self.parent[max(x, y)] = min(x, y)


def join(p, q):
    """p v q: the finest partition coarser than both pairings."""
    if p.m != q.m:
        raise ValueError("pairings on different sets")
    uf = _UnionFind(p.m)
    for a, b in p.pairs + q.pairs:
        uf.union(a - 1, b - 1)
    blocks = {}
    for s in range(p.m):
        blocks.setdefault(uf.find(s), []).append(s + 1)
    return Partition(tuple(blocks.values()))


def pairing_cycle_type(p, q):
    """Half block sizes of p v q, largest first: the cycle type of the
    permutation whose Weingarten value is attached to (p, q)."""
    return tuple(sorted((len(b) // 2 for b in join(p, q).blocks), reverse=True))


def is_noncrossing(part):
    label = {}
    for k, block in enumerate(part.blocks):
        for s in block:
            label[s] = k
    blocks = part.blocks
    for x in range(len(blocks)):
        for y in range(len(blocks)):
            if x == y:
                continue
            A, B = blocks[x], blocks[y]
            # a1 < b1 < a2 < b2 with a's in A, b's in B
            for a1 in A:
                for a2 in A:
                    if a2 <= a1:
                        continue
                    inner = [b for b in B if a1 < b < a2]
                    if inner and any(b > a2 for b in B):
                        return False
    return True


def pairing_is_noncrossing(p):
    return is_noncrossing(Partition(p.pairs))


@lru_cache(maxsize=None)
def _nc_blocks(m):
    """Non-crossing partitions of [m] as tuples of blocks, by recursion on the block of 1."""
    if m == 0:
        return ((),)
    return tuple(_nc_on(tuple(range(1, m + 1))))


def _nc_on(items):
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    # choose the other members of first's block; gaps between them recurse independently
    n = len(rest)
    for mask in range(1 << n):
        chosen = [rest[k] for k in range(n) if mask >> k & 1]
        cuts = [-1] + [k for k in range(n) if mask >> k & 1] + [n]
        gaps = [rest[cuts[g] + 1:cuts[g + 1]] for g in range(len(cuts) - 1)]
        yield from _combine((first, *chosen), gaps)


def _combine(block, gaps):
    if not gaps:
        yield (block,)
        return
    for head in _nc_on(gaps[0]):
        for tail in _combine(block, gaps[1:]):
            yield head + tail


def enumerate_noncrossing_partitions(m):
    return [Partition(b) for b in _nc_blocks(m)]


def catalan(r):
    if r < 0:
        raise ValueError("r must be >= 0")
    return comb(2 * r, r) // (r + 1)
