"""Finite-N statistics for the sufficient conditions on permutation families.

* ``max_statistic``: (1/N) sup_{a,b} sum_{alpha=1,2}
  #{nu : a in {pi_alpha sigma(nu, b), pi_alpha sigma(b, nu)}}.
  Must tend to 0 for the permuted powers to be asymptotically circular.
* ``two_free_statistic``: (1/N^2) #{(i1, i2, i3) : tau_a(i1, i2) in
  {tau_b(i1, i3), tau_b(i3, i2)}}.  Must tend to 0 for two families to be
  asymptotically free.
* ``lcm_L``: lcm(d, d') / min(d, d') for partial transposes of equal size.

All counts are exact; statistics are returned as ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd

import numpy as np

from . import permutations as pm
from .words import PermRef, eval_expr


def max_statistic(sigma):
    N = sigma.N
    nu = np.arange(N)
    best = 0
    for b in range(N):
        fixed = np.full(N, b)
        r1, c1 = sigma.fwd0(nu, fixed)  # sigma(nu, b)
        r2, c2 = sigma.fwd0(fixed, nu)  # sigma(b, nu)
        total = np.zeros(N, dtype=np.int64)
        for x, y in ((r1, r2), (c1, c2)):
            # each nu contributes once to every distinct value in {x, y}
            total += np.bincount(x, minlength=N) + np.bincount(y[y != x], minlength=N)
        best = max(best, int(total.max()))
    return Fraction(best, N)


def two_free_count(tau_a, tau_b):
    """#{(i1, i2, i3) in [N]^3 : tau_a(i1, i2) in {tau_b(i1, i3), tau_b(i3, i2)}}.

    tau_b is a bijection, so for fixed (i1, i2) each alternative has at most
    one solution i3, read off from tau_b^{-1}(tau_a(i1, i2)).  Both hold for
    the same i3 only when i1 = i2 = i3.
    """
    if tau_a.N != tau_b.N:
        raise pm.PermutationError(f"size mismatch: {tau_a.N} vs {tau_b.N}")
    N = tau_a.N
    I1, I2 = np.indices((N, N))
    x, y = tau_b.inv0(*tau_a.fwd0(I1, I2))
    first = x == I1  # tau_b(i1, y) = tau_a(i1, i2)
    second = y == I2  # tau_b(x, i2) = tau_a(i1, i2)
    both = first & second & (x == y)
    return int(first.sum() + second.sum() - both.sum())


def two_free_statistic(tau_a, tau_b):
    return Fraction(two_free_count(tau_a, tau_b), tau_a.N**2)


def lcm_L(d, d_prime):
    if d < 1 or d_prime < 1:
        raise ValueError("d and d' must be >= 1")
    lcm = d * d_prime // gcd(d, d_prime)
    return lcm // min(d, d_prime)


def slope_verdict(sizes, values, threshold=-0.2):
    """'decaying' iff the log-log slope is below ``threshold`` and the last
    value is below the first."""
    vals = [float(v) for v in values]
    if len(vals) < 2:
        return "inconclusive", float("nan")
    if vals[-1] == 0 and vals[0] > 0:
        return "decaying", float("-inf")
    if any(v <= 0 for v in vals):
        return "inconclusive", float("nan")
    slope = float(np.polyfit(np.log(sizes), np.log(vals), 1)[0])
    ok = slope < threshold and vals[-1] < vals[0]
    return ("decaying" if ok else "not-decaying"), slope


def growth_verdict(sizes, values, threshold=0.2):
    vals = [float(v) for v in values]
    if len(vals) < 2 or any(v <= 0 for v in vals):
        return "inconclusive", float("nan")
    slope = float(np.polyfit(np.log(sizes), np.log(vals), 1)[0])
    ok = slope > threshold and vals[-1] > vals[0]
    return ("diverging" if ok else "bounded"), slope


@dataclass
class Series:
    statistic: str
    labels: tuple
    sizes: list
    values: list
    verdict: str = "inconclusive"
    slope: float = float("nan")

    def to_json(self):
        return {
            "statistic": self.statistic,
            "members": list(self.labels),
            "sizes": list(self.sizes),
            "values": [str(Fraction(v)) if isinstance(v, (int, Fraction)) else v for v in self.values],
            "values_float": [float(v) for v in self.values],
            "verdict": self.verdict,
            "slope": None if self.slope != self.slope else self.slope,
        }


@dataclass
class ConditionReport:
    family: tuple
    sizes: list
    series: list = field(default_factory=list)

    def get(self, statistic, *labels):
        for s in self.series:
            if s.statistic == statistic and s.labels == tuple(labels):
                return s
        raise KeyError((statistic, labels))

    def to_json(self):
        return {"family": list(self.family), "sizes": list(self.sizes), "series": [s.to_json() for s in self.series]}


class FamilyMember:
    """A permutation family indexed by a ladder value n, from a ref such as
    ``pt:b=n,d=n^2``, ``mix:n=n`` or ``id`` (identity on [n]^2, or
    ``id:N=<expr>``)."""

    def __init__(self, text):
        self.label = text.strip()
        if self.label.startswith("id"):
            _, _, size = self.label.partition(":N=")
            self.size_expr = size or "n"
            self.ref = PermRef("id")
        else:
            self.ref = PermRef.parse(self.label)
            self.size_expr = None

    @property
    def is_identity(self):
        return self.ref.is_identity

    def at(self, n):
        if self.is_identity:
            return pm.identity_map(eval_expr(self.size_expr, n))
        return self.ref.resolve(n=n)

    def pt_params(self, n):
        if self.ref.kind != "pt":
            return None
        p = dict(self.ref.params)
        return eval_expr(p["b"], n), eval_expr(p["d"], n)


def parse_family(text):
    return [FamilyMember(t) for t in text.split(";") if t.strip()]


def audit_family(family, sizes):
    """Evaluate the conditions across a ladder of sizes.

    ``family`` is a list of :class:`FamilyMember` (or ref strings).  Emits
    ``max`` for each member, ``2free`` for each ordered pair of distinct
    members and for each member against the identity, and ``lcm_L`` for
    pairs of partial transposes of equal size.
    """
    family = [f if isinstance(f, FamilyMember) else FamilyMember(f) for f in family]
    sizes = list(sizes)
    if sorted(set(sizes)) != sizes:
        raise ValueError("sizes must be strictly increasing")
    members = [(f.label, [f.at(n) for n in sizes]) for f in family]
    report = ConditionReport(tuple(f.label for f in family), sizes)

    for label, maps in members:
        report.series.append(Series("max", (label,), sizes, [max_statistic(s) for s in maps]))

    pairs = []
    for (la, ma), (lb, mb) in combinations(members, 2):
        pairs += [(la, ma, lb, mb), (lb, mb, la, ma)]
    for label, maps in members:
        if not any(f.is_identity for f in family if f.label == label):
            pairs.append((label, maps, "id", [pm.identity_map(s.N) for s in maps]))
    for la, ma, lb, mb in pairs:
        if any(a.N != b.N for a, b in zip(ma, mb)):
            continue
        vals = [two_free_statistic(a, b) for a, b in zip(ma, mb)]
        report.series.append(Series("2free", (la, lb), sizes, vals))

    for fa, fb in combinations(family, 2):
        if fa.ref.kind == "pt" and fb.ref.kind == "pt":
            vals = []
            for n in sizes:
                (b1, d1), (b2, d2) = fa.pt_params(n), fb.pt_params(n)
                if b1 * d1 != b2 * d2:
                    break
                vals.append(lcm_L(d1, d2))
            else:
                s = Series("lcm_L", (fa.label, fb.label), sizes, vals)
                s.verdict, s.slope = growth_verdict(sizes, vals)
                report.series.append(s)

    for s in report.series:
        if s.statistic != "lcm_L":
            s.verdict, s.slope = slope_verdict(sizes, s.values)
    return report
