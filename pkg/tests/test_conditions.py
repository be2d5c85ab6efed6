import itertools
import json
from fractions import Fraction

import pytest

from permhaar import permutations as pm
from permhaar.conditions import (
    audit_family, growth_verdict, lcm_L, max_statistic, parse_family, slope_verdict, two_free_statistic,
)


def brute_max(sigma):
    """Direct triple loop over (a, b, nu), 1-based."""
    N = sigma.N
    best = 0
    for a, b in itertools.product(range(1, N + 1), repeat=2):
        total = 0
        for alpha in (0, 1):
            total += sum(a in (sigma(nu, b)[alpha], sigma(b, nu)[alpha]) for nu in range(1, N + 1))
        best = max(best, total)
    return Fraction(best, N)


def brute_two_free(ta, tb):
    N = ta.N
    hits = 0
    for i1, i2, i3 in itertools.product(range(1, N + 1), repeat=3):
        hits += ta(i1, i2) in (tb(i1, i3), tb(i3, i2))
    return Fraction(hits, N * N)


BD = list(itertools.product(range(1, 5), repeat=2))


@pytest.mark.parametrize("b,d", BD)
def test_max_partial_transpose(b, d):
    g = pm.partial_transpose(b, d)
    value = max_statistic(g)
    assert value == brute_max(g)
    # closed form of the brute-force count: 2(b + d) - 2 hits at the supremum
    assert value == Fraction(2 * (b + d) - 2, b * d)


@pytest.mark.parametrize("b,d", BD)
def test_two_free_partial_transpose_vs_identity(b, d):
    g = pm.partial_transpose(b, d)
    N = b * d
    value = two_free_statistic(g, pm.identity_map(N))
    if N <= 9:
        assert value == brute_two_free(g, pm.identity_map(N))
    assert value == Fraction(2 * b * b * d - b * d, N * N)


@pytest.mark.parametrize("N", range(2, 9))
def test_identity_values(N):
    idm = pm.identity_map(N)
    assert max_statistic(idm) == 2
    assert two_free_statistic(idm, idm) == 2 - Fraction(1, N)


def test_known_small_values():
    assert max_statistic(pm.partial_transpose(2, 2)) == Fraction(3, 2)
    assert max_statistic(pm.partial_transpose(4, 4)) == Fraction(7, 8)
    assert two_free_statistic(pm.partial_transpose(2, 2), pm.identity_map(4)) == Fraction(3, 4)


def test_mixing_map_values():
    got = [two_free_statistic(pm.mixing_map(n), pm.identity_map(n * n)) for n in (2, 3, 4)]
    assert got == [Fraction(7, 8), Fraction(17, 27), Fraction(31, 64)]
    assert got[0] == brute_two_free(pm.mixing_map(2), pm.identity_map(4))
    assert [max_statistic(pm.mixing_map(n)) for n in (2, 3, 4)] == [1, Fraction(2, 3), Fraction(1, 2)]


def test_two_free_size_mismatch():
    with pytest.raises(pm.PermutationError):
        two_free_statistic(pm.identity_map(2), pm.identity_map(3))


def test_lcm():
    assert lcm_L(4, 8) == 2
    assert lcm_L(6, 4) == 3
    assert lcm_L(5, 25) == 5
    for d, e in itertools.product(range(1, 13), repeat=2):
        assert lcm_L(d, e) == lcm_L(e, d)


def test_verdicts():
    sizes = [2, 3, 4, 6]
    assert slope_verdict(sizes, [Fraction(4, n) for n in sizes])[0] == "decaying"
    assert slope_verdict(sizes, [2, 2, 2, 2])[0] == "not-decaying"
    assert growth_verdict(sizes, sizes)[0] == "diverging"
    assert growth_verdict(sizes, [1, 1, 1, 1])[0] == "bounded"


def test_audit_family_pt():
    rep = audit_family(parse_family("pt:b=n,d=n"), [2, 3, 4, 6])
    s = rep.get("max", "pt:b=n,d=n")
    assert s.values == [Fraction(4 * n - 2, n * n) for n in (2, 3, 4, 6)]
    assert s.verdict == "decaying"
    assert rep.get("max", "pt:b=n,d=n").sizes == [2, 3, 4, 6]
    assert rep.get("2free", "pt:b=n,d=n", "id").verdict == "decaying"


def test_audit_identity_not_decaying():
    rep = audit_family(["id"], [2, 3, 4])
    s = rep.get("max", "id")
    assert s.values == [2, 2, 2] and s.verdict == "not-decaying"


def test_audit_mixing_vs_identity():
    rep = audit_family(parse_family("mix:n=n"), [2, 3, 4])
    assert rep.get("2free", "mix:n=n", "id").verdict == "decaying"


def test_audit_lcm_and_json():
    rep = audit_family(parse_family("pt:b=n,d=n^2;pt:b=n^2,d=n"), [2, 3, 4, 5])
    s = rep.get("lcm_L", "pt:b=n,d=n^2", "pt:b=n^2,d=n")
    assert s.values == [2, 3, 4, 5] and s.verdict == "diverging"
    data = json.loads(json.dumps(rep.to_json()))
    first = next(x for x in data["series"] if x["statistic"] == "max")
    assert first["values"][0] == str(first["values"][0]) and "values_float" in first
    assert all(v >= 0 for x in data["series"] for v in x["values_float"])


def test_audit_rejects_unsorted():
    with pytest.raises(ValueError):
        audit_family(["id"], [3, 2])
