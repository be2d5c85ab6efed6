import random
import warnings
from fractions import Fraction

import pytest

from permhaar.pairings import PairPartition, enumerate_eps_pairings, join
from permhaar.weingarten import (
    WeingartenError, bareiss_solve, cycle_type, gram_matrix, symmetric_group,
    weingarten_table, wg_leading, wg_of_pairings,
)


def P(*pairs):
    return PairPartition(pairs)


def test_gram_small():
    assert gram_matrix(1, 5) == [[5]]
    assert gram_matrix(2, 3) == [[9, 3], [3, 9]]
    G = gram_matrix(3, 4)
    assert all(G[i][j] == G[j][i] for i in range(6) for j in range(6))


@pytest.mark.parametrize("N", [1, 2, 3, 7, 10])
def test_order_one(N):
    assert weingarten_table(1, N).values == {(1,): Fraction(1, N)}


@pytest.mark.parametrize("N", [2, 3, 7])
def test_order_two_closed_form(N):
    t = weingarten_table(2, N)
    assert t[(1, 1)] == Fraction(1, N * N - 1)
    assert t[(2,)] == Fraction(-1, N * (N * N - 1))


def test_order_three_closed_form():
    # textbook values for S_3, checked at several N
    for N in (3, 4, 9):
        t = weingarten_table(3, N)
        d = N * (N * N - 1) * (N * N - 4)
        assert t[(1, 1, 1)] == Fraction(N * N - 2, d)
        assert t[(2, 1)] == Fraction(-1, (N * N - 1) * (N * N - 4))
        assert t[(3,)] == Fraction(2, d)


def compose(a, b):
    return tuple(a[b[i]] for i in range(len(a)))


def inverse(a):
    out = [0] * len(a)
    for i, x in enumerate(a):
        out[x] = i
    return tuple(out)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_gram_inverse_identity(n):
    group = symmetric_group(n)
    for N in sorted({n, n + 1, 5}):
        t = weingarten_table(n, N)
        for s in group:
            si = inverse(s)
            total = sum(N ** len(cycle_type(compose(si, tau))) * t.of_permutation(tau) for tau in group)
            assert total == (1 if s == group[0] else 0)


def test_class_function():
    rng = random.Random(3)
    for n in (2, 3, 4):
        t = weingarten_table(n, n + 2)
        group = symmetric_group(n)
        for _ in range(20):
            s, r = rng.choice(group), rng.choice(group)
            conj = compose(compose(r, s), inverse(r))
            assert cycle_type(conj) == cycle_type(s)
            assert t.of_permutation(conj) == t.of_permutation(s)


def test_unsupported_when_singular():
    with pytest.raises(WeingartenError, match="unsupported"):
        weingarten_table(3, 2)


def test_float_fallback_warns():
    with pytest.warns(RuntimeWarning):
        t = weingarten_table(3, 5, max_exact=2)
    assert not t.exact
    assert t[(1, 1, 1)] == pytest.approx(float(weingarten_table(3, 5)[(1, 1, 1)]), rel=1e-12)


def test_bareiss():
    assert bareiss_solve([[2, 1], [1, 3]], [1, 0]) == [Fraction(3, 5), Fraction(-1, 5)]
    assert bareiss_solve([[0, 1], [1, 0]], [2, 3]) == [3, 2]
    with pytest.raises(ZeroDivisionError):
        bareiss_solve([[1, 2], [2, 4]], [1, 1])


def test_pairing_form():
    assert wg_of_pairings(P((1, 2)), P((1, 2)), 6) == Fraction(1, 6)
    assert wg_of_pairings(P((1, 2), (3, 4)), P((1, 4), (2, 3)), 3) == Fraction(-1, 24)
    assert wg_of_pairings(P((1, 2), (3, 4)), P((1, 2), (3, 4)), 3) == Fraction(1, 8)


def test_leading_term():
    N = 10.0
    p = P((1, 2), (3, 4), (5, 6))
    assert wg_leading(p, p, N) == N**-3
    assert wg_leading(P((1, 2), (3, 4)), P((1, 4), (2, 3)), N) == -(N**-3)
    assert wg_leading(p, P((1, 6), (2, 3), (4, 5)), N) == 2 * N**-5


def test_leading_term_remainder_bounded():
    eps = ("1", "*") * 3
    pairs = enumerate_eps_pairings(eps)
    for p in pairs:
        for q in pairs:
            scale = lambda N: float(N) ** (-6 + len(join(p, q).blocks) - 2)
            ratios = [abs(float(wg_of_pairings(p, q, N)) - wg_leading(p, q, N)) / scale(N) for N in (8, 16, 32, 64)]
            assert max(ratios) < 10 * (ratios[0] + 1)
            assert ratios[-1] <= ratios[0] * 1.5 + 1e-9
