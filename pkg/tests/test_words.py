import itertools

import pytest

from permhaar.words import (
    Letter, PermRef, WordError, WordSpec, epsilon_signature, eval_expr, parse_word, theta_map,
)


def U(power=1, perm="id", dag=False):
    return Letter(power, PermRef.parse(perm), dag)


def test_epsilon_examples():
    assert epsilon_signature(WordSpec((U(), U(dag=True)))) == ("1", "*")
    assert epsilon_signature(WordSpec((U(2, "pt:b=2,d=2"),))) == ("1", "1")
    assert epsilon_signature(WordSpec((U(2, "pt:b=2,d=2", True), U()))) == ("*", "*", "1")


def test_segments_and_offsets():
    w = WordSpec((U(2), U(1, dag=True), U(3)))
    assert w.offsets == (0, 2, 3, 6)
    assert w.segments == ((1, 2), (3,), (4, 5, 6))
    eps = epsilon_signature(w)
    for t, seg in enumerate(w.segments):
        assert {eps[s - 1] for s in seg} == {"*" if w.letters[t].dagger else "1"}


def test_theta_u_ustar():
    w = WordSpec((U(), U(dag=True)))
    for i1, i2 in itertools.product(range(1, 4), repeat=2):
        assert theta_map(w, (i1, i2), 3) == ((i1, i2), (i1, i2))


def test_theta_single_letter_wraps():
    w = WordSpec((U(),))
    assert theta_map(w, (2,), 3) == ((2, 2),)


def test_theta_partial_transpose_power_two():
    w = WordSpec((U(2, "pt:b=2,d=2"),))
    # Gamma_{2,2}(1,1) = (1,1)
    assert theta_map(w, (1, 3), 4) == ((1, 3), (3, 1))


def test_theta_chaining_without_permutations():
    w = WordSpec((U(2), U(1), U(3)))
    for idx in itertools.product(range(1, 3), repeat=w.m):
        kl = theta_map(w, idx, 2)
        for s in range(w.m):
            assert kl[s][1] == kl[(s + 1) % w.m][0]


@pytest.mark.parametrize(
    "text",
    [
        "pow=2,perm=mix:n=2,dag=1;pow=1,perm=id,dag=0",
        "pow=1,perm=pt:b=2,d=3,dag=0;pow=1,perm=pt:b=2,d=3,dag=1",
    ],
)
def test_theta_injective(text):
    w = parse_word(text)
    N = w.natural_size()
    images = {theta_map(w, idx, N) for idx in itertools.product(range(1, N + 1), repeat=w.m)}
    assert len(images) == N**w.m


def test_theta_errors():
    w = WordSpec((U(1, "pt:b=2,d=2"),))
    with pytest.raises(WordError):
        theta_map(w, (1,), 3)  # permutation acts on N=4
    with pytest.raises(WordError):
        theta_map(WordSpec((U(),)), (5,), 4)


def test_parse_roundtrip():
    text = "pow=2,perm=mix:n=4,dag=0;pow=1,perm=pt:b=2,d=8,dag=1;pow=1,perm=id,dag=0"
    w = parse_word(text)
    assert str(w) == text
    assert w.natural_size() == 16
    assert [x.power for x in w.letters] == [2, 1, 1]


@pytest.mark.parametrize(
    "bad",
    ["", "pow=1,perm=id", "pow=0,perm=id,dag=0", "pow=1,perm=zz,dag=0", "pow=1,perm=pt:b=2,dag=0", "pow=1,perm=id,dag=2"],
)
def test_parse_rejects(bad):
    with pytest.raises(WordError):
        parse_word(bad)


def test_mixed_sizes_rejected():
    with pytest.raises(WordError):
        parse_word("pow=1,perm=pt:b=2,d=2,dag=0;pow=1,perm=mix:n=3,dag=1").natural_size()


def test_size_expressions():
    assert eval_expr("n^2", 3) == 9
    assert eval_expr("2*n", 5) == 10
    assert eval_expr("7") == 7
    with pytest.raises(WordError):
        eval_expr("n")
    w = parse_word("pow=2,perm=fam,dag=0;pow=2,perm=fam,dag=1").bind(4, PermRef.parse("mix:n=n"))
    assert w.natural_size() == 16


def test_adjoint_and_rotate():
    w = parse_word("pow=2,perm=id,dag=0;pow=1,perm=pt:b=2,d=2,dag=1")
    assert str(w.adjoint()) == "pow=1,perm=pt:b=2,d=2,dag=0;pow=2,perm=id,dag=1"
    assert w.rotate(1).letters == w.letters[::-1]


def test_resolve_keeps_distinct_explicit_maps():
    from permhaar import permutations as pm

    a = pm.from_table(2, [(1, 1, 1, 2), (1, 2, 1, 1), (2, 1, 2, 1), (2, 2, 2, 2)], label="m")
    b = pm.from_table(2, [(1, 1, 1, 1), (1, 2, 1, 2), (2, 1, 2, 2), (2, 2, 2, 1)], label="m")
    w = WordSpec((Letter(1, PermRef.of(a)), Letter(1, PermRef.of(b), True)))
    ra, rb = w.resolve(2)
    assert ra is a and rb is b
