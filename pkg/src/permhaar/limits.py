"""Large-N predictions: permuted powers behave as free circular elements of
variance 1, mutually free and free from the unitary itself.

Limits are evaluated with the moment-cumulant formula over non-crossing
partitions.  Cumulant catalogue:

* circular letter ``c``: only kappa_2(c, c*) = kappa_2(c*, c) = 1;
* Haar unitary ``u``: kappa_{2n}(u, u*, ..., u, u*) = kappa_{2n}(u*, u, ...)
  = (-1)^{n-1} Cat_{n-1}, zero on non-alternating arguments;
* any block mixing distinct free families vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .pairings import catalan, enumerate_noncrossing_partitions, enumerate_pair_partitions, pairing_is_noncrossing

MAX_LENGTH = 12

HAAR = "haar"


@dataclass(frozen=True)
class LetterClass:
    """``kind`` is ``'circular'`` or ``'haar'``; circular letters carry a family key."""

    kind: str
    family: object = None
    dagger: bool = False

    def is_adjoint_of(self, other):
        return self.kind == other.kind and self.family == other.family and self.dagger != other.dagger


def circular(family, dagger=False):
    return LetterClass("circular", family, dagger)


def haar(dagger=False):
    return LetterClass(HAAR, None, dagger)


def circular_limit_moment(letters):
    """Number of non-crossing pairings matching only mutually adjoint letters."""
    letters = list(letters)
    if any(x.kind != "circular" for x in letters):
        raise ValueError("circular_limit_moment takes circular letters only")
    count = 0
    for p in enumerate_pair_partitions(len(letters)):
        if all(letters[a - 1].is_adjoint_of(letters[b - 1]) for a, b in p.pairs) and pairing_is_noncrossing(p):
            count += 1
    return count


def _block_cumulant(args):
    kinds = {(x.kind, x.family) for x in args}
    if len(kinds) != 1:
        return 0
    if args[0].kind == "circular":
        return 1 if len(args) == 2 and args[0].is_adjoint_of(args[1]) else 0
    k = len(args)
    if k % 2 or any(args[i].dagger == args[i + 1].dagger for i in range(k - 1)):
        return 0
    h = k // 2 - 1
    return (-1) ** h * catalan(h)


def free_cumulant_limit_moment(letters):
    letters = list(letters)
    if len(letters) > MAX_LENGTH:
        raise ValueError(f"word length {len(letters)} exceeds cap {MAX_LENGTH}")
    total = Fraction(0)
    for part in enumerate_noncrossing_partitions(len(letters)):
        term = 1
        for block in part.blocks:
            term *= _block_cumulant([letters[s - 1] for s in block])
            if term == 0:
                break
        total += term
    return total


def classify(word, families=None):
    """Translate a word into letter classes.

    Identity-permutation letters expand into ``power`` Haar letters.  Other
    letters are circular, one variable per (permutation family, power); by
    default a permutation's family is its reference string, ``families``
    may map reference strings to family ids.
    """
    out = []
    for x in word.letters:
        if x.perm.is_identity:
            out += [haar(x.dagger)] * x.power
            continue
        key = str(x.perm)
        if families is not None:
            if key not in families:
                raise KeyError(f"unclassified permutation reference {key!r}")
            key = families[key]
        out.append(circular((key, x.power), x.dagger))
    return out


def predicted_limit(word, families=None):
    return free_cumulant_limit_moment(classify(word, families))
