"""Trace words in entry-permuted powers of a unitary, and the index map
from summation indices to matrix-entry coordinates.

A word is a sequence of letters ``[(U^n)^sigma]^theta``.  Text form::

    pow=2,perm=mix:n=4,dag=0;pow=2,perm=mix:n=4,dag=1

where ``perm`` is one of ``id``, ``pt:b=<b>,d=<d>``, ``mix:n=<n>`` or
``file:<path>``.  Integer parameters may be simple expressions in a ladder
variable ``n`` (``n``, ``n^2``, ``2*n``), resolved with :meth:`PermRef.resolve`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import permutations as pm

ONE, STAR = "1", "*"

_FACTOR = re.compile(r"^(n|\d+)(?:\^(\d+))?$")


class WordError(ValueError):
    pass


def eval_expr(text, n=None):
    """Evaluate a product like ``2*n^2``; ``n`` must be bound if used."""
    value = 1
    for factor in str(text).replace(" ", "").split("*"):
        m = _FACTOR.match(factor)
        if not m:
            raise WordError(f"bad size expression {text!r}")
        base, exp = m.group(1), int(m.group(2) or 1)
        if base == "n":
            if n is None:
                raise WordError(f"size expression {text!r} uses n but no ladder value is bound")
            base = n
        value *= int(base) ** exp
    return value


@dataclass(frozen=True)
class PermRef:
    """Reference to an entry permutation; resolved to a map at a given size."""

    kind: str
    params: tuple = ()
    sigma: pm.PermutationMap | None = field(default=None, compare=False)

    @classmethod
    def parse(cls, text):
        text = text.strip()
        if text == "id":
            return cls("id")
        if text == "fam":
            return cls("fam")
        if text.startswith("file:"):
            return cls("file", (("path", text[5:]),))
        kind, _, rest = text.partition(":")
        expected = {"pt": ("b", "d"), "mix": ("n",)}.get(kind)
        if expected is None:
            raise WordError(f"unknown permutation reference {text!r}")
        params = {}
        for item in rest.split(","):
            key, eq, val = item.partition("=")
            if not eq or key not in expected or key in params:
                raise WordError(f"malformed permutation reference {text!r}")
            params[key] = val
        if set(params) != set(expected):
            raise WordError(f"malformed permutation reference {text!r}")
        return cls(kind, tuple((k, params[k]) for k in expected))

    @classmethod
    def of(cls, sigma, name=None):
        """Wrap an explicit map (library use)."""
        return cls("map", (("name", name or sigma.label),), sigma)

    @property
    def is_identity(self):
        return self.kind == "id"

    def __str__(self):
        if self.kind in ("id", "fam"):
            return self.kind
        if self.kind == "file":
            return "file:" + self.params[0][1]
        if self.kind == "map":
            return self.params[0][1]
        return self.kind + ":" + ",".join(f"{k}={v}" for k, v in self.params)

    def bind(self, n):
        """Substitute the ladder variable into the parameters."""
        if self.kind not in ("pt", "mix"):
            return self
        return PermRef(self.kind, tuple((k, str(eval_expr(v, n))) for k, v in self.params))

    def implied_size(self, n=None):
        """Matrix size this reference requires, or None for ``id``."""
        p = dict(self.params)
        if self.kind == "pt":
            return eval_expr(p["b"], n) * eval_expr(p["d"], n)
        if self.kind == "mix":
            return eval_expr(p["n"], n) ** 2
        if self.kind == "map":
            return self.sigma.N
        if self.kind == "file":
            return self.resolve().N
        if self.kind == "fam":
            raise WordError("unsubstituted family placeholder 'fam'")
        return None

    def resolve(self, N=None, n=None):
        p = dict(self.params)
        if self.kind == "id":
            if N is None:
                raise WordError("identity reference needs a size N")
            return pm.identity_map(N)
        if self.kind == "pt":
            sigma = pm.partial_transpose(eval_expr(p["b"], n), eval_expr(p["d"], n))
        elif self.kind == "mix":
            sigma = pm.mixing_map(eval_expr(p["n"], n))
        elif self.kind == "file":
            sigma = pm.from_file(p["path"])
        elif self.kind == "map":
            sigma = self.sigma
        else:
            raise WordError("unsubstituted family placeholder 'fam'")
        if N is not None and sigma.N != N:
            raise WordError(f"permutation size mismatch: {self} acts on N={sigma.N}, word evaluated at N={N}")
        return sigma


@dataclass(frozen=True)
class Letter:
    power: int
    perm: PermRef = PermRef("id")
    dagger: bool = False

    def __post_init__(self):
        if int(self.power) < 1:
            raise WordError("letter power must be >= 1")

    def adjoint(self):
        return Letter(self.power, self.perm, not self.dagger)

    def __str__(self):
        return f"pow={self.power},perm={self.perm},dag={int(self.dagger)}"


@dataclass(frozen=True)
class WordSpec:
    letters: tuple

    def __post_init__(self):
        if not self.letters:
            raise WordError("word must contain at least one letter")
        object.__setattr__(self, "letters", tuple(self.letters))

    @classmethod
    def parse(cls, text):
        return parse_word(text)

    def __str__(self):
        return ";".join(str(x) for x in self.letters)

    def __len__(self):
        return len(self.letters)

    @cached_property
    def offsets(self):
        """Partial sums m(0)=0, m(1), ..., m(r)."""
        out = [0]
        for x in self.letters:
            out.append(out[-1] + x.power)
        return tuple(out)

    @property
    def m(self):
        return self.offsets[-1]

    def segment(self, t):
        """S_t as a 1-based tuple of positions, t in 1..r."""
        return tuple(range(self.offsets[t - 1] + 1, self.offsets[t] + 1))

    @property
    def segments(self):
        return tuple(self.segment(t) for t in range(1, len(self.letters) + 1))

    def adjoint(self):
        return WordSpec(tuple(x.adjoint() for x in reversed(self.letters)))

    def rotate(self, k):
        k %= len(self.letters)
        return WordSpec(self.letters[k:] + self.letters[:k])

    def bind(self, n=None, family=None):
        """Replace ``fam`` placeholders by ``family`` and bind ladder variable ``n``."""
        letters = []
        for x in self.letters:
            ref = x.perm
            if ref.kind == "fam":
                if family is None:
                    raise WordError("word uses 'fam' but no family was given")
                ref = family
            letters.append(Letter(x.power, ref.bind(n) if n is not None else ref, x.dagger))
        return WordSpec(tuple(letters))

    def natural_size(self):
        """The unique N implied by the word's permutations, or None if all are ``id``."""
        sizes = {x.perm.implied_size() for x in self.letters} - {None}
        if len(sizes) > 1:
            raise WordError(f"permutations in word act on different sizes {sorted(sizes)}")
        return sizes.pop() if sizes else None

    def resolve(self, N):
        """Concrete maps for every letter at size N (cached per distinct ref)."""
        cache = {}
        out = []
        for x in self.letters:
            # explicit maps compare by name only, so key them by identity
            key = id(x.perm.sigma) if x.perm.kind == "map" else x.perm
            if key not in cache:
                cache[key] = x.perm.resolve(N)
            out.append(cache[key])
        return out


def parse_word(text):
    letters = []
    for tok in str(text).split(";"):
        tok = tok.strip()
        if not tok:
            raise WordError(f"empty letter in word {text!r}")
        fields = {}
        # perm value may itself contain ',' and '=', so split off pow/dag explicitly
        rest = tok
        for key in ("pow", "dag"):
            m = re.search(rf"(?:^|,){key}=([^,;]*)", rest)
            if not m:
                raise WordError(f"letter {tok!r} missing {key}=")
            fields[key] = m.group(1)
            rest = (rest[: m.start()] + rest[m.end():]).strip(",")
        if not rest.startswith("perm="):
            raise WordError(f"letter {tok!r} missing perm=")
        try:
            power = int(fields["pow"])
        except ValueError:
            raise WordError(f"bad power in {tok!r}") from None
        if fields["dag"] not in ("0", "1"):
            raise WordError(f"dag must be 0 or 1 in {tok!r}")
        letters.append(Letter(power, PermRef.parse(rest[5:]), fields["dag"] == "1"))
    return WordSpec(tuple(letters))


def epsilon_signature(word):
    """(eps_1, ..., eps_m) with eps_s = '*' on segments of daggered letters."""
    return tuple(STAR if x.dagger else ONE for x in word.letters for _ in range(x.power))


def theta_arrays(word, I, N, maps=None):
    """Vectorised index map.

    ``I`` is an integer array of shape (T, m) of 0-based indices i_1..i_m;
    returns 0-based ``(K, L)`` of the same shape, the row/column of the
    unitary entry occupying each position of the expanded product.
    """
    I = np.asarray(I)
    T, m = I.shape
    if m != word.m:
        raise WordError(f"index tuple has length {m}, word has m={word.m}")
    if I.size and (I.min() < 0 or I.max() >= N):
        raise WordError(f"index out of range for N={N}")
    if maps is None:
        maps = word.resolve(N)
    K = np.empty_like(I)
    L = np.empty_like(I)
    off = word.offsets
    for t, (letter, sigma) in enumerate(zip(word.letters, maps)):
        if sigma.N != N:
            raise WordError(f"permutation size mismatch: N={sigma.N} vs {N}")
        s0, e = off[t], off[t + 1] - 1
        i, j = I[:, s0], I[:, (e + 1) % m]
        if not letter.dagger:
            a, b = sigma.fwd0(i, j)
            if s0 == e:
                K[:, s0], L[:, s0] = a, b
                continue
            K[:, s0], L[:, s0] = a, I[:, s0 + 1]
            K[:, s0 + 1:e], L[:, s0 + 1:e] = I[:, s0 + 1:e], I[:, s0 + 2:e + 1]
            K[:, e], L[:, e] = I[:, e], b
        else:
            # [(A)^*]_{i,j} = conj(A_{j,i}): sigma sees the swapped pair
            a, b = sigma.fwd0(j, i)
            if s0 == e:
                K[:, s0], L[:, s0] = a, b
                continue
            K[:, s0], L[:, s0] = I[:, s0 + 1], b
            K[:, s0 + 1:e], L[:, s0 + 1:e] = I[:, s0 + 2:e + 1], I[:, s0 + 1:e]
            K[:, e], L[:, e] = a, I[:, e]
    return K, L


def theta_map(word, idx, N):
    """1-based ((k_1, l_1), ..., (k_m, l_m)) for a 1-based index tuple."""
    I = np.asarray(idx, dtype=np.int64).reshape(1, -1) - 1
    K, L = theta_arrays(word, I, N)
    return tuple((int(k) + 1, int(l) + 1) for k, l in zip(K[0], L[0]))
