"""Entry permutations of N x N matrices.

A permutation ``sigma`` of the index grid [N]^2 acts on a matrix by
``A^sigma[i, j] = A[sigma(i, j)]``.  Public evaluation is 1-based; the
vectorised evaluators used internally take and return 0-based arrays.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

DENSE_CAP = 4096  # max N^2 for stored forward/inverse tables


class PermutationError(ValueError):
    pass


class PermutationMap:
    """Bijection of [N]^2 with forward and inverse evaluation.

    ``fwd`` and ``inv`` are vectorised callables mapping 0-based index
    arrays ``(I, J)`` to ``(I', J')``.  Built-in families are defined in
    closed form, so no table is ever stored for them; use :meth:`table`
    to materialise one.
    """

    def __init__(self, N, fwd, inv, label="map"):
        if N < 1:
            raise PermutationError("N must be >= 1")
        self.N = int(N)
        self._fwd = fwd
        self._inv = inv
        self.label = label

    def __repr__(self):
        return f"PermutationMap({self.label}, N={self.N})"

    def _check(self, i, j):
        if not (1 <= i <= self.N and 1 <= j <= self.N):
            raise PermutationError(f"index ({i},{j}) out of range for N={self.N}")

    def forward(self, i, j):
        self._check(i, j)
        a, b = self._fwd(np.array([i - 1]), np.array([j - 1]))
        return int(a[0]) + 1, int(b[0]) + 1

    def inverse(self, i, j):
        self._check(i, j)
        a, b = self._inv(np.array([i - 1]), np.array([j - 1]))
        return int(a[0]) + 1, int(b[0]) + 1

    __call__ = forward

    def fwd0(self, I, J):
        return self._fwd(np.asarray(I), np.asarray(J))

    def inv0(self, I, J):
        return self._inv(np.asarray(I), np.asarray(J))

    def index_arrays(self):
        """0-based (R, C) with ``R[i, j], C[i, j] = sigma(i, j)``."""
        I, J = np.indices((self.N, self.N))
        return self._fwd(I, J)

    def table(self):
        """Dense 1-based rows ``(i, j, i2, j2)`` in row-major order of (i, j)."""
        R, C = self.index_arrays()
        I, J = np.indices((self.N, self.N))
        return np.stack([I.ravel(), J.ravel(), R.ravel(), C.ravel()], axis=1) + 1

    def is_identity(self):
        I, J = np.indices((self.N, self.N))
        R, C = self._fwd(I, J)
        return bool(np.array_equal(R, I) and np.array_equal(C, J))

    def __eq__(self, other):
        if not isinstance(other, PermutationMap) or other.N != self.N:
            return NotImplemented
        a, b = self.index_arrays()
        c, d = other.index_arrays()
        return bool(np.array_equal(a, c) and np.array_equal(b, d))

    __hash__ = None


def identity_map(N):
    f = lambda I, J: (I, J)
    return PermutationMap(N, f, f, label="id")


def _block_split(I, d):
    return I // d, I % d


def partial_transpose(b, d):
    """Gamma_{b,d}: transpose each d x d block of a (b*d) x (b*d) matrix in place."""
    if b < 1 or d < 1:
        raise PermutationError("b and d must be >= 1")

    def f(I, J):
        a1, b1 = _block_split(I, d)
        a2, b2 = _block_split(J, d)
        return a1 * d + b2, a2 * d + b1

    return PermutationMap(b * d, f, f, label=f"pt:b={b},d={d}")


def mixing_map(n):
    """mu_n on [n^2]^2: (a1, b1, a2, b2) -> (a1, a2, b1, b2) in tensor coordinates."""
    if n < 1:
        raise PermutationError("n must be >= 1")

    def f(I, J):
        a1, b1 = _block_split(I, n)
        a2, b2 = _block_split(J, n)
        return a1 * n + a2, b1 * n + b2

    return PermutationMap(n * n, f, f, label=f"mix:n={n}")


def from_table(N, rows, label="table"):
    """Build a map from 1-based rows ``(i, j, i2, j2)``; validates bijectivity."""
    if N * N > DENSE_CAP:
        raise PermutationError(f"N^2={N * N} exceeds dense storage cap {DENSE_CAP}")
    fwd = -np.ones((N, N, 2), dtype=np.int64)
    hit = np.zeros((N, N), dtype=bool)
    for row in rows:
        i, j, i2, j2 = (int(x) for x in row)
        for x in (i, j, i2, j2):
            if not 1 <= x <= N:
                raise PermutationError(f"index {x} out of range for N={N}")
        if fwd[i - 1, j - 1, 0] >= 0:
            raise PermutationError(f"duplicate source ({i},{j})")
        if hit[i2 - 1, j2 - 1]:
            raise PermutationError("not a bijection")
        fwd[i - 1, j - 1] = (i2 - 1, j2 - 1)
        hit[i2 - 1, j2 - 1] = True
    if not hit.all():
        raise PermutationError("incomplete permutation")
    inv = np.empty_like(fwd)
    I, J = np.indices((N, N))
    inv[fwd[..., 0], fwd[..., 1], 0] = I
    inv[fwd[..., 0], fwd[..., 1], 1] = J
    return PermutationMap(
        N,
        lambda A, B: (fwd[A, B, 0], fwd[A, B, 1]),
        lambda A, B: (inv[A, B, 0], inv[A, B, 1]),
        label=label,
    )


def from_file(path):
    """Read a CSV map: one ``i,j,i2,j2`` per line, ``#`` starts a comment."""
    rows = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 4:
            raise PermutationError(f"malformed line {lineno}: {line!r}")
        try:
            rows.append(tuple(int(p) for p in parts))
        except ValueError:
            raise PermutationError(f"malformed line {lineno}: {line!r}") from None
    N = int(round(len(rows) ** 0.5))
    if N * N != len(rows):
        # a missing or extra line leaves the grid size ambiguous
        N = max((max(r) for r in rows), default=0)
        if N * N > len(rows):
            raise PermutationError("incomplete permutation")
        raise PermutationError("not a bijection")
    return from_table(N, rows, label=f"file:{path}")


def to_file(sigma, path):
    lines = [f"# entry permutation, N={sigma.N}"]
    lines += [",".join(str(int(x)) for x in row) for row in sigma.table()]
    Path(path).write_text("\n".join(lines) + "\n")


def compose(a, b):
    """a o b."""
    if a.N != b.N:
        raise PermutationError(f"size mismatch: {a.N} vs {b.N}")

    def f(I, J):
        return a._fwd(*b._fwd(I, J))

    def g(I, J):
        return b._inv(*a._inv(I, J))

    return PermutationMap(a.N, f, g, label=f"({a.label})o({b.label})")


def invert(a):
    return PermutationMap(a.N, a._inv, a._fwd, label=f"({a.label})^-1")
