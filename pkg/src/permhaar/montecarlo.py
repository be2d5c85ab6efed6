"""Monte Carlo estimates of normalised traces of words in Haar unitaries.

Every sample draws from its own counter-based stream (Philox keyed by the
master seed, counter offset by the sample index), so results do not depend
on how samples are split across workers.  Sums are exactly rounded
(``math.fsum``), which makes them independent of reduction order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

MAX_N = 4096


@dataclass(frozen=True)
class Estimate:
    mean: complex
    se: float
    samples: int
    N: int
    seed: int


def sample_stream(seed, index):
    """Generator for sample ``index`` of the run keyed by ``seed``."""
    bitgen = np.random.Philox(key=int(seed) & (2**64 - 1), counter=[0, 0, 0, int(index)])
    return np.random.Generator(bitgen)


def sample_haar(N, stream):
    """Haar unitary from a complex Ginibre matrix, QR-orthonormalised with
    the phases of diag(R) pushed into Q so the factorisation is unique.

    ``stream`` is a Generator or an integer seed.
    """
    rng = stream if isinstance(stream, np.random.Generator) else np.random.default_rng(stream)
    Z = (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))) / math.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def haar_batch(N, seed, start, stop):
    return np.stack([sample_haar(N, sample_stream(seed, k)) for k in range(start, stop)])


def permute_entries(M, sigma):
    """out[..., i, j] = M[..., sigma(i, j)]."""
    if M.shape[-1] != sigma.N or M.shape[-2] != sigma.N:
        raise ValueError(f"size mismatch: matrix {M.shape[-2:]} vs permutation N={sigma.N}")
    R, C = sigma.index_arrays()
    return M[..., R, C]


def build_letter(U, letter, sigma=None):
    """(U^power)^sigma, adjointed if the letter is daggered.  Works on stacks."""
    if sigma is None:
        sigma = letter.perm.resolve(U.shape[-1])
    A = np.linalg.matrix_power(U, letter.power) if U.ndim == 2 else _stack_power(U, letter.power)
    if not sigma.is_identity():
        A = permute_entries(A, sigma)
    if letter.dagger:
        A = np.conj(np.swapaxes(A, -1, -2))
    return np.ascontiguousarray(A)


def _stack_power(U, n):
    A = U
    for _ in range(n - 1):
        A = A @ U
    return A


def _fsum_complex(z):
    z = np.asarray(z)
    return complex(math.fsum(z.real.ravel()), math.fsum(z.imag.ravel()))


def word_traces(word, Us, maps=None):
    """Normalised trace tr(word) for each unitary in the stack ``Us``."""
    N = Us.shape[-1]
    if maps is None:
        maps = word.resolve(N)
    powers = {}
    factors = []
    for letter, sigma in zip(word.letters, maps):
        key = letter.power
        if key not in powers:
            powers[key] = _stack_power(Us, key)
        A = powers[key]
        if not sigma.is_identity():
            A = permute_entries(A, sigma)
        if letter.dagger:
            A = np.conj(np.swapaxes(A, -1, -2))
        # batched matmul only hits BLAS on contiguous operands
        factors.append(np.ascontiguousarray(A))
    prod = factors[0]
    for A in factors[1:-1]:
        prod = prod @ A
    if len(factors) == 1:
        diag = np.diagonal(prod, axis1=-2, axis2=-1)
    else:
        # diag(P @ B)_i = sum_k P_ik B_ki, without forming the last product
        diag = np.einsum("...ik,...ki->...i", prod, factors[-1])
    return np.array([_fsum_complex(row) / N for row in diag])


def _mean_se(values):
    n = len(values)
    mean = _fsum_complex(values) / n
    if n < 2:
        return mean, 0.0
    dev = values - mean
    var_re = math.fsum(dev.real**2) / (n - 1)
    var_im = math.fsum(dev.imag**2) / (n - 1)
    return mean, math.sqrt(max(var_re, var_im) / n)


def _chunks(samples, threads, size=64):
    bounds = list(range(0, samples, size)) + [samples]
    return list(zip(bounds[:-1], bounds[1:]))


def _map_samples(fn, N, samples, seed, threads):
    parts = _chunks(samples, threads)
    work = lambda b: fn(haar_batch(N, seed, *b))
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            out = list(ex.map(work, parts))
    else:
        out = [work(b) for b in parts]
    return np.concatenate(out)


def _validate(N, samples):
    if N < 1 or N > MAX_N:
        raise ValueError(f"N must be in [1, {MAX_N}]")
    if samples < 1:
        raise ValueError("samples must be positive")


def sample_word_traces(word, N, samples, seed, threads=1):
    _validate(N, samples)
    maps = word.resolve(N)
    return _map_samples(lambda Us: word_traces(word, Us, maps), N, samples, seed, threads)


def estimate_moment(word, N, samples, seed=0, threads=1):
    values = sample_word_traces(word, N, samples, seed, threads)
    mean, se = _mean_se(values)
    return Estimate(mean, se, samples, N, seed)


def estimate_kappa2(letter, N, samples, seed=0, threads=1):
    """Plug-in kappa_2(A, A*) = E tr(AA*) - |E tr A|^2 with delta-method SE."""
    _validate(N, samples)
    sigma = letter.perm.resolve(N)

    def per_batch(Us):
        A = build_letter(Us, letter, sigma)
        tr_a = np.array([_fsum_complex(np.diagonal(a)) / N for a in A])
        tr_aa = np.array([math.fsum(np.abs(a.ravel()) ** 2) / N for a in A])
        return np.stack([tr_a, tr_aa], axis=1)

    data = _map_samples(per_batch, N, samples, seed, threads)
    x, y = data[:, 0], data[:, 1].real
    mx = _fsum_complex(x) / samples
    my = math.fsum(y) / samples
    kappa = my - abs(mx) ** 2
    if samples < 2:
        return Estimate(complex(kappa), 0.0, samples, N, seed)
    # influence values of the plug-in estimator
    z = y - 2 * (mx.real * x.real + mx.imag * x.imag)
    zbar = math.fsum(z) / samples
    se = math.sqrt(math.fsum((z - zbar) ** 2) / (samples - 1) / samples)
    return Estimate(complex(kappa), se, samples, N, seed)
