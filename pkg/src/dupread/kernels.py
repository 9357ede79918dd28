"""Vectorized kernels over blocks of sequences (rows of a uint8 array).

Sequences of Z_q^n are enumerated in lexicographic order; row r of the block
starting at ``start`` is the base-q expansion of ``start + r``. Every kernel
here has a scalar counterpart elsewhere in the package that the test suite
checks it against.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import SizeGuardError

DEFAULT_SIZE_GUARD = 1 << 24
DEFAULT_BLOCK = 1 << 16
# padding value for packed nucleus keys; real entries satisfy |d| <= ell
SENTINEL = 127


def size_guard(override=None) -> int:
    if override is not None:
        return int(override)
    env = os.environ.get("DUPREAD_SIZE_GUARD")
    return int(env) if env else DEFAULT_SIZE_GUARD


def check_size(q: int, n: int, guard=None) -> int:
    total = q**n
    limit = size_guard(guard)
    if total > limit:
        raise SizeGuardError(f"{q}^{n} = {total} sequences exceeds the size guard {limit}")
    return total


def sequences(q: int, n: int, start: int = 0, stop=None) -> np.ndarray:
    if stop is None:
        stop = q**n
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((len(idx), n), dtype=np.uint8)
    for pos in range(n - 1, -1, -1):
        out[:, pos] = idx % q
        idx //= q
    return out


def blocks(q: int, n: int, block: int = DEFAULT_BLOCK, guard=None):
    """Yield ``(start, rows)`` covering Z_q^n in lexicographic order."""
    total = check_size(q, n, guard)
    for start in range(0, total, block):
        yield start, sequences(q, n, start, min(total, start + block))


def seq_index(x, q: int) -> int:
    r = 0
    for a in x:
        r = r * q + int(a)
    return r


def entry_dtype(ell: int):
    return np.int8 if ell < SENTINEL else np.int16


def read_vectors(X: np.ndarray, q: int, ell: int) -> np.ndarray:
    """(N, n) sequences -> (N, n+ell-1, q) window count vectors."""
    N, n = X.shape
    L = n + ell - 1
    onehot = np.zeros((N, L + 1, q), dtype=np.int16)
    rows = np.arange(N)[:, None]
    onehot[rows, np.arange(1, n + 1)[None, :], X] = 1
    csum = np.cumsum(onehot, axis=1)
    hi = np.arange(1, L + 1)
    lo = np.maximum(hi - ell, 0)
    return (csum[:, hi, :] - csum[:, lo, :]).astype(entry_dtype(ell))


def derivatives(R: np.ndarray, k: int) -> np.ndarray:
    D = R.copy()
    if k < R.shape[1]:
        D[:, k:] -= R[:, :-k]
    return D


def zero_runs(D: np.ndarray):
    """Per position: zero flag, forward run count and backward run count."""
    zero = ~np.any(D != 0, axis=2)
    N, L = zero.shape
    fwd = np.zeros((N, L), dtype=np.int32)
    bwd = np.zeros((N, L), dtype=np.int32)
    run = np.zeros(N, dtype=np.int32)
    for j in range(L):
        run = (run + 1) * zero[:, j]
        fwd[:, j] = run
    run[:] = 0
    for j in range(L - 1, -1, -1):
        run = (run + 1) * zero[:, j]
        bwd[:, j] = run
    return zero, fwd, bwd


def run_ends(zero: np.ndarray) -> np.ndarray:
    ends = zero.copy()
    ends[:, :-1] &= ~zero[:, 1:]
    return ends


def depths(D: np.ndarray, k: int) -> np.ndarray:
    zero, fwd, _ = zero_runs(D)
    ends = run_ends(zero)
    return np.where(ends, fwd // k, 0).sum(axis=1)


def syndromes(D: np.ndarray, k: int, b, m: int) -> np.ndarray:
    """``sum_j b[j] * sigma_j mod m`` for each row, sigma indexed by gap."""
    zero, fwd, _ = zero_runs(D)
    ends = run_ends(zero)
    gap = np.cumsum(~zero, axis=1)
    b = np.asarray(list(b), dtype=np.int64)
    if gap.max(initial=0) >= len(b):
        raise ValueError("Sidon vector shorter than the number of gaps")
    contrib = np.where(ends, (fwd // k) * b[gap], 0)
    return contrib.sum(axis=1) % m


def nucleus_keys(D: np.ndarray, k: int) -> np.ndarray:
    """Packed nuclei: kept entries shifted left, remainder filled with SENTINEL.

    Returns an (N, L*q) array whose rows compare equal iff the nuclei do.
    """
    zero, fwd, bwd = zero_runs(D)
    runlen = fwd + bwd - 1
    keep = ~zero | (bwd <= runlen % k)
    order = np.argsort(~keep, axis=1, kind="stable")
    packed = np.take_along_axis(D, order[:, :, None], axis=1)
    kept = np.take_along_axis(keep, order, axis=1)
    packed[~kept] = SENTINEL
    return packed.reshape(D.shape[0], -1)


def scalar_nucleus_key(mu, L: int, q: int, ell: int) -> bytes:
    """Byte key of a nucleus tuple, matching one row of :func:`nucleus_keys`."""
    arr = np.full((L, q), SENTINEL, dtype=entry_dtype(ell))
    if mu:
        arr[: len(mu)] = np.asarray(mu)
    return arr.tobytes()


def fine_mask(X: np.ndarray, k: int, ell: int) -> np.ndarray:
    """True for rows with no k-periodic window of length 2k+ell-1."""
    N, n = X.shape
    w = k + ell - 1
    if n < 2 * k + ell - 1:
        return np.ones(N, dtype=bool)
    eq = X[:, k:] == X[:, :-k]
    windows = np.lib.stride_tricks.sliding_window_view(eq, w, axis=1)
    return ~np.all(windows, axis=2).any(axis=1)
