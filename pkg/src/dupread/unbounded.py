"""Nucleus-class codes for an unbounded number of duplications, fine sequences
and the counting oracles around them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .derivative import decompose, delta_k, is_zero, read_derivative
from .seqcore import Params, check_sequence, composition, is_periodic, remove_window


@dataclass
class NucleusClassCode:
    """One representative (the lexicographically smallest) per nucleus class.

    Representatives are stored as lexicographic indices into Z_q^n; class c
    has ``sizes[c]`` members, all of depth ``depths[c]``.
    """

    params: Params
    rep_indices: np.ndarray
    depths: np.ndarray
    sizes: np.ndarray
    class_index: dict = field(repr=False)

    def __len__(self):
        return len(self.rep_indices)

    def representative(self, c: int) -> tuple:
        p = self.params
        return tuple(int(a) for a in kernels.sequences(p.q, p.n, int(self.rep_indices[c]), int(self.rep_indices[c]) + 1)[0])

    @property
    def representatives(self) -> list:
        p = self.params
        return [tuple(int(a) for a in row) for row in _rows_at(p.q, p.n, self.rep_indices)]

    def class_of_nucleus(self, mu) -> Optional[int]:
        p = self.params
        if len(mu) > p.read_length or any(len(e) != p.q for e in mu):
            return None
        return self.class_index.get(kernels.scalar_nucleus_key(mu, p.read_length, p.q, p.ell))

    def decode(self, z) -> tuple:
        """Map any descendant of a codeword's read vector back to the codeword."""
        mu = decompose(delta_k(z, self.params.k), self.params.k).mu
        c = self.class_of_nucleus(mu)
        if c is None:
            raise KeyError("received vector does not descend from any codeword")
        return self.representative(c)


def _rows_at(q, n, indices):
    idx = np.asarray(indices, dtype=np.int64).copy()
    out = np.empty((len(idx), n), dtype=np.uint8)
    for pos in range(n - 1, -1, -1):
        out[:, pos] = idx % q
        idx //= q
    return out


def build_nucleus_code(p: Params, guard=None, block: int = kernels.DEFAULT_BLOCK) -> NucleusClassCode:
    table: dict = {}
    reps, dep, sizes = [], [], []
    for start, X in kernels.blocks(p.q, p.n, block, guard):
        D = kernels.derivatives(kernels.read_vectors(X, p.q, p.ell), p.k)
        keys = np.ascontiguousarray(kernels.nucleus_keys(D, p.k))
        d = kernels.depths(D, p.k)
        view = keys.view(np.dtype((np.void, keys.shape[1] * keys.itemsize))).ravel()
        uniq, first, counts = np.unique(view, return_index=True, return_counts=True)
        for key, f, c in zip(uniq, first, counts):
            kb = key.tobytes()
            cls = table.get(kb)
            if cls is None:
                table[kb] = len(reps)
                reps.append(start + int(f))
                dep.append(int(d[f]))
                sizes.append(int(c))
            else:
                sizes[cls] += int(c)
    order = np.argsort(np.asarray(reps, dtype=np.int64), kind="stable")
    remap = np.empty_like(order)
    remap[order] = np.arange(len(order))
    table = {kb: int(remap[c]) for kb, c in table.items()}
    return NucleusClassCode(
        params=p,
        rep_indices=np.asarray(reps, dtype=np.int64)[order],
        depths=np.asarray(dep, dtype=np.int64)[order],
        sizes=np.asarray(sizes, dtype=np.int64)[order],
        class_index=table,
    )


def depth_partition(code: NucleusClassCode) -> list:
    """(depth, number of classes) for every depth 0..floor((n+l-1)/k)."""
    p = code.params
    top = p.read_length // p.k
    counts = np.bincount(code.depths, minlength=top + 1)
    if len(counts) > top + 1:
        raise AssertionError("class deeper than the partition bound")
    return [(i, int(c)) for i, c in enumerate(counts)]


def periodic_window_start(x, p: Params) -> Optional[int]:
    """1-based start of the first k-periodic window of length 2k+l-1, if any."""
    w = 2 * p.k + p.ell - 1
    for i in range(len(x) - w + 1):
        if is_periodic(x[i : i + w], p.k):
            return i + 1
    return None


def is_fine(x, p: Params) -> bool:
    return periodic_window_start(tuple(x), p) is None


def count_fine_bruteforce(p: Params, n: Optional[int] = None, guard=None) -> int:
    n = p.n if n is None else n
    total = 0
    for _, X in kernels.blocks(p.q, n, guard=guard):
        total += int(kernels.fine_mask(X, p.k, p.ell).sum())
    return total


def rll_count(q: int, j: int, m: int) -> int:
    """Number of q-ary strings of length m with no run of j+1 zeros."""
    if m < 0:
        return 0
    # state: length of the trailing zero run, 0..j
    state = [1] + [0] * j
    for _ in range(m):
        total = sum(state)
        state = [total * (q - 1)] + state[:-1]
    return sum(state)


def count_fine_fast(p: Params, n: Optional[int] = None) -> int:
    """|F_{k,l}(n)| = q^k * RLL_q(0, k+l-2)(n-k).

    x has a k-periodic window of length 2k+l-1 exactly when its plain k-step
    derivative has k+l-1 zeros at positions > k; the first k derivative
    symbols are free.
    """
    n = p.n if n is None else n
    if n < p.k:
        return p.q**n
    return p.q**p.k * rll_count(p.q, p.k + p.ell - 2, n - p.k)


def count_rll_naive(p: Params, n: Optional[int] = None) -> int:
    """|RLL_q(0, k+l-2)(n)|, the finite-n count that the rate argument equates with |F|."""
    n = p.n if n is None else n
    return rll_count(p.q, p.k + p.ell - 2, n)


def del_step(x, p: Params) -> tuple:
    x = check_sequence(x, p.q)
    i = periodic_window_start(x, p)
    if i is None:
        raise ValueError("sequence is fine; no k-periodic deletion applies")
    return remove_window(x, i, i + p.k - 1)


def rem_step(d, position: int, k: int) -> tuple:
    """Remove the 0^k factor at 1-based ``position`` of a derivative vector."""
    d = tuple(tuple(e) for e in d)
    if position < 1 or position + k - 1 > len(d):
        raise IndexError(f"window at {position} of length {k} out of range")
    if not all(is_zero(e) for e in d[position - 1 : position + k - 1]):
        raise ValueError(f"entries {position}..{position + k - 1} are not all zero")
    return d[: position - 1] + d[position + k - 1 :]


def rem_position(x, p: Params) -> int:
    """Derivative position of the zero block created by the first periodic window."""
    i = periodic_window_start(tuple(x), p)
    if i is None:
        raise ValueError("sequence is fine")
    return i + p.k + p.ell - 1


def del_star(x, p: Params) -> tuple:
    x = check_sequence(x, p.q)
    while periodic_window_start(x, p) is not None:
        x = del_step(x, p)
    return x


def context_mask(X: np.ndarray, p: Params) -> np.ndarray:
    """Rows w of length 2k+l-1 whose windows satisfy R_{l+j} = R_{k+l+j}, j < k."""
    k, ell = p.k, p.ell
    R = kernels.read_vectors(X, p.q, ell)
    # 0-based index of R_{l+j} is l-1+j
    lhs = R[:, ell - 1 : ell - 1 + k]
    rhs = R[:, k + ell - 1 : 2 * k + ell - 1]
    return np.all(lhs == rhs, axis=(1, 2))


def count_duplication_contexts(p: Params) -> int:
    w = 2 * p.k + p.ell - 1
    total = 0
    for _, X in kernels.blocks(p.q, w):
        total += int(context_mask(X, p).sum())
    return total


def count_duplication_contexts_naive(p: Params) -> int:
    """Same count straight from window compositions, one window at a time."""
    k, ell, q = p.k, p.ell, p.q
    total = 0
    for w in itertools.product(range(q), repeat=2 * k + ell - 1):
        if all(composition(w[j : j + ell], q) == composition(w[k + j : k + j + ell], q) for j in range(k)):
            total += 1
    return total


def context_count_bound(p: Params) -> int:
    from math import factorial

    if p.ell <= p.k:
        return factorial(p.ell) * p.q**p.k
    return factorial(p.k) * p.q**p.ell


def depth_zero_mask(X: np.ndarray, p: Params) -> np.ndarray:
    D = kernels.derivatives(kernels.read_vectors(X, p.q, p.ell), p.k)
    return kernels.depths(D, p.k) == 0


def zero_block_starts(x, p: Params) -> list:
    """1-based positions where a 0^k factor starts in the read derivative."""
    d = read_derivative(x, p)
    k = p.k
    return [s + 1 for s in range(len(d) - k + 1) if all(is_zero(e) for e in d[s : s + k])]
