"""Syndrome codes built from Sidon sets, correcting up to t duplications.

A codeword x in coset g satisfies ``b . sigma(x) = g (mod m)``. Duplications
only grow sigma, by a non-negative vector of weight at most t, and the Sidon
property makes that vector recoverable from the syndrome shift.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .derivative import decompose, delta_k, delta_k_inverse, recompose
from .errors import DecodingError, NotAReadVectorError
from .seqcore import Params, invert_read, read_vector


def _sums(elements, t, m):
    """Yield (value mod m, coefficient vector) for every multiset of size <= t."""
    r = len(elements)
    for size in range(t + 1):
        for combo in itertools.combinations_with_replacement(range(r), size):
            coeffs = [0] * r
            for i in combo:
                coeffs[i] += 1
            yield sum(elements[i] for i in combo) % m, tuple(coeffs)


def verify_sidon(B, m: int, t: int) -> bool:
    """Exhaustive check that all sums of at most t elements differ mod m."""
    seen = set()
    for value, _ in _sums(list(B), t, m):
        if value in seen:
            return False
        seen.add(value)
    return True


@dataclass(frozen=True)
class SidonSet:
    m: int
    elements: tuple
    t: int

    def __post_init__(self):
        if any(not 1 <= b < self.m for b in self.elements):
            raise ValueError("Sidon elements must lie in [1, m-1]")

    def verify(self) -> bool:
        return verify_sidon(self.elements, self.m, self.t)

    def to_json(self) -> str:
        return json.dumps({"m": self.m, "elements": list(self.elements), "t": self.t})

    @classmethod
    def from_json(cls, text: str) -> "SidonSet":
        d = json.loads(text)
        s = cls(int(d["m"]), tuple(int(b) for b in d["elements"]), int(d["t"]))
        if not s.verify():
            raise ValueError(f"stored set is not a Sidon set of order {s.t} mod {s.m}")
        return s


def _greedy_in(r: int, t: int, m: int) -> Optional[list]:
    # sums_by_size[j] holds the values of all multisets of exactly j chosen elements
    sums_by_size = [{0}] + [set() for _ in range(t)]
    taken = {0}
    chosen = []
    for c in range(1, m):
        new = set()
        ok = True
        for j in range(t):
            for s in sums_by_size[j]:
                for copies in range(1, t - j + 1):
                    v = (s + copies * c) % m
                    if v in taken or v in new:
                        ok = False
                        break
                    new.add(v)
                if not ok:
                    break
            if not ok:
                break
        if not ok:
            continue
        grown = [set(layer) for layer in sums_by_size]
        for j in range(t):
            for s in sums_by_size[j]:
                for copies in range(1, t - j + 1):
                    grown[j + copies].add((s + copies * c) % m)
        sums_by_size = grown
        taken |= new
        chosen.append(c)
        if len(chosen) == r:
            return chosen
    return None


def greedy_sidon(r: int, t: int, m_start: Optional[int] = None) -> SidonSet:
    """Greedy order-t Sidon set of size r in Z_m, doubling m until one fits."""
    m = max(m_start or r + 1, 2)
    while True:
        chosen = _greedy_in(r, t, m)
        if chosen is not None:
            s = SidonSet(m, tuple(chosen), t)
            if not s.verify():
                raise AssertionError("greedy construction produced a non-Sidon set")
            return s
        m *= 2


class SyndromeTable:
    """Group element -> the unique coefficient vector of weight <= t producing it."""

    def __init__(self, sidon: SidonSet, r: Optional[int] = None):
        elements = list(sidon.elements if r is None else sidon.elements[:r])
        self.m = sidon.m
        self.t = sidon.t
        self.table = {}
        for value, coeffs in _sums(elements, sidon.t, sidon.m):
            if value in self.table:
                raise ValueError("elements are not a Sidon set; syndrome lookup is ambiguous")
            self.table[value] = coeffs

    def __len__(self):
        return len(self.table)

    def lookup(self, value: int) -> tuple:
        try:
            return self.table[value % self.m]
        except KeyError:
            raise DecodingError(f"syndrome shift {value % self.m} matches no pattern of <= {self.t} errors") from None


def sidon_for(p: Params, t: Optional[int] = None, m_start: Optional[int] = None) -> SidonSet:
    t = p.t if t is None else t
    if t is None:
        raise ValueError("bounded code needs a finite error budget t")
    return greedy_sidon(p.n + p.ell, t, m_start)


@dataclass
class SidonCode:
    params: Params
    sidon: SidonSet
    g: int
    table: SyndromeTable = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.sidon.elements) < self.params.n + self.params.ell:
            raise ValueError("Sidon set needs at least n+l elements")
        if self.params.t is not None and self.sidon.t < self.params.t:
            raise ValueError("Sidon order is below the error budget")
        self.g %= self.sidon.m
        self.table = SyndromeTable(self.sidon)

    def syndrome(self, x) -> int:
        return syndrome(x, self.params, self.sidon)

    def __contains__(self, x) -> bool:
        return self.syndrome(x) == self.g

    def members(self, guard=None) -> list:
        return coset_members(self.params, self.sidon, self.g, guard)

    def decode(self, z) -> tuple:
        return decode(z, self)


def sigma_syndrome(sigma, sidon: SidonSet) -> int:
    return sum(b * s for b, s in zip(sidon.elements, sigma)) % sidon.m


def syndrome(x, p: Params, sidon: SidonSet) -> int:
    d = delta_k(read_vector(x, p.ell, p.q), p.k)
    return sigma_syndrome(decompose(d, p.k).sigma, sidon)


def syndrome_histogram(p: Params, sidon: SidonSet, guard=None) -> np.ndarray:
    hist = np.zeros(sidon.m, dtype=np.int64)
    for _, X in kernels.blocks(p.q, p.n, guard=guard):
        D = kernels.derivatives(kernels.read_vectors(X, p.q, p.ell), p.k)
        hist += np.bincount(kernels.syndromes(D, p.k, sidon.elements, sidon.m), minlength=sidon.m)
    return hist


def best_coset(p: Params, sidon: SidonSet, guard=None) -> tuple:
    """The largest coset (smallest g on ties) and its size."""
    hist = syndrome_histogram(p, sidon, guard)
    g = int(np.argmax(hist))
    return g, int(hist[g])


def coset_members(p: Params, sidon: SidonSet, g: int, guard=None) -> list:
    out = []
    for _, X in kernels.blocks(p.q, p.n, guard=guard):
        D = kernels.derivatives(kernels.read_vectors(X, p.q, p.ell), p.k)
        hit = kernels.syndromes(D, p.k, sidon.elements, sidon.m) == g % sidon.m
        out.extend(tuple(int(a) for a in row) for row in X[hit])
    return out


def decode(z, code: SidonCode) -> tuple:
    """Recover the codeword whose read vector suffered at most t duplications."""
    p = code.params
    mu, sigma_rx = decompose(delta_k(z, p.k), p.k)
    shift = (sigma_syndrome(sigma_rx, code.sidon) - code.g) % code.sidon.m
    errors = code.table.lookup(shift)
    if any(errors[len(sigma_rx) :]):
        raise DecodingError("error pattern points past the last gap")
    sigma = tuple(s - e for s, e in zip(sigma_rx, errors))
    if min(sigma) < 0:
        raise DecodingError("error pattern exceeds the received zero runs")
    clean = delta_k_inverse(recompose(mu, sigma, p.k, width=p.q), p.k)
    try:
        x = invert_read(clean, p.q, p.ell)
    except NotAReadVectorError as exc:
        raise DecodingError(f"corrected vector is not an l-read vector: {exc}") from None
    if len(x) != p.n:
        raise DecodingError(f"decoded length {len(x)} differs from n={p.n}")
    return x
