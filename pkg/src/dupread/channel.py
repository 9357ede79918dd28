"""Tandem-duplication channel acting on read vectors (or any entry sequence)."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .derivative import decompose, delta_k, delta_k_inverse, nucleus, recompose
from .seqcore import Params, read_vector


@dataclass(frozen=True)
class DuplicationEvent:
    """T_{pos,len}: repeat the ``len`` entries that follow a prefix of length ``pos``."""

    pos: int
    len: int

    def to_json(self) -> dict:
        return {"pos": self.pos, "len": self.len}

    @classmethod
    def from_json(cls, d) -> "DuplicationEvent":
        return cls(int(d["pos"]), int(d["len"]))


def duplicate(z, ev: DuplicationEvent) -> tuple:
    z = tuple(z)
    i, k = ev.pos, ev.len
    if i < 0 or k < 1 or i + k > len(z):
        raise IndexError(f"event {ev} out of range for length {len(z)}")
    return z[: i + k] + z[i:]


def _children(z, k):
    z = tuple(z)
    for i in range(len(z) - k + 1):
        yield z[: i + k] + z[i:]


def descendants(z, k: int, t: int) -> set:
    """All vectors reachable from z by exactly t duplications of length k."""
    if t < 0:
        raise ValueError("t must be non-negative")
    frontier = {tuple(z)}
    for _ in range(t):
        frontier = {c for v in frontier for c in _children(v, k)}
    return frontier


def ball(z, k: int, t: int) -> set:
    """Union of the j-descendants of z for j = 0..t."""
    if t < 0:
        raise ValueError("t must be non-negative")
    frontier = {tuple(z)}
    out = set(frontier)
    for _ in range(t):
        frontier = {c for v in frontier for c in _children(v, k)}
        out |= frontier
    return out


def random_duplications(z, k: int, t: int, seed: int) -> tuple:
    """Apply t uniformly chosen duplications; returns (vector, events)."""
    rng = random.Random(seed)
    z = tuple(z)
    events = []
    for _ in range(t):
        if len(z) < k:
            raise ValueError(f"vector of length {len(z)} admits no duplication of length {k}")
        ev = DuplicationEvent(rng.randint(0, len(z) - k), k)
        z = duplicate(z, ev)
        events.append(ev)
    return z, events


def common_descendant(x, x2, p: Params) -> Optional[tuple]:
    """A vector in both infinite balls, or None when the nuclei differ.

    Each gap receives the sum of the two sigma entries, so the result is
    reached from x by ``sum(sigma(x2))`` duplications and vice versa.
    """
    da = decompose(delta_k(read_vector(x, p.ell, p.q), p.k), p.k)
    db = decompose(delta_k(read_vector(x2, p.ell, p.q), p.k), p.k)
    if da.mu != db.mu:
        return None
    sigma = tuple(a + b for a, b in zip(da.sigma, db.sigma))
    return delta_k_inverse(recompose(da.mu, sigma, p.k, width=p.q), p.k)


def balls_intersect(x, x2, p: Params) -> bool:
    """Whether the unbounded-radius balls of the two read vectors meet.

    Decided by nucleus equality; the balls themselves are infinite.
    """
    return nucleus(x, p) == nucleus(x2, p)
