"""Sequences over Z_q, window compositions and l-read vectors.

Conventions: a sequence is a tuple of ints in [0, q-1]; a composition is a
length-q tuple of counts; a read vector is a tuple of compositions. Indices in
docstrings are 1-based (position i is ``x[i-1]`` in Python).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InvalidSymbolError, NotAReadVectorError

UNBOUNDED = None


@dataclass(frozen=True)
class Params:
    """Channel/code parameters.

    ``t`` is the error budget; ``None`` means an unbounded number of errors.
    """

    q: int
    ell: int
    k: int
    n: int
    t: Optional[int] = UNBOUNDED

    def __post_init__(self):
        if self.q < 2:
            raise ValueError(f"alphabet size q must be >= 2, got {self.q}")
        for name in ("ell", "k", "n"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")
        if self.t is not None and self.t < 0:
            raise ValueError(f"t must be non-negative, got {self.t}")

    @property
    def read_length(self) -> int:
        return self.n + self.ell - 1


def check_sequence(x: Sequence[int], q: int) -> tuple:
    x = tuple(int(a) for a in x)
    for a in x:
        if a < 0 or a >= q:
            raise InvalidSymbolError(f"symbol {a} not in Z_{q}")
    return x


def unit(a: int, q: int) -> tuple:
    v = [0] * q
    v[a] = 1
    return tuple(v)


def composition(w: Sequence[int], q: int) -> tuple:
    counts = [0] * q
    for a in w:
        if a < 0 or a >= q:
            raise InvalidSymbolError(f"symbol {a} not in Z_{q}")
        counts[a] += 1
    return tuple(counts)


def read_vector(x: Sequence[int], ell: int, q: int) -> tuple:
    """The l-read vector: compositions of the n+l-1 windows ``x[i-l+1, i]``."""
    x = check_sequence(x, q)
    if ell < 1:
        raise ValueError("window length must be >= 1")
    counts = [0] * q
    out = []
    for i in range(len(x) + ell - 1):
        if i < len(x):
            counts[x[i]] += 1
        if i >= ell:
            counts[x[i - ell]] -= 1
        out.append(tuple(counts))
    return tuple(out)


def invert_read(z: Sequence[Sequence[int]], q: int, ell: int) -> tuple:
    """Recover x from its l-read vector, validating the whole vector.

    Consecutive entries differ by ``unit(x_i) - unit(x_{i-l})`` where the
    subtracted symbol is already known, so x is read off left to right.
    Raises NotAReadVectorError on any inconsistency.
    """
    z = [tuple(int(c) for c in e) for e in z]
    n = len(z) - ell + 1
    if n < 1:
        raise NotAReadVectorError(f"length {len(z)} too short for window {ell}")
    for e in z:
        if len(e) != q:
            raise NotAReadVectorError(f"entry {e} does not have {q} counts")
    x = []
    prev = (0,) * q
    for i, e in enumerate(z):
        diff = [a - b for a, b in zip(e, prev)]
        if i >= ell:
            diff[x[i - ell]] += 1
        if i < n:
            if sorted(diff) != [0] * (q - 1) + [1]:
                raise NotAReadVectorError(f"entry {i + 1} is not reachable from entry {i}")
            x.append(diff.index(1))
        elif any(diff):
            raise NotAReadVectorError(f"trailing entry {i + 1} breaks the ramp")
        prev = e
    x = tuple(x)
    if read_vector(x, ell, q) != tuple(z):
        raise NotAReadVectorError("reconstruction does not reproduce the input")
    return x


def is_read_vector(z, q: int, ell: int) -> bool:
    try:
        invert_read(z, q, ell)
    except NotAReadVectorError:
        return False
    return True


def remove_window(x: Sequence, i: int, j: int) -> tuple:
    """M_[i,j](x): drop positions i..j (1-based, inclusive)."""
    if not 1 <= i <= j <= len(x):
        raise IndexError(f"window [{i},{j}] out of range for length {len(x)}")
    return tuple(x[: i - 1]) + tuple(x[j:])


def is_periodic(x: Sequence, m: int) -> bool:
    if not 1 <= m <= len(x) - 1:
        raise ValueError(f"period {m} out of range for length {len(x)}")
    return all(x[i + m] == x[i] for i in range(len(x) - m))


def read_count_sum(i: int, n: int, ell: int) -> int:
    """Number of symbols in window i of the l-read vector of a length-n sequence."""
    return min(i, ell, n, n + ell - i)
