"""k-step derivatives and the zero-run decomposition into nucleus and sigma."""

from __future__ import annotations

from typing import NamedTuple, Optional, Sequence

from .seqcore import Params, read_vector


class Decomposition(NamedTuple):
    mu: tuple
    sigma: tuple


def _width(y) -> int:
    return len(y[0]) if y else 0


def _sub(a, b):
    return tuple(u - v for u, v in zip(a, b))


def _add(a, b):
    return tuple(u + v for u, v in zip(a, b))


def is_zero(e) -> bool:
    return not any(e)


def delta_k(y: Sequence[Sequence[int]], k: int) -> tuple:
    """Entry i is ``y_i - y_{i-k}``, with ``y_j = 0`` for j <= 0."""
    if k < 1:
        raise ValueError("k must be >= 1")
    y = [tuple(e) for e in y]
    return tuple(e if i < k else _sub(e, y[i - k]) for i, e in enumerate(y))


def delta_k_inverse(d: Sequence[Sequence[int]], k: int) -> tuple:
    if k < 1:
        raise ValueError("k must be >= 1")
    out = []
    for i, e in enumerate(d):
        e = tuple(e)
        out.append(e if i < k else _add(e, out[i - k]))
    return tuple(out)


def decompose(y: Sequence[Sequence[int]], k: int) -> Decomposition:
    """Split y into mu (zero runs reduced mod k) and sigma (run lengths div k).

    sigma has one entry per gap: before the first nonzero entry, between each
    pair of consecutive nonzero entries, and after the last one.
    """
    zero = (0,) * _width(y)
    mu = []
    sigma = []
    run = 0
    for e in y:
        e = tuple(e)
        if is_zero(e):
            run += 1
            continue
        sigma.append(run // k)
        mu.extend([zero] * (run % k))
        mu.append(e)
        run = 0
    sigma.append(run // k)
    mu.extend([zero] * (run % k))
    return Decomposition(tuple(mu), tuple(sigma))


def gap_count(mu) -> int:
    return sum(1 for e in mu if not is_zero(e)) + 1


def recompose(mu, sigma, k: int, width: Optional[int] = None) -> tuple:
    """Inverse of :func:`decompose`: put ``k*sigma[j]`` zeros back into gap j."""
    sigma = tuple(sigma)
    if len(sigma) != gap_count(mu):
        raise ValueError(f"sigma has {len(sigma)} entries but mu has {gap_count(mu)} gaps")
    if width is None:
        width = _width(mu)
    if any(sigma) and not width:
        raise ValueError("cannot infer entry width from an empty nucleus")
    zero = (0,) * width
    out = list()
    gap = 0
    for e in mu:
        e = tuple(e)
        if not is_zero(e):
            out.extend([zero] * (k * sigma[gap]))
            gap += 1
        out.append(e)
    out.extend([zero] * (k * sigma[gap]))
    return tuple(out)


def read_derivative(x, p: Params) -> tuple:
    return delta_k(read_vector(x, p.ell, p.q), p.k)


def nucleus(x, p: Params) -> tuple:
    return decompose(read_derivative(x, p), p.k).mu


def sigma_of(x, p: Params) -> tuple:
    return decompose(read_derivative(x, p), p.k).sigma


def depth(x, p: Params) -> int:
    return sum(sigma_of(x, p))
