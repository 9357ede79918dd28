"""Asymptotic rates of the unbounded-error nucleus code.

The largest root of ``f(x) = x^{k+2} - q x^{k+1} + q - 1`` sits within about
``(q-1)/q^{k+1}`` of q, which is below double resolution of x for moderate k.
It is therefore solved for, and carried as, the deficit ``delta = q - lambda``.
All logarithms are natural internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import factorial, log, log1p
from typing import Optional


def _phi(u: float, k: int, q: int) -> float:
    # log(lambda^{k+1} * delta / (q-1)) with delta = e^u; negative where f > 0
    delta = math.exp(u)
    return (k + 1) * (log(q) + log1p(-delta / q)) + u - log(q - 1)


def _dphi(u: float, k: int, q: int) -> float:
    delta = math.exp(u)
    return 1.0 - (k + 1) * delta / (q - delta)


def lambda_deficit(k: int, q: int) -> float:
    """q minus the largest real root of f_{k,q}."""
    if q < 2 or k < 0:
        raise ValueError("need q >= 2 and k >= 0")
    if k == 0:
        return 1.0  # f = (x-1)(x-(q-1))
    # f < 0 at the minimiser q(k+1)/(k+2) and at q-1; f is increasing past both
    hi = log(min(1.0 - 1e-9, q / (k + 2)))
    lo = log(q - 1) - (k + 1) * log(q) - 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if _phi(mid, k, q) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * max(1.0, abs(lo)):
            break
    u = 0.5 * (lo + hi)
    for _ in range(5):
        step = _phi(u, k, q) / _dphi(u, k, q)
        u -= step
        if abs(step) < 1e-17 * max(1.0, abs(u)):
            break
    return math.exp(u)


def lambda_root(k: int, q: int) -> float:
    """Largest real root of ``x^{k+2} - q x^{k+1} + q - 1`` (rounds to q for large k)."""
    return q - lambda_deficit(k, q)


def f_poly(x: float, k: int, q: int) -> float:
    return x ** (k + 2) - q * x ** (k + 1) + q - 1


def f_at_deficit(delta: float, k: int, q: int) -> float:
    """``f(q - delta)`` evaluated without cancellation: ``q-1 - delta*(q-delta)^{k+1}``."""
    prod = math.exp((k + 1) * (log(q) + log1p(-delta / q)) + log(delta))
    return (q - 1) - prod


def log_q_lambda(k: int, q: int) -> float:
    return 1.0 + log1p(-lambda_deficit(k, q) / q) / log(q)


def rate_deficit(k: int, q: int) -> float:
    """``1 - log_q lambda_{k,q}``, kept at full relative precision."""
    return -log1p(-lambda_deficit(k, q) / q) / log(q)


def rate_exact_k1(q: int) -> float:
    return log(q - 1) / log(q)


def rate_upper(k: int, ell: int, q: int) -> float:
    """``log_q lambda_{k+l-2,q}``; exact when l divides k."""
    return log_q_lambda(k + ell - 2, q)


def _lll_terms(k: int, ell: int):
    if ell <= k:
        return factorial(ell) * (16 * k + 8 * ell - 16), k + ell - 1
    return factorial(k) * (16 * k + 8 * ell - 16), 2 * k - 1


def lll_q_threshold(k: int, ell: int) -> int:
    """Smallest q for which the local-lemma lower bound applies."""
    A, e = _lll_terms(k, ell)
    q = max(2, int(round(A ** (1.0 / e))) - 1)
    while q**e < A:
        q += 1
    while q > 2 and (q - 1) ** e >= A:
        q -= 1
    return q


def rate_lower_lll(k: int, ell: int, q: int) -> Optional[float]:
    """Local-lemma lower bound ``1 - log_q(1/(1-c))``; None below the q threshold."""
    if k < 2 or ell < 2:
        raise ValueError("local-lemma bound needs k, l >= 2")
    A, e = _lll_terms(k, ell)
    if q**e < A:
        return None
    c = (1.0 - math.sqrt(1.0 - A / q**e)) / (8 * k + 4 * ell - 8)
    return 1.0 + log1p(-c) / log(q)


def rate_lower_simple(k: int, q: int) -> float:
    return 1.0 - log(q / (q - 1)) / (k * log(q))


def lambert_w0(u: float) -> float:
    """Principal branch of W on (-1/e, 0], by Newton on ``w e^w = u``."""
    if not -1.0 / math.e < u <= 0.0:
        raise ValueError(f"argument {u} outside (-1/e, 0]")
    if u == 0.0:
        return 0.0
    if u < -0.25:
        p = math.sqrt(2.0 * (math.e * u + 1.0))
        w = -1.0 + p - p * p / 3.0
    else:
        w = u * (1.0 - u)
    for _ in range(100):
        ew = math.exp(w)
        step = (w * ew - u) / (ew * (w + 1.0))
        w -= step
        if abs(step) < 1e-16 * max(1.0, abs(w)):
            break
    return w


def alpha(k: int, ell: int, q: int) -> float:
    s = k + ell
    return math.exp(-lambert_w0(-(q - 1) * s / q**s))


def envelope_deficits(k: int, ell: int, q: int) -> tuple:
    """(small, large) deficits: ``(q-1) log_q e / q^{k+l}`` and alpha times that."""
    base = (q - 1) / (log(q) * q ** (k + ell))
    return base, alpha(k, ell, q) * base


def alpha_envelope(k: int, ell: int, q: int) -> tuple:
    """(lower, upper) bounds on ``log_q lambda_{k+l-2,q}``."""
    small, large = envelope_deficits(k, ell, q)
    return 1.0 - large, 1.0 - small


@dataclass
class RateBounds:
    k: int
    ell: int
    q: int
    lower: float
    upper: float
    exact: Optional[float] = None
    method_lower: str = ""
    method_upper: str = ""

    @property
    def is_exact(self) -> bool:
        return self.exact is not None


def rate_bounds(k: int, ell: int, q: int) -> RateBounds:
    if k < 1 or ell < 1:
        raise ValueError("need k, l >= 1")
    if ell == 1:
        v = log_q_lambda(k - 1, q)
        return RateBounds(k, ell, q, v, v, v, "rll-capacity", "rll-capacity")
    if k == 1:
        v = rate_exact_k1(q)
        return RateBounds(k, ell, q, v, v, v, "k1-exact", "k1-exact")
    upper = rate_upper(k, ell, q)
    if k % ell == 0:
        return RateBounds(k, ell, q, upper, upper, upper, "fine-exact", "fine-exact")
    simple = rate_lower_simple(k, q)
    lll = rate_lower_lll(k, ell, q)
    if lll is not None and lll > simple:
        lower, how = lll, "local-lemma"
    else:
        lower, how = simple, "periodic-positions"
    return RateBounds(k, ell, q, lower, upper, None, how, "fine-rll")


def table(k_range, ell_set, q: int) -> list:
    return [rate_bounds(k, ell, q) for ell in ell_set for k in k_range]
