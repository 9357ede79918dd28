import math

import mpmath
import numpy as np
import pytest
from scipy.special import lambertw

from dupread import rates
from dupread.unbounded import rll_count


def mp_root(j, q, dps=60):
    mpmath.mp.dps = dps
    f = lambda x: x ** (j + 2) - q * x ** (j + 1) + q - 1
    return mpmath.findroot(f, mpmath.mpf(q) - (q - 1) / mpmath.mpf(q) ** (j + 1))


def test_root_against_numpy():
    for q in (2, 3, 4, 7):
        for k in range(0, 12):
            coeffs = [1, -q] + [0] * k + [q - 1]
            top = max(r.real for r in np.roots(coeffs) if abs(r.imag) < 1e-9)
            assert rates.lambda_root(k, q) == pytest.approx(top, rel=1e-9)


def test_deficit_against_mpmath():
    for q in (2, 3, 4, 16):
        for k in (1, 5, 20, 40, 64):
            exact = mpmath.mpf(q) - mp_root(k, q, dps=120)
            assert rates.lambda_deficit(k, q) == pytest.approx(float(exact), rel=1e-12)


def test_endpoint_signs():
    for q in (2, 4, 9):
        for k in (1, 3, 8):
            assert rates.f_poly(q, k, q) == q - 1 > 0
            assert rates.f_poly(q - 1, k, q) <= 0
    assert rates.lambda_deficit(0, 4) == 1.0


def test_rll_growth_matches_root():
    # ratio of consecutive RLL counts approaches the largest root
    for q, j in [(2, 1), (2, 2), (3, 2), (4, 3)]:
        ratio = rll_count(q, j, 401) / rll_count(q, j, 400)
        assert ratio == pytest.approx(rates.lambda_root(j, q), rel=1e-9)


def test_named_values():
    assert round(rates.log_q_lambda(8, 4), 6) == 0.999998
    assert round(rates.log_q_lambda(5, 4), 6) == 0.999868
    assert round(rates.rate_exact_k1(4), 6) == 0.792481
    assert rates.rate_exact_k1(2) == 0.0
    vals = [rates.rate_exact_k1(q) for q in range(2, 40)]
    assert vals == sorted(vals) and vals[-1] < 1
    assert round(rates.rate_upper(4, 5, 4), 6) == 0.999992
    b = rates.rate_bounds(9, 9, 4)
    assert b.is_exact and round(b.upper, 6) == 1.0


def test_lll_bound():
    c = (1 - math.sqrt(1 - 6 * 72 / 1024)) / 36
    assert rates.rate_lower_lll(3, 5, 4) == pytest.approx(1 + math.log(1 - c) / math.log(4), abs=1e-15)
    assert round(rates.rate_lower_lll(3, 5, 4), 6) == 0.995182
    assert rates.rate_lower_lll(2, 5, 4) is None
    assert round(rates.rate_lower_simple(2, 4), 6) == 0.896241
    with pytest.raises(ValueError):
        rates.rate_lower_lll(1, 3, 4)


def test_lll_threshold():
    for k in range(2, 8):
        for ell in range(2, 10):
            q0 = rates.lll_q_threshold(k, ell)
            assert rates.rate_lower_lll(k, ell, q0) is not None
            if q0 > 2:
                assert rates.rate_lower_lll(k, ell, q0 - 1) is None


def test_simple_lower():
    assert rates.rate_lower_simple(1, 4) == pytest.approx(rates.rate_exact_k1(4))
    assert rates.rate_lower_simple(1, 2) == 0.0


def test_lambert_w_against_scipy():
    for u in np.linspace(-1 / math.e + 1e-4, 0, 200):
        assert rates.lambert_w0(u) == pytest.approx(lambertw(u, 0).real, rel=1e-12, abs=1e-15)
    # W is ill-conditioned at the branch point; compare with high precision there
    mpmath.mp.dps = 40
    for eps in (1e-6, 1e-9, 1e-12):
        u = -1 / math.e + eps
        assert rates.lambert_w0(u) == pytest.approx(float(mpmath.lambertw(mpmath.mpf(u))), abs=1e-15 / math.sqrt(eps))
    assert rates.lambert_w0(0.0) == 0.0
    with pytest.raises(ValueError):
        rates.lambert_w0(-0.5)


def test_alpha():
    vals = [rates.alpha(2, s - 2, 2) for s in range(4, 40)]
    assert all(a > 1 for a in vals)
    assert vals == sorted(vals, reverse=True)
    assert vals[-1] == pytest.approx(1, abs=1e-8)
    with pytest.raises(ValueError):
        rates.alpha(1, 2, 2)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_envelope_small_grid(q):
    for s in range(4, 21):
        lo, hi = rates.alpha_envelope(1, s - 1, q)
        assert lo <= rates.log_q_lambda(s - 2, q) <= hi
        v = mpmath.log(mp_root(s - 2, q)) / mpmath.log(q)
        # both ends sit within an ulp or two of the exact value for large s
        assert lo <= float(v) <= hi


def test_table_shape_and_order():
    rows = rates.table(range(1, 10), (5, 9), 4)
    assert [(r.k, r.ell) for r in rows] == [(k, ell) for ell in (5, 9) for k in range(1, 10)]
    assert all(r.lower <= r.upper for r in rows)
    assert rates.rate_bounds(3, 1, 4).method_lower == "rll-capacity"
    assert rates.rate_bounds(3, 1, 4).exact == pytest.approx(rates.log_q_lambda(2, 4))
    with pytest.raises(ValueError):
        rates.rate_bounds(0, 2, 4)


def test_rate_deficit():
    for k in (1, 10, 60):
        exact = 1 - mpmath.log(mp_root(k, 4, dps=120)) / mpmath.log(4)
        assert rates.rate_deficit(k, 4) == pytest.approx(float(exact), rel=1e-12)
