import itertools
import random
from collections import defaultdict

import pytest

from dupread import kernels
from dupread.channel import ball, random_duplications
from dupread.derivative import decompose, depth, nucleus, read_derivative
from dupread.seqcore import Params, read_vector
from dupread.unbounded import (
    build_nucleus_code,
    context_count_bound,
    count_duplication_contexts,
    count_duplication_contexts_naive,
    count_fine_bruteforce,
    count_fine_fast,
    count_rll_naive,
    del_star,
    del_step,
    depth_partition,
    is_fine,
    periodic_window_start,
    rem_position,
    rem_step,
    rll_count,
)


def oracle_classes(p):
    groups = defaultdict(list)
    for x in itertools.product(range(p.q), repeat=p.n):
        groups[nucleus(x, p)].append(x)
    return groups


@pytest.mark.parametrize("q,n,k,ell", [(2, 3, 1, 1), (2, 5, 2, 2), (2, 6, 3, 2), (3, 4, 2, 3), (2, 2, 3, 1)])
def test_code_matches_oracle(q, n, k, ell):
    p = Params(q, ell, k, n)
    code = build_nucleus_code(p, block=7)
    groups = oracle_classes(p)
    assert len(code) == len(groups)
    reps = code.representatives
    assert reps == sorted(min(g) for g in groups.values())
    for c, rep in enumerate(reps):
        g = groups[nucleus(rep, p)]
        assert code.sizes[c] == len(g)
        assert code.depths[c] == depth(rep, p)
        assert code.representative(c) == rep
    assert sum(code.sizes) == q**n


def test_small_cases():
    assert len(build_nucleus_code(Params(2, 1, 3, 2))) == 4
    # k = l = 1: nucleus collapses repeated symbols, so classes are alternating strings of length <= 3
    code = build_nucleus_code(Params(2, 1, 1, 3))
    assert len(code) == len({nucleus(x, Params(2, 1, 1, 3)) for x in itertools.product(range(2), repeat=3)})


def test_enumeration_order_independent():
    p = Params(4, 2, 3, 5)
    a = build_nucleus_code(p)
    b = build_nucleus_code(p, block=97)
    assert len(a) == len(b)
    assert list(a.rep_indices) == list(b.rep_indices)
    rev = {nucleus(tuple(r), p) for r in kernels.sequences(4, 5)[::-1]}
    assert len(rev) == len(a)


def test_depth_partition():
    code = build_nucleus_code(Params(2, 2, 2, 5))
    part = depth_partition(code)
    assert part == [(0, 28), (1, 4), (2, 0), (3, 0)]
    assert sum(c for _, c in part) == len(code) == 32


def test_decode_any_descendant():
    p = Params(2, 2, 2, 6)
    code = build_nucleus_code(p)
    rng = random.Random(3)
    for _ in range(200):
        x = tuple(rng.randrange(2) for _ in range(6))
        z, _ = random_duplications(read_vector(x, 2, 2), 2, rng.randint(0, 5), rng.getrandbits(64))
        rep = code.decode(z)
        assert nucleus(rep, p) == nucleus(x, p)
    with pytest.raises(KeyError):
        code.decode(read_vector((0, 1, 1, 0, 1, 0, 0), 2, 2))


def test_is_fine_examples():
    p = Params(2, 2, 2, 5)
    assert not is_fine((0, 1, 0, 1, 0), p)
    assert is_fine((0, 0, 1, 0, 1), p)
    for x in itertools.product(range(2), repeat=4):
        assert is_fine(x, p)


def brute_fine(q, k, ell, n):
    w = 2 * k + ell - 1
    count = 0
    for x in itertools.product(range(q), repeat=n):
        if not any(all(x[i + j + k] == x[i + j] for j in range(w - k)) for i in range(n - w + 1)):
            count += 1
    return count


@pytest.mark.parametrize("q,k,ell", [(2, 2, 2), (2, 3, 2), (3, 2, 3), (2, 4, 2)])
def test_fine_counts_oracle(q, k, ell):
    for n in range(0, 11 if q == 2 else 8):
        p = Params(q, ell, k, max(n, 1))
        expect = brute_fine(q, k, ell, n)
        assert count_fine_fast(p, n) == expect
        if n:
            assert count_fine_bruteforce(p, n) == expect


def test_fine_count_values():
    p = Params(2, 2, 2, 5)
    assert count_fine_bruteforce(p) == 28 == 4 * 7
    assert count_rll_naive(p) == 24
    for n in range(1, 2 * 2 + 2 - 1):
        assert count_fine_bruteforce(p, n) == 2**n


def test_rll_count():
    for j in (0, 1, 2):
        for m in range(0, 16):
            brute = sum(1 for s in itertools.product(range(2), repeat=m) if "0" * (j + 1) not in "".join(map(str, s)))
            assert rll_count(2, j, m) == brute
    fib = [1, 2]
    for _ in range(14):
        fib.append(fib[-1] + fib[-2])
    assert [rll_count(2, 1, m) for m in range(16)] == fib


def test_monotone():
    for q, k, ell in [(2, 2, 2), (3, 3, 2), (2, 2, 4)]:
        p = Params(q, ell, k, 1)
        counts = [count_fine_fast(p, n) for n in range(2 * k + ell - 1, 60)]
        assert counts == sorted(counts)


def test_del_step():
    p = Params(2, 2, 2, 6)
    assert periodic_window_start((0, 1, 0, 1, 0, 1), p) == 1
    assert del_step((0, 1, 0, 1, 0, 1), p) == (0, 1, 0, 1)
    with pytest.raises(ValueError):
        del_step((0, 0, 1, 0, 1), p)


def test_del_star():
    p = Params(2, 2, 2, 8)
    y = del_star((0, 1) * 4, p)
    assert is_fine(y, p) and len(y) <= 4
    assert del_star((0, 0, 1, 1), p) == (0, 0, 1, 1)
    rng = random.Random(8)
    for _ in range(300):
        q, k = rng.randint(2, 3), rng.choice((2, 4))
        ell = rng.choice([d for d in (1, 2, 4) if k % d == 0])
        x = tuple(rng.randrange(q) for _ in range(rng.randint(1, 14)))
        p = Params(q, ell, k, len(x))
        y = del_star(x, p)
        assert nucleus(y, Params(q, ell, k, len(y))) == nucleus(x, p)
        assert (len(x) - len(y)) % k == 0


def test_rem_step():
    p = Params(2, 2, 2, 6)
    x = (0, 1, 0, 1, 0, 1)
    d = read_derivative(x, p)
    pos = rem_position(x, p)
    out = rem_step(d, pos, 2)
    assert len(out) == len(d) - 2
    assert out == read_derivative(del_step(x, p), Params(2, 2, 2, 4))
    with pytest.raises(ValueError):
        rem_step(d, 1, 2)
    with pytest.raises(IndexError):
        rem_step(d, len(d), 2)


def test_context_counts():
    assert count_duplication_contexts(Params(2, 3, 2, 1)) == 10
    for q, k, ell in itertools.product((2, 3), (2, 3, 4), (2, 3, 4)):
        p = Params(q, ell, k, 1)
        c = count_duplication_contexts(p)
        assert c <= context_count_bound(p)
        if k % ell == 0:
            assert c == q**k
    assert count_duplication_contexts_naive(Params(3, 3, 2, 1)) == count_duplication_contexts(Params(3, 3, 2, 1))


def test_depth_zero_scalar_vs_fine():
    # scalar route, independent of the batch kernels
    for k, ell in [(2, 2), (3, 3), (3, 2), (2, 3)]:
        for n in range(1, 10):
            p = Params(2, ell, k, n)
            for x in itertools.product(range(2), repeat=n):
                zero = sum(decompose(read_derivative(x, p), k).sigma) == 0
                if zero:
                    assert is_fine(x, p)
                if k % ell == 0:
                    assert zero == is_fine(x, p)


@pytest.mark.parametrize("k,ell", [(1, 2), (2, 2), (2, 4), (3, 2)])
def test_code_balls_disjoint(k, ell):
    for n in range(1, 8):
        code = build_nucleus_code(Params(2, ell, k, n))
        seen = {}
        for c, rep in enumerate(code.representatives):
            for v in ball(read_vector(rep, ell, 2), k, 3):
                assert seen.setdefault(v, c) == c, (n, rep, v)


@pytest.mark.parametrize("k,ell", [(2, 2), (4, 2), (3, 3), (3, 2), (2, 3)])
def test_code_size_sandwich(k, ell):
    for n in range(1, 11):
        p = Params(2, ell, k, n)
        code = build_nucleus_code(p)
        c0 = dict(depth_partition(code))[0]
        assert c0 <= len(code) <= n * n * count_fine_fast(p)


@pytest.mark.parametrize("k,ell", [(2, 2), (4, 2), (2, 3), (3, 2)])
def test_commutation_exhaustive(k, ell):
    for n in range(2 * k + ell - 1, 11):
        p = Params(2, ell, k, n)
        for x in itertools.product(range(2), repeat=n):
            if is_fine(x, p):
                continue
            lhs = rem_step(read_derivative(x, p), rem_position(x, p), k)
            assert lhs == read_derivative(del_step(x, p), Params(2, ell, k, n - k))
