"""Named invariant suites behind ``dupread verify``.

Each suite returns a :class:`SuiteResult`; brute-force ball searches and
exhaustive scans serve as oracles for the closed-form or algebraic paths.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

import numpy as np

from . import kernels, rates
from .bounded import SidonCode, decode, greedy_sidon, syndrome
from .channel import ball, common_descendant, descendants, random_duplications
from .derivative import decompose, delta_k, nucleus, read_derivative
from .seqcore import Params, is_periodic, read_vector
from .unbounded import (
    count_duplication_contexts,
    count_fine_bruteforce,
    count_fine_fast,
    del_step,
    depth_zero_mask,
    context_count_bound,
    rem_position,
    rem_step,
    zero_block_starts,
)

# q = 4 reference rates, rounded to 6 decimals: (k, ell) -> (lower, upper)
REFERENCE_RATES_Q4 = {
    (1, 5): (0.792481, 0.792481),
    (2, 5): (0.896241, 0.999868),
    (3, 5): (0.995182, 0.999967),
    (4, 5): (0.998906, 0.999992),
    (5, 5): (0.999998, 0.999998),
    (6, 5): (0.999917, 0.999999),
    (7, 5): (0.999979, 1.000000),
    (8, 5): (0.999995, 1.000000),
    (9, 5): (0.999999, 1.000000),
    (1, 9): (0.792481, 0.792481),
    (2, 9): (0.896241, 0.999999),
    (3, 9): (0.994779, 1.000000),
    (4, 9): (0.998891, 1.000000),
    (5, 9): (0.999664, 1.000000),
    (6, 9): (0.999875, 1.000000),
    (7, 9): (0.999946, 1.000000),
    (8, 9): (0.999973, 1.000000),
    (9, 9): (1.000000, 1.000000),
}


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, detail) -> None:
        self.cases += 1
        if not ok and len(self.failures) < 20:
            self.failures.append(str(detail))
        elif not ok:
            self.failures.append("...")

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: {self.cases} cases, {len(self.failures)} failures"


def _random_psi_vector(rng, q, ell, length):
    out = []
    for _ in range(length):
        size = rng.randint(0, ell)
        out.append(tuple(np.bincount([rng.randrange(q) for _ in range(size)], minlength=q).tolist()))
    return tuple(out)


def suite_nucleus_invariance(trials: int = 10_000, seed: int = 2) -> SuiteResult:
    """Duplication chains leave mu fixed and raise sigma by exactly t in total."""
    res = SuiteResult("lemma2")
    rng = random.Random(seed)
    while res.cases < trials:
        q, ell, k = rng.randint(2, 4), rng.randint(1, 4), rng.randint(1, 4)
        t = rng.randint(0, 4)
        if rng.random() < 0.5:
            x = [rng.randrange(q) for _ in range(rng.randint(1, 10))]
            z = read_vector(x, ell, q)
        else:
            z = _random_psi_vector(rng, q, ell, rng.randint(k, 12))
        if len(z) < k:
            continue
        z2, events = random_duplications(z, k, t, rng.getrandbits(64))
        a, b = decompose(delta_k(z, k), k), decompose(delta_k(z2, k), k)
        diff = [y - x for x, y in zip(a.sigma, b.sigma)]
        ok = a.mu == b.mu and len(a.sigma) == len(b.sigma) and min(diff) >= 0 and sum(diff) == t
        res.check(ok, (q, ell, k, z, events))
    return res


def suite_zero_insertion(q=2, n_max=5, pairs=((1, 1), (2, 2), (3, 2), (2, 3))) -> SuiteResult:
    """The derivative of T_{i,k}(z) is the derivative of z with 0^k inserted after i+k entries."""
    res = SuiteResult("zero-insertion")
    for k, ell in pairs:
        for n in range(1, n_max + 1):
            for x in itertools.product(range(q), repeat=n):
                z = read_vector(x, ell, q)
                d = delta_k(z, k)
                zero = ((0,) * q,) * k
                for i in range(len(z) - k + 1):
                    dup = z[: i + k] + z[i:]
                    res.check(delta_k(dup, k) == d[: i + k] + zero + d[i + k :], (k, ell, x, i))
    return res


def suite_intersection(q=2, n_max=6, pairs=((2, 2), (3, 2), (2, 3)), radius=2) -> SuiteResult:
    """Equal nuclei <=> a common descendant exists.

    Equal nuclei: the constructed common vector is found by breadth-first
    search from both read vectors at the exact required depths. Unequal
    nuclei: bounded balls (radius ``radius``) never meet and every ball member
    keeps its source nucleus.
    """
    res = SuiteResult("lemma3")
    for k, ell in pairs:
        seqs = [x for n in range(1, n_max + 1) for x in itertools.product(range(q), repeat=n)]
        info = {}
        for x in seqs:
            p = Params(q, ell, k, len(x))
            dec = decompose(read_derivative(x, p), k)
            info[x] = (dec.mu, dec.sigma, read_vector(x, ell, q))
        owners: dict = {}
        for x in seqs:
            p = Params(q, ell, k, len(x))
            mu, _, z = info[x]
            for v in ball(z, k, radius):
                res.check(decompose(delta_k(v, k), k).mu == mu, ("mu drift", k, ell, x, v))
                owners.setdefault(v, set()).add(mu)
        for v, mus in owners.items():
            res.check(len(mus) == 1, ("balls meet across nuclei", k, ell, v))
        memo = {}

        def reach(x, steps):
            key = (x, steps)
            if key not in memo:
                memo[key] = descendants(info[x][2], k, steps)
            return memo[key]

        by_mu: dict = {}
        for x in seqs:
            by_mu.setdefault(info[x][0], []).append(x)
        for group in by_mu.values():
            for x, y in itertools.combinations_with_replacement(group, 2):
                p = Params(q, ell, k, len(x))
                w = common_descendant(x, y, p)
                ok = w is not None and w in reach(x, sum(info[y][1])) and w in reach(y, sum(info[x][1]))
                res.check(ok, ("no common descendant", k, ell, x, y))
        for x, y in itertools.combinations(seqs[:: max(1, len(seqs) // 40)], 2):
            if info[x][0] != info[y][0]:
                res.check(common_descendant(x, y, Params(q, ell, k, len(x))) is None, ("spurious", x, y))
    return res


def suite_zero_blocks(q=2, n_max=10, pairs=((2, 2), (4, 2), (3, 3), (4, 4))) -> SuiteResult:
    """For l | k every 0^k block in the read derivative comes from a k-periodic window."""
    res = SuiteResult("lemma4")
    for k, ell in pairs:
        for n in range(1, n_max + 1):
            p = Params(q, ell, k, n)
            for x in itertools.product(range(q), repeat=n):
                for s in zero_block_starts(x, p):
                    i = s - ell - k + 1
                    w = x[i - 1 : i + 2 * k + ell - 2]
                    ok = i >= 1 and len(w) == 2 * k + ell - 1 and is_periodic(w, k)
                    res.check(ok, (k, ell, x, s))
    return res


def suite_fine_monotone(q_set=(2, 3), ks=(2, 3), ells=(2, 3), n_extra=30) -> SuiteResult:
    res = SuiteResult("lemma6")
    for q in q_set:
        for k in ks:
            for ell in ells:
                p = Params(q, ell, k, 1)
                start = 2 * k + ell - 1
                counts = [
                    count_fine_bruteforce(p, n) if q**n <= 1 << 16 else count_fine_fast(p, n)
                    for n in range(start, start + n_extra)
                ]
                for n, (a, b) in enumerate(zip(counts, counts[1:]), start):
                    res.check(a <= b, (q, k, ell, n, a, b))
    return res


def suite_context_bound(q_set=(2, 3), ks=(2, 3, 4), ells=(2, 3, 4)) -> SuiteResult:
    res = SuiteResult("lemma7")
    for q in q_set:
        for k in ks:
            for ell in ells:
                p = Params(q, ell, k, 1)
                c = count_duplication_contexts(p)
                res.check(c <= context_count_bound(p), (q, k, ell, c, context_count_bound(p)))
                if k % ell == 0:
                    res.check(c == q**k, ("periodic count", q, k, ell, c))
    return res


def plant_periodic(rng, q, k, ell, n):
    x = [rng.randrange(q) for _ in range(n)]
    w = 2 * k + ell - 1
    i = rng.randint(0, n - w)
    period = [rng.randrange(q) for _ in range(k)]
    for j in range(w):
        x[i + j] = period[j % k]
    return tuple(x)


def suite_eq_commute(trials: int = 10_000, seed: int = 7) -> SuiteResult:
    """Deleting the first periodic k-block commutes with removing its 0^k."""
    res = SuiteResult("eq-commute")
    rng = random.Random(seed)
    for _ in range(trials):
        q, k, ell = rng.randint(2, 4), rng.randint(2, 5), rng.randint(2, 5)
        n = rng.randint(2 * k + ell - 1, 2 * k + ell + 12)
        p = Params(q, ell, k, n)
        x = plant_periodic(rng, q, k, ell, n)
        lhs = rem_step(read_derivative(x, p), rem_position(x, p), k)
        y = del_step(x, p)
        ok = lhs == read_derivative(y, p) and nucleus(y, Params(q, ell, k, len(y))) == nucleus(x, p)
        res.check(ok, (q, k, ell, x))
    return res


def suite_depth_zero(q=2, n_max=12, pairs=((2, 2), (4, 2), (3, 3), (3, 2), (2, 3))) -> SuiteResult:
    """Depth-0 sequences equal the fine ones when l | k, and are a subset otherwise."""
    res = SuiteResult("thm7")
    for k, ell in pairs:
        for n in range(1, n_max + 1):
            p = Params(q, ell, k, n)
            X = kernels.sequences(q, n)
            zero = depth_zero_mask(X, p)
            fine = kernels.fine_mask(X, k, ell)
            res.check(bool(np.all(~zero | fine)), ("C0 not inside F", k, ell, n))
            if k % ell == 0:
                res.check(bool(np.array_equal(zero, fine)), ("C0 != F", k, ell, n))
    return res


def suite_rate_table(tol: float = 5e-7) -> SuiteResult:
    res = SuiteResult("table2")
    for (k, ell), (lo, hi) in REFERENCE_RATES_Q4.items():
        b = rates.rate_bounds(k, ell, 4)
        res.check(abs(b.lower - lo) <= tol, (k, ell, "lower", b.lower, lo))
        res.check(abs(b.upper - hi) <= tol, (k, ell, "upper", b.upper, hi))
    return res


def decoder_exhaustive(q, n, k, ell, t, res: SuiteResult) -> None:
    p = Params(q, ell, k, n, t)
    sidon = greedy_sidon(n + ell, t)
    codes = {}
    for x in itertools.product(range(q), repeat=n):
        g = syndrome(x, p, sidon)
        code = codes.get(g)
        if code is None:
            code = codes[g] = SidonCode(p, sidon, g)
        for z in ball(read_vector(x, ell, q), k, t):
            try:
                ok = decode(z, code) == x
            except ValueError as exc:
                ok = False
                z = (z, exc)
            res.check(ok, (p, x, z))


def decoder_random(q, n, k, ell, t, trials, seed, res: SuiteResult) -> None:
    from .bounded import best_coset, coset_members

    p = Params(q, ell, k, n, t)
    sidon = greedy_sidon(n + ell, t)
    g, _ = best_coset(p, sidon)
    members = coset_members(p, sidon, g)
    code = SidonCode(p, sidon, g)
    rng = random.Random(seed)
    for _ in range(trials):
        x = members[rng.randrange(len(members))]
        z, events = random_duplications(read_vector(x, ell, q), k, t, rng.getrandbits(64))
        try:
            ok = decode(z, code) == x
        except ValueError:
            ok = False
        res.check(ok, (p, x, events))


def suite_decoder(n_max=6, trials=500, seed=11) -> SuiteResult:
    res = SuiteResult("decoder")
    for k, ell in ((1, 1), (2, 2), (2, 1), (3, 2)):
        for n in range(1, n_max + 1):
            for t in range(3):
                decoder_exhaustive(2, n, k, ell, t, res)
    decoder_random(4, 8, 3, 2, 2, trials, seed, res)
    return res


SUITES = {
    "lemma2": suite_nucleus_invariance,
    "lemma3": suite_intersection,
    "lemma4": suite_zero_blocks,
    "lemma6": suite_fine_monotone,
    "lemma7": suite_context_bound,
    "eq-commute": suite_eq_commute,
    "thm7": suite_depth_zero,
    "table2": suite_rate_table,
    "decoder": suite_decoder,
    "zero-insertion": suite_zero_insertion,
}


def run(name: str) -> list:
    if name == "all":
        return [fn() for fn in SUITES.values()]
    return [SUITES[name]()]
