"""Exact finite-size laws against exhaustive enumeration and cross-route identities."""
import itertools
import math
from collections import Counter
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest

from rmt_lab.exact_laws import (
    depoissonization_bracket,
    geometric_lpp_cdf,
    geometric_lpp_cdf_table,
    perm_lis_cdf,
    perm_lis_table,
    poissonized_plancherel_cdf,
    walk_count_general,
    walk_return_probability,
    word_lis_cdf,
    word_lis_table,
)
from rmt_lab.kernels import gessel_toeplitz
from rmt_lab.rsk import lis_lengths
from rmt_lab.simulate import RngConfig, lpp_samples


def _brute_perm_cdf(n):
    perms = np.array(list(itertools.permutations(range(1, n + 1))), dtype=np.int64)
    c = Counter(lis_lengths(perms).tolist())
    total = math.factorial(n)
    return [Fraction(sum(v for L, v in c.items() if L <= k), total) for k in range(n + 1)]


def _brute_word_cdf(n, q):
    words = np.array(list(itertools.product(range(1, q + 1), repeat=n)), dtype=np.int64)
    c = Counter(lis_lengths(words, strict=False).tolist())
    return [Fraction(sum(v for L, v in c.items() if L <= k), q**n) for k in range(n + 1)]


def _brute_walks(x, y, T):
    """Count move sequences (one walker steps +-1 per tick) from x to y that never collide."""
    m = len(x)
    states = Counter({tuple(x): 1})
    for _ in range(T):
        nxt = Counter()
        for pos, c in states.items():
            for k in range(m):
                for d in (-1, 1):
                    new = list(pos)
                    new[k] += d
                    if all(a < b for a, b in zip(new, new[1:])):
                        nxt[tuple(new)] += c
        states = nxt
    return states.get(tuple(y), 0)


# -- permutations and words ---------------------------------------------------------

def test_perm_examples():
    assert perm_lis_cdf(3, 2) == Fraction(5, 6)
    assert perm_lis_cdf(5, 5) == 1 and perm_lis_cdf(5, 9) == 1
    for n in range(1, 8):
        assert perm_lis_cdf(n, 1) == Fraction(1, math.factorial(n))


def test_perm_brute_force():
    for n in range(1, 9):
        assert [perm_lis_cdf(n, k) for k in range(n + 1)] == _brute_perm_cdf(n)


def test_word_examples():
    for n in range(1, 6):
        for k in range(0, 7):
            assert word_lis_cdf(n, 1, k) == (1 if k >= n else 0)
    assert word_lis_cdf(2, 2, 1) == Fraction(1, 4)


def test_word_brute_force():
    for q in (1, 2, 3):
        for n in range(1, 8):
            assert [word_lis_cdf(n, q, k) for k in range(n + 1)] == _brute_word_cdf(n, q)


def test_word_total_mass():
    for q in (1, 2, 3):
        for n in range(1, 9):
            assert word_lis_cdf(n, q, n) == 1


def test_perm_monotone_in_n():
    for k in range(1, 9):
        vals = [perm_lis_cdf(n, k) for n in range(1, 11)]
        assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_tables():
    for tab in (perm_lis_table(6), word_lis_table(5, 3)):
        v = tab.values
        assert all(0 <= a <= 1 for a in v)
        assert all(a <= b for a, b in zip(v, v[1:]))
        assert v[-1] == 1
    csv = perm_lis_table(3).to_csv().splitlines()
    assert csv[0] == "model,n,argument,value"
    assert csv[3] == "perm_lis,3,2,5/6"


# -- geometric percolation ----------------------------------------------------------------

def test_geometric_single_entry():
    for xi in (0.1, 0.5, 0.9):
        for ell in range(6):
            assert float(geometric_lpp_cdf(1, 1, xi, ell)) == pytest.approx(1 - xi ** (ell + 1), abs=1e-15)


def test_geometric_large_ell():
    assert float(geometric_lpp_cdf(2, 3, 0.3, 80)) == pytest.approx(1.0, abs=1e-12)


def test_geometric_bad_xi():
    for xi in (0.0, 1.0, -0.2, 1.5):
        with pytest.raises(ValueError):
            geometric_lpp_cdf(2, 2, xi, 1)


def test_geometric_schur_vs_h():
    for p in range(1, 5):
        for q in range(1, 5):
            for xi in (0.1, 0.3, 0.5):
                for ell in (0, 2, 5):
                    a = geometric_lpp_cdf(p, q, xi, ell, method="schur")
                    b = geometric_lpp_cdf(p, q, xi, ell, method="h")
                    assert abs(a - b) < 1e-10


def test_geometric_table_matches_direct():
    tab = geometric_lpp_cdf_table(3, 4, 0.4, 8)
    for ell, v in enumerate(tab):
        assert abs(v - geometric_lpp_cdf(3, 4, 0.4, ell)) < 1e-20


def test_geometric_symmetric_in_p_q():
    assert geometric_lpp_cdf(2, 4, 0.3, 3) == geometric_lpp_cdf(4, 2, 0.3, 3)


def test_geometric_monte_carlo():
    m = 1_000_000
    L = lpp_samples(2, 2, 0.3, m, RngConfig(31))
    for ell in range(9):
        p = float(geometric_lpp_cdf(2, 2, 0.3, ell))
        emp = float(np.mean(L <= ell))
        sigma = math.sqrt(max(p * (1 - p), 1e-300) / m)
        assert abs(emp - p) <= 3 * sigma + 1e-12, ell


# -- Poissonized Plancherel ---------------------------------------------------------------

def test_poissonized_small_xi():
    for k in (1, 2, 3):
        assert poissonized_plancherel_cdf(0.0, k=k) == 1
        assert float(poissonized_plancherel_cdf(1e-12, k=k)) == pytest.approx(1.0, abs=1e-11)


def test_poissonized_vs_toeplitz():
    assert abs(float(poissonized_plancherel_cdf(1.0, k=2)) - gessel_toeplitz(1.0, 2)) < 1e-8


def test_poissonized_monotone():
    xs = np.linspace(0.1, 10, 25)
    for k in (1, 2, 4):
        vals = [float(poissonized_plancherel_cdf(x, k=k)) for x in xs]
        assert all(a >= b for a, b in zip(vals, vals[1:]))


def test_poissonized_k1_closed_form():
    # L <= 1 only for m <= 1 after Poissonization: e^{-xi} sum_m xi^m/(m!)^2
    xi = 2.5
    ref = mp.exp(-xi) * mp.besseli(0, 2 * mp.sqrt(xi))
    assert abs(poissonized_plancherel_cdf(xi, k=1) - ref) < 1e-15


# -- de-Poissonization ---------------------------------------------------------------------

def test_bracket_constant():
    assert depoissonization_bracket(100, lambda x: 0.7, 0.0) == (0.7, 0.7)


def test_bracket_contains_exact_value():
    F = lambda x: float(poissonized_plancherel_cdf(x, k=2))
    lo, hi = depoissonization_bracket(100, F, 1.0)
    exact = float(perm_lis_cdf(100, 2))
    assert lo <= exact <= hi
    assert lo <= hi


def test_bracket_ordered_for_decreasing_F():
    F = lambda x: math.exp(-x / 50)
    for k in (100, 200, 500):
        lo, hi = depoissonization_bracket(k, F, 0.5)
        assert lo <= hi


def test_bracket_rejects_small_k():
    with pytest.raises(ValueError):
        depoissonization_bracket(20, lambda x: 1.0, 0.0)


# -- walkers ---------------------------------------------------------------------------------

def test_walk_examples():
    assert walk_return_probability(1, 1) == Fraction(1, 2)
    assert walk_return_probability(1, 2) == Fraction(math.comb(4, 2), 16)


def test_walk_brute_force_close_packed():
    for m in (1, 2, 3):
        for n in range(0, 4 if m < 3 else 3):
            start = tuple(range(m))
            count = _brute_walks(start, start, 2 * n)
            assert walk_return_probability(m, n) == Fraction(count, (2 * m) ** (2 * n))


def test_walk_general_brute_force():
    configs = [
        ((0, 1), (0, 1)),
        ((-1, 1), (0, 1)),
        ((-2, 0), (-1, 1)),
        ((-1, 1), (-2, 1)),
        ((-2, -1, 2), (0, 1, 2)),
        ((-3,), (0,)),
        ((0,), (-1,)),
        ((0,), (-2,)),
    ]
    for x, y in configs:
        for T in range(0, 7):
            assert walk_count_general(x, y, T) == _brute_walks(x, y, T), (x, y, T)


def test_walk_general_invalid():
    with pytest.raises(ValueError):
        walk_count_general((0, 0), (0, 1), 2)
    with pytest.raises(ValueError):
        walk_count_general((0, 2), (0, 1), 2)


def test_tables_reject_negative_n():
    with pytest.raises(ValueError):
        perm_lis_table(-1)
    with pytest.raises(ValueError):
        word_lis_table(-1, 2)
