"""RSK, patience sorting and last passage against worked examples and brute force."""
import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rmt_lab.partitions import Partition, partitions_of, plancherel_mass, transpose
from rmt_lab.rsk import (
    BiWord,
    CountMatrix,
    TableauPair,
    biword_to_matrix,
    lis_length,
    lis_lengths,
    longest_increasing,
    matrix_to_biword,
    optimal_path_weight,
    optimal_path_weights,
    rsk,
    rsk_inverse,
    rsk_shape,
    rsk_word,
)
from rmt_lab.simulate import RngConfig, sample_permutations

GP_TOP = (1, 1, 1, 2, 2, 2, 3, 3, 4, 4)
GP_BOTTOM = (2, 3, 3, 1, 2, 2, 1, 2, 1, 3)
GP_P = ((1, 1, 1, 2, 3), (2, 2, 2), (3, 3))
GP_Q = ((1, 1, 1, 3, 4), (2, 2, 2), (3, 4))
GP_W = [[0, 1, 2], [1, 2, 0], [1, 1, 0], [1, 0, 1]]


def _lis_dp(seq, strict=True):
    # quadratic oracle
    best = []
    for i, v in enumerate(seq):
        cands = [best[j] for j in range(i) if (seq[j] < v if strict else seq[j] <= v)]
        best.append(1 + max(cands, default=0))
    return max(best, default=0)


def _lpp_brute(W):
    p, q = W.shape
    best = -math.inf
    # a monotone path is a choice of which of the p+q-2 steps go down
    for downs in itertools.combinations(range(p + q - 2), p - 1):
        i = j = 0
        s = W[0, 0]
        for k in range(p + q - 2):
            if k in downs:
                i += 1
            else:
                j += 1
            s += W[i, j]
        best = max(best, s)
    return best


def _random_biword(g, nmax=200):
    p, q = (int(v) for v in g.integers(1, 8, 2))
    n = int(g.integers(0, nmax + 1))
    pairs = sorted(zip(g.integers(1, p + 1, n).tolist(), g.integers(1, q + 1, n).tolist()))
    return BiWord.from_pairs(pairs, p, q)


# -- worked examples ------------------------------------------------------------

def test_gp_example_rsk():
    bw = BiWord(GP_TOP, GP_BOTTOM, 4, 3)
    t = rsk(bw)
    assert t.P == GP_P and t.Q == GP_Q
    assert t.shape == Partition((5, 3, 2))
    assert rsk_inverse(t, 4, 3) == bw


def test_gp_example_matrix():
    bw = BiWord(GP_TOP, GP_BOTTOM, 4, 3)
    W = biword_to_matrix(bw)
    assert W.entries.tolist() == GP_W
    assert matrix_to_biword(W) == bw
    assert optimal_path_weight(W) == 5
    assert lis_length(GP_BOTTOM, strict=False) == 5


def test_permutation_example():
    t = rsk(BiWord.from_permutation((5, 1, 4, 3, 2)))
    assert t.P == ((1, 2), (3,), (4,), (5,))
    assert t.Q == ((1, 3), (2,), (4,), (5,))
    assert t.shape == Partition((2, 1, 1, 1))


def test_empty():
    t = rsk(BiWord((), (), 1, 1))
    assert t.P == () and t.Q == ()
    assert len(rsk_inverse(t)) == 0


def test_single_pair_matrix():
    W = biword_to_matrix(BiWord((1,), (1,), 1, 1))
    assert W.entries.tolist() == [[1]]


def test_count_of_generalized_permutations():
    # 2x2 matrices with total 2
    mats = [m for m in itertools.product(range(3), repeat=4) if sum(m) == 2]
    assert len(mats) == math.comb(2 * 2 + 2 - 1, 2) == 10
    bws = {matrix_to_biword(np.array(m).reshape(2, 2)) for m in mats}
    assert len(bws) == 10


def test_patience_examples():
    res = longest_increasing((3, 1, 4, 2, 6, 7, 5))
    assert res.length == 4 and len(res.piles) == 4
    assert lis_length((2, 1, 1, 3, 2), strict=False) == 3
    assert lis_length(list(range(1, 30))) == 29
    assert lis_length([]) == 0


def test_patience_piles_are_decreasing():
    res = longest_increasing((3, 1, 4, 2, 6, 7, 5))
    for pile in res.piles:
        assert list(pile) == sorted(pile, reverse=True)


def test_path_weight_examples():
    assert optimal_path_weight(np.zeros((3, 4), dtype=int)) == 0
    assert optimal_path_weight(np.array([[1, 2], [3, 4]])) == 8
    with pytest.raises(ValueError):
        optimal_path_weight(np.zeros((0, 2)))


def test_malformed_inputs():
    with pytest.raises(ValueError):
        BiWord((2, 1), (1, 1), 2, 2)
    with pytest.raises(ValueError):
        BiWord((1,), (3,), 2, 2)
    with pytest.raises(ValueError):
        TableauPair(((1, 2),), ((1,), (2,)))
    with pytest.raises(ValueError):
        CountMatrix(np.array([[1, -1]]))


# -- invariants ---------------------------------------------------------------------

def test_triple_equality_and_round_trip():
    g = RngConfig(7).generator()
    for _ in range(1000):
        bw = _random_biword(g)
        t = rsk(bw)
        lam1 = t.shape[0] if len(t.shape) else 0
        L = lis_length(bw.bottom, strict=False)
        W = optimal_path_weight(biword_to_matrix(bw)) if len(bw) else 0
        assert L == lam1 == W
        assert rsk_inverse(t, bw.p, bw.q) == bw


def test_patience_matches_dp():
    g = RngConfig(8).generator()
    for _ in range(300):
        n = int(g.integers(0, 40))
        seq = g.integers(1, 6, n).tolist()
        assert lis_length(seq, strict=True) == _lis_dp(seq, True)
        assert lis_length(seq, strict=False) == _lis_dp(seq, False)
    rows = g.integers(1, 10, (50, 25))
    assert lis_lengths(rows).tolist() == [_lis_dp(r.tolist()) for r in rows]


def test_lpp_matches_path_enumeration():
    g = RngConfig(9).generator()
    for _ in range(100):
        W = g.exponential(size=tuple(g.integers(1, 6, 2)))
        assert optimal_path_weight(W) == pytest.approx(_lpp_brute(W), abs=1e-12)
    stack = g.integers(0, 4, (20, 3, 5))
    assert optimal_path_weights(stack).tolist() == [_lpp_brute(w) for w in stack]


def _check_symmetries(perm):
    n = len(perm)
    t = rsk(BiWord.from_permutation(perm))
    inv = [0] * n
    for i, v in enumerate(perm):
        inv[v - 1] = i + 1
    ti = rsk(BiWord.from_permutation(inv))
    assert ti.P == t.Q and ti.Q == t.P
    lam = t.shape
    assert lis_length(perm) == lam[0]
    assert lis_length([-v for v in perm]) == len(lam)
    if inv == list(perm):
        assert t.P == t.Q
        fixed = sum(perm[i] == i + 1 for i in range(n))
        assert sum(c % 2 for c in transpose(lam)) == fixed


def test_permutation_symmetries_exhaustive():
    for n in range(1, 7):
        for perm in itertools.permutations(range(1, n + 1)):
            _check_symmetries(perm)


def test_permutation_symmetries_sampled():
    g = RngConfig(10).generator()
    for n in range(7, 51):
        for perm in sample_permutations(n, 10, g):
            _check_symmetries(perm.tolist())
        # random involutions
        for _ in range(5):
            perm = list(range(1, n + 1))
            idx = g.permutation(n)
            for a, b in zip(idx[: 2 * (n // 4)][::2], idx[: 2 * (n // 4)][1::2]):
                perm[a], perm[b] = perm[b], perm[a]
            _check_symmetries(perm)


def test_word_recording_is_standard():
    t = rsk_word((2, 1, 1, 3, 2), q=3)
    assert t.standard_q
    assert sorted(v for r in t.Q for v in r) == [1, 2, 3, 4, 5]
    assert t.shape[0] == 3
    assert rsk_shape((2, 1, 1, 3, 2)) == t.shape


def test_plancherel_pushforward():
    n, m = 6, 100_000
    perms = sample_permutations(n, m, RngConfig(20261015).generator())
    counts: dict = {}
    for perm in perms:
        lam = rsk_shape(perm)
        counts[lam] = counts.get(lam, 0) + 1
    for lam in partitions_of(n):
        p = float(plancherel_mass(lam))
        se = math.sqrt(p * (1 - p) / m)
        assert abs(counts.get(lam, 0) / m - p) < 3 * se, lam


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 5), st.integers(1, 5)), max_size=40))
def test_round_trip_property(pairs):
    bw = BiWord.from_pairs(sorted(pairs), 5, 5)
    assert rsk_inverse(rsk(bw), 5, 5) == bw
    assert matrix_to_biword(biword_to_matrix(bw)) == bw
