"""Seeded samplers, deterministic model identities and empirical limit checks."""
import itertools
import json
import math
from collections import Counter

import numpy as np
import pytest
from scipy import integrate, stats

from rmt_lab.exact_laws import geometric_lpp_cdf, perm_lis_cdf
from rmt_lab.kernels import gap_probability
from rmt_lab.rsk import optimal_path_weight, rsk_shape
from rmt_lab.simulate import (
    EmpiricalCdf,
    RngConfig,
    edge_rescale,
    finite_q_gaussian_ratio,
    finite_q_limit_check,
    gue_edge_samples,
    lis_samples,
    lpp_samples,
    png_height,
    png_heights,
    png_to_lpp_matrix,
    queue_departure,
    sample_exponential_matrix,
    sample_geometric_matrix,
    sample_gue,
    sample_permutation,
    sample_permutations,
    sample_png_field,
    sample_word,
    semicircle_density,
    semicircle_histogram_deviation,
    shape_deviation,
    summarize,
    two_atom_discriminant,
    two_atom_equilibrium,
    two_atom_support,
    word_lis_samples,
)

SEED = 20261015


# -- streams ----------------------------------------------------------------------------

def test_rng_reproducible():
    a = RngConfig(5, 1).generator().random(10)
    b = RngConfig(5, 1).generator().random(10)
    c = RngConfig(5, 2).generator().random(10)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    with pytest.raises(ValueError):
        RngConfig(-1)


def test_bulk_samplers_independent_of_threads(monkeypatch):
    one = lis_samples(30, 2500, RngConfig(3))
    monkeypatch.setenv("RMT_LAB_THREADS", "4")
    four = lis_samples(30, 2500, RngConfig(3))
    assert np.array_equal(one, four)


def test_bulk_samplers_need_seed():
    with pytest.raises(TypeError):
        lis_samples(5, 10, np.random.default_rng(0))


# -- permutations and words --------------------------------------------------------------

def test_permutation_trivial():
    assert sample_permutation(1, 0).tolist() == [1]
    assert sample_permutation(0, 0).tolist() == []


def test_permutation_uniform_s3():
    perms = sample_permutations(3, 60_000, RngConfig(SEED).generator())
    c = Counter(map(tuple, perms.tolist()))
    obs = [c[p] for p in itertools.permutations((1, 2, 3))]
    assert stats.chisquare(obs).pvalue > 1e-3


def test_word_letters_uniform():
    w = sample_word(50, 4, RngConfig(SEED).generator(), size=2000)
    obs = np.bincount(w.ravel(), minlength=5)[1:]
    assert w.min() >= 1 and w.max() <= 4
    assert stats.chisquare(obs).pvalue > 1e-3


def test_perm_lis_monte_carlo():
    m = 100_000
    for n in range(1, 9):
        L = lis_samples(n, m, RngConfig(SEED, n))
        for k in range(1, n + 1):
            p = float(perm_lis_cdf(n, k))
            sigma = math.sqrt(p * (1 - p) / m)
            assert abs(np.mean(L <= k) - p) <= 3 * sigma + 1e-12, (n, k)


def test_word_lis_samples_bounds():
    L = word_lis_samples(12, 3, 500, RngConfig(1))
    assert L.min() >= 4 and L.max() <= 12  # pigeonhole: some letter appears >= 4 times


# -- matrices -------------------------------------------------------------------------------

def test_geometric_small_xi():
    W = sample_geometric_matrix(5, 5, 1e-12, RngConfig(1).generator())
    assert not W.any()


@pytest.mark.parametrize("xi", [0.2, 0.5, 0.8])
def test_geometric_moments(xi):
    x = sample_geometric_matrix(100, 100, xi, RngConfig(SEED).generator(), size=20).ravel().astype(float)
    N = x.size
    mean, var = xi / (1 - xi), xi / (1 - xi) ** 2
    assert abs(x.mean() - mean) < 3 * math.sqrt(var / N)
    m4 = np.mean((x - x.mean()) ** 4)
    assert abs(x.var(ddof=1) - var) < 3 * math.sqrt((m4 - var**2) / N)


def test_geometric_bad_xi():
    with pytest.raises(ValueError):
        sample_geometric_matrix(2, 2, 1.0, RngConfig(1).generator())


def test_exponential_law():
    x = sample_exponential_matrix(50, 50, RngConfig(SEED).generator(), size=4).ravel()
    assert (x >= 0).all()
    assert stats.kstest(x, "expon").pvalue > 1e-3


def test_geometric_lpp_monte_carlo():
    m = 1_000_000
    for p in (1, 2, 3):
        for q in (1, 2, 3):
            for xi in (0.2, 0.5):
                L = lpp_samples(p, q, xi, m, RngConfig(SEED, 100 * p + 10 * q + int(10 * xi)))
                for ell in range(13):
                    ex = float(geometric_lpp_cdf(p, q, xi, ell))
                    sigma = math.sqrt(ex * (1 - ex) / m)
                    assert abs(np.mean(L <= ell) - ex) <= 3 * sigma + 1e-9, (p, q, xi, ell)


# -- queue and polynuclear growth -------------------------------------------------------------

def test_queue_examples():
    assert queue_departure([[3.5]]) == 3.5
    assert queue_departure([[1, 2], [3, 4]]) == 8
    with pytest.raises(ValueError):
        queue_departure([[1, -1]])


def test_queue_equals_last_passage():
    g = RngConfig(SEED).generator()
    for _ in range(10_000):
        V = g.integers(0, 7, tuple(g.integers(1, 7, 2)))
        assert queue_departure(V) == optimal_path_weight(V)


def test_png_zero_field():
    om = np.zeros((7, 13), dtype=np.int64)
    assert not png_heights(om).any()
    assert png_height(1, 3, om) == 0


def test_png_single_nucleation():
    T = 6
    om = np.zeros((T + 1, 2 * T + 1), dtype=np.int64)
    om[1, T] = 1  # omega(0, 1)
    h = png_heights(om)
    for t in range(T + 1):
        for x in range(-T, T + 1):
            assert h[t, x + T] == (1 if t >= 1 and abs(x) <= t - 1 else 0)


def test_png_support_rule():
    om = np.zeros((5, 9), dtype=np.int64)
    om[2, 4] = 1  # t - x = 2 even
    with pytest.raises(ValueError):
        png_heights(om)


def test_png_equals_last_passage():
    g = RngConfig(SEED).generator()
    for _ in range(1000):
        T = 39
        om = sample_png_field(T, float(g.uniform(0.1, 0.7)), g)
        for _ in range(4):
            t = int(g.integers(1, 21))
            x = int(g.integers(-t + 1, t))
            assert png_height(x, t, om) == optimal_path_weight(png_to_lpp_matrix(x, t, om))


# -- GUE -------------------------------------------------------------------------------------

def test_gue_one_point():
    z = sample_gue(1, RngConfig(SEED), size=20_000).ravel()
    assert stats.kstest(z, "norm", args=(0, math.sqrt(0.5))).pvalue > 1e-3


def test_gue_two_point_gap():
    m = 100_000
    eig = sample_gue(2, RngConfig(SEED), size=m)
    for y in (-0.5, 0.0, 0.5, 1.0, 1.5):
        p = gap_probability("hermite", 2, [(y, math.inf)])
        sigma = math.sqrt(p * (1 - p) / m)
        assert abs(np.mean(eig[:, -1] <= y) - p) <= 3 * sigma


def test_gue_trace():
    n, m = 6, 50_000
    tr = sample_gue(n, RngConfig(SEED), size=m).sum(axis=1)
    var = n / 2
    assert abs(tr.mean()) < 3 * math.sqrt(var / m)
    assert abs(tr.var(ddof=1) - var) < 3 * var * math.sqrt(2 / (m - 1))


def test_gue_single_sample_sorted():
    z = sample_gue(5, RngConfig(2).generator())
    assert z.shape == (5,) and np.all(np.diff(z) >= 0)


def test_edge_rescale_zero():
    n = 50
    eigs = np.linspace(-1, math.sqrt(2 * n), n)
    assert edge_rescale(eigs, n) == 0.0


def test_gue_edge_mean_n200():
    x = gue_edge_samples(200, 1000, RngConfig(SEED))
    assert abs(x.mean() - (-1.77109)) < 0.15


# -- equilibrium densities ---------------------------------------------------------------------

def test_semicircle():
    assert semicircle_density(0.0) == pytest.approx(1 / math.pi, abs=1e-16)
    assert semicircle_density(2.5) == 0.0
    for v in (1.0, 0.5, 2.0):
        mass = integrate.quad(lambda z: semicircle_density(z, v), -2 * v, 2 * v, epsabs=1e-12)[0]
        assert abs(mass - 1) < 1e-8


def test_semicircle_histogram_deviation():
    assert semicircle_histogram_deviation(200, 10, RngConfig(SEED)) < 0.1
    with pytest.raises(TypeError):
        semicircle_histogram_deviation(20, 2, np.random.default_rng(0))


def test_two_atom_equal_atoms():
    z = np.linspace(-2.5, 3.5, 61)
    for a, p in [(0.5, 0.3), (0.0, 0.5), (-1.0, 0.8)]:
        assert np.max(np.abs(two_atom_equilibrium(z + a, a, a, p) - semicircle_density(z))) < 1e-8


@pytest.mark.parametrize("alpha, beta, p", [(-1.0, 1.0, 0.5), (-2.0, 2.0, 0.3), (0.0, 3.0, 0.6)])
def test_two_atom_support_and_mass(alpha, beta, p):
    D1 = two_atom_discriminant(alpha, beta, p)
    assert D1.degree() == 4
    ends = two_atom_support(alpha, beta, p)
    # sign changes of D1 located on a fine grid
    z = np.linspace(ends[0] - 1, ends[-1] + 1, 200_001)
    s = np.sign(D1(z))
    changes = z[1:][s[1:] != s[:-1]]
    assert len(changes) == len(ends)
    assert np.max(np.abs(changes - ends)) < 1e-4
    pieces = list(zip(ends[::2], ends[1::2]))
    mass = sum(integrate.quad(lambda u: two_atom_equilibrium(u, alpha, beta, p), a, b, limit=200)[0] for a, b in pieces)
    assert abs(mass - 1) < 1e-6
    outside = np.concatenate([np.linspace(ends[0] - 2, ends[0] - 1e-3, 20), np.linspace(ends[-1] + 1e-3, ends[-1] + 2, 20)])
    assert not two_atom_equilibrium(outside, alpha, beta, p).any()


# -- limit shape ---------------------------------------------------------------------------------

def test_shape_deviation_trend():
    devs = [shape_deviation(n, s, RngConfig(SEED, n).generator()) for n, s in [(100, 20), (1000, 20), (10_000, 5)]]
    assert devs[0] > devs[1] > devs[2]
    assert devs[2] < 0.15


def test_first_row_concentrates():
    n = 10_000
    g = RngConfig(SEED).generator()
    ratios = [rsk_shape(sample_permutation(n, g))[0] / (2 * math.sqrt(n)) for _ in range(50)]
    assert np.mean(np.abs(np.array(ratios) - 1) < 0.1) == 1.0


def test_shape_deviation_small_n():
    with pytest.raises(ValueError):
        shape_deviation(3, 1, RngConfig(0).generator())


# -- finite-q limit ------------------------------------------------------------------------------

def test_finite_q_one():
    for y in (-1.5, 0.0, 0.8):
        assert finite_q_gaussian_ratio(1, y) == pytest.approx(stats.norm.cdf(y), abs=1e-12)


def test_finite_q_limit():
    lhs, rhs = finite_q_limit_check(2, 400, 0.5, 0.0)
    assert abs(lhs - rhs) < 0.02


def test_finite_q_right_limit():
    assert finite_q_gaussian_ratio(2, 8.0) > 1 - 1e-10
    assert finite_q_gaussian_ratio(3, 9.0) > 1 - 1e-10


# -- summaries ------------------------------------------------------------------------------------

def test_empirical_cdf():
    x = RngConfig(SEED).generator().random(5000)
    F = EmpiricalCdf(x)
    vals = F(np.linspace(-0.5, 1.5, 101))
    assert vals[0] == 0 and vals[-1] == 1 and np.all(np.diff(vals) >= 0)
    d = F.ks_distance(lambda t: np.clip(t, 0, 1))
    assert abs(d - stats.kstest(x, "uniform").statistic) < 1e-12
    assert F.to_csv().splitlines()[0] == "x,F"


def test_ks_distance_on_lattice():
    # sup over the real line sees the jump at an atom
    F = EmpiricalCdf([0, 0, 1, 1])
    assert F.ks_distance(lambda t: np.clip(t, 0, 1)) == pytest.approx(0.5)


def test_summary_json():
    s = summarize("lis", {"n": 5}, 7, [1, 2, 3])
    d = json.loads(s.to_json())
    assert set(d) == {"model", "params", "seed", "n_samples", "statistics"}
    assert d["statistics"]["mean"] == 2.0 and d["n_samples"] == 3
