"""Exact finite-size laws.

Permutation and word LIS distributions are exact rationals. Laws that
depend on a real parameter (geometric percolation, Poissonized
Plancherel) are evaluated with :mod:`mpmath` at a configurable precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

import mpmath as mp

from ._util import write_csv
from .partitions import (
    Partition,
    dim_semistandard,
    dim_standard,
    partitions_in_box,
    partitions_of,
    skew_dim,
)


@dataclass
class DistributionTable:
    """CDF values on an integer grid with provenance."""

    model: str
    params: dict
    support: list[int]
    values: list = field(default_factory=list)

    def to_csv(self) -> str:
        keys = sorted(self.params)
        header = ["model", *keys, "argument", "value"]
        rows = [[self.model, *[self.params[k] for k in keys], s, v] for s, v in zip(self.support, self.values)]
        return write_csv(header, rows)


# -- permutations and words ---------------------------------------------------

def perm_lis_cdf(n: int, k: int) -> Fraction:
    """P(L(pi) <= k) for a uniform permutation of size n (n = 0 gives 1)."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be nonnegative")
    if k >= n:
        return Fraction(1)
    total = sum(dim_standard(lam) ** 2 for lam in partitions_of(n, max_part=k))
    return Fraction(total, math.factorial(n))


def word_lis_cdf(n: int, q: int, k: int) -> Fraction:
    """P(weak LIS <= k) for a uniform word of length n over q letters."""
    if q < 1:
        raise ValueError("q must be >= 1")
    if n == 0:
        return Fraction(1)
    total = sum(
        dim_standard(lam) * dim_semistandard(lam, q)
        for lam in partitions_of(n, max_part=k, max_length=q)
    )
    return Fraction(total, q**n)


def perm_lis_table(n: int) -> DistributionTable:
    if n < 0:
        raise ValueError("n must be nonnegative")
    ks = list(range(0, n + 1))
    return DistributionTable("perm_lis", {"n": n}, ks, [perm_lis_cdf(n, k) for k in ks])


def word_lis_table(n: int, q: int) -> DistributionTable:
    if n < 0 or q < 1:
        raise ValueError("need n >= 0 and q >= 1")
    ks = list(range(0, n + 1))
    return DistributionTable("word_lis", {"n": n, "q": q}, ks, [word_lis_cdf(n, q, k) for k in ks])


# -- geometric last-passage percolation ----------------------------------------

def _check_xi(xi) -> None:
    if not (0 < float(xi) < 1):
        raise ValueError("xi must lie in (0, 1)")


def geometric_lpp_cdf(p: int, q: int, xi, ell: int, method: str = "schur", dps: int = 30):
    """P(L <= ell) for the p x q matrix of i.i.d. geometric(xi) entries.

    ``method="schur"`` sums (1-xi)^{pq} xi^{|lam|} s_lam(1^p) s_lam(1^q) over
    partitions in the min(p,q) x ell box; ``method="h"`` sums the
    Vandermonde-squared weights over shifted coordinates h with the closed
    normalisation. Both sums are finite.
    """
    _check_xi(xi)
    if p < 1 or q < 1:
        raise ValueError("p, q must be >= 1")
    if ell < 0:
        return mp.mpf(0)
    if q > p:
        p, q = q, p
    with mp.workdps(dps):
        x = mp.mpf(xi)
        if method == "schur":
            acc = mp.mpf(0)
            for lam in partitions_in_box(q, ell):
                acc += dim_semistandard(lam, p) * dim_semistandard(lam, q) * x ** lam.weight
            val = (1 - x) ** (p * q) * acc
        elif method == "h":
            acc = mp.mpf(0)
            top = ell + q - 1
            for h in combinations(range(top + 1), q):
                vd = 1
                for a in range(q):
                    for b in range(a + 1, q):
                        vd *= h[b] - h[a]
                w = 1
                for hi in h:
                    w *= math.factorial(hi + p - q) // math.factorial(hi)
                acc += vd * vd * w * x ** sum(h)
            acc *= math.factorial(q)
            val = acc / _h_normaliser(p, q, x)
        else:
            raise ValueError(f"unknown method {method!r}")
        return +val


def _h_normaliser(p: int, q: int, x):
    z = x ** (q * (q - 1) // 2) * (1 - x) ** (-(p * q)) * math.factorial(q)
    for j in range(q):
        z *= math.factorial(j) * math.factorial(p - q + j)
    return z


def geometric_lpp_cdf_table(p: int, q: int, xi, ell_max: int, dps: int = 40) -> list:
    """P(L <= ell) for ell = 0..ell_max via q x q Hankel determinants.

    The symmetric h-sum equals q! det(sum_h h^{i+j} w(h)) restricted to
    h <= ell + q - 1, which makes large p (hundreds) cheap.
    """
    _check_xi(xi)
    if q > p:
        p, q = q, p
    with mp.workdps(dps):
        x = mp.mpf(xi)
        top = ell_max + q - 1
        # w(h) = (h+p-q)!/h! xi^h, built by the ratio recursion
        w = mp.mpf(math.factorial(p - q))
        csum = [mp.mpf(0)] * (2 * q - 1)
        out = []
        z = _h_normaliser(p, q, x)
        for h in range(top + 1):
            if h > 0:
                w *= mp.mpf(h + p - q) / h * x
            hp = mp.mpf(1)
            for k in range(2 * q - 1):
                csum[k] += hp * w
                hp *= h
            if h >= q - 1:
                M = mp.matrix(q, q)
                for i in range(q):
                    for j in range(q):
                        M[i, j] = csum[i + j]
                out.append(+(math.factorial(q) * mp.det(M) / z))
        return out


# -- Poissonized Plancherel --------------------------------------------------------

def _poisson_cap(xi: float, tol: float) -> int:
    # smallest m beyond the mode with term * geometric factor below tol
    m = int(math.ceil(xi)) + 1
    logterm = lambda k: -xi + k * math.log(xi) - math.lgamma(k + 1) if xi > 0 else -math.inf
    while True:
        ratio = xi / (m + 1)
        if ratio < 1 and math.exp(logterm(m + 1)) / (1 - ratio) < tol:
            return m
        m += 1


def poissonized_plancherel_cdf(xi, n_cap: int | None = None, k: int = 1, tol: float = 1e-16, dps: int = 30):
    """e^{-xi} sum_m xi^m/m! P(L(pi_m) <= k)."""
    if xi < 0:
        raise ValueError("xi must be >= 0")
    if xi == 0:
        return mp.mpf(1)
    if n_cap is None:
        n_cap = _poisson_cap(float(xi), tol)
    with mp.workdps(dps):
        x = mp.mpf(xi)
        acc = mp.mpf(0)
        term = mp.mpf(1)
        for m in range(n_cap + 1):
            if m > 0:
                term *= x / m
            c = perm_lis_cdf(m, k)
            acc += term * c.numerator / c.denominator
        return +(mp.exp(-x) * acc)


def depoissonization_bracket(k: int, F: Callable[[float], float], C: float):
    """(F(k + 4 sqrt(k log k)) - C/k^2, F(k - 4 sqrt(k log k)) + C/k^2)."""
    if k < 2:
        raise ValueError("k must be >= 2")
    s = 4.0 * math.sqrt(k * math.log(k))
    if k - s <= 0:
        raise ValueError(f"k={k} too small: k - 4 sqrt(k log k) = {k - s:.3g} <= 0")
    return (F(k + s) - C / k**2, F(k - s) + C / k**2)


# -- non-intersecting walks ---------------------------------------------------------

def walk_return_probability(m: int, n: int) -> Fraction:
    """Probability that m close-packed walkers return after 2n steps without meeting."""
    if m < 1 or n < 0:
        raise ValueError("need m >= 1, n >= 0")
    s = sum(dim_standard(lam) ** 2 for lam in partitions_of(n, max_length=m))
    return Fraction(math.comb(2 * n, n) * s, (2 * m) ** (2 * n))


def _walk_partition(x: Sequence[int]) -> Partition:
    vals = [k - int(xk) for k, xk in enumerate(x)]
    try:
        lam = Partition(vals)
    except ValueError as exc:
        raise ValueError(f"positions {list(x)} do not define a partition: {vals}") from exc
    return lam


def walk_count_general(x: Sequence[int], y: Sequence[int], T: int) -> int:
    """Number of non-intersecting T-step paths of m walkers from x to y.

    Uses mu_k = k-1-x_k, nu_k = k-1-y_k and the skew-tableau sum with
    T_L left moves and T_R right moves.
    """
    if len(x) != len(y) or not x:
        raise ValueError("x and y must be nonempty and of equal length")
    m = len(x)
    mu, nu = _walk_partition(x), _walk_partition(y)
    twice_l = T - mu.weight + nu.weight
    twice_r = T + mu.weight - nu.weight
    if T < 0 or twice_l < 0 or twice_r < 0 or twice_l % 2:
        return 0
    tl, tr = twice_l // 2, twice_r // 2
    s = 0
    for lam in partitions_of(mu.weight + tl, max_length=m):
        if lam.weight - nu.weight != tr:
            continue
        a = skew_dim(lam, mu)
        if a == 0:
            continue
        s += a * skew_dim(lam, nu)
    return math.comb(T, tl) * s
