"""Young diagrams: hooks, dimension counts, Plancherel measure and the limit shape.

All counts are exact Python integers and probabilities are
:class:`fractions.Fraction`. Every dimension is computed by two
independent formulas which are compared on each call.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np


class Partition(tuple):
    """Weakly decreasing tuple of positive parts (trailing zeros removed)."""

    __slots__ = ()

    def __new__(cls, parts: Sequence[int] = ()):
        if isinstance(parts, Partition):
            return parts
        vals = [int(p) for p in parts]
        for a, b in zip(vals, vals[1:]):
            if a < b:
                raise ValueError(f"parts must be weakly decreasing: {vals}")
        if vals and vals[-1] < 0:
            raise ValueError(f"parts must be nonnegative: {vals}")
        while vals and vals[-1] == 0:
            vals.pop()
        return super().__new__(cls, vals)

    @property
    def parts(self) -> tuple[int, ...]:
        return tuple(self)

    @property
    def weight(self) -> int:
        return sum(self)

    def to_json(self) -> list[int]:
        return list(self)

    def __repr__(self) -> str:
        return f"Partition({list(self)})"


def transpose(lam: Sequence[int]) -> Partition:
    """Conjugate partition: column lengths of the diagram."""
    lam = Partition(lam)
    if not lam:
        return Partition()
    return Partition([sum(1 for p in lam if p >= i) for i in range(1, lam[0] + 1)])


def _shifted(lam: Partition, m: int) -> list[int]:
    # h_i = lambda_i + m - i, i = 1..m
    parts = list(lam) + [0] * (m - len(lam))
    return [parts[i] + m - 1 - i for i in range(m)]


def _vandermonde(h: Sequence[int]) -> int:
    out = 1
    for i in range(len(h)):
        for j in range(i + 1, len(h)):
            out *= h[i] - h[j]
    return out


@lru_cache(maxsize=65536)
def _hook_product(lam: Partition) -> int:
    lt = transpose(lam)
    cells = 1
    for i, row in enumerate(lam, start=1):
        for j in range(1, row + 1):
            cells *= row + lt[j - 1] - i - j + 1
    m = len(lam)
    h = _shifted(lam, m)
    num = 1
    for x in h:
        num *= math.factorial(x)
    ratio, rem = divmod(num, _vandermonde(h)) if m else (1, 0)
    if rem or ratio != cells:
        raise AssertionError(f"hook formulas disagree for {lam}")
    return cells


def hook_product(lam: Sequence[int]) -> int:
    """Product of hook lengths; cross-checked against the factorial/Vandermonde ratio."""
    return _hook_product(Partition(lam))


@lru_cache(maxsize=65536)
def _dim_standard(lam: Partition) -> int:
    if lam and len(lam) > lam[0]:
        # f is invariant under transposition; the Vandermonde check is quadratic in the length
        return _dim_standard(transpose(lam))
    n = lam.weight
    f, rem = divmod(math.factorial(n), _hook_product(lam))
    if rem:
        raise AssertionError(f"hook product does not divide n! for {lam}")
    m = len(lam)
    if m:
        h = _shifted(lam, m)
        den = 1
        for x in h:
            den *= math.factorial(x)
        g, rem = divmod(math.factorial(n) * _vandermonde(h), den)
        if rem or g != f:
            raise AssertionError(f"Vandermonde form disagrees for {lam}")
    return f


def dim_standard(lam: Sequence[int]) -> int:
    """Number of standard Young tableaux f^lambda."""
    return _dim_standard(Partition(lam))


@lru_cache(maxsize=65536)
def _dim_semistandard(lam: Partition, q: int) -> int:
    if len(lam) > q:
        return 0
    parts = list(lam) + [0] * (q - len(lam))
    num = den = 1
    for i in range(q):
        for j in range(i + 1, q):
            num *= parts[i] - parts[j] + j - i
            den *= j - i
    val, rem = divmod(num, den)
    # hook-content formula as an independent check
    cnum = 1
    for i, row in enumerate(lam):
        for j in range(row):
            cnum *= q + j - i
    val2, rem2 = divmod(cnum, _hook_product(lam))
    if rem or rem2 or val != val2:
        raise AssertionError(f"semistandard formulas disagree for {lam}, q={q}")
    return val


def dim_semistandard(lam: Sequence[int], q: int) -> int:
    """Number of semistandard tableaux with entries in 1..q, i.e. s_lambda(1^q)."""
    if q < 1:
        raise ValueError("q must be >= 1")
    return _dim_semistandard(Partition(lam), int(q))


def plancherel_mass(lam: Sequence[int]) -> Fraction:
    """(f^lambda)^2 / n! for lambda a partition of n >= 1."""
    lam = Partition(lam)
    n = lam.weight
    if n < 1:
        raise ValueError("Plancherel measure needs |lambda| >= 1")
    return Fraction(dim_standard(lam) ** 2, math.factorial(n))


def transition_prob(lam: Sequence[int], mu: Sequence[int]) -> Fraction:
    """Probability of growing ``lam`` into ``mu`` by one box, f^mu / (f^lam |mu|)."""
    lam, mu = Partition(lam), Partition(mu)
    if mu.weight != lam.weight + 1:
        raise ValueError(f"|mu| must equal |lambda| + 1, got {lam.weight} and {mu.weight}")
    if not _contains(mu, lam):
        return Fraction(0)
    return Fraction(dim_standard(mu), dim_standard(lam) * mu.weight)


def _contains(mu: Partition, lam: Partition) -> bool:
    if len(lam) > len(mu):
        return False
    return all(m >= l for m, l in zip(mu, lam))


def add_box(lam: Sequence[int]) -> list[Partition]:
    """All partitions obtained from ``lam`` by adding one box."""
    lam = list(Partition(lam))
    out = []
    for i in range(len(lam) + 1):
        row = lam[i] if i < len(lam) else 0
        if i == 0 or lam[i - 1] > row:
            new = lam.copy()
            if i < len(lam):
                new[i] += 1
            else:
                new.append(1)
            out.append(Partition(new))
    return out


def omega_curve(u):
    """Limit shape (2/pi)(u arcsin(u/2) + sqrt(4 - u^2)) on |u| <= 2, |u| outside."""
    u = np.asarray(u, dtype=float)
    au = np.abs(u)
    inside = au <= 2.0
    uc = np.clip(u, -2.0, 2.0)
    val = np.where(
        inside,
        (2.0 / np.pi) * (uc * np.arcsin(uc / 2.0) + np.sqrt(np.maximum(4.0 - uc * uc, 0.0))),
        au,
    )
    return float(val) if val.ndim == 0 else val


def partitions_of(n: int, max_part: int | None = None, max_length: int | None = None) -> Iterator[Partition]:
    """Partitions of ``n`` in reverse-lexicographic order, with optional bounds."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    cap = n if max_part is None else min(n, max_part)
    rows = n if max_length is None else max_length

    def rec(rem: int, bound: int, left: int, prefix: list[int]):
        if rem == 0:
            yield Partition(prefix)
            return
        if left == 0 or bound * left < rem:
            return
        for part in range(min(rem, bound), 0, -1):
            prefix.append(part)
            yield from rec(rem - part, part, left - 1, prefix)
            prefix.pop()

    yield from rec(n, cap, rows, [])


def partitions_in_box(rows: int, cols: int) -> Iterator[Partition]:
    """All partitions fitting in a rows x cols rectangle (any weight)."""
    def rec(i: int, bound: int, prefix: list[int]):
        if i == rows:
            yield Partition(prefix)
            return
        for part in range(bound, -1, -1):
            prefix.append(part)
            yield from rec(i + 1, part, prefix)
            prefix.pop()

    yield from rec(0, cols, [])


def skew_dim(lam: Sequence[int], mu: Sequence[int]) -> int:
    """Standard skew tableaux count f^{lambda/mu} = |lambda/mu|! det(1/(lambda_i - mu_j - i + j)!)."""
    lam, mu = Partition(lam), Partition(mu)
    if not _contains(lam, mu):
        return 0
    m = len(lam)
    if m == 0:
        return 1
    lp = list(lam)
    mp = list(mu) + [0] * (m - len(mu))
    size = lam.weight - mu.weight
    nf = math.factorial(size)
    # integer matrix n!/(a)! is not integral in general; use exact rationals
    mat = [
        [Fraction(1, math.factorial(lp[i] - mp[j] - i + j)) if lp[i] - mp[j] - i + j >= 0 else Fraction(0)
         for j in range(m)]
        for i in range(m)
    ]
    det = _fraction_det(mat)
    val = det * nf
    if val.denominator != 1:
        raise AssertionError("skew dimension is not an integer")
    return int(val)


def _fraction_det(a: list[list[Fraction]]) -> Fraction:
    a = [row[:] for row in a]
    n = len(a)
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        det *= a[c][c]
        for r in range(c + 1, n):
            if a[r][c] != 0:
                f = a[r][c] / a[c][c]
                for k in range(c, n):
                    a[r][k] -= f * a[c][k]
    return det
