"""Toeplitz, discrete Fredholm and Christoffel-Darboux determinant engines.

Symbols are sampled on the unit circle and their Fourier coefficients are
obtained with the trapezoid rule (FFT), which converges geometrically for
analytic symbols. Continuous Fredholm determinants use Nystrom
discretisation with Gauss-Legendre panels.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.linalg as sla
from scipy.special import gammaln

from ._util import (
    Diagnostics,
    NumericalError,
    complement_intervals,
    intersect_intervals,
    normalize_intervals,
)

COEFF_TOL = 1e-13


# -- Toeplitz symbols --------------------------------------------------------------

class ToeplitzSymbol:
    """Function on the unit circle with cached Fourier coefficients.

    Parameters
    ----------
    evaluator : callable
        Vectorised map from complex points z (|z| = 1) to complex values.
    name : str
        Label used in diagnostics.
    """

    def __init__(self, evaluator: Callable[[np.ndarray], np.ndarray], name: str = "symbol", max_points: int = 1 << 20):
        self.evaluator = evaluator
        self.name = name
        self.max_points = max_points
        self._lock = threading.Lock()
        self._cache: tuple[int, np.ndarray, int] | None = None

    def __call__(self, z):
        return self.evaluator(np.asarray(z, dtype=complex))

    def _fft(self, M: int) -> tuple[np.ndarray, float]:
        theta = 2.0 * np.pi * np.arange(M) / M
        vals = self.evaluator(np.exp(1j * theta))
        return np.fft.fft(vals) / M, float(np.max(np.abs(vals)))

    def coefficients(self, kmax: int, tol: float = COEFF_TOL) -> np.ndarray:
        """c_k for k = -kmax..kmax (index k + kmax).

        Convergence is declared when the change under point doubling is below
        ``tol`` times max(1, sup |sigma|), since rounding in the sum scales
        with the largest sampled value.
        """
        with self._lock:
            if self._cache is not None and self._cache[0] >= kmax:
                K, c, _ = self._cache
                return c[K - kmax: K + kmax + 1].copy()
            M = max(64, 8 * (2 * kmax + 1))
            M = 1 << int(math.ceil(math.log2(M)))
            prev, _ = self._fft(M)
            while True:
                M2 = 2 * M
                if M2 > self.max_points:
                    raise NumericalError(
                        f"Fourier coefficients of {self.name} did not converge",
                        {"points": M, "kmax": kmax},
                    )
                cur, scale = self._fft(M2)
                idx = np.arange(-kmax, kmax + 1)
                a, b = prev[idx % M], cur[idx % M2]
                if np.max(np.abs(a - b)) < tol * max(1.0, scale):
                    break
                prev, M = cur, M2
            c = cur[np.arange(-kmax, kmax + 1) % M2]
            self._cache = (kmax, c, M2)
            return c.copy()


def symbol_coefficients(sigma: ToeplitzSymbol, kmax: int, tol: float = COEFF_TOL) -> np.ndarray:
    """Fourier coefficients c_{-kmax..kmax} of ``sigma``."""
    return sigma.coefficients(kmax, tol)


def gessel_symbol(xi: float) -> ToeplitzSymbol:
    s = math.sqrt(xi)
    return ToeplitzSymbol(lambda z: np.exp(s * (z + 1.0 / z)), f"gessel(xi={xi})")


def charlier_symbol(xi: float, p: int) -> ToeplitzSymbol:
    return ToeplitzSymbol(lambda z: np.exp(xi / z) * (1.0 + z) ** p, f"charlier(xi={xi},p={p})")


def meixner_symbol(xi: float, p: int, q: int) -> ToeplitzSymbol:
    s = math.sqrt(xi)
    return ToeplitzSymbol(
        lambda z: (1.0 + s * z) ** q * (1.0 + s / z) ** p, f"meixner(xi={xi},p={p},q={q})"
    )


def constant_symbol(c: float = 1.0) -> ToeplitzSymbol:
    return ToeplitzSymbol(lambda z: np.full(np.shape(z), c, dtype=complex), "constant")


def toeplitz_det(sigma: ToeplitzSymbol, n: int, return_diagnostics: bool = False):
    """det (c_{k-l})_{0<=k,l<n} by LU with partial pivoting; n = 0 gives 1."""
    if n < 0:
        raise ValueError("n must be >= 0")
    if n == 0:
        val = 1.0
        diag = Diagnostics("toeplitz", 0, 0.0)
        return (val, diag) if return_diagnostics else val
    c = sigma.coefficients(n)
    idx = np.arange(n)
    T = c[(idx[:, None] - idx[None, :]) + n]
    det = _lu_det(T)
    imag = abs(det.imag)
    if imag > 1e-12 * max(1.0, abs(det.real)):
        val = det
    else:
        val = float(det.real)
    if return_diagnostics:
        return val, Diagnostics("toeplitz", n, 1e-13 * n, {"symbol": sigma.name, "imag_residue": imag})
    return val


def _lu_det(A: np.ndarray):
    lu, piv = sla.lu_factor(A, check_finite=True)
    sign = (-1) ** int(np.sum(piv != np.arange(len(piv))))
    return sign * np.prod(np.diag(lu))


# -- Bessel functions and the discrete Bessel kernel -------------------------------

def bessel_j_array(nmax: int, x) -> np.ndarray:
    """J_0(x)..J_nmax(x) by Miller's downward recurrence.

    Normalised with J_0 + 2 sum_k J_{2k} = 1. Works for complex ``x``.
    """
    x = complex(x) if isinstance(x, complex) else float(x)
    if x == 0:
        out = np.zeros(nmax + 1, dtype=type(x) if isinstance(x, complex) else float)
        out[0] = 1.0
        return out
    ax = abs(x)
    start = int(max(nmax, ax) + 30 + 10 * math.sqrt(max(nmax, ax)))
    start += start % 2
    dtype = complex if isinstance(x, complex) else float
    vals = np.zeros(start + 2, dtype=dtype)
    vals[start] = 1e-300
    norm = 0.0
    for k in range(start, 0, -1):
        vals[k - 1] = (2.0 * k / x) * vals[k] - vals[k + 1]
        if abs(vals[k - 1]) > 1e250:
            vals /= 1e250
        if np.any(~np.isfinite(vals)):
            raise NumericalError("Bessel recurrence overflow", {"x": str(x)})
    norm = vals[0] + 2.0 * np.sum(vals[2:start + 1:2])
    out = vals[: nmax + 1] / norm
    return out


def bessel_j(n: int, x) -> float:
    if n < 0:
        return (-1) ** (-n) * bessel_j(-n, x)
    return bessel_j_array(n, x)[n]


def gessel_bessel_det(xi: float, n: int) -> complex:
    """det (J_{k-l}(2 sqrt(-xi)))_{0<=k,l<n}, the Bessel form of the Gessel determinant."""
    if n == 0:
        return 1.0
    z = 2.0 * np.sqrt(complex(-xi))
    J = bessel_j_array(n, z)
    d = np.arange(n)[:, None] - np.arange(n)[None, :]
    vals = np.where(d >= 0, J[np.abs(d)], ((-1.0) ** np.abs(d)) * J[np.abs(d)])
    det = _lu_det(vals.astype(complex))
    return det


@dataclass
class DiscreteKernel:
    """Kernel on the integers with a bound on its trace tail."""

    eval: Callable[[np.ndarray, np.ndarray], np.ndarray]
    tail_bound: Callable[[int], float]
    name: str = "kernel"
    matrix: Callable[[int, int], np.ndarray] | None = None

    def block(self, s: int, N: int) -> np.ndarray:
        """K restricted to {s, ..., s+N-1}."""
        if self.matrix is not None:
            return self.matrix(s, N)
        idx = np.arange(s, s + N)
        return self.eval(idx[:, None], idx[None, :])


class _BesselTable:
    """J_k(2 sqrt(xi)) for integer k, extended by J_{-k} = (-1)^k J_k."""

    def __init__(self, xi: float):
        self.xi = xi
        self.x = 2.0 * math.sqrt(xi)
        self._lock = threading.Lock()
        self._J = bessel_j_array(64, self.x)

    def __call__(self, k) -> np.ndarray:
        k = np.asarray(k)
        need = int(np.max(np.abs(k))) if k.size else 0
        with self._lock:
            if need >= len(self._J):
                self._J = bessel_j_array(max(need + 1, 2 * len(self._J)), self.x)
            J = self._J
        out = J[np.abs(k)]
        return np.where((k < 0) & (np.abs(k) % 2 == 1), -out, out)


def _bessel_tail_bound(xi: float, s: int) -> float:
    # sum_{i>=s} K(i,i) = sum_{j>s} (j-s) J_j^2, with |J_j(2 sqrt xi)| <= xi^{j/2}/j! for j >= 0
    # and |J_j| <= 1 for negative j; summed until the terms are negligible
    lx = 0.5 * math.log(xi)
    total = 0.0
    j = s + 1
    while True:
        b2 = 1.0 if j < 0 else math.exp(2.0 * (j * lx - math.lgamma(j + 1)))
        term = (j - s) * b2
        total += term
        if j > 2.0 * math.sqrt(xi) + 2 and (term < 1e-18 * total or term < 1e-300):
            return total
        j += 1


def bessel_kernel(xi: float, form: str = "sum") -> DiscreteKernel:
    """Discrete Bessel kernel K(k,l) = sum_{m>=1} J_{k+m} J_{l+m} at argument 2 sqrt(xi).

    ``form="cd"`` uses sqrt(xi)(J_k J_{l+1} - J_{k+1} J_l)/(k-l) off the
    diagonal and the sum form on it.
    """
    if xi <= 0:
        raise ValueError("xi must be > 0")
    J = _BesselTable(xi)
    sq = math.sqrt(xi)

    def tail_terms(lo: int) -> int:
        # smallest count M such that J_{lo+M} is negligible
        M = 1
        while True:
            j = lo + M
            if j > 2 * sq + 5 and j > 0 and (j * math.log(sq) - math.lgamma(j + 1)) < -400:
                return M
            M += 1

    def sum_block(s: int, N: int) -> np.ndarray:
        M = tail_terms(s)
        idx = np.arange(s, s + N)[:, None] + np.arange(1, M + N + 1)[None, :]
        A = J(idx)
        return A @ A.T

    def sum_eval(k, l):
        k, l = np.broadcast_arrays(np.asarray(k), np.asarray(l))
        lo = int(min(k.min(), l.min()))
        M = tail_terms(lo) + int(max(k.max(), l.max()) - lo)
        m = np.arange(1, M + 1)
        return np.sum(J(k[..., None] + m) * J(l[..., None] + m), axis=-1)

    def cd_eval(k, l):
        k, l = np.broadcast_arrays(np.asarray(k), np.asarray(l))
        off = k != l
        den = np.where(off, k - l, 1)
        val = sq * (J(k) * J(l + 1) - J(k + 1) * J(l)) / den
        if np.any(~off):
            val = np.where(off, val, sum_eval(k, k))
        return val

    def cd_block(s: int, N: int) -> np.ndarray:
        idx = np.arange(s, s + N)
        return cd_eval(idx[:, None], idx[None, :])

    if form == "sum":
        return DiscreteKernel(sum_eval, lambda s: _bessel_tail_bound(xi, s), f"bessel-sum(xi={xi})", sum_block)
    if form == "cd":
        return DiscreteKernel(cd_eval, lambda s: _bessel_tail_bound(xi, s), f"bessel-cd(xi={xi})", cd_block)
    raise ValueError(f"unknown form {form!r}")


def discrete_fredholm_det(K: DiscreteKernel, s: int, tol: float = 1e-12, return_diagnostics: bool = False):
    """det(I - K) on l^2({s, s+1, ...}), truncated where the trace tail is below ``tol``."""
    N = 1
    while K.tail_bound(s + N) >= tol:
        N += 1
        if N > 100000:
            raise NumericalError("kernel trace tail does not decay", {"kernel": K.name, "s": s})
    d1 = float(np.linalg.det(np.eye(N) - K.block(s, N)))
    d2 = float(np.linalg.det(np.eye(2 * N) - K.block(s, 2 * N)))
    err = abs(d2 - d1)
    if err > 1e-10:
        raise NumericalError(
            "Fredholm determinant unstable under truncation doubling",
            {"kernel": K.name, "s": s, "N": N, "change": err},
        )
    if return_diagnostics:
        return d2, Diagnostics("discrete-fredholm", 2 * N, err, {"kernel": K.name, "s": s})
    return d2


def gessel_fredholm(xi: float, n: int) -> float:
    """P(L <= n) under Poissonized Plancherel via det(I - K_Bessel) on {n, n+1, ...}."""
    return discrete_fredholm_det(bessel_kernel(xi), n)


def gessel_toeplitz(xi: float, n: int) -> float:
    """e^{-xi} D_n(e^{sqrt(xi)(z + 1/z)})."""
    return math.exp(-xi) * toeplitz_det(gessel_symbol(xi), n)


def charlier_cdf(xi: float, p: int, n: int) -> float:
    """e^{-p xi} D_n(e^{xi/z}(1+z)^p): weak-LIS law of a Poissonized random word."""
    if xi < 0 or p < 1:
        raise ValueError("need xi >= 0, p >= 1")
    if xi == 0:
        return 1.0
    return math.exp(-p * xi) * toeplitz_det(charlier_symbol(xi, p), n)


def meixner_cdf(xi: float, p: int, q: int, ell: int) -> float:
    """(1-xi)^{pq} D_ell((1+sqrt(xi) z)^q (1+sqrt(xi)/z)^p): geometric LPP law."""
    if not (0 < xi < 1):
        raise ValueError("xi must lie in (0, 1)")
    if p < 1 or q < 1:
        raise ValueError("p, q must be >= 1")
    return (1.0 - xi) ** (p * q) * toeplitz_det(meixner_symbol(xi, p, q), ell)


# -- classical weights and Christoffel-Darboux kernels -------------------------------

@dataclass(frozen=True)
class Family:
    """Classical weight with its monic three-term recurrence.

    ``kind`` is one of ``hermite`` (e^{-z^2}), ``laguerre`` (z^a e^{-z} on
    (0, inf)) or ``jacobi`` ((1-z)^a (1+z)^b on (-1, 1)).
    """

    kind: str
    a: float = 0.0
    b: float = 0.0

    def __post_init__(self):
        if self.kind not in ("hermite", "laguerre", "jacobi"):
            raise ValueError(f"unknown family {self.kind!r}")
        if self.kind in ("laguerre", "jacobi") and self.a <= -1:
            raise ValueError("need a > -1")
        if self.kind == "jacobi" and self.b <= -1:
            raise ValueError("need b > -1")

    @property
    def support(self) -> tuple[float, float]:
        return {"hermite": (-np.inf, np.inf), "laguerre": (0.0, np.inf), "jacobi": (-1.0, 1.0)}[self.kind]

    def log_weight(self, z):
        z = np.asarray(z, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.kind == "hermite":
                return -z * z
            if self.kind == "laguerre":
                pos = np.where(z > 0, z, 1.0)
                edge = 0.0 if self.a == 0 else (-np.inf if self.a > 0 else np.inf)
                return np.where(z > 0, self.a * np.log(pos) - z, np.where(z == 0, edge, -np.inf))
            zc = np.where(np.abs(z) < 1, z, 0.0)
            out = self.a * np.log1p(-zc) + self.b * np.log1p(zc)
            return np.where(np.abs(z) < 1, out, -np.inf)

    def weight(self, z):
        return np.exp(self.log_weight(z))

    def h0(self) -> float:
        if self.kind == "hermite":
            return math.sqrt(math.pi)
        if self.kind == "laguerre":
            return math.gamma(self.a + 1)
        a, b = self.a, self.b
        return math.exp((a + b + 1) * math.log(2) + gammaln(a + 1) + gammaln(b + 1) - gammaln(a + b + 2))

    def recurrence(self, j: int) -> tuple[float, float]:
        """(b_j, a_j^2) in z p_j = p_{j+1} + b_j p_j + a_j^2 p_{j-1} (monic), a_0^2 = 0."""
        if self.kind == "hermite":
            return 0.0, j / 2.0
        if self.kind == "laguerre":
            return 2.0 * j + self.a + 1.0, j * (j + self.a)
        a, b = self.a, self.b
        s = 2 * j + a + b
        if j == 0:
            bj = (b - a) / (a + b + 2)
        else:
            bj = (b * b - a * a) / (s * (s + 2))
        if j == 0:
            a2 = 0.0
        elif j == 1:
            a2 = 4.0 * (1 + a) * (1 + b) / ((2 + a + b) ** 2 * (3 + a + b))
        else:
            a2 = 4.0 * j * (j + a) * (j + b) * (j + a + b) / (s * s * (s + 1) * (s - 1))
        return bj, a2

    def h(self, j: int) -> float:
        """Squared norm of the monic polynomial of degree j."""
        out = self.h0()
        for k in range(1, j + 1):
            out *= self.recurrence(k)[1]
        return out

    def effective_support(self, n: int) -> tuple[float, float]:
        """Finite window outside which rho p_j^2 (j <= n) is negligible."""
        if self.kind == "hermite":
            r = math.sqrt(2 * n + 1) + 8.0
            return -r, r
        if self.kind == "laguerre":
            return 0.0, 4.0 * n + 2.0 * abs(self.a) + 60.0
        return -1.0, 1.0

    def panel_width(self) -> float:
        return {"hermite": 0.5, "laguerre": 2.0, "jacobi": 0.25}[self.kind]

    def singular_points(self) -> list[float]:
        pts = []
        if self.kind == "laguerre" and float(self.a) != int(self.a):
            pts.append(0.0)
        if self.kind == "jacobi":
            if float(self.a) != int(self.a):
                pts.append(1.0)
            if float(self.b) != int(self.b):
                pts.append(-1.0)
        return pts

    def orthonormal(self, z, n: int) -> np.ndarray:
        """phi_j(z) = p_j(z) sqrt(rho(z)) for j = 0..n, orthonormal in L^2(dz)."""
        z = np.asarray(z, dtype=float)
        out = np.zeros((n + 1,) + z.shape)
        half = 0.5 * self.log_weight(z)
        root = np.exp(half)
        p_prev = np.zeros_like(z)
        p = np.full_like(z, 1.0 / math.sqrt(self.h0()))
        out[0] = p * root
        for j in range(n):
            bj, aj2 = self.recurrence(j)
            a_next = math.sqrt(self.recurrence(j + 1)[1])
            a_cur = math.sqrt(aj2)
            p_next = ((z - bj) * p - a_cur * p_prev) / a_next
            p_prev, p = p, p_next
            out[j + 1] = p * root
        return out


def _family(family, a: float = 0.0, b: float = 0.0) -> Family:
    if isinstance(family, Family):
        return family
    return Family(str(family).lower(), float(a), float(b))


def quadrature(intervals, width: float, order: int, singular: Sequence[float] = ()):
    """Gauss-Legendre panels, graded geometrically toward ``singular`` endpoints."""
    x0, w0 = np.polynomial.legendre.leggauss(order)
    xs, ws = [], []
    for a, b in intervals:
        edges = list(np.linspace(a, b, max(1, int(math.ceil((b - a) / width))) + 1))
        for sp in singular:
            if abs(a - sp) < 1e-15:
                first = edges[1]
                grade = [a + (first - a) * 0.5**k for k in range(1, 40)]
                edges = sorted(set(edges) | set(grade))
            if abs(b - sp) < 1e-15:
                last = edges[-2]
                grade = [b - (b - last) * 0.5**k for k in range(1, 40)]
                edges = sorted(set(edges) | set(grade))
        edges = np.array(edges)
        for lo, hi in zip(edges[:-1], edges[1:]):
            half = 0.5 * (hi - lo)
            xs.append(0.5 * (hi + lo) + half * x0)
            ws.append(half * w0)
    if not xs:
        return np.empty(0), np.empty(0)
    return np.concatenate(xs), np.concatenate(ws)


@dataclass(frozen=True)
class CDKernel:
    """K_n(y,z) = sqrt(rho(y) rho(z)) sum_{j<n} p_j(y) p_j(z), evaluated in CD form."""

    family: Family
    n: int

    def __call__(self, y, z, near: float = 1e-6):
        y, z = np.broadcast_arrays(np.asarray(y, dtype=float), np.asarray(z, dtype=float))
        n = self.n
        Py = self.family.orthonormal(y, n)
        Pz = self.family.orthonormal(z, n)
        an = math.sqrt(self.family.recurrence(n)[1])
        diff = y - z
        close = np.abs(diff) < near
        with np.errstate(divide="ignore", invalid="ignore"):
            cd = an * (Py[n] * Pz[n - 1] - Py[n - 1] * Pz[n]) / np.where(close, 1.0, diff)
        if np.any(close):
            direct = np.sum(Py[:n] * Pz[:n], axis=0)
            cd = np.where(close, direct, cd)
        return cd

    def sum_form(self, y, z):
        y, z = np.broadcast_arrays(np.asarray(y, dtype=float), np.asarray(z, dtype=float))
        return np.sum(self.family.orthonormal(y, self.n)[: self.n] * self.family.orthonormal(z, self.n)[: self.n], axis=0)

    def diag(self, z):
        return self.sum_form(z, z)


def cd_kernel(family, n: int, a: float = 0.0, b: float = 0.0) -> CDKernel:
    if n < 1:
        raise ValueError("n must be >= 1")
    return CDKernel(_family(family, a, b), int(n))


def _nystrom_det(K: CDKernel, E, order: int) -> float:
    fam = K.family
    lo, hi = fam.effective_support(K.n)
    pieces = intersect_intervals(E, lo, hi)
    if not pieces:
        return 1.0
    x, w = quadrature(pieces, fam.panel_width(), order, fam.singular_points())
    sw = np.sqrt(w)
    M = sw[:, None] * K(x[:, None], x[None, :]) * sw[None, :]
    return float(np.linalg.det(np.eye(len(x)) - M))


def _hankel_ratio(K: CDKernel, E, order: int) -> float:
    # det of incomplete Gram matrices on E^c in the orthonormal basis, i.e. the
    # monomial Hankel ratio after the common change of basis cancels
    fam = K.family
    lo, hi = fam.effective_support(K.n)
    comp = complement_intervals(E, lo, hi)
    if not comp:
        return 0.0
    x, w = quadrature(comp, fam.panel_width(), order, fam.singular_points())
    Phi = fam.orthonormal(x, K.n - 1)
    G = (Phi * w) @ Phi.T
    return float(np.linalg.det(G))


def hankel_moment_ratio(family, n: int, E, a: float = 0.0, b: float = 0.0, order: int = 40) -> float:
    """Literal ratio det(int_{E^c} z^{i+j} rho) / det(int z^{i+j} rho) in monomials (small n)."""
    fam = _family(family, a, b)
    E = normalize_intervals(E)
    lo, hi = fam.effective_support(n)
    full_x, full_w = quadrature([(lo, hi)], fam.panel_width(), order, fam.singular_points())
    comp = complement_intervals(E, lo, hi)
    x, w = quadrature(comp, fam.panel_width(), order, fam.singular_points()) if comp else (np.empty(0), np.empty(0))

    def gram(xx, ww):
        V = np.vander(xx, n, increasing=True).T
        return (V * (ww * fam.weight(xx))) @ V.T

    return float(np.linalg.det(gram(x, w)) / np.linalg.det(gram(full_x, full_w)))


def gap_probability(family, n: int, E, a: float = 0.0, b: float = 0.0, method: str = "nystrom",
                    tol: float = 1e-12, return_diagnostics: bool = False):
    """P(no eigenvalue in E) for the n-point ensemble of ``family``.

    ``method`` is ``nystrom`` (det(I - K_n chi_E)), ``hankel`` (incomplete
    moment ratio on the complement) or ``both`` (returns the Nystrom value and
    raises if the two disagree by more than 1e-8).
    """
    K = cd_kernel(family, n, a, b)
    E = normalize_intervals(E)
    if not E:
        val = 1.0
        diag = Diagnostics("empty-set", 0, 0.0)
        return (val, diag) if return_diagnostics else val

    def converge(fn):
        order, prev = 20, fn(K, E, 20)
        while True:
            order *= 2
            cur = fn(K, E, order)
            if abs(cur - prev) < tol:
                return cur, abs(cur - prev), order
            if order >= 160:
                raise NumericalError("gap probability quadrature did not converge",
                                     {"family": K.family.kind, "n": n, "change": abs(cur - prev)})
            prev = cur

    if method == "nystrom":
        val, err, order = converge(_nystrom_det)
    elif method == "hankel":
        val, err, order = converge(_hankel_ratio)
    elif method == "both":
        val, err, order = converge(_nystrom_det)
        other, err2, _ = converge(_hankel_ratio)
        if abs(val - other) > 1e-8:
            raise NumericalError("Nystrom and Hankel routes disagree",
                                 {"nystrom": val, "hankel": other})
        err = max(err, err2, abs(val - other))
    else:
        raise ValueError(f"unknown method {method!r}")
    if return_diagnostics:
        return val, Diagnostics(method, order, err, {"family": K.family.kind, "n": n})
    return val


def reproducing_check(K: CDKernel, grid=None, order: int = 40) -> tuple[float, float]:
    """(integral of K(z,z), max |int K(y,u)K(u,z)du - K(y,z)| over ``grid`` x ``grid``)."""
    fam = K.family
    lo, hi = fam.effective_support(K.n)
    x, w = quadrature([(lo, hi)], fam.panel_width(), order, fam.singular_points())
    trace = float(np.sum(w * K.diag(x)))
    if grid is None:
        grid = {"hermite": np.linspace(-4, 4, 9), "laguerre": np.linspace(0.25, 8, 9),
                "jacobi": np.linspace(-0.9, 0.9, 9)}[fam.kind]
    grid = np.asarray(grid, dtype=float)
    Kyu = K(grid[:, None], x[None, :])
    comp = (Kyu * w) @ Kyu.T
    direct = K(grid[:, None], grid[None, :])
    return trace, float(np.max(np.abs(comp - direct)))


def orthonormality_defect(family, n: int, a: float = 0.0, b: float = 0.0, order: int = 40) -> float:
    """max |int phi_i phi_j - delta_ij| for i, j <= n."""
    fam = _family(family, a, b)
    lo, hi = fam.effective_support(n)
    x, w = quadrature([(lo, hi)], fam.panel_width(), order, fam.singular_points())
    Phi = fam.orthonormal(x, n)
    G = (Phi * w) @ Phi.T
    return float(np.max(np.abs(G - np.eye(n + 1))))
