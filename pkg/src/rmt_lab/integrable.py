"""Tau-functions of deformed moment matrices and residuals of their integrable equations.

tau_n(t; E) is the Hankel determinant of the moments of rho(z) exp(sum t_i z^i)
over E. It is evaluated as prod h_j times the Gram determinant of the
undeformed orthonormal polynomials, which keeps the matrices well conditioned.
Derivatives in t and in the endpoints of E are central differences with
Richardson extrapolation.

On unbounded E the odd and quartic deformations diverge, so the residuals
work with E cut to the window where rho is above double precision. This
changes tau by far less than rounding, and its t-derivatives at t = 0 are the
formal ones.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from ._util import NumericalError, dumps, intersect_intervals, normalize_intervals
from .kernels import Family, _family, gap_probability, quadrature

MAX_TIMES = 4


@dataclass(frozen=True)
class TauContext:
    """Weight family, integration set E, order n and deformation times t_1..t_K.

    ``E=None`` means the full support; an empty tuple is the empty set.
    """

    family: Family
    n: int
    E: tuple | None = None
    t: tuple = ()

    def __post_init__(self):
        fam = _family(self.family) if not isinstance(self.family, Family) else self.family
        object.__setattr__(self, "family", fam)
        if self.n < 0:
            raise ValueError("n must be >= 0")
        t = tuple(float(v) for v in self.t)
        if len(t) > MAX_TIMES:
            raise ValueError(f"at most {MAX_TIMES} times are supported")
        object.__setattr__(self, "t", t)
        lo, hi = fam.support
        E = [(lo, hi)] if self.E is None else normalize_intervals(self.E)
        for a, b in E:
            if a < lo - 1e-15 or b > hi + 1e-15:
                raise ValueError(f"E must lie inside the support {fam.support}")
        object.__setattr__(self, "E", tuple((max(a, lo), min(b, hi)) for a, b in E))

    @classmethod
    def make(cls, family, n: int, E=None, t: Sequence[float] = (), a: float = 0.0, b: float = 0.0) -> "TauContext":
        return cls(_family(family, a, b), int(n), None if E is None else tuple(E), tuple(t))

    def with_times(self, t: Sequence[float]) -> "TauContext":
        return TauContext(self.family, self.n, self.E, tuple(t))

    def with_n(self, n: int) -> "TauContext":
        return TauContext(self.family, n, self.E, self.t)

    def with_E(self, E) -> "TauContext":
        return TauContext(self.family, self.n, tuple(E), self.t)


@dataclass(frozen=True)
class StencilSpec:
    """Finite-difference steps, Richardson levels and the accepted error estimate."""

    h: float = 0.03
    boundary_h: float = 0.01
    levels: int = 3
    tol: float = 1e-3

    def __post_init__(self):
        if self.h <= 0 or self.boundary_h <= 0 or self.levels < 1:
            raise ValueError("steps must be positive and levels >= 1")


@dataclass
class ResidualReport:
    """Residual of an identity with its scale and an independent error estimate."""

    name: str
    family: str
    n: int
    params: dict
    residual: float
    scaled_residual: float
    error_estimate: float
    terms: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return dumps(self)


# -- quadrature on E -----------------------------------------------------------------

def _window(ctx: TauContext) -> list[tuple[float, float]]:
    lo, hi = ctx.family.effective_support(max(ctx.n, 1) + 2)
    return intersect_intervals(list(ctx.E), lo, hi)


@lru_cache(maxsize=256)
def _nodes(family: Family, E: tuple, size: int):
    lo, hi = family.effective_support(max(size, 1) + 2)
    pieces = intersect_intervals(list(E), lo, hi)
    if not pieces:
        return np.empty(0), np.empty(0), np.empty((size, 0))
    order, prev = 20, None
    while True:
        x, w = quadrature(pieces, family.panel_width(), order, family.singular_points())
        phi = family.orthonormal(x, max(size - 1, 0))[:size]
        G = (phi * w) @ phi.T
        if prev is not None and np.max(np.abs(G - prev)) < 1e-14:
            return x, w, phi
        if order >= 160:
            raise NumericalError("moment quadrature did not converge", {"family": family.kind, "E": list(E)})
        prev, order = G, order * 2


def _deform(x: np.ndarray, t: Sequence[float]) -> np.ndarray:
    v = np.zeros_like(x)
    for i, ti in enumerate(t, start=1):
        if ti:
            v += ti * x**i
    return v


def _check_convergent(ctx: TauContext) -> None:
    fam = ctx.family
    coeffs = [0.0] * (MAX_TIMES + 1)
    for i, ti in enumerate(ctx.t, start=1):
        coeffs[i] += ti
    if fam.kind == "hermite":
        coeffs[2] -= 1.0
    elif fam.kind == "laguerre":
        coeffs[1] -= 1.0
    else:
        return
    if not ctx.E:
        return
    lo = min(a for a, _ in ctx.E)
    hi = max(b for _, b in ctx.E)
    for direction, unbounded in ((1, hi == math.inf), (-1, lo == -math.inf)):
        if not unbounded:
            continue
        lead = next((k for k in range(MAX_TIMES, 0, -1) if coeffs[k] != 0), None)
        if lead is None or coeffs[lead] * direction**lead > 0:
            raise ValueError(f"deformed weight is not integrable on E (t = {list(ctx.t)})")


def _gram(ctx: TauContext, size: int, extra=None) -> np.ndarray:
    x, w, phi = _nodes(ctx.family, ctx.E, size)
    if x.size == 0:
        return np.zeros((size, size))
    ww = w * np.exp(_deform(x, ctx.t))
    if extra is not None:
        ww = ww * extra(x)
    return (phi * ww) @ phi.T


def _log_h(fam: Family, n: int) -> float:
    return sum(math.log(fam.h(j)) for j in range(n))


def _log_tau(ctx: TauContext, extra=None) -> float:
    # formal evaluation on the truncated window; no divergence check
    if ctx.n == 0:
        return 0.0
    sign, logdet = np.linalg.slogdet(_gram(ctx, ctx.n, extra))
    if sign <= 0:
        raise NumericalError("moment matrix is not positive definite", {"n": ctx.n, "t": list(ctx.t)})
    return _log_h(ctx.family, ctx.n) + logdet


def tau(ctx: TauContext) -> float:
    """tau_n(t) = det(mu_{i+j}(t)), i, j < n, with tau_0 = 1."""
    _check_convergent(ctx)
    if ctx.n == 0:
        return 1.0
    if not _window(ctx):
        warnings.warn("E has no mass: tau is 0 (degenerate)", RuntimeWarning, stacklevel=2)
        return 0.0
    return math.exp(_log_tau(ctx))


def moments(ctx: TauContext, kmax: int) -> np.ndarray:
    """mu_k(t) = int_E z^k rho(z) exp(sum t_i z^i) dz for k = 0..kmax."""
    _check_convergent(ctx)
    x, w, _ = _nodes(ctx.family, ctx.E, 1)
    if x.size == 0:
        return np.zeros(kmax + 1)
    ww = w * ctx.family.weight(x) * np.exp(_deform(x, ctx.t))
    return np.array([np.sum(ww * x**k) for k in range(kmax + 1)])


def tau_multiple_integral(ctx: TauContext, order: int = 24) -> float:
    """(1/n!) int_{E^n} Delta(z)^2 prod rho(z_i) e^{V_t(z_i)} dz by tensor Gauss-Legendre (n <= 3)."""
    n = ctx.n
    if n > 3:
        raise ValueError("tensor cubature is limited to n <= 3")
    x, w = quadrature(_window(ctx), ctx.family.panel_width(), order, ctx.family.singular_points())
    ww = w * ctx.family.weight(x) * np.exp(_deform(x, ctx.t))
    if n == 0:
        return 1.0
    if n == 1:
        return float(np.sum(ww))
    # loop over the first coordinate so memory stays quadratic in the node count
    rest = np.meshgrid(*([x] * (n - 1)), indexing="ij")
    wrest = np.ones_like(rest[0])
    for g in np.meshgrid(*([ww] * (n - 1)), indexing="ij"):
        wrest = wrest * g
    vrest = np.ones_like(rest[0])
    for i in range(n - 1):
        for j in range(i + 1, n - 1):
            vrest = vrest * (rest[i] - rest[j])
    base = vrest * vrest * wrest
    total = 0.0
    for x0, w0 in zip(x, ww):
        v = np.ones_like(base)
        for g in rest:
            v = v * (x0 - g)
        total += w0 * float(np.sum(base * v * v))
    return total / math.factorial(n)


# -- orthogonal polynomials and the Toda lattice ---------------------------------------

def _monic_coeffs(fam: Family, n: int) -> np.ndarray:
    """Rows: monomial coefficients of the undeformed monic polynomials q_0..q_n."""
    C = np.zeros((n + 1, n + 1))
    C[0, 0] = 1.0
    for j in range(n):
        bj, aj2 = fam.recurrence(j)
        C[j + 1, 1:] += C[j, :-1]
        C[j + 1] -= bj * C[j]
        if j > 0:
            C[j + 1] -= aj2 * C[j - 1]
    return C


def monic_orthopoly(ctx: TauContext, z) -> np.ndarray:
    """p_n(z) for the deformed weight on E, from the bordered moment determinant.

    The determinant is formed in the undeformed monic basis; the unitriangular
    change from monomials leaves it unchanged.
    """
    n = ctx.n
    z = np.asarray(z, dtype=float)
    if n == 0:
        return np.ones_like(z)
    fam = ctx.family
    G = _gram(ctx, n + 1)
    scale = np.sqrt([fam.h(j) for j in range(n + 1)])
    M = G * scale[:, None] * scale[None, :]  # Gram of q_i, q_j
    base = np.linalg.det(M[:n, :n])
    if not np.isfinite(base) or abs(base) < 1e-300:
        raise NumericalError("singular moment matrix", {"n": n})
    qv = np.array([np.polyval(row[::-1], z) for row in _monic_coeffs(fam, n)])
    out = np.zeros(z.shape)
    for idx in np.ndindex(z.shape):
        B = np.vstack([M[:n, :], qv[(slice(None),) + idx][None, :]])
        out[idx] = np.linalg.det(B) / base
    return out


def norms(ctx: TauContext, kmax: int) -> np.ndarray:
    """h_k = tau_{k+1} / tau_k for k = 0..kmax."""
    lt = [_log_tau(ctx.with_n(k)) for k in range(kmax + 2)]
    return np.exp(np.diff(lt))


def _richardson(values: list[float], power: int = 2) -> tuple[float, float]:
    # values at h, h/2, h/4, ... with an even error expansion
    table = [list(values)]
    for lev in range(1, len(values)):
        prev = table[-1]
        fac = 2.0 ** (power * lev)
        table.append([(fac * prev[i + 1] - prev[i]) / (fac - 1) for i in range(len(prev) - 1)])
    best = table[-1][0]
    if len(values) == 1:
        return best, float("nan")
    err = abs(best - table[-2][-1])
    return best, err


def _d1(f, h: float, levels: int):
    vals = [(f(hh) - f(-hh)) / (2 * hh) for hh in (h / 2**k for k in range(levels))]
    return _richardson(vals)


def toda_entries(ctx: TauContext, stencil: StencilSpec = StencilSpec()) -> tuple[float, float]:
    """(a_n, b_n) with b_n = d/dt_1 log(tau_{n+1}/tau_n) and a_n^2 = tau_n tau_{n+2} / tau_{n+1}^2."""
    n = ctx.n
    t0 = list(ctx.t) + [0.0] * (1 - min(len(ctx.t), 1))

    def f(s):
        t = list(t0)
        t[0] += s
        c = ctx.with_times(t)
        return _log_tau(c.with_n(n + 1)) - _log_tau(c.with_n(n))

    b, _ = _d1(f, stencil.h, stencil.levels)
    b = float(b)
    la = _log_tau(ctx.with_n(n)) + _log_tau(ctx.with_n(n + 2)) - 2 * _log_tau(ctx.with_n(n + 1))
    return math.exp(0.5 * la), b


def recurrence_from_orthogonality(ctx: TauContext) -> tuple[float, float]:
    """(a_n, b_n) from inner products of the bordered-determinant polynomials."""
    x, w, _ = _nodes(ctx.family, ctx.E, ctx.n + 2)
    ww = w * ctx.family.weight(x) * np.exp(_deform(x, ctx.t))
    pn = monic_orthopoly(ctx, x)
    pn1 = monic_orthopoly(ctx.with_n(ctx.n + 1), x)
    hn = np.sum(ww * pn * pn)
    b = np.sum(ww * x * pn * pn) / hn
    a2 = np.sum(ww * pn1 * pn1) / hn
    return math.sqrt(a2), float(b)


def tau_shift_ratio(ctx: TauContext, z: float) -> float:
    """z^n tau_n(t - [1/z]) / tau_n(t); the shift multiplies the weight by 1 - u/z."""
    if z == 0:
        raise ValueError("z must be nonzero")
    num = _gram(ctx, ctx.n, lambda u: 1.0 - u / z)
    den = _gram(ctx, ctx.n)
    return z**ctx.n * np.linalg.det(num) / np.linalg.det(den)


# -- time derivatives ----------------------------------------------------------------------

class _TimeDerivatives:
    """Richardson-extrapolated central differences of log tau_n at the context's t."""

    def __init__(self, ctx: TauContext, stencil: StencilSpec):
        self.ctx = ctx
        self.st = stencil
        self.t0 = np.array(list(ctx.t) + [0.0] * (3 - len(ctx.t)))[:3] if len(ctx.t) <= 3 else np.array(ctx.t)
        self._cache: dict = {}

    def F(self, shift) -> float:
        key = tuple(round(s, 15) for s in shift)
        if key not in self._cache:
            t = self.t0.copy()
            t[: len(shift)] += shift
            self._cache[key] = _log_tau(self.ctx.with_times(t))
        return self._cache[key]

    def _e(self, i, s):
        v = np.zeros(3)
        v[i] = s
        return v

    def _rich(self, stencil_fn):
        vals = [stencil_fn(self.st.h / 2**k) for k in range(self.st.levels)]
        return _richardson(vals)

    def d(self, i):
        return self._rich(lambda h: (self.F(self._e(i, h)) - self.F(self._e(i, -h))) / (2 * h))

    def dd(self, i):
        return self._rich(lambda h: (self.F(self._e(i, h)) - 2 * self.F(np.zeros(3)) + self.F(self._e(i, -h))) / h**2)

    def d4(self, i):
        def st(h):
            f = lambda k: self.F(self._e(i, k * h))
            return (f(2) - 4 * f(1) + 6 * f(0) - 4 * f(-1) + f(-2)) / h**4
        return self._rich(st)

    def mixed(self, i, j):
        def st(h):
            f = lambda a, b: self.F(self._e(i, a * h) + self._e(j, b * h))
            return (f(1, 1) - f(1, -1) - f(-1, 1) + f(-1, -1)) / (4 * h * h)
        return self._rich(st)


def _params(ctx: TauContext) -> dict:
    p = {"E": [list(iv) for iv in ctx.E]}
    if ctx.family.kind != "hermite":
        p["a"] = ctx.family.a
    if ctx.family.kind == "jacobi":
        p["b"] = ctx.family.b
    return p


def kp_residual(ctx: TauContext, stencil: StencilSpec = StencilSpec()) -> ResidualReport:
    """(d1^4 + 3 d2^2 - 4 d1 d3) log tau_n + 6 (d1^2 log tau_n)^2 at the context's t."""
    D = _TimeDerivatives(ctx, stencil)
    f1111, e1 = D.d4(0)
    f22, e2 = D.dd(1)
    f13, e3 = D.mixed(0, 2)
    f11, e4 = D.dd(0)
    terms = {"d1^4": f1111, "3 d2^2": 3 * f22, "-4 d1 d3": -4 * f13, "6 (d1^2)^2": 6 * f11 * f11}
    res = sum(terms.values())
    scale = sum(abs(v) for v in terms.values())
    err = e1 + 3 * e2 + 4 * e3 + 12 * abs(f11) * e4
    rep = ResidualReport("kp", ctx.family.kind, ctx.n, _params(ctx), abs(res), abs(res) / scale, err / scale, terms)
    if not rep.error_estimate <= stencil.tol:  # a single level gives no estimate (nan)
        raise NumericalError("KP stencil error estimate exceeds tolerance", {"error_estimate": rep.error_estimate})
    return rep


# -- Virasoro constraints -------------------------------------------------------------

def _free_endpoints(ctx: TauContext) -> list[tuple[int, int, float]]:
    lo, hi = ctx.family.support
    out = []
    for k, (a, b) in enumerate(ctx.E):
        for side, c in ((0, a), (1, b)):
            if math.isinf(c):
                continue
            if c in (lo, hi):
                continue  # hard edge: the boundary factor vanishes there
            out.append((k, side, c))
    return out


def _boundary_factor(fam: Family, c: float, k: int) -> float:
    if fam.kind == "hermite":
        return c ** (k + 1)
    if fam.kind == "laguerre":
        return c ** (k + 2)
    return c ** (k + 1) * (1 - c * c)


def boundary_operator(ctx: TauContext, k: int, stencil: StencilSpec = StencilSpec()) -> tuple[float, float]:
    """B_k log tau_n = sum_i f_k(c_i) d/dc_i log tau_n over the free endpoints of E."""
    total, err = 0.0, 0.0
    for idx, side, c in _free_endpoints(ctx):
        def f(s, idx=idx, side=side):
            E = [list(iv) for iv in ctx.E]
            E[idx][side] += s
            return _log_tau(ctx.with_E([tuple(iv) for iv in E]))
        d, e = _d1(f, stencil.boundary_h, stencil.levels)
        fac = _boundary_factor(ctx.family, c, k)
        total += fac * d
        err += abs(fac) * e
    return total, err


def virasoro_residual(ctx: TauContext, k: int, stencil: StencilSpec = StencilSpec()) -> ResidualReport:
    """Residual of the k-th (k = -1, 0, 1) boundary constraint at t = 0.

    Gauss: -B_{-1}F = 2 d1 F, -B_0 F = 2 d2 F - n^2, -B_1 F = 2 d3 F - 2n d1 F.
    Laguerre (weight z^a e^{-z}): -B_{-1}F = d1 F - n(n+a),
    -B_0 F = d2 F - (2n+a) d1 F, -B_1 F = d3 F - (2n+a) d2 F - d1^2 F - (d1 F)^2.
    Jacobi with s = 2n+a+b and b0 = a-b: -B_{-1}F = s d1 F + n b0,
    -B_0 F = s d2 F + b0 d1 F + d1^2 F + (d1 F)^2 - n^2,
    -B_1 F = s d3 F + b0 d2 F - 2n d1 F + 2 d1 d2 F + 2 d1 F d2 F.
    Here F = log tau_n; the normalisation n! only shifts F by a constant.
    """
    if k not in (-1, 0, 1):
        raise ValueError("k must be -1, 0 or 1")
    if any(ctx.t):
        raise ValueError("Virasoro residuals are evaluated at t = 0")
    lo, hi = ctx.family.support
    for a, b in ctx.E:
        for c in (a, b):
            if not math.isinf(c) and not (lo <= c <= hi):
                raise ValueError("endpoint outside the support")
    if not _free_endpoints(ctx):
        raise ValueError("E has no free endpoint; the boundary operator is not a free variation")
    n = ctx.n
    fam = ctx.family
    D = _TimeDerivatives(ctx, stencil)
    B, eB = boundary_operator(ctx, k, stencil)
    lhs = -B
    d1, e1 = D.d(0)
    terms: dict[str, float] = {}
    errs = [eB]
    if fam.kind == "hermite":
        if k == -1:
            terms = {"2 d1": 2 * d1}
            errs.append(2 * e1)
        elif k == 0:
            d2, e2 = D.d(1)
            terms = {"2 d2": 2 * d2, "-n^2": -float(n * n)}
            errs.append(2 * e2)
        else:
            d3, e3 = D.d(2)
            terms = {"2 d3": 2 * d3, "-2n d1": -2 * n * d1}
            errs += [2 * e3, 2 * n * e1]
    elif fam.kind == "laguerre":
        a = fam.a
        if k == -1:
            terms = {"d1": d1, "-n(n+a)": -n * (n + a)}
            errs.append(e1)
        elif k == 0:
            d2, e2 = D.d(1)
            terms = {"d2": d2, "-(2n+a) d1": -(2 * n + a) * d1}
            errs += [e2, (2 * n + a) * e1]
        else:
            d2, e2 = D.d(1)
            d3, e3 = D.d(2)
            d11, e11 = D.dd(0)
            terms = {"d3": d3, "-(2n+a) d2": -(2 * n + a) * d2, "-d1^2": -d11, "-(d1)^2": -d1 * d1}
            errs += [e3, (2 * n + a) * e2, e11, 2 * abs(d1) * e1]
    else:
        a, b = fam.a, fam.b
        s = 2 * n + a + b
        b0 = a - b
        if k == -1:
            terms = {"s d1": s * d1, "n b0": n * b0}
            errs.append(s * e1)
        elif k == 0:
            d2, e2 = D.d(1)
            d11, e11 = D.dd(0)
            terms = {"s d2": s * d2, "b0 d1": b0 * d1, "d1^2": d11, "(d1)^2": d1 * d1, "-n^2": -float(n * n)}
            errs += [s * e2, abs(b0) * e1, e11, 2 * abs(d1) * e1]
        else:
            d2, e2 = D.d(1)
            d3, e3 = D.d(2)
            d12, e12 = D.mixed(0, 1)
            terms = {"s d3": s * d3, "b0 d2": b0 * d2, "-2n d1": -2 * n * d1,
                     "2 d1 d2": 2 * d12, "2 d1 F d2 F": 2 * d1 * d2}
            errs += [s * e3, abs(b0) * e2, 2 * n * e1, 2 * e12, 2 * abs(d2) * e1 + 2 * abs(d1) * e2]
    rhs = sum(terms.values())
    res = lhs - rhs
    scale = abs(lhs) + sum(abs(v) for v in terms.values())
    all_terms = {"-B_k F": lhs, **terms}
    return ResidualReport(f"virasoro[{k}]", fam.kind, n, _params(ctx), abs(res), abs(res) / scale,
                          sum(errs) / scale, all_terms)


# -- Painleve ODEs for the largest eigenvalue -----------------------------------------

JACOBI_PARAMS = {
    # two normalisations of (r, s, q); "second" is the default, see painleve_residual
    "first": lambda n, a, b: (4 * (a * a + b * b), 2 * (a * a - b * b), 2 * (2 * n + a + b) ** 2),
    "second": lambda n, a, b: (a * a + b * b, a * a - b * b, (2 * n + a + b) ** 2),
}


def log_gap_table(family, n: int, x, a: float = 0.0, b: float = 0.0) -> np.ndarray:
    """log P_n(max <= x) via the incomplete-moment (Hankel) ratio."""
    fam = _family(family, a, b)
    hi = fam.support[1]
    out = []
    for xv in np.atleast_1d(x):
        P = gap_probability(fam, n, [(float(xv), hi)], method="hankel")
        if not (1e-300 < P < 1 - 1e-15):
            raise NumericalError("gap probability out of numeric range", {"x": float(xv), "P": P})
        out.append(math.log(P))
    return np.array(out)


def painleve_residual(family, n: int, x, a: float = 0.0, b: float = 0.0, degree: int = 60,
                      jacobi_params: str = "second") -> ResidualReport:
    """Max scaled residual of the largest-eigenvalue ODE on the points ``x``.

    log P_n(max <= x) is tabulated at Chebyshev points of an interval slightly
    wider than ``x`` and differentiated through its Chebyshev interpolant.
    Gauss: f = (log P)', f''' + 6f'^2 + 4(2n - x^2)f' + 4xf = 0.
    Laguerre: f = x (log P)', x^2 f''' + x f'' + 6x f'^2 - 4f f' - ((a-x)^2 - 4nx) f' - (2n+a-x) f = 0.
    Jacobi: f = (1-x^2)(log P)', (x^2-1)^2 f''' + 2(x^2-1)(x f'' - 3f'^2)
    + (8xf - q(x^2-1) - 2sx - 2r) f' - f(2f - qx - s) = 0.
    The scale is the largest term magnitude over the grid.
    """
    fam = _family(family, a, b)
    x = np.asarray(x, dtype=float)
    lo, hi = float(x.min()), float(x.max())
    pad = 0.1 * (hi - lo)
    L, R = lo - pad, hi + pad
    if fam.kind == "laguerre":
        L = max(L, 0.5 * lo)
    if fam.kind == "jacobi":
        L, R = max(L, 0.5 * (lo - 1)), min(R, 0.5 * (hi + 1))
    nodes = np.polynomial.chebyshev.chebpts2(degree + 1)
    xs = 0.5 * (L + R) + 0.5 * (R - L) * nodes
    logP = np.polynomial.Chebyshev.fit(xs, log_gap_table(fam, n, xs), degree, domain=[L, R])
    g = [logP.deriv(k)(x) for k in range(1, 5)]
    if fam.kind == "hermite":
        f, f1, f2, f3 = g[0], g[1], g[2], g[3]
        terms = [f3, 6 * f1**2, 4 * (2 * n - x**2) * f1, 4 * x * f]
    elif fam.kind == "laguerre":
        # f = x g1, f' = g1 + x g2, f'' = 2 g2 + x g3, f''' = 3 g3 + x g4
        f = x * g[0]
        f1 = g[0] + x * g[1]
        f2 = 2 * g[1] + x * g[2]
        f3 = 3 * g[2] + x * g[3]
        terms = [x**2 * f3, x * f2, 6 * x * f1**2, -4 * f * f1, -((fam.a - x) ** 2 - 4 * n * x) * f1,
                 -(2 * n + fam.a - x) * f]
    else:
        r, s, q = JACOBI_PARAMS[jacobi_params](n, fam.a, fam.b)
        u = 1 - x * x
        # f = u g1 with u' = -2x, u'' = -2
        f = u * g[0]
        f1 = -2 * x * g[0] + u * g[1]
        f2 = -2 * g[0] - 4 * x * g[1] + u * g[2]
        f3 = -6 * g[1] - 6 * x * g[2] + u * g[3]
        terms = [(x * x - 1) ** 2 * f3, 2 * (x * x - 1) * x * f2, -6 * (x * x - 1) * f1**2,
                 (8 * x * f - q * (x * x - 1) - 2 * s * x - 2 * r) * f1, -f * (2 * f - q * x - s)]
    T = np.array(terms)
    res = np.abs(T.sum(axis=0))
    scale = float(np.max(np.abs(T)))
    # independent estimate: the same residual from an interpolant of lower degree
    err = float("nan")
    if degree > 20:
        try:
            coarse = painleve_residual(fam, n, x, fam.a, fam.b, degree - 10, jacobi_params)
            err = abs(coarse.scaled_residual - float(res.max()) / scale)
        except NumericalError:
            pass
    params = {"a": fam.a, "b": fam.b, "x": [lo, hi]}
    if fam.kind == "jacobi":
        params["jacobi_params"] = jacobi_params
    return ResidualReport(f"painleve[{fam.kind}]", fam.kind, n, params, float(res.max()),
                          float(res.max()) / scale, err, {"max_term": scale})


def gap_ratio(ctx: TauContext) -> float:
    """tau_n(0, E) / tau_n(0, support)."""
    full = TauContext(ctx.family, ctx.n, None, ())
    return math.exp(_log_tau(ctx.with_times(())) - _log_tau(full))
