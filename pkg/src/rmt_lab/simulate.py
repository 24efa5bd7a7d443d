"""Seeded Monte-Carlo samplers and deterministic model equivalences.

Random streams come from the Philox counter-based generator keyed by
``SeedSequence([seed, stream])``, so a given (seed, stream) pair gives the
same numbers on every platform. Bulk sampling is split into fixed chunks,
each with its own sub-stream, so results do not depend on the thread count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import _backend
from ._util import dumps, max_threads, write_csv
from .exact_laws import geometric_lpp_cdf_table
from .kernels import gap_probability
from .partitions import Partition, omega_curve
from .rsk import rsk_shape

CHUNK = 1000


# -- random streams ---------------------------------------------------------------

@dataclass(frozen=True)
class RngConfig:
    """Philox stream identified by a 64-bit seed and a stream id."""

    seed: int = 0
    stream: int = 0

    def __post_init__(self):
        if not (0 <= int(self.seed) < 2**64):
            raise ValueError("seed must be a 64-bit unsigned integer")
        if int(self.stream) < 0:
            raise ValueError("stream id must be nonnegative")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(self.seed), int(self.stream)])))

    def substream(self, i: int) -> np.random.Generator:
        """Independent generator for chunk ``i`` of this stream."""
        ss = np.random.SeedSequence([int(self.seed), int(self.stream)], spawn_key=(int(i),))
        return np.random.Generator(np.random.Philox(ss))


def as_rng(rng) -> np.random.Generator:
    """Accept a Generator, an RngConfig or an integer seed."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngConfig):
        return rng.generator()
    if rng is None:
        raise ValueError("an explicit seed or RngConfig is required")
    return RngConfig(int(rng)).generator()


def _as_config(rng) -> RngConfig:
    if isinstance(rng, RngConfig):
        return rng
    if isinstance(rng, (int, np.integer)):
        return RngConfig(int(rng))
    raise TypeError("bulk samplers need an RngConfig or an integer seed")


def _chunked(total: int, rng, work: Callable[[np.random.Generator, int], np.ndarray]) -> np.ndarray:
    # fixed chunk boundaries and sub-streams; threads only change wall time
    cfg = _as_config(rng)
    sizes = [min(CHUNK, total - s) for s in range(0, total, CHUNK)]
    jobs = [(cfg.substream(i), m) for i, m in enumerate(sizes)]
    nthreads = min(max_threads(), len(jobs)) or 1
    if nthreads > 1:
        with ThreadPoolExecutor(nthreads) as ex:
            parts = list(ex.map(lambda j: work(*j), jobs))
    else:
        parts = [work(*j) for j in jobs]
    return np.concatenate(parts) if parts else np.empty(0)


# -- empirical distributions --------------------------------------------------------

@dataclass
class EmpiricalCdf:
    """Right-continuous step CDF of a sample."""

    samples: np.ndarray

    def __post_init__(self):
        self.samples = np.sort(np.asarray(self.samples, dtype=float).ravel())

    @property
    def count(self) -> int:
        return int(self.samples.size)

    def __call__(self, x):
        v = np.searchsorted(self.samples, np.asarray(x, dtype=float), side="right") / max(self.count, 1)
        return float(v) if np.ndim(v) == 0 else v

    def ks_distance(self, cdf: Callable) -> float:
        """sup_x |F_n(x) - F(x)| for a continuous reference CDF."""
        x = self.samples
        n = self.count
        F = np.asarray(cdf(x), dtype=float)
        upper = np.searchsorted(x, x, side="right") / n
        lower = np.searchsorted(x, x, side="left") / n
        return float(max(np.max(np.abs(upper - F)), np.max(np.abs(F - lower))))

    def to_csv(self) -> str:
        xs, idx = np.unique(self.samples, return_index=True)
        vals = self(xs)
        return write_csv(["x", "F"], zip(xs.tolist(), np.atleast_1d(vals).tolist()))


@dataclass
class SampleSummary:
    """JSON record {model, params, seed, n_samples, statistics}."""

    model: str
    params: dict
    seed: int
    n_samples: int
    statistics: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return dumps(self)


def summarize(model: str, params: dict, seed: int, values) -> SampleSummary:
    v = np.asarray(values, dtype=float)
    stats = {
        "mean": float(v.mean()),
        "std": float(v.std(ddof=1)) if v.size > 1 else 0.0,
        "min": float(v.min()),
        "max": float(v.max()),
    }
    return SampleSummary(model, dict(params), int(seed), int(v.size), stats)


# -- permutations, words, matrices ----------------------------------------------------

def sample_permutation(n: int, rng) -> np.ndarray:
    """Uniform permutation of 1..n (Fisher-Yates via ``Generator.permutation``)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return as_rng(rng).permutation(n).astype(np.int64) + 1


def sample_permutations(n: int, m: int, rng) -> np.ndarray:
    """``m`` independent uniform permutations as rows of an (m, n) array."""
    g = as_rng(rng)
    base = np.tile(np.arange(1, n + 1, dtype=np.int64), (m, 1))
    return g.permuted(base, axis=1)


def sample_word(n: int, q: int, rng, size: int | None = None) -> np.ndarray:
    """I.i.d. uniform letters in 1..q."""
    if n < 0 or q < 1:
        raise ValueError("need n >= 0 and q >= 1")
    shape = (n,) if size is None else (size, n)
    return as_rng(rng).integers(1, q + 1, size=shape, dtype=np.int64)


def sample_geometric_matrix(p: int, q: int, xi: float, rng, size: int | None = None) -> np.ndarray:
    """I.i.d. entries with P(k) = (1 - xi) xi^k, by inversion floor(log U / log xi)."""
    if not (0 < xi < 1):
        raise ValueError("xi must lie in (0, 1)")
    shape = (p, q) if size is None else (size, p, q)
    u = 1.0 - as_rng(rng).random(shape)  # in (0, 1]
    return np.floor(np.log(u) / math.log(xi)).astype(np.int64)


def sample_exponential_matrix(p: int, q: int, rng, size: int | None = None) -> np.ndarray:
    """I.i.d. unit-rate exponential entries by inversion."""
    shape = (p, q) if size is None else (size, p, q)
    return -np.log1p(-as_rng(rng).random(shape))


# -- deterministic equivalences --------------------------------------------------------

def queue_departure(V) -> float:
    """Departure time of the last customer from the last of p servers in series.

    Customer j leaves server i at D(i, j) = max(D(i-1, j), D(i, j-1)) + V(i, j)
    with D(0, j) = D(i, 0) = 0: it must have left the previous server and the
    previous customer must have left this one.
    """
    V = np.asarray(V)
    if V.ndim != 2 or (V < 0).any():
        raise ValueError("V must be a nonnegative matrix")
    p, q = V.shape
    free = [0] * (q + 1)  # free[j]: departure of customer j from the current server
    for i in range(p):
        prev = 0
        for j in range(q):
            prev = max(free[j + 1], prev) + V[i, j].item()
            free[j + 1] = prev
    return free[q]


def check_png_field(omega) -> np.ndarray:
    """Validate a nucleation field stored as omega[t, x + T], t = 0..T."""
    omega = np.asarray(omega)
    if omega.ndim != 2 or omega.shape[1] != 2 * (omega.shape[0] - 1) + 1:
        raise ValueError("omega must have shape (T + 1, 2T + 1)")
    T = omega.shape[0] - 1
    t = np.arange(T + 1)[:, None]
    x = np.arange(-T, T + 1)[None, :]
    forbidden = ((t - x) % 2 == 0) | (np.abs(x) > t)
    if np.any(omega[forbidden] != 0):
        raise ValueError("omega must vanish where t - x is even or |x| > t")
    if (omega < 0).any():
        raise ValueError("omega must be nonnegative")
    return omega


def png_heights(omega, check: bool = True) -> np.ndarray:
    """All heights h[t, x + T] from h(x, t+1) = max(h(x-1,t), h(x,t), h(x+1,t)) + omega(x, t+1)."""
    if check:
        omega = check_png_field(omega)
    return _backend.png_grow(np.ascontiguousarray(omega, dtype=np.float64))


def png_height(x: int, t: int, omega, check: bool = True) -> float:
    """Height h(2x, 2t - 1) of the polynuclear growth model."""
    omega = check_png_field(omega) if check else np.asarray(omega)
    T = omega.shape[0] - 1
    if not (1 <= t and abs(x) < t and 2 * t - 1 <= T and abs(2 * x) <= T):
        raise ValueError("need |x| < t and 2t - 1 <= T")
    h = png_heights(omega, check=False)
    return float(h[2 * t - 1, 2 * x + T])


def png_to_lpp_matrix(x: int, t: int, omega) -> np.ndarray:
    """V(i, j) = omega(i - j, i + j - 1) on the (t + x) x (t - x) rectangle."""
    omega = np.asarray(omega)
    T = omega.shape[0] - 1
    p, q = t + x, t - x
    i = np.arange(1, p + 1)[:, None]
    j = np.arange(1, q + 1)[None, :]
    return omega[i + j - 1, i - j + T]


def sample_png_field(T: int, xi: float, rng) -> np.ndarray:
    """Geometric(xi) nucleations on the allowed sites of the (T + 1) x (2T + 1) field."""
    g = as_rng(rng)
    omega = np.floor(np.log(1.0 - g.random((T + 1, 2 * T + 1))) / math.log(xi))
    t = np.arange(T + 1)[:, None]
    x = np.arange(-T, T + 1)[None, :]
    omega[((t - x) % 2 == 0) | (np.abs(x) > t)] = 0
    return omega.astype(np.int64)


# -- bulk LIS and LPP -------------------------------------------------------------------

def lis_samples(n: int, m: int, rng, strict: bool = True) -> np.ndarray:
    """Pile counts of ``m`` uniform permutations of size n."""
    def work(g, k):
        return _backend.patience_count_rows(sample_permutations(n, k, g), strict)
    return _chunked(m, rng, work).astype(np.int64)


def word_lis_samples(n: int, q: int, m: int, rng) -> np.ndarray:
    """Weakly increasing LIS lengths of ``m`` uniform words."""
    def work(g, k):
        return _backend.patience_count_rows(sample_word(n, q, g, size=k), False)
    return _chunked(m, rng, work).astype(np.int64)


def lpp_samples(p: int, q: int, xi: float, m: int, rng) -> np.ndarray:
    """Last-passage values of ``m`` geometric(xi) p x q matrices."""
    def work(g, k):
        return _backend.lpp_batch(sample_geometric_matrix(p, q, xi, g, size=k).astype(np.float64))
    return np.rint(_chunked(m, rng, work)).astype(np.int64)


# -- GUE -----------------------------------------------------------------------------------

def _gue_matrices(n: int, m: int, g: np.random.Generator) -> np.ndarray:
    # density prop. to exp(-Tr H^2): diagonal var 1/2, off-diagonal Re/Im var 1/4
    A = g.standard_normal((m, n, n)) * 0.5
    B = g.standard_normal((m, n, n)) * 0.5
    H = np.triu(A, 1) + 1j * np.triu(B, 1)
    H = H + np.conj(np.swapaxes(H, -1, -2))
    d = g.standard_normal((m, n)) * math.sqrt(0.5)
    idx = np.arange(n)
    H[:, idx, idx] = d
    return H


def sample_gue(n: int, rng, size: int | None = None) -> np.ndarray:
    """Sorted eigenvalues of GUE matrices with density c exp(-Tr H^2) dH."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if size is None:
        H = _gue_matrices(n, 1, as_rng(rng))[0]
        return _eigvalsh(H)
    chunk = max(1, min(CHUNK, 4_000_000 // (n * n)))

    def work(g, k):
        out = []
        for s in range(0, k, chunk):
            out.append(_eigvalsh(_gue_matrices(n, min(chunk, k - s), g)))
        return np.concatenate(out)

    return _chunked(size, rng, work).reshape(size, n)


def _eigvalsh(H):
    try:
        return np.linalg.eigvalsh(H)
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"eigenvalue solver failed: {exc}") from exc


def edge_rescale(eigs, n: int):
    """sqrt(2) n^{1/6} (z_max - sqrt(2n)) for sorted eigenvalues (last axis)."""
    z = np.asarray(eigs, dtype=float)
    zmax = z[..., -1]
    val = math.sqrt(2.0) * n ** (1.0 / 6.0) * (zmax - math.sqrt(2.0 * n))
    return float(val) if np.ndim(val) == 0 else val


def gue_edge_samples(n: int, m: int, rng) -> np.ndarray:
    return edge_rescale(sample_gue(n, rng, size=m), n)


# -- equilibrium densities -----------------------------------------------------------

def semicircle_density(z, v: float = 1.0):
    """sqrt(4 v^2 - z^2) / (2 pi v^2) on [-2v, 2v], zero outside."""
    if v <= 0:
        raise ValueError("v must be positive")
    z = np.asarray(z, dtype=float)
    val = np.sqrt(np.maximum(4 * v * v - z * z, 0.0)) / (2 * np.pi * v * v)
    return float(val) if val.ndim == 0 else val


def _two_atom_coeffs(alpha, beta, p):
    # g^3 + b(z) g^2 + c(z) g + d(z), coefficients as polynomials in z
    P = np.polynomial.Polynomial
    b = P([-(alpha + beta), -1.0])
    c = P([alpha * beta + 1.0, alpha + beta])
    d = P([-(1 - p) * alpha - p * beta, -alpha * beta])
    return b, c, d


def two_atom_discriminant(alpha: float, beta: float, p: float) -> np.polynomial.Polynomial:
    """Discriminant D1(z) of the equilibrium cubic in g, a quartic in z.

    The cubic has a complex pair of roots exactly where D1(z) < 0.
    """
    if not (0 < p < 1):
        raise ValueError("p must lie in (0, 1)")
    b, c, d = _two_atom_coeffs(alpha, beta, p)
    return 18 * b * c * d - 4 * b**3 * d + b**2 * c**2 - 4 * c**3 - 27 * d**2


def two_atom_support(alpha: float, beta: float, p: float) -> np.ndarray:
    """Real roots of D1, sorted; these bound the support of the density."""
    roots = two_atom_discriminant(alpha, beta, p).roots()
    real = roots[np.abs(roots.imag) < 1e-9 * (1 + np.abs(roots.real))].real
    return np.sort(real)


def two_atom_equilibrium(z, alpha: float, beta: float, p: float):
    """Equilibrium density Im g(z) / pi where D1(z) < 0, zero elsewhere."""
    if not (0 < p < 1):
        raise ValueError("p must lie in (0, 1)")
    zs = np.atleast_1d(np.asarray(z, dtype=float))
    D1 = two_atom_discriminant(alpha, beta, p)(zs)
    out = np.zeros_like(zs)
    b, c, d = _two_atom_coeffs(alpha, beta, p)
    for k, zk in enumerate(zs):
        if D1[k] < 0:
            r = np.roots([1.0, b(zk), c(zk), d(zk)])
            out[k] = r.imag.max() / np.pi
    return float(out[0]) if np.ndim(z) == 0 else out


def semicircle_histogram_deviation(n: int, samples: int, rng, bins: int = 40) -> float:
    """sup over bins of |empirical density - bin-averaged limit| in x = z / sqrt(2n).

    In the rescaled variable the eigenvalue density of the n-point GUE tends
    to (2/pi) sqrt(1 - x^2), the semicircle with v = 1/2. ``rng`` is an
    ``RngConfig`` or integer seed, as for the other bulk samplers.
    """
    eig = sample_gue(n, rng, size=samples).ravel() / math.sqrt(2.0 * n)
    edges = np.linspace(-1.2, 1.2, bins + 1)
    hist, _ = np.histogram(eig, bins=edges, density=False)
    emp = hist / (eig.size * np.diff(edges))

    def cdf(x):
        x = np.clip(x, -1.0, 1.0)
        return 0.5 + (x * np.sqrt(1 - x * x) + np.arcsin(x)) / np.pi

    ref = np.diff(cdf(edges)) / np.diff(edges)
    return float(np.max(np.abs(emp - ref)))


# -- limit shape ----------------------------------------------------------------------

def shape_profile(lam, u, scale: float = 1.0):
    """Rotated-coordinate boundary of the diagram, v(u s)/s, piecewise linear.

    The boundary starts at (u, v) = (-rows, rows), moves (+1, +1) along each
    row and (+1, -1) between rows, and equals |u| outside the diagram.
    """
    lam = list(Partition(lam))
    ell = len(lam)
    us, vs = [-float(ell)], [float(ell)]
    ext = lam + [0]
    for i in range(ell - 1, -1, -1):
        for _ in range(ext[i] - ext[i + 1]):
            us.append(us[-1] + 1)
            vs.append(vs[-1] + 1)
        us.append(us[-1] + 1)
        vs.append(vs[-1] - 1)
    us_a, vs_a = np.array(us), np.array(vs)
    uu = np.asarray(u, dtype=float) * scale
    inside = (uu >= us_a[0]) & (uu <= us_a[-1])
    out = np.where(inside, np.interp(uu, us_a, vs_a), np.abs(uu)) / scale
    return out


def shape_deviation(n: int, samples: int, rng, step: float = 0.05) -> float:
    """Mean over samples of sup_u |profile(u sqrt(n))/sqrt(n) - Omega(u)|."""
    if n < 4:
        raise ValueError("n must be >= 4")
    g = as_rng(rng)
    u = np.arange(-3.0, 3.0 + step / 2, step)
    om = omega_curve(u)
    devs = []
    for _ in range(samples):
        lam = rsk_shape(sample_permutation(n, g))
        devs.append(np.max(np.abs(shape_profile(lam, u, math.sqrt(n)) - om)))
    return float(np.mean(devs))


# -- finite-q limit -------------------------------------------------------------------

def finite_q_gaussian_ratio(q: int, y: float) -> float:
    """Ratio of q-fold integrals of Delta(x)^2 prod exp(-x_i^2/2) over (-inf, y]^q and R^q.

    Computed as the Hermite-ensemble gap probability for (y / sqrt(2), inf).
    """
    if q < 1:
        raise ValueError("q must be >= 1")
    return float(gap_probability("hermite", q, [(y / math.sqrt(2.0), math.inf)]))


def finite_q_limit_check(q: int, p: int, xi: float, y, dps: int = 40):
    """(lhs, rhs) with lhs the exact P((L - xi p/(1-xi)) / (sqrt(xi p)/(1-xi)) <= y)."""
    ys = np.atleast_1d(np.asarray(y, dtype=float))
    mean = xi * p / (1 - xi)
    sd = math.sqrt(xi * p) / (1 - xi)
    thresholds = np.floor(mean + ys * sd).astype(int)
    top = int(max(thresholds.max(), 0))
    table = geometric_lpp_cdf_table(p, q, xi, top, dps=dps)
    lhs = np.array([float(table[t]) if t >= 0 else 0.0 for t in thresholds])
    rhs = np.array([finite_q_gaussian_ratio(q, yv) for yv in ys])
    if np.ndim(y) == 0:
        return float(lhs[0]), float(rhs[0])
    return lhs, rhs
