"""Quick invariant suites behind ``rmt-lab check``."""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

Result = tuple[str, bool, str]


def _exact() -> list[Result]:
    from .exact_laws import perm_lis_cdf
    from .partitions import dim_semistandard, dim_standard, partitions_of

    out = []
    ok = all(sum(dim_standard(l) ** 2 for l in partitions_of(n)) == math.factorial(n) for n in range(1, 9))
    out.append(("sum (f^lambda)^2 = n!, n <= 8", ok, "exact"))
    ok = all(
        sum(dim_standard(l) * dim_semistandard(l, q) for l in partitions_of(n, max_length=q)) == q**n
        for n in range(1, 7) for q in (1, 2, 3)
    )
    out.append(("sum f^lambda s_lambda(1^q) = q^n", ok, "exact"))
    v = perm_lis_cdf(3, 2)
    out.append(("P(L(pi_3) <= 2) = 5/6", str(v) == "5/6", str(v)))
    return out


def _rsk() -> list[Result]:
    from .rsk import BiWord, biword_to_matrix, lis_length, optimal_path_weight, rsk, rsk_inverse

    g = np.random.Generator(np.random.Philox(12345))
    bad = 0
    for _ in range(300):
        p, q, n = (int(v) for v in g.integers(1, 6, 2).tolist() + [g.integers(0, 30)])
        pairs = sorted(zip(g.integers(1, p + 1, n).tolist(), g.integers(1, q + 1, n).tolist()))
        bw = BiWord.from_pairs(pairs, p, q)
        t = rsk(bw)
        lam1 = t.shape[0] if len(t.shape) else 0
        L = lis_length(bw.bottom, strict=False)
        W = optimal_path_weight(biword_to_matrix(bw)) if n else 0
        if not (L == lam1 == W) or rsk_inverse(t, p, q) != bw:
            bad += 1
    return [("L = lambda_1 = last passage, and RSK inverts", bad == 0, f"{bad} failures in 300")]


def _kernels() -> list[Result]:
    from .exact_laws import poissonized_plancherel_cdf
    from .kernels import cd_kernel, gessel_fredholm, gessel_toeplitz, reproducing_check

    t, f = gessel_toeplitz(1.0, 3), gessel_fredholm(1.0, 3)
    p = float(poissonized_plancherel_cdf(1.0, k=3))
    d = max(abs(t - f), abs(t - p))
    out = [("Toeplitz = Fredholm = Poissonized sum (xi=1, n=3)", d < 1e-8, f"{d:.2e}")]
    tr, defect = reproducing_check(cd_kernel("hermite", 4))
    out.append(("Hermite kernel trace = n and reproduces", abs(tr - 4) < 1e-8 and defect < 1e-8,
                f"trace {tr:.12f}, defect {defect:.1e}"))
    return out


def _tw() -> list[Result]:
    from .tracy_widom import tw_cdf_fredholm, tw_cdf_painleve

    xs = np.array([-3.0, -1.0, 1.0])
    d = float(np.max(np.abs(tw_cdf_fredholm(xs) - tw_cdf_painleve(xs))))
    return [("Fredholm and Painleve II routes agree", d < 1e-6, f"{d:.2e}")]


def _integrable() -> list[Result]:
    from .integrable import TauContext, kp_residual, virasoro_residual

    kp = kp_residual(TauContext.make("hermite", 1))
    vr = virasoro_residual(TauContext.make("hermite", 2, [(-math.inf, 1.0)]), -1)
    return [
        ("KP residual (Gauss, n=1)", kp.scaled_residual < 1e-4, f"{kp.scaled_residual:.1e}"),
        ("Virasoro k=-1 residual (Gauss, n=2)", vr.scaled_residual < 1e-4, f"{vr.scaled_residual:.1e}"),
    ]


def _simulate() -> list[Result]:
    from .rsk import optimal_path_weight
    from .simulate import RngConfig, png_height, png_to_lpp_matrix, queue_departure, sample_png_field

    g = RngConfig(2024).generator()
    bad = 0
    for _ in range(200):
        V = g.integers(0, 6, tuple(g.integers(1, 6, 2)))
        bad += queue_departure(V) != optimal_path_weight(V)
    out = [("queue departure = last passage", bad == 0, f"{bad} failures in 200")]
    bad = 0
    for _ in range(50):
        T = 9
        om = sample_png_field(T, 0.5, g)
        for t in range(1, 6):
            for x in range(-t + 1, t):
                if abs(2 * x) <= T:
                    bad += png_height(x, t, om) != optimal_path_weight(png_to_lpp_matrix(x, t, om))
    out.append(("PNG height = last passage on the mapped field", bad == 0, f"{bad} failures"))
    return out


SUITES: dict[str, Callable[[], list[Result]]] = {
    "exact": _exact,
    "rsk": _rsk,
    "kernels": _kernels,
    "tw": _tw,
    "integrable": _integrable,
    "simulate": _simulate,
}


def run_checks(suite: str = "all") -> list[Result]:
    names = list(SUITES) if suite == "all" else [suite]
    out: list[Result] = []
    for name in names:
        out.extend((f"{name}: {label}", ok, detail) for label, ok, detail in SUITES[name]())
    return out
