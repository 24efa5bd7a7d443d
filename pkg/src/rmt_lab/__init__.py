"""Random-matrix and longest-increasing-subsequence toolkit.

Modules
-------
partitions
    Young diagrams, hook and dimension formulas, Plancherel measure.
rsk
    RSK correspondence, patience sorting, last-passage percolation.
exact_laws
    Exact finite-size laws of LIS, geometric last passage and walkers.
kernels
    Toeplitz and Fredholm determinants, Christoffel-Darboux kernels.
tracy_widom
    Airy function and kernel, Tracy-Widom law by two routes.
simulate
    Seeded Monte-Carlo and deterministic model equivalences.
integrable
    Tau-functions, Toda entries, KP/Virasoro/Painleve residuals.

The hot loops (patience sorting, RSK insertion, last passage, polynuclear
growth) run in a compiled extension when it is available and in pure Python
otherwise; ``BACKEND`` names the one in use. Set ``RMT_LAB_PURE=1`` to force
the Python version.
"""
from ._backend import BACKEND
from ._util import Diagnostics, NumericalError

__all__ = ["BACKEND", "Diagnostics", "NumericalError"]
__version__ = "0.1.0"
