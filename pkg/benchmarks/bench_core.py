"""Timing of the compiled core against the pure-Python fallback.

Usage::

    python benchmarks/bench_core.py [--repeat 5] [--json]

Each kernel is run on identical seeded inputs through ``rmt_lab._core`` and
``rmt_lab._pycore``; outputs are compared before timing.
"""
from __future__ import annotations

import argparse
import json
import timeit

import numpy as np

from rmt_lab import _pycore

try:
    from rmt_lab import _core
except ImportError:  # extension not built
    _core = None


def _cases(rng: np.random.Generator) -> dict:
    perm = rng.permutation(100_000).astype(np.int64)
    rows = rng.permuted(np.tile(np.arange(200, dtype=np.int64), (2000, 1)), axis=1)
    word = rng.integers(1, 50, 20_000).astype(np.int64)
    top = np.sort(rng.integers(1, 50, 20_000)).astype(np.int64)
    w = rng.exponential(size=(300, 300))
    stack = rng.geometric(0.5, size=(2000, 20, 20)).astype(np.float64)
    omega = (rng.random((200, 401)) < 0.05).astype(np.float64)
    return {
        "patience n=1e5": ("patience", (perm, True)),
        "patience rows 2000x200": ("patience_count_rows", (rows, True)),
        "rsk_insert n=2e4": ("rsk_insert", (word, top)),
        "lpp 300x300": ("lpp", (w,)),
        "lpp_batch 2000x20x20": ("lpp_batch", (stack,)),
        "png_grow 200x401": ("png_grow", (omega,)),
    }


def _same(a, b) -> bool:
    if isinstance(a, tuple) and isinstance(b, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    try:
        return bool(np.allclose(np.asarray(a, dtype=float), np.asarray(b, dtype=float)))
    except (ValueError, TypeError):
        return [list(r) for r in a] == [list(r) for r in b]


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true")
    args = ap.parse_args()

    if _core is None:
        raise SystemExit("compiled core not built; run `pip install -e . --no-build-isolation`")
    rng = np.random.Generator(np.random.Philox(20261015))
    out = []
    for label, (name, inputs) in _cases(rng).items():
        fc, fp = getattr(_core, name), getattr(_pycore, name)
        agree = _same(fc(*inputs), fp(*inputs))
        tc = min(timeit.repeat(lambda: fc(*inputs), number=1, repeat=args.repeat))
        tp = min(timeit.repeat(lambda: fp(*inputs), number=1, repeat=max(1, args.repeat // 2)))
        out.append({"case": label, "cython_s": tc, "python_s": tp, "speedup": tp / tc, "agree": agree})

    if args.json:
        print(json.dumps(out, indent=2))
        return
    print(f"{'case':<26}{'cython [s]':>12}{'python [s]':>12}{'speedup':>10}  agree")
    for r in out:
        print(f"{r['case']:<26}{r['cython_s']:>12.4f}{r['python_s']:>12.4f}{r['speedup']:>10.1f}  {r['agree']}")


if __name__ == "__main__":
    main()
