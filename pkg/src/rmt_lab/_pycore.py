"""Pure-Python twins of the compiled loops in ``_core.pyx``.

Selected automatically when the extension is not built, or forced with
``RMT_LAB_PURE=1``.
"""
from __future__ import annotations

from bisect import bisect_left, bisect_right

import numpy as np


def patience(seq, strict):
    seq = np.asarray(seq, dtype=np.int64)
    tops: list[int] = []
    assign = np.empty(len(seq), dtype=np.int64)
    find = bisect_left if strict else bisect_right
    for i, x in enumerate(seq.tolist()):
        k = find(tops, x)
        if k == len(tops):
            tops.append(x)
        else:
            tops[k] = x
        assign[i] = k
    return len(tops), assign


def patience_count_rows(seqs, strict):
    seqs = np.asarray(seqs, dtype=np.int64)
    return np.array([patience(row, strict)[0] for row in seqs], dtype=np.int64)


def rsk_insert(bottom, top, shape_only=False):
    P: list[list[int]] = []
    Q: list[list[int]] = []
    for x, i in zip(np.asarray(bottom).tolist(), np.asarray(top).tolist()):
        r = 0
        while True:
            if r == len(P):
                P.append([x])
                Q.append([i])
                break
            row = P[r]
            pos = bisect_right(row, x)
            if pos == len(row):
                row.append(x)
                Q[r].append(i)
                break
            row[pos], x = x, row[pos]
            r += 1
    if shape_only:
        return [len(row) for row in P]
    return P, Q


def lpp(w):
    w = np.asarray(w, dtype=np.float64)
    p, q = w.shape
    if p == 0 or q == 0:
        return 0.0
    G = np.cumsum(w[0])
    for i in range(1, p):
        G[0] += w[i, 0]
        for j in range(1, q):
            G[j] = max(G[j], G[j - 1]) + w[i, j]
    return float(G[-1])


def lpp_batch(w):
    # vectorised over the stack axis; same recursion as ``lpp``
    w = np.asarray(w, dtype=np.float64)
    m, p, q = w.shape
    if p == 0 or q == 0:
        return np.zeros(m)
    G = np.cumsum(w[:, 0, :], axis=1)
    for i in range(1, p):
        G[:, 0] += w[:, i, 0]
        for j in range(1, q):
            G[:, j] = np.maximum(G[:, j], G[:, j - 1]) + w[:, i, j]
    return G[:, -1].copy()


def png_grow(omega):
    omega = np.asarray(omega, dtype=np.float64)
    nt, nx = omega.shape
    h = np.zeros((nt, nx))
    h[0] = omega[0]
    for t in range(1, nt):
        prev = h[t - 1]
        m = prev.copy()
        m[1:] = np.maximum(m[1:], prev[:-1])
        m[:-1] = np.maximum(m[:-1], prev[1:])
        h[t] = m + omega[t]
    return h
