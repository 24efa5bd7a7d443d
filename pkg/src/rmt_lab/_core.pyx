# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: patience sorting, row insertion, last-passage DP, PNG growth.

Every function here has a line-for-line twin in ``_pycore``; the two are
checked against each other in the test suite.
"""
import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, realloc, free

cnp.import_array()


cdef inline Py_ssize_t _bisect(const long long* a, Py_ssize_t n, long long x, bint right) noexcept nogil:
    # first index i with a[i] > x (right) or a[i] >= x (left)
    cdef Py_ssize_t lo = 0, hi = n, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if a[mid] < x or (right and a[mid] == x):
            lo = mid + 1
        else:
            hi = mid
    return lo


def patience(const long long[::1] seq, bint strict):
    """Pile count and leftmost-pile assignment of every card."""
    cdef Py_ssize_t n = seq.shape[0], i, k, npiles = 0
    cdef cnp.ndarray[cnp.int64_t, ndim=1] tops = np.empty(max(n, 1), dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] assign = np.empty(n, dtype=np.int64)
    cdef long long* t = <long long*> tops.data
    with nogil:
        for i in range(n):
            k = _bisect(t, npiles, seq[i], not strict)
            t[k] = seq[i]
            if k == npiles:
                npiles += 1
            assign[i] = k
    return npiles, assign


def patience_count_rows(const long long[:, ::1] seqs, bint strict):
    """Pile counts for each row of a 2-D array."""
    cdef Py_ssize_t m = seqs.shape[0], n = seqs.shape[1], r, i, k, npiles
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(m, dtype=np.int64)
    cdef long long* t = <long long*> malloc(max(n, 1) * sizeof(long long))
    if t == NULL:
        raise MemoryError()
    try:
        with nogil:
            for r in range(m):
                npiles = 0
                for i in range(n):
                    k = _bisect(t, npiles, seqs[r, i], not strict)
                    t[k] = seqs[r, i]
                    if k == npiles:
                        npiles += 1
                out[r] = npiles
    finally:
        free(t)
    return out


def rsk_insert(const long long[::1] bottom, const long long[::1] top, bint shape_only=False):
    """Row-insert ``bottom`` recording ``top``; returns (P, Q) as lists of rows.

    With ``shape_only`` the recording tableau is skipped and only the
    row lengths are returned.
    """
    cdef Py_ssize_t n = bottom.shape[0], k, r, pos, nrows = 0, j
    cdef long long x, y
    cdef long long** prow = <long long**> malloc(max(n, 1) * sizeof(long long*))
    cdef long long** qrow = <long long**> malloc(max(n, 1) * sizeof(long long*))
    cdef Py_ssize_t* rlen = <Py_ssize_t*> malloc(max(n, 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t* rcap = <Py_ssize_t*> malloc(max(n, 1) * sizeof(Py_ssize_t))
    cdef long long* tmp
    if prow == NULL or qrow == NULL or rlen == NULL or rcap == NULL:
        free(prow); free(qrow); free(rlen); free(rcap)
        raise MemoryError()
    try:
        for k in range(n):
            x = bottom[k]
            r = 0
            while True:
                if r == nrows:
                    rcap[r] = 16
                    prow[r] = <long long*> malloc(16 * sizeof(long long))
                    qrow[r] = <long long*> malloc(16 * sizeof(long long))
                    if prow[r] == NULL or qrow[r] == NULL:
                        raise MemoryError()
                    rlen[r] = 0
                    nrows += 1
                pos = _bisect(prow[r], rlen[r], x, True)
                if pos == rlen[r]:
                    if rlen[r] == rcap[r]:
                        rcap[r] *= 2
                        tmp = <long long*> realloc(prow[r], rcap[r] * sizeof(long long))
                        if tmp == NULL:
                            raise MemoryError()
                        prow[r] = tmp
                        tmp = <long long*> realloc(qrow[r], rcap[r] * sizeof(long long))
                        if tmp == NULL:
                            raise MemoryError()
                        qrow[r] = tmp
                    prow[r][pos] = x
                    qrow[r][pos] = top[k]
                    rlen[r] += 1
                    break
                y = prow[r][pos]
                prow[r][pos] = x
                x = y
                r += 1
        if shape_only:
            return [rlen[r] for r in range(nrows)]
        P = [[prow[r][j] for j in range(rlen[r])] for r in range(nrows)]
        Q = [[qrow[r][j] for j in range(rlen[r])] for r in range(nrows)]
        return P, Q
    finally:
        for r in range(nrows):
            free(prow[r])
            free(qrow[r])
        free(prow); free(qrow); free(rlen); free(rcap)


def lpp(const double[:, ::1] w):
    """Last-passage value max over up/right paths of the entry sums."""
    cdef Py_ssize_t p = w.shape[0], q = w.shape[1], i, j
    if p == 0 or q == 0:
        return 0.0
    cdef cnp.ndarray[cnp.float64_t, ndim=1] g = np.zeros(q, dtype=np.float64)
    cdef double* G = <double*> g.data
    with nogil:
        for j in range(q):
            G[j] = (G[j - 1] if j > 0 else 0.0) + w[0, j]
        for i in range(1, p):
            G[0] = G[0] + w[i, 0]
            for j in range(1, q):
                G[j] = (G[j] if G[j] > G[j - 1] else G[j - 1]) + w[i, j]
    return g[q - 1]


def lpp_batch(const double[:, :, ::1] w):
    """Last-passage values for a stack of matrices."""
    cdef Py_ssize_t m = w.shape[0], p = w.shape[1], q = w.shape[2], s, i, j
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.zeros(m, dtype=np.float64)
    if p == 0 or q == 0:
        return out
    cdef double* G = <double*> malloc(q * sizeof(double))
    if G == NULL:
        raise MemoryError()
    try:
        with nogil:
            for s in range(m):
                G[0] = 0.0
                for j in range(q):
                    G[j] = (G[j - 1] if j > 0 else 0.0) + w[s, 0, j]
                for i in range(1, p):
                    G[0] = G[0] + w[s, i, 0]
                    for j in range(1, q):
                        G[j] = (G[j] if G[j] > G[j - 1] else G[j - 1]) + w[s, i, j]
                out[s] = G[q - 1]
    finally:
        free(G)
    return out


def png_grow(const double[:, ::1] omega):
    """Polynuclear growth heights.

    ``omega[t, x + T]`` holds the nucleation at site x, time t, for
    t = 0..T and x = -T..T. Returns ``h[t, x + T]`` with h(., 0) = omega(., 0)
    and h(x, t+1) = max(h(x-1,t), h(x,t), h(x+1,t)) + omega(x, t+1).
    """
    cdef Py_ssize_t nt = omega.shape[0], nx = omega.shape[1], t, x
    cdef cnp.ndarray[cnp.float64_t, ndim=2] h = np.zeros((nt, nx), dtype=np.float64)
    cdef double m
    with nogil:
        for x in range(nx):
            h[0, x] = omega[0, x]
        for t in range(1, nt):
            for x in range(nx):
                m = h[t - 1, x]
                if x > 0 and h[t - 1, x - 1] > m:
                    m = h[t - 1, x - 1]
                if x + 1 < nx and h[t - 1, x + 1] > m:
                    m = h[t - 1, x + 1]
                h[t, x] = m + omega[t, x]
    return h
