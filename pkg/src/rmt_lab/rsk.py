"""Robinson-Schensted-Knuth correspondence, patience sorting and last passage.

The three views of a generalized permutation (two-row array, tableau
pair, nonnegative integer matrix) are represented by :class:`BiWord`,
:class:`TableauPair` and :class:`CountMatrix`.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _backend
from .partitions import Partition


@dataclass(frozen=True)
class BiWord:
    """Two-row array with columns (i_k; j_k) sorted lexicographically."""

    top: tuple[int, ...]
    bottom: tuple[int, ...]
    p: int
    q: int

    def __post_init__(self):
        top = tuple(int(v) for v in self.top)
        bottom = tuple(int(v) for v in self.bottom)
        object.__setattr__(self, "top", top)
        object.__setattr__(self, "bottom", bottom)
        if len(top) != len(bottom):
            raise ValueError("top and bottom rows differ in length")
        for i, j in zip(top, bottom):
            if not (1 <= i <= self.p and 1 <= j <= self.q):
                raise ValueError(f"pair ({i},{j}) outside bounds p={self.p}, q={self.q}")
        for k in range(len(top) - 1):
            if (top[k], bottom[k]) > (top[k + 1], bottom[k + 1]):
                raise ValueError(f"pairs not lexicographically sorted at position {k + 1}")

    def __len__(self) -> int:
        return len(self.top)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.top, self.bottom))

    @classmethod
    def from_pairs(cls, pairs, p: int, q: int) -> "BiWord":
        pairs = list(pairs)
        return cls(tuple(i for i, _ in pairs), tuple(j for _, j in pairs), p, q)

    @classmethod
    def from_permutation(cls, perm: Sequence[int]) -> "BiWord":
        n = len(perm)
        if sorted(perm) != list(range(1, n + 1)):
            raise ValueError("not a permutation of 1..n")
        return cls(tuple(range(1, n + 1)), tuple(perm), n, n)

    @classmethod
    def from_word(cls, word: Sequence[int], q: int) -> "BiWord":
        n = len(word)
        return cls(tuple(range(1, n + 1)), tuple(word), max(n, 1), q)

    def to_json(self) -> list[list[int]]:
        return [list(self.top), list(self.bottom)]


@dataclass(frozen=True)
class TableauPair:
    """Insertion tableau P and recording tableau Q of a common shape."""

    P: tuple[tuple[int, ...], ...]
    Q: tuple[tuple[int, ...], ...]
    standard_q: bool = False

    def __post_init__(self):
        P = tuple(tuple(int(v) for v in row) for row in self.P)
        Q = tuple(tuple(int(v) for v in row) for row in self.Q)
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)
        if [len(r) for r in P] != [len(r) for r in Q]:
            raise ValueError("P and Q have different shapes")
        Partition([len(r) for r in P])
        if any(len(r) == 0 for r in P):
            raise ValueError("empty rows are not allowed")
        _check_semistandard(P, "P")
        _check_semistandard(Q, "Q")

    @property
    def shape(self) -> Partition:
        return Partition([len(r) for r in self.P])

    def to_json(self) -> dict:
        return {"P": [list(r) for r in self.P], "Q": [list(r) for r in self.Q]}


def _check_semistandard(T, name):
    for r, row in enumerate(T):
        for a, b in zip(row, row[1:]):
            if a > b:
                raise ValueError(f"{name}: row {r + 1} not weakly increasing")
        if r > 0:
            for c, v in enumerate(row):
                if T[r - 1][c] >= v:
                    raise ValueError(f"{name}: column {c + 1} not strictly increasing")


@dataclass(frozen=True)
class CountMatrix:
    """p x q nonnegative integer matrix; entry (i,j) counts columns (i;j)."""

    entries: np.ndarray

    def __post_init__(self):
        W = np.array(self.entries, dtype=np.int64)
        if W.ndim != 2:
            raise ValueError("count matrix must be 2-D")
        if (W < 0).any():
            raise ValueError("entries must be nonnegative")
        W.setflags(write=False)
        object.__setattr__(self, "entries", W)

    @property
    def p(self) -> int:
        return self.entries.shape[0]

    @property
    def q(self) -> int:
        return self.entries.shape[1]

    @property
    def total(self) -> int:
        return int(self.entries.sum())

    def to_json(self) -> list[list[int]]:
        return self.entries.tolist()


def rsk(pi: BiWord) -> TableauPair:
    """Row-insert the bottom row, recording the top row."""
    if not isinstance(pi, BiWord):
        raise TypeError("rsk expects a BiWord")
    if len(pi) == 0:
        return TableauPair((), (), True)
    P, Q = _backend.rsk_insert(
        np.asarray(pi.bottom, dtype=np.int64), np.asarray(pi.top, dtype=np.int64)
    )
    distinct = len(set(pi.top)) == len(pi.top)
    return TableauPair(tuple(map(tuple, P)), tuple(map(tuple, Q)), distinct)


def rsk_shape(word: Sequence[int]) -> Partition:
    """Shape of the insertion tableau of ``word`` (no recording)."""
    w = np.ascontiguousarray(word, dtype=np.int64)
    return Partition(_backend.rsk_insert(w, w, True))


def rsk_word(word: Sequence[int], q: int | None = None) -> TableauPair:
    """RSK of a word with a standard recording tableau (positions 1..n)."""
    q = max(word) if (q is None and len(word)) else (q or 1)
    return rsk(BiWord.from_word(word, q))


def rsk_inverse(t: TableauPair, p: int | None = None, q: int | None = None) -> BiWord:
    """Reverse bumping: recover the biword from (P, Q)."""
    if not isinstance(t, TableauPair):
        raise TypeError("rsk_inverse expects a TableauPair")
    P = [list(r) for r in t.P]
    Q = [list(r) for r in t.Q]
    pairs = []
    while P:
        # largest Q entry; among ties the rightmost was inserted last
        best = max(Q[r][-1] for r in range(len(Q)))
        r = max(
            (r for r in range(len(Q)) if Q[r][-1] == best),
            key=lambda r: len(Q[r]),
        )
        i = Q[r].pop()
        x = P[r].pop()
        if not P[r]:
            P.pop()
            Q.pop()
        for rr in range(r - 1, -1, -1):
            row = P[rr]
            pos = bisect_left(row, x) - 1  # rightmost entry strictly less than x
            row[pos], x = x, row[pos]
        pairs.append((i, x))
    pairs.reverse()
    if p is None:
        p = max((i for i, _ in pairs), default=1)
    if q is None:
        q = max((j for _, j in pairs), default=1)
    return BiWord.from_pairs(pairs, p, q)


def biword_to_matrix(pi: BiWord, p: int | None = None, q: int | None = None) -> CountMatrix:
    p = pi.p if p is None else p
    q = pi.q if q is None else q
    W = np.zeros((p, q), dtype=np.int64)
    for i, j in pi.pairs:
        if i > p or j > q:
            raise ValueError("biword exceeds the requested bounds")
        W[i - 1, j - 1] += 1
    return CountMatrix(W)


def matrix_to_biword(W) -> BiWord:
    W = W.entries if isinstance(W, CountMatrix) else CountMatrix(W).entries
    p, q = W.shape
    pairs = [(i + 1, j + 1) for i in range(p) for j in range(q) for _ in range(int(W[i, j]))]
    return BiWord.from_pairs(pairs, max(p, 1), max(q, 1))


@dataclass(frozen=True)
class LisResult:
    """Patience-sorting outcome: pile count and the piles (bottom card first)."""

    length: int
    piles: tuple[tuple[int, ...], ...]


def longest_increasing(word: Sequence[int], strict: bool = True) -> LisResult:
    """Patience sorting with the leftmost-pile rule.

    Each card goes on the leftmost pile whose top is >= the card (``strict``)
    or > the card (weak), else starts a new pile on the right. The pile count
    is the length of the longest strictly (weakly) increasing subsequence.
    """
    seq = np.ascontiguousarray(word, dtype=np.int64)
    npiles, assign = _backend.patience(seq, bool(strict))
    piles: list[list[int]] = [[] for _ in range(npiles)]
    for card, k in zip(seq.tolist(), assign.tolist()):
        piles[k].append(card)
    return LisResult(int(npiles), tuple(tuple(pl) for pl in piles))


def lis_length(word: Sequence[int], strict: bool = True) -> int:
    seq = np.ascontiguousarray(word, dtype=np.int64)
    return int(_backend.patience(seq, bool(strict))[0])


def lis_lengths(rows, strict: bool = True) -> np.ndarray:
    """Pile counts for every row of a 2-D integer array."""
    return _backend.patience_count_rows(np.ascontiguousarray(rows, dtype=np.int64), bool(strict))


def optimal_path_weight(W):
    """Maximal entry sum over monotone paths from (1,1) to (p,q)."""
    if isinstance(W, CountMatrix):
        return int(_backend.lpp(np.ascontiguousarray(W.entries, dtype=np.float64)))
    A = np.asarray(W)
    if A.ndim != 2 or A.size == 0:
        raise ValueError("need a nonempty 2-D matrix")
    val = _backend.lpp(np.ascontiguousarray(A, dtype=np.float64))
    if np.issubdtype(A.dtype, np.integer):
        return int(round(val))
    return float(val)


def optimal_path_weights(stack) -> np.ndarray:
    """Vectorised last-passage values for an array of shape (m, p, q)."""
    return _backend.lpp_batch(np.ascontiguousarray(stack, dtype=np.float64))
