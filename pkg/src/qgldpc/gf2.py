"""Exact linear algebra over GF(2) and the binary symplectic product.

Vectors and matrices cross the module boundary as numpy arrays with
entries in {0, 1}.  Internally, rows are packed into Python integers
(bit i of a row word is column i) so that elimination and syndrome
kernels reduce to XOR and popcount.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class Pauli(Enum):
    I = "I"
    X = "X"
    Y = "Y"
    Z = "Z"


def symplectic_product(a: Pauli, b: Pauli) -> int:
    """0 if the two single-qubit Paulis commute, 1 otherwise."""
    if a == Pauli.I or b == Pauli.I or a == b:
        return 0
    return 1


def _as_bits(v, length: int | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=np.uint8) % 2
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D bit vector, got shape {v.shape}")
    if length is not None and v.shape[0] != length:
        raise ValueError(f"bit vector has length {v.shape[0]}, expected {length}")
    return v


def _as_bitmatrix(H) -> np.ndarray:
    H = np.asarray(H, dtype=np.uint8) % 2
    if H.ndim != 2:
        raise ValueError(f"expected a 2-D bit matrix, got shape {H.shape}")
    return H


def pack_rows(H) -> list[int]:
    """Pack each row of a 0/1 matrix into an int (bit i = column i)."""
    H = _as_bitmatrix(H)
    words = []
    for row in H:
        w = 0
        for i in np.flatnonzero(row):
            w |= 1 << int(i)
        words.append(w)
    return words


def pack_vector(v) -> int:
    v = _as_bits(v)
    w = 0
    for i in np.flatnonzero(v):
        w |= 1 << int(i)
    return w


def unpack(word: int, n: int) -> np.ndarray:
    out = np.zeros(n, dtype=np.uint8)
    for i in range(n):
        out[i] = (word >> i) & 1
    return out


def mat_vec_mul(H, v) -> np.ndarray:
    """Syndrome-style product s = H v over GF(2)."""
    H = _as_bitmatrix(H)
    v = _as_bits(v, H.shape[1])
    return (H @ v.astype(np.int64)) % 2


@dataclass(frozen=True)
class Elimination:
    """Gauss-Jordan reduction of a matrix under an explicit column visiting order.

    ``transform`` records the row operations: transform[r] applied to the
    original rows yields reduced[r], so the same words map a syndrome s to
    the reduced system's right-hand side.
    """

    n_cols: int
    n_rows: int
    reduced: list[int]        # packed rows, pivot rows first
    transform: list[int]      # packed row-combination words (bit r = original row r)
    pivots: list[int]         # pivot column indices, in visiting order
    rank: int

    def reduced_matrix(self) -> np.ndarray:
        return np.array([unpack(w, self.n_cols) for w in self.reduced],
                        dtype=np.uint8).reshape(self.n_rows, self.n_cols)


def row_reduce(H, column_order=None) -> Elimination:
    """Gauss-Jordan elimination visiting columns in ``column_order``.

    Returns the reduced matrix, the pivot columns (the first ``rank``
    independent columns in visiting order) and the GF(2) rank.
    """
    H = _as_bitmatrix(H)
    m, n = H.shape
    if column_order is None:
        column_order = range(n)
    order = [int(c) for c in column_order]
    if sorted(order) != list(range(n)):
        raise ValueError("column_order must be a permutation of range(n_cols)")

    rows = pack_rows(H)
    trans = [1 << r for r in range(m)]
    pivots: list[int] = []
    pivot_row = 0
    for col in order:
        bit = 1 << col
        found = -1
        for r in range(pivot_row, m):
            if rows[r] & bit:
                found = r
                break
        if found < 0:
            continue
        rows[pivot_row], rows[found] = rows[found], rows[pivot_row]
        trans[pivot_row], trans[found] = trans[found], trans[pivot_row]
        for r in range(m):
            if r != pivot_row and rows[r] & bit:
                rows[r] ^= rows[pivot_row]
                trans[r] ^= trans[pivot_row]
        pivots.append(col)
        pivot_row += 1
        if pivot_row == m:
            break
    return Elimination(n_cols=n, n_rows=m, reduced=rows, transform=trans,
                       pivots=pivots, rank=len(pivots))


def rank(H) -> int:
    return row_reduce(H).rank


def solve_coset(elim: Elimination, s, non_pivot_fill=None) -> np.ndarray | None:
    """Solve H v = s with non-pivot positions fixed to ``non_pivot_fill``.

    Returns None when the system is inconsistent (s outside the column
    space of H, given the fixed non-pivot values).
    """
    s = _as_bits(s, elim.n_rows)
    s_word = pack_vector(s)

    if non_pivot_fill is None:
        fill_word = 0
    else:
        fill = _as_bits(non_pivot_fill, elim.n_cols)
        fill_word = pack_vector(fill)
        for c in elim.pivots:
            fill_word &= ~(1 << c)

    v_word = fill_word
    for r in range(elim.rank):
        # rhs for reduced row r, folding in the fixed non-pivot values
        rhs = bin(elim.transform[r] & s_word).count("1") & 1
        rhs ^= bin(elim.reduced[r] & fill_word).count("1") & 1
        if rhs:
            v_word |= 1 << elim.pivots[r]
    # consistency: zero rows of the reduced system must have zero rhs
    for r in range(elim.rank, elim.n_rows):
        if bin(elim.transform[r] & s_word).count("1") & 1:
            return None
    return unpack(v_word, elim.n_cols)


class RowSpace:
    """Reduced row basis supporting fast membership tests."""

    def __init__(self, H):
        H = _as_bitmatrix(H)
        self.n_cols = H.shape[1]
        self._basis: list[tuple[int, int]] = []  # (leading column bit, word)
        for w in pack_rows(H):
            self.add(w)

    def _reduce_word(self, w: int) -> int:
        for bit, bw in self._basis:
            if w & bit:
                w ^= bw
        return w

    def add(self, w: int) -> bool:
        """Add a packed row; returns True if it enlarged the span."""
        w = self._reduce_word(w)
        if w == 0:
            return False
        self._basis.append((w & -w, w))
        return True

    @property
    def rank(self) -> int:
        return len(self._basis)

    def contains(self, r) -> bool:
        r = _as_bits(r, self.n_cols)
        return self._reduce_word(pack_vector(r)) == 0


def in_row_space(H, r) -> bool:
    """True iff r lies in the row space of H over GF(2)."""
    return RowSpace(H).contains(r)


def null_space(H) -> list[np.ndarray]:
    """Basis of the right kernel of H over GF(2)."""
    H = _as_bitmatrix(H)
    m, n = H.shape
    elim = row_reduce(H)
    pivot_set = set(elim.pivots)
    basis = []
    for free in range(n):
        if free in pivot_set:
            continue
        v = np.zeros(n, dtype=np.uint8)
        v[free] = 1
        for r in range(elim.rank):
            if (elim.reduced[r] >> free) & 1:
                v[elim.pivots[r]] = 1
        basis.append(v)
    return basis
