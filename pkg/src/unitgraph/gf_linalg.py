"""Dense linear algebra over prime fields F_q."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DomainError
from .ring_core import is_prime


@lru_cache(maxsize=None)
def inverse_table(q: int) -> tuple[int, ...]:
    """Multiplicative inverses in F_q; entry 0 is unused and set to 0."""
    if not is_prime(q):
        raise DomainError(f"{q} is not prime")
    return (0,) + tuple(pow(a, -1, q) for a in range(1, q))


@dataclass(frozen=True, eq=False)
class GfMatrix:
    """A dense matrix over F_q stored as a read-only uint8 array."""

    q: int
    data: np.ndarray

    def __init__(self, q: int, data):
        if not is_prime(q) or q > 255:
            raise DomainError(f"q = {q} must be a prime below 256")
        arr = np.array(data, dtype=np.int64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise DomainError(f"expected a 2-d array, got shape {arr.shape}")
        arr = np.ascontiguousarray(arr % q, dtype=np.uint8)
        arr.flags.writeable = False
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "data", arr)

    @classmethod
    def zeros(cls, q: int, rows: int, cols: int) -> GfMatrix:
        return cls(q, np.zeros((rows, cols), dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def transpose(self) -> GfMatrix:
        return GfMatrix(self.q, self.data.T)

    def __matmul__(self, other: GfMatrix) -> GfMatrix:
        if self.q != other.q:
            raise DomainError("field mismatch")
        if self.cols != other.rows:
            raise DomainError(f"cannot multiply {self.shape} by {other.shape}")
        return GfMatrix(self.q, matmul_mod(self.data, other.data, self.q))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GfMatrix)
            and self.q == other.q
            and self.shape == other.shape
            and bool(np.array_equal(self.data, other.data))
        )

    def __repr__(self) -> str:
        return f"GfMatrix(q={self.q}, shape={self.shape})"


def matmul_mod(a: np.ndarray, b: np.ndarray, q: int) -> np.ndarray:
    return (a.astype(np.int64) @ b.astype(np.int64)) % q


def rref(m: GfMatrix) -> tuple[GfMatrix, list[int]]:
    """Reduced row echelon form and its pivot columns.

    Zero rows are kept at the bottom so the shape is unchanged.
    """
    q = m.q
    inv = inverse_table(q)
    a = m.data.astype(np.int64)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        a[r] = a[r] * inv[int(a[r, c])] % q
        factors = a[:, c].copy()
        factors[r] = 0
        hit = np.flatnonzero(factors)
        if hit.size:
            a[hit] = (a[hit] - np.outer(factors[hit], a[r])) % q
        pivots.append(c)
        r += 1
    return GfMatrix(q, a), pivots


def rank(m: GfMatrix) -> int:
    return len(rref(m)[1])


def row_basis(m: GfMatrix) -> GfMatrix:
    """The nonzero rows of rref(m): a canonical basis of the row space."""
    red, pivots = rref(m)
    return GfMatrix(m.q, red.data[: len(pivots)].reshape(len(pivots), m.cols))


def null_space_basis(m: GfMatrix) -> GfMatrix:
    """Basis of {x : m x = 0}, one row per non-pivot column.

    Row i is zero on the other non-pivot columns, nonzero on the i-th, and
    whatever the pivot columns need; each row is then scaled so its leading
    entry is 1. The result depends only on the row space of ``m``.
    """
    q = m.q
    red, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    basis = np.zeros((len(free), m.cols), dtype=np.int64)
    if free:
        basis[np.arange(len(free)), free] = 1
        if pivots:
            block = red.data[: len(pivots)][:, free].astype(np.int64)
            basis[:, pivots] = (-block.T) % q
        lead = basis[np.arange(len(free)), (basis != 0).argmax(axis=1)]
        inv = np.array(inverse_table(q), dtype=np.int64)
        basis = basis * inv[lead][:, None] % q
    out = GfMatrix(q, basis.reshape(len(free), m.cols))
    assert len(pivots) + out.rows == m.cols
    return out


def row_space_contains(m: GfMatrix, v: Sequence[int]) -> bool:
    vec = np.asarray(v, dtype=np.int64)
    if vec.shape != (m.cols,):
        raise DomainError(f"vector of length {vec.size} vs {m.cols} columns")
    base = rank(m)
    stacked = GfMatrix(m.q, np.vstack([m.data.astype(np.int64).reshape(-1, m.cols), vec % m.q]))
    return rank(stacked) == base


def matrix_to_text(m: GfMatrix) -> str:
    lines = [f"{m.rows} {m.cols} {m.q}"]
    lines.extend(" ".join(str(int(x)) for x in row) for row in m.data)
    return "\n".join(lines) + "\n"


def matrix_from_text(text: str) -> GfMatrix:
    lines = text.strip("\n").split("\n")
    try:
        rows, cols, q = (int(t) for t in lines[0].split())
    except ValueError:
        raise DomainError(f"bad matrix header: {lines[0]!r}") from None
    body = [[int(t) for t in line.split()] for line in lines[1 : 1 + rows]]
    if len(body) != rows or any(len(r) != cols for r in body):
        raise DomainError(f"matrix body does not match header {rows}x{cols}")
    if any(not 0 <= x < q for r in body for x in r):
        raise DomainError(f"entries must lie in [0, {q})")
    return GfMatrix(q, np.array(body, dtype=np.int64).reshape(rows, cols))
