"""Exact linear algebra over the rationals and over prime fields.

Two arithmetic regimes share one elimination routine:

* ``QQ``: entries are :class:`fractions.Fraction` held in numpy object arrays.
* ``GF(p)``: entries are residues in ``[0, p)`` held in ``int64`` arrays.
  ``p`` must be an odd prime below ``2**31`` so products fit in a machine word.

Pivoting scans columns left to right and takes the first row with a nonzero
entry, so every result is deterministic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

DEFAULT_PRIME = 2147483647  # 2**31 - 1
SECOND_PRIME = 2147483629
PRIME_ENV_VAR = "STARPI_PRIME"


class RegimeError(ValueError):
    """Operands live in different arithmetic regimes."""


class AmbientMismatch(ValueError):
    """Subspaces live in coordinate spaces of different dimension."""


@lru_cache(maxsize=64)
def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class Field:
    """Base class for the two scalar regimes."""

    name = "field"

    def convert(self, data) -> np.ndarray:
        raise NotImplementedError

    def zeros(self, shape) -> np.ndarray:
        raise NotImplementedError

    def inverse(self, x):
        raise NotImplementedError

    def normalize(self, arr: np.ndarray) -> np.ndarray:
        return arr

    def __repr__(self) -> str:
        return self.name


class RationalField(Field):
    name = "QQ"

    def convert(self, data) -> np.ndarray:
        arr = np.array(data, dtype=object)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1) if arr.size else arr.reshape(0, 0)
        out = np.empty(arr.shape, dtype=object)
        for idx, v in np.ndenumerate(arr):
            if isinstance(v, float):
                raise TypeError("floating point entries are not allowed")
            out[idx] = Fraction(v)
        return out

    def zeros(self, shape) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def inverse(self, x):
        return Fraction(1) / x

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("QQ")


class PrimeField(Field):
    def __init__(self, p: int):
        p = int(p)
        if p <= 2 or not _is_prime(p):
            raise ValueError(f"modulus must be an odd prime, got {p}")
        if p >= 2**31:
            raise ValueError(f"prime {p} too large for int64 elimination")
        self.p = p
        self.name = f"GF({p})"

    def convert(self, data) -> np.ndarray:
        arr = np.asarray(data)
        if arr.dtype.kind == "f":
            raise TypeError("floating point entries are not allowed")
        if arr.dtype == object:
            arr = np.array([[int(x) % self.p for x in row] for row in np.atleast_2d(arr)],
                           dtype=np.int64).reshape(np.atleast_2d(arr).shape)
        else:
            arr = np.mod(arr.astype(np.int64), self.p)
        if arr.ndim == 1:
            arr = arr.reshape(1, -1)
        return arr

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def inverse(self, x):
        return pow(int(x), -1, self.p)

    def normalize(self, arr: np.ndarray) -> np.ndarray:
        return np.mod(arr, self.p)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("GF", self.p))


QQ = RationalField()


def GF(p: int | None = None) -> PrimeField:
    """Prime field; ``None`` picks the default (env ``STARPI_PRIME`` or 2**31-1)."""
    if p is None:
        p = int(os.environ.get(PRIME_ENV_VAR, DEFAULT_PRIME))
    return PrimeField(p)


def default_primes() -> tuple[int, int]:
    """The two primes used for cross-checked ranks; the first honours ``STARPI_PRIME``."""
    first = GF().p
    return (first, SECOND_PRIME if first != SECOND_PRIME else DEFAULT_PRIME)


@dataclass(frozen=True, eq=False)
class Matrix:
    field: Field
    data: np.ndarray

    @classmethod
    def from_rows(cls, rows, field: Field, ncols: int | None = None) -> "Matrix":
        rows = list(rows) if not isinstance(rows, np.ndarray) else rows
        if len(rows) == 0:
            return cls(field, field.zeros((0, ncols or 0)))
        data = field.convert(rows)
        if ncols is not None and data.shape[1] != ncols:
            raise ValueError("row length does not match ncols")
        return cls(field, data)

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def __repr__(self) -> str:
        return f"Matrix({self.field}, shape={self.shape})"


def _rref(data: np.ndarray, field: Field) -> tuple[np.ndarray, tuple[int, ...]]:
    a = data.copy()
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        col = a[r:, c]
        nz = np.flatnonzero(col != 0)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = field.inverse(a[r, c])
        a[r] = field.normalize(a[r] * inv)
        others = np.flatnonzero(a[:, c] != 0)
        others = others[others != r]
        if others.size:
            a[others] = field.normalize(a[others] - np.outer(a[others, c], a[r]))
        pivots.append(c)
        r += 1
    return a[:r], tuple(pivots)


def rref(m: Matrix) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    return _rref(m.data, m.field)


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


@dataclass(frozen=True, eq=False)
class Subspace:
    field: Field
    ambient_dim: int
    basis: np.ndarray
    pivots: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def as_matrix(self) -> Matrix:
        return Matrix(self.field, self.basis)

    def contains_vector(self, v) -> bool:
        vec = self.field.convert([list(v)])[0]
        if vec.shape[0] != self.ambient_dim:
            raise AmbientMismatch("vector length differs from ambient dimension")
        return reduce_vector(self, vec) is None

    def __repr__(self) -> str:
        return f"Subspace({self.field}, dim={self.dim}, ambient={self.ambient_dim})"


def zero_subspace(ambient_dim: int, field: Field) -> Subspace:
    return Subspace(field, ambient_dim, field.zeros((0, ambient_dim)), ())


def full_subspace(ambient_dim: int, field: Field) -> Subspace:
    eye = [[1 if i == j else 0 for j in range(ambient_dim)] for i in range(ambient_dim)]
    return row_space(Matrix.from_rows(eye, field, ambient_dim))


def row_space(m: Matrix) -> Subspace:
    basis, pivots = rref(m)
    return Subspace(m.field, m.shape[1], basis, pivots)


def reduce_vector(s: Subspace, vec: np.ndarray):
    """Remainder of ``vec`` modulo ``s``, or ``None`` if it lies in ``s``."""
    v = vec.copy()
    for row, c in zip(s.basis, s.pivots):
        if v[c] != 0:
            v = s.field.normalize(v - v[c] * row)
    return None if not np.any(v != 0) else v


def _check_pair(a: Subspace, b: Subspace) -> None:
    if a.field != b.field:
        raise RegimeError(f"{a.field} vs {b.field}")
    if a.ambient_dim != b.ambient_dim:
        raise AmbientMismatch(f"{a.ambient_dim} vs {b.ambient_dim}")


def nullspace(m: Matrix) -> Subspace:
    """Right kernel ``{x : m x = 0}`` as a subspace of the column space."""
    basis, pivots = rref(m)
    ncols = m.shape[1]
    free = [c for c in range(ncols) if c not in set(pivots)]
    f = m.field
    vecs = f.zeros((len(free), ncols))
    piv = list(pivots)
    for k, c in enumerate(free):
        vecs[k, c] = 1
        if piv:
            vecs[k, piv] = f.normalize(-basis[:, c])
    return row_space(Matrix(f, vecs))


def left_kernel(m: Matrix) -> Subspace:
    """``{c : c m = 0}`` as a subspace of the row-index space."""
    return nullspace(Matrix(m.field, m.data.T.copy()))


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _check_pair(a, b)
    return row_space(Matrix(a.field, np.vstack([a.basis, b.basis])))


def subspace_intersect(a: Subspace, b: Subspace) -> Subspace:
    _check_pair(a, b)
    if a.dim == 0 or b.dim == 0:
        return zero_subspace(a.ambient_dim, a.field)
    stacked = Matrix(a.field, np.vstack([a.basis, b.basis]))
    ker = left_kernel(stacked)
    if ker.dim == 0:
        return zero_subspace(a.ambient_dim, a.field)
    # rows (lam, mu) with lam*A + mu*B = 0, so lam*A spans the intersection
    lam = ker.basis[:, : a.dim]
    prod = _matmul(lam, a.basis, a.field)
    return row_space(Matrix(a.field, prod))


def subspace_contains(a: Subspace, b: Subspace) -> bool:
    """True iff ``b`` is a subspace of ``a``."""
    _check_pair(a, b)
    return all(reduce_vector(a, row) is None for row in b.basis)


def subspace_equal(a: Subspace, b: Subspace) -> bool:
    _check_pair(a, b)
    return a.dim == b.dim and a.pivots == b.pivots and bool(np.all(a.basis == b.basis))


def _matmul(x: np.ndarray, y: np.ndarray, field: Field) -> np.ndarray:
    if isinstance(field, PrimeField):
        # keep every partial sum below 2**63
        out = np.zeros((x.shape[0], y.shape[1]), dtype=np.int64)
        for k in range(x.shape[1]):
            out = np.mod(out + np.outer(x[:, k], y[k]), field.p)
        return out
    return field.normalize(x.dot(y))


class RowAccumulator:
    """Streams rows into a growing reduced row space.

    Memory is bounded by ``rank x ambient``; rows are buffered and folded in
    batches, so the final subspace does not depend on the batch size.
    """

    def __init__(self, ambient_dim: int, field: Field, batch: int = 2048):
        self.field = field
        self.ambient_dim = ambient_dim
        self.batch = batch
        self._basis = field.zeros((0, ambient_dim))
        self._pivots: tuple[int, ...] = ()
        self._pending: list = []

    def add(self, row: Sequence[int]) -> None:
        self._pending.append(row)
        if len(self._pending) >= self.batch:
            self._flush()

    def extend(self, rows: Iterable[Sequence[int]]) -> None:
        for row in rows:
            self.add(row)

    def _flush(self) -> None:
        if not self._pending:
            return
        new = self.field.convert(self._pending)
        self._pending = []
        stacked = np.vstack([self._basis, new])
        self._basis, self._pivots = _rref(stacked, self.field)

    @property
    def rank(self) -> int:
        self._flush()
        return len(self._pivots)

    def subspace(self) -> Subspace:
        self._flush()
        return Subspace(self.field, self.ambient_dim, self._basis, self._pivots)


def rank_two_primes(m_int, primes: Sequence[int] = (DEFAULT_PRIME, SECOND_PRIME)) -> tuple[list[int], bool]:
    """Rank of an integer matrix under several primes, plus an agreement flag."""
    ranks = [rank(Matrix.from_rows(m_int, GF(p), np.asarray(m_int).shape[1])) for p in primes]
    return ranks, len(set(ranks)) == 1
