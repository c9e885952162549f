"""Exact dense linear algebra over a prime field F_p.

Everything is built on numpy int64 arrays whose entries are kept reduced
into ``[0, p)``.  The array-level helpers (``row_reduce``, ``nullspace``,
``solve_mod``, ``inverse_mod``, ...) are what the rest of the package uses
internally; :class:`FpMatrix` is the immutable value type exposed to callers
and the functions ``rref``, ``kernel_basis``, ``solve`` and ``invert`` work on
it.

Vectors are columns and matrices act on the left.  Kernel and image bases are
returned as *rows* of a matrix.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import numpy as np

MAX_PRIME = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class PrimeField:
    p: int

    def __post_init__(self):
        if not (2 <= self.p < MAX_PRIME) or not is_prime(self.p):
            raise ValueError(f"{self.p} is not a prime in [2, 2^16)")

    def inv(self, a: int) -> int:
        return pow(int(a) % self.p, -1, self.p)

    def __str__(self):
        return f"F_{self.p}"


# ---------------------------------------------------------------------------
# array-level routines


def as_mod(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    inner = a.shape[-1] if a.ndim else 1
    if inner * (p - 1) ** 2 < _FLOAT_EXACT:
        # float64 BLAS is exact while every partial sum stays below 2^53
        out = np.asarray(a, dtype=np.float64) @ np.asarray(b, dtype=np.float64)
        return out.astype(np.int64) % p
    return (np.asarray(a, dtype=np.int64) @ np.asarray(b, dtype=np.int64)) % p


_FLOAT_EXACT = 1 << 53
_PANEL = 32


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def _panel_pivots(panel: np.ndarray, p: int) -> tuple[list[int], list[int]]:
    """Pivot rows/columns of a sequential lowest-index elimination of ``panel``."""
    m = panel.copy()
    nrows, ncols = m.shape
    order = np.arange(nrows)
    rows: list[int] = []
    cols: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
            order[[r, i]] = order[[i, r]]
        m[r, c:] = (m[r, c:] * pow(int(m[r, c]), -1, p)) % p
        below = np.flatnonzero(m[r + 1:, c]) + r + 1
        if below.size:
            m[below, c:] = (m[below, c:] - np.outer(m[below, c], m[r, c:])) % p
        rows.append(int(order[r]))
        cols.append(c)
        r += 1
    return rows, cols


def row_reduce(a, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row-echelon form of ``a`` and its pivot columns.

    Pivots are searched column by column taking the lowest-index available
    row.  Columns are processed in panels: pivots inside a panel are found by
    plain elimination on the panel alone, then the whole matrix is updated
    with one matrix product.  The RREF is unique, so the result does not
    depend on the panel width.  Zero rows stay at the bottom.
    """
    m = as_mod(a, p).copy()
    if m.ndim != 2:
        raise ValueError("expected a 2-d array")
    nrows, ncols = m.shape
    pivots: list[int] = []
    r = 0
    for c0 in range(0, ncols, _PANEL):
        if r == nrows:
            break
        c1 = min(c0 + _PANEL, ncols)
        prow, pcol = _panel_pivots(m[r:, c0:c1], p)
        if not prow:
            continue
        prow = [r + i for i in prow]
        q = [c0 + j for j in pcol]
        binv = inverse_mod(m[np.ix_(prow, q)], p)
        # rows at index >= r vanish left of c0, so only the trailing block moves
        new_rows = matmul_mod(binv, m[prow, c0:], p)
        m[:, c0:] = (m[:, c0:] - matmul_mod(m[:, q], new_rows, p)) % p
        new_rows = np.hstack([np.zeros((len(q), c0), dtype=np.int64), new_rows])
        chosen = set(prow)
        rest = [i for i in range(r, nrows) if i not in chosen]
        m = np.vstack([m[:r], new_rows, m[rest]])
        pivots.extend(q)
        r += len(q)
    return m, pivots


def _row_reduce_plain(a, p: int) -> tuple[np.ndarray, list[int]]:
    # unblocked reference elimination; used for small inverses and as a test oracle
    m = as_mod(a, p).copy()
    nrows, ncols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r, c:] = (m[r, c:] * pow(int(m[r, c]), -1, p)) % p
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit, c:] = (m[hit, c:] - np.outer(col[hit], m[r, c:])) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank_mod(a, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(row_reduce(a, p)[1])


def row_basis(a, p: int) -> np.ndarray:
    """Rows of the reduced echelon form spanning the row space of ``a``."""
    a = np.asarray(a, dtype=np.int64)
    if a.ndim != 2 or a.shape[0] == 0:
        return np.zeros((0, a.shape[-1] if a.ndim == 2 else 0), dtype=np.int64)
    red, piv = row_reduce(a, p)
    return red[: len(piv)]


def nullspace(a, p: int) -> np.ndarray:
    """Basis (as rows) of ``{v : a @ v = 0}``."""
    a = np.asarray(a, dtype=np.int64)
    ncols = a.shape[1]
    if a.shape[0] == 0:
        return identity(ncols)
    red, piv = row_reduce(a, p)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = np.zeros((len(free), ncols), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, pc in enumerate(piv):
            basis[k, pc] = (-red[i, f]) % p
    return basis


def solve_mod(a, b, p: int) -> Optional[np.ndarray]:
    """Some ``x`` with ``a @ x = b``, or ``None`` if the system is inconsistent."""
    a = np.asarray(a, dtype=np.int64)
    b = as_mod(b, p).reshape(-1)
    nrows, ncols = a.shape
    if b.shape[0] != nrows:
        raise ValueError("right-hand side has the wrong length")
    red, piv = row_reduce(np.hstack([a, b[:, None]]), p)
    if piv and piv[-1] == ncols:
        return None
    x = np.zeros(ncols, dtype=np.int64)
    for i, c in enumerate(piv):
        x[c] = red[i, ncols]
    return x


def inverse_mod(a, p: int) -> Optional[np.ndarray]:
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    reducer = _row_reduce_plain if n <= _PANEL else row_reduce
    red, piv = reducer(np.hstack([a, identity(n)]), p)
    if len(piv) < n or piv[n - 1] != n - 1:
        return None
    return red[:, n:].copy()


def coordinates(basis_rref: np.ndarray, pivots: Sequence[int], vecs: np.ndarray) -> np.ndarray:
    """Coordinates of row vectors ``vecs`` in a basis already in RREF.

    With the basis in reduced echelon form the coordinates of a vector in its
    span are simply its entries at the pivot columns.  No membership check.
    """
    return np.asarray(vecs, dtype=np.int64)[..., list(pivots)]


def in_row_space(basis, vecs, p: int) -> bool:
    basis = np.asarray(basis, dtype=np.int64)
    vecs = np.atleast_2d(np.asarray(vecs, dtype=np.int64))
    if vecs.shape[0] == 0:
        return True
    if basis.shape[0] == 0:
        return not np.any(vecs % p)
    return rank_mod(np.vstack([basis, vecs]), p) == rank_mod(basis, p)


def intersect_row_spaces(a, b, p: int) -> np.ndarray:
    """Basis of the intersection of the row spaces of ``a`` and ``b``."""
    a = row_basis(a, p)
    b = row_basis(b, p)
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.zeros((0, a.shape[1]), dtype=np.int64)
    # x a = y b  <=>  [x, -y] in the left kernel of [a; b]
    rel = nullspace(np.vstack([a, b]).T, p)
    return row_basis(matmul_mod(rel[:, : a.shape[0]], a, p), p)


def complement_basis(sub_rref: np.ndarray, pivots: Sequence[int], n: int) -> np.ndarray:
    """Standard basis vectors at the non-pivot columns: a complement of the span."""
    free = [c for c in range(n) if c not in set(pivots)]
    comp = np.zeros((len(free), n), dtype=np.int64)
    comp[np.arange(len(free)), free] = 1
    return comp


# ---------------------------------------------------------------------------
# value type


@dataclass(frozen=True, eq=False)
class FpMatrix:
    """Immutable dense matrix over ``field`` (row-major)."""

    field: PrimeField
    data: np.ndarray = dc_field(repr=False)

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.int64, copy=True)
        if arr.ndim != 2:
            raise ValueError("FpMatrix needs a 2-d array")
        arr %= self.field.p
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @classmethod
    def from_rows(cls, p: int, rows) -> "FpMatrix":
        return cls(PrimeField(p), np.asarray(rows, dtype=np.int64).reshape(len(rows), -1))

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMatrix":
        return cls(PrimeField(p), identity(n))

    @classmethod
    def zeros(cls, p: int, rows: int, cols: int) -> "FpMatrix":
        return cls(PrimeField(p), np.zeros((rows, cols), dtype=np.int64))

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def entries(self) -> list[int]:
        return [int(x) for x in self.data.reshape(-1)]

    def _check(self, other: "FpMatrix"):
        if not isinstance(other, FpMatrix):
            return NotImplemented
        if other.field != self.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other):
        if isinstance(other, FpMatrix):
            self._check(other)
            return FpMatrix(self.field, matmul_mod(self.data, other.data, self.p))
        return matmul_mod(self.data, as_mod(other, self.p), self.p)

    def __add__(self, other):
        self._check(other)
        return FpMatrix(self.field, self.data + other.data)

    def __sub__(self, other):
        self._check(other)
        return FpMatrix(self.field, self.data - other.data)

    def __neg__(self):
        return FpMatrix(self.field, -self.data)

    def scale(self, c: int) -> "FpMatrix":
        return FpMatrix(self.field, self.data * int(c))

    @property
    def T(self) -> "FpMatrix":
        return FpMatrix(self.field, self.data.T)

    def __eq__(self, other):
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return self.field == other.field and np.array_equal(self.data, other.data)

    def __hash__(self):
        return hash((self.p, self.data.shape, self.data.tobytes()))

    def rank(self) -> int:
        return rank_mod(self.data, self.p)

    def __repr__(self):
        return f"FpMatrix(p={self.p}, {self.rows}x{self.cols}, {self.data.tolist()})"


def rref(m: FpMatrix) -> tuple[FpMatrix, list[int], int]:
    red, piv = row_reduce(m.data, m.p) if m.rows else (m.data, [])
    return FpMatrix(m.field, red), piv, len(piv)


def kernel_basis(m: FpMatrix) -> FpMatrix:
    return FpMatrix(m.field, nullspace(m.data, m.p).reshape(-1, m.cols))


def solve(m: FpMatrix, b) -> Optional[np.ndarray]:
    return solve_mod(m.data, b, m.p)


def invert(m: FpMatrix) -> Optional[FpMatrix]:
    inv = inverse_mod(m.data, m.p)
    return None if inv is None else FpMatrix(m.field, inv)
