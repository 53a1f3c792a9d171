"""Matrix-free linear operators, a small CSR container, and Matrix Market I/O.

Solvers only ever see a :class:`LinearOperator` (a forward/adjoint callback
pair), so they run unchanged on assembled matrices, scaled systems, and the
augmented symmetric form used by the MINRES baseline.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

__all__ = [
    "SparseMatrix",
    "LinearOperator",
    "from_sparse",
    "jacobi_scaled",
    "augmented_operator",
    "adjoint_probe",
    "read_matrix_market",
    "write_matrix_market",
    "MatrixMarketError",
]


class MatrixMarketError(ValueError):
    """Raised for malformed Matrix Market input; messages name the line."""


@dataclass
class SparseMatrix:
    """Compressed sparse rows with an explicit dtype.

    indptr has length n_rows + 1, is nondecreasing, and brackets the column
    indices of each row, which are strictly increasing within a row.
    """

    n_rows: int
    n_cols: int
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray

    def __post_init__(self):
        if len(self.indptr) != self.n_rows + 1:
            raise ValueError("indptr length must be n_rows + 1")
        if self.indptr[0] != 0 or self.indptr[-1] != len(self.data):
            raise ValueError("indptr must start at 0 and end at nnz")
        if np.any(np.diff(self.indptr) < 0):
            raise ValueError("indptr must be nondecreasing")
        if len(self.indices) != len(self.data):
            raise ValueError("indices and data must have equal length")
        if len(self.indices) and (
            self.indices.min() < 0 or self.indices.max() >= self.n_cols
        ):
            raise ValueError("column index out of range")

    @property
    def nnz(self) -> int:
        return len(self.data)

    @property
    def dtype(self):
        return self.data.dtype

    @property
    def shape(self):
        return (self.n_rows, self.n_cols)

    @classmethod
    def from_coo(cls, rows, cols, vals, shape, dtype=None):
        """Build CSR from triplets; duplicate entries are summed."""
        n_rows, n_cols = shape
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.asarray(vals, dtype=dtype)
        if rows.size and (rows.min() < 0 or rows.max() >= n_rows):
            raise ValueError("row index out of range")
        if cols.size and (cols.min() < 0 or cols.max() >= n_cols):
            raise ValueError("column index out of range")
        order = np.lexsort((cols, rows))
        rows, cols, vals = rows[order], cols[order], vals[order]
        if rows.size:
            keep = np.empty(rows.size, dtype=bool)
            keep[0] = True
            keep[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
            starts = np.flatnonzero(keep)
            vals = np.add.reduceat(vals, starts)
            rows, cols = rows[starts], cols[starts]
        counts = np.bincount(rows, minlength=n_rows)
        indptr = np.concatenate(([0], np.cumsum(counts)))
        return cls(n_rows, n_cols, indptr.astype(np.int64), cols, vals)

    def matvec(self, x):
        x = np.asarray(x)
        products = self.data * x[self.indices]
        return _row_sums(products, self.indptr, self.n_rows)

    def transpose(self) -> "SparseMatrix":
        """Return A^T in CSR form (counting sort over columns)."""
        order = np.argsort(self.indices, kind="stable")
        rows_of = np.repeat(np.arange(self.n_rows, dtype=np.int64),
                            np.diff(self.indptr))
        counts = np.bincount(self.indices, minlength=self.n_cols)
        indptr = np.concatenate(([0], np.cumsum(counts)))
        return SparseMatrix(self.n_cols, self.n_rows, indptr.astype(np.int64),
                            rows_of[order], self.data[order])

    def diagonal(self):
        d = np.zeros(min(self.shape), dtype=self.dtype)
        for i in range(len(d)):
            row = slice(self.indptr[i], self.indptr[i + 1])
            hit = np.searchsorted(self.indices[row], i)
            if hit < row.stop - row.start and self.indices[row][hit] == i:
                d[i] = self.data[row][hit]
        return d

    def to_dense(self):
        dense = np.zeros(self.shape, dtype=self.dtype)
        rows_of = np.repeat(np.arange(self.n_rows), np.diff(self.indptr))
        dense[rows_of, self.indices] = self.data
        return dense

    def astype(self, dtype) -> "SparseMatrix":
        return SparseMatrix(self.n_rows, self.n_cols, self.indptr,
                            self.indices, self.data.astype(dtype))


def _row_sums(products, indptr, n_rows):
    # reduceat misreads empty rows (it returns the element at the boundary
    # instead of zero), so those rows are patched afterwards
    out = np.zeros(n_rows, dtype=products.dtype)
    if len(products) == 0:
        return out
    starts = np.minimum(indptr[:-1], len(products) - 1)
    out[:] = np.add.reduceat(products, starts)
    out[np.diff(indptr) == 0] = 0
    return out


@dataclass
class LinearOperator:
    """Matrix-free operator defined by forward and adjoint callbacks."""

    n_rows: int
    n_cols: int
    forward: Callable[[np.ndarray], np.ndarray]
    adjoint: Callable[[np.ndarray], np.ndarray]
    dtype: np.dtype = field(default_factory=lambda: np.dtype(np.float64))

    def __post_init__(self):
        self.dtype = np.dtype(self.dtype)

    @property
    def T(self) -> "LinearOperator":
        return LinearOperator(self.n_cols, self.n_rows,
                              self.adjoint, self.forward, self.dtype)


def from_sparse(m: SparseMatrix) -> LinearOperator:
    """Wrap a SparseMatrix; the transpose is materialized once up front."""
    mt = m.transpose()
    return LinearOperator(m.n_rows, m.n_cols, m.matvec, mt.matvec, m.dtype)


def jacobi_scaled(op: LinearOperator, d) -> LinearOperator:
    """Left-scale the system by 1/d: forward v -> (A v) / d.

    The adjoint scales its input first, keeping the pair consistent with
    the scaled matrix D^{-1} A.  Raises ValueError on any zero entry.
    """
    d = np.asarray(d, dtype=op.dtype)
    if d.shape != (op.n_rows,):
        raise ValueError("scaling vector length must match operator rows")
    if np.any(d == 0):
        raise ValueError("jacobi scaling requires a nowhere-zero diagonal")
    return LinearOperator(
        op.n_rows, op.n_cols,
        lambda v, _f=op.forward, _d=d: _f(v) / _d,
        lambda u, _a=op.adjoint, _d=d: _a(u / _d),
        op.dtype,
    )


def augmented_operator(op: LinearOperator) -> LinearOperator:
    """Symmetric augmented form [[0, A], [A^T, 0]] acting on stacked (t, x)."""
    if op.n_rows != op.n_cols:
        raise ValueError("augmented form expects a square operator")
    n = op.n_rows

    def apply(z, _op=op, _n=n):
        return np.concatenate((_op.forward(z[_n:]), _op.adjoint(z[:_n])))

    return LinearOperator(2 * n, 2 * n, apply, apply, op.dtype)


def adjoint_probe(op: LinearOperator, rng=None, trials: int = 3) -> float:
    """Largest relative defect |u.(Av) - (A^T u).v| over random probes."""
    rng = np.random.default_rng(rng)
    worst = 0.0
    for _ in range(trials):
        v = rng.standard_normal(op.n_cols).astype(op.dtype)
        u = rng.standard_normal(op.n_rows).astype(op.dtype)
        lhs = np.dot(u, op.forward(v))
        rhs = np.dot(op.adjoint(u), v)
        scale = abs(lhs) + abs(rhs)
        if scale == 0:
            continue
        worst = max(worst, abs(lhs - rhs) / scale)
    return worst


def read_matrix_market(path) -> SparseMatrix:
    """Parse a real coordinate Matrix Market file into a SparseMatrix.

    Supports the general and symmetric symmetries; symmetric storage is
    expanded and duplicate entries are summed.  Malformed content raises
    MatrixMarketError naming the offending line number.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise MatrixMarketError("line 1: empty file")
    header = lines[0].split()
    if len(header) != 5 or header[0] != "%%MatrixMarket":
        raise MatrixMarketError("line 1: expected '%%MatrixMarket matrix "
                                "coordinate real <symmetry>' header")
    _, obj, fmt, fld, sym = (tok.lower() for tok in header)
    if obj != "matrix" or fmt != "coordinate":
        raise MatrixMarketError("line 1: only coordinate matrices are supported")
    if fld != "real":
        raise MatrixMarketError(f"line 1: unsupported field '{fld}'")
    if sym not in ("general", "symmetric"):
        raise MatrixMarketError(f"line 1: unsupported symmetry '{sym}'")

    pos = 1
    while pos < len(lines) and (lines[pos].startswith("%") or not lines[pos].strip()):
        pos += 1
    if pos == len(lines):
        raise MatrixMarketError(f"line {pos + 1}: missing size line")
    size_tokens = lines[pos].split()
    if len(size_tokens) != 3:
        raise MatrixMarketError(f"line {pos + 1}: size line must be "
                                "'rows cols nnz'")
    try:
        n_rows, n_cols, nnz = (int(tok) for tok in size_tokens)
    except ValueError:
        raise MatrixMarketError(f"line {pos + 1}: size entries must be "
                                "integers") from None
    if n_rows < 1 or n_cols < 1 or nnz < 0:
        raise MatrixMarketError(f"line {pos + 1}: invalid dimensions")

    rows = np.empty(nnz, dtype=np.int64)
    cols = np.empty(nnz, dtype=np.int64)
    vals = np.empty(nnz, dtype=np.float64)
    count = 0
    for lineno in range(pos + 1, len(lines)):
        text = lines[lineno].strip()
        if not text or text.startswith("%"):
            continue
        if count >= nnz:
            raise MatrixMarketError(f"line {lineno + 1}: more than the "
                                    f"declared {nnz} entries")
        tokens = text.split()
        if len(tokens) != 3:
            raise MatrixMarketError(f"line {lineno + 1}: expected 'row col "
                                    "value'")
        try:
            i, j = int(tokens[0]), int(tokens[1])
            v = float(tokens[2])
        except ValueError:
            raise MatrixMarketError(f"line {lineno + 1}: malformed entry "
                                    f"'{text}'") from None
        if not (1 <= i <= n_rows and 1 <= j <= n_cols):
            raise MatrixMarketError(f"line {lineno + 1}: index ({i}, {j}) "
                                    f"outside {n_rows} x {n_cols}")
        rows[count], cols[count], vals[count] = i - 1, j - 1, v
        count += 1
    if count != nnz:
        raise MatrixMarketError(f"line {len(lines)}: expected {nnz} entries, "
                                f"found {count}")

    if sym == "symmetric":
        off = rows != cols
        rows, cols, vals = (np.concatenate((rows, cols[off])),
                            np.concatenate((cols, rows[off])),
                            np.concatenate((vals, vals[off])))
    return SparseMatrix.from_coo(rows, cols, vals, (n_rows, n_cols),
                                 dtype=np.float64)


def write_matrix_market(path, m: SparseMatrix) -> None:
    """Write general coordinate format with 17 significant digits."""
    rows_of = np.repeat(np.arange(m.n_rows), np.diff(m.indptr))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("%%MatrixMarket matrix coordinate real general\n")
        fh.write(f"{m.n_rows} {m.n_cols} {m.nnz}\n")
        for i, j, v in zip(rows_of, m.indices, m.data):
            fh.write(f"{i + 1} {j + 1} {float(v):.17g}\n")
