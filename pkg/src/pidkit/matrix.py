"""Dense matrices over a prime field.

Index vectors at this API are 1-based, so ``submatrix(G, None, (1, 4, 5))``
reads exactly like the column selection it stands for. Entries are stored as
a read-only ``int64`` array of canonical residues; the moduli used here are
small enough (p < 10^4) that products never overflow.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .field import FieldElement, FieldError, PrimeField


class MatrixError(ValueError):
    pass


class SingularMatrixError(MatrixError):
    pass


class MatrixFp:
    __slots__ = ("field", "_a")

    def __init__(self, field: PrimeField, entries, shape: tuple[int, int] | None = None):
        if isinstance(entries, MatrixFp):
            entries = entries._a
        a = np.array(entries, dtype=np.int64)
        if a.size == 0 and shape is not None:
            a = a.reshape(shape)
        if a.ndim != 2:
            if a.size == 0 and a.ndim == 1:
                raise MatrixError("empty matrix needs an explicit shape")
            raise MatrixError(f"expected a 2-d grid, got ndim={a.ndim}")
        if shape is not None and a.shape != tuple(shape):
            raise MatrixError(f"shape {a.shape} does not match declared {tuple(shape)}")
        a = np.mod(a, field.p)
        a.setflags(write=False)
        self.field = field
        self._a = a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def array(self) -> np.ndarray:
        return self._a

    def entry(self, i: int, j: int) -> FieldElement:
        """Entry at 1-based position (i, j)."""
        return FieldElement(int(self._a[i - 1, j - 1]), self.field)

    def to_lists(self) -> list[list[int]]:
        return self._a.tolist()

    def is_zero(self) -> bool:
        return not self._a.any()

    def __matmul__(self, other: MatrixFp) -> MatrixFp:
        return mat_mul(self, other)

    def __neg__(self):
        return MatrixFp(self.field, -self._a)

    def __add__(self, other: MatrixFp) -> MatrixFp:
        _same_field(self, other)
        if self.shape != other.shape:
            raise MatrixError(f"cannot add {self.shape} and {other.shape}")
        return MatrixFp(self.field, self._a + other._a)

    def __eq__(self, other):
        if not isinstance(other, MatrixFp):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and np.array_equal(self._a, other._a)

    def __hash__(self):
        return hash((self.field.p, self.shape, self._a.tobytes()))

    def __repr__(self):
        return f"MatrixFp({self.field}, {self.to_lists()})"


def _same_field(a: MatrixFp, b: MatrixFp):
    if a.field != b.field:
        raise FieldError(f"field mismatch: {a.field} vs {b.field}")


def identity(field: PrimeField, n: int) -> MatrixFp:
    return MatrixFp(field, np.eye(n, dtype=np.int64), shape=(n, n))


def zeros(field: PrimeField, rows: int, cols: int) -> MatrixFp:
    return MatrixFp(field, np.zeros((rows, cols), dtype=np.int64), shape=(rows, cols))


def hstack(blocks: Sequence[MatrixFp]) -> MatrixFp:
    field = blocks[0].field
    for b in blocks[1:]:
        _same_field(blocks[0], b)
    return MatrixFp(field, np.hstack([b.array for b in blocks]))


def vstack(blocks: Sequence[MatrixFp]) -> MatrixFp:
    field = blocks[0].field
    for b in blocks[1:]:
        _same_field(blocks[0], b)
    return MatrixFp(field, np.vstack([b.array for b in blocks]))


def mat_mul(a: MatrixFp, b: MatrixFp) -> MatrixFp:
    _same_field(a, b)
    if a.cols != b.rows:
        raise MatrixError(f"cannot multiply {a.shape} by {b.shape}")
    return MatrixFp(a.field, (a.array @ b.array) % a.field.p, shape=(a.rows, b.cols))


def cauchy(alphas: Sequence[FieldElement], betas: Sequence[FieldElement]) -> MatrixFp:
    """Matrix with entry (i, j) equal to ``1 / (alpha_i - beta_j)``."""
    if not alphas and not betas:
        raise MatrixError("need at least one point")
    field = (alphas or betas)[0].field
    av = [x.value for x in alphas]
    bv = [x.value for x in betas]
    if any(x.field != field for x in (*alphas, *betas)):
        raise FieldError("points from different fields")
    if len(set(av)) != len(av) or len(set(bv)) != len(bv) or set(av) & set(bv):
        raise MatrixError("Cauchy points must be pairwise distinct")
    grid = [[field.inv(a - b) for b in bv] for a in av]
    return MatrixFp(field, grid, shape=(len(av), len(bv)))


def _select(n: int, idx, what: str) -> list[int]:
    if idx is None:
        return list(range(n))
    out = []
    for i in idx:
        i = int(i)
        if not 1 <= i <= n:
            raise IndexError(f"{what} index {i} out of range [1:{n}]")
        out.append(i - 1)
    return out


def submatrix(m: MatrixFp, row_idx=None, col_idx=None) -> MatrixFp:
    """Keep the given rows/columns (1-based, in the order given).

    ``None`` keeps every row (or column).
    """
    r = _select(m.rows, row_idx, "row")
    c = _select(m.cols, col_idx, "column")
    return MatrixFp(m.field, m.array[np.ix_(r, c)], shape=(len(r), len(c)))


def _row_reduce(a: np.ndarray, p: int, ncols: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``a`` mod p, pivoting on the first ``ncols`` columns."""
    a = a.copy()
    rows, cols = a.shape
    ncols = cols if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        f = a[:, c].copy()
        f[r] = 0
        a = (a - np.outer(f, a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: MatrixFp) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(_row_reduce(m.array, m.field.p)[1])


def inverse(m: MatrixFp) -> MatrixFp:
    """Gauss-Jordan inverse; raises :class:`SingularMatrixError`."""
    if m.rows != m.cols:
        raise MatrixError(f"cannot invert non-square {m.shape} matrix")
    n = m.rows
    if n == 0:
        return m
    aug = np.hstack([m.array, np.eye(n, dtype=np.int64)])
    red, pivots = _row_reduce(aug, m.field.p, ncols=n)
    if len(pivots) < n:
        raise SingularMatrixError(f"matrix has rank {len(pivots)} < {n}")
    return MatrixFp(m.field, red[:, n:], shape=(n, n))


def right_null_basis(g: MatrixFp) -> MatrixFp:
    """Basis of the right null space of a systematic ``g = [I_L | V]``.

    Returns ``[V; -I]`` so that ``g @ H == 0``. Only the systematic form is
    supported; anything else raises :class:`MatrixError`.
    """
    L, total = g.shape
    if total < L or not np.array_equal(g.array[:, :L], np.eye(L, dtype=np.int64)):
        raise MatrixError("right_null_basis needs a systematic [I | V] matrix")
    v = g.array[:, L:]
    r = total - L
    h = np.vstack([v, -np.eye(r, dtype=np.int64)])
    return MatrixFp(g.field, h, shape=(total, r))
