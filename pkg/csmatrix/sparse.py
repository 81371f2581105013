"""Binary sparse matrices stored column-major, plus block assembly and alist I/O.

Every matrix in the package goes through ``SparseBinaryMatrix``: a CSC
structure whose per-column row lists are strictly increasing, so the
intersection of two columns is a linear merge.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse

from csmatrix.errors import (
    IndexOutOfRange,
    MalformedAlist,
    OutputError,
    PowerOutOfRange,
    ShapeMismatch,
    TargetTooLarge,
    UnreadableInput,
)

logger = logging.getLogger(__name__)


class SparseBinaryMatrix:
    __slots__ = ("m", "n", "_indptr", "_indices")

    def __init__(self, m: int, n: int, cols: Sequence[Sequence[int]]):
        if m < 0 or n < 0 or len(cols) != n:
            raise ShapeMismatch(f"expected {n} column lists for a {m}x{n} matrix, got {len(cols)}")
        lengths = np.fromiter((len(c) for c in cols), dtype=np.int64, count=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(lengths, out=indptr[1:])
        indices = (
            np.concatenate([np.asarray(c, dtype=np.int64) for c in cols])
            if indptr[-1]
            else np.zeros(0, dtype=np.int64)
        )
        self._set(m, n, indptr, indices)

    def _set(self, m, n, indptr, indices):
        if indices.size and (indices.min() < 0 or indices.max() >= m):
            raise IndexOutOfRange(f"row index outside [0, {m})")
        steps = np.diff(indices)
        # steps that cross a column boundary are allowed to go down
        inside = np.ones(steps.size, dtype=bool)
        boundaries = indptr[1:-1]
        inside[boundaries[(boundaries > 0) & (boundaries < indices.size)] - 1] = False
        if np.any(steps[inside] <= 0):
            raise ShapeMismatch("column row lists must be strictly increasing")
        indptr.flags.writeable = False
        indices.flags.writeable = False
        self.m, self.n = int(m), int(n)
        self._indptr, self._indices = indptr, indices

    @classmethod
    def from_csc(cls, matrix) -> "SparseBinaryMatrix":
        csc = sparse.csc_array(matrix)
        csc.sum_duplicates()
        csc.sort_indices()
        csc.eliminate_zeros()
        if csc.nnz and np.any(csc.data != 1):
            raise ShapeMismatch("matrix entries must be 0 or 1")
        self = cls.__new__(cls)
        m, n = csc.shape
        self._set(m, n, csc.indptr.astype(np.int64), csc.indices.astype(np.int64))
        return self

    @classmethod
    def from_dense(cls, array) -> "SparseBinaryMatrix":
        return cls.from_csc(sparse.csc_array(np.asarray(array, dtype=np.int64)))

    @classmethod
    def identity(cls, n: int) -> "SparseBinaryMatrix":
        return cls(n, n, [[i] for i in range(n)])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.m, self.n

    @property
    def nnz(self) -> int:
        return int(self._indices.size)

    @property
    def cols(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(int(r) for r in self.column(j)) for j in range(self.n))

    def column(self, j: int) -> np.ndarray:
        if not 0 <= j < self.n:
            raise IndexOutOfRange(f"column {j} outside [0, {self.n})")
        return self._indices[self._indptr[j] : self._indptr[j + 1]]

    def column_weights(self) -> np.ndarray:
        return np.diff(self._indptr)

    def row_weights(self) -> np.ndarray:
        return np.bincount(self._indices, minlength=self.m)

    def to_csc(self) -> sparse.csc_array:
        data = np.ones(self.nnz, dtype=np.int64)
        return sparse.csc_array((data, self._indices.copy(), self._indptr.copy()), shape=self.shape)

    def to_dense(self, dtype=np.int64) -> np.ndarray:
        return self.to_csc().toarray().astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, SparseBinaryMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self._indptr, other._indptr)
            and np.array_equal(self._indices, other._indices)
        )

    def __hash__(self):
        return hash((self.shape, self._indptr.tobytes(), self._indices.tobytes()))

    def __repr__(self):
        return f"SparseBinaryMatrix({self.m}x{self.n}, nnz={self.nnz})"


class BlockKind(str, Enum):
    zero = "zero"
    circulant = "circulant"
    permutation = "permutation"


@dataclass(frozen=True)
class BlockSpec:
    kind: BlockKind
    power: Optional[int] = None
    perm: Optional[Tuple[int, ...]] = None

    @classmethod
    def zero(cls) -> "BlockSpec":
        return cls(BlockKind.zero)

    @classmethod
    def circulant(cls, power: int) -> "BlockSpec":
        return cls(BlockKind.circulant, power=power)

    @classmethod
    def permutation(cls, perm: Sequence[int]) -> "BlockSpec":
        """Row r of the block holds its 1 in column perm[r]."""
        return cls(BlockKind.permutation, perm=tuple(int(p) for p in perm))

    def column_rows(self, s: int) -> Optional[np.ndarray]:
        """Row holding the 1 of each block column, or None for the zero block."""
        if self.kind is BlockKind.zero:
            return None
        if self.kind is BlockKind.circulant:
            if not 0 <= self.power < s:
                raise PowerOutOfRange(f"power {self.power} outside [0, {s})")
            return (np.arange(s) - self.power) % s
        perm = np.asarray(self.perm)
        if perm.size != s or not np.array_equal(np.sort(perm), np.arange(s)):
            raise ShapeMismatch(f"{self.perm} is not a permutation of size {s}")
        return np.argsort(perm)

    def __str__(self):
        if self.kind is BlockKind.zero:
            return "-"
        if self.kind is BlockKind.circulant:
            return str(self.power)
        return "P" + ",".join(map(str, self.perm))


def realize_circulant(s: int, i: int) -> SparseBinaryMatrix:
    """i-th power of the size-s cyclic shift: entry (r, c) is 1 iff c = (r + i) mod s."""
    if s < 1 or not 0 <= i < s:
        raise PowerOutOfRange(f"power {i} outside [0, {s})")
    rows = BlockSpec.circulant(i).column_rows(s)
    return SparseBinaryMatrix(s, s, [[int(r)] for r in rows])


def assemble(grid: Sequence[Sequence[BlockSpec]], s: int) -> SparseBinaryMatrix:
    """Place block (i, j) at rows [i*s, (i+1)*s) and columns [j*s, (j+1)*s)."""
    if len(grid) != s or any(len(row) != s for row in grid):
        raise ShapeMismatch(f"grid must be {s}x{s} blocks")
    rows, cols = [], []
    local = np.arange(s)
    for bi, grid_row in enumerate(grid):
        for bj, block in enumerate(grid_row):
            block_rows = block.column_rows(s)
            if block_rows is None:
                continue
            rows.append(bi * s + block_rows)
            cols.append(bj * s + local)
    size = s * s
    if not rows:
        return SparseBinaryMatrix(size, size, [[] for _ in range(size)])
    rows, cols = np.concatenate(rows), np.concatenate(cols)
    coo = sparse.coo_array((np.ones(rows.size, dtype=np.int64), (rows, cols)), shape=(size, size))
    return SparseBinaryMatrix.from_csc(coo)


def extract_block(H: SparseBinaryMatrix, bi: int, bj: int, s: int) -> BlockSpec:
    sub = H.to_csc()[bi * s : (bi + 1) * s, bj * s : (bj + 1) * s]
    block = SparseBinaryMatrix.from_csc(sub)
    if block.nnz == 0:
        return BlockSpec.zero()
    weights = block.column_weights()
    if not (np.all(weights == 1) and np.all(block.row_weights() == 1)):
        raise ShapeMismatch(f"block ({bi}, {bj}) is neither zero nor a permutation")
    column_rows = block._indices
    power = int(-column_rows[0]) % s
    if np.array_equal(column_rows, (np.arange(s) - power) % s):
        return BlockSpec.circulant(power)
    return BlockSpec.permutation(np.argsort(column_rows))


def extract_grid(H: SparseBinaryMatrix, s: int):
    if H.shape != (s * s, s * s):
        raise ShapeMismatch(f"{H!r} is not an {s * s}x{s * s} block matrix")
    return [[extract_block(H, bi, bj, s) for bj in range(s)] for bi in range(s)]


def trim(H: SparseBinaryMatrix, m: int, n: int) -> SparseBinaryMatrix:
    """Keep rows [0, m) and columns [0, n)."""
    if m > H.m or n > H.n:
        raise TargetTooLarge(f"cannot trim {H.m}x{H.n} to {m}x{n}")
    if m < 0 or n < 0:
        raise ShapeMismatch(f"negative target shape {m}x{n}")
    if (m, n) == H.shape:
        return H
    return SparseBinaryMatrix.from_csc(H.to_csc()[:m, :n])


def inner_product(H: SparseBinaryMatrix, i: int, j: int) -> int:
    return int(np.intersect1d(H.column(i), H.column(j), assume_unique=True).size)


# alist: "n m", max column/row weights, weight lists, then 1-based
# column lists and row lists, each zero-padded to the max weight.


def export_alist(H: SparseBinaryMatrix) -> bytes:
    col_weights = H.column_weights()
    row_weights = H.row_weights()
    max_col = int(col_weights.max(initial=0))
    max_row = int(row_weights.max(initial=0))
    rows_of = H.to_csc().tocsr()
    rows_of.sort_indices()

    def padded(indices, width):
        values = [str(int(v) + 1) for v in indices] + ["0"] * (width - len(indices))
        return " ".join(values)

    lines = [
        f"{H.n} {H.m}",
        f"{max_col} {max_row}",
        " ".join(map(str, col_weights)),
        " ".join(map(str, row_weights)),
    ]
    lines += [padded(H.column(j), max_col) for j in range(H.n)]
    lines += [
        padded(rows_of.indices[rows_of.indptr[r] : rows_of.indptr[r + 1]], max_row)
        for r in range(H.m)
    ]
    return ("\n".join(lines) + "\n").encode("ascii")


def _ints(lines, number, expected=None):
    if number > len(lines):
        raise MalformedAlist("unexpected end of file", number)
    try:
        values = [int(v) for v in lines[number - 1].split()]
    except ValueError:
        raise MalformedAlist("non-integer token", number)
    if expected is not None and len(values) != expected:
        raise MalformedAlist(f"expected {expected} values, found {len(values)}", number)
    return values


def _index_list(lines, number, width, weight, limit):
    values = _ints(lines, number)
    if len(values) not in (weight, width):
        raise MalformedAlist(f"expected {width} entries, found {len(values)}", number)
    nonzero = sorted(v for v in values if v != 0)
    if len(nonzero) != weight:
        raise MalformedAlist(f"weight {weight} declared, {len(nonzero)} entries listed", number)
    if any(v < 1 or v > limit for v in nonzero) or len(set(nonzero)) != len(nonzero):
        raise MalformedAlist(f"indices must be distinct and within [1, {limit}]", number)
    return [v - 1 for v in nonzero]


def import_alist(data: Union[bytes, str]) -> SparseBinaryMatrix:
    text = data.decode("ascii", errors="replace") if isinstance(data, bytes) else data
    lines = text.split("\n")
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise MalformedAlist("empty alist", 1)

    n, m = _ints(lines, 1, 2)
    max_col, max_row = _ints(lines, 2, 2)
    if n < 0 or m < 0:
        raise MalformedAlist("negative dimensions", 1)
    col_weights = _ints(lines, 3, n)
    row_weights = _ints(lines, 4, m)
    if max(col_weights, default=0) != max_col or max(row_weights, default=0) != max_row:
        raise MalformedAlist("max weights disagree with the weight lists", 2)
    if max_col == 0 or max_row == 0:
        # all-zero lists serialize as blank lines, which the strip above removed
        lines += [""] * (4 + n + m - len(lines))

    cols = [_index_list(lines, 5 + j, max_col, col_weights[j], m) for j in range(n)]
    H = SparseBinaryMatrix(m, n, cols)

    transpose = H.to_csc().tocsr()
    transpose.sort_indices()
    for r in range(m):
        number = 5 + n + r
        listed = _index_list(lines, number, max_row, row_weights[r], n)
        if listed != list(transpose.indices[transpose.indptr[r] : transpose.indptr[r + 1]]):
            raise MalformedAlist("row list disagrees with the column lists", number)
    if len(lines) > 4 + n + m:
        raise MalformedAlist("trailing content", 5 + n + m)
    return H


def write_alist(H: SparseBinaryMatrix, path: Union[str, Path]):
    try:
        Path(path).write_bytes(export_alist(H))
    except OSError as e:
        raise OutputError(f"cannot write {path}: {e.strerror}") from e
    logger.info("wrote %dx%d alist to %s", H.m, H.n, path)


def read_alist(path: Union[str, Path]) -> SparseBinaryMatrix:
    try:
        data = Path(path).read_bytes()
    except OSError as e:
        raise UnreadableInput(f"cannot read {path}: {e.strerror}") from e
    return import_alist(data)
