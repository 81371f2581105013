"""Base matrices built from circulant permutation blocks.

A base matrix is an s^2 x s^2 grid of s x s blocks, each a circulant
permutation or zero, such that every row-block and column-block holds
exactly t zero blocks (P1) and no two columns share two rows (P2). The
builders check both properties on every matrix they return.
"""
import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

import galois
import numpy as np

from csmatrix.errors import (
    BadParams,
    FieldMismatch,
    GirthTooSmall,
    NotOddPrime,
    NotRegular,
    UnsupportedOrder,
    ZeroBeta,
)
from csmatrix.field import Field, FieldElement, field_new
from csmatrix.metrics import lambda_max
from csmatrix.sparse import BlockKind, BlockSpec, SparseBinaryMatrix, assemble, trim

logger = logging.getLogger(__name__)


class Construction(str, Enum):
    additive = "additive"
    rs_latin = "rs-latin"
    latin = "latin"

    @property
    def rank(self) -> int:
        return list(Construction).index(self)


Grid = Tuple[Tuple[BlockSpec, ...], ...]


@dataclass(frozen=True)
class BaseMatrix:
    H: SparseBinaryMatrix
    s: int
    t: int
    construction: Construction
    q: int
    beta: Optional[FieldElement]
    grid: Grid

    @property
    def gamma(self) -> int:
        return self.s - self.t


def correspondence(x: FieldElement) -> BlockSpec:
    """0 maps to the zero block, alpha^i to the i-th circulant power of size q-1."""
    if x.is_zero():
        return BlockSpec.zero()
    return BlockSpec.circulant(x.discrete_log())


def _expand(entries: galois.FieldArray) -> Grid:
    # vectorized form of correspondence() over a whole Latin square
    values = np.asarray(entries)
    logs = np.full(values.shape, -1, dtype=np.int64)
    nonzero = values != 0
    logs[nonzero] = np.log(entries[nonzero])
    return tuple(
        tuple(BlockSpec.zero() if e < 0 else BlockSpec.circulant(int(e)) for e in row) for row in logs
    )


def _latin_field(q: int, beta: Optional[FieldElement]) -> Tuple[Field, FieldElement]:
    field = field_new(q)
    if q < 3:
        raise UnsupportedOrder(f"Latin-square bases need q >= 3, got {q}")
    if beta is None:
        beta = field.one
    if beta.field is not field:
        raise FieldMismatch(f"beta belongs to GF({beta.field.q}), not GF({q})")
    if beta.is_zero():
        raise ZeroBeta("beta must be nonzero")
    return field, beta


def _certify(base: BaseMatrix) -> BaseMatrix:
    t = verify_p1(base)
    if t != base.t:
        raise NotRegular(f"{base.construction.value} q={base.q} has t={t}, expected {base.t}")
    if not verify_p2(base):
        raise GirthTooSmall(f"{base.construction.value} q={base.q} has girth 4")
    logger.info(
        "certified %s q=%d: %dx%d, (%d,%d)-regular, t=%d, girth > 4",
        base.construction.value,
        base.q,
        base.H.m,
        base.H.n,
        base.gamma,
        base.gamma,
        t,
    )
    return base


def build_additive(q: int) -> BaseMatrix:
    """q^2 x q^2 matrix of q x q circulants with block (i, j) = P^(i*j mod q)."""
    if q < 3 or not galois.is_prime(q):
        raise NotOddPrime("q must be an odd prime")
    grid = tuple(tuple(BlockSpec.circulant(i * j % q) for j in range(q)) for i in range(q))
    base = BaseMatrix(
        H=assemble(grid, q),
        s=q,
        t=0,
        construction=Construction.additive,
        q=q,
        beta=None,
        grid=grid,
    )
    return _certify(base)


def build_rs_latin(q: int, beta: Optional[FieldElement] = None) -> BaseMatrix:
    """Expand the cyclic Latin square with entries alpha^((j-i) mod (q-1)) - beta."""
    field, beta = _latin_field(q, beta)
    s = q - 1
    shift = (np.arange(s)[None, :] - np.arange(s)[:, None]) % s
    entries = field.powers()[shift] - field.gf(beta.value)
    grid = _expand(entries)
    base = BaseMatrix(
        H=assemble(grid, s),
        s=s,
        t=1,
        construction=Construction.rs_latin,
        q=q,
        beta=beta,
        grid=grid,
    )
    return _certify(base)


def build_latin(q: int, beta: Optional[FieldElement] = None) -> BaseMatrix:
    """Expand the Latin square with entries alpha^i * beta - alpha^j."""
    field, beta = _latin_field(q, beta)
    s = q - 1
    powers = field.powers()
    entries = powers[:, np.newaxis] * field.gf(beta.value) - powers[np.newaxis, :]
    grid = _expand(entries)
    base = BaseMatrix(
        H=assemble(grid, s),
        s=s,
        t=1,
        construction=Construction.latin,
        q=q,
        beta=beta,
        grid=grid,
    )
    return _certify(base)


def build_base(construction: Construction, q: int, beta_exponent: Optional[int] = None) -> BaseMatrix:
    """Build by construction id; beta is given as alpha^beta_exponent (default beta = 1)."""
    construction = Construction(construction)
    if construction is Construction.additive:
        return build_additive(q)
    beta = None if beta_exponent is None else field_new(q).power(beta_exponent)
    if construction is Construction.rs_latin:
        return build_rs_latin(q, beta)
    return build_latin(q, beta)


def _zero_counts(grid: Sequence[Sequence[BlockSpec]]):
    zeros = np.array([[block.kind is BlockKind.zero for block in row] for row in grid])
    return zeros.sum(axis=1), zeros.sum(axis=0)


def verify_p1(base: BaseMatrix) -> int:
    """Common zero-block count t, provided the matrix is (s-t, s-t)-regular."""
    row_zeros, col_zeros = _zero_counts(base.grid)
    col_weights = base.H.column_weights()
    histogram = dict(sorted(Counter(int(w) for w in col_weights).items()))
    t = int(row_zeros[0])
    for label, counts in (("row-block", row_zeros), ("column-block", col_zeros)):
        odd = np.flatnonzero(counts != t)
        if odd.size:
            raise NotRegular(
                f"{label} {odd[0]} has {counts[odd[0]]} zero blocks, expected {t}",
                block=(label, int(odd[0])),
                histogram=histogram,
            )
    gamma = base.s - t
    if np.any(col_weights != gamma) or np.any(base.H.row_weights() != gamma):
        raise NotRegular(f"matrix is not ({gamma},{gamma})-regular", histogram=histogram)
    return t


def verify_p2(base: BaseMatrix) -> bool:
    """Girth > 4, checked as: no two distinct columns share more than one row."""
    return lambda_max(base.H) <= 1


def row_block_submatrix(base: BaseMatrix, gamma: int) -> SparseBinaryMatrix:
    """The gamma*s x s^2 submatrix made of the first gamma row-blocks."""
    if not 1 <= gamma <= base.s:
        raise BadParams(f"gamma must lie in [1, {base.s}], got {gamma}")
    return trim(base.H, gamma * base.s, base.s * base.s)


def block_grid_of(base: BaseMatrix) -> str:
    """Exponent grid, one row-block per line, '-' for zero blocks."""
    width = len(str(base.s - 1))
    return "\n".join(" ".join(str(block).rjust(width) for block in row) for row in base.grid) + "\n"
