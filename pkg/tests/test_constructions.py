from fractions import Fraction

import numpy as np
import pytest

from csmatrix.constructions import (
    BaseMatrix,
    Construction,
    block_grid_of,
    build_additive,
    build_base,
    build_latin,
    build_rs_latin,
    correspondence,
    row_block_submatrix,
    verify_p1,
    verify_p2,
)
from csmatrix.errors import BadParams, FieldMismatch, NotOddPrime, NotRegular, UnsupportedOrder, ZeroBeta
from csmatrix.field import field_new
from csmatrix.metrics import coherence
from csmatrix.sparse import BlockKind, BlockSpec, assemble


def test_correspondence():
    f = field_new(16)
    assert correspondence(f.zero) == BlockSpec.zero()
    assert correspondence(f.power(3)) == BlockSpec.circulant(3)


def test_additive_shape(additive5):
    assert additive5.H.shape == (25, 25)
    assert (additive5.s, additive5.t, additive5.gamma) == (5, 0, 5)
    assert np.all(additive5.H.column_weights() == 5)
    assert np.all(additive5.H.row_weights() == 5)


def test_additive_grid():
    assert block_grid_of(build_additive(3)) == "0 0 0\n0 1 2\n0 2 1\n"


@pytest.mark.parametrize("q", [2, 4, 6, 9])
def test_additive_needs_odd_prime(q):
    with pytest.raises(NotOddPrime, match="q must be an odd prime"):
        build_additive(q)


def test_rs_latin_shape(rs_latin19):
    assert rs_latin19.H.shape == (324, 324)
    assert (rs_latin19.s, rs_latin19.t, rs_latin19.gamma) == (18, 1, 17)
    assert rs_latin19.beta == field_new(19).one


def test_unit_beta_puts_zero_blocks_on_the_diagonal(rs_latin19, latin8):
    for base in (rs_latin19, latin8):
        for i, row in enumerate(base.grid):
            zeros = [j for j, block in enumerate(row) if block.kind is BlockKind.zero]
            assert zeros == [i]


def test_rs_latin_beta_moves_the_zero_blocks():
    f = field_new(9)
    base = build_rs_latin(9, f.power(3))
    for i, row in enumerate(base.grid):
        assert row[(i + 3) % 8].kind is BlockKind.zero


@pytest.mark.parametrize("builder", [build_rs_latin, build_latin])
@pytest.mark.parametrize("q", [4, 8, 9])
def test_every_nonzero_beta_certifies(builder, q):
    f = field_new(q)
    for e in range(q - 1):
        base = builder(q, f.power(e))
        assert verify_p1(base) == 1
        assert verify_p2(base)


def test_zero_beta(latin8):
    with pytest.raises(ZeroBeta, match="beta must be nonzero"):
        build_latin(8, field_new(8).zero)


def test_beta_from_another_field():
    with pytest.raises(FieldMismatch):
        build_rs_latin(8, field_new(7).one)


def test_latin_needs_three_elements():
    with pytest.raises(UnsupportedOrder):
        build_rs_latin(2)


def test_build_base_dispatch():
    base = build_base(Construction.latin, 8, 2)
    assert base.construction is Construction.latin
    assert base.beta == field_new(8).power(2)
    assert build_base("additive", 7).s == 7


def _hand_made(grid, t=0):
    s = len(grid)
    return BaseMatrix(
        H=assemble(grid, s), s=s, t=t, construction=Construction.additive, q=s, beta=None, grid=tuple(map(tuple, grid))
    )


def test_p1_reports_the_offending_block():
    c, z = BlockSpec.circulant(0), BlockSpec.zero()
    with pytest.raises(NotRegular) as info:
        verify_p1(_hand_made([[z, z], [c, c]]))
    assert info.value.block == ("row-block", 1)
    assert info.value.histogram == {1: 4}


def test_p2_detects_shared_rows():
    c = BlockSpec.circulant(0)
    assert not verify_p2(_hand_made([[c, c], [c, c]]))


def test_row_block_submatrix(additive5):
    A = row_block_submatrix(additive5, 3)
    assert A.shape == (15, 25)
    assert np.all(A.column_weights() == 3)
    assert np.all(A.row_weights() == 5)
    assert coherence(A).mu_exact == Fraction(1, 3)
    with pytest.raises(BadParams):
        row_block_submatrix(additive5, 0)


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9])
def test_grids_are_latin(q):
    f = field_new(q)
    for e in range(q - 1):
        for base in (build_rs_latin(q, f.power(e)), build_latin(q, f.power(e))):
            rows = [[str(block) for block in row] for row in base.grid]
            for line in rows + [list(col) for col in zip(*rows)]:
                assert len(set(line)) == q - 1
                assert line.count("-") == 1


def test_latin_beta_alpha_shifts_the_diagonal():
    base = build_latin(8, field_new(8).alpha)
    for i, row in enumerate(base.grid):
        assert row[(i + 1) % 7].kind is BlockKind.zero


@pytest.mark.parametrize("q", [3, 5, 7])
def test_additive_block_columns_hold_distinct_powers(q):
    grid = build_additive(q).grid
    for j in range(1, q):
        assert len({grid[i][j] for i in range(q)}) == q


def test_certified_t(additive5, rs_latin19):
    assert verify_p1(additive5) == 0
    assert verify_p1(rs_latin19) == 1
    assert verify_p2(rs_latin19)
