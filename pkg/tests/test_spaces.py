import numpy as np
import pytest

from mudilate.opcore import Operator, OpcoreError, op_norm
from mudilate.spaces import (ModelSpace, auto_margin, block_assemble,
                             embed_blocks, hardy_shift, window)


class TestHardyShift:
    def test_scalar_fiber(self):
        m = hardy_shift(1, 3)
        np.testing.assert_allclose(m.mat, [[0, 0, 0], [1, 0, 0], [0, 1, 0]])

    def test_norm_one(self):
        for t in (2, 3, 5, 9):
            assert op_norm(hardy_shift(1, t)) == pytest.approx(1.0)
            assert op_norm(hardy_shift(3, t)) == pytest.approx(1.0)

    def test_isometry_off_top_level(self):
        m = hardy_shift(2, 6)
        g = m.H.mat @ m.mat
        np.testing.assert_allclose(g[:10, :10], np.eye(10), atol=1e-14)
        # top level maps to zero
        np.testing.assert_allclose(g[10:, 10:], 0, atol=1e-14)

    def test_co_isometry_defect_is_level_zero(self):
        m = hardy_shift(1, 5)
        mmstar = m.mat @ m.H.mat
        e0 = np.zeros((5, 5))
        e0[0, 0] = 1.0
        np.testing.assert_allclose(mmstar, np.eye(5) - e0, atol=1e-14)

    def test_requires_two_levels(self):
        with pytest.raises(OpcoreError):
            hardy_shift(1, 1)


class TestWindow:
    def test_margin_zero_is_identity(self):
        sp = ModelSpace(((2, 4),))
        w = window(sp, 0)
        np.testing.assert_allclose(w.projector.mat, np.eye(8))

    def test_rank(self):
        sp = ModelSpace(((1, 8),))
        assert window(sp, 2).dim == 6

    def test_windowed_shift_identity_exact(self):
        sp = ModelSpace(((1, 8),))
        m = hardy_shift(1, 8)
        gap = m.H @ m - Operator.identity(8)
        assert window(sp, 1).wnorm(gap.mat) == 0.0
        assert op_norm(gap) == pytest.approx(1.0)

    def test_margin_too_large(self):
        with pytest.raises(OpcoreError):
            window(ModelSpace(((1, 4),)), 4)

    def test_word_exactness_for_banded_words(self):
        # any word of shifts/adjoints of total bandwidth <= margin agrees
        # with the infinite model on the window
        rng = np.random.default_rng(6)
        big, small = 24, 8
        mb, ms = hardy_shift(1, big).mat, hardy_shift(1, small).mat
        sp = ModelSpace(((1, small),))
        for _ in range(25):
            word = rng.integers(0, 2, size=4)
            wb = np.eye(big)
            ws = np.eye(small)
            for c in word:
                wb = wb @ (mb if c else mb.conj().T)
                ws = ws @ (ms if c else ms.conj().T)
            w = window(sp, 4)
            np.testing.assert_allclose((ws @ w.projector.mat)[:small, :small],
                                       (wb @ np.eye(big, small) @ w.projector.mat)[:small, :small],
                                       atol=1e-12)


class TestBlockAssemble:
    def test_direct_sum(self):
        a = np.diag([1.0, 2.0])
        b = np.array([[3.0]])
        out = block_assemble([[a, None], [None, b]])
        np.testing.assert_allclose(out.mat, np.diag([1.0, 2.0, 3.0]))

    def test_adjoint_grid_property(self):
        rng = np.random.default_rng(12)
        a = rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3))
        b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        c = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
        grid = [[a, b], [c, None]]
        adj_grid = [[a.conj().T, c.conj().T], [b.conj().T, None]]
        lhs = block_assemble(adj_grid, row_dims=[3, 2], col_dims=[2, 4])
        rhs = block_assemble(grid, row_dims=[2, 4], col_dims=[3, 2]).H
        np.testing.assert_allclose(lhs.mat, rhs.mat)

    def test_mismatch_names_cell(self):
        with pytest.raises(OpcoreError) as exc:
            block_assemble([[np.eye(2), np.eye(3)], [None, np.eye(3)]])
        assert "(" in str(exc.value) and ")" in str(exc.value)

    def test_exam1_first_member_matches_hand_built(self, exam1):
        space, tup, _, _ = exam1
        n = space.summands[0][1]
        hand = np.zeros((3 * n, 3 * n), dtype=complex)
        hand[0:n, n:2 * n] = np.eye(n)
        hand[n:2 * n, 2 * n:3 * n] = np.eye(n)
        np.testing.assert_allclose(tup.ops[0].mat, hand)

    def test_embed_blocks_zero_rows_need_dims(self):
        sp = ModelSpace(((1, 4), (1, 4)))
        out = embed_blocks(sp, {(0, 1): np.eye(4)})
        assert out.rows == 8
        np.testing.assert_allclose(out.mat[:4, 4:], np.eye(4))


class TestAutoMargin:
    def test_from_bandwidth_metadata(self, exam1):
        _, tup, _, _ = exam1
        assert auto_margin(tup.ops) == 4
        m = hardy_shift(1, 6)
        assert auto_margin([m, m @ m], word_len=3) == 6

    def test_rejects_unknown_bandwidth(self):
        with pytest.raises(OpcoreError):
            auto_margin([Operator(np.eye(3))])


class TestModelSpace:
    def test_total_dim(self):
        sp = ModelSpace(((2, 8), (1, 4)))
        assert sp.total_dim == 20

    def test_level_mask(self):
        sp = ModelSpace(((1, 4), (2, 3)))
        mask = sp.level_mask(1)
        assert mask.tolist() == [True] * 3 + [False] + [True] * 4 + [False] * 2

    def test_rejects_bad_summands(self):
        with pytest.raises(OpcoreError):
            ModelSpace(((0, 4),))
