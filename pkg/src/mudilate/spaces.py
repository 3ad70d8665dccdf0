"""Truncated model Hilbert spaces: vector Hardy shifts, block assembly and
the window bookkeeping that makes truncated shift identities exact.

A ModelSpace is an ordered direct sum of summands C^fiber x C^trunc, graded
by the truncation level.  A Window keeps every basis vector whose level lies
below trunc - margin in its summand; any identity between words of shift
operators of total bandwidth <= margin then holds exactly on the window.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .opcore import Operator, OpcoreError, as_operator


@dataclass(frozen=True)
class ModelSpace:
    """Ordered list of (fiber_dim, trunc_level) summands."""

    summands: tuple

    def __post_init__(self):
        s = tuple((int(f), int(t)) for f, t in self.summands)
        for f, t in s:
            if f < 1 or t < 1:
                raise OpcoreError("fiber_dim and trunc_level must be positive")
        object.__setattr__(self, "summands", s)

    @property
    def total_dim(self) -> int:
        return sum(f * t for f, t in self.summands)

    def offsets(self):
        out, acc = [], 0
        for f, t in self.summands:
            out.append(acc)
            acc += f * t
        return out

    def level_mask(self, margin: int) -> np.ndarray:
        """Boolean mask of coordinates whose level < trunc_level - margin."""
        parts = []
        for f, t in self.summands:
            keep = np.arange(t) < (t - margin)
            parts.append(np.repeat(keep, f))
        return np.concatenate(parts)

    def summand_slice(self, i: int) -> slice:
        off = self.offsets()[i]
        f, t = self.summands[i]
        return slice(off, off + f * t)


@dataclass
class Window:
    """Orthogonal projector onto the safe part of a truncated space."""

    margin: int
    projector: Operator
    mask: np.ndarray | None = None

    def __post_init__(self):
        p = self.projector.mat
        if np.linalg.norm(p @ p - p, 2) > 1e-12 or np.linalg.norm(p - p.conj().T, 2) > 1e-12:
            raise OpcoreError("window projector must be an orthogonal projection")

    @property
    def dim(self) -> int:
        return int(round(np.trace(self.projector.mat).real))

    def wnorm(self, a) -> float:
        """||A W||: operator norm seen through the safe inputs."""
        m = a.mat if isinstance(a, Operator) else np.asarray(a, dtype=complex)
        return float(np.linalg.norm(m @ self.projector.mat, 2))

    def equal(self, a, b) -> float:
        """Residual ||(A - B) W||."""
        return self.wnorm(as_operator(a) - as_operator(b))

    def compress(self, a) -> Operator:
        w = self.projector.mat
        m = a.mat if isinstance(a, Operator) else np.asarray(a, dtype=complex)
        return Operator(w @ m @ w)

    def psd_min_eig(self, h) -> float:
        """Smallest eigenvalue of the two-sided windowed compression of H."""
        c = self.compress(h).mat
        c = (c + c.conj().T) / 2.0
        return float(np.linalg.eigvalsh(c).min())


def window(space: ModelSpace, margin: int) -> Window:
    if margin < 0:
        raise OpcoreError("margin must be nonnegative")
    if margin >= min(t for _, t in space.summands):
        raise OpcoreError(
            f"margin {margin} leaves no window (min trunc_level "
            f"{min(t for _, t in space.summands)})"
        )
    mask = space.level_mask(margin)
    return Window(margin, Operator(np.diag(mask.astype(float)), bandwidth=0), mask)


def auto_margin(ops, word_len: int = 2) -> int:
    """Minimal safe window margin for words of up to ``word_len`` factors
    drawn from ``ops``, from their tracked bandwidth metadata."""
    worst = 0
    for o in ops:
        bw = getattr(o, "bandwidth", None)
        if bw is None:
            raise OpcoreError(
                "operator without bandwidth metadata: pass an explicit margin")
        worst = max(worst, bw)
    return word_len * worst


def hardy_shift(fiber_dim: int, trunc_level: int) -> Operator:
    """Truncation of the unilateral shift on level-graded C^fiber fibers.

    e_k (x) v -> e_{k+1} (x) v below the top level; the top level maps to 0.
    """
    if trunc_level < 2:
        raise OpcoreError("a truncated shift needs trunc_level >= 2")
    n = fiber_dim * trunc_level
    m = np.zeros((n, n), dtype=complex)
    for k in range(trunc_level - 1):
        lo, hi = k * fiber_dim, (k + 1) * fiber_dim
        m[hi:hi + fiber_dim, lo:hi] = np.eye(fiber_dim)
    return Operator(m, bandwidth=1)


def block_assemble(layout, row_dims=None, col_dims=None) -> Operator:
    """Assemble a dense operator from a grid of blocks.

    Cells may be Operator, ndarray, or 0/None for a zero block.  Dimensions
    are inferred from the nonzero cells unless given; inconsistencies raise
    with the offending cell named.
    """
    nrows = len(layout)
    ncols = len(layout[0])
    for r, row in enumerate(layout):
        if len(row) != ncols:
            raise OpcoreError(f"ragged layout: row {r} has {len(row)} cells, expected {ncols}")

    def cell_shape(c):
        if c is None or (np.isscalar(c) and c == 0):
            return None
        return (c.rows, c.cols) if isinstance(c, Operator) else np.asarray(c).shape

    rd = list(row_dims) if row_dims is not None else [None] * nrows
    cd = list(col_dims) if col_dims is not None else [None] * ncols
    for r in range(nrows):
        for c in range(ncols):
            sh = cell_shape(layout[r][c])
            if sh is None:
                continue
            for dims, idx, got in ((rd, r, sh[0]), (cd, c, sh[1])):
                if dims[idx] is None:
                    dims[idx] = got
                elif dims[idx] != got:
                    raise OpcoreError(
                        f"block ({r},{c}) has shape {sh}, inconsistent with "
                        f"row_dims/col_dims ({rd[r]},{cd[c]})"
                    )
    if any(d is None for d in rd) or any(d is None for d in cd):
        raise OpcoreError("zero rows/columns need explicit row_dims/col_dims")

    out = np.zeros((sum(rd), sum(cd)), dtype=complex)
    bandwidth = 0
    roff = np.concatenate([[0], np.cumsum(rd)])
    coff = np.concatenate([[0], np.cumsum(cd)])
    for r in range(nrows):
        for c in range(ncols):
            cell = layout[r][c]
            if cell is None or (np.isscalar(cell) and cell == 0):
                continue
            op = as_operator(cell)
            out[roff[r]:roff[r + 1], coff[c]:coff[c + 1]] = op.mat
            if bandwidth is not None:
                bandwidth = None if op.bandwidth is None else max(bandwidth, op.bandwidth)
    return Operator(out, bandwidth=bandwidth)


def embed_blocks(space: ModelSpace, cells: dict) -> Operator:
    """Operator on a ModelSpace from a {(i, j): block} dict of summand cells."""
    n = len(space.summands)
    grid = [[None] * n for _ in range(n)]
    dims = [f * t for f, t in space.summands]
    for (i, j), block in cells.items():
        grid[i][j] = block
    return block_assemble(grid, row_dims=dims, col_dims=dims)
