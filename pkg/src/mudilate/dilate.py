"""Explicit dilation constructors: the finite unitary power dilation, the
block lower-triangular isometric dilations on the space H + (defect copies),
the pentablock dilation triple, and the operator pushforward maps.

Every construction truncates the defect tail at ``depth`` copies; checks
against the infinite-model identities must window out the final copies
(DilationResult.window builds the right projector).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .opcore import (Operator, OperatorTuple, OpcoreError, as_operator, _mat,
                     commutator_norms, herm_sqrt, op_norm)
from .fundamentals import DefectData, FundamentalSet, defect, ExpansiveError
from .spaces import Window, block_assemble


class DilateError(OpcoreError):
    pass


def egervary(t, n: int) -> Operator:
    """(N+1)x(N+1) block unitary whose compressions reproduce T^k for k <= N.

    First block row (T, 0, ..., 0, D_{T*}), second (D_T, 0, ..., 0, -T*),
    then an identity chain feeding each column into the next row.  N = 1 is
    the classical 2x2 unitary extension of a contraction.
    """
    op = as_operator(t)
    if not op.is_square():
        raise DilateError("power dilation needs a square contraction")
    if n < 1:
        raise DilateError("N must be >= 1")
    nrm = op_norm(op)
    if nrm > 1.0 + 1e-8:
        raise ExpansiveError(f"not a contraction: norm {nrm:.6f}")
    d = op.rows
    eye = np.eye(d)
    dt = herm_sqrt(Operator(eye - op.mat.conj().T @ op.mat), neg_clamp=1e-8).mat
    dts = herm_sqrt(Operator(eye - op.mat @ op.mat.conj().T), neg_clamp=1e-8).mat
    grid = [[None] * (n + 1) for _ in range(n + 1)]
    grid[0][0] = op.mat
    grid[0][n] = dts
    grid[1][0] = dt
    grid[1][n] = -op.mat.conj().T
    for k in range(2, n + 1):
        grid[k][k - 1] = eye
    return block_assemble(grid, row_dims=[d] * (n + 1), col_dims=[d] * (n + 1))


@dataclass
class DilationResult:
    """An isometric-dilation tuple on H + depth copies of the defect space.

    ``embed`` is the isometric inclusion of the original space; member
    adjoints restricted through it reproduce the original adjoints (the
    co-extension property), which callers verify through ``window``.
    """

    kind: str
    ops: tuple
    embed: Operator
    depth: int
    defect: DefectData
    base_dim: int

    @property
    def dim(self) -> int:
        return self.ops[0].rows

    def tuple(self) -> OperatorTuple:
        return OperatorTuple(self.kind, self.ops)

    def coextension_residuals(self, base_ops, h_window: Window | None = None) -> list:
        out = []
        e = self.embed.mat
        for v, t in zip(self.ops, base_ops):
            r = v.mat.conj().T @ e - e @ _mat(t).conj().T
            if h_window is not None:
                r = r @ h_window.projector.mat
            out.append(float(np.linalg.norm(r, 2)))
        return out

    def window(self, h_window: Window, tail_margin: int = 1) -> Window:
        """Window on the dilation space: the base-space window plus the tail
        copies that sit at least ``tail_margin`` below the truncation cut."""
        if self.defect.rank == 0:
            return h_window
        q = self.defect.range_basis
        pw = q.conj().T @ h_window.projector.mat @ q
        w, v = np.linalg.eigh((pw + pw.conj().T) / 2.0)
        keepv = v[:, w > 1.0 - 1e-9]
        dwin = keepv @ keepv.conj().T
        blocks = [h_window.projector.mat]
        keep_copies = max(0, self.depth - tail_margin)
        for k in range(1, self.depth + 1):
            blocks.append(dwin if k <= keep_copies else np.zeros_like(dwin))
        n = self.dim
        full = np.zeros((n, n), dtype=complex)
        off = 0
        for b in blocks:
            m = b.shape[0]
            full[off:off + m, off:off + m] = b
            off += m
        return Window(h_window.margin, Operator(full))


def _embed_matrix(base_dim, depth, rank):
    e = np.zeros((base_dim + depth * rank, base_dim), dtype=complex)
    e[:base_dim, :base_dim] = np.eye(base_dim)
    return Operator(e)


def _tail_tuple(base, first_col, diag, sub, depth, rank, zero_row=0):
    """Block lower-triangular dilation member.

    Row layout (H, copy 1, ..., copy depth).  ``first_col`` lists the blocks
    under the base entry (None for a gap); the ``diag``/``sub`` tail pattern
    repeats down the copies, pushed ``zero_row`` rows lower.
    """
    n = 1 + depth
    grid = [[None] * n for _ in range(n)]
    grid[0][0] = base
    row = 1
    for blk in first_col:
        if row <= depth and blk is not None:
            grid[row][0] = blk
        row += 1
    for k in range(1, depth + 1):
        if diag is not None and k + zero_row <= depth:
            grid[k + zero_row][k] = diag
        if sub is not None and k + zero_row + 1 <= depth:
            grid[k + zero_row + 1][k] = sub
    dims = [base.shape[0]] + [rank] * depth
    return block_assemble(grid, row_dims=dims, col_dims=dims)


def schaffer(kind: str, tup: OperatorTuple, fset: FundamentalSet,
             depth: int) -> DilationResult:
    """Block lower-triangular isometric dilation from solved fundamentals.

    gamma7 members put the partner adjoint below the diagonal symbol; the
    last member is the defect-fed shift.  A tuple whose last member is
    already an isometry has a trivial defect space and is returned unchanged.
    """
    if kind not in ("gamma7", "gamma5"):
        raise DilateError("schaffer kinds are gamma7 and gamma5")
    if tup.kind != kind or fset.kind != kind:
        raise DilateError("tuple/fundamental kinds must match the requested kind")
    if depth < 2:
        raise DilateError("depth must be >= 2")
    dd = fset.defect
    base_dim = tup.dim
    if dd.rank == 0:
        return DilationResult(kind, tup.ops, Operator(np.eye(base_dim)), depth,
                              dd, base_dim)
    q = dd.range_basis
    drow = q.conj().T @ dd.D.mat
    r = dd.rank

    def member(base, sym_name, partner_name):
        f = dd.compress(fset[sym_name])
        g = dd.compress(fset[partner_name])
        return _tail_tuple(_mat(base), [g.conj().T @ drow], f, g.conj().T,
                           depth, r)

    ops = []
    if kind == "gamma7":
        for i in range(6):
            ops.append(member(tup.ops[i], f"F{i+1}", f"F{6-i}"))
        shift = _tail_tuple(_mat(tup.ops[6]), [drow], None, np.eye(r), depth, r)
        ops.append(shift)
    else:
        s1, s2, s3, s1t, s2t = tup.ops
        g1 = dd.compress(fset["G1"])
        g2 = 2.0 * dd.compress(fset["G2"])
        g1t = 2.0 * dd.compress(fset["G1t"])
        g2t = dd.compress(fset["G2t"])
        ops.append(_tail_tuple(_mat(s1), [g2t.conj().T @ drow], g1,
                               g2t.conj().T, depth, r))
        ops.append(_tail_tuple(_mat(s2), [g1t.conj().T @ drow], g2,
                               g1t.conj().T, depth, r))
        ops.append(_tail_tuple(_mat(s3), [drow], None, np.eye(r), depth, r))
        ops.append(_tail_tuple(_mat(s1t), [g2.conj().T @ drow], g1t,
                               g2.conj().T, depth, r))
        ops.append(_tail_tuple(_mat(s2t), [g1.conj().T @ drow], g2t,
                               g1.conj().T, depth, r))
    return DilationResult(kind, tuple(ops), _embed_matrix(base_dim, depth, r),
                          depth, dd, base_dim)


def pentablock_dilation(tup: OperatorTuple, x, depth: int) -> DilationResult:
    """Dilation triple (R1, R2, R3) of a pentablock candidate.

    R2 carries the fundamental operator of the last two members down the
    tail, R3 is the defect-fed shift, and R1 repeats the damping block
    L = (I - (X*X + XX*)/4)^(1/2) on every defect copy.
    """
    if tup.kind != "penta":
        raise DilateError("pentablock dilation takes a penta triple")
    if depth < 2:
        raise DilateError("depth must be >= 2")
    p1, p2, p3 = tup.ops
    base_dim = tup.dim
    if isinstance(x, FundamentalSet):
        dd = x.defect
        xc = dd.compress(x["X"]) if dd.rank else np.zeros((0, 0))
    else:
        dd = defect(p3)
        xm = _mat(x)
        xc = dd.compress(xm) if xm.shape[0] == base_dim else xm
    r = dd.rank
    if r == 0:
        return DilationResult("penta", tup.ops, Operator(np.eye(base_dim)),
                              depth, dd, base_dim)
    if xc.shape != (r, r):
        raise DilateError(f"fundamental operator must act on the {r}-dim defect space")
    gram = xc.conj().T @ xc + xc @ xc.conj().T
    if np.linalg.norm(gram, 2) > 4.0 + 1e-9:
        raise DilateError("damping block undefined: ||X*X + XX*|| exceeds 4")
    ell = herm_sqrt(Operator(np.eye(r) - 0.25 * gram)).mat
    q = dd.range_basis
    drow = q.conj().T @ dd.D.mat
    r1 = _tail_tuple(_mat(p1), [], ell, None, depth, r)
    r2 = _tail_tuple(_mat(p2), [xc.conj().T @ drow], xc, xc.conj().T, depth, r)
    r3 = _tail_tuple(_mat(p3), [drow], None, np.eye(r), depth, r)
    return DilationResult("penta", (r1, r2, r3),
                          _embed_matrix(base_dim, depth, r), depth, dd, base_dim)


def pushforward(kind: str, *args, tol: float = 1e-9, window: Window | None = None):
    """Operator-level families: the two-parameter seven-tuple, its gamma5
    slice, the axis embedding, and the averaged triple with an isometry.

    Commutation of the result is checked, not assumed.
    """
    if kind == "pi":
        t1, t2 = (as_operator(a) for a in args)
        for o in (t1, t2):
            if op_norm(o) > 1.0 + 1e-8:
                raise ExpansiveError("pi needs a pair of contractions")
        t12 = t1 @ t2
        out = OperatorTuple("gamma7", (t1, t2, t12, t12, t1 @ t12, t12 @ t2,
                                       t1 @ t12 @ t2))
    elif kind == "pi_eta":
        tup, eta = args
        if not isinstance(tup, OperatorTuple) or tup.kind != "gamma7":
            raise DilateError("pi_eta takes a gamma7 tuple and eta")
        e = complex(eta)
        if abs(e) > 1.0 + 1e-12:
            raise DilateError("eta must lie in the closed unit disc")
        t = tup.ops
        out = OperatorTuple("gamma5", (t[0], t[2] + e * t[4], e * t[6],
                                       t[1] + e * t[3], e * t[5]))
    elif kind == "axis7":
        t1, t6, t7 = (as_operator(a) for a in args)
        z = Operator(np.zeros_like(t1.mat), bandwidth=0)
        out = OperatorTuple("gamma7", (t1, z, z, z, z, t6, t7))
    elif kind == "gamma3":
        t1, t2, v3 = (as_operator(a) for a in args)
        for o in (t1, t2):
            if op_norm(o) > 1.0 + 1e-8:
                raise ExpansiveError("gamma3 needs contractions in the first two slots")
        iso = (v3.H @ v3) - Operator(np.eye(v3.rows))
        iso_res = window.wnorm(iso) if window is not None \
            else float(np.linalg.norm(iso.mat, 2))
        if iso_res > 1e-8:
            raise DilateError(f"third member is not an isometry on the window: {iso_res:.3e}")
        out = OperatorTuple("tetra", ((1.0 / 3.0) * (t1 + t2 + v3),
                                      (1.0 / 3.0) * (t1 @ t2 + t2 @ v3 + v3 @ t1),
                                      t1 @ t2 @ v3))
    else:
        raise DilateError(f"unknown pushforward kind {kind!r}")
    worst = max((v for _, v in commutator_norms(out.ops, window)), default=0.0)
    if worst > tol * max(1.0, max(op_norm(o) for o in out.ops) ** 2):
        raise DilateError(f"pushforward result does not commute: {worst:.3e}")
    return out
