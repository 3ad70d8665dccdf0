"""Dense complex-matrix kernel: operators, norms, square roots, radii,
kernels and joint eigenvalues of commuting families.

All quantities are computed for explicit finite matrices.  Operators carry an
optional ``bandwidth`` tag (how many basis levels of a graded model space the
operator can move a vector) which downstream truncation-window logic consumes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


class OpcoreError(ValueError):
    """Base error for kernel-level misuse."""


class NotHermitianError(OpcoreError):
    pass


class NegativeEigenvalueError(OpcoreError):
    pass


class NonCommutingError(OpcoreError):
    def __init__(self, worst: float):
        super().__init__(f"tuple is not commuting: worst commutator norm {worst:.3e}")
        self.worst = worst


def _combine_bandwidth(a, b, mode):
    if a is None or b is None:
        return None
    if mode == "sum":
        return a + b
    return max(a, b)


class Operator:
    """A bounded operator between finite-dimensional spaces, stored densely.

    ``bandwidth`` is metadata: the largest number of grading levels the
    operator can shift a vector by (0 for level-diagonal maps, 1 for a shift,
    None when unknown).  Arithmetic propagates it conservatively.
    """

    __slots__ = ("mat", "bandwidth")

    def __init__(self, mat, bandwidth=None):
        m = np.asarray(mat, dtype=complex)
        if m.ndim != 2:
            raise OpcoreError(f"operator entries must be a matrix, got ndim={m.ndim}")
        if m.shape[0] < 1 or m.shape[1] < 1:
            raise OpcoreError(f"operator dimensions must be positive, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise OpcoreError("operator entries must be finite")
        self.mat = m
        self.bandwidth = bandwidth

    @property
    def rows(self) -> int:
        return self.mat.shape[0]

    @property
    def cols(self) -> int:
        return self.mat.shape[1]

    @property
    def H(self) -> "Operator":
        return Operator(self.mat.conj().T, bandwidth=self.bandwidth)

    @classmethod
    def identity(cls, n: int) -> "Operator":
        return cls(np.eye(n), bandwidth=0)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None) -> "Operator":
        return cls(np.zeros((rows, cols if cols is not None else rows)), bandwidth=0)

    def __matmul__(self, other):
        o = as_operator(other)
        if self.cols != o.rows:
            raise OpcoreError(
                f"composition mismatch: {self.rows}x{self.cols} @ {o.rows}x{o.cols}"
            )
        return Operator(self.mat @ o.mat,
                        bandwidth=_combine_bandwidth(self.bandwidth, o.bandwidth, "sum"))

    def __add__(self, other):
        o = as_operator(other)
        if (self.rows, self.cols) != (o.rows, o.cols):
            raise OpcoreError("shape mismatch in sum")
        return Operator(self.mat + o.mat,
                        bandwidth=_combine_bandwidth(self.bandwidth, o.bandwidth, "max"))

    def __sub__(self, other):
        o = as_operator(other)
        if (self.rows, self.cols) != (o.rows, o.cols):
            raise OpcoreError("shape mismatch in difference")
        return Operator(self.mat - o.mat,
                        bandwidth=_combine_bandwidth(self.bandwidth, o.bandwidth, "max"))

    def __mul__(self, scalar):
        return Operator(self.mat * complex(scalar), bandwidth=self.bandwidth)

    __rmul__ = __mul__

    def __neg__(self):
        return Operator(-self.mat, bandwidth=self.bandwidth)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __repr__(self):
        return f"Operator({self.rows}x{self.cols}, bandwidth={self.bandwidth})"


def as_operator(x) -> Operator:
    if isinstance(x, Operator):
        return x
    return Operator(x)


def _mat(x) -> np.ndarray:
    return x.mat if isinstance(x, Operator) else np.asarray(x, dtype=complex)


ARITY = {"gamma7": 7, "gamma5": 5, "penta": 3, "tetra": 3, "sym": 2}


@dataclass
class OperatorTuple:
    """A kind-tagged family of square operators on a shared space."""

    kind: str
    ops: tuple

    def __post_init__(self):
        if self.kind not in ARITY:
            raise OpcoreError(f"unknown tuple kind {self.kind!r}")
        ops = tuple(as_operator(o) for o in self.ops)
        if len(ops) != ARITY[self.kind]:
            raise OpcoreError(
                f"kind {self.kind!r} needs {ARITY[self.kind]} operators, got {len(ops)}"
            )
        dim = ops[0].rows
        for o in ops:
            if not o.is_square() or o.rows != dim:
                raise OpcoreError("tuple members must be square on a common space")
        self.ops = ops

    @property
    def dim(self) -> int:
        return self.ops[0].rows

    def __iter__(self):
        return iter(self.ops)

    def __getitem__(self, i):
        return self.ops[i]

    def __len__(self):
        return len(self.ops)


@dataclass
class Subspace:
    """An orthonormal column family spanning a subspace of C^host_dim."""

    basis: np.ndarray
    host_dim: int
    tol: float = 0.0

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex)
        if b.ndim != 2 or b.shape[0] != self.host_dim:
            raise OpcoreError("basis must be host_dim x k")
        if b.shape[1] > 0:
            gram = b.conj().T @ b
            if np.abs(gram - np.eye(b.shape[1])).max() > 1e-12:
                raise OpcoreError("basis columns are not orthonormal to 1e-12")
        self.basis = b

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> Operator:
        return Operator(self.basis @ self.basis.conj().T, bandwidth=None)


def op_norm(a) -> float:
    """Largest singular value."""
    m = _mat(a)
    if m.size == 0:
        raise OpcoreError("dimension-zero input")
    return float(np.linalg.norm(m, 2))


def herm_sqrt(h, herm_tol: float = 1e-10, neg_clamp: float = 1e-10) -> Operator:
    """Principal square root of a PSD Hermitian matrix.

    Eigenvalues in [-neg_clamp, 0) are clamped to zero; anything lower is an
    error (the input is then genuinely indefinite, not just noisy).
    """
    a = as_operator(h)
    if not a.is_square():
        raise OpcoreError("square root needs a square matrix")
    m = a.mat
    asym = np.linalg.norm(m - m.conj().T, 2)
    if asym > herm_tol:
        raise NotHermitianError(f"input is not Hermitian: asymmetry {asym:.3e}")
    sym = (m + m.conj().T) / 2.0
    w, v = np.linalg.eigh(sym)
    if w.min() < -neg_clamp:
        raise NegativeEigenvalueError(
            f"eigenvalue {w.min():.6e} below the clamp window -{neg_clamp:.1e}"
        )
    w = np.clip(w, 0.0, None)
    s = (v * np.sqrt(w)) @ v.conj().T
    s = (s + s.conj().T) / 2.0
    bw = a.bandwidth if a.bandwidth == 0 else None
    return Operator(s, bandwidth=bw)


def spectral_radius(a) -> float:
    m = _mat(a)
    if m.shape[0] != m.shape[1]:
        raise OpcoreError("spectral radius needs a square matrix")
    return float(np.abs(np.linalg.eigvals(m)).max())


def _theta_profile(m: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """lambda_max of Re(e^{i theta} M) for a batch of angles."""
    out = np.empty(len(thetas))
    mh = m.conj().T
    chunk = 2048
    for lo in range(0, len(thetas), chunk):
        ph = np.exp(1j * thetas[lo:lo + chunk])
        stack = 0.5 * (ph[:, None, None] * m + np.conj(ph)[:, None, None] * mh)
        out[lo:lo + chunk] = np.linalg.eigvalsh(stack)[:, -1]
    return out


NR_COARSE_SAMPLES = 720


def _golden_max(f, lo: float, hi: float, theta_tol: float = 1e-10) -> float:
    """Golden-section maximization of a scalar profile on [lo, hi]."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = f(c), f(d)
    best = max(fc, fd)
    while (hi - lo) > theta_tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = f(d)
        best = max(best, fc, fd)
    return best


def numerical_radius(a, tol: float = 1e-8) -> float:
    """max over theta of lambda_max((e^{i theta}A + e^{-i theta}A*)/2).

    Coarse 720-point sweep, a short zoom around every near-tie bracket, then
    golden-section refinement to 1e-10 in theta; the profile is a max of
    sinusoids of amplitude <= omega(A), so refinement never overshoots.
    """
    op = as_operator(a)
    if not op.is_square():
        raise OpcoreError("numerical radius needs a square matrix")
    m = op.mat
    scale = op_norm(m)
    if scale == 0.0:
        return 0.0
    thetas = np.linspace(0.0, 2.0 * np.pi, NR_COARSE_SAMPLES, endpoint=False)
    vals = _theta_profile(m, thetas)
    best = vals.max()
    step = 2.0 * np.pi / NR_COARSE_SAMPLES
    cut = best - max(1e-5 * scale, 10.0 * tol)
    hot = np.nonzero(vals >= cut)[0]
    # contiguous runs of hot indices (cyclically) -> refinement brackets
    brackets = []
    if len(hot) == NR_COARSE_SAMPLES:
        brackets.append((0.0, 2.0 * np.pi))
    else:
        gaps = np.nonzero(np.diff(hot) > 1)[0]
        runs = np.split(hot, gaps + 1)
        if len(runs) > 1 and hot[0] == 0 and hot[-1] == NR_COARSE_SAMPLES - 1:
            runs[0] = np.concatenate([runs[-1] - NR_COARSE_SAMPLES, runs[0]])
            runs = runs[:-1]
        for run in runs:
            brackets.append((step * run[0] - step, step * run[-1] + step))

    def profile(theta):
        return float(_theta_profile(m, np.array([theta]))[0])

    for lo, hi in brackets:
        for _ in range(2):
            grid = np.linspace(lo, hi, 17)
            gv = _theta_profile(m, grid)
            k = int(gv.argmax())
            best = max(best, float(gv.max()))
            w = (hi - lo) / 8.0
            lo, hi = grid[k] - w, grid[k] + w
        best = max(best, _golden_max(profile, lo, hi))
    return float(best)


def kernel_basis(a, tol: float | None = None) -> Subspace:
    """Orthonormal basis of the numerical kernel via SVD.

    Singular values below ``tol`` count as zero; the default cutoff is
    1e-8 * op_norm(A).
    """
    m = _mat(a)
    if tol is not None and tol <= 0:
        raise OpcoreError("tol must be positive")
    if not np.any(m):
        return Subspace(np.eye(m.shape[1]), m.shape[1], tol=tol or 0.0)
    _, s, vh = np.linalg.svd(m)
    if tol is None:
        tol = 1e-8 * (s[0] if len(s) else 1.0)
    rank = int(np.sum(s >= tol))
    basis = vh[rank:].conj().T
    return Subspace(basis, m.shape[1], tol=tol)


def commutator_norms(ops, window=None) -> list:
    """Pairwise commutator norms ||[A_i, A_j]|| (optionally right-windowed)."""
    mats = [_mat(o) for o in ops]
    out = []
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            c = mats[i] @ mats[j] - mats[j] @ mats[i]
            if window is not None:
                c = c @ window.projector.mat
            out.append(((i, j), float(np.linalg.norm(c, 2))))
    return out


def _cluster(values: np.ndarray, tol: float) -> list:
    """Greedy clustering of complex values into tol-connected components."""
    n = len(values)
    labels = -np.ones(n, dtype=int)
    cur = 0
    for i in range(n):
        if labels[i] >= 0:
            continue
        stack = [i]
        labels[i] = cur
        while stack:
            k = stack.pop()
            near = np.nonzero(np.abs(values - values[k]) <= tol)[0]
            for j in near:
                if labels[j] < 0:
                    labels[j] = cur
                    stack.append(j)
        cur += 1
    return [np.nonzero(labels == c)[0] for c in range(cur)]


def joint_eigs(tup, commute_tol: float = 1e-9, cluster_tol: float = 1e-7):
    """Joint eigenvalue tuples of a commuting family.

    Splits recursively along spectral clusters of random linear combinations;
    spectral subspaces of a combination are invariant for every member, so
    each split is exact for commuting input.  For finite commuting matrices
    the result is the set of simultaneous-triangularization diagonals.
    """
    ops = list(tup.ops) if isinstance(tup, OperatorTuple) else list(tup)
    mats = [_mat(o) for o in ops]
    n = mats[0].shape[0]
    for m in mats:
        if m.shape != (n, n):
            raise OpcoreError("joint_eigs needs square matrices of equal size")
    worst = max((v for _, v in commutator_norms(mats)), default=0.0)
    scale = max(1.0, max(op_norm(m) for m in mats) ** 2)
    if worst > commute_tol * scale:
        raise NonCommutingError(worst)

    rng = np.random.default_rng(20260808)

    def recurse(blocks):
        d = blocks[0].shape[0]
        if d == 1:
            return [tuple(complex(b[0, 0]) for b in blocks)]
        for _ in range(4):
            c = rng.standard_normal(len(blocks)) + 1j * rng.standard_normal(len(blocks))
            m = sum(ci * bi for ci, bi in zip(c, blocks))
            ev = np.linalg.eigvals(m)
            clusters = _cluster(ev, cluster_tol * max(1.0, np.abs(ev).max()))
            if len(clusters) > 1:
                target = ev[clusters[0]]
                center = target.mean()
                radius = np.abs(target - center).max() + 0.5 * cluster_tol
                t, z, sdim = scipy.linalg.schur(
                    m, output="complex", sort=lambda x: abs(x - center) <= radius)
                rotated = [z.conj().T @ b @ z for b in blocks]
                top = [r[:sdim, :sdim] for r in rotated]
                bottom = [r[sdim:, sdim:] for r in rotated]
                return recurse(top) + recurse(bottom)
        # inseparable: every member is scalar + joint nilpotent on this block
        return [tuple(complex(np.trace(b)) / d for b in blocks)] * d

    return recurse(mats)


def restrict(op, subspace: Subspace) -> Operator:
    """Compression Q* A Q of an operator to a subspace."""
    q = subspace.basis
    return Operator(q.conj().T @ _mat(op) @ q)
