"""Defect operators, fundamental-equation solvers, rho-form evaluation and
the torus-sampled contraction condition chains.

The fundamental equations all have the shape D Y D = RHS with D the defect
operator of the tuple's distinguished contraction; the unique solution on the
defect space is recovered by the rank-cut pseudo-inverse of D.  Residuals and
comparisons are windowed so that truncation of the model space never poisons
an identity that holds in the infinite model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .opcore import (Operator, OperatorTuple, OpcoreError, as_operator, _mat,
                     numerical_radius, op_norm, spectral_radius,
                     commutator_norms)
from .report import CheckReport
from .spaces import Window


class SolveError(OpcoreError):
    pass


class ExpansiveError(OpcoreError):
    pass


@dataclass
class DefectData:
    """Defect operator of a contraction with its range data.

    D = (I - T*T)^(1/2); rank counts eigenvalues above the cutoff
    1e-8 * ||D||; is_projection records whether D^2 = D to 1e-9, the partial
    isometry signature.
    """

    D: Operator
    range_proj: Operator
    range_basis: np.ndarray
    rank: int
    is_projection: bool
    dvals: np.ndarray

    @property
    def host_dim(self) -> int:
        return self.D.rows

    def pinv(self) -> np.ndarray:
        if self.rank == 0:
            return np.zeros_like(self.D.mat)
        q = self.range_basis
        return (q / self.dvals) @ q.conj().T

    def compress(self, op) -> np.ndarray:
        """Defect-coordinate matrix Q* A Q."""
        q = self.range_basis
        return q.conj().T @ _mat(op) @ q


def defect(t, norm_tol: float = 1e-8, rank_tol: float | None = None) -> DefectData:
    op = as_operator(t)
    if not op.is_square():
        raise OpcoreError("defect operator needs a square matrix")
    nrm = op_norm(op)
    if nrm > 1.0 + norm_tol:
        raise ExpansiveError(f"not a contraction: norm {nrm:.6f}")
    g = np.eye(op.rows) - op.mat.conj().T @ op.mat
    g = (g + g.conj().T) / 2.0
    w, v = np.linalg.eigh(g)
    w = np.clip(w, 0.0, None)
    # Gram eigenvalues below roundoff would be inflated by the square root;
    # zero them before it (I - T*T carries ~eps absolute error)
    w[w < 64.0 * np.finfo(float).eps * max(1.0, w.max())] = 0.0
    dvals_all = np.sqrt(w)
    dmat = (v * dvals_all) @ v.conj().T
    dmat = (dmat + dmat.conj().T) / 2.0
    # D <= I for a contraction, so 1e-8 * max(1, ||D||) is an absolute cut
    cutoff = (rank_tol if rank_tol is not None
              else 1e-8 * max(dvals_all.max(), 1.0))
    keep = dvals_all > cutoff
    q = v[:, keep]
    proj = q @ q.conj().T
    d_op = Operator(dmat, bandwidth=0 if op.bandwidth == 0 else None)
    is_proj = bool(np.linalg.norm(dmat @ dmat - dmat, 2) <= 1e-9)
    return DefectData(D=d_op, range_proj=Operator(proj), range_basis=q,
                      rank=int(keep.sum()), is_projection=is_proj,
                      dvals=dvals_all[keep])


GAMMA7_NAMES = ("F1", "F2", "F3", "F4", "F5", "F6")
GAMMA5_NAMES = ("G1", "G2", "G1t", "G2t")


@dataclass
class FundamentalSet:
    """Solved fundamental operators, stored embedded on the host space and
    supported on the defect range."""

    kind: str
    ops: dict
    residuals: dict
    defect: DefectData
    trivial: bool = False

    def __getitem__(self, name: str) -> Operator:
        return self.ops[name]

    def scaled(self, name: str) -> Operator:
        """Accessor honoring the factor-2 bookkeeping of the five-operator
        family: the equations solve for G2 and G1t, consumers often need
        2*G2 and 2*G1t."""
        if name.startswith("2"):
            return 2.0 * self.ops[name[1:]]
        return self.ops[name]

    def on_defect(self, name: str) -> np.ndarray:
        return self.defect.compress(self.ops[name])

    def names(self):
        return tuple(self.ops.keys())


def _rhs_map(kind: str, tup: OperatorTuple) -> dict:
    t = [o.mat for o in tup.ops]
    if kind == "gamma7":
        t7 = t[6]
        return {f"F{i+1}": t[i] - t[5 - i].conj().T @ t7 for i in range(6)}
    if kind == "gamma5":
        s1, s2, s3, s1t, s2t = t
        return {
            "G1": s1 - s2t.conj().T @ s3,
            "G2t": s2t - s1.conj().T @ s3,
            "G2": 0.5 * (s2 - s1t.conj().T @ s3),
            "G1t": 0.5 * (s1t - s2.conj().T @ s3),
        }
    if kind == "sym":
        s, p = t
        return {"X": s - s.conj().T @ p}
    raise SolveError(f"no fundamental equations for kind {kind!r}")


def solve_fundamentals(kind: str, tup: OperatorTuple, tol: float = 1e-9,
                       window: Window | None = None,
                       commute_tol: float = 1e-9) -> FundamentalSet:
    """Solve every fundamental equation of the tuple's kind.

    Raises SolveError when a residual exceeds ``tol`` (the tuple either has
    an expansive distinguished member or the right-hand side leaves the
    defect space, so no solution exists on it).
    """
    if not isinstance(tup, OperatorTuple):
        tup = OperatorTuple(kind, tuple(tup))
    if tup.kind != kind:
        raise SolveError(f"kind {kind!r} does not match tuple kind {tup.kind!r}")
    worst_comm = max((v for _, v in commutator_norms(tup.ops, window)), default=0.0)
    if worst_comm > commute_tol * max(1.0, max(op_norm(o) for o in tup.ops) ** 2):
        raise SolveError(f"tuple does not commute on the window: {worst_comm:.3e}")
    pivot = {"gamma7": 6, "gamma5": 2, "sym": 1}[kind]
    dd = defect(tup.ops[pivot])
    rhs = _rhs_map(kind, tup)
    ops, residuals = {}, {}
    if dd.rank == 0:
        for name in rhs:
            ops[name] = Operator(np.zeros((tup.dim, tup.dim)), bandwidth=0)
            residuals[name] = 0.0
        return FundamentalSet(kind, ops, residuals, dd, trivial=True)
    dplus = dd.pinv()
    dmat = dd.D.mat
    for name, b in rhs.items():
        f = dplus @ b @ dplus
        res_mat = dmat @ f @ dmat - b
        if window is not None:
            res = window.wnorm(res_mat)
        else:
            res = float(np.linalg.norm(res_mat, 2))
        if res > tol:
            raise SolveError(
                f"fundamental equation {name} unsolvable on the defect space: "
                f"residual {res:.3e} > {tol:.1e}")
        ops[name] = Operator(f, bandwidth=None)
        residuals[name] = res
    return FundamentalSet(kind, ops, residuals, dd)


@dataclass
class RhoResult:
    op: Operator
    asym_residual: float


def rho(kind: str, args) -> RhoResult:
    """Hermitian positivity forms.

    sym:   2(I - P*P) - (S - S*P) - (S* - P*S)
    tetra: (I - T3*T3) - (T2*T2 - T1*T1) - (T2 - T1*T3) - (T2 - T1*T3)*
    """
    ops = [as_operator(a) for a in (args.ops if isinstance(args, OperatorTuple) else args)]
    if kind == "sym":
        if len(ops) != 2:
            raise OpcoreError("sym form takes (S, P)")
        s, p = (o.mat for o in ops)
        n = s.shape[0]
        out = 2.0 * (np.eye(n) - p.conj().T @ p) - (s - s.conj().T @ p) \
            - (s.conj().T - p.conj().T @ s)
    elif kind == "tetra":
        if len(ops) != 3:
            raise OpcoreError("tetra form takes (T1, T2, T3)")
        t1, t2, t3 = (o.mat for o in ops)
        n = t1.shape[0]
        re_part = t2 - t1.conj().T @ t3
        out = (np.eye(n) - t3.conj().T @ t3) - (t2.conj().T @ t2 - t1.conj().T @ t1) \
            - re_part - re_part.conj().T
    else:
        raise OpcoreError(f"unknown rho kind {kind!r}")
    asym = float(np.linalg.norm(out - out.conj().T, 2))
    sym_out = (out + out.conj().T) / 2.0
    return RhoResult(Operator(sym_out), asym)


def _min_eig(mat: np.ndarray, window: Window | None) -> float:
    if window is not None:
        return window.psd_min_eig(mat)
    h = (mat + mat.conj().T) / 2.0
    return float(np.linalg.eigvalsh(h).min())


def _windowed(op_mat: np.ndarray, window: Window | None) -> np.ndarray:
    if window is None:
        return op_mat
    w = window.projector.mat
    return w @ op_mat @ w


def chain_report(kind: str, tup: OperatorTuple, z_samples: int = 32,
                 tol: float = 1e-7, window: Window | None = None,
                 fset: FundamentalSet | None = None) -> CheckReport:
    """Necessary-condition chain sampled on the torus.

    Three condition groups per coordinate pair: positivity of the paired
    rho form (the two displayed orderings summed, which coincides with the
    sym form of the summed pair), spectral radius of the summed pair <= 2,
    and numerical radius of the solved fundamental combination <= 1.  Only
    the forward implication is tested; passing never certifies the
    contraction property.
    """
    if kind not in ("gamma7", "gamma5"):
        raise OpcoreError("chain_report handles gamma7 and gamma5 tuples")
    rep = CheckReport(name=f"chain-{kind}",
                      window_margin=None if window is None else window.margin)
    rep.notes.append("necessary direction only: failures disprove, passes do not certify")
    zs = np.exp(2j * np.pi * np.arange(z_samples) / z_samples)

    if kind == "gamma7":
        t = [o.mat for o in tup.ops]
        last = t[6]
        pairs = [(t[i], t[5 - i], f"{i+1},{6-i}") for i in range(3)]
        fnames = [("F1", "F6"), ("F2", "F5"), ("F3", "F4")]
    else:
        s1, s2, s3, s1t, s2t = (o.mat for o in tup.ops)
        last = s3
        pairs = [(s1, s2t, "1,2t"), (0.5 * s2, 0.5 * s1t, "2,1t")]
        fnames = [("G1", "G2t"), ("G2", "G1t")]

    if fset is None:
        try:
            fset = solve_fundamentals(kind, tup, tol=max(tol, 1e-9), window=window)
        except (SolveError, ExpansiveError) as exc:
            rep.add("fundamental-solvability", np.inf, tol, ok=False)
            rep.notes.append(f"solve failed: {exc}")
            fset = None
    if fset is not None:
        rep.add("fundamental-solvability",
                max(fset.residuals.values(), default=0.0), max(tol, 1e-9))

    rho_min = np.inf
    rad_max, omega_max = 0.0, 0.0
    for (a, b, tag), names in zip(pairs, fnames):
        p_rho, p_rad, p_om = np.inf, 0.0, 0.0
        for z in zs:
            r1 = rho("tetra", (Operator(a), Operator(z * b), Operator(z * last)))
            r2 = rho("tetra", (Operator(b), Operator(z * a), Operator(z * last)))
            p_rho = min(p_rho, _min_eig(r1.op.mat + r2.op.mat, window))
            sz = a + z * b
            p_rad = max(p_rad, spectral_radius(_windowed(sz, window)))
        rep.add(f"rho-pair-psd[{tag}]", max(0.0, -p_rho), tol)
        rep.add(f"radius<=2[{tag}]", max(0.0, p_rad - 2.0), tol)
        rho_min = min(rho_min, p_rho)
        rad_max = max(rad_max, p_rad)
        if fset is not None:
            fa = _windowed(fset[names[0]].mat, window)
            fb = _windowed(fset[names[1]].mat, window)
            for z in zs:
                p_om = max(p_om, numerical_radius(Operator(fa + z * fb)))
            rep.add(f"omega<=1[{tag}]", max(0.0, p_om - 1.0), tol)
            omega_max = max(omega_max, p_om)
    rep.margins = {
        "rho": None if rho_min == np.inf else float(rho_min),
        "radius": 2.0 - float(rad_max),
        "omega": None if fset is None else 1.0 - float(omega_max),
    }
    return rep
