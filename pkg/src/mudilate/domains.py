"""Membership and boundary predicates for the mu-quotient domains.

Coordinates follow the symmetrized-minor maps of the defining 2x2 / 3x3
matrices: seven coordinates for the three-scalar-block domain (gamma7), five
for the (1,2)-block domain (gamma5), three for the tetrablock and for the
pentablock.  The structured singular value mu_E drives the quotient-domain
constraints; the tetrablock axis criterion and closed-form certificate
decodings cover the families with exact realizations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .opcore import _mat, op_norm, spectral_radius
from .report import MembershipReport


class DomainError(ValueError):
    pass


class PoleOnTorusError(DomainError):
    pass


COORD_LEN = {"gamma7": 7, "gamma5": 5, "tetra": 3, "penta": 3}


@dataclass(frozen=True)
class BlockStructure:
    """Repeated-scalar block-diagonal structure diag(z_1 I_{r_1}, ..., z_s I_{r_s})."""

    n: int
    s: int
    r: tuple

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(int(x) for x in self.r))
        if len(self.r) != self.s or any(x < 1 for x in self.r):
            raise DomainError("need s positive block sizes")
        if sum(self.r) != self.n:
            raise DomainError(f"block sizes {self.r} must sum to n={self.n}")
        if self.s > self.n:
            raise DomainError("s cannot exceed n")

    @classmethod
    def parse(cls, text: str) -> "BlockStructure":
        parts = [int(p) for p in text.split(",")]
        if len(parts) < 3:
            raise DomainError("structure format is n,s,r1,...,rs")
        return cls(parts[0], parts[1], tuple(parts[2:]))


E311 = BlockStructure(3, 3, (1, 1, 1))
E312 = BlockStructure(3, 2, (1, 2))
E211 = BlockStructure(2, 2, (1, 1))


@dataclass(frozen=True)
class DomainPoint:
    kind: str
    coords: tuple

    def __post_init__(self):
        if self.kind not in COORD_LEN:
            raise DomainError(f"unknown domain kind {self.kind!r}")
        c = tuple(complex(z) for z in self.coords)
        if len(c) != COORD_LEN[self.kind]:
            raise DomainError(
                f"kind {self.kind!r} needs {COORD_LEN[self.kind]} coordinates, got {len(c)}"
            )
        if not all(np.isfinite(z.real) and np.isfinite(z.imag) for z in c):
            raise DomainError("coordinates must be finite")
        object.__setattr__(self, "coords", c)


@dataclass
class Certificate:
    """A matrix realizing (approximately) the symmetrized coordinates."""

    A: np.ndarray
    residual: float
    constraint_value: float


# ---------------------------------------------------------------------------
# coordinate maps of the defining matrices


def _minor(a, i, j):
    return a[i, i] * a[j, j] - a[i, j] * a[j, i]


def gamma7_coords(a) -> tuple:
    a = np.asarray(a, dtype=complex)
    return (a[0, 0], a[1, 1], _minor(a, 0, 1), a[2, 2], _minor(a, 0, 2),
            _minor(a, 1, 2), np.linalg.det(a))


def gamma5_coords(a) -> tuple:
    a = np.asarray(a, dtype=complex)
    return (a[0, 0], _minor(a, 0, 1) + _minor(a, 0, 2), np.linalg.det(a),
            a[1, 1] + a[2, 2], _minor(a, 1, 2))


def tetra_coords(a) -> tuple:
    a = np.asarray(a, dtype=complex)
    return (a[0, 0], a[1, 1], np.linalg.det(a))


def penta_coords(a) -> tuple:
    a = np.asarray(a, dtype=complex)
    return (a[1, 0], a[0, 0] + a[1, 1], np.linalg.det(a))


COORD_MAP = {"gamma7": gamma7_coords, "gamma5": gamma5_coords,
             "tetra": tetra_coords, "penta": penta_coords}
CERT_SIZE = {"gamma7": 3, "gamma5": 3, "tetra": 2, "penta": 2}


def point_pi(x, y) -> DomainPoint:
    """Two-parameter gamma7 family realized by diag(x, y, xy)."""
    return DomainPoint("gamma7", (x, y, x * y, x * y, x * x * y, x * y * y,
                                  x * x * y * y))


def point_pi_eta(p: DomainPoint, eta) -> DomainPoint:
    """gamma7 -> gamma5 slice map at parameter eta in the closed disc."""
    if p.kind != "gamma7":
        raise DomainError("pi_eta maps gamma7 points")
    x = p.coords
    e = complex(eta)
    return DomainPoint("gamma5", (x[0], x[2] + e * x[4], e * x[6],
                                  x[1] + e * x[3], e * x[5]))


# ---------------------------------------------------------------------------
# structured singular value


def _reduced_torus(sfree: int, pts: int) -> np.ndarray:
    """Torus sample with the first coordinate pinned to 1 (global phase is
    immaterial: scaling every block by a unimodular factor scales the
    spectrum by that factor and leaves the spectral radius unchanged)."""
    if sfree == 0:
        return np.ones((1, 1), dtype=complex)
    axes = [np.exp(2j * np.pi * np.arange(pts) / pts)] * sfree
    mesh = np.meshgrid(*axes, indexing="ij")
    zs = np.stack([m.ravel() for m in mesh], axis=1)
    return np.concatenate([np.ones((len(zs), 1), dtype=complex), zs], axis=1)


def _structure_radius(a: np.ndarray, structure: BlockStructure, zs: np.ndarray) -> np.ndarray:
    """Spectral radius of A diag(z_1 I_{r_1}, ...) for a batch of z rows."""
    diag = np.repeat(zs, structure.r, axis=1)
    stack = a[None, :, :] * diag[:, None, :]
    return np.abs(np.linalg.eigvals(stack)).max(axis=1)


def mu_E(a, structure: BlockStructure, tol: float = 1e-4) -> float:
    """Structured singular value for a repeated-scalar block structure.

    mu(A) = 1 / inf{||X||: det(I - AX) = 0, X in E}, with mu = 0 when no X
    makes I - AX singular.  By homogeneity of X -> AX this equals the maximum
    of the spectral radius of A diag(z) over the unit torus, which the
    search computes on a doubling grid plus a local zoom.
    """
    m = _mat(a)
    if m.shape != (structure.n, structure.n):
        raise DomainError(f"matrix shape {m.shape} does not match structure n={structure.n}")
    if not (0.0 < tol <= 1e-2):
        raise DomainError("tol must lie in (0, 1e-2]")
    if op_norm(m) == 0.0:
        return 0.0
    sfree = structure.s - 1
    if sfree == 0:
        return spectral_radius(m)

    base = {1: 64, 2: 24}.get(sfree, 8)
    pts = base
    prev = None
    best = 0.0
    arg = np.zeros(sfree)
    while True:
        zs = _reduced_torus(sfree, pts)
        vals = _structure_radius(m, structure, zs)
        k = int(vals.argmax())
        if vals[k] > best:
            best = float(vals[k])
            arg = np.angle(zs[k, 1:])
        if prev is not None and abs(best - prev) <= 0.25 * tol:
            break
        if pts ** sfree >= 2 ** 17:
            break
        prev = best
        pts *= 2

    width = 2.0 * np.pi / pts
    for _ in range(3):
        axes = [np.linspace(c - width, c + width, 9) for c in arg]
        mesh = np.meshgrid(*axes, indexing="ij")
        ang = np.stack([g.ravel() for g in mesh], axis=1)
        zs = np.concatenate(
            [np.ones((len(ang), 1), dtype=complex), np.exp(1j * ang)], axis=1)
        vals = _structure_radius(m, structure, zs)
        k = int(vals.argmax())
        if vals[k] > best:
            best = float(vals[k])
            arg = ang[k]
        width /= 4.0
    return best


def mu_for_kind(kind: str):
    return {"gamma7": E311, "gamma5": E312, "tetra": E211}.get(kind)


# ---------------------------------------------------------------------------
# rational sup-norm criteria


@dataclass
class SupResult:
    value: float
    grid: int
    z: complex
    w: complex


def psi3_supnorm(x, grid: int = 64) -> SupResult:
    """Sup over the two-torus of the degree-(1,1) rational symbol attached to
    a seven-coordinate point: |x4 - z x5 - w x6 + z w x7| / |1 - z x1 - w x2 + z w x3|.
    """
    if isinstance(x, DomainPoint):
        if x.kind != "gamma7":
            raise DomainError("the two-variable symbol takes gamma7 points")
        c = x.coords
    else:
        c = tuple(complex(v) for v in x)
        if len(c) != 7:
            raise DomainError("need 7 coordinates")
    x1, x2, x3, x4, x5, x6, x7 = c

    def evaluate(zv, wv):
        z, w = np.meshgrid(zv, wv, indexing="ij")
        num = x4 - z * x5 - w * x6 + z * w * x7
        den = 1.0 - z * x1 - w * x2 + z * w * x3
        if np.abs(den).min() < 1e-12:
            raise PoleOnTorusError("denominator vanishes on the torus sample")
        vals = np.abs(num / den)
        k = np.unravel_index(vals.argmax(), vals.shape)
        return float(vals[k[0], k[1]]), complex(z[k]), complex(w[k])

    # half-step offset keeps exact poles at roots of unity off the sample
    ang = 2.0 * np.pi * (np.arange(grid) + 0.5) / grid
    zv = np.exp(1j * ang)
    best, zb, wb = evaluate(zv, zv)
    step = 2.0 * np.pi / grid
    loc = np.linspace(-step, step, 17)
    zv = zb * np.exp(1j * loc)
    wv = wb * np.exp(1j * loc)
    v, zb, wb = evaluate(zv, wv)
    if v > best:
        best = v
    return SupResult(best, grid, zb, wb)


def _tetra_sup(x1, x2, x3, grid: int = 512):
    """sup over the torus of |x2 - z x3| / |1 - x1 z|, with a removable
    0/0 guard for unimodular x1.  None when a genuine pole sits on a sample."""
    ang = 2.0 * np.pi * (np.arange(grid) + 0.5) / grid
    z = np.exp(1j * ang)
    num = np.abs(x2 - z * x3)
    den = np.abs(1.0 - x1 * z)
    tiny = den < 1e-12
    if tiny.any():
        bad = tiny & (num > 1e-9)
        if bad.any():
            return None
        num, den = num[~tiny], den[~tiny]
    if len(den) == 0:
        return None
    return float((num / den).max())


# ---------------------------------------------------------------------------
# boundary predicates


def on_K(p: DomainPoint, tol: float = 1e-6) -> tuple:
    x = p.coords
    res = max(abs(abs(x[6]) - 1.0),
              abs(x[0] - np.conj(x[5]) * x[6]),
              abs(x[2] - np.conj(x[3]) * x[6]),
              abs(x[4] - np.conj(x[1]) * x[6]))
    return res <= tol, res


def on_K1(p: DomainPoint, tol: float = 1e-6) -> tuple:
    x1, x2, x3, y1, y2 = p.coords
    res = max(abs(abs(x3) - 1.0),
              abs(x1 - np.conj(y2) * x3),
              abs(x2 - np.conj(y1) * x3))
    return res <= tol, res


def on_K0(p: DomainPoint, tol: float = 1e-6) -> tuple:
    x1, x2, x3 = p.coords
    res = max(max(0.0, abs(x2) - 2.0),
              abs(abs(x3) - 1.0),
              abs(x2 - np.conj(x2) * x3),
              abs(abs(x1) - np.sqrt(max(0.0, 1.0 - abs(x2) ** 2 / 4.0))))
    return res <= tol, res


BOUNDARY_PREDICATE = {"gamma7": on_K, "gamma5": on_K1, "penta": on_K0}


# ---------------------------------------------------------------------------
# certificate search


def _coord_residual(kind, a, target):
    got = COORD_MAP[kind](a)
    return max(abs(g - t) for g, t in zip(got, target))


def _min_norm_penta(x1, x2, x3, budget):
    """Minimal operator norm over all 2x2 matrices with the prescribed
    lower-left entry, trace and determinant.  The coordinate constraints kill
    all but two real degrees of freedom, so the search is exhaustive."""
    if abs(x1) < 1e-14:
        roots = np.roots([1.0, -x2, x3])
        a = roots[0]
        return np.array([[a, 0.0], [0.0, x2 - a]]), 0.0

    def build(v):
        a = complex(v[0], v[1])
        d = x2 - a
        b = (a * d - x3) / x1
        return np.array([[a, b], [x1, d]])

    def objective(v):
        return np.linalg.norm(build(v), 2)

    # coarse prescan of the free entry, then polish from the best cells;
    # the parametrization is exhaustive, so the minimum decides membership
    ticks = np.linspace(-1.5, 1.5, 11)
    grid = [np.array([re, im]) for re in ticks for im in ticks]
    grid.sort(key=objective)
    starts = grid[:4] + [np.array([x2.real / 2, x2.imag / 2])]
    best_v, best = None, np.inf
    for s in starts:
        r = scipy.optimize.minimize(objective, s, method="Nelder-Mead",
                                    options={"maxiter": budget, "xatol": 1e-10,
                                             "fatol": 1e-12})
        if r.fun < best:
            best, best_v = r.fun, r.x
    return build(best_v), 0.0


def _min_norm_tetra(x1, x2, x3, budget):
    q = x1 * x2 - x3
    if abs(q) < 1e-14:
        return np.array([[x1, 0.0], [0.0, x2]]), 0.0

    def build(v):
        t = complex(v[0], v[1])
        if abs(t) < 1e-9:
            t = 1e-9
        return np.array([[x1, t], [q / t, x2]])

    def objective(v):
        return np.linalg.norm(build(v), 2)

    best_v, best = None, np.inf
    root = np.sqrt(abs(q))
    for phase in np.exp(1j * np.linspace(0, 2 * np.pi, 6, endpoint=False)):
        s = root * phase
        r = scipy.optimize.minimize(objective, np.array([s.real, s.imag]),
                                    method="Nelder-Mead",
                                    options={"maxiter": budget, "xatol": 1e-10,
                                             "fatol": 1e-12})
        if r.fun < best:
            best, best_v = r.fun, r.x
    return build(best_v), 0.0


def _diag_decode(point: DomainPoint, tol: float = 1e-8):
    """Closed-form diagonal certificate when the coordinates split."""
    x = point.coords
    if point.kind == "gamma7":
        p, q, r = x[0], x[1], x[3]
        cand = np.diag([p, q, r])
        if _coord_residual("gamma7", cand, x) <= tol:
            return cand
    elif point.kind == "gamma5":
        x1, x2, x3, y1, y2 = x
        if abs(x2 - x1 * y1) <= tol and abs(x3 - x1 * y2) <= tol:
            roots = np.roots([1.0, -y1, y2])
            cand = np.diag([x1, roots[0], roots[1]])
            if _coord_residual("gamma5", cand, x) <= tol:
                return cand
    return None


def _lsq_certificate(point: DomainPoint, budget, starts, rng):
    kind = point.kind
    size = CERT_SIZE[kind]
    target = np.array(point.coords)
    structure = mu_for_kind(kind)
    coarse = _reduced_torus(structure.s - 1, 16)

    def unpack(v):
        half = size * size
        return (v[:half] + 1j * v[half:]).reshape(size, size)

    def resid(v):
        a = unpack(v)
        diff = np.array(COORD_MAP[kind](a)) - target
        mu = _structure_radius(a, structure, coarse).max()
        pen = 4.0 * max(0.0, mu - 1.0)
        return np.concatenate([diff.view(float), [pen]])

    best, best_r = None, np.inf
    init_list = []
    d = _diag_decode(point, tol=1e-3)
    if d is not None:
        init_list.append(d)
    init_list.append(np.diag(target[:size]))
    while len(init_list) < starts:
        init_list.append(0.5 * (rng.standard_normal((size, size)) +
                                1j * rng.standard_normal((size, size))))
    for a0 in init_list:
        v0 = np.concatenate([a0.real.reshape(-1), a0.imag.reshape(-1)])
        sol = scipy.optimize.least_squares(resid, v0, method="trf",
                                           max_nfev=budget, xtol=1e-14, ftol=1e-14)
        a = unpack(sol.x)
        r = _coord_residual(kind, a, point.coords)
        if r < best_r:
            best, best_r = a, r
    return best


def certificate_search(point: DomainPoint, budget: int = 400, starts: int = 8,
                       seed: int = 20260808) -> Certificate:
    """Search for a defining matrix realizing the point's coordinates.

    Always returns the best certificate found; a large residual means the
    search failed and no membership conclusion should be drawn from it.
    """
    if budget < 1:
        raise DomainError("budget must be positive")
    kind = point.kind
    x = point.coords
    if kind == "penta":
        a, _ = _min_norm_penta(*x, budget)
        return Certificate(a, _coord_residual(kind, a, x), float(np.linalg.norm(a, 2)))
    if kind == "tetra":
        a, _ = _min_norm_tetra(*x, budget)
        return Certificate(a, _coord_residual(kind, a, x), float(np.linalg.norm(a, 2)))

    d = _diag_decode(point)
    if d is not None:
        mu = float(np.abs(np.diag(d)).max())
        return Certificate(d, _coord_residual(kind, d, x), mu)
    rng = np.random.default_rng(seed)
    a = _lsq_certificate(point, budget, starts, rng)
    mu = mu_E(a, mu_for_kind(kind), tol=1e-4)
    return Certificate(a, _coord_residual(kind, a, x), mu)


# ---------------------------------------------------------------------------
# membership


def _verdict_from_constraint(c: float, tol: float) -> str:
    return "outside" if c > 1.0 + tol else "inside"


def membership(point: DomainPoint, tol: float = 1e-6) -> MembershipReport:
    """Verdict inside / boundary / outside / unknown with the sub-criteria.

    "inside" means membership in the closed domain; "boundary" upgrades it
    when the point also lies on the distinguished-boundary set of its kind.
    gamma7 and gamma5 decide through exact decodings (diagonal certificates,
    the axis criterion) and otherwise fall back to a certificate search whose
    failure yields "unknown", never a disproof.
    """
    kind = point.kind
    rep = MembershipReport(kind=kind, verdict="unknown")
    rep.meta["coords"] = [[z.real, z.imag] for z in point.coords]

    bp = BOUNDARY_PREDICATE.get(kind)
    on_boundary = False
    if bp is not None:
        on_boundary, bres = bp(point, tol)
        rep.add("distinguished-boundary", bres, tol, ok=True)

    if kind == "tetra":
        x1, x2, x3 = point.coords
        entry_bound = max(abs(x1), abs(x2), abs(x3))
        rep.add("coordinate-bounds", max(0.0, entry_bound - 1.0), tol)
        if entry_bound > 1.0 + tol:
            rep.verdict = "outside"
            return rep
        sup = _tetra_sup(x1, x2, x3)
        if sup is None:
            rep.add("axis-sup", np.inf, 1.0 + tol, ok=False)
            rep.verdict = "outside"
            return rep
        rep.add("axis-sup", sup, 1.0 + tol)
        rep.verdict = _verdict_from_constraint(sup, tol)
        return rep

    if kind == "penta":
        cert = certificate_search(point)
        rep.add("certificate-residual", cert.residual, 1e-6)
        rep.add("certificate-norm", max(0.0, cert.constraint_value - 1.0), tol)
        rep.meta["certificate_norm"] = cert.constraint_value
        if cert.residual <= 1e-6:
            rep.verdict = _verdict_from_constraint(cert.constraint_value, tol)
            if on_boundary and rep.verdict != "outside":
                rep.verdict = "boundary"
        return rep

    # gamma7 / gamma5
    d = _diag_decode(point)
    if d is not None:
        c = float(np.abs(np.diag(d)).max())
        rep.meta["decode"] = "diagonal"
        rep.add("diagonal-certificate", _coord_residual(kind, d, point.coords), 1e-8)
        rep.add("constraint", max(0.0, c - 1.0), tol)
        rep.verdict = _verdict_from_constraint(c, tol)
        if on_boundary and rep.verdict != "outside":
            rep.verdict = "boundary"
        return rep

    if kind == "gamma7":
        x = point.coords
        axis_mass = max(abs(x[i]) for i in (1, 2, 3, 4))
        if axis_mass <= 1e-8:
            sub = membership(DomainPoint("tetra", (x[0], x[5], x[6])), tol)
            rep.items.extend(sub.items)
            rep.meta["decode"] = "axis"
            rep.verdict = sub.verdict
            if on_boundary and rep.verdict not in ("outside", "unknown"):
                rep.verdict = "boundary"
            return rep

    cert = certificate_search(point)
    rep.meta["decode"] = "search"
    rep.meta["certificate_mu"] = cert.constraint_value
    rep.add("certificate-residual", cert.residual, 1e-6, ok=True)
    if cert.residual <= 1e-6 and cert.constraint_value <= 1.0 + max(tol, 1e-6):
        rep.verdict = "boundary" if on_boundary else "inside"
    else:
        rep.verdict = "unknown"
    return rep
