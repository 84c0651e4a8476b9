"""Eigencurves of phi+, pencil checks, membership tests and separation tools."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg
from scipy.optimize import linear_sum_assignment

from .errors import DomainError, NonMemberError
from .specfun import _check_n, gaussian_tail_moment_matrix, hermite_vector
from .spectral import CompactPoint, SpectralMatrix, opnorm, phi_a, phi_plus
from .symbols import Symbol1D, _triangle

INF = math.inf


# ---------------------------------------------------------------------------
# symmetric eigensolver
# ---------------------------------------------------------------------------

def _fix_signs(B):
    """Make the largest entry of each column positive (lowest index on ties)."""
    B = B.copy()
    for j in range(B.shape[1]):
        col = np.abs(B[:, j])
        k = int(np.argmax(col >= col.max() - 1e-12))
        if B[k, j] < 0:
            B[:, j] = -B[:, j]
    return B


def eigendecompose_spd(M, sym_tol=1e-10, max_sweeps=64):
    """Cyclic Jacobi eigendecomposition of a small symmetric matrix.

    Returns
    -------
    lam : ndarray
        Eigenvalues in ascending order.
    B : ndarray
        Orthogonal matrix with ``M = B diag(lam) B^T``; each column has its
        largest-modulus entry positive.
    """
    A = np.array(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DomainError("need a square matrix")
    if np.abs(A - A.T).max(initial=0.0) > sym_tol:
        raise DomainError("matrix is not symmetric")
    n = A.shape[0]
    A = 0.5 * (A + A.T)
    V = np.eye(n)
    scale = max(np.abs(A).max(initial=0.0), np.finfo(float).tiny)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.triu(A, 1) ** 2))
        if off <= 1e-17 * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.hypot(t, 1.0)
                s = t * c
                cp, cq = A[:, p].copy(), A[:, q].copy()
                A[:, p], A[:, q] = c * cp - s * cq, s * cp + c * cq
                rp, rq = A[p, :].copy(), A[q, :].copy()
                A[p, :], A[q, :] = c * rp - s * rq, s * rp + c * rq
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p], V[:, q] = c * vp - s * vq, s * vp + c * vq
    lam = np.diag(A).copy()
    order = np.argsort(lam, kind="stable")
    return lam[order], _fix_signs(V[:, order])


# ---------------------------------------------------------------------------
# eigencurves
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EigencurveTable:
    """Eigenvalues ``lambdas[j, k]`` of phi+(grid[k]) with continuous diagonalizers.

    ``diagonalizers[k]`` is orthogonal and ``diagonalizers[k]^T phi+(grid[k])
    diagonalizers[k] = diag(lambdas[:, k])``.  At ``t = +-inf`` the matrix
    is scalar, and the diagonalizer is copied from the nearest finite column.
    """

    n: int
    grid: np.ndarray
    lambdas: np.ndarray
    diagonalizers: np.ndarray
    continuity_defect: float

    def index(self, t):
        t = float(t)
        close = np.abs(self.grid - t) <= 1e-12 * max(1.0, abs(t)) if math.isfinite(t) else False
        hits = np.flatnonzero((self.grid == t) | close)
        if not len(hits):
            raise DomainError(f"t={t} is not on the eigencurve grid")
        return int(hits[0])

    def fiber(self, t):
        """``(lambdas, B)`` at a grid value ``t``."""
        k = self.index(t)
        return self.lambdas[:, k], self.diagonalizers[k]


def _align(prev, lam, B, cluster_tol):
    """Permute eigenvectors within near-degenerate clusters and flip signs to follow ``prev``.

    Eigenvalues stay sorted; inside a cluster they agree to ``cluster_tol``
    so any assignment of the cluster's vectors diagonalizes equally well.
    """
    O = prev.T @ B
    n = len(lam)
    perm = np.arange(n)
    start = 0
    while start < n:
        stop = start + 1
        while stop < n and lam[stop] - lam[stop - 1] <= cluster_tol:
            stop += 1
        if stop - start > 1:
            block = -np.abs(O[start:stop, start:stop])
            _, cols = linear_sum_assignment(block)
            perm[start:stop] = start + cols
        start = stop
    B = B[:, perm]
    signs = np.sign(np.einsum("ij,ij->j", prev, B))
    signs[signs == 0] = 1.0
    return B * signs


def eigencurves(n, grid, cluster_tol=1e-10):
    """Eigenvalue curves ``lambda_1(t) <= ... <= lambda_n(t)`` of phi+ on a grid.

    Parameters
    ----------
    n : int
    grid : sequence of float
        Strictly increasing, may start with ``-inf`` and end with ``+inf``,
        and must contain at least two finite values.
    cluster_tol : float
        Eigenvalues closer than this form a cluster whose eigenvectors may
        be reassigned to follow the previous column.
    """
    _check_n(n)
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or np.any(np.isnan(g)) or np.any(np.diff(g) <= 0):
        raise DomainError("grid must be strictly increasing")
    finite = np.flatnonzero(np.isfinite(g))
    if len(finite) < 2:
        raise DomainError("grid needs at least two finite points")

    lambdas = np.empty((n, len(g)))
    Bs = np.empty((len(g), n, n))
    defect = 0.0
    prev = None
    for k in finite:
        lam, B = eigendecompose_spd(phi_plus(n, g[k]).entries)
        if prev is not None:
            B = _align(prev, lam, B, cluster_tol)
            overlap = np.einsum("ij,ij->j", prev, B)
            defect = max(defect, float(np.max(1.0 - overlap)))
        lambdas[:, k] = lam
        Bs[k] = B
        prev = B
    for k in np.flatnonzero(~np.isfinite(g)):
        lambdas[:, k] = 1.0 if g[k] < 0 else 0.0
        Bs[k] = Bs[finite[0] if g[k] < 0 else finite[-1]]
    return EigencurveTable(n, g, lambdas, Bs, defect)


# ---------------------------------------------------------------------------
# matrix pencil
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PencilCheck:
    """Outcome of :func:`generalized_eigen_check`.

    ``residual`` is the largest ``|det(lam M_{-inf} - M_t)| / ||M_{-inf}||^n``
    over the candidates; ``spectrum_gap`` compares the pencil spectrum with
    the eigenvalues of phi+(t).
    """

    candidates: np.ndarray
    residual: float
    pencil_eigenvalues: np.ndarray
    spectrum_gap: float


def generalized_eigen_check(n, t, candidates=None):
    """Check that eigenvalues of phi+(t) solve ``det(lam M_{-inf} - M_t) = 0``."""
    _check_n(n)
    t = float(t)
    if not math.isfinite(t):
        raise DomainError("t must be finite")
    Mt = gaussian_tail_moment_matrix(n, t).entries
    Mall = gaussian_tail_moment_matrix(n, -INF).entries
    own = eigendecompose_spd(phi_plus(n, t).entries)[0]
    cand = own if candidates is None else np.atleast_1d(np.asarray(candidates, dtype=float))
    norm = opnorm(Mall) ** n
    residual = max(abs(np.linalg.det(lam * Mall - Mt)) / norm for lam in cand)
    pencil = np.sort(scipy.linalg.eigh(Mt, Mall, eigvals_only=True))
    gap = float(np.max(np.abs(pencil - own)))
    return PencilCheck(cand, float(residual), pencil, gap)


# ---------------------------------------------------------------------------
# pure states
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PureState:
    """Point evaluation functional on matrix functions over the compact strip.

    Use the constructors: ``interior(t1, t2, v)``, ``edge(side, t2)`` and
    ``fiber(t1, j, stratum)`` with ``j`` counted from 1.
    """

    tag: str
    t1: float = 0.0
    t2: float = 0.0
    v: np.ndarray | None = None
    side: str | None = None
    j: int | None = None
    stratum: str | None = None

    @classmethod
    def interior(cls, t1, t2, v):
        v = np.asarray(v, dtype=complex)
        if abs(np.linalg.norm(v) - 1.0) > 1e-12:
            raise DomainError("state vector must have unit norm")
        CompactPoint.interior(t1, t2)
        return cls("interior", float(t1), float(t2), v=v)

    @classmethod
    def edge(cls, side, t2):
        if side not in ("left", "right"):
            raise DomainError("side must be left or right")
        t1 = -INF if side == "left" else INF
        CompactPoint(side, t1, float(t2))
        return cls("edge", t1, float(t2), side=side)

    @classmethod
    def fiber(cls, t1, j, stratum):
        if stratum not in ("bottom", "top"):
            raise DomainError("stratum must be bottom or top")
        if int(j) < 1:
            raise DomainError("fiber index j counts from 1")
        t2 = 0.0 if stratum == "bottom" else INF
        return cls("fiber", float(t1), t2, j=int(j), stratum=stratum)

    @property
    def point(self):
        if self.tag == "interior":
            return CompactPoint.interior(self.t1, self.t2)
        if self.tag == "edge":
            return CompactPoint(self.side, self.t1, self.t2)
        return CompactPoint(self.stratum, self.t1, self.t2)


def _scalar_defect(M):
    M = np.asarray(M)
    c = float(np.trace(M)) / M.shape[0]
    return float(np.abs(M - c * np.eye(M.shape[0])).max()), c


def _fiber_basis(n, t1, eigtable=None):
    if eigtable is not None:
        try:
            return eigtable.fiber(t1)
        except DomainError:
            pass
    if not math.isfinite(t1):
        return np.full(n, 1.0 if t1 < 0 else 0.0), np.eye(n)
    return eigendecompose_spd(phi_plus(n, t1).entries)


def pure_state_eval(target: Symbol1D | Callable, state: PureState, n, eigtable=None,
                    scalar_tol=1e-8):
    """Evaluate a pure state on ``phi^a`` or on a matrix function of a CompactPoint.

    Interior states give ``<M v, v>``, edge states the scalar of ``M = c I``
    and fiber states ``v_j^T M v_j`` with ``v_j`` the j-th eigenvector of
    phi+(t1).
    """
    _check_n(n)
    if isinstance(target, Symbol1D):
        def matrix(p):
            return phi_a(target, n, p).entries
    else:
        def matrix(p):
            return np.asarray(target(p), dtype=float)

    M = matrix(state.point)
    if state.tag == "interior":
        v = state.v
        if len(v) != n:
            raise DomainError("state vector has the wrong length")
        return float(np.real(np.vdot(v, M @ v)))
    if state.tag == "edge":
        defect, c = _scalar_defect(M)
        if defect > scalar_tol:
            raise NonMemberError(
                f"value at {state.side} edge t2={state.t2} is not scalar (defect {defect:.3g})")
        return c
    if state.j > n:
        raise DomainError("fiber index exceeds n")
    _, B = _fiber_basis(n, state.t1, eigtable)
    vj = B[:, state.j - 1]
    return float(vj @ M @ vj)


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConditionRecord:
    name: str
    violation: float
    tolerance: float
    witness: object

    @property
    def passed(self):
        return self.violation <= self.tolerance


@dataclass(frozen=True)
class MembershipReport:
    verdict: bool
    records: tuple
    notes: tuple = field(default=())

    def failed(self):
        return [r for r in self.records if not r.passed]


def _report(records, notes=()):
    return MembershipReport(all(r.passed for r in records), tuple(records), tuple(notes))


def membership_frakC(samples, tol=1e-8, edge_tol=1e-2, jump_bound=0.5):
    """Test whether samples ``[(x2, M), ...]`` on ``[0, inf]`` look like a member of c.

    Conditions: the values at ``x2 = 0`` and ``x2 = inf`` are scalar
    multiples of ``I`` (within ``tol``); the nearest interior samples lie
    within ``edge_tol`` of them; consecutive samples differ by at most
    ``jump_bound`` in operator norm.
    """
    pts = sorted(((float(x), np.asarray(M, dtype=float)) for x, M in samples),
                 key=lambda s: s[0])
    if not pts or pts[0][0] != 0.0 or pts[-1][0] != INF:
        raise DomainError("samples must include x2 = 0 and x2 = +inf")
    records = []
    worst, where = max((_scalar_defect(M)[0], x) for x, M in (pts[0], pts[-1]))
    records.append(ConditionRecord("endpoint-scalar", worst, tol, where))
    if len(pts) > 2:
        gaps = [(opnorm(pts[1][1] - pts[0][1]), 0.0), (opnorm(pts[-2][1] - pts[-1][1]), INF)]
        worst, where = max(gaps)
        records.append(ConditionRecord("endpoint-approach", worst, edge_tol, where))
    jumps = [(opnorm(b[1] - a[1]), a[0]) for a, b in zip(pts, pts[1:])]
    worst, where = max(jumps)
    records.append(ConditionRecord("neighbor-jump", worst, jump_bound, where))
    return _report(records)


def membership_T(samples: Sequence[SpectralMatrix], eigtable=None, tol_f=1e-8,
                 delta_lambda=1e-3, L=10.0):
    """Test the edge and fiber conditions of the Toeplitz algebra on samples over the compact strip.

    Conditions: left and right edge values are scalar multiples of ``I``;
    on the bottom and top strata the matrix is diagonal in the eigenbasis
    of phi+(t1), and the fiber values ``f_j(t1) = v_j^T M v_j`` depend on
    ``lambda_j(t1)`` alone: any two pairs with
    ``|lambda - lambda'| <= delta_lambda`` satisfy
    ``|f - f'| <= tol_f + L delta_lambda``.
    """
    samples = list(samples)
    if not samples:
        raise DomainError("no samples")
    n = samples[0].n
    records, notes = [], []

    edge = [(_scalar_defect(s.entries)[0], s.point) for s in samples
            if s.point.canonical().kind in ("left", "right")]
    if not edge:
        raise DomainError("samples must cover the left and right edges")
    worst, where = max(edge, key=lambda e: e[0])
    records.append(ConditionRecord("edge-scalar", worst, tol_f, where))

    for stratum in ("bottom", "top"):
        rows = [s for s in samples
                if s.point.kind == stratum and math.isfinite(s.point.t1)]
        if not rows:
            raise DomainError(f"samples must cover the {stratum} stratum")
        pairs, off = [], (0.0, None)
        if all(_scalar_defect(s.entries)[0] <= tol_f for s in rows):
            notes.append(f"{stratum}: scalar on every sample, fiber states degenerate")
        for s in rows:
            lam, B = _fiber_basis(n, s.point.t1, eigtable)
            D = B.T @ s.entries @ B
            d = float(np.abs(D - np.diag(np.diag(D))).max())
            if d > off[0]:
                off = (d, s.point)
            pairs.extend(zip(lam, np.diag(D), [s.point] * n))
        records.append(ConditionRecord(f"{stratum}-fiber-diagonal", off[0], tol_f, off[1]))

        pairs.sort(key=lambda p: p[0])
        lam = np.array([p[0] for p in pairs])
        f = np.array([p[1] for p in pairs])
        worst, where = 0.0, None
        for i in range(len(pairs)):
            k = np.searchsorted(lam, lam[i] + delta_lambda, side="right")
            if k > i + 1:
                d = float(np.abs(f[i + 1:k] - f[i]).max())
                if d > worst:
                    worst, where = d, pairs[i][2]
        records.append(ConditionRecord(f"{stratum}-single-valued", worst,
                                       tol_f + L * delta_lambda, where))
    return _report(records, notes)


# ---------------------------------------------------------------------------
# separation tools
# ---------------------------------------------------------------------------

def approx_identity_symbol(alpha, r, x2):
    """Tent kernel ``a^r`` of half-width ``alpha / (2 sqrt(x2))`` centred at ``r``."""
    return _triangle(alpha / (2.0 * math.sqrt(x2)), r)


def approx_identity_limit(n, x1, x2, r):
    """``2 sqrt(x2) H(beta) H(beta)^T`` with ``beta = x1 + 2 sqrt(x2) r``."""
    _check_n(n)
    x2 = float(x2)
    if not x2 > 0:
        raise DomainError("x2 must be positive")
    w = 2.0 * math.sqrt(x2)
    h = hermite_vector(n, x1 + w * r)
    return SpectralMatrix(n, CompactPoint.interior(x1, x2), w * np.outer(h, h),
                          "closed-form", "x")


@dataclass(frozen=True)
class SeparationResult:
    c2: float
    c1: float
    c0: float
    separable: bool


def separation_exponent(p, q, threshold=1e-12):
    """Coefficients of the exponent ``c2 r^2 + c1 r + c0`` comparing two interior points.

    ``(c2, c1, c0) = (4 (x2 - t2), 4 (x1 sqrt(x2) - t1 sqrt(t2)), x1^2 - t1^2)``;
    the points are separable when any coefficient exceeds ``threshold``.
    """
    (x1, x2), (t1, t2) = map(lambda z: tuple(map(float, z)), (p, q))
    if not (x2 > 0 and t2 > 0 and all(map(math.isfinite, (x1, x2, t1, t2)))):
        raise DomainError("both points must be interior")
    c2 = 4.0 * (x2 - t2)
    c1 = 4.0 * (x1 * math.sqrt(x2) - t1 * math.sqrt(t2))
    c0 = x1 * x1 - t1 * t1
    return SeparationResult(c2, c1, c0, max(abs(c2), abs(c1), abs(c0)) > threshold)


def hermite_frame_det(ys):
    """Determinant of the matrix whose k-th column is ``H(y_k)``."""
    ys = np.asarray(ys, dtype=float).ravel()
    n = len(ys)
    _check_n(n)
    if len(np.unique(ys)) != n:
        raise DomainError("inputs must be pairwise distinct")
    return float(np.linalg.det(hermite_vector(n, ys)))


def fiber_vector_test(n, v, w, x1, x2, r_grid=None, tol=1e-9):
    """Decide whether the states ``(x, v)`` and ``(x, w)`` coincide.

    With ``a(r) = <H(beta(r)), v>`` and ``b(r) = <H(beta(r)), w>``, the
    states coincide iff ``a(r) conj(a(r')) = b(r) conj(b(r'))`` for all
    pairs on the grid.  The diagonal ``r = r'`` compares moduli and the
    off-diagonal pairs test that the phase difference is constant.  The
    default grid puts 21 values of ``beta`` on ``[-3, 3]``.
    """
    _check_n(n)
    x2 = float(x2)
    if not x2 > 0:
        raise DomainError("x2 must be positive")
    v = np.asarray(v, dtype=complex)
    w_ = np.asarray(w, dtype=complex)
    if v.shape != (n,) or w_.shape != (n,):
        raise DomainError("vectors must have length n")
    scale = 2.0 * math.sqrt(x2)
    if r_grid is None:
        r_grid = (np.linspace(-3.0, 3.0, 21) - x1) / scale
    H = hermite_vector(n, x1 + scale * np.asarray(r_grid, dtype=float))
    a = H.T @ v
    b = H.T @ w_
    if np.abs(np.abs(a) - np.abs(b)).max() > tol:
        return False
    return bool(np.abs(np.outer(a, a.conj()) - np.outer(b, b.conj())).max() <= tol)
