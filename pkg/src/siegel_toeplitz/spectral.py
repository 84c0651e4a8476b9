"""Spectral matrix-valued functions on the strip and its compactification.

Coordinates: the gamma functions live on ``(x1, x2)`` with ``x2 > 0``; the
reparametrised function ``phi^a = gamma^a o Phi^{-1}`` lives on
``(t1, t2)`` and extends to the compactified strip ``[-inf, inf] x [0, inf]``.

Integrals run in the Hermite or Laguerre variable.  Symbol breakpoints and
knots are mapped into that variable and become fixed panel boundaries of
:func:`~siegel_toeplitz.specfun.adaptive_integrate`, so no Gauss panel ever
straddles a jump.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .specfun import (
    SMAX_DEFAULT,
    _check_n,
    adaptive_integrate,
    gaussian_tail_moment_matrix,
    hermite_coeff_matrix,
    hermite_support,
    hermite_vector,
    laguerre_support,
    laguerre_vector,
)
from .symbols import Symbol1D, Symbol2D, SymbolHalfLine, pc_decompose

TOL_DEFAULT = 1e-13
INF = math.inf

KINDS = ("interior", "left", "right", "bottom", "top")


@dataclass(frozen=True)
class CompactPoint:
    """A point of ``[-inf, inf] x [0, inf]`` tagged by its stratum.

    Left and right edges sit at ``t1 = -inf`` and ``t1 = +inf``; bottom and
    top at ``t2 = 0`` and ``t2 = +inf``.  A corner has two spellings; the
    edge spelling (left/right) is canonical.
    """

    kind: str
    t1: float
    t2: float

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown point kind {self.kind!r}")
        t1, t2 = self.t1, self.t2
        ok = {
            "interior": math.isfinite(t1) and 0 < t2 < INF,
            "left": t1 == -INF and 0 <= t2 <= INF,
            "right": t1 == INF and 0 <= t2 <= INF,
            "bottom": t2 == 0 and not math.isnan(t1),
            "top": t2 == INF and not math.isnan(t1),
        }[self.kind]
        if not ok:
            raise DomainError(f"({t1}, {t2}) is not a valid {self.kind} point")

    @classmethod
    def interior(cls, t1, t2):
        return cls("interior", float(t1), float(t2))

    @classmethod
    def left(cls, t2):
        return cls("left", -INF, float(t2))

    @classmethod
    def right(cls, t2):
        return cls("right", INF, float(t2))

    @classmethod
    def bottom(cls, t1):
        return cls("bottom", float(t1), 0.0)

    @classmethod
    def top(cls, t1):
        return cls("top", float(t1), INF)

    @classmethod
    def at(cls, t1, t2):
        """Tag a coordinate pair with its stratum (edges win at corners)."""
        t1, t2 = float(t1), float(t2)
        if t1 == -INF:
            return cls.left(t2)
        if t1 == INF:
            return cls.right(t2)
        if t2 == 0:
            return cls.bottom(t1)
        if t2 == INF:
            return cls.top(t1)
        return cls.interior(t1, t2)

    def canonical(self):
        return CompactPoint.at(self.t1, self.t2)

    @property
    def is_corner(self):
        return math.isinf(self.t1) and (self.t2 == 0 or self.t2 == INF)


@dataclass(frozen=True)
class SpectralMatrix:
    """One ``n x n`` sample of a spectral function.

    ``coords`` is ``"x"`` for the gamma functions and ``"t"`` for phi.
    """

    n: int
    point: CompactPoint
    entries: np.ndarray
    provenance: str
    coords: str = "t"

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.entries, dtype=dtype)


def opnorm(M):
    return float(np.linalg.norm(np.asarray(M), 2))


# ---------------------------------------------------------------------------
# one-dimensional Gram integrals
# ---------------------------------------------------------------------------

def _outer(V):
    """(n, m) -> (m, n, n) stack of outer products."""
    return np.einsum("im,jm->mij", V, V)


def _hermite_gram(weight, n, x1, x2, points, tol, smax):
    """``int weight((s - x1) / w) H H^T (s) ds`` with ``w = 2 sqrt(x2)``.

    Equal to ``w int weight(y) H H^T (w y + x1) dy``; symbol split points
    ``p`` become panel edges ``w p + x1``.
    """
    w = 2.0 * math.sqrt(x2)
    S = hermite_support(n, smax)
    cuts = [w * p + x1 for p in points] + list(np.linspace(-S, S, 9))

    def f(s):
        return weight((s - x1) / w)[:, None, None] * _outer(hermite_vector(n, s))

    return adaptive_integrate(f, -S, S, cuts, tol)


def _laguerre_gram(weight, n, x2, points, tol):
    """``int_0^inf weight(u / (2 x2)) N N^T (u) du``; split points map to ``2 x2 p``."""
    scale = 2.0 * x2
    Y = laguerre_support(n)
    cuts = [scale * p for p in points] + [0.5, 1, 2, 5, 10, 20, 40, 80]

    def f(u):
        return weight(u / scale)[:, None, None] * _outer(laguerre_vector(n, u))

    return adaptive_integrate(f, 0.0, Y, cuts, tol)


def _check_x2(x2):
    x2 = float(x2)
    if not (0 < x2 < INF):
        raise DomainError("x2 must be finite and positive; use the boundary evaluators")
    return x2


# ---------------------------------------------------------------------------
# gamma functions
# ---------------------------------------------------------------------------

def gamma_b(b: SymbolHalfLine, n, x2, tol=TOL_DEFAULT):
    """Spectral matrix of ``T_b`` on the (1, n) space.

    Entry ``(j, k)`` is ``2 x2 int_0^inf b(y) l_{j-1}(2 x2 y) l_{k-1}(2 x2 y) dy``;
    it does not depend on ``x1``.
    """
    _check_n(n)
    x2 = _check_x2(x2)
    M = _laguerre_gram(b.func, n, x2, b.split_points, tol)
    return SpectralMatrix(n, CompactPoint.interior(0.0, x2), M, "quadrature", "x")


def gamma_b_boundary(b: SymbolHalfLine, n, end):
    """Limit of :func:`gamma_b` as ``x2 -> 0`` (``b_inf I``) or ``x2 -> inf`` (``b0 I``)."""
    _check_n(n)
    end = float(end)
    if end == 0.0:
        value, point = b.limit_inf, CompactPoint.bottom(0.0)
    elif end == INF:
        value, point = b.limit_zero, CompactPoint.top(0.0)
    else:
        raise DomainError("end must be 0 or +inf")
    return SpectralMatrix(n, point, value * np.eye(n), "boundary-formula", "x")


def gamma_a_matrix(a: Symbol1D, n, x1, x2, tol=TOL_DEFAULT, smax=SMAX_DEFAULT):
    """Spectral matrix of ``T_a`` on the (n, 1) space at ``(x1, x2)``.

    Entry ``(j, k)`` is
    ``2 sqrt(x2) int a(y) h_{j-1}(2 sqrt(x2) y + x1) h_{k-1}(2 sqrt(x2) y + x1) dy``.
    """
    _check_n(n)
    x2 = _check_x2(x2)
    M = _hermite_gram(a.func, n, float(x1), x2, a.split_points, tol, smax)
    return SpectralMatrix(n, CompactPoint.interior(x1, x2), M, "quadrature", "x")


def gamma_a_scalar(a: Symbol1D, x1, x2, tol=TOL_DEFAULT, smax=SMAX_DEFAULT):
    """Scalar factor of ``gamma^a = (...) I`` on the (1, n) space."""
    return float(gamma_a_matrix(a, 1, x1, x2, tol, smax).entries[0, 0])


def _space(space):
    key = str(space).replace(" ", "").strip("()")
    if key in ("1,n", "1n"):
        return "1n"
    if key in ("n,1", "n1"):
        return "n1"
    raise DomainError(f"space must be (1,n) or (n,1), got {space!r}")


def gamma_c(c: Symbol2D, n, x1, x2, space="1n", tol=1e-11, smax=SMAX_DEFAULT):
    """Spectral matrix of ``T_c`` for a two-variable nilpotent symbol.

    Case ``(1, n)`` weights ``h_0^2`` in the first variable and ``N N^T`` in
    the second; case ``(n, 1)`` weights ``H H^T`` and ``l_0^2``.  Factored
    symbols short-circuit to products of one-dimensional results; others
    are integrated by nested adaptive quadrature.
    """
    _check_n(n)
    x2 = _check_x2(x2)
    x1 = float(x1)
    space = _space(space)
    point = CompactPoint.interior(x1, x2)

    if c.factors is not None:
        a, b = c.factors
        if space == "1n":
            sa = 1.0 if a is None else gamma_a_scalar(a, x1, x2, smax=smax)
            Mb = np.eye(n) if b is None else gamma_b(b, n, x2).entries
            M = sa * Mb
        else:
            sb = 1.0 if b is None else float(gamma_b(b, 1, x2).entries[0, 0])
            Ma = np.eye(n) if a is None else gamma_a_matrix(a, n, x1, x2, smax=smax).entries
            M = sb * Ma
        return SpectralMatrix(n, point, M, "quadrature", "x")

    nh, nl = (1, n) if space == "1n" else (n, 1)
    w = 2.0 * math.sqrt(x2)
    scale = 2.0 * x2
    S = hermite_support(nh, smax)
    Y = laguerre_support(nl)
    s_cuts = [w * p + x1 for p in c.u_points] + list(np.linspace(-S, S, 9))
    q_cuts = [scale * p for p in c.v_points] + [0.5, 1, 2, 5, 10, 20, 40, 80]

    def outer_f(s):
        u = (s - x1) / w

        def inner_f(q):
            cv = c.func(u[None, :], (q / scale)[:, None])     # (mq, ms)
            L = _outer(laguerre_vector(nl, q))                # (mq, nl, nl)
            return cv[:, :, None, None] * L[:, None, :, :]

        inner = adaptive_integrate(inner_f, 0.0, Y, q_cuts, tol)
        Hpart = _outer(hermite_vector(nh, s))                 # (ms, nh, nh)
        return inner * Hpart if space == "1n" else inner[:, :1, :1] * Hpart

    M = adaptive_integrate(outer_f, -S, S, s_cuts, tol)
    return SpectralMatrix(n, point, np.asarray(M), "quadrature", "x")


# ---------------------------------------------------------------------------
# the reparametrisation and phi
# ---------------------------------------------------------------------------

def phi_map(x1, x2):
    """``Phi(x1, x2) = (x1, x2 / (x1^2 + 1))``."""
    x1 = np.asarray(x1, dtype=float)
    return x1, np.asarray(x2, dtype=float) / (x1 * x1 + 1.0)


def phi_inverse(t1, t2):
    """``Phi^{-1}(t1, t2) = (t1, (t1^2 + 1) t2)``."""
    t1 = np.asarray(t1, dtype=float)
    return t1, (t1 * t1 + 1.0) * np.asarray(t2, dtype=float)


def phi_plus(n, t):
    """``int_t^inf H H^T`` in closed form as ``C M_t C^T``; exact at +-inf."""
    _check_n(n)
    t = float(t)
    point = CompactPoint.bottom(t).canonical()
    if t == -INF:
        return SpectralMatrix(n, point, np.eye(n), "closed-form")
    if t == INF:
        return SpectralMatrix(n, point, np.zeros((n, n)), "closed-form")
    C = hermite_coeff_matrix(n)
    M = C @ gaussian_tail_moment_matrix(n, t).entries @ C.T
    return SpectralMatrix(n, point, 0.5 * (M + M.T), "closed-form")


def phi_plus_quadrature(n, t, tol=TOL_DEFAULT, smax=SMAX_DEFAULT):
    """``int_t^inf H H^T`` by adaptive quadrature (independent of the closed form)."""
    _check_n(n)
    t = float(t)
    S = hermite_support(n, smax)
    lo = max(t, -S)
    if lo >= S:
        return np.zeros((n, n))
    return adaptive_integrate(lambda s: _outer(hermite_vector(n, s)), lo, S,
                              np.linspace(-S, S, 9), tol)


def phi_a(a: Symbol1D, n, p: CompactPoint, tol=TOL_DEFAULT, smax=SMAX_DEFAULT):
    """``phi^a`` at any point of the compactified strip.

    Interior points are integrated; boundary strata use the limit formulas:

    * bottom ``(t1, 0)``: ``a_- (I - phi+(t1)) + a_+ phi+(t1)``
    * right ``(+inf, t2)``: ``a(-1/(2 sqrt t2)) I``, with ``a(-inf) I`` at
      ``t2 = 0`` and ``a(0-) I`` at ``t2 = inf``; left mirrors this with
      ``a(1/(2 sqrt t2))``, ``a(+inf)``, ``a(0+)``
    * top ``(t1, inf)``: ``a(0-) I + (a(0+) - a(0-)) phi+(t1)``
    """
    _check_n(n)
    pc_decompose(a)  # class check
    eye = np.eye(n)
    kind = p.kind
    if kind == "interior":
        x1, x2 = phi_inverse(p.t1, p.t2)
        M = gamma_a_matrix(a, n, float(x1), float(x2), tol, smax).entries
        return SpectralMatrix(n, p, M, "quadrature")
    if kind == "bottom":
        P = phi_plus(n, p.t1).entries
        M = a.limit_neg_inf * (eye - P) + a.limit_pos_inf * P
    elif kind in ("left", "right"):
        sign = -1.0 if kind == "right" else 1.0
        if p.t2 == 0:
            value = a.limit_neg_inf if kind == "right" else a.limit_pos_inf
        elif p.t2 == INF:
            left, right = a.one_sided(0.0)
            value = left if kind == "right" else right
        else:
            value = float(a(sign / (2.0 * math.sqrt(p.t2))))
        M = value * eye
    else:
        left, right = a.one_sided(0.0)
        M = left * eye + (right - left) * phi_plus(n, p.t1).entries
    return SpectralMatrix(n, p, M, "boundary-formula")


def approach_path(p: CompactPoint, steps=3):
    """Interior points approaching a boundary point at geometric distances.

    * bottom ``(t1, 0)``: ``(t1, 10^-4), (t1, 10^-6), (t1, 10^-8)``
    * right ``(+inf, t2)`` with ``0 < t2 < inf``: ``(T, t2)`` for
      ``T = 10, 100, 1000``
    * right ``(+inf, 0)``: ``(T, T^-2)``; right ``(+inf, inf)``: ``(T, T)``
      for ``T = 10^2, 10^4, 10^6``
    * top ``(t1, inf)``: ``(t1, T)`` for ``T = 10^2, 10^4, 10^6``

    Left edges mirror the right ones in ``t1``.
    """
    p = p.canonical()
    ks = range(1, steps + 1)
    if p.kind == "bottom":
        return [CompactPoint.interior(p.t1, 10.0 ** (-2 - 2 * k)) for k in ks]
    if p.kind == "top":
        return [CompactPoint.interior(p.t1, 10.0 ** (2 * k)) for k in ks]
    if p.kind in ("left", "right"):
        sign = 1.0 if p.kind == "right" else -1.0
        if p.t2 == 0:
            return [CompactPoint.interior(sign * 10.0 ** k, 10.0 ** (-2 * k)) for k in ks]
        if p.t2 == INF:
            return [CompactPoint.interior(sign * 10.0 ** (2 * k), 10.0 ** (2 * k)) for k in ks]
        return [CompactPoint.interior(sign * 10.0 ** k, p.t2) for k in ks]
    raise DomainError("approach paths start from boundary points")
