"""Hermite/Laguerre functions, Gaussian tail moments and quadrature.

Everything here is a pure function of its arguments.  Two independent
integration routes are provided:

* :func:`adaptive_integrate` -- vectorised adaptive composite Gauss-Legendre
  (10/20-point pairs per panel).  This is what the spectral functions use.
* :func:`oracle_integrate` -- scalar adaptive Simpson.  Only tests and
  verification suites call it; it shares no code with the route above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.special import roots_hermite, roots_laguerre

from .errors import DomainError, IntegrationError

N_MAX = 12
SMAX_DEFAULT = 8.0

_PI_M14 = math.pi ** -0.25
_SQRT_PI = math.sqrt(math.pi)
# exp(-x) underflows to zero past this point
_EXP_UNDERFLOW = 745.0


def _check_n(n):
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise DomainError(f"n must be an integer, got {n!r}")
    if not 1 <= n <= N_MAX:
        raise DomainError(f"n must lie in [1, {N_MAX}], got {n}")


def hermite_support(n, smax=SMAX_DEFAULT):
    """Half-width beyond which products h_j h_k (j, k < n) are negligible."""
    return max(float(smax), math.sqrt(2 * n + 1) + 5.0)


def laguerre_support(n):
    """Right end beyond which products l_j l_k (j, k < n) are negligible."""
    return 40.0 + 6.0 * n


# ---------------------------------------------------------------------------
# orthonormal functions
# ---------------------------------------------------------------------------

def hermite_vector(n, y, with_weight=True):
    """Orthonormal Hermite functions ``(h_0(y), ..., h_{n-1}(y))``.

    Evaluated with the three-term recurrence of the normalised functions,
    ``h_{m+1} = sqrt(2/(m+1)) y h_m - sqrt(m/(m+1)) h_{m-1}``, so no
    factorials appear.

    Parameters
    ----------
    n : int
        Number of functions, ``1 <= n <= 12``.
    y : float or array_like
        Finite evaluation point(s).
    with_weight : bool
        If False the Gaussian factor ``exp(-y**2/2)`` is omitted and the
        polynomial parts are returned instead.

    Returns
    -------
    ndarray of shape ``(n,) + shape(y)``
    """
    _check_n(n)
    y = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(y)):
        raise DomainError("hermite_vector needs finite arguments")
    out = np.empty((n,) + y.shape)
    out[0] = _PI_M14 * np.exp(-0.5 * y * y) if with_weight else _PI_M14
    if n > 1:
        out[1] = math.sqrt(2.0) * y * out[0]
    for m in range(1, n - 1):
        out[m + 1] = (math.sqrt(2.0 / (m + 1)) * y * out[m]
                      - math.sqrt(m / (m + 1)) * out[m - 1])
    return out


def laguerre_vector(n, y, with_weight=True):
    """Signed Laguerre functions ``l_m(y) = (-1)^m L_m(y) exp(-y/2)``.

    ``L_m`` follows ``(m+1) L_{m+1} = (2m+1-y) L_m - m L_{m-1}``.  With
    ``with_weight=False`` the factor ``exp(-y/2)`` is dropped.
    """
    _check_n(n)
    y = np.asarray(y, dtype=float)
    if np.any(y < 0) or not np.all(np.isfinite(y)):
        raise DomainError("laguerre_vector needs finite y >= 0")
    lag = np.empty((n,) + y.shape)
    lag[0] = 1.0
    if n > 1:
        lag[1] = 1.0 - y
    for m in range(1, n - 1):
        lag[m + 1] = ((2 * m + 1 - y) * lag[m] - m * lag[m - 1]) / (m + 1)
    signs = (-1.0) ** np.arange(n)
    lag *= signs.reshape((n,) + (1,) * y.ndim)
    if with_weight:
        lag *= np.exp(-0.5 * y)
    return lag


def hermite_coeff_matrix(n):
    """Lower-triangular C with ``h_k(s) = exp(-s^2/2) * sum_m C[k, m] s^m``.

    Built from the explicit coefficients of the physicists' Hermite
    polynomials,
    ``(-1)^m k! 2^(k-2m) / (m! (k-2m)!)`` scaled by ``(2^k k! sqrt(pi))^(-1/2)``.
    """
    _check_n(n)
    C = np.zeros((n, n))
    for k in range(n):
        norm = 1.0 / math.sqrt(2.0 ** k * math.factorial(k) * _SQRT_PI)
        for m in range(k // 2 + 1):
            C[k, k - 2 * m] = norm * ((-1) ** m * math.factorial(k) * 2.0 ** (k - 2 * m)
                                      / (math.factorial(m) * math.factorial(k - 2 * m)))
    return C


# ---------------------------------------------------------------------------
# Gaussian tail moments
# ---------------------------------------------------------------------------

def tail_moments(order, t):
    """``G_m(t) = int_t^inf s^m exp(-s^2) ds`` for ``m = 0..order``.

    Uses ``G_0 = sqrt(pi)/2 erfc(t)``, ``G_1 = exp(-t^2)/2`` and
    ``G_m = t^(m-1) exp(-t^2)/2 + (m-1)/2 G_(m-2)``.  At ``t = -inf`` the
    full Gaussian moments are returned, at ``t = +inf`` zeros.
    """
    t = float(t)
    G = np.zeros(order + 1)
    if t == math.inf:
        return G
    if t == -math.inf:
        for m in range(0, order + 1, 2):
            G[m] = math.gamma((m + 1) / 2)
        return G
    e = 0.0 if t * t > _EXP_UNDERFLOW else math.exp(-t * t)
    G[0] = 0.5 * _SQRT_PI * math.erfc(t)
    if order >= 1:
        G[1] = 0.5 * e
    for m in range(2, order + 1):
        head = 0.0 if e == 0.0 else 0.5 * t ** (m - 1) * e
        G[m] = head + 0.5 * (m - 1) * G[m - 2]
    return G


@dataclass(frozen=True)
class TailMomentMatrix:
    """Gram matrix of the monomials ``1, s, ..., s^(n-1)`` on ``[t, inf)``
    against ``exp(-s^2)``; entry ``(j, k)`` is ``G_{j+k}(t)`` (0-indexed)."""

    n: int
    t: float
    entries: np.ndarray


def gaussian_tail_moment_matrix(n, t):
    _check_n(n)
    G = tail_moments(2 * n - 2, t)
    idx = np.add.outer(np.arange(n), np.arange(n))
    return TailMomentMatrix(n=n, t=float(t), entries=G[idx])


# ---------------------------------------------------------------------------
# quadrature rules
# ---------------------------------------------------------------------------

_KINDS = ("gauss-hermite", "gauss-laguerre", "adaptive-composite")
_GL10 = np.polynomial.legendre.leggauss(10)
_GL20 = np.polynomial.legendre.leggauss(20)


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights for one integral family.

    ``kind`` fixes the implied weight function: ``exp(-s^2)`` on the real
    line for ``gauss-hermite``, ``exp(-y)`` on the half-line for
    ``gauss-laguerre`` and plain Lebesgue measure for
    ``adaptive-composite``.  :meth:`integrate` returns
    ``sum_i w_i f(x_i)``, i.e. the integral of ``f`` against that weight.
    """

    kind: str
    nodes: np.ndarray
    weights: np.ndarray
    truncation: float
    breakpoints: tuple = ()
    ignored_breakpoints: tuple = field(default=())

    @property
    def warning(self):
        return bool(self.ignored_breakpoints)

    def integrate(self, f):
        fx = np.asarray(f(self.nodes), dtype=float)
        return np.tensordot(self.weights, fx, axes=(0, 0))


def _panel_edges(lo, hi, points, pieces=1):
    inner = sorted({float(p) for p in points if lo < p < hi})
    cuts = [lo, *inner, hi]
    edges = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        edges.extend(np.linspace(a, b, pieces + 1)[:-1].tolist())
    edges.append(hi)
    return np.array(edges)


def _panel_rule(edges, rule=_GL20):
    x, w = rule
    a, b = edges[:-1], edges[1:]
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    nodes = (mid[:, None] + half[:, None] * x).ravel()
    weights = (half[:, None] * w).ravel()
    return nodes, weights


def build_quadrature(kind="gauss-hermite", nodes=200, smax=SMAX_DEFAULT,
                     breakpoints=(), domain=None):
    """Construct a fixed quadrature rule.

    Parameters
    ----------
    kind : {'gauss-hermite', 'gauss-laguerre', 'adaptive-composite'}
    nodes : int
        Requested node count (at least 8).  For the composite rule this is
        rounded up to a whole number of 20-point Gauss-Legendre panels.
    smax : float
        Truncation half-width of the composite rule when no ``domain`` is
        given.
    breakpoints : sequence of float
        Points the composite rule must use as panel boundaries.  Points
        outside the domain are dropped and listed in
        ``rule.ignored_breakpoints``.
    domain : (float, float), optional
        Finite interval for the composite rule, default ``(-smax, smax)``.
    """
    if kind not in _KINDS:
        raise DomainError(f"unknown quadrature kind {kind!r}")
    if int(nodes) < 8:
        raise DomainError("a quadrature rule needs at least 8 nodes")
    if not smax > 0:
        raise DomainError("truncation smax must be positive")
    breakpoints = tuple(float(p) for p in breakpoints)

    if kind == "gauss-hermite":
        if breakpoints:
            raise DomainError("Gauss-Hermite rules cannot honour breakpoints")
        x, w = roots_hermite(int(nodes))
        return QuadratureRule(kind, x, w, float(np.max(np.abs(x))))

    if kind == "gauss-laguerre":
        if breakpoints:
            raise DomainError("Gauss-Laguerre rules cannot honour breakpoints")
        x, w = roots_laguerre(int(nodes))
        # far nodes carry weights below the double range; drop them
        keep = w > 0
        x, w = x[keep], w[keep]
        return QuadratureRule(kind, x, w, float(x[-1]))

    lo, hi = (-float(smax), float(smax)) if domain is None else map(float, domain)
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise DomainError("composite rules need a finite, non-empty domain")
    inside = tuple(p for p in breakpoints if lo <= p <= hi)
    ignored = tuple(p for p in breakpoints if not lo <= p <= hi)
    panels = max(1, math.ceil(int(nodes) / 20))
    edges = np.linspace(lo, hi, panels + 1)
    edges = np.unique(np.concatenate([edges, inside]))
    x, w = _panel_rule(edges)
    return QuadratureRule(kind, x, w, max(abs(lo), abs(hi)), inside, ignored)


def adaptive_integrate(f, lo, hi, points=(), tol=1e-13, pieces=4,
                       max_panels=20000, return_rule=False):
    """Adaptive composite Gauss-Legendre integration of a vector integrand.

    Parameters
    ----------
    f : callable
        Maps a 1-D array of abscissae of length m to an array of shape
        ``(m, ...)``.
    lo, hi : float
        Finite integration limits.
    points : sequence of float
        Panel boundaries that are always honoured (jumps, kinks, features).
    tol : float
        Absolute error target on the full integral (max-norm over the
        trailing axes).
    pieces : int
        Each interval between consecutive points starts as this many panels.

    Each panel is integrated with 10- and 20-point rules; the 20-point value
    is kept once the two agree to the panel's share of ``tol`` (or to a
    rounding floor), otherwise the panel is bisected.
    """
    lo, hi = float(lo), float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise DomainError("adaptive_integrate needs finite limits")
    if hi <= lo:
        probe = np.asarray(f(np.array([0.5 * (lo + hi)])))
        empty = np.zeros(probe.shape[1:])
        return (empty, None) if return_rule else empty

    todo = _panel_edges(lo, hi, points, pieces)
    todo = np.stack([todo[:-1], todo[1:]], axis=1)
    length = hi - lo
    eps = np.finfo(float).eps
    total = None
    done_a, done_b = [], []
    n_panels = len(todo)
    while len(todo):
        a, b = todo[:, 0], todo[:, 1]
        half = 0.5 * (b - a)
        mid = 0.5 * (a + b)
        x10 = mid[:, None] + half[:, None] * _GL10[0]
        x20 = mid[:, None] + half[:, None] * _GL20[0]
        p = len(todo)
        fx = np.asarray(f(np.concatenate([x10.ravel(), x20.ravel()])), dtype=float)
        tail = fx.shape[1:]
        f10 = fx[: 10 * p].reshape((p, 10) + tail)
        f20 = fx[10 * p:].reshape((p, 20) + tail)
        w10 = half[:, None] * _GL10[1]
        w20 = half[:, None] * _GL20[1]
        g10 = np.einsum("pk,pk...->p...", w10, f10)
        g20 = np.einsum("pk,pk...->p...", w20, f20)
        mag = np.einsum("pk,pk...->p...", w20, np.abs(f20))
        diff = np.abs(g20 - g10)
        floor = 64 * eps * mag
        if tail:
            axes = tuple(range(1, diff.ndim))
            err = np.max(np.maximum(diff - floor, 0.0), axis=axes)
        else:
            err = np.maximum(diff - floor, 0.0)
        ok = (err <= tol * (b - a) / length) | (b - a <= 1e-14 * max(1.0, abs(lo), abs(hi)))
        part = g20[ok].sum(axis=0)
        total = part if total is None else total + part
        done_a.append(a[ok])
        done_b.append(b[ok])
        bad = todo[~ok]
        if not len(bad):
            break
        n_panels += len(bad)
        if n_panels > max_panels:
            rest = g20[~ok].sum(axis=0)
            raise IntegrationError(
                f"adaptive_integrate exceeded {max_panels} panels on [{lo}, {hi}]",
                estimate=total + rest)
        m = 0.5 * (bad[:, 0] + bad[:, 1])
        todo = np.concatenate([np.stack([bad[:, 0], m], 1), np.stack([m, bad[:, 1]], 1)])

    if not return_rule:
        return total
    a = np.concatenate(done_a)
    b = np.concatenate(done_b)
    order = np.argsort(a)
    edges = np.append(a[order], b[order][-1])
    x, w = _panel_rule(edges)
    inner = tuple(float(q) for q in points if lo < q < hi)
    rule = QuadratureRule("adaptive-composite", x, w, max(abs(lo), abs(hi)), inner)
    return total, rule


# ---------------------------------------------------------------------------
# independent oracle
# ---------------------------------------------------------------------------

def _truncate_end(f, anchor, direction, tol):
    """Find L with |f| below tol/(10 L) on samples of the far tail."""
    span = max(8.0, abs(anchor) + 8.0) if math.isfinite(anchor) else 8.0
    base = anchor if math.isfinite(anchor) else 0.0
    while span < 1e6:
        xs = base + direction * np.linspace(span, 4 * span, 97)
        vals = np.array([abs(f(float(x))) for x in xs])
        if np.all(vals <= tol / (10 * span)):
            return base + direction * span
        span *= 2
    raise IntegrationError("integrand does not decay; cannot truncate")


def oracle_integrate(f: Callable[[float], float], domain: Sequence[float],
                     breakpoints: Sequence[float] = (), tol: float = 1e-10,
                     rtol: float = 0.0, max_evals: int = 4_000_000) -> float:
    """Adaptive Simpson quadrature of a scalar function.

    Infinite ends are cut where sampled ``|f|`` has fallen below
    ``tol / width``.  Breakpoints become subdivision endpoints and the
    integrand is sampled one ulp inside each piece there, so jumps are
    integrated from the correct side.

    Raises
    ------
    IntegrationError
        When the evaluation budget runs out; ``err.estimate`` holds the
        partial result.
    """
    lo, hi = float(domain[0]), float(domain[1])
    if lo == hi:
        return 0.0
    if lo > hi:
        return -oracle_integrate(f, (hi, lo), breakpoints, tol, rtol, max_evals)
    if lo == -math.inf:
        lo = _truncate_end(f, hi, -1.0, tol)
    if hi == math.inf:
        hi = _truncate_end(f, lo, 1.0, tol)

    cuts = [lo, *sorted({float(p) for p in breakpoints if lo < p < hi}), hi]
    segments = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        ea, eb = np.nextafter(a, b), np.nextafter(b, a)
        grid = np.linspace(a, b, 33)
        for u, v in zip(grid[:-1], grid[1:]):
            segments.append((ea if u == a else u, eb if v == b else v))

    evals = 0

    def simpson(a, fa, b, fb):
        nonlocal evals
        m = 0.5 * (a + b)
        fm = f(m)
        evals += 1
        return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    stack = []
    scale = 0.0
    for a, b in segments:
        fa, fb = f(a), f(b)
        evals += 2
        m, fm, whole = simpson(a, fa, b, fb)
        scale += (b - a) / 6.0 * (abs(fa) + 4 * abs(fm) + abs(fb))
        stack.append((a, fa, b, fb, m, fm, whole))
    target = max(tol, rtol * scale)
    length = hi - lo
    work = [(item, target * (item[2] - item[0]) / length, 0) for item in stack]

    total = 0.0
    while work:
        (a, fa, b, fb, m, fm, whole), eps, depth = work.pop()
        lm, flm, left = simpson(a, fa, m, fm)
        rm, frm, right = simpson(m, fm, b, fb)
        delta = left + right - whole
        if abs(delta) <= 15.0 * eps or depth >= 50:
            total += left + right + delta / 15.0
            continue
        if evals > max_evals:
            pending = sum(item[0][6] for item in work) + whole
            raise IntegrationError("oracle_integrate exhausted its evaluation budget",
                                   estimate=total + pending)
        work.append(((a, fa, m, fm, lm, flm, left), 0.5 * eps, depth + 1))
        work.append(((m, fm, b, fb, rm, frm, right), 0.5 * eps, depth + 1))
    return total
