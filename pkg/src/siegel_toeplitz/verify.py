"""Self-check suites, shared by the CLI ``verify`` command and the test suite."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .algebra import (
    approx_identity_limit,
    approx_identity_symbol,
    eigencurves,
    generalized_eigen_check,
    separation_exponent,
)
from .specfun import (
    N_MAX,
    SMAX_DEFAULT,
    build_quadrature,
    hermite_vector,
    laguerre_vector,
    oracle_integrate,
    tail_moments,
)
from .spectral import (
    CompactPoint,
    approach_path,
    gamma_a_matrix,
    opnorm,
    phi_a,
    phi_plus,
    phi_plus_quadrature,
)
from .symbols import LINE_NAMES, catalog, parse_symbol

INF = math.inf
SUITES = ("specfun", "spectral", "algebra")

# Separation below this counts as converged when testing "strictly decreasing".
CONVERGED_FLOOR = 1e-11


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_error: float
    tolerance: float
    runtime: float


@dataclass
class VerifyReport:
    suite: str
    checks: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_dict(self):
        return {"suite": self.suite, "passed": self.passed,
                "checks": [asdict(c) for c in self.checks]}

    def to_text(self):
        lines = []
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"{mark}  {c.name:<36} max_error={c.max_error:.3e}  "
                         f"tol={c.tolerance:.1e}  {c.runtime:.2f}s")
        lines.append(f"{self.suite}: {'all checks passed' if self.passed else 'FAILED'}")
        return "\n".join(lines)


def _outer(V):
    return np.einsum("im,jm->mij", V, V)


# ---------------------------------------------------------------------------
# batteries (return the raw error so tests can assert on them directly)
# ---------------------------------------------------------------------------

def orthonormality_error(kind, n, nodes=200):
    """Max entry of ``Gram - I`` for the Hermite or Laguerre family on a Gauss rule."""
    if kind == "hermite":
        rule = build_quadrature("gauss-hermite", nodes)
        vec = hermite_vector
    else:
        rule = build_quadrature("gauss-laguerre", nodes)
        vec = laguerre_vector
    G = rule.integrate(lambda s: _outer(vec(n, s, with_weight=False)))
    return float(np.abs(G - np.eye(n)).max())


def tail_moment_error(order=22, ts=(-3.0, -1.0, 0.0, 1.0, 3.0)):
    """Relative error of the tail-moment recurrence against direct integration."""
    worst = 0.0
    for t in ts:
        G = tail_moments(order, t)
        for m in range(order + 1):
            ref = oracle_integrate(lambda s: s ** m * math.exp(-s * s), (t, INF),
                                   tol=1e-12, rtol=1e-12)
            worst = max(worst, abs(G[m] - ref) / max(1.0, abs(ref)))
    return worst


def phi_plus_two_path_error(n_max=6, ts=None, smax=SMAX_DEFAULT):
    """Sup over ``t`` and ``n`` of ``||C M_t C^T - int_t^inf H H^T||``."""
    ts = np.linspace(-4.0, 4.0, 41) if ts is None else ts
    return max(opnorm(phi_plus(n, t).entries - phi_plus_quadrature(n, t, smax=smax))
               for n in range(1, n_max + 1) for t in ts)


def phi_plus_endpoint_error(n_max=N_MAX):
    return max(max(float(np.abs(phi_plus(n, -INF).entries - np.eye(n)).max()),
                   float(np.abs(phi_plus(n, INF).entries).max()))
               for n in range(1, n_max + 1))


def erfc_anchor_error(ts=None):
    ts = np.linspace(-5.0, 5.0, 101) if ts is None else ts
    return max(abs(phi_plus(1, t).entries[0, 0] - 0.5 * math.erfc(t)) for t in ts)


def boundary_points():
    """Every boundary stratum, at representative coordinates."""
    pts = [CompactPoint.bottom(t) for t in (-2.0, 0.0, 2.0)]
    pts += [CompactPoint.top(t) for t in (-2.0, 0.0, 2.0)]
    for side in (CompactPoint.left, CompactPoint.right):
        pts += [side(t2) for t2 in (0.0, 0.5, 2.0, INF)]
    return pts


def boundary_symbols():
    return [catalog(name) for name in LINE_NAMES] + [parse_symbol("pc:sigmoid+2*chi+")]


def boundary_approach(a, n, p):
    """Errors ``||phi_a(q) - phi_a(p)||`` along :func:`approach_path`."""
    target = phi_a(a, n, p).entries
    return [opnorm(phi_a(a, n, q).entries - target) for q in approach_path(p)]


def decreasing(errors, floor=CONVERGED_FLOOR):
    """Strictly decreasing, except that values at or below ``floor`` count as converged."""
    return all(b < a or b <= floor for a, b in zip(errors, errors[1:]))


def boundary_battery(n=3, symbols=None, points=None):
    """Rows ``(symbol name, point, errors, ok)`` for every symbol and stratum."""
    rows = []
    for a in symbols or boundary_symbols():
        for p in points or boundary_points():
            errs = boundary_approach(a, n, p)
            rows.append((a.name, p, errs, decreasing(errs) and errs[-1] < 1e-2))
    return rows


def corner_coherence_error(n=3, symbols=None):
    """Max gap between the two spellings of each corner."""
    worst = 0.0
    pairs = [(CompactPoint.bottom(-INF), CompactPoint.left(0.0)),
             (CompactPoint.bottom(INF), CompactPoint.right(0.0)),
             (CompactPoint.top(-INF), CompactPoint.left(INF)),
             (CompactPoint.top(INF), CompactPoint.right(INF))]
    for a in symbols or boundary_symbols():
        for p, q in pairs:
            worst = max(worst, opnorm(phi_a(a, n, p).entries - phi_a(a, n, q).entries))
    return worst


def chi_plus_flatness_error(n=4, t1s=(-2.0, -0.5, 0.0, 1.0, 3.0), t2s=(1e-3, 0.1, 1.0, 10.0, 1e3)):
    """Max of ``||phi_a(chi+, (t1, t2)) - phi+(t1)||`` over the grid."""
    chi = catalog("chi_plus")
    return max(opnorm(phi_a(chi, n, CompactPoint.interior(t1, t2)).entries
                      - phi_plus(n, t1).entries)
               for t1 in t1s for t2 in t2s)


def eigencurve_residual(n_max=6, grid=None):
    grid = np.concatenate([[-INF], np.linspace(-4, 4, 41), [INF]]) if grid is None else grid
    worst = 0.0
    for n in range(1, n_max + 1):
        T = eigencurves(n, grid)
        for k, t in enumerate(grid):
            B = T.diagonalizers[k]
            D = B.T @ phi_plus(n, t).entries @ B
            worst = max(worst, float(np.abs(D - np.diag(T.lambdas[:, k])).max()))
    return worst


def pencil_error(n_max=4, ts=(-2.0, -1.0, 0.0, 1.0, 2.0)):
    worst = 0.0
    for n in range(1, n_max + 1):
        for t in ts:
            chk = generalized_eigen_check(n, t)
            worst = max(worst, chk.residual, chk.spectrum_gap)
    return worst


def approx_identity_errors(n, r, alphas=(0.04, 0.02, 0.01), x1=0.0, x2=0.25):
    """Errors against the rank-one limit and the two observed orders."""
    limit = approx_identity_limit(n, x1, x2, r).entries
    errs = [opnorm(gamma_a_matrix(approx_identity_symbol(al, r, x2), n, x1, x2).entries - limit)
            for al in alphas]
    orders = [math.log(errs[i] / errs[i + 1]) / math.log(alphas[i] / alphas[i + 1])
              for i in range(len(errs) - 1)]
    return errs, orders


def separation_soundness(count=1000, seed=0):
    """Number of wrong verdicts on ``count`` equal and ``count`` distinct random pairs."""
    rng = np.random.default_rng(seed)
    wrong = 0
    for _ in range(count):
        p = (rng.uniform(-5, 5), rng.uniform(0.01, 10))
        wrong += separation_exponent(p, p).separable
        q = (p[0] + rng.choice([-1, 1]) * rng.uniform(1e-3, 3), rng.uniform(0.01, 10))
        wrong += not separation_exponent(p, q).separable
    return wrong


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def _timed(name, tol, fn, overrides, passed=None):
    tol = overrides.get(name, tol)
    t0 = time.perf_counter()
    err = float(fn())
    ok = err <= tol if passed is None else passed(err, tol)
    return CheckResult(name, bool(ok), err, tol, time.perf_counter() - t0)


def run_suite(suite, overrides=None, nodes=200, smax=SMAX_DEFAULT):
    """Run ``specfun``, ``spectral``, ``algebra`` or ``all`` and return a :class:`VerifyReport`."""
    overrides = dict(overrides or {})
    if suite == "all":
        report = VerifyReport("all")
        for s in SUITES:
            report.checks.extend(run_suite(s, overrides, nodes, smax).checks)
        return report
    report = VerifyReport(suite)
    add = report.checks.append
    if suite == "specfun":
        add(_timed("hermite-orthonormality", 1e-9,
                   lambda: max(orthonormality_error("hermite", n, nodes) for n in range(1, 9)),
                   overrides))
        add(_timed("laguerre-orthonormality", 1e-9,
                   lambda: max(orthonormality_error("laguerre", n, nodes) for n in range(1, 9)),
                   overrides))
        add(_timed("tail-moment-recurrence", 1e-9, tail_moment_error, overrides))
    elif suite == "spectral":
        add(_timed("phi-plus-two-path", 1e-8, lambda: phi_plus_two_path_error(smax=smax),
                   overrides))
        add(_timed("phi-plus-endpoints", 1e-12, phi_plus_endpoint_error, overrides))
        add(_timed("phi-plus-erfc-anchor", 1e-10, erfc_anchor_error, overrides))
        add(_timed("chi-plus-flatness", 1e-9, chi_plus_flatness_error, overrides))
        add(_timed("corner-coherence", 1e-10, corner_coherence_error, overrides))

        def battery():
            rows = boundary_battery()
            bad = [r for r in rows if not r[3]]
            return max(r[2][-1] for r in rows) if not bad else math.inf
        add(_timed("boundary-consistency", 1e-2, battery, overrides))
    elif suite == "algebra":
        add(_timed("eigencurve-diagonalization", 1e-9, eigencurve_residual, overrides))
        add(_timed("pencil-equivalence", 1e-9, pencil_error, overrides))

        def order():
            worst = math.inf
            for r in (0.0, 1.0):
                for n in (1, 2, 3):
                    errs, orders = approx_identity_errors(n, r)
                    if errs[-1] >= 1e-3 or not decreasing(errs, 0.0):
                        return 0.0
                    worst = min(worst, min(orders))
            return worst
        add(_timed("approx-identity-order", 1.8, order, overrides,
                   passed=lambda e, tol: e >= tol))
        add(_timed("separation-soundness", 0.0, separation_soundness, overrides))
    else:
        raise ValueError(f"unknown suite {suite!r}")
    return report
