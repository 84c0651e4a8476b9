import math
import time

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from siegel_toeplitz.errors import DomainError, IntegrationError
from siegel_toeplitz.specfun import (
    adaptive_integrate,
    build_quadrature,
    gaussian_tail_moment_matrix,
    hermite_coeff_matrix,
    hermite_vector,
    laguerre_vector,
    oracle_integrate,
    tail_moments,
)
from siegel_toeplitz.verify import orthonormality_error, tail_moment_error

PI_Q = math.pi ** -0.25


# --- Hermite and Laguerre functions -----------------------------------------

def test_hermite_values():
    assert hermite_vector(1, 0.0)[0] == pytest.approx(0.7511255445, abs=1e-10)
    assert hermite_vector(2, 0.0)[1] == 0.0
    assert hermite_vector(2, 1.0)[1] == pytest.approx(math.sqrt(2) * PI_Q * math.exp(-0.5), abs=1e-14)
    assert hermite_vector(2, 1.0)[1] == pytest.approx(0.6442883651, abs=1e-10)


def test_hermite_matches_direct_formula():
    # h_2(s) = (4 s^2 - 2) e^{-s^2/2} / (2 sqrt(2) pi^{1/4})
    s = np.linspace(-4, 4, 17)
    direct = (4 * s ** 2 - 2) * np.exp(-s ** 2 / 2) / (2 * math.sqrt(2)) * PI_Q
    assert np.allclose(hermite_vector(3, s)[2], direct, atol=1e-14)


def test_hermite_h0_normalized_by_oracle():
    val = oracle_integrate(lambda s: float(hermite_vector(1, s)[0]) ** 2, (-math.inf, math.inf))
    assert val == pytest.approx(1.0, abs=1e-10)


def test_hermite_domain_errors():
    with pytest.raises(DomainError):
        hermite_vector(0, 0.0)
    with pytest.raises(DomainError):
        hermite_vector(13, 0.0)
    with pytest.raises(DomainError):
        hermite_vector(2, math.nan)


def test_laguerre_values():
    assert laguerre_vector(1, 0.0)[0] == 1.0
    assert laguerre_vector(2, 0.0)[1] == -1.0
    assert laguerre_vector(2, 1.0)[1] == pytest.approx(0.0, abs=1e-16)
    y = np.linspace(0, 5, 11)
    assert np.allclose(laguerre_vector(2, y)[1], -(1 - y) * np.exp(-y / 2), atol=1e-15)


def test_laguerre_negative_argument():
    with pytest.raises(DomainError):
        laguerre_vector(3, -0.1)


@pytest.mark.parametrize("kind", ["hermite", "laguerre"])
def test_orthonormality(kind):
    t0 = time.perf_counter()
    err = max(orthonormality_error(kind, n) for n in range(1, 9))
    assert err < 1e-9
    assert time.perf_counter() - t0 < 1.0


def test_shapes_broadcast():
    y = np.zeros((3, 4))
    assert hermite_vector(5, y).shape == (5, 3, 4)
    assert laguerre_vector(5, y).shape == (5, 3, 4)


# --- coefficient matrix ----------------------------------------------------

def test_coeff_matrix_examples():
    assert hermite_coeff_matrix(1)[0, 0] == pytest.approx(PI_Q, rel=1e-15)
    C = hermite_coeff_matrix(2)
    assert np.allclose(np.diag(C), [PI_Q, math.sqrt(2) * PI_Q])
    assert C[0, 1] == 0.0
    assert hermite_coeff_matrix(3)[2, 0] == pytest.approx(-PI_Q / math.sqrt(2), abs=1e-7)


def test_coeff_matrix_lower_triangular():
    C = hermite_coeff_matrix(12)
    assert np.all(np.triu(C, 1) == 0)
    assert np.all(np.diag(C) != 0)


@settings(max_examples=100, deadline=None)
@given(st.floats(-5, 5))
def test_coefficient_identity(s):
    C = hermite_coeff_matrix(8)
    poly = C @ s ** np.arange(8) * math.exp(-s * s / 2)
    assert np.abs(hermite_vector(8, s) - poly).max() < 1e-10


# --- tail moments -----------------------------------------------------------

def test_tail_moment_examples():
    M = gaussian_tail_moment_matrix(2, -math.inf).entries
    assert np.allclose(M, [[math.sqrt(math.pi), 0], [0, math.sqrt(math.pi) / 2]], atol=1e-15)
    assert gaussian_tail_moment_matrix(2, 0.0).entries[0, 1] == pytest.approx(0.5, abs=1e-15)
    assert np.all(gaussian_tail_moment_matrix(7, math.inf).entries == 0)


def test_full_line_moments_match_oracle():
    for m in range(6):
        ref = oracle_integrate(lambda s: s ** m * math.exp(-s * s), (-40, 40))
        assert tail_moments(m, -math.inf)[m] == pytest.approx(ref, abs=1e-10)


def test_tail_moment_recurrence_against_oracle():
    # relative scale: G_22(-3) is about 1.2e7, so an absolute 1e-9 is below one ulp
    assert tail_moment_error() < 1e-9


@settings(max_examples=40, deadline=None)
@given(st.floats(-6, 6), st.integers(1, 12))
def test_tail_moment_matrix_psd(t, n):
    M = gaussian_tail_moment_matrix(n, t).entries
    scale = max(1.0, np.abs(M).max())
    assert np.linalg.eigvalsh(M).min() >= -1e-10 * scale


def test_tail_moments_far_right_underflow():
    G = tail_moments(10, 40.0)
    assert np.all(np.isfinite(G)) and np.all(G >= 0)


# --- quadrature ---------------------------------------------------------------

def test_gauss_hermite_moments():
    rule = build_quadrature("gauss-hermite", 200)
    assert rule.integrate(lambda s: s ** 2) == pytest.approx(math.sqrt(math.pi) / 2, abs=1e-12)
    assert rule.integrate(lambda s: s ** 4) == pytest.approx(3 * math.sqrt(math.pi) / 4, abs=1e-12)


def test_gauss_laguerre_exact_constant():
    rule = build_quadrature("gauss-laguerre", 200)
    assert rule.integrate(np.ones_like) == pytest.approx(1.0, abs=1e-12)


def test_composite_breakpoint_is_panel_edge():
    rule = build_quadrature("adaptive-composite", 64, smax=4.0, breakpoints=(0.0,))
    assert 0.0 in rule.breakpoints
    assert not rule.warning
    assert rule.integrate(lambda s: (s >= 0) * np.exp(-s * s)) == pytest.approx(
        math.sqrt(math.pi) / 2 * math.erf(4.0), abs=1e-12)


def test_composite_ignores_outside_breakpoint():
    rule = build_quadrature("adaptive-composite", 64, smax=4.0, breakpoints=(9.0,))
    assert rule.ignored_breakpoints == (9.0,)
    assert rule.warning


@pytest.mark.parametrize("kwargs", [{"nodes": 4}, {"smax": 0.0}])
def test_quadrature_rejects_bad_parameters(kwargs):
    with pytest.raises(DomainError):
        build_quadrature("adaptive-composite", **kwargs)


# --- integrators ----------------------------------------------------------------

def test_oracle_examples():
    assert oracle_integrate(lambda s: math.exp(-s * s), (-math.inf, math.inf)) == pytest.approx(
        math.sqrt(math.pi), abs=1e-10)
    h01 = oracle_integrate(lambda s: float(np.prod(hermite_vector(2, s))), (-math.inf, math.inf))
    assert abs(h01) < 1e-10
    assert oracle_integrate(lambda y: math.exp(-y), (0, math.inf)) == pytest.approx(1.0, abs=1e-10)


def test_oracle_budget_exhaustion_reports_estimate():
    with pytest.raises(IntegrationError) as info:
        oracle_integrate(lambda s: math.sin(1 / s) if s else 0.0, (1e-6, 1.0), tol=1e-15,
                         max_evals=2000)
    assert info.value.estimate is not None


def test_adaptive_matches_oracle_on_discontinuous_integrand():
    def f(s):
        return np.where(s > 0.3, 1.0, -0.5) * np.exp(-s * s) * np.cos(3 * s)

    ours = adaptive_integrate(f, -8, 8, points=(0.3,))
    ref = oracle_integrate(lambda s: float(f(np.array(s))), (-8, 8), breakpoints=(0.3,), tol=1e-13)
    assert ours == pytest.approx(ref, abs=1e-12)


def test_adaptive_return_rule_reproduces_value():
    val, rule = adaptive_integrate(lambda s: np.exp(-s * s), -6, 6, return_rule=True)
    assert rule.integrate(lambda s: np.exp(-s * s)) == pytest.approx(val, abs=1e-15)


def test_adaptive_budget_exceeded():
    with pytest.raises(IntegrationError):
        adaptive_integrate(lambda s: np.sin(1 / s), 1e-9, 1.0, tol=1e-15, max_panels=50)
