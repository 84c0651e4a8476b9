"""Grids over the compact strip and batch sampling of spectral functions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .specfun import SMAX_DEFAULT
from .spectral import (
    TOL_DEFAULT,
    CompactPoint,
    SpectralMatrix,
    gamma_a_matrix,
    gamma_a_scalar,
    gamma_b,
    gamma_b_boundary,
    gamma_c,
    phi_a,
    phi_plus,
)
from .symbols import Symbol2D, SymbolHalfLine, parse_symbol

INF = math.inf

CASES = ("b-1n", "a-1n", "a-n1", "c-1n", "c-n1", "phi-a", "phi-plus")
BOUNDARY_CASES = ("b-1n", "phi-a", "phi-plus")

DEFAULT_T1 = (-4.0, 4.0, 41)
DEFAULT_T2 = (1e-2, 1e2, 41, True)


@dataclass(frozen=True)
class GridSpec:
    """Product grid ``t1 x t2``; ``t2`` may be log-spaced.

    With ``include_boundary`` the axes are extended by ``+-inf`` (``t1``)
    and by ``0, +inf`` (``t2``) and every extended pair is tagged with its
    stratum.
    """

    t1: tuple = DEFAULT_T1
    t2: tuple = DEFAULT_T2
    include_boundary: bool = False

    def __post_init__(self):
        lo, hi, count = self.t1
        if count < 1 or not lo < hi and count > 1:
            raise DomainError("t1 range needs min < max and count >= 1")
        lo, hi, count, log = self.t2
        if count < 1 or not lo < hi and count > 1:
            raise DomainError("t2 range needs min < max and count >= 1")
        if log and lo <= 0:
            raise DomainError("log spacing needs t2 min > 0")
        if not log and lo <= 0:
            raise DomainError("t2 values must be positive")

    def t1_values(self):
        lo, hi, count = self.t1
        vals = list(np.linspace(lo, hi, count))
        return [-INF] + vals + [INF] if self.include_boundary else vals

    def t2_values(self):
        lo, hi, count, log = self.t2
        vals = list(np.geomspace(lo, hi, count) if log else np.linspace(lo, hi, count))
        return [0.0] + vals + [INF] if self.include_boundary else vals

    def points(self):
        return [CompactPoint.at(a, b) for a in self.t1_values() for b in self.t2_values()]

    def describe(self):
        lo, hi, c = self.t1
        lo2, hi2, c2, log = self.t2
        tail = ":log" if log else ""
        return f"t1={lo:g}:{hi:g}:{c},t2={lo2:g}:{hi2:g}:{c2}{tail}"


def parse_grid(text, include_boundary=False):
    """Parse ``t1=min:max:count[,t2=min:max:count[:log]]`` (either part may be omitted)."""
    t1, t2 = DEFAULT_T1, DEFAULT_T2
    seen = set()
    try:
        for part in text.split(","):
            key, _, body = part.strip().partition("=")
            fields = body.split(":")
            if key in seen or key not in ("t1", "t2"):
                raise DomainError(f"bad grid component {part!r}")
            seen.add(key)
            if key == "t1":
                if len(fields) != 3:
                    raise DomainError("t1 needs min:max:count")
                t1 = (float(fields[0]), float(fields[1]), int(fields[2]))
            else:
                if len(fields) not in (3, 4) or (len(fields) == 4 and fields[3] != "log"):
                    raise DomainError("t2 needs min:max:count[:log]")
                t2 = (float(fields[0]), float(fields[1]), int(fields[2]), len(fields) == 4)
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"cannot parse grid {text!r}: {exc}") from None
    return GridSpec(t1, t2, include_boundary)


def parse_symbol2d(text):
    """``<line>*<half-line>``, ``<line>`` or ``<half-line>`` as a product symbol."""
    if "*b:" in text:
        a, b = text.rsplit("*b:", 1)
        return Symbol2D.product(parse_symbol(a), parse_symbol("b:" + b, halfline=True))
    if text.startswith("b:"):
        return Symbol2D.product(None, parse_symbol(text, halfline=True))
    return Symbol2D.product(parse_symbol(text), None)


def _symbol_for(case, text):
    if case == "phi-plus":
        return None
    if case == "b-1n":
        return parse_symbol(text, halfline=True)
    if case in ("c-1n", "c-n1"):
        return parse_symbol2d(text)
    sym = parse_symbol(text)
    if isinstance(sym, SymbolHalfLine):
        raise DomainError(f"case {case} needs a symbol on the real line")
    return sym


def sample(case, symbol_text, n, grid: GridSpec, tol=TOL_DEFAULT, smax=SMAX_DEFAULT):
    """Evaluate one case on a grid, in grid order.

    ``phi-plus`` uses the ``t1`` axis only and ``b-1n`` the ``t2`` axis
    only (read as ``x2``).  For ``a-*`` and ``c-*`` the grid axes are the
    original coordinates ``(x1, x2)``.
    """
    if case not in CASES:
        raise DomainError(f"unknown case {case!r}")
    if grid.include_boundary and case not in BOUNDARY_CASES:
        raise DomainError(f"case {case} has no boundary evaluation")
    sym = _symbol_for(case, symbol_text)
    eye = np.eye(n)
    out = []
    if case == "phi-plus":
        return [phi_plus(n, t) for t in grid.t1_values()]
    if case == "b-1n":
        for x2 in grid.t2_values():
            if x2 == 0.0 or x2 == INF:
                out.append(gamma_b_boundary(sym, n, x2))
            else:
                out.append(gamma_b(sym, n, x2, tol))
        return out
    if case == "phi-a":
        return [phi_a(sym, n, p, tol, smax) for p in grid.points()]
    for x1 in grid.t1_values():
        for x2 in grid.t2_values():
            if case == "a-1n":
                M = gamma_a_scalar(sym, x1, x2, tol, smax) * eye
                out.append(SpectralMatrix(n, CompactPoint.interior(x1, x2), M, "quadrature", "x"))
            elif case == "a-n1":
                out.append(gamma_a_matrix(sym, n, x1, x2, tol, smax))
            else:
                out.append(gamma_c(sym, n, x1, x2, case[2:], smax=smax))
    return out
