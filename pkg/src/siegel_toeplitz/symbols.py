"""Symbol classes and the named catalog.

A symbol carries its limits as data.  Boundary formulas consume those
limits directly, so nothing here infers a limit numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .errors import DomainError, UnsupportedClassError

Array = np.ndarray


@dataclass(frozen=True)
class Breakpoint:
    location: float
    left: float
    right: float

    @property
    def jump(self):
        return self.right - self.left


@dataclass(frozen=True)
class Symbol1D:
    """Bounded real symbol on the real line with limits at -inf and +inf.

    ``func`` must accept and return numpy arrays.  ``knots`` lists points
    where the symbol has kinks or sharp features; quadrature uses them
    (together with breakpoints) as panel boundaries.
    """

    name: str
    func: Callable[[Array], Array]
    limit_neg_inf: float
    limit_pos_inf: float
    sup_norm: float
    breakpoints: tuple = ()
    knots: tuple = ()
    smooth: bool = True
    approach_tol: float = 1e-5

    def __call__(self, s):
        return self.func(np.asarray(s, dtype=float))

    def eval(self, s):
        return self(s)

    def one_sided(self, p):
        """``(a(p-), a(p+))`` using declared breakpoint data when present."""
        for bp in self.breakpoints:
            if bp.location == p:
                return bp.left, bp.right
        v = float(self(p))
        return v, v

    def limit(self, where):
        """Value at an extended real point: +-inf use the declared limits."""
        if where == -math.inf:
            return self.limit_neg_inf
        if where == math.inf:
            return self.limit_pos_inf
        return float(self(where))

    @property
    def split_points(self):
        return tuple(sorted({bp.location for bp in self.breakpoints} | set(self.knots)))

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = constant(float(other))
        if not isinstance(other, Symbol1D):
            return NotImplemented
        f, g = self.func, other.func
        locs = sorted({bp.location for bp in self.breakpoints + other.breakpoints})
        bps = []
        for p in locs:
            l1, r1 = self.one_sided(p)
            l2, r2 = other.one_sided(p)
            bps.append(Breakpoint(p, l1 + l2, r1 + r2))
        return Symbol1D(
            name=f"{self.name}+{other.name}",
            func=lambda s: f(s) + g(s),
            limit_neg_inf=self.limit_neg_inf + other.limit_neg_inf,
            limit_pos_inf=self.limit_pos_inf + other.limit_pos_inf,
            sup_norm=self.sup_norm + other.sup_norm,
            breakpoints=tuple(bps),
            knots=tuple(sorted(set(self.knots) | set(other.knots))),
            smooth=self.smooth and other.smooth,
            approach_tol=max(self.approach_tol, other.approach_tol),
        )

    __radd__ = __add__

    def __mul__(self, c):
        if not isinstance(c, (int, float)):
            return NotImplemented
        c = float(c)
        f = self.func
        return Symbol1D(
            name=f"{c:g}*{self.name}",
            func=lambda s: c * f(s),
            limit_neg_inf=c * self.limit_neg_inf,
            limit_pos_inf=c * self.limit_pos_inf,
            sup_norm=abs(c) * self.sup_norm,
            breakpoints=tuple(Breakpoint(b.location, c * b.left, c * b.right)
                              for b in self.breakpoints),
            knots=self.knots,
            smooth=self.smooth,
            approach_tol=abs(c) * self.approach_tol,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return -1.0 * self

    def __sub__(self, other):
        return self + (-1.0) * other


@dataclass(frozen=True)
class SymbolHalfLine:
    """Bounded symbol on (0, inf) with limits ``b0`` at 0 and ``b_inf`` at infinity."""

    name: str
    func: Callable[[Array], Array]
    limit_zero: float
    limit_inf: float
    sup_norm: float
    breakpoints: tuple = ()
    knots: tuple = ()
    approach_tol: float = 1e-5

    def __call__(self, y):
        return self.func(np.asarray(y, dtype=float))

    def eval(self, y):
        return self(y)

    @property
    def split_points(self):
        return tuple(sorted(set(self.breakpoints) | set(self.knots)))


@dataclass(frozen=True)
class Symbol2D:
    """Symbol ``c(u, v)`` on the real line times the half-line.

    When ``factors = (a, b)`` is set (either may be None, meaning the
    constant 1) the symbol is ``a(u) * b(v)`` and spectral evaluation can
    use one-dimensional integrals.
    """

    name: str
    func: Callable[[Array, Array], Array]
    u_points: tuple = ()
    v_points: tuple = ()
    sup_norm: float = 1.0
    factors: tuple | None = field(default=None)

    def __call__(self, u, v):
        return self.func(np.asarray(u, dtype=float), np.asarray(v, dtype=float))

    def eval(self, u, v):
        return self(u, v)

    @classmethod
    def product(cls, a=None, b=None):
        fa = a.func if a is not None else (lambda u: np.ones_like(u))
        fb = b.func if b is not None else (lambda v: np.ones_like(v))
        name = f"{a.name if a else '1'}*{b.name if b else '1'}"
        return cls(
            name=name,
            func=lambda u, v: fa(u) * fb(v),
            u_points=a.split_points if a is not None else (),
            v_points=b.split_points if b is not None else (),
            sup_norm=(a.sup_norm if a else 1.0) * (b.sup_norm if b else 1.0),
            factors=(a, b),
        )

    def unfactored(self):
        """The same symbol with its factorization hidden."""
        return replace(self, factors=None)


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

def constant(c):
    c = float(c)
    return Symbol1D(f"const:{c:g}", lambda s: np.full(np.shape(s), c),
                    c, c, abs(c), approach_tol=0.0)


def constant_halfline(c):
    c = float(c)
    return SymbolHalfLine(f"const:{c:g}", lambda y: np.full(np.shape(y), c),
                          c, c, abs(c), approach_tol=0.0)


def _chi_plus():
    return Symbol1D("chi+", lambda s: (s >= 0).astype(float), 0.0, 1.0, 1.0,
                    breakpoints=(Breakpoint(0.0, 0.0, 1.0),), smooth=False,
                    approach_tol=0.0)


def _chi_minus():
    return Symbol1D("chi-", lambda s: (s < 0).astype(float), 1.0, 0.0, 1.0,
                    breakpoints=(Breakpoint(0.0, 1.0, 0.0),), smooth=False,
                    approach_tol=0.0)


def _sigmoid():
    return Symbol1D("sigmoid", lambda s: s / np.sqrt(s * s + 1.0), -1.0, 1.0, 1.0,
                    knots=(-1.0, 0.0, 1.0))


def _witch():
    return Symbol1D("witch", lambda s: 1.0 / (s * s + 1.0), 0.0, 0.0, 1.0,
                    knots=(-1.0, 0.0, 1.0))


def _abs_witch():
    return Symbol1D("abswitch", lambda s: np.abs(s) / (s * s + 1.0), 0.0, 0.0, 0.5,
                    knots=(-1.0, 0.0, 1.0), smooth=False)


def _triangle(alpha=1.0, r=0.0):
    alpha, r = float(alpha), float(r)
    if not alpha > 0:
        raise DomainError("triangle needs alpha > 0")

    def tent(s):
        return np.maximum(0.0, 1.0 - np.abs(s - r) / alpha) / alpha

    return Symbol1D(f"triangle:{alpha:g},{r:g}", tent, 0.0, 0.0, 1.0 / alpha,
                    knots=(r - alpha, r, r + alpha), smooth=False, approach_tol=0.0)


def _b_inv1p():
    return SymbolHalfLine("b:inv1p", lambda y: 1.0 / (1.0 + y), 1.0, 0.0, 1.0,
                          knots=(1.0,))


def _b_ind01():
    return SymbolHalfLine("b:ind01", lambda y: ((y > 0) & (y < 1)).astype(float),
                          1.0, 0.0, 1.0, breakpoints=(1.0,), approach_tol=0.0)


_CATALOG = {
    "const": constant,
    "chi_plus": _chi_plus,
    "chi_minus": _chi_minus,
    "sigmoid": _sigmoid,
    "witch": _witch,
    "abs_witch": _abs_witch,
    "triangle": _triangle,
    "b_inv1p": _b_inv1p,
    "b_ind01": _b_ind01,
}

LINE_NAMES = ("const", "chi_plus", "chi_minus", "sigmoid", "witch", "abs_witch", "triangle")
HALFLINE_NAMES = ("b_inv1p", "b_ind01")


def catalog(name, **params):
    """Return a named symbol.

    ``const`` takes ``value``; ``triangle`` takes ``alpha`` and ``r`` (the
    tent supported on ``[r - alpha, r + alpha]`` with peak ``1/alpha``).
    """
    try:
        make = _CATALOG[name]
    except KeyError:
        raise DomainError(f"unknown symbol {name!r}") from None
    if name == "const":
        return constant(params.get("value", 1.0))
    return make(**params)


def pc_decompose(a: Symbol1D):
    """Split ``a = continuous_part + jump * chi+`` for a symbol jumping at 0 only."""
    if not a.breakpoints:
        return a, 0.0
    if any(bp.location != 0.0 for bp in a.breakpoints):
        raise UnsupportedClassError(
            f"{a.name}: only symbols with a single breakpoint at 0 are supported")
    left, right = a.one_sided(0.0)
    jump = right - left
    cont = a + (-jump) * _chi_plus()
    cont = replace(cont, name=f"{a.name}-cont", breakpoints=(),
                   smooth=a.smooth and jump == 0.0)
    return cont, jump


# ---------------------------------------------------------------------------
# mini-language
# ---------------------------------------------------------------------------

_SIMPLE = {
    "chi+": "chi_plus", "chi-": "chi_minus", "sigmoid": "sigmoid",
    "witch": "witch", "abswitch": "abs_witch",
}


def parse_symbol(text, halfline=False):
    """Parse the CLI symbol grammar.

    ``const:<float>``, ``chi+``, ``chi-``, ``sigmoid``, ``witch``,
    ``abswitch``, ``triangle:<alpha>,<r>``, ``pc:<base>+<jump>*chi+``,
    ``b:inv1p``, ``b:ind01``.  With ``halfline=True`` a ``const`` is
    returned as a half-line symbol.
    """
    text = text.strip()
    try:
        if text.startswith("const:"):
            value = float(text[len("const:"):])
            return constant_halfline(value) if halfline else constant(value)
        if text == "b:inv1p":
            return _b_inv1p()
        if text == "b:ind01":
            return _b_ind01()
        if halfline:
            raise DomainError(f"{text!r} is not a half-line symbol")
        if text in _SIMPLE:
            return catalog(_SIMPLE[text])
        if text.startswith("triangle:"):
            alpha, r = text[len("triangle:"):].split(",")
            return _triangle(float(alpha), float(r))
        if text.startswith("pc:") and text.endswith("*chi+"):
            base, jump = text[len("pc:"):-len("*chi+")].rsplit("+", 1)
            sym = parse_symbol(base) + float(jump) * _chi_plus()
            return replace(sym, name=text)
    except ValueError as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"cannot parse symbol {text!r}: {exc}") from None
    raise DomainError(f"cannot parse symbol {text!r}")
