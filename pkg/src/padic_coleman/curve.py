"""Hyperelliptic curves y^2 = f(x), their points and residue discs."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .errors import BadReductionError, CurveError, DiscError, PointError
from .padic import PadicNumber, floor_log, is_prime, sqrt_unit, teichmuller_lift
from .series import PadicPolynomial, evaluate, mod_p_squarefree


def working_precision(target_digits, p, g, extra_guard=0):
    """Digits carried internally for a requested output precision.

    target + (1 + floor(log_p max(N, 2g+1))) + g + 2 (+ extra guard), where
    the log term is the Frobenius-reduction loss at the resulting N.
    """
    base = target_digits + g + 2 + extra_guard
    n = base
    while True:
        nxt = base + 1 + floor_log(p, max(n, 2 * g + 1))
        if nxt == n:
            return n
        n = nxt


@dataclass(frozen=True)
class HyperellipticCurve:
    p: int
    f_rational: tuple
    genus: int
    target_digits: int
    working_prec: int
    f: PadicPolynomial = field(compare=False, repr=False, hash=False)

    @property
    def degree(self):
        return 2 * self.genus + 1

    def with_working_precision(self, N):
        return HyperellipticCurve(self.p, self.f_rational, self.genus, self.target_digits, N,
                                  PadicPolynomial.from_rationals(self.f_rational, self.p, N))

    def f_at(self, x):
        return evaluate(self.f, x)

    def padic(self, r, prec=None):
        """A rational (or PadicNumber) as a p-adic number at working precision."""
        return PadicNumber.coerce(r, self.p, self.working_prec if prec is None else prec)

    def __str__(self):
        terms = " + ".join(f"({c})*x^{i}" for i, c in enumerate(self.f_rational) if c)
        return f"y^2 = {terms} over Q_{self.p}"


def new_curve(f_rational: Sequence, p: int, target_digits: int = 6, extra_guard: int = 0) -> HyperellipticCurve:
    """Validate the model y^2 = f(x) at p and pick a working precision."""
    if not is_prime(p):
        raise CurveError(f"p = {p} is not prime")
    if p == 2:
        raise CurveError("p = 2 is not supported")
    coeffs = [Fraction(c) for c in f_rational]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    deg = len(coeffs) - 1
    if deg < 3 or deg % 2 == 0:
        raise CurveError(f"deg f must be odd and at least 3 (got {deg})")
    if coeffs[-1] != 1:
        raise CurveError("f must be monic")
    for c in coeffs:
        if c.denominator % p == 0:
            raise BadReductionError(f"coefficient {c} is not p-integral at p = {p}")
    if target_digits < 1:
        raise ValueError("target_digits must be positive")
    g = (deg - 1) // 2
    N = working_precision(target_digits, p, g, extra_guard)
    f = PadicPolynomial.from_rationals(coeffs, p, N)
    if not mod_p_squarefree(f):
        raise BadReductionError(f"f has repeated roots modulo {p}")
    return HyperellipticCurve(p, tuple(coeffs), g, target_digits, N, f)


class Disc(NamedTuple):
    x_bar: Optional[int]
    y_bar: Optional[int]
    weierstrass: bool
    infinite: bool


@dataclass(frozen=True)
class CurvePoint:
    x: Optional[PadicNumber] = None
    y: Optional[PadicNumber] = None
    infinite: bool = False
    # how to rebuild the point at another precision: ("rational", x, y) or
    # ("lift", x0, residue); None for points given only p-adically
    source: Optional[tuple] = field(default=None, compare=False, repr=False)

    @property
    def prec(self):
        """Digits to which the point is known."""
        if self.infinite:
            return float("inf")
        return min(self.x.prec, self.y.prec)

    def __str__(self):
        if self.infinite:
            return "inf"
        return f"({self.x}, {self.y})"


INFINITY = CurvePoint(infinite=True)


def point(curve, x, y, check=True):
    """Point from coordinates (rationals or PadicNumbers), checked on the curve."""
    source = None
    if not isinstance(x, PadicNumber) and not isinstance(y, PadicNumber):
        source = ("rational", Fraction(x), Fraction(y))
    P = CurvePoint(curve.padic(x), curve.padic(y), source=source)
    if check:
        check_on_curve(curve, P)
    return P


def check_on_curve(curve, P):
    if P.infinite:
        return
    r = P.y * P.y - curve.f_at(P.x)
    if not r.is_zero():
        raise PointError(f"{P} is not on the curve: y^2 - f(x) = {r}")


def lift_point(curve, x0, sign_residue=None):
    """The point with x-coordinate x0 whose y reduces to ``sign_residue``.

    When f(x0) has even positive valuation 2k, y = p^k * u and the residue
    selects u mod p.  f(x0) = 0 gives the Weierstrass point (x0, 0).
    """
    p = curve.p
    x = curve.padic(x0)
    fx = curve.f_at(x)
    source = None if isinstance(x0, PadicNumber) else ("lift", Fraction(x0), sign_residue)
    if fx.is_zero():
        return CurvePoint(x, PadicNumber.zero(p, fx.prec), source=source)
    v = fx.val
    if v % 2:
        raise PointError(f"f({x0}) has odd valuation {v}; no point over Q_p")
    if sign_residue is None:
        raise PointError("a residue for y must be chosen")
    unit = PadicNumber(p, 0, fx.unit, fx.prec - v)
    try:
        r = sqrt_unit(unit, sign_residue)
    except ValueError as e:
        raise PointError(str(e)) from None
    y = r * PadicNumber(p, v // 2, 1, fx.prec) if v else r
    return CurvePoint(x, y, source=source)


def at_precision(curve, P):
    """Rebuild P at the curve's working precision when its origin is known."""
    if P.infinite or P.source is None:
        return P
    kind, a, b = P.source
    if kind == "rational":
        return point(curve, a, b)
    return lift_point(curve, a, b)


def involution(P):
    if P.infinite:
        return P
    return CurvePoint(P.x, -P.y)


def classify_disc(curve, P):
    if P.infinite:
        return Disc(None, None, True, True)
    if P.x.valuation < 0:
        raise DiscError(f"x-coordinate of {P} is not integral (infinite disc)")
    xb = P.x.residue()
    yb = P.y.residue()
    return Disc(xb, yb, yb == 0, False)


def is_weierstrass_disc(curve, P):
    return classify_disc(curve, P).weierstrass


def same_disc(curve, P, Q):
    return classify_disc(curve, P) == classify_disc(curve, Q)


def frobenius_point(curve, P):
    """Image of P under the lift x -> x^p, y -> y^p (1 + (f(x^p) - f(x)^p)/f(x)^p)^(1/2)."""
    d = classify_disc(curve, P)
    if d.weierstrass:
        raise DiscError("Frobenius image only defined here for non-Weierstrass discs")
    xp = P.x ** curve.p
    # phi(y)^2 = f(x^p) and phi(y) = y^p mod p, and y^p = y mod p
    yp = sqrt_unit(curve.f_at(xp), d.y_bar)
    return CurvePoint(xp, yp)


def teichmuller_point(curve, P):
    """The Frobenius-fixed point of P's residue disc."""
    d = classify_disc(curve, P)
    if d.weierstrass:
        raise DiscError("Weierstrass discs have no Teichmuller point")
    x = teichmuller_lift(curve.padic(d.x_bar)) if d.x_bar else PadicNumber.zero(curve.p, curve.working_prec)
    y = sqrt_unit(curve.f_at(x), d.y_bar)
    return CurvePoint(x, y)


def weierstrass_root(curve, x_bar):
    """Hensel lift of the simple root x_bar of f mod p."""
    f = curve.f
    df = f.derivative()
    a = curve.padic(x_bar)
    if not curve.f_at(a).valuation >= 1:
        raise DiscError(f"{x_bar} is not a root of f mod {curve.p}")
    N = curve.working_prec
    a_int = x_bar
    done = 1
    while done < N:
        done = min(2 * done, N)
        a = curve.padic(a_int, done)
        a = a - evaluate(f, a) / evaluate(df, a)
        a_int = a.lift() % curve.p ** done
    return curve.padic(a_int)


def nearest_weierstrass_point(curve, P):
    d = classify_disc(curve, P)
    if d.infinite:
        raise DiscError("the infinite disc's Weierstrass point is infinity")
    if not d.weierstrass:
        raise DiscError(f"{P} is not in a Weierstrass disc")
    a = weierstrass_root(curve, d.x_bar)
    return CurvePoint(a, PadicNumber.zero(curve.p, curve.working_prec))


def is_weierstrass_point(curve, P):
    if P.infinite:
        return True
    return P.y.is_zero()
