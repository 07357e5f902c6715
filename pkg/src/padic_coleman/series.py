"""Polynomials and truncated power series with PadicNumber coefficients."""

from __future__ import annotations

from fractions import Fraction

from .padic import PadicNumber, floor_log


def _zero_like(p, prec):
    return PadicNumber.zero(p, prec)


class PadicPolynomial:
    """Dense polynomial, coefficients low to high, trailing zeros trimmed."""

    __slots__ = ("p", "coeffs")

    def __init__(self, coeffs, p=None):
        coeffs = list(coeffs)
        if p is None:
            if not coeffs:
                raise ValueError("prime needed for the zero polynomial")
            p = coeffs[0].p
        for c in coeffs:
            if c.p != p:
                raise ValueError("coefficients over different primes")
        while coeffs and coeffs[-1].is_zero():
            coeffs.pop()
        self.p = p
        self.coeffs = tuple(coeffs)

    @classmethod
    def from_rationals(cls, coeffs, p, prec):
        return cls([PadicNumber.coerce(c, p, prec) for c in coeffs], p)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i]

    def __iter__(self):
        return iter(self.coeffs)

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return PadicPolynomial([x + y for x, y in zip(a, b)] + list(a[len(b):]), self.p)

    def __neg__(self):
        return PadicPolynomial([-c for c in self.coeffs], self.p)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, PadicPolynomial):
            return PadicPolynomial([c * other for c in self.coeffs], self.p)
        if not self.coeffs or not other.coeffs:
            return PadicPolynomial([], self.p)
        out = [None] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                t = a * b
                out[i + j] = t if out[i + j] is None else out[i + j] + t
        return PadicPolynomial(out, self.p)

    __rmul__ = __mul__

    def derivative(self):
        return PadicPolynomial([c * i for i, c in enumerate(self.coeffs)][1:], self.p)

    def __call__(self, x):
        return evaluate(self, x)

    def reduce_mod_p(self):
        """Coefficients modulo p (integral coefficients only)."""
        return [c.residue() for c in self.coeffs]

    def __repr__(self):
        return f"PadicPolynomial({list(self.coeffs)!r})"


class TruncatedSeries:
    """Power series known modulo t**order."""

    __slots__ = ("p", "coeffs", "order")

    def __init__(self, coeffs, order, p=None, pad_prec=None):
        coeffs = list(coeffs)[:order]
        if p is None:
            p = coeffs[0].p
        if order < 1:
            raise ValueError("series order must be at least 1")
        if len(coeffs) < order:
            if pad_prec is None:
                pad_prec = max(c.prec for c in coeffs) if coeffs else 0
            coeffs += [_zero_like(p, pad_prec)] * (order - len(coeffs))
        self.p = p
        self.coeffs = coeffs
        self.order = order

    @classmethod
    def constant(cls, c, order):
        return cls([c], order, c.p)

    def truncate(self, order):
        return TruncatedSeries(self.coeffs[:order], min(order, self.order), self.p)

    def __getitem__(self, i):
        return self.coeffs[i]

    def _lift(self, other):
        if isinstance(other, TruncatedSeries):
            return other
        c = PadicNumber.coerce(other, self.p, max(x.prec for x in self.coeffs))
        return TruncatedSeries([c], self.order, self.p, pad_prec=c.prec)

    def __add__(self, other):
        other = self._lift(other)
        n = min(self.order, other.order)
        return TruncatedSeries([self.coeffs[i] + other.coeffs[i] for i in range(n)], n, self.p)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.order, self.p)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            if isinstance(other, (int, Fraction, PadicNumber)):
                return TruncatedSeries([c * other for c in self.coeffs], self.order, self.p)
            return NotImplemented
        n = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(n):
            s = a[0] * b[k]
            for i in range(1, k + 1):
                s = s + a[i] * b[k - i]
            out.append(s)
        return TruncatedSeries(out, n, self.p)

    __rmul__ = __mul__

    def inverse(self):
        b0 = self.coeffs[0]
        if not b0.is_unit():
            raise ValueError("series inverse needs a unit constant term")
        inv0 = 1 / b0
        out = [inv0]
        for k in range(1, self.order):
            s = self.coeffs[1] * out[k - 1]
            for i in range(2, k + 1):
                s = s + self.coeffs[i] * out[k - i]
            out.append(-(s * inv0))
        return TruncatedSeries(out, self.order, self.p)

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.inverse()
        return TruncatedSeries([c / other for c in self.coeffs], self.order, self.p)

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def derivative(self):
        if self.order == 1:
            return TruncatedSeries([], 1, self.p, pad_prec=self.coeffs[0].prec)
        return TruncatedSeries([c * i for i, c in enumerate(self.coeffs)][1:], self.order - 1, self.p)

    def shift_down(self, k=1):
        """Divide by t**k; the dropped coefficients must vanish."""
        for c in self.coeffs[:k]:
            if not c.is_zero():
                raise ValueError("series is not divisible by t^%d" % k)
        if self.order <= k:
            raise ValueError("nothing left after division by t^%d" % k)
        return TruncatedSeries(self.coeffs[k:], self.order - k, self.p)

    def __repr__(self):
        return " + ".join(f"({c})*t^{i}" for i, c in enumerate(self.coeffs)) + f" + O(t^{self.order})"


# operations ----------------------------------------------------------------


def series_arith(a, b, op):
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def series_sqrt(h, root_of_constant):
    """Square root of ``h`` with constant term ``root_of_constant``.

    Newton iteration s <- (s + h/s)/2, doubling the known order each step.
    """
    h0 = h.coeffs[0]
    if not h0.is_unit():
        raise ValueError("series_sqrt needs a unit constant term")
    if not (root_of_constant * root_of_constant).agrees_with(h0):
        raise ValueError("root_of_constant does not square to the constant term")
    s = TruncatedSeries.constant(root_of_constant, 1)
    n = 1
    while n < h.order:
        n = min(2 * n, h.order)
        s = TruncatedSeries(s.coeffs, n, h.p, pad_prec=root_of_constant.prec)
        s = (s + h.truncate(n) / s) / 2
    # the constant term is fixed exactly rather than through the iteration
    s.coeffs[0] = root_of_constant
    return s


def series_integrate(h):
    """Formal antiderivative with zero constant term; order grows by one.

    The coefficient of t**(i+1) is h_i/(i+1) and keeps the precision loss of
    that division.
    """
    cap = max(c.prec for c in h.coeffs)
    out = [_zero_like(h.p, cap)]
    out += [c / (i + 1) for i, c in enumerate(h.coeffs)]
    return TruncatedSeries(out, h.order + 1, h.p)


def mod_p_squarefree(f):
    """True iff the reduction of ``f`` mod p has no repeated roots."""
    p = f.p
    if not f.coeffs or not f.coeffs[-1].is_unit():
        raise ValueError("leading coefficient must be a p-adic unit")
    fb = _trim(f.reduce_mod_p(), p)
    dfb = _trim([i * c % p for i, c in enumerate(fb)][1:], p)
    return len(gcd_mod_p(fb, dfb, p)) == 1


def _trim(a, p):
    a = [c % p for c in a]
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod_p(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - c * bc) % p
        a = _trim(a, p)
    return a


def gcd_mod_p(a, b, p):
    """Monic gcd over F_p of coefficient lists (low to high)."""
    a, b = _trim(a, p), _trim(b, p)
    while b:
        a, b = b, _polymod_p(a, b, p)
    if not a:
        return a
    inv = pow(a[-1], -1, p)
    return [c * inv % p for c in a]


def evaluate(h, t0):
    """Horner evaluation of a polynomial or a truncated series at ``t0``.

    For a series the result is additionally capped at ``order * v_p(t0)``,
    the size of the unseen tail when its coefficients are integral.
    """
    if isinstance(h, TruncatedSeries):
        v = t0.valuation
        if v < 1:
            raise ValueError("truncated series can only be evaluated at t0 with v_p(t0) >= 1")
        acc = h.coeffs[-1]
        for c in reversed(h.coeffs[:-1]):
            acc = acc * t0 + c
        if v == float("inf"):
            return acc
        return acc.add_bigoh(h.order * v)
    if not h.coeffs:
        if isinstance(t0, PadicNumber):
            return PadicNumber.zero(h.p, t0.prec)
        raise ValueError("cannot size the zero polynomial's value")
    acc = h.coeffs[-1]
    for c in reversed(h.coeffs[:-1]):
        acc = acc * t0 + c
    return acc


def compose(poly, s):
    """poly(s(t)) for a polynomial ``poly`` and a truncated series ``s``."""
    acc = TruncatedSeries([poly.coeffs[-1]], s.order, s.p)
    for c in reversed(poly.coeffs[:-1]):
        acc = acc * s + c
    return acc


def tail_bound(order, p, v=1):
    """Valuation bound for the dropped tail of an integrated series.

    Omitting c_i t^i for i >= order from an integral series and then
    integrating and evaluating at t0 with v_p(t0) >= v changes the value by
    something of valuation at least (order+1)*v - floor(log_p(order+1)).
    """
    return (order + 1) * v - floor_log(p, order + 1)
