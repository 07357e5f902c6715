"""Capped-precision arithmetic in Q_p.

A nonzero value is stored as ``p**val * unit`` with ``unit`` a p-adic unit
known modulo ``p**(prec - val)``; ``prec`` is the absolute precision.  Zero
only exists as ``O(p**prec)``.  Precision is propagated pessimistically and
never silently raised.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .errors import ParseError, PrecisionError


def valuation(n, p):
    """p-adic valuation of a nonzero int or Fraction."""
    if n == 0:
        raise ValueError("valuation of zero")
    if isinstance(n, Fraction):
        return valuation(n.numerator, p) - valuation(n.denominator, p)
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def floor_log(p, n):
    """Largest k with p**k <= n (n >= 1)."""
    k = 0
    q = p
    while q <= n:
        q *= p
        k += 1
    return k


def is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class PadicNumber:
    __slots__ = ("p", "val", "unit", "prec")

    def __init__(self, p, val, unit, prec):
        # Callers go through _make; this assumes normalized input.
        self.p = p
        self.val = val
        self.unit = unit
        self.prec = prec

    # construction ------------------------------------------------------

    @classmethod
    def _make(cls, p, val, unit, prec):
        if unit == 0 or val >= prec:
            return cls(p, prec, 0, prec)
        while unit % p == 0:
            unit //= p
            val += 1
            if val >= prec:
                return cls(p, prec, 0, prec)
        return cls(p, val, unit % p ** (prec - val), prec)

    @classmethod
    def zero(cls, p, prec):
        return cls(p, prec, 0, prec)

    @classmethod
    def from_rational(cls, numerator, denominator, p, abs_prec):
        if denominator == 0:
            raise ZeroDivisionError("denominator is zero")
        r = Fraction(numerator, denominator)
        if r == 0:
            return cls.zero(p, abs_prec)
        num, den = r.numerator, r.denominator
        v = 0
        while num % p == 0:
            num //= p
            v += 1
        while den % p == 0:
            den //= p
            v -= 1
        if v >= abs_prec:
            return cls.zero(p, abs_prec)
        mod = p ** (abs_prec - v)
        return cls(p, v, num * pow(den, -1, mod) % mod, abs_prec)

    @classmethod
    def coerce(cls, x, p, prec):
        """Turn an int, Fraction or PadicNumber into a PadicNumber."""
        if isinstance(x, PadicNumber):
            if x.p != p:
                raise ValueError(f"prime mismatch: {x.p} != {p}")
            return x
        r = Fraction(x)
        return cls.from_rational(r.numerator, r.denominator, p, prec)

    # accessors ---------------------------------------------------------

    @property
    def abs_prec(self):
        return self.prec

    @property
    def rel_prec(self):
        return 0 if self.unit == 0 else self.prec - self.val

    @property
    def valuation(self):
        return math.inf if self.unit == 0 else self.val

    @property
    def unit_digits(self):
        return self.unit

    def is_zero(self):
        """True when indistinguishable from zero at the stated precision."""
        return self.unit == 0

    def is_unit(self):
        return self.unit != 0 and self.val == 0

    def residue(self):
        """Reduction modulo p; requires an integral value."""
        if self.unit == 0:
            if self.prec < 1:
                raise PrecisionError("residue of O(p^%d) is unknown" % self.prec)
            return 0
        if self.val < 0:
            raise ValueError("residue of a non-integral p-adic number")
        return self.unit % self.p if self.val == 0 else 0

    def lift(self):
        """Integer representative in [0, p**prec) of an integral value."""
        if self.unit == 0:
            return 0
        if self.val < 0:
            raise ValueError("not integral")
        return self.unit * self.p ** self.val

    def to_fraction(self):
        """The rational p**val * unit (digits beyond precision dropped)."""
        if self.unit == 0:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.val

    def add_bigoh(self, prec):
        """Cap the absolute precision at ``prec``."""
        if prec >= self.prec:
            return self
        if self.unit == 0:
            return PadicNumber.zero(self.p, prec)
        return PadicNumber._make(self.p, self.val, self.unit, prec)

    # arithmetic --------------------------------------------------------

    def _other(self, other):
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError(f"prime mismatch: {self.p} != {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicNumber.coerce(other, self.p, self.prec)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        p = self.p
        prec = min(self.prec, o.prec)
        if o.unit == 0:
            return self.add_bigoh(prec)
        if self.unit == 0:
            return o.add_bigoh(prec)
        v = min(self.val, o.val)
        a = self.unit * p ** (self.val - v) + o.unit * p ** (o.val - v)
        return PadicNumber._make(p, v, a, prec)

    __radd__ = __add__

    def __neg__(self):
        if self.unit == 0:
            return self
        return PadicNumber(self.p, self.val, (-self.unit) % self.p ** (self.prec - self.val), self.prec)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._scale(Fraction(other))
        o = self._other(other)
        if o is None:
            return NotImplemented
        p = self.p
        if self.unit == 0 or o.unit == 0:
            if self.unit == 0 and o.unit == 0:
                return PadicNumber.zero(p, self.prec + o.prec)
            if self.unit == 0:
                return PadicNumber.zero(p, self.prec + o.val)
            return PadicNumber.zero(p, o.prec + self.val)
        rel = min(self.prec - self.val, o.prec - o.val)
        v = self.val + o.val
        return PadicNumber(p, v, self.unit * o.unit % p ** rel, v + rel)

    __rmul__ = __mul__

    def _scale(self, r):
        # multiplication by an exact rational keeps relative precision
        p = self.p
        if r == 0:
            return PadicNumber.zero(p, self.prec)
        v = valuation(r, p)
        if self.unit == 0:
            return PadicNumber.zero(p, self.prec + v)
        num, den = r.numerator, r.denominator
        num //= p ** max(v, 0)
        den //= p ** max(-v, 0)
        rel = self.prec - self.val
        mod = p ** rel
        u = self.unit * num * pow(den, -1, mod) % mod
        return PadicNumber(p, self.val + v, u, self.val + v + rel)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by exact zero")
            return self._scale(1 / Fraction(other))
        o = self._other(other)
        if o is None:
            return NotImplemented
        if o.unit == 0:
            raise PrecisionError(f"division by a value indistinguishable from zero: {o}")
        p = self.p
        if self.unit == 0:
            return PadicNumber.zero(p, self.prec - o.val)
        rel = min(self.prec - self.val, o.prec - o.val)
        mod = p ** rel
        v = self.val - o.val
        return PadicNumber(p, v, self.unit * pow(o.unit, -1, mod) % mod, v + rel)

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if self.unit == 0:
                raise PrecisionError(f"division by a value indistinguishable from zero: {self}")
            p = self.p
            rel = self.prec - self.val
            inv = PadicNumber(p, -self.val, pow(self.unit, -1, p ** rel), rel - self.val)
            return inv._scale(Fraction(other))
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        p = self.p
        if e == 0:
            if self.unit == 0:
                raise PrecisionError("0**0 with inexact zero")
            return PadicNumber(p, 0, 1, self.prec - self.val)
        if e < 0:
            return (PadicNumber(p, 0, 1, self.prec - self.val) / self) ** (-e)
        if self.unit == 0:
            return PadicNumber.zero(p, self.prec * e if self.prec > 0 else self.prec)
        rel = self.prec - self.val
        v = self.val * e
        return PadicNumber(p, v, pow(self.unit, e, p ** rel), v + rel)

    # comparison --------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, PadicNumber):
            return NotImplemented
        return (self.p, self.val, self.unit, self.prec) == (other.p, other.val, other.unit, other.prec)

    def __hash__(self):
        return hash((self.p, self.val, self.unit, self.prec))

    def agrees_with(self, other, prec=None):
        """Indistinguishable from ``other`` at their shared precision (or ``prec``)."""
        d = self - other
        if prec is not None and d.prec < prec:
            return False
        return d.is_zero() or (prec is not None and d.val >= prec)

    def __repr__(self):
        return render(self)

    __str__ = __repr__


# operations ------------------------------------------------------------


def from_rational(numerator, denominator, p, abs_prec):
    return PadicNumber.from_rational(numerator, denominator, p, abs_prec)


def arith(a, b, op):
    if a.p != b.p:
        raise ValueError(f"prime mismatch: {a.p} != {b.p}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def _newton_sqrt_int(u, r, p, k):
    """Lift r (r*r == u mod p) to a root of u modulo p**k."""
    done = 1
    while done < k:
        done = min(2 * done, k)
        mod = p ** done
        r = (r - (r * r - u) * pow(2 * r, -1, mod)) % mod
    return r


def sqrt_unit(a, residue_choice):
    """Square root of a unit, selected by its residue mod p."""
    p = a.p
    if not a.is_unit():
        raise ValueError(f"sqrt_unit needs a unit, got {a}")
    u = a.unit % p
    if pow(u, (p - 1) // 2, p) != 1:
        raise ValueError(f"{u} is not a square modulo {p}")
    r = residue_choice % p
    if r * r % p != u:
        raise ValueError(f"residue choice {residue_choice} does not square to {u} mod {p}")
    return PadicNumber(p, 0, _newton_sqrt_int(a.unit, r, p, a.prec), a.prec)


def teichmuller_lift(a):
    """The (p-1)-st root of unity congruent to ``a`` mod p."""
    p = a.p
    if not a.is_unit():
        raise ValueError(f"Teichmuller lift needs a unit, got {a}")
    t = a.unit % p
    k = a.prec
    done = 1
    while done < k:
        done = min(2 * done, k)
        mod = p ** done
        # Newton step on t**(p-1) - 1
        t = (t - (pow(t, p - 1, mod) - 1) * pow((p - 1) * pow(t, p - 2, mod), -1, mod)) % mod
    return PadicNumber(p, 0, t, k)


# text form -------------------------------------------------------------


def _power(p, e):
    if e == 1:
        return str(p)
    return f"{p}^{e}"


def render(a):
    """Canonical digit expansion, e.g. ``3 + 7 + O(7^2)``."""
    p = a.p
    terms = []
    if a.unit != 0:
        u = a.unit
        e = a.val
        while u:
            u, d = divmod(u, p)
            if d:
                if e == 0:
                    terms.append(str(d))
                elif d == 1:
                    terms.append(_power(p, e))
                else:
                    terms.append(f"{d}*{_power(p, e)}")
            e += 1
    terms.append(f"O({_power(p, a.prec)})")
    return " + ".join(terms)


_BIGOH = re.compile(r"^O\((\d+)(?:\^(-?\d+))?\)$")
_TERM = re.compile(r"^(?:(\d+)\*)?(\d+)(?:\^(-?\d+))?$")
_RATIONAL = re.compile(r"^[+-]?\d+(?:/\d+)?$")


def parse(text, p, default_prec=None):
    """Inverse of :func:`render`; also accepts plain rationals ``a/b``.

    A rational needs ``default_prec`` for its absolute precision.
    """
    s = text.strip()
    if _RATIONAL.match(s.replace(" ", "")):
        if default_prec is None:
            raise ParseError(f"rational {s!r} needs a precision")
        r = Fraction(s.replace(" ", ""))
        return PadicNumber.from_rational(r.numerator, r.denominator, p, default_prec)
    parts = [t.strip() for t in s.split("+")]
    m = _BIGOH.match(parts[-1])
    if not m:
        raise ParseError(f"missing O(p^k) term in {text!r}")
    if int(m.group(1)) != p:
        raise ParseError(f"expected base {p} in {parts[-1]!r}")
    prec = 1 if m.group(2) is None else int(m.group(2))
    total = Fraction(0)
    for t in parts[:-1]:
        m = _TERM.match(t)
        if not m:
            raise ParseError(f"bad term {t!r} in {text!r}")
        coeff, base, exp = m.groups()
        base = int(base)
        if coeff is None and exp is None:
            # bare integer: a digit at p^0, or p itself
            if base == p:
                total += p
            elif base < p:
                total += base
            else:
                raise ParseError(f"bad term {t!r} for p = {p}")
            continue
        if base != p:
            raise ParseError(f"expected base {p} in term {t!r}")
        d = 1 if coeff is None else int(coeff)
        e = 1 if exp is None else int(exp)
        total += d * Fraction(p) ** e
    return PadicNumber.from_rational(total.numerator, total.denominator, p, prec)
