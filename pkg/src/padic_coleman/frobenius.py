"""Frobenius action on the odd de Rham cohomology of y^2 = f(x).

Elements of the weak completion are finite sums sum_j B_j(x) y^(-j).  A
function is stored as such a sum; an odd 1-form g(x, y) dx/2y stores g (so
its y-exponents are even).  The reduction to the basis x^i dx/2y works on
plain integers: every value is scaled by p^depth and kept modulo
p^(prec + depth), so divisions by p are exact integer divisions and the
loss of precision is accounted for by the certificate rather than tracked
per coefficient.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .curve import classify_disc
from .errors import DiscError, FormError, PrecisionError
from .padic import PadicNumber, floor_log, valuation
from .series import PadicPolynomial, evaluate


class DaggerForm:
    """Truncated element of the weak completion.

    ``terms`` maps j to B_j, meaning B_j(x) * y^(-j).  With role "form" the
    sum is the g of g(x, y) dx/2y.
    """

    FUNCTION = "function"
    FORM = "form"

    def __init__(self, terms, p, role=FUNCTION):
        if role not in (self.FUNCTION, self.FORM):
            raise ValueError(f"unknown role {role!r}")
        self.p = p
        self.role = role
        self.terms = {j: B for j, B in sorted(terms.items()) if B.coeffs}

    @classmethod
    def from_rationals(cls, curve, terms, role=FUNCTION, prec=None):
        prec = curve.working_prec if prec is None else prec
        return cls({j: PadicPolynomial.from_rationals(c, curve.p, prec) for j, c in terms.items()},
                   curve.p, role)

    def is_zero(self):
        return not self.terms

    def is_odd(self):
        want = 1 if self.role == self.FUNCTION else 0
        return all(j % 2 == want for j in self.terms)

    def __add__(self, other):
        if other.role != self.role:
            raise ValueError("cannot add a function and a form")
        terms = dict(self.terms)
        for j, B in other.terms.items():
            terms[j] = terms[j] + B if j in terms else B
        return DaggerForm(terms, self.p, self.role)

    def __neg__(self):
        return DaggerForm({j: -B for j, B in self.terms.items()}, self.p, self.role)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return DaggerForm({j: B * c for j, B in self.terms.items()}, self.p, self.role)

    @property
    def prec(self):
        return min((c.prec for B in self.terms.values() for c in B), default=None)

    def __repr__(self):
        body = " + ".join(f"[{', '.join(map(str, B))}]*y^{-j}" for j, B in self.terms.items())
        return f"DaggerForm({self.role}: {body or '0'})"


def differential(h, curve):
    """d(h) as an odd-or-even form g dx/2y.

    d(B y^-j) = (2 B' y^(1-j) - j B f' y^(-1-j)) dx/2y.
    """
    if h.role != DaggerForm.FUNCTION:
        raise ValueError("differential of a non-function")
    df = curve.f.derivative()
    out = DaggerForm({}, curve.p, DaggerForm.FORM)
    for j, B in h.terms.items():
        part = {}
        dB = B.derivative() * 2
        if dB.coeffs:
            part[j - 1] = dB
        if j:
            part[j + 1] = B * df * (-j)
        out = out + DaggerForm(part, curve.p, DaggerForm.FORM)
    return out


def evaluate_dagger(h, P):
    """sum_j B_j(x(P)) y(P)^(-j) at a point of a non-Weierstrass disc."""
    if P.infinite or P.y.valuation != 0:
        raise DiscError("exact parts only converge on non-Weierstrass discs")
    if h.role != DaggerForm.FUNCTION:
        raise ValueError("evaluate_dagger needs a function")
    x, y = P.x, P.y
    if not h.terms:
        return PadicNumber.zero(x.p, min(x.prec, y.prec))
    yinv = 1 / y
    total = None
    for j, B in h.terms.items():
        yj = yinv ** j if j > 0 else y ** (-j)
        t = evaluate(B, x) * yj
        total = t if total is None else total + t
    return total


# integer polynomial helpers (coefficient lists low -> high) ---------------


def _padd(a, b, mod):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % mod
    return out


def _pmul(a, b, mod):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [c % mod for c in out]


def _pdivmod_monic(a, f, mod):
    """a = q*f + r with f monic."""
    n = len(f) - 1
    if len(a) <= n:
        return [], list(a)
    r = list(a)
    q = [0] * (len(a) - n)
    for k in range(len(a) - 1, n - 1, -1):
        c = r[k] % mod
        if c:
            s = k - n
            q[s] = c
            for i in range(n):
                r[s + i] -= c * f[i]
        r[k] = 0
    return q, [c % mod for c in r[:n]]


def _trimz(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _solve_fraction(rows, rhs):
    """Exact Gaussian elimination over Q."""
    n = len(rows)
    A = [list(map(Fraction, r)) + [Fraction(b)] for r, b in zip(rows, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("singular system")
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [c * inv for c in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                t = A[r][col]
                A[r] = [x - t * y for x, y in zip(A[r], A[col])]
    return [A[r][n] for r in range(n)]


@functools.lru_cache(maxsize=None)
def bezout(f_rational):
    """Polynomials a, b over Q with a f + b f' = 1, deg a < deg f', deg b < deg f."""
    f = list(f_rational)
    d = len(f) - 1
    df = [i * c for i, c in enumerate(f)][1:]
    na, nb = d - 1, d
    size = na + nb
    rows = [[Fraction(0)] * size for _ in range(size)]
    for i in range(na):
        for k, c in enumerate(f):
            if i + k < size:
                rows[i + k][i] += c
    for i in range(nb):
        for k, c in enumerate(df):
            rows[i + k][na + i] += c
    rhs = [1] + [0] * (size - 1)
    sol = _solve_fraction(rows, rhs)
    return tuple(sol[:na]), tuple(sol[na:])


def _residue(r, p, mod):
    r = Fraction(r)
    if r.denominator % p == 0:
        raise PrecisionError(f"{r} is not p-integral")
    return r.numerator * pow(r.denominator, -1, mod) % mod


class _Reducer:
    """Cohomological reduction on scaled integers."""

    def __init__(self, curve, prec, depth):
        p = curve.p
        self.p = p
        self.g = curve.genus
        self.prec = prec
        self.depth = depth
        self.mod = p ** (prec + depth)
        self.scale = p ** depth
        mod = self.mod
        self.f = [_residue(c, p, mod) for c in curve.f_rational]
        self.df = [i * c % mod for i, c in enumerate(self.f)][1:]
        a, b = bezout(curve.f_rational)
        self.a = [_residue(c, p, mod) for c in a]
        self.b = [_residue(c, p, mod) for c in b]
        self.max_divisor = 1

    def div(self, A, d):
        p = self.p
        self.max_divisor = max(self.max_divisor, abs(d))
        v = 0
        while d % p == 0:
            d //= p
            v += 1
        A = A * pow(d, -1, self.mod) % self.mod
        if v:
            q, r = divmod(A, p ** v)
            if r:
                raise PrecisionError("reduction needs more denominator headroom")
            A = q
        return A

    def to_int(self, c):
        """PadicNumber value -> scaled integer."""
        if c.unit == 0:
            return 0
        e = c.val + self.depth
        if e < 0:
            raise PrecisionError("coefficient valuation below the reduction's headroom")
        return c.unit * self.p ** e % self.mod

    def to_padic(self, A, prec):
        return PadicNumber.from_rational(A, self.scale, self.p, prec) if A else PadicNumber.zero(self.p, prec)

    def reduce(self, strata):
        """Reduce sum_m A_m(x) y^(-2m) dx/2y (m >= 0).

        Returns (exact, coeffs): exact maps odd j to integer polynomials of the
        function sum B_j y^-j, coeffs holds the 2g basis coefficients.
        """
        mod, f, g = self.mod, self.f, self.g
        strata = {m: list(A) for m, A in strata.items()}
        exact = {}
        top = max(strata, default=0)
        for m in range(top, 0, -1):
            A = strata.pop(m, None)
            if not A or not any(A):
                continue
            q, r = _pdivmod_monic(A, f, mod)
            below = strata.get(m - 1, [])
            if q:
                below = _padd(below, q, mod)
            r = _trimz(r)
            if r:
                # r = r(af + bf'); the bf' part is exact up to 2(rb)'/(2m-1) y^(2-2m)
                B = _pmul(r, self.b, mod)
                dB = [2 * i * c % mod for i, c in enumerate(B)][1:]
                below = _padd(below, _pmul(r, self.a, mod), mod)
                below = _padd(below, [self.div(c, 2 * m - 1) for c in dB], mod)
                exact[2 * m - 1] = _padd(exact.get(2 * m - 1, []),
                                         [self.div(-c % mod, 2 * m - 1) for c in B], mod)
            strata[m - 1] = below
        A = list(strata.get(0, []))
        n = 2 * g
        E = [0] * max(len(A) - n, 0)
        for D in range(len(A) - 1, n - 1, -1):
            c = A[D] % mod
            if not c:
                continue
            k = D - n
            fac = self.div(c, 2 * k + n + 1)
            E[k] = fac
            # subtract fac * (2k x^(k-1) f + x^k f')
            if k:
                for i, fc in enumerate(f):
                    A[k - 1 + i] -= fac * 2 * k * fc
            for i, fc in enumerate(self.df):
                A[k + i] -= fac * fc
            A[D] = 0
        coeffs = [A[i] % mod if i < len(A) else 0 for i in range(n)]
        if any(E):
            exact[-1] = _padd(exact.get(-1, []), E, mod)
        return self.canonical(exact), coeffs

    def canonical(self, exact):
        """Rewrite so that every B_j has degree <= 2g, using f = y^2."""
        out = {}
        pending = {j: _trimz([c % self.mod for c in B]) for j, B in exact.items()}
        while pending:
            j = max(pending)
            B = pending.pop(j)
            q, r = _pdivmod_monic(B, self.f, self.mod)
            r = _trimz(r)
            if r:
                out[j] = r
            q = _trimz(q)
            if q:
                pending[j - 2] = _trimz(_padd(pending.get(j - 2, []), q, self.mod))
        return out


@dataclass(frozen=True)
class FrobeniusData:
    M: tuple
    exact_parts: tuple
    certified_prec: int
    working_prec: int
    loss: int

    @property
    def size(self):
        return len(self.M)


def frobenius_loss(N, p, g):
    return 1 + floor_log(p, max(N, 2 * g + 1))


GUARD_EXTRA = 2


def internal_guard(N, p, g):
    """Extra digits carried by the Frobenius reduction beyond N."""
    return frobenius_loss(N, p, g) + GUARD_EXTRA


def _binomial_half(k):
    """binom(-1/2, k) = (-1)^k C(2k, k) / 4^k."""
    return Fraction((-1) ** k * comb(2 * k, k), 4 ** k)


def _delta(curve, mod):
    """f(x^p) - f(x)^p as integers mod ``mod``."""
    p = curve.p
    f = [_residue(c, p, mod) for c in curve.f_rational]
    fxp = [0] * (p * (len(f) - 1) + 1)
    for i, c in enumerate(f):
        fxp[p * i] = c
    fp = [1]
    for _ in range(p):
        fp = _pmul(fp, f, mod)
    return _trimz([(a - b) % mod for a, b in itertools.zip_longest(fxp, fp, fillvalue=0)])


def _inverse_y_terms(curve, N, mod):
    """{j: integer poly} with y/phi(y) = sum_k binom(-1/2,k) Delta^k y^(1-p-2pk)."""
    p = curve.p
    delta = _delta(curve, mod)
    out = {}
    power = [1]
    for k in range(N):
        b = _residue(_binomial_half(k), p, mod)
        out[p - 1 + 2 * p * k] = [c * b % mod for c in power]
        power = _pmul(power, delta, mod)
    return out


def frobenius_inverse_y(curve):
    """y/phi(y) truncated after N binomial terms (term k is divisible by p^k)."""
    N = curve.working_prec
    mod = curve.p ** N
    terms = _inverse_y_terms(curve, N, mod)
    return DaggerForm({j: PadicPolynomial([PadicNumber.from_rational(c, 1, curve.p, N) for c in B], curve.p)
                       for j, B in terms.items()}, curve.p)


@functools.lru_cache(maxsize=32)
def frobenius_action(curve):
    """phi^*(x^i dx/2y) = d f_i + sum_j M[i][j] x^j dx/2y for i < 2g."""
    p, g, N = curve.p, curve.genus, curve.working_prec
    loss = frobenius_loss(N, p, g)
    cert = N - loss
    # the input is exact, so the reduction runs with guard digits; rounding
    # inside the recursion costs more than the final denominators alone
    inner = N + internal_guard(N, p, g)
    depth = inner + 4
    red = _Reducer(curve, inner, depth)
    mod = red.mod
    inv_y = _inverse_y_terms(curve, inner, mod)
    # p x^(p-1) (y/phi(y)), scaled; the 1-p-2pk exponent of y plus dx/2y gives stratum (p-1)/2 + pk
    common = {}
    for j, B in inv_y.items():
        common[j // 2] = [0] * (p - 1) + [c * p * red.scale % mod for c in B]
    M = []
    exact_parts = []
    for i in range(2 * g):
        strata = {m: [0] * (p * i) + B for m, B in common.items()}
        exact, coeffs = red.reduce(strata)
        M.append(tuple(red.to_padic(c, cert) for c in coeffs))
        exact_parts.append(DaggerForm(
            {j: PadicPolynomial([red.to_padic(c, cert) for c in B], p) for j, B in exact.items()}, p))
    return FrobeniusData(tuple(M), tuple(exact_parts), cert, N, loss)


def reduction_loss(max_divisor, p):
    return 1 + floor_log(p, max(max_divisor, 1))


def reduce_form(omega, curve):
    """Write an odd form as d(h) + sum c_i x^i dx/2y.

    Returns (h, [c_0, ..., c_{2g-1}]), both certified to the input precision
    minus the reduction loss.
    """
    if omega.role != DaggerForm.FORM:
        raise FormError("reduce_form needs a 1-form")
    if not omega.is_odd():
        raise FormError("only odd forms (even y-exponents in g) reduce to the odd basis")
    p, g = curve.p, curve.genus
    if omega.is_zero():
        z = PadicNumber.zero(p, curve.working_prec)
        return DaggerForm({}, p), [z] * (2 * g)
    prec_in = omega.prec
    vmin = min((c.val for B in omega.terms.values() for c in B if not c.is_zero()), default=0)
    mmax = max(max(omega.terms), 0) // 2
    degmax = max(len(B) for B in omega.terms.values()) + (2 * g + 1) * max(0, -min(omega.terms) // 2)
    guess = reduction_loss(max(2 * mmax, 2 * degmax + 1, 2 * g + 1), p)
    depth = max(0, -vmin) + 2 * guess + 4
    # inputs are known to prec_in; the extra digits only absorb internal rounding
    red = _Reducer(curve, prec_in + guess + GUARD_EXTRA, depth)
    strata = {}
    for j, B in omega.terms.items():
        coeffs = [red.to_int(c) for c in B]
        if j >= 0:
            m = j // 2
        else:
            # y^(-j) = f^(-j/2): fold positive y-powers into stratum 0
            for _ in range(-j // 2):
                coeffs = _pmul(coeffs, red.f, red.mod)
            m = 0
        strata[m] = _padd(strata.get(m, []), coeffs, red.mod)
    exact, coeffs = red.reduce(strata)
    loss = reduction_loss(red.max_divisor, p)
    cert = prec_in - loss
    h = DaggerForm({j: PadicPolynomial([red.to_padic(c, cert) for c in B], p) for j, B in exact.items()}, p)
    return h, [red.to_padic(c, cert) for c in coeffs]


def _det(M):
    n = len(M)
    if n == 0:
        return 1
    total = None
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        t = M[0][perm[0]]
        for i in range(1, n):
            t = t * M[i][perm[i]]
        if inv % 2:
            t = -t
        total = t if total is None else total + t
    return total


def char_poly(M):
    """det(lambda I - M), division free: c_{n-k} = (-1)^k * (sum of k x k principal minors)."""
    n = len(M)
    p = M[0][0].p
    top = max(c.prec for row in M for c in row)
    coeffs = [None] * (n + 1)
    coeffs[n] = PadicNumber.from_rational(1, 1, p, top)
    for k in range(1, n + 1):
        s = None
        for idx in itertools.combinations(range(n), k):
            d = _det([[M[i][j] for j in idx] for i in idx])
            s = d if s is None else s + d
        coeffs[n - k] = s if k % 2 == 0 else -s
    return PadicPolynomial(coeffs, p)


def zeta_numerator(M):
    """Reverse characteristic polynomial det(I - T M), coefficients low -> high."""
    cp = char_poly(M)
    return list(reversed(cp.coeffs))


def nearest_integer(a):
    """Symmetric integer representative of an integral p-adic value (display hint)."""
    if a.is_zero():
        return 0
    if a.val < 0:
        return None
    n = a.lift()
    mod = a.p ** a.prec
    n %= mod
    return n - mod if n > mod // 2 else n
