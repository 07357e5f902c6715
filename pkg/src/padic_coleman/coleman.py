"""Coleman integrals on y^2 = f(x): tiny integrals, the Frobenius linear
system, Weierstrass endpoints and the precision audit.

The basis forms are w_i = x^i dx/2y for 0 <= i < 2g.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .curve import (
    CurvePoint,
    at_precision,
    classify_disc,
    frobenius_point,
    involution,
    is_weierstrass_point,
    nearest_weierstrass_point,
    teichmuller_point,
    weierstrass_root,
)
from .errors import DiscError, FormError, PrecisionError
from .frobenius import DaggerForm, evaluate_dagger, frobenius_action, reduce_form
from .padic import PadicNumber, floor_log
from .series import TruncatedSeries, compose, evaluate, series_integrate, series_sqrt, tail_bound

MAX_RETRIES = 4


@dataclass(frozen=True)
class PrecisionAudit:
    n_input: int
    frobenius_loss: int
    certified_prec: Optional[int]
    det_loss: int
    log_loss: int
    tiny_loss: int
    audited_prec: int
    pivots: tuple = ()


@dataclass(frozen=True)
class IntegralResult:
    values: tuple
    audited_prec: int
    audit: PrecisionAudit

    @property
    def value(self):
        if len(self.values) != 1:
            raise ValueError("result holds several integrals")
        return self.values[0]

    def display(self, digits):
        """Values cut to at most ``digits`` digits (and the audited precision)."""
        k = min(digits, self.audited_prec)
        return tuple(v.add_bigoh(k) for v in self.values)


@dataclass(frozen=True)
class DiscPath:
    """Local coordinates along a path inside one residue disc.

    Non-Weierstrass disc: parameter t, x(t) = (1-t) x(P) + t x(Q), ends
    t = 0 and t = 1.  Weierstrass disc: parameter s = y, x(s) from
    f(x) = s^2, ends s = y(P) and s = y(Q).
    """

    x_series: TruncatedSeries
    y_series: TruncatedSeries
    order: int
    start: PadicNumber
    end: PadicNumber
    weierstrass: bool
    step_valuation: int


def audit_precision(n_input, p, certified_prec=None, pivot_valuations=(), tiny_order=None, frobenius_loss=0):
    """n - max(m, floor(log_p n)), m the summed pivot valuations, also capped
    by the Frobenius certificate minus m."""
    m = sum(pivot_valuations)
    log_loss = floor_log(p, max(n_input, 1))
    audited = n_input - max(m, log_loss)
    if certified_prec is not None:
        audited = min(audited, certified_prec - m)
    tiny_loss = floor_log(p, tiny_order) if tiny_order else 0
    return PrecisionAudit(n_input, frobenius_loss, certified_prec, m, log_loss, tiny_loss, audited,
                          tuple(pivot_valuations))


def truncation_order(digits, p, v=1):
    """Series order for tiny integrals correct to ``digits`` digits."""
    m = digits + floor_log(p, max(digits, 1)) + 1
    while tail_bound(m, p, v) < digits:
        m += 1
    return m


# paths ---------------------------------------------------------------------


def _check_tiny(curve, P, Q):
    if P.infinite or Q.infinite:
        raise DiscError("tiny integrals need affine endpoints")
    dP, dQ = classify_disc(curve, P), classify_disc(curve, Q)
    if dP != dQ:
        raise DiscError(f"{P} and {Q} lie in different residue discs")
    return dP


def _x_of_s(curve, x_bar, order):
    """x(s) with f(x(s)) = s^2 and x(0) the Weierstrass root over x_bar."""
    p = curve.p
    N = curve.working_prec
    xw = weierstrass_root(curve, x_bar)
    df = curve.f.derivative()
    s2 = TruncatedSeries([PadicNumber.zero(p, N), PadicNumber.zero(p, N), curve.padic(1)], order, p)
    X = TruncatedSeries([xw], 1, p)
    n = 1
    while n < order:
        n = min(2 * n, order)
        X = TruncatedSeries(X.coeffs, n, p, pad_prec=N)
        X = X - (compose(curve.f, X) - s2.truncate(n)) / compose(df, X)
    return X


def disc_path(curve, P, Q, order):
    d = _check_tiny(curve, P, Q)
    p = curve.p
    if d.weierstrass:
        X = _x_of_s(curve, d.x_bar, order)
        S = TruncatedSeries([PadicNumber.zero(p, curve.working_prec), curve.padic(1)], order, p)
        v = min(P.y.valuation, Q.y.valuation)
        return DiscPath(X, S, order, P.y, Q.y, True, v)
    dx = Q.x - P.x
    xs = TruncatedSeries([P.x, dx], order, p)
    ys = series_sqrt(compose(curve.f, xs), P.y)
    return DiscPath(xs, ys, order, curve.padic(0), curve.padic(1), False, dx.valuation)


def _sum_at_one(h, cap):
    """Value at t = 1 of an integrated t-series whose tail is O(p^cap)."""
    acc = h.coeffs[0]
    for c in h.coeffs[1:]:
        acc = acc + c
    return acc.add_bigoh(cap)


def _integrate_along(path, integrand, p):
    """Integral of integrand(t) dt (or ds) between the path's ends."""
    H = series_integrate(integrand)
    cap = tail_bound(integrand.order, p, path.step_valuation)
    if path.weierstrass:
        return (evaluate(H, path.end) - evaluate(H, path.start)).add_bigoh(cap)
    return _sum_at_one(H, cap)


def _basis_integrands(curve, path):
    """Series for w_0..w_{2g-1} in the path parameter."""
    g = curve.genus
    X = path.x_series
    if path.weierstrass:
        # x^i x'(s) ds / 2s; x is even in s so x'(s)/s is a power series
        dX = X.derivative()
        try:
            common = dX.shift_down(1) / 2
        except ValueError:
            raise PrecisionError("x'(s)/s is not a power series at this precision") from None
        X = X.truncate(common.order)
    else:
        common = (path.y_series * 2).inverse() * X[1]
    out = []
    power = None
    for i in range(2 * g):
        out.append(common if power is None else power * common)
        power = X if power is None else power * X
    return out


def _zeros(curve, k, prec=None):
    z = PadicNumber.zero(curve.p, curve.working_prec if prec is None else prec)
    return [z] * k


def _same_point(P, Q):
    if P.infinite or Q.infinite:
        return P.infinite and Q.infinite
    return (P.x - Q.x).is_zero() and (P.y - Q.y).is_zero()


def _tiny_values(curve, P, Q, digits=None):
    """(values, order) of the 2g basis tiny integrals at the curve's precision."""
    _check_tiny(curve, P, Q)
    g, p = curve.genus, curve.p
    digits = curve.working_prec if digits is None else digits
    if _same_point(P, Q):
        return _zeros(curve, 2 * g), 0
    order = truncation_order(digits, p)
    path = disc_path(curve, P, Q, order + 2 if classify_disc(curve, P).weierstrass else order)
    return [_integrate_along(path, h, p) for h in _basis_integrands(curve, path)], order


def tiny_integrals_basis(curve, P, Q, digits=None):
    """All 2g integrals of w_i from P to Q inside one residue disc."""
    vals, order = _tiny_values(curve, P, Q, digits)
    n = min(P.prec, Q.prec, curve.working_prec)
    audited = min([n - (floor_log(curve.p, order) if order else 0)] + [v.prec for v in vals])
    audit = PrecisionAudit(n, 0, None, 0, 0, floor_log(curve.p, order) if order else 0, audited)
    return IntegralResult(tuple(v.add_bigoh(audited) for v in vals), audited, audit)


def tiny_integral_form(curve, omega, P, Q, digits=None):
    """Integral of g(x, y) dx/2y from P to Q in one non-Weierstrass disc.

    ``omega`` is a DaggerForm with role "form"; any parity is allowed.
    """
    if omega.role != DaggerForm.FORM:
        raise FormError("tiny_integral_form needs a 1-form")
    d = _check_tiny(curve, P, Q)
    if d.weierstrass:
        raise DiscError("general integrands are only integrated in non-Weierstrass discs")
    p = curve.p
    digits = curve.working_prec if digits is None else digits
    if _same_point(P, Q):
        return PadicNumber.zero(p, min(P.prec, Q.prec))
    order = truncation_order(digits, p)
    path = disc_path(curve, P, Q, order)
    X, Y = path.x_series, path.y_series
    yinv = Y.inverse()
    total = None
    for j, B in omega.terms.items():
        coeffs = list(B.coeffs)
        poly = TruncatedSeries([coeffs[-1]], order, p)
        for c in reversed(coeffs[:-1]):
            poly = poly * X + c
        ypow = Y if j < 0 else yinv
        for _ in range(abs(j)):
            poly = poly * ypow
        total = poly if total is None else total + poly
    if total is None:
        return PadicNumber.zero(p, min(P.prec, Q.prec))
    integrand = total * yinv * (X[1] / 2)
    return _integrate_along(path, integrand, p)


# the Frobenius linear system ------------------------------------------------


def solve_padic(A, b):
    """Solve A v = b by elimination with minimal-valuation pivots.

    Returns (v, pivot valuations); their sum is v_p(det A).
    """
    n = len(A)
    A = [list(r) for r in A]
    b = list(b)
    pivots = []
    for col in range(n):
        piv = min(range(col, n), key=lambda r: A[r][col].valuation)
        if A[piv][col].is_zero():
            raise PrecisionError("M - I is singular to the working precision")
        A[col], A[piv] = A[piv], A[col]
        b[col], b[piv] = b[piv], b[col]
        pivots.append(A[col][col].val)
        for r in range(col + 1, n):
            if A[r][col].is_zero():
                continue
            t = A[r][col] / A[col][col]
            A[r] = [A[r][k] - t * A[col][k] if k > col else A[r][k] for k in range(n)]
            b[r] = b[r] - t * b[col]
    v = [None] * n
    for i in range(n - 1, -1, -1):
        s = b[i]
        for k in range(i + 1, n):
            s = s - A[i][k] * v[k]
        v[i] = s / A[i][i]
    return v, pivots


def _check_system_endpoints(curve, P, Q):
    for R in (P, Q):
        if R.infinite or classify_disc(curve, R).weierstrass:
            raise DiscError(f"{R} lies in a Weierstrass disc; use integrate()")


def _with_retries(curve, P, Q, attempt):
    """Run ``attempt`` until the audit reaches the target, raising N by the deficit."""
    target = curve.target_digits
    best = None
    for _ in range(MAX_RETRIES):
        P2, Q2 = at_precision(curve, P), at_precision(curve, Q)
        vals, audit = attempt(curve, P2, Q2)
        audited = min([audit.audited_prec] + [v.prec for v in vals])
        if audited >= target:
            return IntegralResult(tuple(v.add_bigoh(audited) for v in vals), audited, audit)
        if best is not None and audited <= best:
            break
        best = audited
        curve = curve.with_working_precision(curve.working_prec + target - audited)
    raise PrecisionError(f"only {audited} digits could be guaranteed; increase the precision")


def _rhs_tiny(curve, R):
    return _tiny_values(curve, R, frobenius_point(curve, R))[0]


def _basis_attempt(curve, P, Q):
    F = frobenius_action(curve)
    n = len(F.M)
    one = curve.padic(1)
    tP, tQ = _rhs_tiny(curve, P), _rhs_tiny(curve, Q)
    rhs = []
    for i in range(n):
        h = F.exact_parts[i]
        # sum_j (M - I)_ij int w_j = f_i(P) - f_i(Q) - int_P^phi(P) w_i - int_phi(Q)^Q w_i
        rhs.append(evaluate_dagger(h, P) - evaluate_dagger(h, Q) - tP[i] + tQ[i])
    A = [[F.M[i][j] - (one if i == j else 0) for j in range(n)] for i in range(n)]
    vals, pivots = solve_padic(A, rhs)
    nin = min(P.prec, Q.prec, curve.working_prec)
    audit = audit_precision(nin, curve.p, F.certified_prec, pivots, truncation_order(curve.working_prec, curve.p), F.loss)
    return vals, audit


def integrals_basis(curve, P, Q):
    """All 2g integrals of w_i from P to Q (non-Weierstrass discs) via Frobenius."""
    _check_system_endpoints(curve, P, Q)
    return _with_retries(curve, P, Q, _basis_attempt)


def _teichmuller_attempt(curve, P, Q):
    F = frobenius_action(curve)
    n = len(F.M)
    one = curve.padic(1)
    P1, Q1 = teichmuller_point(curve, P), teichmuller_point(curve, Q)
    rhs = [evaluate_dagger(F.exact_parts[i], P1) - evaluate_dagger(F.exact_parts[i], Q1) for i in range(n)]
    A = [[F.M[i][j] - (one if i == j else 0) for j in range(n)] for i in range(n)]
    mid, pivots = solve_padic(A, rhs)
    head = _tiny_values(curve, P, P1)[0]
    tail = _tiny_values(curve, Q1, Q)[0]
    vals = [a + b + c for a, b, c in zip(head, mid, tail)]
    nin = min(P.prec, Q.prec, curve.working_prec)
    audit = audit_precision(nin, curve.p, F.certified_prec, pivots, truncation_order(curve.working_prec, curve.p), F.loss)
    return vals, audit


def integrals_basis_teichmuller(curve, P, Q):
    """Same integrals as integrals_basis, routed through Teichmuller points."""
    _check_system_endpoints(curve, P, Q)
    return _with_retries(curve, P, Q, _teichmuller_attempt)


# general forms ---------------------------------------------------------------


def _in_weierstrass_disc(curve, P):
    return P.infinite or classify_disc(curve, P).weierstrass


def _weierstrass_anchor(curve, P):
    """The Weierstrass point of P's disc."""
    if P.infinite:
        return P
    W = nearest_weierstrass_point(curve, P)
    if is_weierstrass_point(curve, P):
        return P
    return W


def _combine(curve, coeffs, vals):
    total = None
    for c, v in zip(coeffs, vals):
        t = v * c
        total = t if total is None else total + t
    return total


def _result(value, audits):
    audited = min([a.audited_prec for a in audits] + [value.prec])
    audit = min(audits, key=lambda a: a.audited_prec)
    audit = PrecisionAudit(audit.n_input, audit.frobenius_loss, audit.certified_prec, audit.det_loss,
                           audit.log_loss, audit.tiny_loss, audited, audit.pivots)
    return IntegralResult((value.add_bigoh(audited),), audited, audit)


def integrate(curve, coeffs, P, Q, exact_part=None):
    """Integral from P to Q of sum c_i w_i (+ d(exact_part)).

    Endpoints may be infinity or lie in Weierstrass discs; an exact part is
    only accepted between non-Weierstrass discs.
    """
    g = curve.genus
    coeffs = [curve.padic(c) for c in coeffs]
    if len(coeffs) != 2 * g:
        raise FormError(f"expected {2 * g} coefficients, got {len(coeffs)}")
    if (P.infinite or Q.infinite) and any(not c.is_zero() for c in coeffs[g:]):
        raise FormError("x^i dx/2y with i >= g has a pole at infinity")
    wP, wQ = _in_weierstrass_disc(curve, P), _in_weierstrass_disc(curve, Q)
    if exact_part is not None and not exact_part.is_zero() and (wP or wQ):
        raise FormError("exact parts do not converge on Weierstrass discs here")
    zero = PadicNumber.zero(curve.p, curve.working_prec)
    trivial = audit_precision(curve.working_prec, curve.p)
    if _same_point(P, Q) or (is_weierstrass_point(curve, P) and is_weierstrass_point(curve, Q)):
        return IntegralResult((zero,), curve.working_prec, trivial)
    if wQ and not wP:
        r = integrate(curve, coeffs, Q, P, exact_part)
        return IntegralResult((-r.value,), r.audited_prec, r.audit)
    if not wP:
        same = classify_disc(curve, P) == classify_disc(curve, Q)
        res = tiny_integrals_basis(curve, P, Q) if same else integrals_basis(curve, P, Q)
        value = _combine(curve, coeffs, res.values)
        if exact_part is not None and not exact_part.is_zero():
            value = value + evaluate_dagger(exact_part, Q) - evaluate_dagger(exact_part, P)
        return _result(value, [res.audit])
    # P is in a Weierstrass disc: int_P^Q = int_P^P' + int_P'^Q with P' the
    # Weierstrass point, and int_P'^Q = (1/2) int_iota(Q)^Q for odd forms
    audits = []
    P1 = _weierstrass_anchor(curve, P)
    value = zero
    if not _same_point(P, P1):
        t = tiny_integrals_basis(curve, P, P1)
        audits.append(t.audit)
        value = value + _combine(curve, coeffs, t.values)
    if not wQ:
        half = integrals_basis(curve, involution(Q), Q)
        audits.append(half.audit)
        value = value + _combine(curve, coeffs, half.values) / 2
    else:
        Q1 = _weierstrass_anchor(curve, Q)
        if not _same_point(Q, Q1):
            t = tiny_integrals_basis(curve, Q1, Q)
            audits.append(t.audit)
            value = value + _combine(curve, coeffs, t.values)
    return _result(value, audits or [trivial])


def integrate_form(curve, omega, P, Q):
    """Integral of an odd form g(x, y) dx/2y, reduced to the basis first."""
    h, coeffs = reduce_form(omega, curve)
    return integrate(curve, coeffs, P, Q, exact_part=h)
