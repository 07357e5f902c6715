"""Random points for property tests."""

import random

from padic_coleman.curve import CurvePoint, classify_disc, lift_point


def random_points(curve, count, seed=0):
    """Random Q_p points outside Weierstrass discs (random integral x)."""
    rng = random.Random(seed)
    p = curve.p
    out = []
    while len(out) < count:
        x = rng.randrange(p ** 4)
        fx = curve.f_at(curve.padic(x))
        if fx.is_zero() or fx.val != 0:
            continue
        roots = [r for r in range(1, p) if r * r % p == fx.unit % p]
        if roots:
            out.append(lift_point(curve, x, rng.choice(roots)))
    return out


def weierstrass_residues(curve):
    p = curve.p
    return [a for a in range(p) if curve.f_at(curve.padic(a)).valuation >= 1]


def random_weierstrass_disc_points(curve, count, seed=0):
    """Points (x, s) with s = y divisible by p, x solved near a root of f mod p."""
    rng = random.Random(seed)
    p = curve.p
    roots = weierstrass_residues(curve)
    df = curve.f.derivative()
    out = []
    while len(out) < count:
        s = curve.padic(p * rng.randrange(1, p ** 3))
        x = curve.padic(rng.choice(roots))
        for _ in range(8):
            x = x - (curve.f_at(x) - s * s) / df(x)
        out.append(CurvePoint(x, s))
    return out


def agree(a, b, digits):
    """a and b agree modulo p^digits (and both are known that far)."""
    d = a - b
    return d.prec >= digits and d.add_bigoh(digits).is_zero()


def same_point(P, Q):
    return (P.x - Q.x).is_zero() and (P.y - Q.y).is_zero()


def pairs_across_discs(curve, count, seed):
    pts = random_points(curve, 8 * count, seed=seed)
    out = []
    for P, Q in zip(pts[::2], pts[1::2]):
        if classify_disc(curve, P) != classify_disc(curve, Q):
            out.append((P, Q))
        if len(out) == count:
            break
    assert len(out) == count
    return out


def same_disc_partner(curve, P, rng):
    """A point of P's disc: x = x(P) + p*k, y by the same residue."""
    while True:
        x = P.x + curve.p * rng.randrange(1, curve.p ** 3)
        Q = lift_point(curve, x, P.y.residue())
        if not same_point(P, Q):
            return Q
