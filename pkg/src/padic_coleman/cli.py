"""Command-line front end.

Curve files are JSON: {"p": 11, "digits": 6, "f": ["1/16", "-1/4", ...]}
with f's coefficients low to high.  Points are "(x,y)" with rational or
p-adic coordinates, or "inf".
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .coleman import integrals_basis, integrals_basis_teichmuller, integrate, tiny_integrals_basis
from .curve import INFINITY, new_curve, point, teichmuller_point
from .errors import ColemanError, ParseError
from .frobenius import frobenius_action, nearest_integer, zeta_numerator
from .padic import PadicNumber, parse, render

DEFAULT_DIGITS = 6


def load_curve(path, digits=None):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"{path} is not valid JSON: {e.msg}") from None
    if not isinstance(doc, dict) or "p" not in doc or "f" not in doc:
        raise ParseError("curve file needs the keys 'p' and 'f'")
    p = doc["p"]
    if not isinstance(p, int) or isinstance(p, bool):
        raise ParseError("'p' must be an integer")
    try:
        f = [Fraction(str(c)) for c in doc["f"]]
    except (TypeError, ValueError, ZeroDivisionError):
        raise ParseError("'f' must be a list of rational strings") from None
    if digits is None:
        digits = doc.get("digits", DEFAULT_DIGITS)
    if not isinstance(digits, int) or digits < 1:
        raise ParseError("'digits' must be a positive integer")
    return new_curve(f, p, digits)


def _coordinate(text, p):
    text = text.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        return parse(text, p)


def parse_point(curve, text):
    t = text.strip()
    if t.lower() in ("inf", "infinity"):
        return INFINITY
    if not (t.startswith("(") and t.endswith(")")):
        raise ParseError(f"point {text!r} must look like (x,y) or inf")
    parts = t[1:-1].split(",")
    if len(parts) != 2:
        raise ParseError(f"point {text!r} needs exactly two coordinates")
    x, y = (_coordinate(s, curve.p) for s in parts)
    return point(curve, x, y)


def parse_coeffs(curve, text):
    out = []
    for s in text.split(","):
        c = _coordinate(s, curve.p)
        out.append(c)
    return out


def _emit(args, lines, doc, started):
    if args.timing:
        elapsed = round(time.perf_counter() - started, 3)
        doc["timing"] = elapsed
        lines.append(f"time: {elapsed}s")
    if args.json:
        print(json.dumps(doc))
    else:
        print("\n".join(lines))


def _shown(res, curve):
    return [render(v) for v in res.display(curve.target_digits)]


def cmd_validate(args, curve):
    lines = [f"genus: {curve.genus}", f"p: {curve.p}", f"working_prec: {curve.working_prec}"]
    return lines, {"values": [], "audited_prec": curve.target_digits, "genus": curve.genus}


def cmd_frobenius(args, curve):
    F = frobenius_action(curve)
    rows = [[render(c) for c in row] for row in F.M]
    lines = [f"M[{i}]: " + ", ".join(r) for i, r in enumerate(rows)]
    lines.append(f"certified_prec: {F.certified_prec}")
    return lines, {"values": [], "audited_prec": F.certified_prec, "matrix": rows}


def _basis_lines(res, curve):
    vals = _shown(res, curve)
    lines = [f"w{i}: {v}" for i, v in enumerate(vals)]
    lines.append(f"audited_prec: {res.audited_prec}")
    return lines, {"values": vals, "audited_prec": res.audited_prec}


def cmd_tiny(args, curve):
    P, Q = parse_point(curve, args.frm), parse_point(curve, args.to)
    return _basis_lines(tiny_integrals_basis(curve, P, Q), curve)


def cmd_integrate_basis(args, curve):
    P, Q = parse_point(curve, args.frm), parse_point(curve, args.to)
    return _basis_lines(integrals_basis(curve, P, Q), curve)


def cmd_integrate(args, curve):
    P, Q = parse_point(curve, args.frm), parse_point(curve, args.to)
    res = integrate(curve, parse_coeffs(curve, args.coeffs), P, Q)
    vals = _shown(res, curve)
    return [f"integral: {vals[0]}", f"audited_prec: {res.audited_prec}"], \
        {"values": vals, "audited_prec": res.audited_prec}


def cmd_teichmuller(args, curve):
    P = parse_point(curve, args.point)
    T = teichmuller_point(curve, P)
    k = curve.target_digits
    vals = [render(T.x.add_bigoh(k)), render(T.y.add_bigoh(k))]
    return [f"x: {vals[0]}", f"y: {vals[1]}"], {"values": vals, "audited_prec": k}


def cmd_zeta(args, curve):
    F = frobenius_action(curve)
    coeffs = zeta_numerator(F.M)
    vals = [render(c) for c in coeffs]
    hints = [nearest_integer(c) for c in coeffs]
    lines = [f"c{i}: {v}  (~ {h})" for i, (v, h) in enumerate(zip(vals, hints))]
    lines.append(f"certified_prec: {F.certified_prec}")
    return lines, {"values": vals, "audited_prec": F.certified_prec, "nearest_integers": hints}


COMMANDS = {
    "validate": cmd_validate,
    "frobenius": cmd_frobenius,
    "tiny": cmd_tiny,
    "integrate-basis": cmd_integrate_basis,
    "integrate": cmd_integrate,
    "teichmuller": cmd_teichmuller,
    "zeta-numerator": cmd_zeta,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="coleman", description="Coleman integrals on odd-degree hyperelliptic curves.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--curve", required=True, help="curve JSON file")
        sp.add_argument("--digits", type=int, help="override the file's digit count")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.add_argument("--timing", action="store_true", help="report wall-clock time")
        if name in ("tiny", "integrate-basis", "integrate"):
            sp.add_argument("--from", dest="frm", required=True)
            sp.add_argument("--to", required=True)
        if name == "integrate":
            sp.add_argument("--coeffs", required=True, help="c_0,...,c_{2g-1}")
        if name == "teichmuller":
            sp.add_argument("--point", required=True)
    return parser


def run(argv=None):
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    try:
        curve = load_curve(args.curve, args.digits)
        lines, doc = COMMANDS[args.command](args, curve)
    except ColemanError as e:
        msg = str(e).replace("\n", " ")
        if e.code == "INSUFFICIENT_PRECISION":
            msg += " (try a larger --digits)"
        print(f"ERROR {e.code} {msg}", file=sys.stderr)
        return 1
    except ValueError as e:
        print(f"ERROR INVALID_INPUT {e}", file=sys.stderr)
        return 1
    _emit(args, lines, doc, started)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
