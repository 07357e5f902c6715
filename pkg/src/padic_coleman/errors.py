"""Exception hierarchy; every error carries a short machine-readable code."""


class ColemanError(Exception):
    code = "ERROR"


class ParseError(ColemanError, ValueError):
    code = "PARSE_ERROR"


class PrecisionError(ColemanError, ArithmeticError):
    """Not enough p-adic precision; retry with more digits."""

    code = "INSUFFICIENT_PRECISION"


class CurveError(ColemanError, ValueError):
    code = "BAD_CURVE"


class BadReductionError(CurveError):
    code = "BAD_REDUCTION"


class PointError(ColemanError, ValueError):
    code = "NOT_ON_CURVE"


class DiscError(ColemanError, ValueError):
    """Endpoint lies in a residue disc the requested operation does not handle."""

    code = "DISC_TYPE"


class FormError(ColemanError, ValueError):
    """Integrand is not admissible (wrong parity, pole at an endpoint, ...)."""

    code = "BAD_FORM"
