"""Coleman integration on odd-degree hyperelliptic curves over Q_p."""

from .errors import (
    BadReductionError,
    ColemanError,
    CurveError,
    DiscError,
    FormError,
    ParseError,
    PointError,
    PrecisionError,
)
from .padic import PadicNumber, from_rational, parse, render, sqrt_unit, teichmuller_lift

__version__ = "0.1.0"
