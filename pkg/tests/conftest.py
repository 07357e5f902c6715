import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from padic_coleman.curve import new_curve  # noqa: E402

# y^2 = x^5 + 33/16 x^4 + 3/4 x^3 + 3/8 x^2 - 1/4 x + 1/16 (good reduction at 11)
TORSION_F = (Fraction(1, 16), Fraction(-1, 4), Fraction(3, 8), Fraction(3, 4), Fraction(33, 16), 1)
# y^2 = x(x-1)(x-2)(x-5)(x-6) (good reduction at 7)
RANK_ONE_F = (0, 60, -112, 65, -14, 1)


@pytest.fixture(scope="session")
def torsion_curve():
    return new_curve(TORSION_F, 11, 6)


@pytest.fixture(scope="session")
def rank_one_curve():
    return new_curve(RANK_ONE_F, 7, 6)
