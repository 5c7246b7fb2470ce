"""Exact rational scalars.

All coordinates, volumes and integrals in this package are `gmpy2.mpq`
values; floats appear only in the Birkhoff simulator and in plots.
"""

from __future__ import annotations

import math

from gmpy2 import mpq, mpz

Q = mpq

QZERO = mpq(0)
QONE = mpq(1)
QHALF = mpq(1, 2)


def q(num, den=1) -> mpq:
    """Build an exact rational; accepts ints or 'p/q' strings."""
    if isinstance(num, str):
        return mpq(num)
    return mpq(num, den)


def qstr(x) -> str:
    """Canonical 'p/q' serialization (denominator always explicit)."""
    x = mpq(x)
    return "%s/%s" % (x.numerator, x.denominator)


def qfloor(x) -> int:
    x = mpq(x)
    return int(x.numerator // x.denominator)


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, int(v))
    return out


def denominator_lcm(coords) -> int:
    """Least positive d with d*coords integral."""
    return lcm_all(mpq(c).denominator for c in coords)
