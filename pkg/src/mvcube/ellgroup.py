"""A lattice-group automorphism of the plane and its dual interval map.

The automorphism acts on the positive quadrant, linearly on each of three
cones; parametrizing the unit simplex by t -> ((1-t), t) turns its dual
into a piecewise-fractional self-map S of [0,1] whose orbits collapse to 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .rationals import QONE, QZERO, q, qstr

# rays bounding the three cones
P1 = (QONE, QONE)        # e1 + e2
P2 = (QONE, mpq(2))      # e1 + 2*e2

CONE_MATRICES = (
    ((1, 1), (0, 1)),    # on {y <= x}: fixes e1, sends p1 to 2e1+e2
    ((3, -1), (1, 0)),   # on {x <= y <= 2x}
    ((1, 0), (-1, 1)),   # on {y >= 2x}: fixes e2
)


def sigma_eval(i: int, p):
    """The i-th coordinate of the automorphism, from its lattice expression."""
    x, y = mpq(p[0]), mpq(p[1])
    if x < 0 or y < 0 or (x == 0 and y == 0):
        raise ValueError("point must lie in the positive cone")
    if i == 1:
        return max(x, min(3 * x - y, x + y))
    if i == 2:
        return max(-x + y, min(x, y))
    raise ValueError("coordinate index must be 1 or 2")


def cone_apply(p):
    """Apply the piecewise-linear map through its cone matrices."""
    x, y = mpq(p[0]), mpq(p[1])
    if y <= x:
        m = CONE_MATRICES[0]
    elif y <= 2 * x:
        m = CONE_MATRICES[1]
    else:
        m = CONE_MATRICES[2]
    return (m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y)


def dual_S(t):
    """The dual interval map, branch-wise fractional."""
    t = mpq(t)
    if t < 0 or t > 1:
        raise ValueError("t must lie in [0,1]")
    if t < mpq(1, 2):
        return t / (1 + t)
    if t < mpq(2, 3):
        return (1 - t) / (4 - 5 * t)
    return (2 * t - 1) / t


@dataclass(frozen=True)
class ConjugacyReport:
    all_equal: bool
    checked: int
    first_failure: tuple = None  # (t, normalized cone value, dual value)


def conjugacy_check_simplex(samples: int = 1000) -> ConjugacyReport:
    """Normalized cone action vs the interval map, on a rational grid."""
    checked = 0
    for i in range(samples + 1):
        t = q(i, samples)
        img = cone_apply((QONE - t, t))
        assert img == (sigma_eval(1, (QONE - t, t)),
                       sigma_eval(2, (QONE - t, t)))
        total = img[0] + img[1]
        lhs = img[1] / total
        rhs = dual_S(t)
        checked += 1
        if lhs != rhs:
            return ConjugacyReport(False, checked, (t, lhs, rhs))
    return ConjugacyReport(True, checked)


def orbit(t0, iterations: int):
    """Exact orbit of the interval map, starting point included."""
    if iterations < 0:
        raise ValueError("iterations must be >= 0")
    t = mpq(t0)
    out = [t]
    for _ in range(iterations):
        t = dual_S(t)
        out.append(t)
    return out
