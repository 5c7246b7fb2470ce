"""Conjugation of the square/rhombus twists with disk rotations.

Angles are tracked as s = theta/pi in (-1, 1], which makes every chart
branch bilinear with rational coefficients; pi never shows up as a number.
The only floating-point code here is the Birkhoff-average simulator, which
probes an intrinsically asymptotic statement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy
from gmpy2 import mpq

from .rationals import QHALF, QONE, QZERO, q, qfloor, qstr
from .geometry import AffineForm, Polytope, form_value
from . import pwl
from .homeo import apply_map, gen_R, gen_S
from .measures import StateSpec, lebesgue, state_eval

SQUARE_M = "SquareM"
RHOMBUS_N = "RhombusN"
_KINDS = (SQUARE_M, RHOMBUS_N)


def _normalize_s(s):
    """Reduce an angle coordinate modulo 2 into (-1, 1]."""
    s = mpq(s)
    # subtract 2*ceil((s-1)/2)
    shift = -qfloor((QONE - s) / 2)
    return s - 2 * shift


@dataclass(frozen=True)
class TwistPoint:
    r: mpq
    s: mpq  # angle as a fraction of pi, normalized into (-1, 1]

    def __post_init__(self):
        object.__setattr__(self, "r", mpq(self.r))
        object.__setattr__(self, "s", _normalize_s(self.s))
        if self.r < 0 or self.r > 1:
            raise ValueError("radius out of range: %s" % qstr(self.r))


def _check_kind(kind):
    if kind not in _KINDS:
        raise ValueError("unknown chart kind %r" % (kind,))


def chart(kind, p: TwistPoint):
    """Map disk coordinates onto the concentric square Q_r or rhombus V_r."""
    _check_kind(kind)
    r, s = p.r, p.s
    if kind == SQUARE_M:
        if s <= -QHALF:
            dx, dy = -QHALF, -2 * s - q(3, 2)
        elif s <= 0:
            dx, dy = 2 * s + QHALF, -QHALF
        elif s <= QHALF:
            dx, dy = QHALF, 2 * s - QHALF
        else:
            dx, dy = -2 * s + q(3, 2), QHALF
    else:
        if s <= -QHALF:
            dx, dy = s + QHALF, -s - QONE
        elif s <= 0:
            dx, dy = s + QHALF, s
        elif s <= QHALF:
            dx, dy = -s + QHALF, s
        else:
            dx, dy = -s + QHALF, -s + QONE
    return (QHALF + r * dx, QHALF + r * dy)


def chart_inverse(kind, pt) -> TwistPoint:
    """Radius and angle of a point on its concentric square/rhombus."""
    _check_kind(kind)
    x = mpq(pt[0]) - QHALF
    y = mpq(pt[1]) - QHALF
    if kind == SQUARE_M:
        r = 2 * max(abs(x), abs(y))
    else:
        r = 2 * (abs(x) + abs(y))
    if r > 1:
        raise ValueError("point outside the chart image")
    if r == 0:
        return TwistPoint(QZERO, QONE)
    if kind == SQUARE_M:
        half = r / 2
        if y == -half and x > -half:
            s = (x / r - QHALF) / 2
        elif x == half:
            s = (y / r + QHALF) / 2
        elif y == half and x < half:
            s = (q(3, 2) - x / r) / 2
        else:
            s = -(y / r + q(3, 2)) / 2
    else:
        if y > 0 and x >= 0:
            s = y / r
        elif x < 0 <= y:
            s = QONE - y / r
        elif y <= 0 < x:
            s = y / r
        else:
            s = -QONE - y / r
    return TwistPoint(r, s)


def twist_param(kind, k: int, r):
    """Fraction of a full turn the k-th twist applies on the ring of radius r.

    On the square rings this is the clamp of 1/(2r) - k - 1/2.  On the
    rhombus rings the ring through the point at parameter r meets the
    twisting band differently, and the matching clamp is 1/r - k - 1; the
    conjugation tests pin this normalization down exactly.
    """
    _check_kind(kind)
    if k < 0:
        raise ValueError("k must be >= 0")
    r = mpq(r)
    if r == 0:
        return QONE
    if kind == SQUARE_M:
        raw = QONE / (2 * r) - k - QHALF
    else:
        raw = QONE / r - k - QONE
    return min(QONE, max(QZERO, raw))


def twist_map(kind, k: int, p: TwistPoint) -> TwistPoint:
    """Rotate along the invariant ring by the k-th twist amount."""
    return TwistPoint(p.r, p.s + 2 * twist_param(kind, k, p.r))


@dataclass(frozen=True)
class ConjugationReport:
    all_equal: bool
    checked: int
    first_failure: tuple = None  # (TwistPoint, map image, chart image)


def _sample_grid(samples):
    """Deterministic rational (r, s) grid with about the requested size."""
    rows = max(2, int(samples ** 0.5))
    cols = (samples + rows - 1) // rows
    pts = []
    for i in range(1, rows + 1):
        r = q(i, rows)  # r = 0 is the degenerate center fiber; skip it
        for j in range(cols):
            s = -QONE + q(2 * j + 1, cols)
            pts.append(TwistPoint(r, s))
            if len(pts) == samples:
                return pts
    return pts


def conjugation_check(kind, k: int, samples: int = 1000) -> ConjugationReport:
    """Exact check that the chart intertwines the twist with the planar map."""
    _check_kind(kind)
    homeo = gen_R(k) if kind == SQUARE_M else gen_S(k)
    checked = 0
    for p in _sample_grid(samples):
        lhs = apply_map(homeo, chart(kind, p))
        rhs = chart(kind, twist_map(kind, k, p))
        checked += 1
        if lhs != rhs:
            return ConjugationReport(False, checked, (p, lhs, rhs))
    return ConjugationReport(True, checked)


GOLDEN = (5 ** 0.5 - 1) / 2


def birkhoff_equidistribution(k: int, rotation_target: float,
                              iterations: int, bins: int) -> float:
    """Sup-norm deviation of orbit bin frequencies from uniform (float mode).

    The orbit lives on the invariant ring r = 1/(alpha + 2k + 1) and rotates
    by 2*alpha per step in the s coordinate.
    """
    alpha = float(rotation_target)
    del k  # the ring radius does not enter the circle dynamics
    n = numpy.arange(iterations, dtype=numpy.float64)
    s = (2.0 * alpha * n) % 2.0
    idx = numpy.minimum((s / 2.0 * bins).astype(numpy.int64), bins - 1)
    freq = numpy.bincount(idx, minlength=bins) / iterations
    return float(numpy.max(numpy.abs(freq - 1.0 / bins)))


def _dyadic_tent(n, depth, corner):
    """Pyramid over the dyadic box at the given corner, zero on its boundary."""
    scale = 2 ** depth
    f = None
    for i, a in enumerate(corner):
        j = int(a * scale)
        coeffs = [0] * n
        coeffs[i] = scale
        lo = pwl.clamp_form(n, AffineForm(tuple(coeffs), -j))
        coeffs = [0] * n
        coeffs[i] = -scale
        hi = pwl.clamp_form(n, AffineForm(tuple(coeffs), j + 1))
        for g in (lo, hi):
            f = g if f is None else pwl.connective("min", f, g)
    return f


@dataclass(frozen=True)
class BoxDensityReport:
    estimates: tuple  # ((depth, corner, ratio), ...)
    constant: bool


def _in_region(region, pt):
    if region is None:
        return all(0 <= c <= 1 for c in pt)
    return all(form_value(h, pt) >= 0 for h in region.halfspaces)


def box_density_check(spec: StateSpec, region: Polytope = None,
                      max_depth: int = 2, n: int = 2,
                      min_depth: int = 1) -> BoxDensityReport:
    """Ratio of state mass to Lebesgue mass on tents over dyadic boxes.

    A translation-invariant state gives the same ratio on every box; atoms
    sitting inside some box show up as a bumped ratio there.
    """
    rows = []
    base = lebesgue()
    import itertools
    for depth in range(min_depth, max_depth + 1):
        scale = 2 ** depth
        for nums in itertools.product(range(scale), repeat=n):
            corner = tuple(q(a, scale) for a in nums)
            far = tuple(c + q(1, scale) for c in corner)
            if not (_in_region(region, corner) and _in_region(region, far)):
                continue
            tent = _dyadic_tent(n, depth, corner)
            denom = state_eval(base, tent)
            ratio = state_eval(spec, tent) / denom
            rows.append((depth, corner, ratio))
    vals = {r for _, _, r in rows}
    return BoxDensityReport(tuple(rows), len(vals) <= 1)
