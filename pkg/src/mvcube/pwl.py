"""McNaughton functions as exact piecewise-linear objects.

A function is a cube-covering simplicial complex together with one
integer-coefficient affine form per top cell.  All connectives work by
refine-then-split, never by sampling, so every downstream identity holds
as an exact rational statement.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from gmpy2 import mpq

from .rationals import QONE, QZERO, q, qstr
from .geometry import (
    AffineForm,
    Complex,
    Simplex,
    bboxes_overlap,
    clip_simplex,
    overlay_pullback,
    polygon_area2_centroid,
    polygon_orient_ccw,
    complex_from_json,
    complex_to_json,
    cube_triangulation,
    form_value,
    split_simplex_by_form,
)

CONNECTIVES = ("neg", "oplus", "odot", "ominus", "min", "max")


@dataclass(frozen=True)
class PwlFunction:
    n: int
    complex: Complex
    forms: tuple  # one AffineForm per top cell

    def eval(self, p) -> mpq:
        p = tuple(mpq(c) for c in p)
        if len(p) != self.n or any(c < 0 or c > 1 for c in p):
            raise ValueError("point outside the unit cube")
        i = self.complex.find_cell(p)
        if i < 0:
            raise AssertionError("complex does not cover the cube at %r" % (p,))
        return self.forms[i].value(p)

    def is_zero_function(self) -> bool:
        return all(not any(f.a) and f.b == 0 for f in self.forms)

    def check(self):
        """Assert the continuity and range invariants; returns self."""
        values = {}
        for cell, form in zip(self.complex.cells, self.forms):
            for v in cell.vertices:
                val = form.value(v)
                if val < 0 or val > 1:
                    raise AssertionError("vertex value %s outside [0,1]" % val)
                if values.setdefault(v, val) != val:
                    raise AssertionError("discontinuity at vertex %r" % (v,))
        if self.complex.support_volume() != QONE:
            raise AssertionError("complex does not tile the cube")
        return self

    def to_json(self):
        return {
            "n": self.n,
            "complex": complex_to_json(self.complex),
            "forms": [[*f.a, f.b] for f in self.forms],
        }

    @staticmethod
    def from_json(data) -> "PwlFunction":
        cx = complex_from_json(data["complex"])
        forms = tuple(AffineForm(tuple(row[:-1]), row[-1]) for row in data["forms"])
        return PwlFunction(int(data["n"]), cx, forms)


@dataclass(frozen=True)
class ZeroSetReport:
    faces: tuple  # simplices (possibly lower-dimensional) covering Zf
    has_interior: bool


def constant(n: int, value: int) -> PwlFunction:
    if value not in (0, 1):
        raise ValueError("constants are 0 and 1")
    cx = cube_triangulation(n)
    form = AffineForm((0,) * n, value)
    return PwlFunction(n, cx, (form,) * len(cx.cells))


def generator(n: int, i: int) -> PwlFunction:
    """The ith coordinate projection, the ith free generator."""
    if not 1 <= i <= n:
        raise ValueError("generator index out of range")
    cx = cube_triangulation(n)
    form = AffineForm(tuple(1 if j == i - 1 else 0 for j in range(n)), 0)
    return PwlFunction(n, cx, (form,) * len(cx.cells))


def _refined_pieces(f: PwlFunction, g: PwlFunction):
    """Common refinement with per-piece (form_f, form_g) provenance."""
    g_cells = [(cell.bbox(), cell.barycentric_forms(), form)
               for cell, form in zip(g.complex.cells, g.forms)]
    for cell, ff in zip(f.complex.cells, f.forms):
        box = cell.bbox()
        for bbox, cuts, fg in g_cells:
            if not bboxes_overlap(box, bbox):
                continue
            for piece in clip_simplex(cell.vertices, cuts):
                yield piece, ff, fg


def _assemble(n, pieces_forms) -> PwlFunction:
    cells, forms = [], []
    for piece, form in pieces_forms:
        cells.append(Simplex(piece))
        forms.append(form)
    return PwlFunction(n, Complex(n, tuple(cells)), tuple(forms))


def _truncated(piece, raw: AffineForm, cutoff: AffineForm, above: AffineForm):
    """Split a cell at cutoff = 0; yields (piece, raw) below and above-form on top."""
    pos, neg = split_simplex_by_form(piece, cutoff.as_linform())
    for p in neg:
        if Simplex(p).volume() > 0:
            yield p, raw
    for p in pos:
        if Simplex(p).volume() > 0:
            yield p, above


def connective(kind: str, f: PwlFunction, g: PwlFunction = None) -> PwlFunction:
    """Lukasiewicz connectives, exactly: refine, combine, split, truncate."""
    if kind == "neg":
        forms = tuple(AffineForm(tuple(-c for c in h.a), 1 - h.b) for h in f.forms)
        return PwlFunction(f.n, f.complex, forms)
    if kind not in CONNECTIVES:
        raise ValueError("unknown connective %r" % kind)
    if g is None or f.n != g.n:
        raise ValueError("dimension mismatch")
    out = []
    one = AffineForm((0,) * f.n, 1)
    zero = AffineForm((0,) * f.n, 0)
    for piece, ff, fg in _refined_pieces(f, g):
        if kind == "oplus":  # min(1, f+g): cut at f+g-1
            s = ff + fg
            out.extend(_truncated(piece, s, s - one, one))
        elif kind == "odot":  # max(0, f+g-1)
            s = ff + fg - one
            out.extend((p, fm) for p, fm in _truncated(piece, zero, s, s))
        elif kind == "ominus":  # max(0, f-g)
            s = ff - fg
            out.extend(_truncated(piece, zero, s, s))
        elif kind == "min":
            out.extend(_truncated(piece, ff, ff - fg, fg))
        elif kind == "max":
            out.extend(_truncated(piece, fg, ff - fg, ff))
    return _assemble(f.n, out)


def k_fold(f: PwlFunction, k: int) -> PwlFunction:
    """f (+) f (+) ... (+) f, k times; equals min(1, k*f) pointwise."""
    if k < 1:
        raise ValueError("k must be >= 1")
    one = AffineForm((0,) * f.n, 1)
    out = []
    for piece, form in zip((c.vertices for c in f.complex.cells), f.forms):
        s = form.scale(k)
        out.extend(_truncated(piece, s, s - one, one))
    return _assemble(f.n, out)


def integrate(f: PwlFunction) -> mpq:
    """Lebesgue integral over the cube; exact (cell volume x vertex mean)."""
    total = QZERO
    for cell, form in zip(self_cells(f), f.forms):
        vol = cell.volume()
        if vol:
            mean = sum((form.value(v) for v in cell.vertices), QZERO)
            total += vol * mean / len(cell.vertices)
    return total


def self_cells(f: PwlFunction):
    return f.complex.cells


def zero_set(f: PwlFunction) -> ZeroSetReport:
    """Zero locus as a union of faces of the function's own cells."""
    faces = []
    seen = set()
    has_interior = False
    for cell, form in zip(f.complex.cells, f.forms):
        zero_verts = tuple(v for v in cell.vertices if form.value(v) == 0)
        if not zero_verts:
            continue
        if len(zero_verts) == len(cell.vertices):
            has_interior = True
        if zero_verts not in seen:
            seen.add(zero_verts)
            faces.append(Simplex(zero_verts))
    return ZeroSetReport(tuple(faces), has_interior)


def is_pseudotrue(f: PwlFunction) -> bool:
    """True iff the zero set has empty interior (no identically-zero cell)."""
    return not any(
        not any(form.a) and form.b == 0 and cell.volume() > 0
        for cell, form in zip(f.complex.cells, f.forms)
    )


def support_volume(f: PwlFunction) -> mpq:
    """Lebesgue measure of supp f = 1 - volume of identically-zero cells."""
    dead = sum(
        (cell.volume() for cell, form in zip(f.complex.cells, f.forms)
         if not any(form.a) and form.b == 0),
        QZERO,
    )
    return QONE - dead


def _function_map_overlay(f: PwlFunction, pwl_map):
    """Pieces of the common refinement of f's cells pulled through the map.

    Yields (ccw polygon, affine rows of the map piece, form of f) triples;
    planar only.  Polygons are kept un-triangulated so chained work stays
    proportional to the true piece count.
    """
    from .homeo import _map_pieces

    f_polys = [polygon_orient_ccw(c.vertices) for c in f.complex.cells]
    pieces = _map_pieces(pwl_map)
    for fi, bi, poly in overlay_pullback(f_polys, pieces):
        mat = pieces[bi][1]
        yield poly, (mat[0], mat[1]), f.forms[fi]


def integrate_composed(f: PwlFunction, pwl_map) -> mpq:
    """Exact integral of f o S without materializing the composite."""
    if f.n != pwl_map.n:
        raise ValueError("dimension mismatch")
    if f.n != 2:
        return integrate(compose(f, pwl_map))
    total = QZERO
    for poly, (r0, r1), form in _function_map_overlay(f, pwl_map):
        area2, c = polygon_area2_centroid(poly)
        img = (r0[0] * c[0] + r0[1] * c[1] + r0[2],
               r1[0] * c[0] + r1[1] * c[1] + r1[2])
        total += area2 * form.value(img)
    return total / 2


def compose(f: PwlFunction, pwl_map) -> PwlFunction:
    """Exact composite f o S for a piecewise-linear map of the cube."""
    if f.n != pwl_map.n:
        raise ValueError("dimension mismatch")
    n = f.n
    if n == 2:
        out = []
        for poly, rows, form in _function_map_overlay(f, pwl_map):
            cf = _compose_form(form, rows)
            for i in range(1, len(poly) - 1):
                out.append(((poly[0], poly[i], poly[i + 1]), cf))
        return _assemble(n, out)
    f_cells = [(cell.bbox(), cell.barycentric_forms(), form)
               for cell, form in zip(f.complex.cells, f.forms)]
    out = []
    for cell, mat in zip(pwl_map.complex.cells, pwl_map.matrices):
        rows = mat[:n]  # affine part; last row is (0 ... 0 1)
        imgs = [pwl_map.apply_matrix(mat, v) for v in cell.vertices]
        ibox = (tuple(min(v[i] for v in imgs) for i in range(n)),
                tuple(max(v[i] for v in imgs) for i in range(n)))
        for bbox, cuts, form in f_cells:
            if not bboxes_overlap(ibox, bbox):
                continue
            pulled = [_pullback_form(c, rows) for c in cuts]
            for piece in clip_simplex(cell.vertices, pulled):
                out.append((piece, _compose_form(form, rows)))
    return _assemble(n, out)


def _pullback_form(form, rows):
    """(a, b) composed with the affine map given by homogeneous rows."""
    a, b = form
    n = len(a)
    coeffs = tuple(
        sum((a[i] * rows[i][j] for i in range(n)), QZERO) for j in range(n)
    )
    offset = b + sum((a[i] * rows[i][n] for i in range(n)), QZERO)
    return (coeffs, offset)


def _compose_form(form: AffineForm, rows) -> AffineForm:
    coeffs, offset = _pullback_form(form.as_linform(), rows)
    return AffineForm(tuple(int(c) for c in coeffs), int(offset))


def cylinder(f: PwlFunction, m: int) -> PwlFunction:
    """View f on [0,1]^n as a function of m > n variables (dummy variables).

    The complex is the staircase product of each cell with the Kuhn
    triangulation of the extra factor.
    """
    if m <= f.n:
        raise ValueError("target dimension must exceed %d" % f.n)
    n, extra = f.n, m - f.n
    tail = cube_triangulation(extra)
    out = []
    for cell, form in zip(f.complex.cells, f.forms):
        lifted = AffineForm(form.a + (0,) * extra, form.b)
        for tcell in tail.cells:
            for piece in _simplex_product(cell.vertices, tcell.vertices):
                out.append((piece, lifted))
    return _assemble(m, out)


def _simplex_product(verts_a, verts_b):
    """Staircase triangulation of a product of two simplices."""
    ka, kb = len(verts_a) - 1, len(verts_b) - 1
    for a_steps in itertools.combinations(range(ka + kb), ka):
        picks = set(a_steps)
        i = j = 0
        path = [verts_a[0] + verts_b[0]]
        for step in range(ka + kb):
            if step in picks:
                i += 1
            else:
                j += 1
            path.append(verts_a[i] + verts_b[j])
        yield tuple(path)


def clamp_form(n: int, form: AffineForm) -> PwlFunction:
    """min(1, max(0, a.x + b)) as a PwlFunction over the cube."""
    zero = AffineForm((0,) * n, 0)
    one = AffineForm((0,) * n, 1)
    out = []
    for cell in cube_triangulation(n).cells:
        for piece, fm in _truncated(cell.vertices, zero, form, form):
            out.extend(_truncated(piece, fm, fm - one, one))
    return _assemble(n, out)
