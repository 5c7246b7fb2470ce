"""Exact rational polyhedral kernel.

Simplices, volumes, intersections, triangulations, common refinements and
hyperplane splits over exact rationals.  Complexes are simplicial; general
convex cells appear only transiently inside ``intersect_cells`` /
``triangulate``.  Everything here is immutable and pure.

Linear forms are represented as ``(coeffs, offset)`` pairs meaning
``x -> coeffs . x + offset``; halfspaces are ``form(x) >= 0``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from gmpy2 import mpq

from .rationals import QONE, QZERO, q, qstr

Point = tuple  # tuple of mpq
LinForm = tuple  # (tuple_of_coeffs, offset)


def point(*coords) -> Point:
    return tuple(mpq(c) for c in coords)


def form_value(form: LinForm, p: Point):
    coeffs, b = form
    acc = b
    for c, x in zip(coeffs, p):
        if c:
            acc += c * x
    return acc


@dataclass(frozen=True)
class AffineForm:
    """Integer-coefficient affine function a.x + b."""

    a: tuple
    b: int

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(int(c) for c in self.a))
        object.__setattr__(self, "b", int(self.b))

    def value(self, p: Point):
        acc = mpq(self.b)
        for c, x in zip(self.a, p):
            if c:
                acc += c * x
        return acc

    def as_linform(self) -> LinForm:
        return (tuple(mpq(c) for c in self.a), mpq(self.b))

    def scale(self, k: int) -> "AffineForm":
        return AffineForm(tuple(k * c for c in self.a), k * self.b)

    def __add__(self, other: "AffineForm") -> "AffineForm":
        return AffineForm(
            tuple(x + y for x, y in zip(self.a, other.a)), self.b + other.b
        )

    def __sub__(self, other: "AffineForm") -> "AffineForm":
        return AffineForm(
            tuple(x - y for x, y in zip(self.a, other.a)), self.b - other.b
        )

    def __neg__(self) -> "AffineForm":
        return AffineForm(tuple(-x for x in self.a), -self.b)


# ---------------------------------------------------------------------------
# exact linear algebra helpers


def mat_det(rows):
    """Determinant of a square rational matrix (Gaussian elimination)."""
    m = [list(r) for r in rows]
    n = len(m)
    det = QONE
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            return QZERO
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                factor = m[r][col] * inv
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
    return det


def mat_inverse(rows):
    """Exact inverse of a square rational matrix."""
    n = len(rows)
    m = [list(r) + [QONE if i == j else QZERO for j in range(n)]
         for i, r in enumerate(rows)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        for c in range(2 * n):
            m[col][c] *= inv
        for r in range(n):
            if r != col and m[r][col]:
                factor = m[r][col]
                for c in range(col, 2 * n):
                    m[r][c] -= factor * m[col][c]
    return [row[n:] for row in m]


def solve_linear(rows, rhs):
    """Solve A x = rhs exactly; raises on singular A."""
    inv = mat_inverse(rows)
    n = len(rhs)
    return [sum((inv[i][j] * rhs[j] for j in range(n)), QZERO) for i in range(n)]


def affine_rank(points) -> int:
    """Dimension of the affine hull of a point set."""
    if len(points) <= 1:
        return 0
    base = points[0]
    rows = [[x - y for x, y in zip(p, base)] for p in points[1:]]
    rank = 0
    ncols = len(base)
    for col in range(ncols):
        piv = None
        for r in range(rank, len(rows)):
            if rows[r][col]:
                piv = r
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = 1 / rows[rank][col]
        for r in range(rank + 1, len(rows)):
            if rows[r][col]:
                factor = rows[r][col] * inv
                for c in range(col, ncols):
                    rows[r][c] -= factor * rows[rank][c]
        rank += 1
        if rank == len(rows):
            break
    return rank


# ---------------------------------------------------------------------------
# simplices


class Simplex:
    """k-simplex with rational vertices (k+1 points in R^n)."""

    __slots__ = ("vertices", "_volume", "_bary", "_bbox")

    def __init__(self, vertices):
        self.vertices = tuple(tuple(mpq(c) for c in v) for v in vertices)
        self._volume = None
        self._bary = None
        self._bbox = None

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    @property
    def dim(self) -> int:
        return len(self.vertices) - 1

    def volume(self):
        """Euclidean volume for full-dimensional simplices, else 0."""
        if self._volume is None:
            n = self.ambient_dim
            if self.dim != n:
                self._volume = QZERO
            else:
                v0 = self.vertices[0]
                rows = [[x - y for x, y in zip(v, v0)] for v in self.vertices[1:]]
                self._volume = abs(mat_det(rows)) / math.factorial(n)
        return self._volume

    def barycentric_forms(self):
        """One affine form per vertex: 1 at that vertex, 0 on the opposite facet.

        All n+1 forms are >= 0 exactly on the simplex.  Requires a
        full-dimensional simplex.
        """
        if self._bary is None:
            rows = [list(v) + [QONE] for v in self.vertices]
            inv = mat_inverse(rows)
            n = self.ambient_dim
            self._bary = tuple(
                (tuple(inv[i][j] for i in range(n)), inv[n][j])
                for j in range(len(self.vertices))
            )
        return self._bary

    def bbox(self):
        if self._bbox is None:
            lo = tuple(min(v[i] for v in self.vertices)
                       for i in range(self.ambient_dim))
            hi = tuple(max(v[i] for v in self.vertices)
                       for i in range(self.ambient_dim))
            self._bbox = (lo, hi)
        return self._bbox

    def contains(self, p: Point) -> bool:
        lo, hi = self.bbox()
        for x, a, b in zip(p, lo, hi):
            if x < a or x > b:
                return False
        return all(form_value(f, p) >= 0 for f in self.barycentric_forms())

    def __eq__(self, other):
        return isinstance(other, Simplex) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return "Simplex(%r)" % (self.vertices,)


def simplex_volume(s: Simplex):
    return s.volume()


def bboxes_overlap(a, b) -> bool:
    (alo, ahi), (blo, bhi) = a, b
    for al, ah, bl, bh in zip(alo, ahi, blo, bhi):
        if ah < bl or bh < al:
            return False
    return True


def split_simplex_by_form(vertices, form: LinForm):
    """Split a simplex along the hyperplane form = 0.

    Returns (nonneg_pieces, nonpos_pieces): two lists of vertex tuples whose
    union subdivides the input simplex and on which the form has constant
    sign.  Splitting is by repeated stellar subdivision at edge crossings,
    so pieces are genuine simplices and the result is exact.
    """
    pos, neg = [], []
    stack = [(tuple(vertices), tuple(form_value(form, v) for v in vertices))]
    while stack:
        verts, vals = stack.pop()
        cut = None
        for i in range(len(verts)):
            if vals[i] > 0:
                for j in range(len(verts)):
                    if vals[j] < 0:
                        cut = (i, j)
                        break
                if cut:
                    break
        if cut is None:
            (pos if all(v >= 0 for v in vals) else neg).append(verts)
            continue
        i, j = cut
        t = vals[i] / (vals[i] - vals[j])
        w = tuple(x + t * (y - x) for x, y in zip(verts[i], verts[j]))
        child_i = verts[:i] + (w,) + verts[i + 1:]
        vals_i = vals[:i] + (QZERO,) + vals[i + 1:]
        child_j = verts[:j] + (w,) + verts[j + 1:]
        vals_j = vals[:j] + (QZERO,) + vals[j + 1:]
        stack.append((child_i, vals_i))
        stack.append((child_j, vals_j))
    return pos, neg


def _clip_polygon(points, form):
    """Exact half-plane clip of an ordered convex polygon (2D only)."""
    vals = [form_value(form, p) for p in points]
    if all(v >= 0 for v in vals):
        return points
    if all(v <= 0 for v in vals):
        return []
    out = []
    m = len(points)
    for i in range(m):
        j = (i + 1) % m
        vi, vj = vals[i], vals[j]
        if vi >= 0:
            out.append(points[i])
        if (vi > 0 > vj) or (vi < 0 < vj):
            t = vi / (vi - vj)
            out.append(tuple(x + t * (y - x)
                             for x, y in zip(points[i], points[j])))
    return _prune_collinear(out)


def _prune_collinear(points):
    """Drop duplicate and collinear-interior vertices of a convex polygon."""
    uniq = []
    for p in points:
        if not uniq or p != uniq[-1]:
            uniq.append(p)
    if len(uniq) > 1 and uniq[0] == uniq[-1]:
        uniq.pop()
    if len(uniq) < 3:
        return uniq
    out = []
    m = len(uniq)
    for i in range(m):
        a, b, c = uniq[i - 1], uniq[i], uniq[(i + 1) % m]
        cross = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        if cross != 0:
            out.append(b)
    return out


def polygon_orient_ccw(poly):
    """Counterclockwise ordering of an ordered convex polygon (2D)."""
    area2 = QZERO
    m = len(poly)
    for i in range(m):
        p, r = poly[i], poly[(i + 1) % m]
        area2 += p[0] * r[1] - p[1] * r[0]
    return tuple(poly) if area2 > 0 else tuple(reversed(poly))


def polygon_area2_centroid(poly):
    """(twice the area, centroid) of a ccw convex polygon, exact."""
    area2 = QZERO
    cx = QZERO
    cy = QZERO
    m = len(poly)
    for i in range(m):
        p, r = poly[i], poly[(i + 1) % m]
        w = p[0] * r[1] - p[1] * r[0]
        area2 += w
        cx += (p[0] + r[0]) * w
        cy += (p[1] + r[1]) * w
    if not area2:
        raise ZeroDivisionError("degenerate polygon")
    return area2, (cx / (3 * area2), cy / (3 * area2))


def polygon_edge_forms(poly):
    """Half-plane forms of a ccw convex polygon; form >= 0 inside."""
    out = []
    m = len(poly)
    for i in range(m):
        p, r = poly[i], poly[(i + 1) % m]
        dx, dy = r[0] - p[0], r[1] - p[1]
        out.append(((-dy, dx), dy * p[0] - dx * p[1]))
    return tuple(out)


def float_bbox(points, pad=1e-9):
    xs = [float(p[0]) for p in points]
    ys = [float(p[1]) for p in points]
    return (min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)


class BoxGrid2D:
    """Uniform-grid index over float bounding boxes (candidate filtering only;
    every candidate is re-checked exactly by the caller)."""

    def __init__(self, boxes):
        self.boxes = boxes
        n = max(1, len(boxes))
        self.res = max(1, int(n ** 0.5))
        self.lo_x = min((b[0] for b in boxes), default=0.0)
        self.lo_y = min((b[1] for b in boxes), default=0.0)
        hi_x = max((b[2] for b in boxes), default=1.0)
        hi_y = max((b[3] for b in boxes), default=1.0)
        self.step_x = max((hi_x - self.lo_x) / self.res, 1e-12)
        self.step_y = max((hi_y - self.lo_y) / self.res, 1e-12)
        self.cells = {}
        for idx, box in enumerate(boxes):
            for key in self._keys(box):
                self.cells.setdefault(key, []).append(idx)

    def _keys(self, box):
        x0 = max(0, int((box[0] - self.lo_x) / self.step_x))
        y0 = max(0, int((box[1] - self.lo_y) / self.step_y))
        x1 = min(self.res - 1, int((box[2] - self.lo_x) / self.step_x))
        y1 = min(self.res - 1, int((box[3] - self.lo_y) / self.step_y))
        for i in range(x0, x1 + 1):
            for j in range(y0, y1 + 1):
                yield (i, j)

    def candidates(self, box):
        seen = set()
        boxes = self.boxes
        for key in self._keys(box):
            for idx in self.cells.get(key, ()):
                if idx in seen:
                    continue
                seen.add(idx)
                other = boxes[idx]
                if (other[0] <= box[2] and box[0] <= other[2]
                        and other[1] <= box[3] and box[1] <= other[3]):
                    yield idx


def overlay_pullback(a_polys, b_pieces, eps=1e-9):
    """Clip each planar piece (poly, matrix) of b against the pullbacks of the
    polygons in a_polys; yields (a_index, b_index, clipped ccw polygon).

    Cheap float screening decides the all-in / all-out cases (with an eps
    margin far above the attainable rounding error); only genuinely cut
    polygons pay for exact rational clipping, so the overlay stays exact.
    """
    a_forms = [polygon_edge_forms(p) for p in a_polys]
    a_fforms = [
        [(float(c0), float(c1), float(b)) for (c0, c1), b in forms]
        for forms in a_forms
    ]
    grid = BoxGrid2D([float_bbox(p) for p in a_polys])
    for bi, (poly, bmat) in enumerate(b_pieces):
        r0, r1 = bmat[0], bmat[1]
        fr00, fr01, fr02 = (float(x) for x in r0)
        fr10, fr11, fr12 = (float(x) for x in r1)
        fpoly = [(float(v[0]), float(v[1])) for v in poly]
        imgs = [(r0[0] * v[0] + r0[1] * v[1] + r0[2],
                 r1[0] * v[0] + r1[1] * v[1] + r1[2]) for v in poly]
        for ai in grid.candidates(float_bbox(imgs)):
            clipped, fclipped = poly, fpoly
            ok = True
            for ((c0, c1), off), (fc0, fc1, fb) in zip(a_forms[ai],
                                                       a_fforms[ai]):
                fa0 = fc0 * fr00 + fc1 * fr10
                fa1 = fc0 * fr01 + fc1 * fr11
                fab = fb + fc0 * fr02 + fc1 * fr12
                vals = [fa0 * x + fa1 * y + fab for x, y in fclipped]
                if max(vals) < -eps:
                    ok = False
                    break
                if min(vals) > eps:
                    continue
                pulled = ((c0 * r0[0] + c1 * r1[0],
                           c0 * r0[1] + c1 * r1[1]),
                          off + c0 * r0[2] + c1 * r1[2])
                clipped = _clip_polygon(clipped, pulled)
                if len(clipped) < 3:
                    ok = False
                    break
                fclipped = [(float(p[0]), float(p[1])) for p in clipped]
            if ok:
                yield ai, bi, clipped


def clip_simplex(vertices, forms) -> list:
    """Intersect a simplex with the halfspaces form >= 0.

    Returns a list of full-dimensional simplices (vertex tuples) subdividing
    the intersection; degenerate pieces are dropped.  In the plane the cell
    is clipped as a convex polygon and fan-triangulated, which keeps the
    subdivision minimal; in higher dimension the split is by repeated
    stellar subdivision.
    """
    if len(vertices[0]) == 2 and len(vertices) == 3:
        poly = list(vertices)
        for form in forms:
            poly = _clip_polygon(poly, form)
            if len(poly) < 3:
                return []
        return [(poly[0], poly[i], poly[i + 1]) for i in range(1, len(poly) - 1)]
    pieces = [tuple(vertices)]
    for form in forms:
        nxt = []
        for piece in pieces:
            pos, _ = split_simplex_by_form(piece, form)
            nxt.extend(pos)
        pieces = nxt
        if not pieces:
            break
    return [p for p in pieces if Simplex(p).volume() > 0]


# ---------------------------------------------------------------------------
# complexes


@dataclass(frozen=True)
class Complex:
    """Finite simplicial complex given by its full-dimensional cells."""

    ambient_dim: int
    cells: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(
            c if isinstance(c, Simplex) else Simplex(c) for c in self.cells
        ))

    def support_volume(self):
        return sum((c.volume() for c in self.cells), QZERO)

    def find_cell(self, p: Point) -> int:
        """Index of some cell containing p; -1 if p is outside the support."""
        cells = self.cells
        if self.ambient_dim == 2 and len(cells) > 64:
            grid = getattr(self, "_cell_grid", None)
            if grid is None:
                grid = BoxGrid2D([float_bbox(c.vertices) for c in cells])
                object.__setattr__(self, "_cell_grid", grid)
            x, y = float(p[0]), float(p[1])
            for i in sorted(grid.candidates((x, y, x, y))):
                if cells[i].contains(p):
                    return i
            return -1
        for i, cell in enumerate(cells):
            if cell.contains(p):
                return i
        return -1

    def vertex_index(self):
        """Deduplicated vertex list plus per-cell index tuples."""
        verts, lookup, cells = [], {}, []
        for cell in self.cells:
            idx = []
            for v in cell.vertices:
                if v not in lookup:
                    lookup[v] = len(verts)
                    verts.append(v)
                idx.append(lookup[v])
            cells.append(tuple(idx))
        return verts, cells


def cube_triangulation(n: int) -> Complex:
    """Kuhn triangulation of the unit n-cube into n! simplices."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    cells = []
    for perm in itertools.permutations(range(n)):
        verts = [tuple(QZERO for _ in range(n))]
        cur = list(verts[0])
        for axis in perm:
            cur[axis] = QONE
            verts.append(tuple(cur))
        cells.append(Simplex(verts))
    return Complex(n, tuple(cells))


def common_refinement(a: Complex, b: Complex) -> Complex:
    """Refine two complexes with equal support into a common subdivision."""
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    va, vb = a.support_volume(), b.support_volume()
    if va != vb:
        raise ValueError("mismatched supports (volumes %s vs %s)" % (va, vb))
    out = []
    b_faces = [(cell.bbox(), cell.barycentric_forms()) for cell in b.cells]
    for ca in a.cells:
        box = ca.bbox()
        for bbox, forms in b_faces:
            if not bboxes_overlap(box, bbox):
                continue
            out.extend(clip_simplex(ca.vertices, forms))
    ref = Complex(a.ambient_dim, tuple(Simplex(p) for p in out))
    if ref.support_volume() != va:
        raise AssertionError("refinement lost volume")
    return ref


def split_by_form(c: Complex, form) -> Complex:
    """Refine so the form has constant sign on every cell."""
    if isinstance(form, AffineForm):
        form = form.as_linform()
    out = []
    for cell in c.cells:
        pos, neg = split_simplex_by_form(cell.vertices, form)
        out.extend(p for p in pos + neg if Simplex(p).volume() > 0)
    return Complex(c.ambient_dim, tuple(Simplex(p) for p in out))


def denominator(p: Point) -> int:
    """Least d >= 1 with d*p integral; gcd(d*p_1, ..., d*p_n, d) is then 1."""
    d = 1
    for c in p:
        d = math.lcm(d, int(mpq(c).denominator))
    assert math.gcd(d, *(int(mpq(c) * d) for c in p)) == 1 if p else True
    return d


# ---------------------------------------------------------------------------
# polytopes


@dataclass(frozen=True)
class Polytope:
    """Convex polytope carrying both V- and H-representations."""

    vertices: tuple
    halfspaces: tuple  # LinForms, form(x) >= 0 inside

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def volume(self):
        return sum((s.volume() for s in triangulate(self)), QZERO)

    def contains(self, p: Point) -> bool:
        return all(form_value(f, p) >= 0 for f in self.halfspaces)

    @staticmethod
    def from_vertices(vertices) -> "Polytope":
        """Build the H-representation of a full-dimensional vertex set."""
        pts = sorted({tuple(mpq(c) for c in v) for v in vertices})
        n = len(pts[0])
        if affine_rank(pts) != n:
            raise ValueError("vertex set is not full-dimensional")
        halfspaces = []
        seen = set()
        for subset in itertools.combinations(range(len(pts)), n):
            chosen = [pts[i] for i in subset]
            form = _hyperplane_through(chosen)
            if form is None:
                continue
            vals = [form_value(form, p) for p in pts]
            if all(v >= 0 for v in vals):
                pass
            elif all(v <= 0 for v in vals):
                form = (tuple(-c for c in form[0]), -form[1])
                vals = [-v for v in vals]
            else:
                continue
            key = frozenset(i for i, v in enumerate(vals) if v == 0)
            if len(key) >= n and key not in seen:
                seen.add(key)
                halfspaces.append(form)
        return Polytope(tuple(pts), tuple(halfspaces))


def _hyperplane_through(points):
    """A nonzero affine form vanishing on n points of R^n, or None."""
    n = len(points[0])
    rows = [list(p) + [QONE] for p in points]
    # nullspace of the n x (n+1) system
    m = [row[:] for row in rows]
    ncols = n + 1
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = None
        for r in range(rank, len(m)):
            if m[r][col]:
                piv = r
                break
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        for c in range(ncols):
            m[rank][c] *= inv
        for r in range(len(m)):
            if r != rank and m[r][col]:
                factor = m[r][col]
                for c in range(ncols):
                    m[r][c] -= factor * m[rank][c]
        pivots.append(col)
        rank += 1
    if rank != n:
        return None  # points are affinely dependent
    free = next(c for c in range(ncols) if c not in pivots)
    sol = [QZERO] * ncols
    sol[free] = QONE
    for r, col in enumerate(pivots):
        sol[col] = -m[r][free]
    return (tuple(sol[:n]), sol[n])


def intersect_cells(s: Simplex, t: Simplex):
    """Exact convex intersection of two simplices, or None if empty.

    H-representation is the union of both facet systems; vertices are
    enumerated from feasible n-subsets of the active hyperplanes.
    """
    if s.ambient_dim != t.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    if not bboxes_overlap(s.bbox(), t.bbox()):
        return None
    n = s.ambient_dim
    halfspaces = tuple(s.barycentric_forms()) + tuple(t.barycentric_forms())
    verts = set()
    for subset in itertools.combinations(halfspaces, n):
        rows = [list(f[0]) for f in subset]
        rhs = [-f[1] for f in subset]
        try:
            sol = solve_linear(rows, rhs)
        except ZeroDivisionError:
            continue
        p = tuple(sol)
        if all(form_value(f, p) >= 0 for f in halfspaces):
            verts.add(p)
    if not verts:
        return None
    return Polytope(tuple(sorted(verts)), halfspaces)


def triangulate(p: Polytope) -> list:
    """Deterministic triangulation using the polytope's own vertices.

    Cones from the lexicographically smallest vertex over recursively
    triangulated facets.
    """
    if p.is_empty:
        return []
    return [Simplex(v) for v in _triangulate_points(sorted(set(p.vertices)))]


def _triangulate_points(pts):
    """Triangulate a convex-position point set; returns vertex tuples."""
    k = affine_rank(pts)
    if k == 0:
        return []
    if len(pts) == k + 1:
        return [tuple(pts)]
    local = _to_hull_coords(pts) if k < len(pts[0]) else pts
    apex = 0  # pts sorted, so index 0 is the lex-min vertex
    out = []
    for facet in _facet_index_sets(local, k):
        if apex in facet:
            continue
        sub = [pts[i] for i in facet]
        for simplex in _triangulate_points(sub):
            out.append((pts[apex],) + simplex)
    return out


def _to_hull_coords(pts):
    """Coordinates of the points inside their own affine hull."""
    base = pts[0]
    k = affine_rank(pts)
    basis = []
    for p in pts[1:]:
        vec = tuple(x - y for x, y in zip(p, base))
        if affine_rank([tuple(QZERO for _ in base)] + [b for b in basis] + [vec]) > len(basis):
            basis.append(vec)
        if len(basis) == k:
            break
    # pick k independent coordinate rows of the basis matrix
    cols = list(range(len(base)))
    for rows in itertools.combinations(cols, k):
        sq = [[basis[j][r] for j in range(k)] for r in rows]
        if mat_det(sq):
            inv = mat_inverse(sq)
            out = []
            for p in pts:
                rhs = [p[r] - base[r] for r in rows]
                out.append(tuple(
                    sum((inv[i][j] * rhs[j] for j in range(k)), QZERO)
                    for i in range(k)
                ))
            return out
    raise AssertionError("degenerate hull basis")


def _facet_index_sets(pts, k):
    """Facets of a full-dimensional convex-position point set in R^k."""
    facets = []
    seen = set()
    for subset in itertools.combinations(range(len(pts)), k):
        form = _hyperplane_through([pts[i] for i in subset])
        if form is None:
            continue
        vals = [form_value(form, p) for p in pts]
        if not (all(v >= 0 for v in vals) or all(v <= 0 for v in vals)):
            continue
        key = tuple(sorted(i for i, v in enumerate(vals) if v == 0))
        if len(key) >= k and key not in seen:
            seen.add(key)
            facets.append(key)
    return facets


# ---------------------------------------------------------------------------
# JSON encoding


def point_to_json(p: Point):
    return [qstr(c) for c in p]


def point_from_json(data) -> Point:
    return tuple(q(c) for c in data)


def simplex_to_json(s: Simplex):
    return [point_to_json(v) for v in s.vertices]


def simplex_from_json(data) -> Simplex:
    return Simplex([point_from_json(v) for v in data])


def complex_to_json(c: Complex):
    verts, cells = c.vertex_index()
    return {
        "ambient_dim": c.ambient_dim,
        "vertices": [point_to_json(v) for v in verts],
        "cells": [list(idx) for idx in cells],
    }


def complex_from_json(data) -> Complex:
    verts = [point_from_json(v) for v in data["vertices"]]
    cells = [Simplex([verts[i] for i in idx]) for idx in data["cells"]]
    return Complex(int(data["ambient_dim"]), tuple(cells))
