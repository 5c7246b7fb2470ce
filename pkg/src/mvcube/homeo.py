"""McNaughton homeomorphisms of the unit cube.

Piecewise homogeneous-matrix maps over rational simplicial complexes,
their validation (integrality, last row, uniform unit determinant,
continuity, image tiling), the group operations, and the explicit
generator families acting on nested squares and rhombi of the unit
square.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass, field

from gmpy2 import mpq

from .rationals import QHALF, QONE, QZERO, q, qstr
from .geometry import (
    Complex,
    Simplex,
    bboxes_overlap,
    clip_simplex,
    overlay_pullback,
    polygon_orient_ccw,
    complex_from_json,
    complex_to_json,
    cube_triangulation,
    form_value,
    mat_det,
    mat_inverse,
    point,
)


@dataclass(frozen=True)
class PwlMap:
    """Piecewise-affine map of the cube: one homogeneous matrix per cell."""

    n: int
    complex: Complex
    matrices: tuple  # (n+1)x(n+1) tuples of tuples of mpq, last row (0..0 1)

    @staticmethod
    def apply_matrix(mat, p):
        n = len(p)
        return tuple(
            sum((mat[i][j] * p[j] for j in range(n) if mat[i][j]), mat[i][n])
            for i in range(n)
        )

    def apply(self, p):
        p = tuple(mpq(c) for c in p)
        if any(c < 0 or c > 1 for c in p):
            raise ValueError("point outside the unit cube")
        i = self.complex.find_cell(p)
        if i < 0:
            raise AssertionError("complex does not cover the cube at %r" % (p,))
        return self.apply_matrix(self.matrices[i], p)

    def image_cells(self):
        return [
            Simplex([self.apply_matrix(m, v) for v in cell.vertices])
            for cell, m in zip(self.complex.cells, self.matrices)
        ]

    def to_json(self):
        return {
            "n": self.n,
            "complex": complex_to_json(self.complex),
            "matrices": [
                [qstr(entry) for row in mat for entry in row]
                for mat in self.matrices
            ],
        }

    @staticmethod
    def from_json(data) -> "PwlMap":
        n = int(data["n"])
        cx = complex_from_json(data["complex"])
        mats = []
        for flat in data["matrices"]:
            vals = [q(x) for x in flat]
            mats.append(tuple(
                tuple(vals[i * (n + 1) + j] for j in range(n + 1))
                for i in range(n + 1)
            ))
        return PwlMap(n, cx, tuple(mats))


@dataclass(frozen=True)
class ValidationReport:
    passed: bool
    failures: tuple  # (condition id, witness) pairs
    det_sign: int = 0

    def summary(self):
        return {
            "passed": self.passed,
            "det_sign": self.det_sign,
            "failures": [
                {"condition": cond, "witness": repr(witness)}
                for cond, witness in self.failures
            ],
        }


@dataclass(frozen=True)
class McNaughtonHomeo:
    """A validated PwlMap together with its validation certificate."""

    pwl_map: PwlMap
    certificate: ValidationReport

    @property
    def n(self):
        return self.pwl_map.n

    @property
    def complex(self):
        return self.pwl_map.complex

    @property
    def matrices(self):
        return self.pwl_map.matrices

    def apply(self, p):
        return self.pwl_map.apply(p)

    def apply_matrix(self, mat, p):
        return PwlMap.apply_matrix(mat, p)

    def to_json(self):
        return self.pwl_map.to_json()


def as_map(m) -> PwlMap:
    return m.pwl_map if isinstance(m, McNaughtonHomeo) else m


def validate(m: PwlMap, check_tiling: bool = True) -> ValidationReport:
    """Check the dual-characterization conditions plus image tiling.

    Conditions: integer entries, last row (0..0 1), uniform determinant
    +1 or -1, continuity at shared vertices, vertex images inside the
    cube, and (volume-based) bijectivity: image volumes sum to 1 with
    pairwise overlaps of volume 0.
    """
    m = as_map(m)
    failures = []
    n = m.n
    det_sign = 0
    dets = []
    for ci, mat in enumerate(m.matrices):
        for i, row in enumerate(mat):
            for j, entry in enumerate(row):
                if mpq(entry).denominator != 1:
                    failures.append(("integer-entries", (ci, i, j, qstr(entry))))
        if tuple(mat[n]) != tuple([QZERO] * n + [QONE]):
            failures.append(("last-row", (ci, tuple(mat[n]))))
        dets.append(mat_det(mat))
    if dets:
        if any(abs(d) != 1 for d in dets):
            bad = next(i for i, d in enumerate(dets) if abs(d) != 1)
            failures.append(("unit-determinant", (bad, qstr(dets[bad]))))
        elif len({d > 0 for d in dets}) != 1:
            failures.append(("uniform-determinant-sign", tuple(qstr(d) for d in dets)))
        else:
            det_sign = 1 if dets[0] > 0 else -1
    images = {}
    for ci, (cell, mat) in enumerate(zip(m.complex.cells, m.matrices)):
        for v in cell.vertices:
            img = PwlMap.apply_matrix(mat, v)
            if any(c < 0 or c > 1 for c in img):
                failures.append(("vertex-image-in-cube", (ci, v, img)))
            prev = images.setdefault(v, img)
            if prev != img:
                failures.append(("continuity", (ci, v, prev, img)))
    if m.complex.support_volume() != QONE:
        failures.append(("domain-tiling", qstr(m.complex.support_volume())))
    if check_tiling and not failures:
        img_cells = m.image_cells()
        total = sum((c.volume() for c in img_cells), QZERO)
        if total != QONE:
            failures.append(("image-volume-sum", qstr(total)))
        boxes = [c.bbox() for c in img_cells]
        for i in range(len(img_cells)):
            for j in range(i + 1, len(img_cells)):
                if not bboxes_overlap(boxes[i], boxes[j]):
                    continue
                pieces = clip_simplex(
                    img_cells[i].vertices, img_cells[j].barycentric_forms()
                )
                overlap = sum((Simplex(p).volume() for p in pieces), QZERO)
                if overlap != 0:
                    failures.append(("image-overlap", (i, j, qstr(overlap))))
    return ValidationReport(not failures, tuple(failures), det_sign)


def as_homeo(m: PwlMap, check_tiling: bool = True) -> McNaughtonHomeo:
    report = validate(m, check_tiling=check_tiling)
    if not report.passed:
        raise ValueError("map failed validation: %s" % (report.failures[:3],))
    return McNaughtonHomeo(m, report)


def apply_map(m, p):
    return as_map(m).apply(tuple(mpq(c) for c in p))


def identity_map(n: int) -> McNaughtonHomeo:
    cx = cube_triangulation(n)
    mat = _identity_matrix(n)
    return as_homeo(PwlMap(n, cx, (mat,) * len(cx.cells)))


def _identity_matrix(n):
    return tuple(
        tuple(QONE if i == j else QZERO for j in range(n + 1))
        for i in range(n + 1)
    )


def matrix_from_vertex_images(vertices, images):
    """Homogeneous matrix of the affine map sending each vertex to its image."""
    n = len(vertices[0])
    rows_in = [list(v) + [QONE] for v in vertices]
    inv = mat_inverse(rows_in)
    mat = []
    for i in range(n):
        rhs = [img[i] for img in images]
        row = [
            sum((inv[j][k] * rhs[k] for k in range(n + 1)), QZERO)
            for j in range(n + 1)
        ]
        mat.append(tuple(row))
    mat.append(tuple([QZERO] * n + [QONE]))
    return tuple(mat)


def _mat_mul(a, b):
    size = len(a)
    return tuple(
        tuple(
            sum((a[i][k] * b[k][j] for k in range(size)), QZERO)
            for j in range(size)
        )
        for i in range(size)
    )


def _map_pieces(m: PwlMap):
    """Convex-polygon presentation of a planar map: [(ccw polygon, matrix)].

    Cached on the map object; compositions keep polygons un-triangulated,
    which avoids the cell blow-up of re-triangulating at every step.
    """
    cached = getattr(m, "_pieces", None)
    if cached is not None:
        return cached
    pieces = [(polygon_orient_ccw(cell.vertices), mat)
              for cell, mat in zip(m.complex.cells, m.matrices)]
    object.__setattr__(m, "_pieces", pieces)
    return pieces


def _pieces_to_map(n, pieces) -> PwlMap:
    cells, mats = [], []
    for poly, mat in pieces:
        for i in range(1, len(poly) - 1):
            cells.append(Simplex((poly[0], poly[i], poly[i + 1])))
            mats.append(mat)
    out = PwlMap(n, Complex(n, tuple(cells)), tuple(mats))
    object.__setattr__(out, "_pieces", pieces)
    return out


def _compose_pieces(a_pieces, b_pieces):
    """Pieces of a o b from polygon pieces of a and b (planar only)."""
    if len({mat for _, mat in a_pieces}) == 1:
        amat = a_pieces[0][1]
        return [(poly, _mat_mul(amat, mat)) for poly, mat in b_pieces]
    if len({mat for _, mat in b_pieces}) == 1:
        bmat = b_pieces[0][1]
        inv = tuple(tuple(r) for r in mat_inverse(bmat))
        return [
            (polygon_orient_ccw([PwlMap.apply_matrix(inv, v) for v in poly]),
             _mat_mul(amat, bmat))
            for poly, amat in a_pieces
        ]
    out = []
    for ai, bi, poly in overlay_pullback([p for p, _ in a_pieces], b_pieces):
        out.append((poly, _mat_mul(a_pieces[ai][1], b_pieces[bi][1])))
    return out


def compose_maps(a, b) -> PwlMap:
    """Piecewise composite a o b (apply b first)."""
    a, b = as_map(a), as_map(b)
    if a.n != b.n:
        raise ValueError("dimension mismatch")
    n = a.n
    # fast path: globally affine outer map
    if len(set(a.matrices)) == 1:
        mat = a.matrices[0]
        return PwlMap(n, b.complex, tuple(_mat_mul(mat, m) for m in b.matrices))
    if n == 2:
        return _pieces_to_map(2, _compose_pieces(_map_pieces(a),
                                                 _map_pieces(b)))
    a_cells = [(cell.bbox(), cell.barycentric_forms(), mat)
               for cell, mat in zip(a.complex.cells, a.matrices)]
    cells, mats = [], []
    for cell, bmat in zip(b.complex.cells, b.matrices):
        rows = bmat[:n]
        imgs = [PwlMap.apply_matrix(bmat, v) for v in cell.vertices]
        ibox = (tuple(min(v[i] for v in imgs) for i in range(n)),
                tuple(max(v[i] for v in imgs) for i in range(n)))
        for bbox, cuts, amat in a_cells:
            if not bboxes_overlap(ibox, bbox):
                continue
            pulled = []
            for coeffs, off in cuts:
                new_coeffs = tuple(
                    sum((coeffs[i] * rows[i][j] for i in range(n)), QZERO)
                    for j in range(n)
                )
                new_off = off + sum(
                    (coeffs[i] * rows[i][n] for i in range(n)), QZERO
                )
                pulled.append((new_coeffs, new_off))
            prod = None
            for piece in clip_simplex(cell.vertices, pulled):
                if prod is None:
                    prod = _mat_mul(amat, bmat)
                cells.append(Simplex(piece))
                mats.append(prod)
    return PwlMap(n, Complex(n, tuple(cells)), tuple(mats))


def map_power(m, k: int) -> PwlMap:
    out = as_map(m)
    result = None
    base = out
    while k:
        if k & 1:
            result = base if result is None else compose_maps(result, base)
        k >>= 1
        if k:
            base = compose_maps(base, base)
    return result


def invert_map(a: McNaughtonHomeo) -> McNaughtonHomeo:
    """Group inverse; integer because all piece determinants are +-1."""
    if not isinstance(a, McNaughtonHomeo):
        a = as_homeo(a)
    cells = a.pwl_map.image_cells()
    mats = tuple(mat_inverse(m) for m in a.matrices)
    mats = tuple(tuple(tuple(r) for r in m) for m in mats)
    return as_homeo(PwlMap(a.n, Complex(a.n, tuple(cells)), mats),
                    check_tiling=False)


def gen_symmetry(n: int, permutation, flip_mask=()) -> McNaughtonHomeo:
    """Hyperoctahedral symmetry x_i -> x_{perm(i)} or 1 - x_{perm(i)}."""
    perm = tuple(permutation)
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError("invalid permutation %r" % (perm,))
    flips = set(flip_mask)
    mat = []
    for i in range(n):
        row = [QZERO] * (n + 1)
        j = perm[i] - 1
        if (i + 1) in flips:
            row[j] = -QONE
            row[n] = QONE
        else:
            row[j] = QONE
        mat.append(tuple(row))
    mat.append(tuple([QZERO] * n + [QONE]))
    cx = cube_triangulation(n)
    return as_homeo(PwlMap(n, cx, (tuple(mat),) * len(cx.cells)))


# ---------------------------------------------------------------------------
# the nested-square and nested-rhombus generator families (n = 2)


def p_vertex(h: int, i: int):
    """Vertices of the nested squares: lower-right, upper-right, upper-left,
    lower-left for i = 0..3."""
    d = 2 * h + 1
    coords = {
        0: (h + 1, h),
        1: (h + 1, h + 1),
        2: (h, h + 1),
        3: (h, h),
    }[i % 4]
    return (mpq(coords[0], d), mpq(coords[1], d))


def q_vertex(h: int, i: int):
    """Vertices of the nested rhombi: right, top, left, bottom for i = 0..3."""
    d = 2 * h + 2
    coords = {
        0: (h + 2, h + 1),
        1: (h + 1, h + 2),
        2: (h, h + 1),
        3: (h + 1, h),
    }[i % 4]
    return (mpq(coords[0], d), mpq(coords[1], d))


_CENTER = (QHALF, QHALF)
# quarter turn around the center: (x, y) -> (1 - y, x)
_QUARTER_TURN = (
    (QZERO, -QONE, QONE),
    (QONE, QZERO, QZERO),
    (QZERO, QZERO, QONE),
)


def _annulus_triangles(outer, inner):
    """Eight triangles tiling the annulus between two nested quadrilaterals
    with matched vertices."""
    tris = []
    for i in range(4):
        tris.append((inner[i], outer[i], outer[(i + 1) % 4]))
        tris.append((inner[i], inner[(i + 1) % 4], outer[(i + 1) % 4]))
    return tris


def _twisting_map(rings, corner_triangles=()):
    """Build the map that cyclically rotates the innermost ring's vertices.

    ``rings`` is the list of nested vertex quadruples from the outermost to
    the innermost; the map is the identity on every ring but the innermost,
    whose vertices advance by one position, and a quarter turn on the core.
    """
    cells, mats = [], []
    ident = _identity_matrix(2)
    for tri in corner_triangles:
        cells.append(Simplex(tri))
        mats.append(ident)
    for outer, inner in zip(rings, rings[1:]):
        last = inner is rings[-1]
        for tri in _annulus_triangles(outer, inner):
            cells.append(Simplex(tri))
            if last:
                images = [
                    inner[(inner.index(v) + 1) % 4] if v in inner else v
                    for v in tri
                ]
                mats.append(matrix_from_vertex_images(tri, images))
            else:
                mats.append(ident)
    core = rings[-1]
    for i in range(4):
        cells.append(Simplex((core[i], core[(i + 1) % 4], _CENTER)))
        mats.append(_QUARTER_TURN)
    return PwlMap(2, Complex(2, tuple(cells)), tuple(mats))


@functools.lru_cache(maxsize=None)
def gen_R_prime(k: int) -> McNaughtonHomeo:
    """Quarter-twist between the nested squares: rotates the inner square's
    vertices cyclically and fixes every other vertex."""
    if k < 0:
        raise ValueError("k must be >= 0")
    rings = [tuple(p_vertex(0, i) for i in range(4))]
    if k > 0:
        rings.append(tuple(p_vertex(k, i) for i in range(4)))
    rings.append(tuple(p_vertex(k + 1, i) for i in range(4)))
    return as_homeo(_twisting_map(rings))


@functools.lru_cache(maxsize=None)
def gen_S_prime(k: int) -> PwlMap:
    """Quarter-twist between the nested rhombi.  Not integral: its matrices
    have rational non-integer entries, so it fails validation; its square
    and fourth power are validated homeomorphisms."""
    if k < 0:
        raise ValueError("k must be >= 0")
    outer = tuple(q_vertex(0, i) for i in range(4))
    corners = [point(1, 1), point(0, 1), point(0, 0), point(1, 0)]
    corner_tris = [
        (corners[i], outer[i], outer[(i + 1) % 4]) for i in range(4)
    ]
    rings = [outer]
    if k > 0:
        rings.append(tuple(q_vertex(k, i) for i in range(4)))
    rings.append(tuple(q_vertex(k + 1, i) for i in range(4)))
    return _twisting_map(rings, corner_tris)


@functools.lru_cache(maxsize=None)
def gen_R(k: int) -> McNaughtonHomeo:
    """Full twist on the square annulus: fourth power of the quarter twist."""
    return as_homeo(map_power(gen_R_prime(k), 4), check_tiling=False)


@functools.lru_cache(maxsize=None)
def gen_S(k: int) -> McNaughtonHomeo:
    """Full twist on the rhombus annulus: fourth power of the quarter twist."""
    return as_homeo(map_power(gen_S_prime(k), 4), check_tiling=False)


def square_symmetries():
    """The eight symmetries of the unit square as McNaughton homeomorphisms."""
    out = []
    for perm in ((1, 2), (2, 1)):
        for flips in ((), (1,), (2,), (1, 2)):
            out.append(gen_symmetry(2, perm, flips))
    return out


def random_word(n: int, seed: int, length: int) -> McNaughtonHomeo:
    """Deterministic pseudorandom product of generators."""
    if length < 0:
        raise ValueError("length must be >= 0")
    rng = random.Random(seed)
    if n == 2:
        syms = list(square_symmetries())
        twists = [g(k) for k in range(4) for g in (gen_R, gen_S)]
        # symmetry-heavy letter distribution keeps long words from piling
        # twist upon twist, which is what makes piece counts explode
        gens = syms + twists
        weights = [2] * len(syms) + [1] * len(twists)
    else:
        rnge = list(range(1, n + 1))
        gens, weights = [], None
        for _ in range(8):
            perm = rnge[:]
            rng.shuffle(perm)
            flips = tuple(i for i in rnge if rng.random() < 0.5)
            gens.append(gen_symmetry(n, perm, flips))
    word = [as_map(rng.choices(gens, weights=weights)[0])
            for _ in range(length)]
    if not word:
        return identity_map(n)
    # balanced pairwise reduction: same product, but the large partial
    # products meet each other as late as possible
    while len(word) > 1:
        word = [
            compose_maps(word[i], word[i + 1]) if i + 1 < len(word)
            else word[i]
            for i in range(0, len(word), 2)
        ]
    acc = word[0]
    return as_homeo(acc, check_tiling=(len(acc.complex.cells) <= 64))
