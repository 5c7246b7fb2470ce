import json
import random

import pytest
from gmpy2 import mpq

from mvcube import homeo
from mvcube.geometry import denominator, point
from mvcube.homeo import (
    apply_map,
    as_map,
    compose_maps,
    gen_R,
    gen_R_prime,
    gen_S,
    gen_S_prime,
    gen_symmetry,
    identity_map,
    invert_map,
    map_power,
    p_vertex,
    q_vertex,
    random_word,
    square_symmetries,
    validate,
)
from mvcube.rationals import q


def rand_point(rng, den=100):
    return (q(rng.randrange(0, den + 1), den),
            q(rng.randrange(0, den + 1), den))


def test_identity():
    m = identity_map(2)
    assert apply_map(m, (q(1, 3), q(2, 7))) == (q(1, 3), q(2, 7))


def test_symmetry_action():
    swap = gen_symmetry(2, (2, 1))
    assert apply_map(swap, (q(1, 4), q(2, 3))) == (q(2, 3), q(1, 4))
    flip = gen_symmetry(2, (1, 2), (1,))
    assert apply_map(flip, (q(1, 4), q(2, 3))) == (q(3, 4), q(2, 3))


def test_square_symmetries_form_dihedral_group():
    images = set()
    p = (q(1, 3), q(1, 7))
    for s in square_symmetries():
        images.add(apply_map(s, p))
    assert len(images) == 8


def test_p_and_q_vertices():
    assert p_vertex(0, 0) == point(1, 0)
    assert p_vertex(0, 1) == point(1, 1)
    assert p_vertex(1, 1) == point(q(2, 3), q(2, 3))
    # dehomogenized inner-square corners at level h use denominator 2h+1
    assert p_vertex(2, 2) == point(q(2, 5), q(3, 5))
    assert q_vertex(0, 0) == point(1, q(1, 2))
    assert q_vertex(0, 2) == point(0, q(1, 2))


def test_matrix_star_reproduction():
    for k in range(6):
        m = gen_R_prime(k)
        cell_verts = (p_vertex(k + 1, 0), p_vertex(k, 0), p_vertex(k, 1))
        idx = None
        for i, cell in enumerate(m.complex.cells):
            if set(cell.vertices) == set(cell_verts):
                idx = i
                break
        assert idx is not None
        mat = m.matrices[idx]
        expected = ((1, 0, 0), (-2 * k - 1, 1, k + 1), (0, 0, 1))
        for row, erow in zip(mat, expected):
            assert tuple(int(x) for x in row) == erow


def test_gen_R_prime_validates_det_plus_one():
    for k in range(4):
        rep = validate(as_map(gen_R_prime(k)))
        assert rep.passed
        assert rep.det_sign == 1


def test_gen_S_prime_fails_integrality():
    for k in range(4):
        rep = validate(gen_S_prime(k), check_tiling=False)
        assert not rep.passed
        assert any(kind == "integer-entries" for kind, _ in rep.failures)


def test_gen_S_prime_square_validates():
    for k in range(4):
        sq = map_power(gen_S_prime(k), 2)
        assert validate(sq).passed


def test_gen_R_and_gen_S_are_homeomorphisms():
    for k in range(3):
        assert gen_R(k).certificate.passed
        assert gen_S(k).certificate.passed


def test_composition_agrees_pointwise():
    rng = random.Random(4)
    a, b = gen_R(1), gen_symmetry(2, (2, 1))
    c = compose_maps(a, b)
    for _ in range(50):
        p = rand_point(rng)
        assert c.apply(p) == apply_map(a, apply_map(b, p))


def test_compose_then_invert_is_identity():
    rng = random.Random(9)
    w = random_word(2, 12, 3)
    inv = invert_map(w)
    for _ in range(100):
        p = rand_point(rng)
        assert apply_map(inv, apply_map(w, p)) == p


def test_map_power_matches_iteration():
    rng = random.Random(14)
    m = gen_R_prime(1)
    cubed = map_power(m, 3)
    for _ in range(20):
        p = rand_point(rng)
        expect = p
        for _ in range(3):
            expect = apply_map(m, expect)
        assert cubed.apply(p) == expect


def test_denominator_preservation():
    rng = random.Random(6)
    w = random_word(2, 3, 4)
    for _ in range(40):
        p = rand_point(rng, den=rng.choice([4, 5, 12]))
        assert denominator(w.apply(p)) == denominator(p)


def test_random_word_deterministic_json():
    a = random_word(2, 7, 4).to_json()
    b = random_word(2, 7, 4).to_json()
    assert json.dumps(a) == json.dumps(b)


def test_random_word_zero_length_is_identity():
    w = random_word(2, 5, 0)
    assert apply_map(w, (q(2, 9), q(1, 3))) == (q(2, 9), q(1, 3))


def test_random_word_validates():
    for seed in (0, 1, 2):
        w = random_word(2, seed, 3)
        assert w.certificate.passed


def test_json_round_trip():
    m = as_map(gen_R(1))
    doc = json.loads(json.dumps(m.to_json()))
    m2 = homeo.PwlMap.from_json(doc)
    rng = random.Random(17)
    for _ in range(30):
        p = rand_point(rng)
        assert m.apply(p) == m2.apply(p)


def test_determinant_sign_multiplies_under_composition():
    flip = gen_symmetry(2, (1, 2), (1,))  # orientation-reversing
    assert flip.certificate.det_sign == -1
    both = compose_maps(flip, flip)
    assert validate(both).det_sign == 1


def test_validate_rejects_bad_last_row():
    mat = ((mpq(1), mpq(0), mpq(0)), (mpq(0), mpq(1), mpq(0)),
           (mpq(0), mpq(1), mpq(1)))
    cx = homeo.cube_triangulation(2)
    rep = validate(homeo.PwlMap(2, cx, (mat,) * 2), check_tiling=False)
    assert not rep.passed
    assert any(kind == "last-row" for kind, _ in rep.failures)
