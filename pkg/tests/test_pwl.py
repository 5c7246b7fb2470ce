import json
import random

import pytest
from gmpy2 import mpq

from mvcube import pwl, terms, homeo
from mvcube.geometry import AffineForm
from mvcube.rationals import q


def build(src, n):
    return terms.term_to_pwl(terms.parse_term(src, n), n)


def test_generator_and_constant():
    x = pwl.generator(2, 1)
    assert x.eval((q(1, 3), q(2, 3))) == q(1, 3)
    one = pwl.constant(2, 1)
    assert one.eval((0, 0)) == 1


def test_connective_truncation_points():
    f = build("(x1 + x1)", 1)
    assert f.eval((q(1, 4),)) == q(1, 2)
    assert f.eval((q(3, 4),)) == 1
    g = build("(x1 . x1)", 1)
    assert g.eval((q(3, 4),)) == q(1, 2)
    assert g.eval((q(1, 4),)) == 0


def test_check_invariants_hold():
    rng = random.Random(3)
    for _ in range(10):
        f = terms.term_to_pwl(terms.random_term(2, 4, rng), 2)
        f.check()


def test_integral_tent():
    # the symmetric tent min(x, 1-x) has area 1/4
    f = build("(x1 & !x1)", 1)
    assert pwl.integrate(f) == q(1, 4)


def test_integral_relu():
    f = build("(x1 - !x1)", 1)  # max(0, 2x-1)
    assert pwl.integrate(f) == q(1, 4)


def test_integral_absolute_difference():
    f = build("((x1 - x2) + (x2 - x1))", 2)  # |x1 - x2|
    assert pwl.integrate(f) == q(1, 3)


def test_integral_doubled_absolute_difference():
    f = build("(((x1 - x2) + (x2 - x1)) + ((x1 - x2) + (x2 - x1)))", 2)
    assert pwl.integrate(f) == q(7, 12)


def test_k_fold_matches_repeated_oplus():
    f = build("(x1 - !x1)", 1)
    doubled = pwl.connective("oplus", f, f)
    k2 = pwl.k_fold(f, 2)
    for i in range(9):
        p = (q(i, 8),)
        assert doubled.eval(p) == k2.eval(p)


def test_zero_set_and_pseudotrue():
    f = build("(x1 - !x1)", 1)  # vanishes on [0, 1/2]
    assert not pwl.is_pseudotrue(f)
    assert pwl.support_volume(f) == q(1, 2)
    g = build("(x1 | !x1)", 1)  # >= 1/2 everywhere
    assert pwl.is_pseudotrue(g)
    assert not pwl.zero_set(g).faces


def test_zero_function_detection():
    z = build("(x1 . 0)", 2)
    assert z.is_zero_function()
    assert pwl.integrate(z) == 0


def test_cylinder_values_and_integral():
    f = build("(x1 & !x1)", 1)
    c = pwl.cylinder(f, 3)
    assert c.n == 3
    rng = random.Random(1)
    for _ in range(20):
        p = tuple(q(rng.randrange(0, 11), 10) for _ in range(3))
        assert c.eval(p) == f.eval(p[:1])
    assert pwl.integrate(c) == q(1, 4)


def test_compose_with_symmetry():
    f = build("(x1 . x2)", 2)
    flip = homeo.gen_symmetry(2, (1, 2), (1,))  # x1 -> 1 - x1
    g = pwl.compose(f, homeo.as_map(flip))
    for i in range(5):
        p = (q(i, 4), q(1, 3))
        assert g.eval(p) == f.eval((1 - p[0], p[1]))


def test_compose_integral_invariance_small():
    f = build("((x1 + x2) . !(x1 & x2))", 2)
    m = homeo.as_map(homeo.gen_R(1))
    g = pwl.compose(f, m)
    assert pwl.integrate(g) == pwl.integrate(f)
    assert pwl.integrate_composed(f, m) == pwl.integrate(f)


def test_integrate_composed_matches_compose_route():
    rng = random.Random(8)
    m = homeo.compose_maps(homeo.gen_R(0), homeo.gen_S(1))
    for _ in range(5):
        f = terms.term_to_pwl(terms.random_term(2, 4, rng), 2)
        assert pwl.integrate_composed(f, m) == pwl.integrate(pwl.compose(f, m))


def test_clamp_form():
    f = pwl.clamp_form(1, AffineForm((3,), -1))  # clamp of 3x - 1
    assert f.eval((0,)) == 0
    assert f.eval((q(1, 2),)) == q(1, 2)
    assert f.eval((1,)) == 1


def test_json_round_trip():
    f = build("((x1 + x2) & !x2)", 2)
    doc = json.loads(json.dumps(f.to_json()))
    g = pwl.PwlFunction.from_json(doc)
    rng = random.Random(2)
    for _ in range(20):
        p = (q(rng.randrange(0, 8), 7), q(rng.randrange(0, 8), 7))
        assert f.eval(p) == g.eval(p)


def test_mv_algebra_identities_random():
    """Spot-check the defining identities on random functions and points."""
    rng = random.Random(21)
    for _ in range(10):
        f = terms.term_to_pwl(terms.random_term(2, 3, rng), 2)
        g = terms.term_to_pwl(terms.random_term(2, 3, rng), 2)
        lhs = pwl.connective("neg", pwl.connective(
            "oplus", pwl.connective("neg", f), g))
        lhs = pwl.connective("oplus", lhs, g)
        rhs = pwl.connective("neg", pwl.connective(
            "oplus", pwl.connective("neg", g), f))
        rhs = pwl.connective("oplus", rhs, f)
        for _ in range(6):
            p = (q(rng.randrange(0, 11), 10), q(rng.randrange(0, 11), 10))
            assert lhs.eval(p) == rhs.eval(p)
