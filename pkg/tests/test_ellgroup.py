import pytest
from gmpy2 import mpq

from mvcube.ellgroup import (
    CONE_MATRICES,
    cone_apply,
    conjugacy_check_simplex,
    dual_S,
    orbit,
    sigma_eval,
)
from mvcube.rationals import q


def test_vertex_images():
    assert cone_apply((1, 1)) == (2, 1)
    assert cone_apply((1, 2)) == (1, 1)
    assert cone_apply((1, 0)) == (1, 0)
    assert cone_apply((0, 1)) == (0, 1)


def test_sigma_matches_cone_matrices_on_samples():
    pts = [(q(3, 2), q(1, 3)), (q(1, 2), q(3, 4)), (q(1, 5), q(9, 10)),
           (2, 2), (1, 3)]
    for p in pts:
        assert cone_apply(p) == (sigma_eval(1, p), sigma_eval(2, p))


def test_cone_matrices_agree_on_shared_rays():
    a, b, c = CONE_MATRICES
    for m1, m2, ray in ((a, b, (1, 1)), (b, c, (1, 2))):
        img1 = (m1[0][0] * ray[0] + m1[0][1] * ray[1],
                m1[1][0] * ray[0] + m1[1][1] * ray[1])
        img2 = (m2[0][0] * ray[0] + m2[0][1] * ray[1],
                m2[1][0] * ray[0] + m2[1][1] * ray[1])
        assert img1 == img2


def test_sigma_rejects_points_outside_cone():
    with pytest.raises(ValueError):
        sigma_eval(1, (-1, 1))
    with pytest.raises(ValueError):
        sigma_eval(2, (0, 0))


def test_dual_branch_boundary_values():
    assert dual_S(q(1, 2)) == q(1, 3)
    assert dual_S(q(2, 3)) == q(1, 2)
    assert dual_S(0) == 0
    assert dual_S(1) == 1


def test_dual_branch_agreement_at_seams():
    t = q(1, 2)
    assert t / (1 + t) == (1 - t) / (4 - 5 * t)
    t = q(2, 3)
    assert (1 - t) / (4 - 5 * t) == (2 * t - 1) / t


def test_strict_decrease_on_first_branch():
    for t in (q(1, 10), q(1, 3), q(49, 100)):
        assert dual_S(t) < t


def test_conjugacy_check():
    rep = conjugacy_check_simplex(1000)
    assert rep.all_equal
    assert rep.checked == 1001


def test_orbit_fixed_points():
    assert orbit(1, 5) == [1] * 6
    assert orbit(0, 5) == [0] * 6


def test_orbit_from_nine_tenths():
    orb = orbit(q(9, 10), 100)
    # harmonic descent: once below 1/2 the orbit walks 1/m -> 1/(m+1)
    assert orb[:4] == [q(9, 10), q(8, 9), q(7, 8), q(6, 7)]
    assert orb[100] == q(1, 94)
    tail = [t for t in orb if t < q(1, 2)]
    assert all(a > b for a, b in zip(tail, tail[1:]))


def test_orbit_eventually_below_one_percent():
    orb = orbit(q(9, 10), 107)
    assert orb[-1] == q(1, 101)
    assert orb[-1] < q(1, 100)
