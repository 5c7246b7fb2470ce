import json
import random

import pytest
from gmpy2 import mpq

from mvcube import homeo, measures, pwl, terms
from mvcube.measures import (
    coherence_check,
    faithfulness_check,
    farey,
    farey_points,
    invariance_check,
    lebesgue,
    mix_state,
    mixture,
    pushforward,
    state_eval,
    state_from_json,
    state_to_json,
)
from mvcube.rationals import q


def build(src, n):
    return terms.term_to_pwl(terms.parse_term(src, n), n)


# f = !( !x1 + !x1 ) is max(0, 2x - 1)
F1 = "!( !x1 + !x1 )"


def test_farey_points_denominator_four():
    assert farey_points(1, 4) == [(q(1, 4),), (q(3, 4),)]
    assert len(farey_points(2, 4)) == 16


def test_farey_points_denominator_one():
    assert farey_points(1, 1) == [(q(0),), (q(1),)]
    assert len(farey_points(2, 1)) == 4


def test_farey_points_sorted_lexicographically():
    pts = farey_points(2, 5)
    assert pts == sorted(pts)


def test_lebesgue_state():
    f = build(F1, 1)
    assert state_eval(lebesgue(), f) == q(1, 4)


def test_farey_counting_state():
    f = build(F1, 1)
    # mean of f over {1/4, 3/4}
    assert state_eval(farey(4), f) == q(1, 4)
    c = pwl.cylinder(f, 2)
    assert state_eval(farey(4), c) == q(9, 32)


def test_mix_state_example_values():
    f = build(F1, 1)
    assert state_eval(mix_state(4), f) == q(1, 4)
    assert state_eval(mix_state(4), pwl.cylinder(f, 2)) == q(17, 64)


def test_mixture_weights_must_sum_to_one():
    with pytest.raises(ValueError):
        mixture(((q(1, 2), lebesgue()), (q(1, 3), farey(2))))


def test_mixture_linearity():
    f = build("(x1 & x2)", 2)
    spec = mixture(((q(1, 4), lebesgue()), (q(3, 4), farey(3))))
    expected = q(1, 4) * state_eval(lebesgue(), f) \
        + q(3, 4) * state_eval(farey(3), f)
    assert state_eval(spec, f) == expected


def test_pushforward_lebesgue_invariance():
    f = build("((x1 + x2) . !x1)", 2)
    w = homeo.random_word(2, 2, 4)
    assert state_eval(pushforward(lebesgue(), w), f) == state_eval(lebesgue(), f)


def test_pushforward_functoriality():
    f = build("(x1 | !x2)", 2)
    s1 = homeo.gen_R(0)
    s2 = homeo.gen_symmetry(2, (2, 1))
    nested = pushforward(pushforward(lebesgue(), s1), s2)
    direct = pwl.compose(pwl.compose(f, homeo.as_map(s1)), homeo.as_map(s2))
    assert state_eval(nested, f) == pwl.integrate(direct)


def test_invariance_check_lebesgue_and_farey():
    rng = random.Random(10)
    w = homeo.random_word(2, 4, 4)
    fs = [terms.term_to_pwl(terms.random_term(2, 4, rng), 2)
          for _ in range(5)]
    for spec in (lebesgue(), farey(3), mix_state(4)):
        assert invariance_check(spec, w, fs).all_equal


def test_coherence_of_mix_state_fails():
    rep = coherence_check(4, build(F1, 1))
    assert rep.value_n == q(1, 4)
    assert rep.value_n_plus_1 == q(17, 64)
    assert not rep.coherent


def test_coherence_of_lebesgue_holds():
    rep = coherence_check(4, build(F1, 1), use_lebesgue=True)
    assert rep.coherent


def test_coherence_denominator_one():
    f = build("x1", 1)
    rep = coherence_check(1, f)
    # nu_1 mean over {0,1} is 1/2 in both dimensions; Lebesgue gives 1/2 too
    assert rep.value_n == rep.value_n_plus_1 == q(1, 2)
    assert rep.coherent


def test_faithfulness():
    fs = [build("((x1 - x2) + (x2 - x1))", 2), build("(x1 . 0)", 2)]
    rep = faithfulness_check(lebesgue(), fs)
    assert rep.passed
    assert rep.values[0] == (False, q(1, 3))
    assert rep.values[1][0] is True and rep.values[1][1] == 0


def test_faithfulness_of_mix_on_nonzero():
    f = build("(x1 & x2)", 2)
    rep = faithfulness_check(mix_state(4), [f])
    assert rep.passed and rep.values[0][1] > 0


def test_state_json_round_trip():
    w = homeo.random_word(2, 6, 3)
    spec = pushforward(mix_state(2), w)
    doc = json.loads(json.dumps(state_to_json(spec)))
    spec2 = state_from_json(doc)
    f = build("(x1 + x2)", 2)
    assert state_eval(spec, f) == state_eval(spec2, f)


def test_dimension_mismatch_raises():
    f = build("x1", 1)
    with pytest.raises(Exception):
        state_eval(pushforward(lebesgue(), homeo.gen_R(0)), f)
