import random

import pytest

import helpers
from dsforge.roots import (
    DimVector,
    RootsError,
    Weights,
    classify,
    enumerate_positive_roots_below,
    is_nonstrict_positive_root_shape,
    is_strict,
    p_form,
    pairing,
    q_form,
    reflect,
)


def dv(a0, *arms):
    return DimVector(a0, arms)


def test_weights_vertices_and_neighbours():
    w = Weights((3, 2))
    assert w.vertices() == [0, (1, 1), (1, 2), (2, 1)]
    assert w.neighbours(0) == [(1, 1), (2, 1)]
    assert w.neighbours((1, 1)) == [0, (1, 2)]
    assert w.neighbours((1, 2)) == [(1, 1)]
    with pytest.raises(RootsError):
        w.check_vertex((1, 3))
    with pytest.raises(RootsError):
        Weights((0,))


def test_pairing_and_quadratic_form_d4():
    w = Weights((2, 2, 2))
    a = dv(2, [1], [1], [1])
    assert q_form(w, a) == 1
    assert p_form(w, a) == 0
    assert q_form(w, dv(3, [1], [1], [1])) == 3
    assert pairing(w, a, DimVector.coordinate(w, 0)) == 2 * 2 - 3


def test_pairing_is_symmetric_and_bilinear():
    rng = random.Random(3)
    w = Weights((3, 2, 2))
    for _ in range(50):
        vecs = []
        for _ in range(3):
            vecs.append(
                DimVector(
                    rng.randint(-3, 3),
                    [[rng.randint(-3, 3) for _ in range(wi - 1)] for wi in w.w],
                )
            )
        a, b, c = vecs
        assert pairing(w, a, b) == pairing(w, b, a)
        assert pairing(w, a + b, c) == pairing(w, a, c) + pairing(w, b, c)


def test_reflection_is_an_involution_preserving_q():
    rng = random.Random(5)
    w = Weights((4, 3))
    for _ in range(60):
        a = DimVector(
            rng.randint(-3, 4),
            [[rng.randint(-3, 4) for _ in range(wi - 1)] for wi in w.w],
        )
        for v in w.vertices():
            b = reflect(w, v, a)
            assert reflect(w, v, b) == a
            assert q_form(w, b) == q_form(w, a)


def test_strictness():
    w = Weights((3, 2))
    assert is_strict(w, dv(3, [2, 1], [1]))
    assert is_strict(w, dv(1, [0, 0], [0]))
    assert not is_strict(w, dv(1, [2, 1], [1]))
    assert not is_strict(w, dv(3, [1, 2], [1]))
    assert not is_strict(w, dv(3, [1, -1], [1]))


def test_nonstrict_positive_root_shape():
    w = Weights((4, 3))
    assert is_nonstrict_positive_root_shape(w, dv(0, [1, 1, 0], [0, 0]))
    assert is_nonstrict_positive_root_shape(w, dv(0, [0, 1, 1], [0, 0]))
    assert not is_nonstrict_positive_root_shape(w, dv(1, [1, 0, 0], [0, 0]))
    assert not is_nonstrict_positive_root_shape(w, dv(0, [1, 0, 1], [0, 0]))
    assert not is_nonstrict_positive_root_shape(w, dv(0, [1, 0, 0], [1, 0]))
    assert not is_nonstrict_positive_root_shape(w, dv(0, [2, 1, 0], [0, 0]))


def test_classify_examples():
    w = Weights((2, 2, 2))
    real = classify(w, dv(2, [1], [1], [1]))
    assert real.tag == "RealRoot" and real.sign == "positive" and real.strict
    assert classify(w, dv(3, [1], [1], [1])).tag == "NotRoot"
    single = Weights((3,))
    nonstrict = classify(single, dv(0, [1, 1]))
    assert nonstrict.tag == "RealRoot" and not nonstrict.strict
    assert classify(w, dv(-1, [-1], [0], [0])).sign == "negative"
    assert classify(w, dv(1, [-1], [0], [0])).tag == "NotRoot"
    with pytest.raises(RootsError):
        classify(w, dv(0, [0], [0], [0]))


def test_classify_imaginary_fundamental_region():
    # the isotropic vector of the affine D4 diagram
    w = Weights((2, 2, 2, 2))
    delta = dv(2, [1], [1], [1], [1])
    cls = classify(w, delta)
    assert cls.tag == "ImaginaryRoot"
    assert cls.in_fundamental_region
    assert q_form(w, delta) == 0
    double = classify(w, delta.scale(3))
    assert double.tag == "ImaginaryRoot"


def test_doubled_coordinate_vector_is_not_a_root():
    w = Weights((2, 2, 2))
    assert classify(w, dv(2, [0], [0], [0])).tag == "NotRoot"
    assert classify(w, dv(0, [2], [0], [0])).tag == "NotRoot"


def test_enumerate_d4_positive_roots():
    w = Weights((2, 2, 2))
    found = enumerate_positive_roots_below(w, dv(2, [1], [1], [1]))
    assert len(found) == 12
    keys = {b.sort_key() for b, _ in found}
    assert (1, 0, 0, 0) in keys
    assert (2, 1, 1, 1) in keys
    assert (1, 1, 1, 0) in keys


def test_enumerate_small_arm():
    w = Weights((2,))
    found = enumerate_positive_roots_below(w, dv(1, [1]))
    assert {b.sort_key() for b, _ in found} == {(1, 0), (0, 1), (1, 1)}


@pytest.mark.parametrize("weights", [(2, 2, 2), (3, 3), (2, 4)])
def test_classify_matches_weyl_orbit_oracle_small(weights):
    w = Weights(weights)
    bound = 6
    real = helpers.weyl_real_roots(w, bound)
    imaginary = helpers.weyl_imaginary_roots(w, bound)
    for b in helpers.vectors_of_mass_at_most(w, bound):
        cls = classify(w, b)
        key = b.sort_key()
        assert (cls.tag == "RealRoot") == (key in real)
        assert (cls.tag == "ImaginaryRoot") == (key in imaginary)


def test_json_round_trip():
    a = dv(2, [1, 0], [1])
    assert DimVector.from_json(a.to_json()) == a
