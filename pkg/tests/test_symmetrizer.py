import math

import pytest

from stheta.series import VarLabel
from stheta.symmetrizer import (GroupAlgebraElement, apply_functional,
                                functional_product, lcan_expand, lcan_ordered,
                                unit_functional, weighted_apply,
                                young_symmetrizer)
from stheta.weights import (Signature, Weight, is_symmetric,
                            sum_symmetric_weights)

SIG11 = Signature(((1, 1),))
SIG22 = Signature(((2, 2),))

L13, L14 = VarLabel(0, 1, 3), VarLabel(0, 1, 4)
L23, L24 = VarLabel(0, 2, 3), VarLabel(0, 2, 4)
L12 = VarLabel(0, 1, 2)


def test_young_symmetrizer_examples():
    assert young_symmetrizer((1,), 1) == GroupAlgebraElement.identity(1)
    assert young_symmetrizer((2,), 2).coeffs == {(0, 1): 1, (1, 0): 1}
    assert young_symmetrizer((1, 1), 2).coeffs == {(0, 1): 1, (1, 0): -1}


def test_young_symmetrizer_quasi_idempotent():
    for partition in [(2,), (1, 1), (2, 1), (3,), (1, 1, 1), (2, 2)]:
        d = sum(partition)
        c = young_symmetrizer(partition, d)
        scalar = (c * c).is_multiple_of(c)
        assert scalar is not None and scalar != 0
        assert math.factorial(d) % scalar == 0


def test_lcan_depth_one():
    f = lcan_expand(Weight(SIG11, ((1, 1),)))
    assert f.sorted_terms() == [((L12,), 1)]
    assert f.depth == 1


def test_lcan_worked_example_pure_power():
    f = lcan_expand(Weight(SIG22, ((2, 0, 2, 0),)))
    assert f.sorted_terms() == [((L13, L13), 1)]


def test_lcan_worked_example_determinant():
    f = lcan_expand(Weight(SIG22, ((1, 1, 1, 1),)))
    assert f.sorted_terms() == [((L13, L24), 1), ((L14, L23), -1)]


def test_lcan_rejects_non_sum_symmetric():
    with pytest.raises(ValueError):
        lcan_expand(Weight(SIG22, ((1, 0, 0, 0),)))


def test_lcan_ordered_coefficients_are_units():
    for kappa in sum_symmetric_weights(SIG22, 4):
        ordered = lcan_ordered(kappa)
        assert all(c in (-1, 1) for c in ordered.values())


def test_functional_product_depth_one_oracle():
    f = lcan_expand(Weight(SIG11, ((1, 1),)))
    prod = functional_product(f, f)
    oracle = lcan_expand(Weight(SIG11, ((2, 2),)))
    assert prod.terms == oracle.terms
    assert prod.class_orders == oracle.class_orders


def test_functional_product_unit():
    f = lcan_expand(Weight(SIG22, ((1, 1, 1, 1),)))
    one = unit_functional(SIG22)
    assert functional_product(f, one).terms == f.terms
    assert functional_product(one, f).terms == f.terms


def test_functional_product_worked_pair():
    lam = lcan_expand(Weight(SIG22, ((2, 0, 2, 0),)))
    lamp = lcan_expand(Weight(SIG22, ((1, 1, 1, 1),)))
    prod = functional_product(lam, lamp)
    oracle = lcan_expand(Weight(SIG22, ((3, 1, 3, 1),)))
    assert prod.terms == oracle.terms
    assert prod.class_orders == oracle.class_orders


def test_apply_functional_examples():
    f = lcan_expand(Weight(SIG11, ((1, 1),)))
    assert apply_functional(f, {L12: 7}) == 7

    det = lcan_expand(Weight(SIG22, ((1, 1, 1, 1),)))
    alpha = {L13: 2, L14: 3, L23: 5, L24: 7}
    assert apply_functional(det, alpha) == 2 * 7 - 3 * 5

    sq = lcan_expand(Weight(SIG22, ((2, 0, 2, 0),)))
    assert apply_functional(sq, alpha) == 4


def test_weighted_apply_counts_orderings():
    # the depth-4 square of the determinant weight has classes of unequal
    # ordering multiplicities (4, 8, 4); the weighted evaluation restores
    # the full expansion, the square of twice the determinant
    kappa = Weight(SIG22, ((2, 2, 2, 2),))
    f = lcan_expand(kappa)
    assert sorted(f.class_orders.values()) == [4, 4, 8]
    alpha = {L13: 2, L14: 3, L23: 5, L24: 7}
    det = 2 * 7 - 3 * 5
    assert weighted_apply(f, alpha) == (2 * det) ** 2


def test_vanishing_for_sum_symmetric_non_symmetric():
    sig = Signature(((2, 1),))
    f = lcan_expand(Weight(sig, ((1, 1, 2),)))
    assert f.is_zero()


def test_two_place_functional():
    sig = Signature(((1, 1), (1, 1)))
    kappa = Weight(sig, ((1, 1), (2, 2)))
    f = lcan_expand(kappa)
    a, b = VarLabel(0, 1, 2), VarLabel(1, 1, 2)
    assert f.sorted_terms() == [((a, b, b), 1)]
    assert apply_functional(f, {a: 3, b: 5}) == 3 * 25


def test_unit_coefficients_small_sweep():
    for sig in (SIG11, SIG22, Signature(((2, 1),)), Signature(((3, 1),))):
        for kappa in sum_symmetric_weights(sig, 3):
            f = lcan_expand(kappa)
            assert all(c in (-1, 1) for c in f.terms.values())
            if not is_symmetric(kappa):
                assert f.is_zero()


def test_json_shape():
    f = lcan_expand(Weight(SIG22, ((1, 1, 1, 1),)))
    obj = f.to_json()
    assert obj["depth"] == 2
    assert obj["terms"][0]["tuple"] == [[0, 1, 3], [0, 2, 4]]
    assert {t["coeff"] for t in obj["terms"]} == {1, -1}
