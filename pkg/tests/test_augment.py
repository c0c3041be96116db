import itertools

import pytest

from augcat.algebra import Poly, get_field
from augcat.augment import (
    Augmentation,
    AugmentationError,
    brute_force_augs,
    coerce_field,
    diagonal_aug,
    enumerate_augs,
    evaluate,
    is_aug,
    twist,
    unknowns,
)
from augcat.examples import trefoil_base, trefoil_system, unknot_base

F2, F4 = get_field(1), get_field(2)


def _trefoil_count(field):
    """Solutions of the trefoil equations counted directly.  With t = eps(K)
    the two differentials vanish iff t + a1 + a3 + a1 a2 a3 = 0 and
    1 + a1 + a3 + a3 a2 a1 = 0."""
    mul = field.mul
    n = 0
    for t in field.units():
        for a1, a2, a3 in itertools.product(field.elements(), repeat=3):
            p = mul(mul(a1, a2), a3)
            if t ^ a1 ^ a3 ^ p == 0 and 1 ^ a1 ^ a3 ^ p == 0:
                n += 1
    return n


def test_unknot_has_one_augmentation():
    augs = enumerate_augs(unknot_base())
    assert len(augs) == 1
    assert augs[0].group_gen("K", 1) == 1
    assert augs[0].chord("a") == 0


@pytest.mark.parametrize("field,count", [(F2, 5), (F4, 17)])
def test_trefoil_counts(field, count):
    dga = coerce_field(trefoil_base(), field)
    assert _trefoil_count(field) == count
    found = enumerate_augs(dga)
    assert len(found) == count
    assert set(found) == set(brute_force_augs(dga))
    assert all(is_aug(dga, e) for e in found)


def test_unknowns_are_degree_zero_chords_and_group_letters():
    dga = coerce_field(trefoil_base(), F4)
    names = [u for kind, u in unknowns(dga) if kind == "chord"]
    assert names == ["a1", "a2", "a3"]
    assert unknowns(dga)[3:] == [("group", ("K", 1))]


def test_evaluate_and_violations():
    dga = trefoil_base()
    eps = Augmentation(F2, {"a1": 1})
    assert evaluate(dga.d("b1"), eps) == 0
    bad = Augmentation(F2, {"a1": 1, "a3": 1})
    assert not is_aug(dga, bad)
    with pytest.raises(AugmentationError):
        twist(dga, bad)


def test_twist_removes_constants():
    dga = trefoil_base()
    for eps in enumerate_augs(dga):
        td = twist(dga, eps)
        assert all(() not in img for img in td.images().values())
        assert td.square_violations() == []


def test_twist_by_hand():
    # eps(a1) = 1: d b1 = K + a1 + a3 + a1 a2 a3 becomes a1 + a3 + a2 a3 + a1 a2 a3
    dga = trefoil_base()
    td = twist(dga, Augmentation(F2, {"a1": 1}))
    assert td.image("b1") == {("a1",): 1, ("a3",): 1, ("a2", "a3"): 1, ("a1", "a2", "a3"): 1}


def test_diagonal_augmentation_zero_on_mixed_chords():
    s = trefoil_system(2)
    e = enumerate_augs(s.dga((1,)))
    eps = diagonal_aug(s, (1, 2), [s.transport_aug(e[1], 1, 1), s.transport_aug(e[2], 1, 2)])
    assert all(s.dga((1, 2)).chords[n].c == s.dga((1, 2)).chords[n].r for n in eps.chord_values)
    assert is_aug(s.dga((1, 2)), eps)


def test_coerce_field_changes_coefficients_only():
    dga = coerce_field(unknot_base(), F4)
    assert dga.field == F4
    assert set(dga.chords) == {"a"}
    assert dga.d("a") == Poly(F4, {w: 1 for w, _ in unknot_base().d("a")})
