import pytest

from augcat.algebra import GroupElement, Poly, chord_word, get_field
from augcat.augment import coerce_field, enumerate_augs
from augcat.dga import dga_check
from augcat.examples import trefoil_base, unknot_base
from augcat.morphism import (
    DGAMorphism,
    MorphismError,
    compose_steps,
    destabilise,
    elementary_auto,
    stabilise,
    verify_chain_map,
)

F2, F4 = get_field(1), get_field(2)


def _p(field, *words):
    return Poly(field, {chord_word(*w): 1 for w in words})


def test_elementary_automorphism_conjugates_the_differential():
    dga = trefoil_base()
    f = elementary_auto(dga, "a1", u=Poly.one(F2))
    assert f.image("a1") == _p(F2, ("a1",), ())
    assert dga_check(f.target).ok
    assert verify_chain_map(f).ok
    assert verify_chain_map(f.inverse).ok
    back = f.then(f.inverse)
    assert all(back.image(n) == Poly.chord(F2, n) for n in dga.chords)


def test_elementary_automorphism_with_units_and_group_factor():
    dga = coerce_field(trefoil_base(), F4)
    t = GroupElement.generator("K", 1)
    f = elementary_auto(dga, "b1", x=0b10, y=t, u=_p(F4, ("a1", "b2")))
    assert verify_chain_map(f).ok
    assert len(enumerate_augs(f.target)) == len(enumerate_augs(dga))


def test_elementary_automorphism_rejects_bad_data():
    dga = trefoil_base()
    with pytest.raises(MorphismError, match="involves"):
        elementary_auto(dga, "a1", u=_p(F2, ("a1", "a2")))
    with pytest.raises(MorphismError, match="degree"):
        elementary_auto(dga, "a1", u=_p(F2, ("b1",)))
    with pytest.raises(MorphismError, match="not invertible"):
        elementary_auto(dga, "a1", x=0)
    with pytest.raises(MorphismError, match="unknown"):
        elementary_auto(dga, "zz")


def test_elementary_automorphism_against_a_wrong_target():
    dga = trefoil_base()
    with pytest.raises(MorphismError, match="chain map"):
        elementary_auto(dga, "a1", u=Poly.one(F2), target=dga)


def test_stabilise_then_destabilise_is_the_identity():
    dga = unknot_base()
    big, inc = stabilise(dga, 1, 1, 1)
    assert sorted(big.chords) == ["a", "e1", "e2"]
    assert big.d("e1") == Poly.chord(F2, "e2")
    assert dga_check(big).ok
    small, proj = destabilise(big, "e1", "e2")
    assert small == dga
    comp = compose_steps([inc, proj])
    assert all(comp.image(n) == Poly.chord(F2, n) for n in dga.chords)


def test_stabilisation_in_degree_one_keeps_augmentation_count():
    dga = trefoil_base()
    big, _ = stabilise(dga, 1, 1, 1)
    assert len(enumerate_augs(big)) == len(enumerate_augs(dga)) == 5


def test_destabilise_needs_a_clean_pair():
    dga = trefoil_base()
    big, _ = stabilise(dga, 1, 1, 1)
    with pytest.raises(MorphismError):
        destabilise(big, "e2", "e1")
    # a1 -> a1 + e2 puts e2 into d b1
    f = elementary_auto(big, "a1", u=_p(F2, ("e2",)))
    with pytest.raises(MorphismError, match="involves"):
        destabilise(f.target, "e1", "e2")
    with pytest.raises(MorphismError):
        stabilise(dga, 1, 1, 1, names=("a1", "e9"))


def test_morphism_validation():
    dga = unknot_base()
    with pytest.raises(MorphismError, match="not a source generator"):
        DGAMorphism(dga, dga, {"zz": Poly.one(F2)})
    other = trefoil_base()
    with pytest.raises(MorphismError, match="no image"):
        DGAMorphism(dga, other)
    with pytest.raises(MorphismError):
        compose_steps([])


def test_chain_map_failure_reported():
    dga = trefoil_base()
    f = DGAMorphism(dga, dga, {"a1": _p(F2, ("a2",))})
    rep = verify_chain_map(f)
    assert not rep.ok
    assert {x.kind for x in rep.findings} == {"chain_map"}
