import itertools

import pytest

from augcat.category import (
    CategoryError,
    ConsistentCategory,
    InsufficientCopies,
    LocalizedCategory,
    PreAugCategory,
    TrivialComplex,
    UNIT,
    check_family,
    compare_constructions,
    consistent_aug_cat,
    functor_from_family,
    h0_category,
    loc_compose,
    loc_hom,
    preaug_compose,
    preaug_hom,
    unit_identity_findings,
    w_class,
)
from augcat.fileformat import parse_family, parse_system


@pytest.fixture(scope="module")
def unknot(systems):
    return PreAugCategory(systems["unknot"])


@pytest.fixture(scope="module")
def trefoil(systems):
    return PreAugCategory(systems["trefoil"])


def test_objects_are_copy_one_augmentations(trefoil):
    assert len(trefoil.objects) == 5
    assert len(trefoil.augs(3)) == 5
    # transported augmentations live on the copy's own chords
    assert all(n.endswith("[3,3]") for e in trefoil.augs(3) for n in e.chord_values)


def test_preaug_homs_only_point_up(unknot):
    e = unknot.obj(1, 0)
    with pytest.raises(CategoryError):
        preaug_hom(unknot, (2, unknot.obj(2, 0)), (1, e))
    same = preaug_hom(unknot, (1, e), (1, e))
    assert isinstance(same, TrivialComplex)
    assert same.names == [UNIT]
    assert same.homology().dims == {0: 1}
    up = preaug_hom(unknot, (1, e), (2, unknot.obj(2, 0)))
    assert up.homology().dims == {0: 1}


def test_preaug_composition_with_formal_unit(unknot):
    e1, e2 = unknot.obj(1, 0), unknot.obj(2, 0)
    x = {"y[1,2]": 1}
    assert preaug_compose(unknot, [(1, e1), (1, e1), (2, e2)], [{UNIT: 1}, x]) == x
    assert preaug_compose(unknot, [(1, e1), (2, e2), (2, e2)], [x, {UNIT: 1}]) == x


def test_w_is_a_nonzero_cocycle(trefoil):
    for a in range(5):
        for i in (1, 2, 3):
            wc = w_class(trefoil, a, i)
            assert wc.is_cocycle
            assert wc.nonzero
            assert wc.cochain == {f"y[{i},{i + 1}]": 1}


def test_loc_hom_stabilises_at_two(trefoil):
    loc = loc_hom(trefoil, 0, 0)
    assert loc.witness == 2
    assert loc.iso == {2: True, 3: True}
    assert loc.dims == {0: 1, 1: 2}
    assert unit_identity_findings(trefoil, 0, 0, loc) == []
    assert loc_hom(trefoil, 0, 1).dims.get(0, 0) == 0


def test_insufficient_copies(systems):
    cat = PreAugCategory(systems["truncated"])
    with pytest.raises(InsufficientCopies, match="insufficient copies"):
        loc_hom(cat, 0, 0)
    with pytest.raises(InsufficientCopies):
        loc_hom(PreAugCategory(systems["trefoil-3"]), 0, 0)


def test_localised_unit_acts_as_identity(trefoil):
    lc = LocalizedCategory(trefoil)
    for a, b in itertools.product(range(5), repeat=2):
        t = lc.table(a, b)
        for k in range(t.dim()):
            x = [int(i == k) for i in range(t.dim())]
            assert lc.compose(a, a, b, lc.unit(a), x) == x
            assert lc.compose(a, b, b, x, lc.unit(b)) == x
    assert loc_compose(trefoil, 0, 0, 0, lc.unit(0), lc.unit(0)) == lc.unit(0)


def test_h0_category(trefoil):
    rep = h0_category(trefoil)
    assert rep.ok
    dims = rep.tables["h0_dims"]
    assert all(dims[f"e{a},e{b}"] == int(a == b) for a in range(5) for b in range(5))
    assert rep.tables["unit_checks"] == {"formal_identity": "pass", "w_class": "pass"}


def test_consistent_category_matches_localisation(systems):
    s = systems["trefoil"]
    rep = compare_constructions(s)
    assert rep.ok, rep.findings[:2]
    assert rep.tables["triples_agreeing"] == 125
    cc, crep = consistent_aug_cat(s, kmax=4)
    assert crep.ok
    assert crep.tables["kmax_checked"] == 3
    assert cc.max_arity == 3


def test_consistent_category_needs_consistent_mode(systems):
    with pytest.raises(CategoryError):
        ConsistentCategory(systems["unknot-perturbed"])


def test_compare_reports_a_broken_unit(data_dir):
    rep = compare_constructions(parse_system(data_dir / "broken" / "partial_minima.json"))
    assert [f.kind for f in rep.findings] == ["minima"]


def test_families_pass(families):
    for name, (family, src, tgt) in families.items():
        assert check_family(family, src, tgt).ok, name
    family, src, tgt = families["unknot-stabilisation"]
    rep = functor_from_family(family, src, tgt, kmax=2)
    assert rep.ok
    assert rep.tables["objects"] == 1


def test_non_chain_map_family_fails(data_dir, systems):
    s = systems["trefoil"]
    family = parse_family(data_dir / "broken" / "family_square.json", s, s)
    rep = check_family(family, s, s)
    kinds = {f.kind for f in rep.findings}
    assert "chain_map" in kinds and "square" in kinds
    assert not functor_from_family(family, s, s).ok
