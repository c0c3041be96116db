import pytest

from augcat.examples import trefoil_system, unknot_base, unknot_system
from augcat.system import DGASystem, SystemError_, check_system, parse_subset, relabel_name, subset_key


def test_subset_helpers():
    assert parse_subset("3,1") == (1, 3)
    assert subset_key((1, 3)) == "1,3"
    assert relabel_name("a[1,2]", {1: 2, 2: 4}) == "a[2,4]"
    with pytest.raises(SystemError_):
        parse_subset("1,1")


def test_consistent_members_are_relabelings():
    s = trefoil_system(3)
    assert len(s.subsets()) == 7 and len(s.subsets(1)) == 3
    assert sorted(s.dga((2,)).chords) == sorted(n.replace("[1,1]", "[2,2]") for n in s.dga((1,)).chords)
    assert s.inclusion((1,), (1, 3)) == {n: n for n in s.dga((1,)).chords} | {"K[1]": "K[1]"}
    with pytest.raises(SystemError_):
        s.inclusion((1, 2), (1,))
    with pytest.raises(SystemError_):
        s.dga((4,))
    assert check_system(s).ok


def test_explicit_inclusions_compose_along_chains(systems):
    s = systems["unknot-perturbed"]
    assert s.mode == "explicit"
    assert check_system(s).ok
    direct = s.inclusion((2,), (1, 2, 3))
    assert direct == {"a[2,2]": "a[2,2]", "K[2]": "K[2]"}


def test_check_system_flags_a_bad_restriction():
    t, u = trefoil_system(2), unknot_system(2)
    bad = DGASystem(t.field, 2, "explicit", explicit={(1,): t.dga((1,)), (2,): t.dga((2,)), (1, 2): u.dga((1, 2))})
    assert "restriction" in {f.kind for f in check_system(bad).findings}


def test_members_must_carry_their_subset_as_labels():
    base = unknot_base()
    with pytest.raises(SystemError_, match="labels"):
        DGASystem(base.field, 2, "explicit", explicit={(1,): base, (2,): base, (1, 2): base})


def test_invalid_construction():
    with pytest.raises(SystemError_):
        DGASystem(unknot_base().field, 0, "consistent", sized={})
    with pytest.raises(SystemError_):
        DGASystem(unknot_base().field, 1, "lazy", sized={})
