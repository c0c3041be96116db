import pytest

from augcat.ainfty import (
    AinfError,
    HomComplex,
    check_ainf,
    dual_degree,
    dual_oracle_mk,
    dual_oracle_table,
    mk,
    mk_multilinear,
    mk_raw,
)
from augcat.algebra import FreeProductSpec, Poly, chord_word, get_field
from augcat.augment import Augmentation, TwistedDifferential, diagonal_aug, enumerate_augs
from augcat.dga import ChordGen, SemiFreeDGA
from augcat.examples import trefoil_system, unknot_system

F2 = get_field()


@pytest.fixture(scope="module")
def unknot2():
    s = unknot_system(2)
    dga = s.dga((1, 2))
    eps = enumerate_augs(dga)[0]
    return TwistedDifferential(dga, eps)


def test_dual_degrees_shift_by_one(unknot2):
    dga = unknot2.dga
    assert dual_degree(dga, "y[1,2]") == 0
    assert dual_degree(dga, "x[1,2]") == 1
    assert dual_degree(dga, "a[1,2]") == 2


def test_two_copy_unknot_operations_by_hand(unknot2):
    # d_eps a[1,2] = x[1,2] + a[1,1] y[1,2] + y[1,2] a[2,2] and d_eps x[1,2] = 0
    assert mk(unknot2, ["x[1,2]"]) == {"a[1,2]": 1}
    assert mk(unknot2, ["y[1,2]"]) == {}
    assert mk(unknot2, ["a[1,1]", "y[1,2]"]) == {"a[1,2]": 1}
    assert mk(unknot2, ["y[1,2]", "a[2,2]"]) == {"a[1,2]": 1}
    # not composable
    assert mk(unknot2, ["y[1,2]", "a[1,1]"]) == {}
    with pytest.raises(AinfError):
        mk(unknot2, [])


def test_two_copy_unknot_hom_is_one_class_in_degree_zero(unknot2):
    hc = HomComplex(unknot2, 1, 2)
    assert hc.names == ["y[1,2]", "x[1,2]", "a[1,2]"]
    h = hc.homology()
    assert h.dims == {0: 1}
    assert h.coords({"y[1,2]": 1}) == [1]
    assert h.is_zero_class({}) and not h.is_zero_class({"y[1,2]": 1})
    assert hc.check_d_squared() == []


def test_multilinear_extension(unknot2):
    v = mk_multilinear(unknot2, [{"a[1,1]": 1}, {"y[1,2]": 1, "x[1,2]": 1}])
    assert v == {"a[1,2]": 1}


def test_orientation_forward_reads_words_left_to_right():
    # chords b in R^{12}, c in R^{23}, a in R^{13}; d a = b c
    chords = [ChordGen("a", 1, 1, 3), ChordGen("b", 0, 1, 2), ChordGen("c", 0, 2, 3)]
    dga = SemiFreeDGA(F2, [1, 2, 3], FreeProductSpec(()), {}, chords, {"a": Poly(F2, {chord_word("b", "c"): 1})})
    td = TwistedDifferential(dga, Augmentation(F2))
    assert mk(td, ["b", "c"]) == {"a": 1}
    assert mk(td, ["c", "b"]) == {}
    assert mk_raw(td, ["c", "b"], "reversed") == {"a": 1}


def test_oracle_counts_subsequence_embeddings():
    # d a = b e b with eps(e) = 1 and eps(b) = 0, so m_2(b, b) = a
    chords = [ChordGen("a", 1, 1, 1), ChordGen("b", 0, 1, 1), ChordGen("e", 0, 1, 1)]
    dga = SemiFreeDGA(F2, [1], FreeProductSpec(()), {}, chords, {})
    dga = dga.replace(differential={"a": Poly(F2, {chord_word("b", "e", "b"): 1})})
    eps = Augmentation(F2, {"e": 1})
    td = TwistedDifferential(dga, eps)
    assert dual_oracle_mk(dga, eps, ["b", "b"]) == {"a": 1} == mk(td, ["b", "b"])
    assert dual_oracle_mk(dga, eps, ["b", "e", "b"]) == {"a": 1}
    assert dual_oracle_mk(dga, eps, ["b"]) == {}
    table = dual_oracle_table(dga, eps, 3)
    assert table == {("b", "b"): {"a": 1}, ("b", "e", "b"): {"a": 1}}


def test_trefoil_three_copies_relations_hold():
    s = trefoil_system(3)
    augs = enumerate_augs(s.dga((1,)))
    P = (1, 2, 3)
    parts = [s.transport_aug(augs[k], 1, i) for k, i in zip((0, 3, 4), P)]
    td = TwistedDifferential(s.dga(P), diagonal_aug(s, P, parts))
    rep = check_ainf(td, 4)
    assert rep.ok, rep.findings[:3]
    assert rep.tables["relations_checked"] > 0
    assert rep.tables["max_arity"] == 3


def test_check_ainf_flags_a_broken_twist():
    # a twisted differential with d^2 != 0 breaks the first relations
    chords = [ChordGen("p", 2, 1, 1), ChordGen("q", 1, 1, 1), ChordGen("s", 0, 1, 1)]
    dga = SemiFreeDGA(F2, [1], FreeProductSpec(()), {}, chords,
                      {"p": Poly.chord(F2, "q"), "q": Poly.chord(F2, "s")})
    rep = check_ainf(TwistedDifferential(dga, Augmentation(F2)), 2)
    assert {f.kind for f in rep.findings} == {"relation"}
    with pytest.raises(AinfError):
        check_ainf(TwistedDifferential(dga, Augmentation(F2)), 0)


def test_memo_gives_identical_reports():
    s = trefoil_system(2)
    augs = enumerate_augs(s.dga((1,)))
    memo = {}
    for a in range(len(augs)):
        for b in range(len(augs)):
            parts = [s.transport_aug(augs[a], 1, 1), s.transport_aug(augs[b], 1, 2)]
            td = TwistedDifferential(s.dga((1, 2)), diagonal_aug(s, (1, 2), parts))
            fresh = check_ainf(td, 4)
            cached = check_ainf(td, 4, memo)
            assert fresh.to_dict() == cached.to_dict()
