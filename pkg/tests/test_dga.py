import pytest

from augcat.algebra import FreeProductSpec, GroupElement, Poly, chord_word, get_field
from augcat.dga import ChordGen, DGAError, SemiFreeDGA, dga_check, leibniz_extend, quotient_partition, subalgebra
from augcat.examples import trefoil_base, unknot_base
from augcat.ncopy import NCopyError, n_copy, n_copy_system
from augcat.system import check_system

F2 = get_field()
NOGROUP = FreeProductSpec(())


def _dga(chords, diff, labels=(1,)):
    return SemiFreeDGA(F2, labels, NOGROUP, {}, [ChordGen(*c) for c in chords],
                       {n: Poly(F2, {chord_word(*w): 1 for w in ws}) for n, ws in diff.items()})


def _kinds(rep):
    return {f.kind for f in rep.findings}


def test_bundled_bases_pass():
    assert dga_check(unknot_base()).ok
    assert dga_check(trefoil_base()).ok


def test_d_squared_violation_detected():
    dga = _dga([("p", 2, 1, 1), ("q", 1, 1, 1), ("s", 0, 1, 1)], {"p": [("q",)], "q": [("s",)]})
    assert _kinds(dga_check(dga)) == {"d_squared"}


def test_degree_violation_detected():
    dga = _dga([("p", 1, 1, 1), ("q", 1, 1, 1)], {"p": [("q",)]})
    assert _kinds(dga_check(dga)) == {"degree"}


def test_link_grading_violation_detected():
    dga = _dga([("p", 1, 1, 2), ("q", 0, 2, 1)], {"p": [("q",)]}, labels=(1, 2))
    assert "link_grading" in _kinds(dga_check(dga))


def test_z2_grading_reduces_degrees():
    dga = SemiFreeDGA(F2, (1,), NOGROUP, {}, [ChordGen("p", 1, 1, 1), ChordGen("q", 2, 1, 1)],
                      {"p": Poly.chord(F2, "q")}, grading="Z/2")
    assert dga_check(dga).ok


def test_undeclared_generator_rejected():
    with pytest.raises(DGAError, match="undeclared"):
        _dga([("p", 1, 1, 1)], {"p": [("q",)]})
    with pytest.raises(DGAError, match="duplicate"):
        _dga([("p", 1, 1, 1), ("p", 0, 1, 1)], {})


def test_leibniz_rule():
    dga = trefoil_base()
    b1, b2 = Poly.chord(F2, "b1"), Poly.chord(F2, "b2")
    lhs = leibniz_extend(dga, b1 * b2)
    assert lhs == dga.d("b1") * b2 + b1 * dga.d("b2")
    # group elements are cycles
    t = Poly.group(F2, GroupElement.generator("K", 1))
    assert leibniz_extend(dga, t * b1) == t * dga.d("b1")


def test_two_copy_unknot_by_hand():
    # each copy is the base unknot; x and y are the Morse maxima and minima
    d = n_copy(unknot_base(), 2)
    assert sorted(d.chords) == ["a[1,1]", "a[1,2]", "a[2,1]", "a[2,2]", "x[1,2]", "y[1,2]"]
    assert (d.chords["x[1,2]"].degree, d.chords["y[1,2]"].degree) == (0, -1)
    assert repr(d.d("x[1,2]")) == "y[1,2] + K[1](-1) y[1,2] K[2](1)"
    assert repr(d.d("a[1,2]")) == "K[1](1) x[1,2] + a[1,1] y[1,2] + y[1,2] a[2,2]"
    assert dga_check(d).ok


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_n_copies_satisfy_the_axioms(m):
    assert dga_check(n_copy(trefoil_base(), m)).ok


def test_n_copy_restricts_to_copies():
    big = n_copy(unknot_base(), 3)
    small = subalgebra(big, {1, 2})
    assert small == n_copy(unknot_base(), 2)
    single = subalgebra(big, {2})
    assert sorted(single.chords) == ["a[2,2]"]


def test_quotient_partition_kills_mixed_chords():
    big = n_copy(unknot_base(), 2)
    q = quotient_partition(big, [{1}, {2}])
    assert sorted(q.chords) == ["a[1,1]", "a[2,2]"]
    assert repr(q.d("a[1,1]")) == "1 + K[1](1)"
    with pytest.raises(DGAError):
        quotient_partition(big, [{1}])


def test_n_copy_needs_single_label_base():
    with pytest.raises(NCopyError):
        n_copy(n_copy(unknot_base(), 2), 2)


def test_n_copy_system_is_consistent():
    s = n_copy_system(trefoil_base(), 3, name="trefoil")
    assert check_system(s).ok
    assert s.minima_names(1) == ["y[1,2]"]
    assert s.minima_names(2) == ["y[2,3]"]
    assert sorted(s.dga((1, 3)).chords) == sorted(
        n.replace("2]", "3]").replace("[2,", "[3,") for n in s.dga((1, 2)).chords)
