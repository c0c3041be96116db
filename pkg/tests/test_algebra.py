import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from augcat.algebra import (
    AlgebraError,
    Field,
    FreeProductSpec,
    GroupElement,
    Poly,
    chord_word,
    get_field,
    is_irreducible,
    unit_word,
    word_mul,
)

FIELDS = [get_field(d) for d in (1, 2, 3, 4)]


def test_gf4_multiplication_table():
    f = get_field(2)  # x^2 + x + 1
    assert f.mul(0b10, 0b10) == 0b11
    assert f.mul(0b10, 0b11) == 0b01
    assert f.inv(0b10) == 0b11
    assert f.format(0b10) == "10"
    assert f.parse("01") == 1
    assert f.modulus_bits() == "111"


def test_gf2_is_the_default():
    f = get_field()
    assert f.order == 2 and f.mul(1, 1) == 1


def test_reducible_and_wrong_degree_moduli_rejected():
    with pytest.raises(AlgebraError, match="reducible"):
        Field(2, 0b101)
    with pytest.raises(AlgebraError, match="degree"):
        Field(3, 0b111)
    with pytest.raises(AlgebraError):
        Field(0)


def test_irreducibility_matches_root_count_for_small_degrees():
    # degrees 2 and 3: irreducible iff no root in GF(2)
    for m in range(0b100, 0b10000):
        roots = [x for x in (0, 1) if sum(((m >> k) & 1) * (x ** k) for k in range(m.bit_length())) % 2 == 0]
        assert is_irreducible(m) == (not roots)


def test_parse_rejects_garbage():
    f = get_field(2)
    for bad in ("", "2", "1x", "111"):
        with pytest.raises(AlgebraError):
            f.parse(bad)


field_and_elements = st.sampled_from(FIELDS).flatmap(
    lambda f: st.tuples(st.just(f), *[st.integers(0, f.order - 1)] * 3))


@given(field_and_elements)
def test_field_axioms(data):
    f, a, b, c = data
    assert f.mul(a, b) == f.mul(b, a)
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    assert f.mul(a, b ^ c) == f.mul(a, b) ^ f.mul(a, c)
    assert f.mul(a, 1) == a
    if a:
        assert f.mul(a, f.inv(a)) == 1
        assert f.pow(a, f.order - 1) == 1


letters = st.lists(st.tuples(st.sampled_from(["K", "L"]), st.sampled_from([1, 2, -1, -2])), max_size=8)


@given(letters, letters, letters)
def test_free_product_group_laws(u, v, w):
    g, h, k = (GroupElement.from_letters(x) for x in (u, v, w))
    assert g.is_reduced()
    assert (g * h) * k == g * (h * k)
    assert (g * g.inverse()).is_identity()
    assert (g.inverse() * g).is_identity()
    assert GroupElement.from_letters(g.letters()) == g


def test_group_normal_form_merges_syllables():
    g = GroupElement.from_letters([("K", 1), ("L", 2), ("L", -2), ("K", 1)])
    assert g.syllables == (("K", (1, 1)),)
    spec = FreeProductSpec((("K", 1),))
    with pytest.raises(AlgebraError):
        spec.validate(GroupElement.generator("K", 2))


def _poly(f, terms):
    return Poly(f, {chord_word(*w): c for w, c in terms})


polys = st.sampled_from(FIELDS[:2]).flatmap(lambda f: st.lists(
    st.lists(st.tuples(st.lists(st.sampled_from("abc"), max_size=3).map(tuple), st.integers(1, f.order - 1)),
             max_size=4).map(lambda t, f=f: _poly(f, t)), min_size=3, max_size=3))


@given(polys)
@settings(max_examples=60)
def test_poly_ring_laws(ps):
    p, q, r = ps
    f = p.field
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert (p + q) * r == p * r + q * r
    assert p + p == Poly(f)
    assert p * Poly.one(f) == p == Poly.one(f) * p


def test_group_coefficients_cancel_in_products():
    f = get_field()
    t = GroupElement.generator("K", 1)
    assert Poly.group(f, t) * Poly.group(f, t.inverse()) == Poly.one(f)
    w = word_mul(chord_word("a"), (t,) + chord_word("b")[1:])
    assert w == (GroupElement(), "a", t, "b", GroupElement())
    assert word_mul(unit_word(), w) == w


def test_poly_characteristic_two_and_mixed_fields():
    f2, f4 = get_field(1), get_field(2)
    a = Poly.chord(f4, "a").scale(0b10)
    assert (a + a) == Poly(f4)
    assert a.coeff(chord_word("a")) == 0b10
    with pytest.raises(AlgebraError):
        Poly.chord(f2, "a") + Poly.chord(f4, "a")
