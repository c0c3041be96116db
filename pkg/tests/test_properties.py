"""Property tests on random DGAs built by tests/synthetic.py."""

import random

from hypothesis import HealthCheck, given, settings, strategies as st

from augcat.ainfty import check_ainf, dual_degree, dual_oracle_table, mk
from augcat.algebra import GroupElement, Poly
from augcat.audit import oracle_compare
from augcat.augment import TwistedDifferential, brute_force_augs, enumerate_augs, is_aug
from augcat.dga import dga_check, leibniz_extend
from augcat.fileformat import dump_system, parse_system_text
from augcat.morphism import compose_steps, elementary_auto, verify_chain_map
from augcat.system import DGASystem

from synthetic import candidate_words, random_dga

SETTINGS = settings(max_examples=100, deadline=None, suppress_health_check=[HealthCheck.too_slow])
rngs = st.integers(0, 2**32 - 1).map(random.Random)


def _augs(dga):
    return enumerate_augs(dga, respect_link_grading=len(dga.labels) > 1)


@SETTINGS
@given(rngs)
def test_random_dgas_satisfy_the_axioms(rng):
    dga = random_dga(rng)
    assert dga_check(dga).ok
    for q in dga.chords:
        assert not leibniz_extend(dga, dga.d(q))


@SETTINGS
@given(rngs, st.booleans())
def test_search_agrees_with_brute_force(rng, graded):
    dga = random_dga(rng, max_chords=5)
    found = enumerate_augs(dga, respect_link_grading=graded)
    assert found == brute_force_augs(dga, respect_link_grading=graded)
    assert all(is_aug(dga, e) for e in found)


@SETTINGS
@given(rngs)
def test_twisted_operations_satisfy_the_relations(rng):
    dga = random_dga(rng)
    for eps in _augs(dga)[:4]:
        td = TwistedDifferential(dga, eps)
        rep = check_ainf(td, 4)
        assert rep.ok, rep.findings[:3]


@SETTINGS
@given(rngs)
def test_operations_match_the_oracle(rng):
    dga = random_dga(rng)
    for eps in _augs(dga)[:4]:
        td = TwistedDifferential(dga, eps)
        names = sorted(dga.chords)
        extra = [tuple(rng.choice(names) for _ in range(rng.randint(1, 4))) for _ in range(10)]
        extra = [t for t in extra if all(dga.chords[a].r == dga.chords[b].c for a, b in zip(t, t[1:]))]
        _, bad = oracle_compare(td, 4, extra)
        assert bad == []


@SETTINGS
@given(rngs)
def test_operations_have_degree_two_minus_arity(rng):
    dga = random_dga(rng)
    for eps in _augs(dga)[:4]:
        td = TwistedDifferential(dga, eps)
        for t in dual_oracle_table(dga, eps, 4):
            expected = sum(dual_degree(dga, x) for x in t) + 2 - len(t)
            for q in mk(td, t):
                if dga.grading == "Z":
                    assert dual_degree(dga, q) == expected


@SETTINGS
@given(rngs)
def test_elementary_automorphisms_are_invertible_chain_maps(rng):
    dga = random_dga(rng)
    q = rng.choice(sorted(dga.chords))
    cands = candidate_words(dga, q)
    field = dga.field
    units = range(1, field.order)
    u = Poly(field, {w: rng.choice(units) for w in rng.sample(cands, min(2, len(cands)))})
    y = GroupElement.generator(f"t{dga.chords[q].r}", 1) if rng.random() < 0.5 else None
    f = elementary_auto(dga, q, x=rng.choice(units), y=y, u=u)
    assert verify_chain_map(f).ok
    assert verify_chain_map(f.inverse).ok
    there_and_back = compose_steps([f, f.inverse])
    assert all(there_and_back.image(n) == Poly.chord(field, n) for n in dga.chords)
    assert len(_augs(f.target)) == len(_augs(dga))


@SETTINGS
@given(rngs)
def test_one_copy_systems_round_trip_through_the_file_format(rng):
    dga = random_dga(rng)
    if len(dga.labels) > 1:
        return
    s = DGASystem(dga.field, 1, "explicit", explicit={(1,): dga})
    text = dump_system(s)
    again = parse_system_text(text)
    assert again == s
    assert dump_system(again) == text
