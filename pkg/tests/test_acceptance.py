"""Acceptance suite: one recorded pass/fail line per criterion.

Run with ``pytest tests/test_acceptance.py`` (the lines appear in the
terminal summary) or ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import random
import time

import pytest

from augcat.ainfty import check_ainf, dual_degree, mk
from augcat.algebra import get_field
from augcat.audit import ainf_audit, ainf_instances, oracle_audit, oracle_compare
from augcat.augment import TwistedDifferential, brute_force_augs, coerce_field, enumerate_augs, unknowns
from augcat.category import (
    InsufficientCopies,
    PreAugCategory,
    check_family,
    compare_constructions,
    consistent_aug_cat,
    functor_from_family,
    loc_hom,
    unit_identity_findings,
    w_class,
)
from augcat.dga import dga_check
from augcat.fileformat import FormatError, SemanticError, parse_system
from augcat.system import check_system
from conftest import record_criterion
from synthetic import random_dga

SYNTHETIC_DGAS = 120
SYNTHETIC_SEED = 20240601


def _stable(systems):
    """Systems with enough copies for the stopping rule (two consecutive
    isomorphic transitions)."""
    return {n: s for n, s in systems.items() if s.copies >= 4}


def _synthetic():
    rng = random.Random(SYNTHETIC_SEED)
    return [random_dga(rng) for _ in range(SYNTHETIC_DGAS)]


@pytest.fixture(scope="module")
def ainf_results(systems):
    out, t0 = {}, time.perf_counter()
    for name, s in systems.items():
        out[name] = ainf_audit(s, kmax=4)
    return out, time.perf_counter() - t0


@pytest.fixture(scope="module")
def synthetic():
    return _synthetic()


def test_criterion_01_structure(data_dir):
    bad, slowest = [], 0.0
    files = sorted((data_dir / "systems").glob("*.json"))
    for p in files:
        t0 = time.perf_counter()
        rep = check_system(parse_system(p, validate=False))
        dt = time.perf_counter() - t0
        slowest = max(slowest, dt)
        if not rep.ok or dt >= 5:
            bad.append(f"{p.stem} ({dt:.2f} s, {len(rep.findings)} findings)")
    # each exact check must catch its broken fixture
    for stem, kind in (("d_squared", "d_squared"), ("degree", "degree"), ("link_grading", "link_grading"),
                       ("restriction", "restriction"), ("bijection", "bijection")):
        try:
            parse_system(data_dir / "broken" / f"{stem}.json")
            bad.append(f"broken/{stem} accepted")
        except SemanticError as exc:
            if kind not in {f.kind for f in exc.report.findings}:
                bad.append(f"broken/{stem} missed {kind}")
        except FormatError as exc:
            bad.append(f"broken/{stem}: {exc}")
    record_criterion(1, not bad, f"{len(files)} systems checked, slowest {slowest:.2f} s" + (f"; {bad}" if bad else ""))
    assert not bad


def test_criterion_02_ainf_relations(ainf_results):
    results, elapsed = ainf_results
    failing = {n: r.findings[:2] for n, r in results.items() if not r.ok}
    instances = sum(r.tables["instances"] for r in results.values())
    relations = sum(r.tables["relations_checked"] for r in results.values())
    ok = not failing and elapsed < 30
    record_criterion(2, ok, f"{instances} diagonal instances, {relations} relation coefficients, kmax 4, "
                     f"{elapsed:.1f} s" + (f"; {failing}" if failing else ""))
    assert not failing
    assert elapsed < 30


def test_criterion_03_oracle(systems, synthetic):
    failing = {}
    compared = 0
    for name, s in systems.items():
        rep = oracle_audit(s, kmax=4)
        compared += rep.tables["tuples_compared"]
        if not rep.ok:
            failing[name] = rep.findings[:2]
    rng = random.Random(SYNTHETIC_SEED)
    with_augs = synth_tuples = 0
    for i, dga in enumerate(synthetic):
        augs = enumerate_augs(dga, respect_link_grading=True)
        with_augs += bool(augs)
        for eps in augs[:12]:
            td = TwistedDifferential(dga, eps)
            names = sorted(dga.chords)
            extra = [tuple(rng.choice(names) for _ in range(rng.randint(1, 4))) for _ in range(20)]
            extra = [t for t in extra if all(dga.chords[t[j]].r == dga.chords[t[j + 1]].c for j in range(len(t) - 1))]
            n, bad = oracle_compare(td, 4, extra)
            synth_tuples += n + len(extra)
            if bad:
                failing[f"synthetic {i}"] = bad[:2]
    ok = not failing and with_augs >= 100
    record_criterion(3, ok, f"bundled: {compared} tuples; synthetic: {len(synthetic)} DGAs "
                     f"({with_augs} with augmentations), {synth_tuples} tuples" + (f"; {failing}" if failing else ""))
    assert not failing
    assert with_augs >= 100


def test_criterion_04_augmentation_counts(systems):
    trefoil = systems["trefoil-1"].dga((1,))
    unknot = systems["unknot-1"].dga((1,))
    counts = {}
    problems = []
    for label, dga in (("trefoil", trefoil), ("unknot", unknot)):
        n_unknowns = len(unknowns(dga))
        if n_unknowns > 20:
            problems.append(f"{label} has {n_unknowns} unknowns")
        brute = brute_force_augs(dga)
        found = enumerate_augs(dga)
        if set(brute) != set(found) or len(found) != len(set(found)):
            problems.append(f"{label}: search and brute force differ")
        counts[label] = (len(brute), len(found))
    if counts["trefoil"] != (5, 5):
        problems.append(f"trefoil count {counts['trefoil']}")
    if counts["unknot"] != (1, 1):
        problems.append(f"unknot count {counts['unknot']}")
    # every bundled copy-1 DGA, and the trefoil over GF(4)
    for name, s in systems.items():
        dga = s.dga((1,))
        if set(brute_force_augs(dga)) != set(enumerate_augs(dga)):
            problems.append(f"{name}: search and brute force differ")
    f4 = coerce_field(trefoil, get_field(2))
    n4 = (len(brute_force_augs(f4)), len(enumerate_augs(f4)))
    if n4 != (17, 17):
        problems.append(f"trefoil over GF(4): {n4}")
    record_criterion(4, not problems, f"trefoil {counts['trefoil'][0]}, unknot {counts['unknot'][0]} over GF(2); "
                     f"trefoil {n4[0]} over GF(4); search = brute force on {len(systems)} systems"
                     + (f"; {problems}" if problems else ""))
    assert not problems


def test_criterion_05_w_cocycle(systems):
    bad, checked = [], 0
    for name, s in systems.items():
        if s.copies < 2:
            continue
        cat = PreAugCategory(s)
        for a in range(len(cat.objects)):
            for i in range(1, s.copies):
                wc = w_class(cat, a, i)
                checked += 1
                if not wc.is_cocycle:
                    bad.append((name, a, i))
    record_criterion(5, not bad, f"m1(w) = 0 on {checked} (system, augmentation, copy pair) cases"
                     + (f"; {bad}" if bad else ""))
    assert not bad


def test_criterion_06_unit(systems):
    bad, pairs = [], 0
    for name, s in _stable(systems).items():
        cat = PreAugCategory(s)
        for a, b in itertools.product(range(len(cat.objects)), repeat=2):
            loc = loc_hom(cat, a, b)
            pairs += 1
            for msg in unit_identity_findings(cat, a, b, loc):
                bad.append(f"{name}: {msg}")
    record_criterion(6, not bad, f"left and right [w] act as the identity on {pairs} stable hom spaces"
                     + (f"; {bad[:2]}" if bad else ""))
    assert not bad


def _truncation_of(small, systems):
    """A bundled system with more copies whose sized DGAs restrict to those
    of ``small``."""
    for name, big in systems.items():
        if big.mode == "consistent" and big.copies >= 4 and big.field == small.field \
                and all(big.sized[m] == small.sized[m] for m in range(1, small.copies + 1)):
            return name
    return None


def test_criterion_07_stabilisation(systems):
    bad, detail = [], []
    consistent = {n: s for n, s in systems.items() if s.mode == "consistent"}
    for name, s in consistent.items():
        if s.copies < 4:
            if _truncation_of(s, systems) is None:
                bad.append(f"{name}: {s.copies} copies and not a truncation of a larger bundled system")
            try:
                loc_hom(PreAugCategory(s), 0, 0)
                bad.append(f"{name}: stabilisation certified with only {s.copies} copies")
            except InsufficientCopies:
                pass
            continue
        cat = PreAugCategory(s)
        worst = 0
        for a, b in itertools.product(range(len(cat.objects)), repeat=2):
            loc = loc_hom(cat, a, b)
            worst = max(worst, loc.witness)
            if not all(loc.iso.values()):
                bad.append(f"{name}: transition not iso for e{a},e{b}: {loc.iso}")
            if loc.witness > 3:
                bad.append(f"{name}: witness {loc.witness}")
            if loc.findings:
                bad.append(f"{name}: {loc.findings[0]}")
        detail.append(f"{name} witness {worst}")
    record_criterion(7, not bad, "; ".join(detail) + (f"; {bad[:2]}" if bad else ""))
    assert not bad


def test_criterion_08_constructions_agree(systems):
    bad, detail = [], []
    for name, s in systems.items():
        if s.mode != "consistent":
            continue
        if s.copies < 4:
            if _truncation_of(s, systems) is None:
                bad.append(f"{name}: not covered")
            continue
        rep = compare_constructions(s)
        _, crep = consistent_aug_cat(s, kmax=4)
        if not rep.ok:
            bad.append(f"{name}: {rep.findings[0].message}")
        if not crep.ok:
            bad.append(f"{name}: {crep.findings[0].message}")
        detail.append(f"{name} {rep.tables.get('pairs')} pairs/{rep.tables.get('triples_agreeing')} triples")
    record_criterion(8, not bad, "; ".join(detail) + (f"; {bad[:2]}" if bad else ""))
    assert not bad


def test_criterion_09_invariance(families):
    bad, detail = [], []
    for name, (family, src, tgt) in families.items():
        fam = check_family(family, src, tgt)
        rep = functor_from_family(family, src, tgt, kmax=2)
        for f in fam.findings + rep.findings:
            bad.append(f"{name}: [{f.kind}] {f.message}")
        detail.append(f"{name} ({rep.tables.get('quasi_iso_pairs')} quasi-iso pairs, "
                      f"{rep.tables.get('equations_checked')} functor equations)")
    record_criterion(9, not bad, "; ".join(detail) + (f"; {bad[:2]}" if bad else ""))
    assert not bad


def _mk_degree_violations(td: TwistedDifferential) -> tuple[int, list]:
    """Recompute every nonzero m_k through mk() and check its degree."""
    dga = td.dga
    seen, bad = 0, []
    tuples = {w for q in dga.chords for w in td.image(q)}
    for t in tuples:
        want = dga.norm_degree(sum(dual_degree(dga, x) for x in t) + 2 - len(t))
        for out in mk(td, t):
            seen += 1
            if dual_degree(dga, out) != want:
                bad.append((t, out))
    return seen, bad


def test_criterion_10_degree_law(systems, synthetic, ainf_results):
    results, _ = ainf_results
    bad = [f"{n}: {f.message}" for n, r in results.items() for f in r.findings if f.kind == "degree"]
    outputs = 0
    for name, s in systems.items():
        for P, idx, td in ainf_instances(s):
            n, v = _mk_degree_violations(td)
            outputs += n
            bad += [f"{name} {P} {idx}: {t} -> {o}" for t, o in v]
    for i, dga in enumerate(synthetic):
        for eps in enumerate_augs(dga, respect_link_grading=True)[:12]:
            td = TwistedDifferential(dga, eps)
            n, v = _mk_degree_violations(td)
            outputs += n
            bad += [f"synthetic {i}: {t} -> {o}" for t, o in v]
            bad += [f"synthetic {i}: {f.message}" for f in check_ainf(td, 4).findings]
        bad += [f"synthetic {i}: {f.message}" for f in dga_check(dga).findings]
    record_criterion(10, not bad, f"{outputs} nonzero m_k outputs have degree sum + 2 - k"
                     + (f"; {bad[:2]}" if bad else ""))
    assert not bad


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
