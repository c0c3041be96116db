"""Bundled example systems, morphism families and broken fixtures.

``write_bundle(directory)`` regenerates every file under ``data/``; the
tests check that the committed files match this builder byte for byte.
"""

from __future__ import annotations

import itertools
import sys
from pathlib import Path

from .algebra import FreeProductSpec, GroupElement, Poly, chord_word, get_field, unit_word
from .dga import ChordGen, SemiFreeDGA, leibniz_extend
from .fileformat import dump_json, system_to_doc
from .morphism import elementary_auto
from .ncopy import n_copy, n_copy_system
from .system import DGASystem

__all__ = [
    "unknot_base",
    "trefoil_base",
    "stabilised_unknot_base",
    "two_point_unknot_base",
    "unknot_system",
    "trefoil_system",
    "trefoil_alt_system",
    "stabilised_unknot_system",
    "two_point_unknot_system",
    "perturbed_unknot_system",
    "elementary_family_doc",
    "stabilisation_family_doc",
    "perturb_family_doc",
    "bundle",
    "write_bundle",
]

F2 = get_field(1)
_SPEC = FreeProductSpec((("K", 1),))
_T = GroupElement.generator("K", 1)


def _poly(*words) -> Poly:
    return Poly(F2, {w: 1 for w in words})


def unknot_base() -> SemiFreeDGA:
    """One chord a of degree 1 with d a = 1 + t."""
    return SemiFreeDGA(F2, [1], _SPEC, {"K": 1}, [ChordGen("a", 1, 1, 1)], {"a": _poly(unit_word(), (_T,))})


def trefoil_base() -> SemiFreeDGA:
    """Chekanov's trefoil: a1, a2, a3 in degree 0, b1, b2 in degree 1."""
    chords = [ChordGen(n, 0, 1, 1) for n in ("a1", "a2", "a3")] + [ChordGen(n, 1, 1, 1) for n in ("b1", "b2")]
    cw = chord_word
    diff = {
        "b1": _poly((_T,), cw("a1"), cw("a3"), cw("a1", "a2", "a3")),
        "b2": _poly(unit_word(), cw("a1"), cw("a3"), cw("a3", "a2", "a1")),
    }
    return SemiFreeDGA(F2, [1], _SPEC, {"K": 1}, chords, diff)


def stabilised_unknot_base() -> SemiFreeDGA:
    """The unknot with a cancelling pair e1 (degree 1), e2 (degree 0)."""
    base = unknot_base()
    chords = list(base.chords.values()) + [ChordGen("e1", 1, 1, 1), ChordGen("e2", 0, 1, 1)]
    diff = dict(base.differential)
    diff["e1"] = Poly.chord(F2, "e2")
    return base.replace(chords=chords, differential=diff)


def two_point_unknot_base() -> SemiFreeDGA:
    """The unknot with two base points: d a = 1 + t1 t2."""
    spec = FreeProductSpec((("K", 2),))
    t1, t2 = GroupElement.generator("K", 1), GroupElement.generator("K", 2)
    return SemiFreeDGA(F2, [1], spec, {"K": 1}, [ChordGen("a", 1, 1, 1)], {"a": _poly(unit_word(), (t1 * t2,))})


_TWO_POINT_ARCS = {
    "chord_arcs": {"a": (2, 2)},
    "letter_arcs": {("K", 1): (2, 1), ("K", 2): (1, 2)},
    "arcs": 2,
}


def unknot_system(copies: int) -> DGASystem:
    return n_copy_system(unknot_base(), copies, name=f"unknot-{copies}")


def trefoil_system(copies: int) -> DGASystem:
    return n_copy_system(trefoil_base(), copies, name=f"trefoil-{copies}")


def stabilised_unknot_system(copies: int) -> DGASystem:
    return n_copy_system(stabilised_unknot_base(), copies, name=f"unknot-stabilised-{copies}")


def two_point_unknot_system(copies: int, minima_arcs=None) -> DGASystem:
    name = f"unknot-two-point-{copies}" if minima_arcs is None else f"unknot-two-point-{copies}-partial-minima"
    return n_copy_system(two_point_unknot_base(), copies, name=name, minima_arcs=minima_arcs, **_TWO_POINT_ARCS)


def _shift_units(m: int):
    return [(f"a1[{i},{i}]", 1) for i in range(1, m + 1)]


def trefoil_alt_system(copies: int) -> DGASystem:
    """Target of the elementary family: a1[i,i] -> a1[i,i] + 1 on every copy,
    with the conjugated differential."""
    sized = {}
    for m in range(1, copies + 1):
        dga = n_copy(trefoil_base(), m)
        for q, _ in _shift_units(m):
            dga = elementary_auto(dga, q, u=Poly.one(F2)).target
        sized[m] = dga
    return DGASystem(F2, copies, "consistent", sized=sized, minima={1: ["y[1,2]"]}, name=f"trefoil-shifted-{copies}")


def perturbed_unknot_system(copies: int = 4) -> DGASystem:
    """Explicit system: the unknot copies, with a[1,3] -> a[1,3] + x[1,2] a[2,3]
    applied to every A^P containing 1, 2 and 3."""
    consistent = unknot_system(copies)
    explicit = {}
    for k in range(1, copies + 1):
        for P in itertools.combinations(range(1, copies + 1), k):
            dga = consistent.dga(P)
            if {1, 2, 3} <= set(P):
                u = Poly(F2, {chord_word("x[1,2]", "a[2,3]"): 1})
                dga = elementary_auto(dga, "a[1,3]", u=u).target
            explicit[P] = dga
    minima = {i: [f"y[{i},{i + 1}]"] for i in range(1, copies)}
    return DGASystem(F2, copies, "explicit", explicit=explicit, minima=minima, name=f"unknot-perturbed-{copies}")


# ---------------------------------------------------------------- families


def _term(*chords: str) -> dict:
    return {"coef": "1", "word": [{"chord": c} for c in chords]}


def elementary_family_doc(copies: int) -> dict:
    maps = {}
    for m in range(1, copies + 1):
        maps[str(m)] = [{"kind": "elementary", "generator": q, "u": [{"coef": "1", "word": []}]}
                        for q, _ in _shift_units(m)]
    return {"version": 1, "name": "trefoil-shift", "mode": "consistent", "maps": maps}


def stabilisation_family_doc(copies: int) -> dict:
    maps = {}
    for m in range(1, copies + 1):
        pairs = [(i, j) for i in range(1, m + 1) for j in range(1, m + 1)]
        steps = [{"kind": "stabilise", "names": [f"e1[{i},{j}]", f"e2[{i},{j}]"], "degree": 1, "c": i, "r": j}
                 for i, j in pairs]
        for i, j in pairs:
            u = [_term(f"y[{i},{k}]", f"e1[{k},{j}]") for k in range(i + 1, m + 1)]
            u += [_term(f"e1[{i},{k}]", f"y[{k},{j}]") for k in range(1, j)]
            if u:
                steps.append({"kind": "elementary", "generator": f"e2[{i},{j}]", "u": u})
        maps[str(m)] = steps
    return {"version": 1, "name": "unknot-stabilisation", "mode": "consistent", "maps": maps}


def perturb_family_doc(copies: int = 4) -> dict:
    maps = {}
    for k in range(3, copies + 1):
        for P in itertools.combinations(range(1, copies + 1), k):
            if {1, 2, 3} <= set(P):
                maps[",".join(map(str, P))] = [
                    {"kind": "elementary", "generator": "a[1,3]", "u": [_term("x[1,2]", "a[2,3]")]}
                ]
    return {"version": 1, "name": "unknot-perturbation", "mode": "explicit", "maps": maps}


# ---------------------------------------------------------------- broken fixtures


def _one_copy_doc(chords, diff, mode="explicit") -> dict:
    return {
        "version": 1,
        "field": {"degree": 1},
        "mode": mode,
        "copies": 1,
        "components": [{"id": "K", "pi1_rank": 1, "label": 1}],
        "generators": [{"name": n, "degree": d, "c": 1, "r": 1} for n, d in chords],
        "differentials": {"1": diff},
    }


def _broken_docs() -> dict[str, object]:
    out: dict[str, object] = {}
    out["d_squared.json"] = _one_copy_doc(
        [("p", 2), ("q", 1), ("s", 0)],
        {"p": [_term("q")], "q": [_term("s")]},
    )
    out["degree.json"] = _one_copy_doc([("p", 1), ("q", 1)], {"p": [_term("q")]})
    link = {
        "version": 1,
        "field": {"degree": 1},
        "mode": "explicit",
        "copies": 2,
        "components": [],
        "generators": [
            {"name": "p", "degree": 1, "c": 1, "r": 2},
            {"name": "q", "degree": 0, "c": 2, "r": 1},
        ],
        "differentials": {"1,2": {"p": [_term("q")]}},
    }
    out["link_grading.json"] = link
    modulus = _one_copy_doc([("p", 1)], {})
    modulus["field"] = {"degree": 2, "modulus": "101"}
    out["reducible_modulus.json"] = modulus
    out["undeclared_chord.json"] = _one_copy_doc([("p", 1)], {"p": [_term("ghost")]})
    unknown = _one_copy_doc([("p", 1)], {})
    unknown["colour"] = "blue"
    out["unknown_key.json"] = unknown
    dup = _one_copy_doc([("p", 1), ("p", 0)], {})
    out["duplicate_name.json"] = dup
    version = _one_copy_doc([("p", 1)], {})
    version["version"] = 99
    out["version_mismatch.json"] = version
    out["syntax_error.json"] = '{\n  "version": 1,\n  "field": {"degree": 1}\n  "mode": "explicit"\n}\n'
    out["duplicate_key.json"] = '{\n  "version": 1,\n  "mode": "explicit",\n  "mode": "consistent"\n}\n'

    # A^{1} disagrees with the restriction of A^{1,2}.
    restr = system_to_doc(perturbed_unknot_system(2))
    restr["name"] = "restriction-broken"
    restr["differentials"]["1"]["a[1,1]"] = [{"coef": "1", "word": []}]
    out["restriction.json"] = restr

    # A^(3) restricts correctly to {1,2} but not to {1,3}: d a[1,3] gains the
    # boundary of a[1,1] x[1,3], so d^2 = 0 still holds.
    three = unknot_system(3)
    top = three.sized[3]
    extra = leibniz_extend(top, Poly(F2, {chord_word("a[1,1]", "x[1,3]"): 1}))
    diff = dict(top.differential)
    diff["a[1,3]"] = diff["a[1,3]"] + extra
    sized = dict(three.sized)
    sized[3] = top.replace(differential=diff)
    out["bijection.json"] = system_to_doc(
        DGASystem(F2, 3, "consistent", sized=sized, minima=three.minima, name="bijection-broken"))

    partial = system_to_doc(two_point_unknot_system(4, minima_arcs=[1]))
    out["partial_minima.json"] = partial

    # Identity family on the trefoil except on {1,2}, where a1[1,1] is moved.
    square = {
        "version": 1,
        "name": "trefoil-square-broken",
        "mode": "explicit",
        "maps": {"1,2": [{"kind": "map", "images": {"a1[1,1]": [_term("a1[1,1]"), _term("a2[1,1]")]}}]},
    }
    out["family_square.json"] = square
    return out


# ---------------------------------------------------------------- bundle


def bundle() -> dict[str, str]:
    """Relative path -> file text for every bundled file."""
    files: dict[str, object] = {}
    for m in (1, 2, 3):
        files[f"systems/unknot-{m}.json"] = system_to_doc(unknot_system(m))
        files[f"systems/trefoil-{m}.json"] = system_to_doc(trefoil_system(m))
    files["systems/unknot.json"] = system_to_doc(unknot_system(5))
    files["systems/truncated.json"] = system_to_doc(unknot_system(2))
    files["systems/trefoil.json"] = system_to_doc(trefoil_system(4))
    files["systems/trefoil-shifted.json"] = system_to_doc(trefoil_alt_system(4))
    files["systems/unknot-stabilised.json"] = system_to_doc(stabilised_unknot_system(4))
    files["systems/unknot-two-point.json"] = system_to_doc(two_point_unknot_system(4))
    files["systems/unknot-perturbed.json"] = system_to_doc(perturbed_unknot_system(4))
    files["families/trefoil-shift.json"] = elementary_family_doc(4)
    files["families/unknot-stabilisation.json"] = stabilisation_family_doc(4)
    files["families/unknot-perturbation.json"] = perturb_family_doc(4)
    for name, doc in _broken_docs().items():
        files[f"broken/{name}"] = doc
    return {k: (v if isinstance(v, str) else dump_json(v)) for k, v in files.items()}


def write_bundle(directory: str | Path) -> list[Path]:
    root = Path(directory)
    written = []
    for rel, text in sorted(bundle().items()):
        path = root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        written.append(path)
    return written


if __name__ == "__main__":
    for p in write_bundle(sys.argv[1] if len(sys.argv) > 1 else "data"):
        print(p)
