"""DGA morphisms, elementary automorphisms and (de)stabilisation."""

from __future__ import annotations

from typing import Mapping, Sequence

from .algebra import GroupElement, Poly, Word, _raw, chord_word, word_chords, word_mul, word_str
from .dga import ChordGen, SemiFreeDGA, is_composable, leibniz_extend
from .report import Report

__all__ = [
    "MorphismError",
    "DGAMorphism",
    "verify_chain_map",
    "elementary_auto",
    "stabilise",
    "destabilise",
    "compose_steps",
]


class MorphismError(ValueError):
    pass


class DGAMorphism:
    """Algebra map determined by chord images; group elements map to
    themselves.  Chords without an explicit image go to the same-named
    chord of the target."""

    def __init__(self, source: SemiFreeDGA, target: SemiFreeDGA, images: Mapping[str, Poly] = (), kind: str = "map"):
        if source.field != target.field:
            raise MorphismError("source and target are over different fields")
        self.source = source
        self.target = target
        self.kind = kind
        self.inverse: DGAMorphism | None = None
        self.images: dict[str, Poly] = {}
        images = dict(images)
        for n in images:
            if n not in source.chords:
                raise MorphismError(f"image given for {n!r}, which is not a source generator")
        for n in source.chords:
            if n in images:
                p = images[n]
            elif n in target.chords:
                p = Poly(source.field, {chord_word(n): 1})
            else:
                raise MorphismError(f"source generator {n!r} has no image and no same-named target generator")
            for w, _ in p:
                for q in word_chords(w):
                    if q not in target.chords:
                        raise MorphismError(f"image of {n!r} uses {q!r}, not a target generator")
            self.images[n] = p
        for cid in source.group_spec.ids():
            if cid not in target.group_spec.ids():
                raise MorphismError(f"group component {cid!r} is missing from the target")

    def image(self, name: str) -> Poly:
        return self.images[name]

    def apply(self, p: Poly) -> Poly:
        f = p.field
        mul = f._mul
        out: dict[Word, int] = {}
        for w, c in p:
            cur = {(w[0],): c}
            for k in range(1, len(w), 2):
                img = self.images[w[k]]
                tail = (w[k + 1],)
                nxt: dict[Word, int] = {}
                for u, a in cur.items():
                    for v, b in img:
                        t = word_mul(word_mul(u, v), tail)
                        nxt[t] = nxt.get(t, 0) ^ mul[a][b]
                cur = {u: a for u, a in nxt.items() if a}
            for u, a in cur.items():
                out[u] = out.get(u, 0) ^ a
        return _raw(f, {u: a for u, a in out.items() if a})

    def then(self, other: "DGAMorphism") -> "DGAMorphism":
        """``other`` after ``self``."""
        if other.source.chords.keys() != self.target.chords.keys():
            raise MorphismError("composition: target of the first map is not the source of the second")
        return DGAMorphism(self.source, other.target, {n: other.apply(p) for n, p in self.images.items()}, "composite")

    def __repr__(self) -> str:
        moved = {n: p for n, p in self.images.items() if p != Poly(p.field, {chord_word(n): 1})}
        body = ", ".join(f"{n} -> {p!r}" for n, p in sorted(moved.items()))
        return f"DGAMorphism[{self.kind}]({body or 'identity on names'})"


def verify_chain_map(f: DGAMorphism) -> Report:
    rep = Report("chain_map")
    src, tgt = f.source, f.target
    for n in sorted(src.chords):
        ch = src.chords[n]
        img = f.images[n]
        for w, _ in img:
            if tgt.word_degree(w) != src.norm_degree(ch.degree):
                rep.add("degree", f"image of {n} contains {word_str(w)} of degree {tgt.word_degree(w)}", generator=n)
        lhs = f.apply(src.d(n))
        rhs = leibniz_extend(tgt, img)
        if lhs != rhs:
            rep.add("chain_map", f"f(d {n}) != d f({n}): difference {lhs + rhs!r}", generator=n)
    return rep


# ---------------------------------------------------------------- elementary


def _monomial_unit(dga: SemiFreeDGA, p: Poly, what: str) -> tuple[int, GroupElement]:
    if len(p) != 1:
        raise MorphismError(f"{what} must be a single invertible monomial, got {p!r}")
    ((w, c),) = p.terms.items()
    if len(w) != 1:
        raise MorphismError(f"{what} must not contain chords, got {p!r}")
    dga.group_spec.validate(w[0])
    return c, w[0]


def _as_unit(dga: SemiFreeDGA, x) -> Poly:
    if x is None:
        return Poly.one(dga.field)
    if isinstance(x, int):
        if x == 0:
            raise MorphismError("coefficient 0 is not invertible")
        return Poly(dga.field, {(GroupElement(),): dga.field.check(x)})
    if isinstance(x, GroupElement):
        return Poly.group(dga.field, x)
    return x


def elementary_auto(
    dga: SemiFreeDGA,
    q: str,
    x: Poly | int | GroupElement | None = None,
    y: Poly | int | GroupElement | None = None,
    u: Poly | None = None,
    target: SemiFreeDGA | None = None,
) -> DGAMorphism:
    """The automorphism ``q -> x q y + u`` fixing the other generators; x and
    y are invertible monomials (a nonzero scalar times a group element).

    Without ``target`` the target differential is the conjugate f d f^{-1};
    with it, the chain-map property is verified against the given DGA.
    """
    field = dga.field
    generator = q
    if generator not in dga.chords:
        raise MorphismError(f"unknown generator {generator!r}")
    left = _as_unit(dga, x)
    right = _as_unit(dga, y)
    u = Poly(field) if u is None else u
    ch = dga.chords[generator]
    lc, lg = _monomial_unit(dga, left, "left factor")
    rc, rg = _monomial_unit(dga, right, "right factor")
    for g, lab, side in ((lg, ch.c, "left"), (rg, ch.r, "right")):
        for comp in g.components():
            if dga.component_labels[comp] != lab:
                raise MorphismError(f"{side} factor uses component {comp} whose label differs from {lab}")
    for w, _ in u:
        if generator in word_chords(w):
            raise MorphismError(f"u involves {generator}")
        if dga.word_degree(w) != dga.norm_degree(ch.degree):
            raise MorphismError(f"word {word_str(w)} of u has degree {dga.word_degree(w)}, expected {ch.degree}")
        if not is_composable(dga, w, ch.c, ch.r):
            raise MorphismError(f"word {word_str(w)} of u is not composable from {ch.c} to {ch.r}")
    qp = Poly.chord(field, generator)
    fwd = {generator: left * qp * right + u}
    inv_left = Poly(field, {(lg.inverse(),): field.inv(lc)})
    inv_right = Poly(field, {(rg.inverse(),): field.inv(rc)})
    back = {generator: inv_left * (qp + u) * inv_right}
    if target is None:
        f_same = DGAMorphism(dga, dga, fwd, "elementary")
        f_inv = DGAMorphism(dga, dga, back, "elementary-inverse")
        diff = {n: f_same.apply(leibniz_extend(dga, f_inv.image(n))) for n in dga.chords}
        target = dga.replace(differential=diff)
    else:
        if target.chords != dga.chords:
            raise MorphismError("elementary automorphism target must have the same generators")
    f = DGAMorphism(dga, target, fwd, "elementary")
    g = DGAMorphism(target, dga, back, "elementary-inverse")
    for n in dga.chords:
        if g.apply(f.image(n)) != Poly.chord(field, n) or f.apply(g.image(n)) != Poly.chord(field, n):
            raise MorphismError(f"elementary map is not invertible on {n}")
    rep = verify_chain_map(f)
    if not rep.ok:
        raise MorphismError(f"elementary automorphism is not a chain map: {rep.findings[0].message}")
    f.inverse = g
    return f


# ---------------------------------------------------------------- stabilisation


def stabilise(
    dga: SemiFreeDGA, degree: int, c: int, r: int, names: tuple[str, str] | None = None
) -> tuple[SemiFreeDGA, DGAMorphism]:
    """Stabilisation by e1 (degree ``degree``) and e2 (degree ``degree - 1``)
    with d e1 = e2, both carrying the labels (c, r).  Returns the new DGA and
    the inclusion."""
    if names is None:
        k = 1
        while f"e{k}" in dga.chords or f"e{k + 1}" in dga.chords:
            k += 2
        names = (f"e{k}", f"e{k + 1}")
    e1, e2 = names
    for n in (e1, e2):
        if n in dga.chords:
            raise MorphismError(f"stabilisation generator {n!r} already exists")
    if e1 == e2:
        raise MorphismError("stabilisation needs two distinct names")
    for lab in (c, r):
        if lab not in dga.labels:
            raise MorphismError(f"label {lab} is not one of {dga.labels}")
    field = dga.field
    chords = list(dga.chords.values()) + [ChordGen(e1, degree, c, r), ChordGen(e2, degree - 1, c, r)]
    diff = dict(dga.differential)
    diff[e1] = Poly.chord(field, e2)
    tgt = dga.replace(chords=chords, differential=diff)
    f = DGAMorphism(dga, tgt, {}, "stabilise")
    rep = verify_chain_map(f)
    if not rep.ok:
        raise MorphismError(rep.findings[0].message)
    return tgt, f


def destabilise(dga: SemiFreeDGA, e1: str, e2: str) -> tuple[SemiFreeDGA, DGAMorphism]:
    """Quotient map killing a cancelling pair with d e1 = e2 exactly."""
    field = dga.field
    for n in (e1, e2):
        if n not in dga.chords:
            raise MorphismError(f"unknown generator {n!r}")
    if dga.d(e1) != Poly.chord(field, e2):
        raise MorphismError(f"d({e1}) is {dga.d(e1)!r}, not {e2}")
    if dga.d(e2):
        raise MorphismError(f"d({e2}) is nonzero")
    for n, p in dga.differential.items():
        if n in (e1, e2):
            continue
        if p.chords() & {e1, e2}:
            raise MorphismError(f"d({n}) involves {e1} or {e2}; apply a tame change of variables first")
    chords = [ch for n, ch in dga.chords.items() if n not in (e1, e2)]
    diff = {n: p for n, p in dga.differential.items() if n not in (e1, e2)}
    tgt = dga.replace(chords=chords, differential=diff)
    zero = Poly(field)
    f = DGAMorphism(dga, tgt, {e1: zero, e2: zero}, "destabilise")
    rep = verify_chain_map(f)
    if not rep.ok:
        raise MorphismError(rep.findings[0].message)
    return tgt, f


def compose_steps(steps: Sequence[DGAMorphism]) -> DGAMorphism:
    if not steps:
        raise MorphismError("empty composition")
    out = steps[0]
    for s in steps[1:]:
        out = out.then(s)
    return out
