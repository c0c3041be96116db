"""Semi-free DGAs over GF(2^e)[free product] with link gradings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

from .algebra import (
    AlgebraError,
    Field,
    FreeProductSpec,
    GroupElement,
    Poly,
    Word,
    _raw,
    word_chords,
    word_mul,
    word_str,
)
from .report import Report

__all__ = [
    "DGAError",
    "ChordGen",
    "SemiFreeDGA",
    "leibniz_extend",
    "dga_check",
    "quotient_partition",
    "subalgebra",
]


class DGAError(ValueError):
    pass


@dataclass(frozen=True)
class ChordGen:
    name: str
    degree: int
    c: int
    r: int


class SemiFreeDGA:
    """Free algebra on chord generators over a group algebra, with a
    differential given on generators.

    ``component_labels`` assigns each group component its diagonal copy-label.
    ``grading`` is ``"Z"`` or ``"Z/2"``.
    """

    def __init__(
        self,
        field: Field,
        labels: Sequence[int],
        group_spec: FreeProductSpec,
        component_labels: Mapping[str, int],
        chords: Iterable[ChordGen],
        differential: Mapping[str, Poly],
        grading: str = "Z",
    ):
        if grading not in ("Z", "Z/2"):
            raise DGAError(f"grading must be 'Z' or 'Z/2', got {grading!r}")
        self.field = field
        self.labels = tuple(labels)
        self.group_spec = group_spec
        self.component_labels = dict(component_labels)
        self.grading = grading
        self.chords: dict[str, ChordGen] = {}
        for ch in chords:
            if ch.name in self.chords:
                raise DGAError(f"duplicate generator name {ch.name!r}")
            if ch.c not in self.labels or ch.r not in self.labels:
                raise DGAError(f"generator {ch.name!r} has labels ({ch.c},{ch.r}) outside {self.labels}")
            self.chords[ch.name] = ch
        for cid in group_spec.ids():
            if cid not in self.component_labels:
                raise DGAError(f"group component {cid!r} has no copy-label")
            if self.component_labels[cid] not in self.labels:
                raise DGAError(f"group component {cid!r} has label outside {self.labels}")
        self.differential: dict[str, Poly] = {}
        for name, p in differential.items():
            if name not in self.chords:
                raise DGAError(f"differential given for undeclared generator {name!r}")
            for w, _ in p:
                for q in word_chords(w):
                    if q not in self.chords:
                        raise DGAError(f"differential of {name!r} uses undeclared generator {q!r}")
                for g in w[0::2]:
                    group_spec.validate(g)
            if p:
                self.differential[name] = p

    # -- basic accessors

    def d(self, name: str) -> Poly:
        return self.differential.get(name) or Poly(self.field)

    def chord(self, name: str) -> ChordGen:
        return self.chords[name]

    def names(self) -> list[str]:
        return list(self.chords)

    def norm_degree(self, d: int) -> int:
        return d % 2 if self.grading == "Z/2" else d

    def word_degree(self, w: Word) -> int:
        return self.norm_degree(sum(self.chords[q].degree for q in word_chords(w)))

    def chords_between(self, i: int, j: int) -> list[ChordGen]:
        return [ch for ch in self.chords.values() if ch.c == i and ch.r == j]

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SemiFreeDGA)
            and self.field == other.field
            and self.labels == other.labels
            and self.group_spec == other.group_spec
            and self.component_labels == other.component_labels
            and self.grading == other.grading
            and self.chords == other.chords
            and self.differential == other.differential
        )

    def __repr__(self) -> str:
        return f"SemiFreeDGA(labels={self.labels}, {len(self.chords)} chords, {self.field!r})"

    def replace(self, chords=None, differential=None, labels=None, group_spec=None, component_labels=None):
        return SemiFreeDGA(
            self.field,
            self.labels if labels is None else labels,
            self.group_spec if group_spec is None else group_spec,
            self.component_labels if component_labels is None else component_labels,
            self.chords.values() if chords is None else chords,
            self.differential if differential is None else differential,
            self.grading,
        )

    def relabel(
        self,
        label_map: Mapping[int, int],
        rename: Callable[[str], str],
        rename_component: Callable[[str], str],
    ) -> "SemiFreeDGA":
        """Transport along a bijection of labels, renaming chords and group
        components."""

        def gmap(g: GroupElement) -> GroupElement:
            return GroupElement(tuple((rename_component(c), xs) for c, xs in g.syllables))

        def wmap(w: Word) -> Word:
            return tuple(rename(f) if i % 2 else gmap(f) for i, f in enumerate(w))

        chords = [ChordGen(rename(ch.name), ch.degree, label_map[ch.c], label_map[ch.r]) for ch in self.chords.values()]
        diff = {rename(n): Poly(self.field, {wmap(w): c for w, c in p}) for n, p in self.differential.items()}
        spec = FreeProductSpec(tuple((rename_component(c), r) for c, r in self.group_spec.components))
        comp_labels = {rename_component(c): label_map[l] for c, l in self.component_labels.items()}
        labels = sorted(label_map[l] for l in self.labels)
        return SemiFreeDGA(self.field, labels, spec, comp_labels, chords, diff, self.grading)


def _apply_derivation(p: Poly, images: Callable[[str], Poly]) -> Poly:
    mul = p.field._mul
    out: dict[Word, int] = {}
    for w, c in p:
        for pos in range(1, len(w), 2):
            dq = images(w[pos])
            if not dq:
                continue
            prefix, suffix = w[:pos], w[pos + 1:]
            for v, b in dq:
                t = word_mul(word_mul(prefix, v), suffix)
                x = out.get(t, 0) ^ mul[c][b]
                if x:
                    out[t] = x
                else:
                    out.pop(t, None)
    return _raw(p.field, out)


def leibniz_extend(dga: SemiFreeDGA, p: Poly) -> Poly:
    """Apply the differential to an arbitrary element (group elements are
    cycles, no signs in characteristic 2)."""
    return _apply_derivation(p, dga.d)


# ---------------------------------------------------------------- checks


def _letters(dga: SemiFreeDGA, w: Word) -> list[tuple[int, int]]:
    out = []
    for i, f in enumerate(w):
        if i % 2:
            ch = dga.chords[f]
            out.append((ch.c, ch.r))
        else:
            for comp, _ in f.syllables:
                lab = dga.component_labels[comp]
                out.append((lab, lab))
    return out


def is_composable(dga: SemiFreeDGA, w: Word, c: int, r: int, allow_unit: bool | None = None) -> bool:
    """Composable from ``c`` to ``r``: c(x1)=c, c(x_{i+1})=r(x_i), r(x_k)=r.

    Group syllables count as letters with c = r = their copy-label.  The unit
    word is accepted only when ``c == r`` (or ``allow_unit`` says so).
    """
    letters = _letters(dga, w)
    if not letters:
        return (c == r) if allow_unit is None else allow_unit
    if letters[0][0] != c or letters[-1][1] != r:
        return False
    return all(letters[i + 1][0] == letters[i][1] for i in range(len(letters) - 1))


def _chords_composable(dga: SemiFreeDGA, w: Word, c: int, r: int) -> bool:
    qs = [dga.chords[q] for q in word_chords(w)]
    if not qs:
        return c == r
    if qs[0].c != c or qs[-1].r != r:
        return False
    return all(qs[i + 1].c == qs[i].r for i in range(len(qs) - 1))


def _group_positions_ok(dga: SemiFreeDGA, w: Word, c: int, r: int) -> bool:
    m = len(w) // 2
    for idx in range(0, len(w), 2):
        g = w[idx]
        if g.is_identity():
            continue
        k = idx // 2
        if k == 0:
            lab = {c}
        elif k == m:
            lab = {r}
        else:
            lab = {dga.chords[w[idx - 1]].r, dga.chords[w[idx + 1]].c}
        for comp in g.components():
            if {dga.component_labels[comp]} != lab:
                return False
    return True


def dga_check(dga: SemiFreeDGA) -> Report:
    """Verify d^2 = 0, the degree law and the link-grading law."""
    rep = Report("check")
    for name in sorted(dga.chords):
        q = dga.chords[name]
        dq = dga.d(name)
        want = dga.norm_degree(q.degree - 1)
        for w, _ in dq.sorted_terms():
            deg = dga.word_degree(w)
            if deg != want:
                rep.add(
                    "degree",
                    f"word {word_str(w)} in d({name}) has degree {deg}, expected {want}",
                    generator=name,
                    word=word_str(w),
                )
            if not _chords_composable(dga, w, q.c, q.r):
                rule = 1 if q.c != q.r else 2
                rep.add(
                    "link_grading",
                    f"word {word_str(w)} in d({name}) is not composable from {q.c} to {q.r} (rule {rule})",
                    generator=name,
                    word=word_str(w),
                    rule=rule,
                )
            elif not _group_positions_ok(dga, w, q.c, q.r):
                rep.add(
                    "group_label",
                    f"group factor in {word_str(w)} of d({name}) sits at a position with a different copy-label",
                    generator=name,
                    word=word_str(w),
                    rule=3,
                )
        dd = leibniz_extend(dga, dq)
        if dd:
            rep.add(
                "d_squared",
                f"d(d({name})) = {dd!r}",
                generator=name,
                witness=[word_str(w) for w, _ in dd.sorted_terms()[:5]],
            )
    return rep


# ---------------------------------------------------------------- quotients


def _block_of(blocks: Sequence[Iterable[int]], labels: Sequence[int]) -> dict[int, int]:
    where: dict[int, int] = {}
    for b, block in enumerate(blocks):
        for lab in block:
            if lab in where:
                raise DGAError(f"label {lab} appears in two blocks")
            where[lab] = b
    if set(where) != set(labels):
        raise DGAError(f"blocks {list(map(sorted, blocks))} do not partition {list(labels)}")
    return where


def quotient_partition(dga: SemiFreeDGA, blocks: Sequence[Iterable[int]]) -> SemiFreeDGA:
    """Quotient by the ideal generated by chords whose two labels lie in
    different blocks."""
    blocks = [set(b) for b in blocks]
    where = _block_of(blocks, dga.labels)
    keep = {n for n, ch in dga.chords.items() if where[ch.c] == where[ch.r]}
    diff = {}
    for n in keep:
        p = dga.d(n)
        diff[n] = _raw(dga.field, {w: c for w, c in p if all(q in keep for q in word_chords(w))})
    return dga.replace(chords=[dga.chords[n] for n in dga.chords if n in keep], differential=diff)


def subalgebra(dga: SemiFreeDGA, subset: Iterable[int]) -> SemiFreeDGA:
    """The sub-DGA on generators with both labels in ``subset``, carrying the
    differential of the quotient by ``subset`` and its complement."""
    sub = set(subset)
    if not sub:
        raise DGAError("subalgebra needs a nonempty label set")
    if not sub <= set(dga.labels):
        raise DGAError(f"{sorted(sub)} is not a subset of {list(dga.labels)}")
    rest = set(dga.labels) - sub
    quot = quotient_partition(dga, [sub, rest] if rest else [sub])
    names = [n for n, ch in quot.chords.items() if ch.c in sub and ch.r in sub]
    comps = [c for c in dga.group_spec.ids() if dga.component_labels[c] in sub]
    spec = dga.group_spec.restrict(comps)
    diff = {}
    for n in names:
        p = quot.d(n)
        for w, _ in p:
            for g in w[0::2]:
                if not g.components() <= set(comps):
                    raise DGAError(f"d({n}) uses a group component outside labels {sorted(sub)}")
        diff[n] = p
    return SemiFreeDGA(
        dga.field,
        [l for l in dga.labels if l in sub],
        spec,
        {c: dga.component_labels[c] for c in comps},
        [quot.chords[n] for n in names],
        diff,
        dga.grading,
    )
