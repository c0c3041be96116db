"""Systems of link-graded DGAs indexed by subsets of {1, ..., M}."""

from __future__ import annotations

import itertools
import re
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .algebra import Field, GroupElement, Poly, word_chords, word_str
from .dga import DGAError, SemiFreeDGA, dga_check, subalgebra
from .report import Report

__all__ = [
    "SystemError_",
    "DGASystem",
    "check_system",
    "subset_key",
    "parse_subset",
    "pattern_parts",
    "relabel_name",
    "relabel_component",
]

_CHORD_PATTERN = re.compile(r"^(.+)\[(\d+),(\d+)\]$")
_COMP_PATTERN = re.compile(r"^(.+)\[(\d+)\]$")


class SystemError_(ValueError):
    pass


def subset_key(subset: Iterable[int]) -> str:
    return ",".join(str(i) for i in sorted(subset))


def parse_subset(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(sorted(int(x) for x in text.split(",")))
    except ValueError:
        raise SystemError_(f"bad subset key {text!r}") from None
    if len(set(vals)) != len(vals) or not vals:
        raise SystemError_(f"bad subset key {text!r}")
    return vals


def pattern_parts(name: str) -> tuple[str, int, int] | None:
    m = _CHORD_PATTERN.match(name)
    if not m:
        return None
    return m.group(1), int(m.group(2)), int(m.group(3))


def relabel_name(name: str, label_map: Mapping[int, int]) -> str:
    parts = pattern_parts(name)
    if parts is None:
        raise SystemError_(f"generator {name!r} does not follow the base[c,r] naming pattern")
    base, c, r = parts
    return f"{base}[{label_map[c]},{label_map[r]}]"


def relabel_component(name: str, label_map: Mapping[int, int]) -> str:
    m = _COMP_PATTERN.match(name)
    if not m:
        raise SystemError_(f"group component {name!r} does not follow the base[i] naming pattern")
    return f"{m.group(1)}[{label_map[int(m.group(2))]}]"


def _pattern_ok(dga: SemiFreeDGA) -> bool:
    for ch in dga.chords.values():
        parts = pattern_parts(ch.name)
        if parts is None or parts[1:] != (ch.c, ch.r):
            return False
    for cid, lab in dga.component_labels.items():
        m = _COMP_PATTERN.match(cid)
        if not m or int(m.group(2)) != lab:
            return False
    return True


class DGASystem:
    """A DGA for each nonempty subset of {1..M} with inclusion maps.

    In ``consistent`` mode only the sized DGAs A^(m) on labels 1..m are
    stored; A^P is the order-preserving relabeling of A^(|P|), and chords
    and components are named ``base[c,r]`` and ``base[i]`` so inclusions are
    the identity on names.  In ``explicit`` mode every A^P is stored and
    inclusions are given by name maps (chords and components); a missing map
    for a covering pair is the identity on names, and longer ones are
    composed along covering chains.

    ``minima`` maps i to the designated minimum chords of A^{i,i+1}.
    """

    def __init__(
        self,
        field: Field,
        copies: int,
        mode: str,
        *,
        sized: Mapping[int, SemiFreeDGA] | None = None,
        explicit: Mapping[tuple[int, ...], SemiFreeDGA] | None = None,
        inclusions: Mapping[tuple[tuple[int, ...], tuple[int, ...]], Mapping[str, str]] | None = None,
        minima: Mapping[int, Sequence[str]] | None = None,
        grading: str = "Z",
        name: str = "",
        morphisms: Sequence | None = None,
    ):
        if mode not in ("consistent", "explicit"):
            raise SystemError_(f"mode must be 'consistent' or 'explicit', got {mode!r}")
        if not isinstance(copies, int) or copies < 1:
            raise SystemError_(f"copies must be a positive integer, got {copies!r}")
        self.field = field
        self.copies = copies
        self.mode = mode
        self.grading = grading
        self.name = name
        self.morphisms = list(morphisms or [])
        self._cache: dict[tuple[int, ...], SemiFreeDGA] = {}
        self._incl_cache: dict = {}
        if mode == "consistent":
            sized = dict(sized or {})
            missing = [m for m in range(1, copies + 1) if m not in sized]
            if missing:
                raise SystemError_(f"consistent system is missing the DGA on {missing[0]} copies")
            extra = [m for m in sized if not 1 <= m <= copies]
            if extra:
                raise SystemError_(f"DGA given for size {extra[0]} but copies = {copies}")
            self.sized = sized
            for m, dga in sized.items():
                if dga.labels != tuple(range(1, m + 1)):
                    raise SystemError_(f"DGA on {m} copies has labels {dga.labels}")
                if not _pattern_ok(dga):
                    raise SystemError_(f"DGA on {m} copies does not follow the base[c,r] / base[i] naming pattern")
            self.explicit = {}
            self.given_inclusions = {}
        else:
            explicit = {tuple(sorted(k)): v for k, v in (explicit or {}).items()}
            for P in self.subsets():
                if P not in explicit:
                    raise SystemError_(f"explicit system is missing the DGA for subset {{{subset_key(P)}}}")
            for P in explicit:
                if not P or not set(P) <= set(range(1, copies + 1)):
                    raise SystemError_(f"subset {{{subset_key(P)}}} is not in 1..{copies}")
                if explicit[P].labels != P:
                    raise SystemError_(f"DGA for {{{subset_key(P)}}} has labels {explicit[P].labels}")
            self.explicit = explicit
            self.sized = {}
            self.given_inclusions = {
                (tuple(sorted(a)), tuple(sorted(b))): dict(m) for (a, b), m in (inclusions or {}).items()
            }
        self.minima: dict[int, list[str]] = {int(i): list(v) for i, v in (minima or {}).items()}

    # -- structure

    def subsets(self, max_size: int | None = None) -> list[tuple[int, ...]]:
        top = self.copies if max_size is None else min(max_size, self.copies)
        return [P for k in range(1, top + 1) for P in itertools.combinations(range(1, self.copies + 1), k)]

    def dga(self, subset: Iterable[int]) -> SemiFreeDGA:
        P = tuple(sorted(subset))
        got = self._cache.get(P)
        if got is not None:
            return got
        if not P or not set(P) <= set(range(1, self.copies + 1)) or len(set(P)) != len(P):
            raise SystemError_(f"{list(P)} is not a nonempty subset of 1..{self.copies}")
        if self.mode == "explicit":
            got = self.explicit[P]
        else:
            base = self.sized[len(P)]
            lm = {k + 1: p for k, p in enumerate(P)}
            got = base if P == tuple(range(1, len(P) + 1)) else base.relabel(
                lm, lambda n: relabel_name(n, lm), lambda c: relabel_component(c, lm)
            )
        self._cache[P] = got
        return got

    def inclusion(self, small: Iterable[int], big: Iterable[int]) -> dict[str, str]:
        """Name map A^small -> A^big on chords and group components."""
        P, Q = tuple(sorted(small)), tuple(sorted(big))
        if not set(P) <= set(Q):
            raise SystemError_(f"{{{subset_key(P)}}} is not contained in {{{subset_key(Q)}}}")
        key = (P, Q)
        got = self._incl_cache.get(key)
        if got is not None:
            return got
        src = self.dga(P)
        names = list(src.chords) + src.group_spec.ids()
        if self.mode == "consistent" or P == Q:
            got = {n: n for n in names}
        elif key in self.given_inclusions:
            got = self.given_inclusions[key]
        elif len(Q) == len(P) + 1:
            got = {n: n for n in names}
        else:
            x = min(set(Q) - set(P))
            mid = tuple(sorted(P + (x,)))
            first, second = self.inclusion(P, mid), self.inclusion(mid, Q)
            got = {n: second[first[n]] for n in names if first.get(n) in second}
        self._incl_cache[key] = got
        return got

    @cached_property
    def patterned(self) -> bool:
        """Whether every DGA follows the base[c,r] naming pattern, which gives
        the canonical identification between copy pairs."""
        if self.mode == "consistent":
            return True
        return all(_pattern_ok(d) for d in self.explicit.values())

    def minima_names(self, i: int) -> list[str]:
        if i in self.minima:
            return self.minima[i]
        if self.mode == "consistent" and 1 in self.minima:
            lm = {1: i, 2: i + 1}
            return [relabel_name(n, lm) for n in self.minima[1]]
        raise SystemError_(f"no minima designated for copies ({i},{i + 1})")

    def identify(self, name: str, label_map: Mapping[int, int]) -> str:
        """Canonical identification of a chord between copy pairs."""
        if not self.patterned:
            raise SystemError_("system does not use the base[c,r] naming pattern; no canonical identification")
        return relabel_name(name, label_map)

    def transport_aug(self, eps, source: int, target: int):
        """Move an augmentation of A^{source} to A^{target} along the
        canonical identification of single copies."""
        from .augment import Augmentation

        if source == target:
            return eps
        if self.patterned:
            lm = {source: target}
            return Augmentation(
                eps.field,
                {relabel_name(n, lm): v for n, v in eps.chord_values.items()},
                {(relabel_component(c, lm), k): v for (c, k), v in eps.group_values.items()},
            )
        a, b = self.dga((source,)), self.dga((target,))
        if set(a.chords) != set(b.chords) or set(a.group_spec.ids()) != set(b.group_spec.ids()):
            raise SystemError_(f"copies {source} and {target} have no canonical identification")
        return eps

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, DGASystem)
            and (self.field, self.copies, self.mode, self.grading, self.name)
            == (other.field, other.copies, other.mode, other.grading, other.name)
            and self.minima == other.minima
            and self.sized == other.sized
            and self.explicit == other.explicit
            and self.given_inclusions == other.given_inclusions
            and self.morphisms == other.morphisms
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"DGASystem({self.name or '?'}, {self.mode}, M={self.copies}, {self.field!r})"


# ---------------------------------------------------------------- checks


def _compare_restriction(rep: Report, sys: DGASystem, P, Q, axiom: str) -> None:
    small = sys.dga(P)
    big = sys.dga(Q)
    try:
        inc = sys.inclusion(P, Q)
    except (SystemError_, KeyError) as exc:
        rep.add(axiom, f"no inclusion {{{subset_key(P)}}} -> {{{subset_key(Q)}}}: {exc}", small=list(P), big=list(Q))
        return
    try:
        sub = subalgebra(big, P)
    except DGAError as exc:
        rep.add(axiom, f"restriction of A^{{{subset_key(Q)}}} to {{{subset_key(P)}}} is not defined: {exc}",
                small=list(P), big=list(Q))
        return
    where = f"{{{subset_key(P)}}} -> {{{subset_key(Q)}}}"
    targets = [inc.get(n) for n in small.chords]
    if None in targets or len(set(targets)) != len(targets) or set(targets) != set(sub.chords):
        rep.add(axiom, f"inclusion {where} is not a bijection onto the chords of the restriction",
                small=list(P), big=list(Q))
        return
    comps = [inc.get(c) for c in small.group_spec.ids()]
    if None in comps or set(comps) != set(sub.group_spec.ids()) or len(set(comps)) != len(comps):
        rep.add(axiom, f"inclusion {where} is not a bijection on group components", small=list(P), big=list(Q))
        return
    for c in small.group_spec.ids():
        if small.group_spec.rank(c) != sub.group_spec.rank(inc[c]) or small.component_labels[c] != sub.component_labels[inc[c]]:
            rep.add(axiom, f"inclusion {where} changes rank or label of component {c}", small=list(P), big=list(Q))
            return
    for n, ch in small.chords.items():
        other = sub.chords[inc[n]]
        if (ch.degree, ch.c, ch.r) != (other.degree, other.c, other.r):
            rep.add(axiom, f"inclusion {where} sends {n} to {other.name} with different degree or labels",
                    small=list(P), big=list(Q))
            return

    def gmap(g: GroupElement) -> GroupElement:
        return GroupElement(tuple((inc[c], xs) for c, xs in g.syllables))

    for n in sorted(small.chords):
        mapped = Poly(small.field, {
            tuple(inc[f] if k % 2 else gmap(f) for k, f in enumerate(w)): c for w, c in small.d(n)
        })
        if mapped != sub.d(inc[n]):
            diff = mapped + sub.d(inc[n])
            rep.add(axiom, f"differential of {n} in A^{{{subset_key(P)}}} differs from its image in the restriction "
                    f"of A^{{{subset_key(Q)}}}: difference {diff!r}", small=list(P), big=list(Q), generator=n)
            return


def check_system(sys: DGASystem) -> Report:
    """DGA axioms for every member, the restriction axiom for nested pairs,
    relabeling consistency, and the designated minima."""
    rep = Report("check")
    if sys.mode == "consistent":
        for m in range(1, sys.copies + 1):
            sub = dga_check(sys.sized[m])
            for f in sub.findings:
                f.data["copies"] = m
            rep.extend(sub)
        # sized members must restrict to each other; initial segments test the
        # restriction axiom, the rest test invariance under order-preserving
        # bijections of labels
        for m in range(2, sys.copies + 1):
            top = tuple(range(1, m + 1))
            for P in itertools.combinations(top, m - 1):
                axiom = "restriction" if P == tuple(range(1, m)) else "bijection"
                _compare_restriction(rep, sys, P, top, axiom)
            for k in range(1, m - 1):
                for P in itertools.combinations(top, k):
                    axiom = "restriction" if P == tuple(range(1, k + 1)) else "bijection"
                    _compare_restriction(rep, sys, P, top, axiom)
    else:
        for P in sys.subsets():
            sub = dga_check(sys.dga(P))
            for f in sub.findings:
                f.data["subset"] = list(P)
            rep.extend(sub)
        for Q in sys.subsets():
            for k in range(1, len(Q)):
                for P in itertools.combinations(Q, k):
                    _compare_restriction(rep, sys, P, Q, "restriction")
        # functoriality of inclusions along chains
        for Q in sys.subsets():
            for k in range(1, len(Q) - 1):
                for P in itertools.combinations(Q, k):
                    for x in sorted(set(Q) - set(P)):
                        mid = tuple(sorted(P + (x,)))
                        a, b, direct = sys.inclusion(P, mid), sys.inclusion(mid, Q), sys.inclusion(P, Q)
                        if any(b.get(a.get(n)) != direct.get(n) for n in direct):
                            rep.add("functoriality",
                                    f"inclusions {{{subset_key(P)}}} -> {{{subset_key(mid)}}} -> {{{subset_key(Q)}}} "
                                    "do not compose to the direct inclusion", small=list(P), big=list(Q))
    for i in range(1, sys.copies):
        try:
            names = sys.minima_names(i)
        except (SystemError_, KeyError) as exc:
            rep.add("minima", str(exc), pair=[i, i + 1])
            continue
        dga = sys.dga((i, i + 1))
        for n in names:
            ch = dga.chords.get(n)
            if ch is None:
                rep.add("minima", f"designated minimum {n} is not a generator of A^{{{i},{i + 1}}}", pair=[i, i + 1])
            elif (ch.c, ch.r) != (i, i + 1):
                rep.add("minima", f"designated minimum {n} has labels ({ch.c},{ch.r}), expected ({i},{i + 1})",
                        pair=[i, i + 1])
            elif dga.norm_degree(ch.degree + 1) != 0:
                rep.add("minima", f"designated minimum {n} has degree {ch.degree}; its dual must have degree 0",
                        pair=[i, i + 1])
    return rep
