"""Augmentations: validation, enumeration, and the twisted differential."""

from __future__ import annotations

import itertools
from typing import Iterable, Mapping, Sequence

from .algebra import AlgebraError, Field, GroupElement, Poly, Word, word_chords, word_str
from .dga import SemiFreeDGA

__all__ = [
    "AugmentationError",
    "Augmentation",
    "evaluate",
    "is_aug",
    "aug_violations",
    "enumerate_augs",
    "brute_force_augs",
    "unknowns",
    "coerce_field",
    "diagonal_aug",
    "substitute",
    "TwistedDifferential",
    "twist",
]

KPoly = dict  # tuple[str, ...] -> int, group elements already evaluated


class AugmentationError(ValueError):
    pass


class Augmentation:
    """Algebra map to the field: values on chords (missing = 0) and on free
    group generators ``(component, index)`` (missing = 1)."""

    __slots__ = ("field", "chord_values", "group_values")

    def __init__(self, field: Field, chord_values: Mapping[str, int] = (), group_values: Mapping[tuple[str, int], int] = ()):
        self.field = field
        self.chord_values = {k: v for k, v in dict(chord_values).items() if v}
        self.group_values = {k: v for k, v in dict(group_values).items() if v != 1}

    def chord(self, name: str) -> int:
        return self.chord_values.get(name, 0)

    def group_gen(self, component: str, index: int) -> int:
        return self.group_values.get((component, index), 1)

    def group(self, g: GroupElement) -> int:
        f = self.field
        val = 1
        for comp, xs in g.syllables:
            for x in xs:
                v = self.group_gen(comp, abs(x))
                if v == 0:
                    raise AugmentationError(f"group generator {comp}:{abs(x)} sent to 0")
                val = f.mul(val, v if x > 0 else f.inv(v))
        return val

    def key(self):
        return (
            tuple(sorted(self.chord_values.items())),
            tuple(sorted(self.group_values.items())),
        )

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Augmentation) and self.field == other.field and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self) -> str:
        f = self.field
        ch = ", ".join(f"{k}={f.format(v)}" for k, v in sorted(self.chord_values.items()))
        gr = ", ".join(f"{c}:{i}={f.format(v)}" for (c, i), v in sorted(self.group_values.items()))
        return f"Augmentation({ch}{'; ' if gr else ''}{gr})"

    def to_dict(self, dga: SemiFreeDGA | None = None) -> dict:
        f = self.field
        chords, group = self.chord_values, self.group_values
        if dga is not None:
            chords = {n: self.chord(n) for n in dga.chords if dga.chords[n].degree == 0 or self.chord(n)}
            group = {(c, i): self.group_gen(c, i) for c, rank in dga.group_spec.components
                     for i in range(1, rank + 1)}
        return {
            "chords": {k: f.format(v) for k, v in sorted(chords.items())},
            "group": {f"{c}:{i}": f.format(v) for (c, i), v in sorted(group.items())},
        }


def evaluate(p: Poly, eps: Augmentation) -> int:
    f = eps.field
    total = 0
    for w, c in p:
        val = f.mul(c, eps.group(w[0]))
        for k in range(1, len(w), 2):
            if not val:
                break
            val = f.mul(val, eps.chord(w[k]))
            val = f.mul(val, eps.group(w[k + 1]))
        total ^= val
    return total


def coerce_field(dga: SemiFreeDGA, field: Field) -> SemiFreeDGA:
    """Re-read the differential over another field; only 0/1 coefficients
    can move between fields."""
    if field == dga.field:
        return dga
    diff = {}
    for n, p in dga.differential.items():
        if any(c != 1 for _, c in p):
            raise AlgebraError(f"d({n}) has coefficients outside GF(2); cannot change field to {field!r}")
        diff[n] = Poly(field, p.terms)
    return SemiFreeDGA(field, dga.labels, dga.group_spec, dga.component_labels, dga.chords.values(), diff, dga.grading)


def aug_violations(dga: SemiFreeDGA, eps: Augmentation) -> list[str]:
    out = []
    if eps.field != dga.field:
        out.append(f"augmentation over {eps.field!r} but DGA over {dga.field!r}")
        return out
    for n, v in eps.chord_values.items():
        if n not in dga.chords:
            out.append(f"value given for unknown generator {n!r}")
        elif dga.norm_degree(dga.chords[n].degree) != 0:
            out.append(f"generator {n} has degree {dga.chords[n].degree} but value {eps.field.format(v)}")
    gens = set(dga.group_spec.generators())
    for key, v in eps.group_values.items():
        if key not in gens:
            out.append(f"value given for unknown group generator {key}")
        elif v == 0:
            out.append(f"group generator {key} sent to 0")
    if out:
        return out
    for n in sorted(dga.chords):
        val = evaluate(dga.d(n), eps)
        if val:
            out.append(f"eps(d({n})) = {eps.field.format(val)}")
    return out


def is_aug(dga: SemiFreeDGA, eps: Augmentation) -> bool:
    return not aug_violations(dga, eps)


# ---------------------------------------------------------------- enumeration


def unknowns(dga: SemiFreeDGA, respect_link_grading: bool = False) -> list[tuple[str, object]]:
    """The unknown vector: degree-0 chords in declaration order, then group
    generators in spec order."""
    out: list[tuple[str, object]] = []
    for n, ch in dga.chords.items():
        if dga.norm_degree(ch.degree) == 0 and not (respect_link_grading and ch.c != ch.r):
            out.append(("chord", n))
    for g in dga.group_spec.generators():
        out.append(("group", g))
    return out


def _constraints(dga: SemiFreeDGA, index: dict, respect_link_grading: bool):
    # each constraint: list of (coef, [(unknown, exponent), ...])
    cons = []
    for n, ch in dga.chords.items():
        if dga.norm_degree(ch.degree) != 1:
            continue
        terms = []
        for w, c in dga.d(n):
            factors: dict[int, int] = {}
            dead = False
            for k, f in enumerate(w):
                if k % 2:
                    if ("chord", f) not in index:
                        dead = True
                        break
                    u = index[("chord", f)]
                    factors[u] = factors.get(u, 0) + 1
                else:
                    for comp, xs in f.syllables:
                        for x in xs:
                            u = index[("group", (comp, abs(x)))]
                            factors[u] = factors.get(u, 0) + (1 if x > 0 else -1)
            if not dead:
                terms.append((c, sorted((u, e) for u, e in factors.items() if e)))
        if terms:
            cons.append((n, terms))
    return cons


def _domains(field: Field, unk) -> list[list[int]]:
    return [list(field.units()) if kind == "group" else list(field.elements()) for kind, _ in unk]


def _to_aug(field: Field, unk, values) -> Augmentation:
    chords, groups = {}, {}
    for (kind, key), v in zip(unk, values):
        if kind == "chord":
            chords[key] = v
        else:
            groups[key] = v
    return Augmentation(field, chords, groups)


def _eval_term(field: Field, coef: int, factors, values) -> int:
    val = coef
    for u, e in factors:
        val = field.mul(val, field.pow(values[u], e))
    return val


def brute_force_augs(dga: SemiFreeDGA, field: Field | None = None, respect_link_grading: bool = False,
                     max_unknowns: int = 20) -> list[Augmentation]:
    """Exhaustive search over every assignment of the unknowns."""
    field = field or dga.field
    dga = coerce_field(dga, field)
    unk = unknowns(dga, respect_link_grading)
    if len(unk) > max_unknowns:
        raise AugmentationError(f"{len(unk)} unknowns exceeds the brute-force limit {max_unknowns}")
    index = {u: i for i, u in enumerate(unk)}
    cons = _constraints(dga, index, respect_link_grading)
    found = []
    for values in itertools.product(*_domains(field, unk)):
        if all(not _xor(_eval_term(field, c, fs, values) for c, fs in terms) for _, terms in cons):
            found.append(values)
    return [_to_aug(field, unk, v) for v in sorted(found)]


def _xor(vals: Iterable[int]) -> int:
    t = 0
    for v in vals:
        t ^= v
    return t


def enumerate_augs(dga: SemiFreeDGA, field: Field | None = None, respect_link_grading: bool = False) -> list[Augmentation]:
    """All augmentations, by backtracking with single-unknown propagation.

    Results are sorted lexicographically by the unknown vector of
    :func:`unknowns`.
    """
    field = field or dga.field
    dga = coerce_field(dga, field)
    unk = unknowns(dga, respect_link_grading)
    index = {u: i for i, u in enumerate(unk)}
    cons = [terms for _, terms in _constraints(dga, index, respect_link_grading)]
    domains = _domains(field, unk)
    counts = [0] * len(unk)
    for terms in cons:
        for _, fs in terms:
            for u, _ in fs:
                counts[u] += 1
    order = sorted(range(len(unk)), key=lambda u: (-counts[u], u))
    is_chord = [kind == "chord" for kind, _ in unk]
    found: list[tuple[int, ...]] = []

    def propagate(values: list) -> bool:
        # solve any constraint that is linear in its single remaining unknown
        changed = True
        while changed:
            changed = False
            for terms in cons:
                const, coef, free, linear = 0, 0, set(), True
                for c, fs in terms:
                    val, pending = c, []
                    for u, e in fs:
                        if values[u] is None:
                            pending.append((u, e))
                        else:
                            val = field.mul(val, field.pow(values[u], e))
                    if not pending:
                        const ^= val
                        continue
                    free.update(u for u, _ in pending)
                    if len(pending) == 1 and pending[0][1] == 1 and is_chord[pending[0][0]]:
                        coef ^= val
                    else:
                        linear = False
                if not free:
                    if const:
                        return False
                    continue
                if linear and len(free) == 1:
                    (u,) = free
                    if coef:
                        values[u] = field.mul(const, field.inv(coef))
                        changed = True
                    elif const:
                        return False
        return True

    def search(values: list) -> None:
        values = list(values)
        if not propagate(values):
            return
        for u in order:
            if values[u] is None:
                for v in domains[u]:
                    values[u] = v
                    search(values)
                return
        found.append(tuple(values))

    search([None] * len(unk))
    return [_to_aug(field, unk, v) for v in sorted(set(found))]


# ---------------------------------------------------------------- diagonal


def diagonal_aug(system, subset: Sequence[int], parts: Sequence[Augmentation]) -> Augmentation:
    """Augmentation of A^P that is ``parts[k]`` on copy ``P[k]`` (through the
    system's canonical identification) and zero off the diagonal."""
    subset = sorted(subset)
    if len(parts) != len(subset):
        raise AugmentationError(f"{len(parts)} parts for {len(subset)} copies")
    chords: dict[str, int] = {}
    groups: dict[tuple[str, int], int] = {}
    field = system.field
    for i, eps in zip(subset, parts):
        single = system.dga([i])
        bad = aug_violations(single, eps)
        if bad:
            raise AugmentationError(f"part for copy {i} is not an augmentation: {bad[0]}")
        inc = system.inclusion([i], subset)
        for n, v in eps.chord_values.items():
            chords[inc[n]] = v
        for (comp, idx), v in eps.group_values.items():
            groups[(inc[comp], idx)] = v
    return Augmentation(field, chords, groups)


# ---------------------------------------------------------------- twisting


def substitute(p: Poly, eps: Augmentation) -> KPoly:
    """phi_eps applied to ``p`` with group elements evaluated: every chord q
    becomes q + eps(q)."""
    mul = eps.field._mul
    values = eps.chord_values
    out: KPoly = {}
    for w, c in p.terms.items():
        # group elements evaluate to scalars, which commute past the chords
        for g in w[0::2]:
            if g.syllables:
                c = mul[c][eps.group(g)]
        qs = w[1::2]
        if values.keys().isdisjoint(qs):
            out[qs] = out.get(qs, 0) ^ c
            continue
        cur = {(): c}
        for q in qs:
            v = values.get(q)
            nxt: dict = {}
            for word, x in cur.items():
                kw = word + (q,)
                nxt[kw] = nxt.get(kw, 0) ^ x
                if v:
                    nxt[word] = nxt.get(word, 0) ^ mul[x][v]
            cur = nxt
        for word, x in cur.items():
            if x:
                out[word] = out.get(word, 0) ^ x
    return {w: c for w, c in out.items() if c}


class TwistedDifferential:
    """d_eps = phi_eps . d . phi_eps^{-1} on the chord algebra over the field.

    Images are computed on demand and cached.
    """

    def __init__(self, dga: SemiFreeDGA, eps: Augmentation):
        if eps.field != dga.field:
            raise AugmentationError("augmentation and DGA over different fields")
        self.dga = dga
        self.eps = eps
        self.field = dga.field
        self._images: dict[str, KPoly] = {}

    def image(self, name: str) -> KPoly:
        img = self._images.get(name)
        if img is None:
            # phi^{-1}(q) = q + eps(q) and d(constant) = 0, so d_eps(q) = phi(d q)
            img = substitute(self.dga.d(name), self.eps)
            if () in img:
                raise AugmentationError(
                    f"constant term {self.field.format(img[()])} survives in d_eps({name}); "
                    "eps is not an augmentation"
                )
            self._images[name] = img
        return img

    def images(self) -> dict[str, KPoly]:
        return {n: self.image(n) for n in self.dga.chords}

    def coeff(self, name: str, word: tuple[str, ...]) -> int:
        return self.image(name).get(word, 0)

    def apply(self, p: KPoly) -> KPoly:
        mul = self.field._mul
        out: KPoly = {}
        for w, c in p.items():
            for pos, q in enumerate(w):
                for v, b in self.image(q).items():
                    t = w[:pos] + v + w[pos + 1:]
                    out[t] = out.get(t, 0) ^ mul[c][b]
        return {w: c for w, c in out.items() if c}

    def square_violations(self) -> list[str]:
        return [n for n in sorted(self.dga.chords) if self.apply(self.image(n))]

    def max_word_length(self) -> int:
        return max((len(w) for img in self.images().values() for w in img), default=0)

    def __repr__(self) -> str:
        return f"TwistedDifferential({self.dga!r}, {self.eps!r})"


def twist(dga: SemiFreeDGA, eps: Augmentation, verify: bool = True) -> TwistedDifferential:
    bad = aug_violations(dga, eps)
    if bad:
        raise AugmentationError(f"not an augmentation: {bad[0]}")
    td = TwistedDifferential(dga, eps)
    if verify:
        td.images()
        sq = td.square_violations()
        if sq:
            raise AugmentationError(f"d_eps^2 != 0 on {sq[0]}")
    return td


def kpoly_str(p: KPoly, field: Field) -> str:
    if not p:
        return "0"
    parts = []
    for w, c in sorted(p.items(), key=lambda t: (len(t[0]), t[0])):
        s = " ".join(w) if w else "1"
        parts.append(s if c == 1 else f"[{field.format(c)}]{s}")
    return " + ".join(parts)
