"""A-infinity operations on the linear dual of the chord module.

For a twisted differential d_eps, the operation

    m_k(x1^v, ..., xk^v) = sum_q q^v * Coeff_{x1 x2 ... xk}(d_eps q)

reads words in the same order as the inputs.  With this orientation m_k
maps C^v_{i1 i2} (x) ... (x) C^v_{ik ik+1} to C^v_{i1 ik+1}; the opposite
reading produces the opposite algebra, and :func:`_orientation_self_test`
checks at import time that only the forward reading has the composable
support pattern.
"""

from __future__ import annotations

from collections import defaultdict
from itertools import combinations
from typing import Sequence

from .algebra import Field, Poly, chord_word, FreeProductSpec
from .augment import Augmentation, KPoly, TwistedDifferential
from .dga import ChordGen, SemiFreeDGA
from .linalg import in_span, kernel, rank, rref
from .report import Report

__all__ = [
    "ORIENTATION",
    "AinfError",
    "CVect",
    "mk",
    "mk_raw",
    "mk_multilinear",
    "dual_oracle_mk",
    "dual_oracle_table",
    "check_ainf",
    "HomComplex",
    "HomologyTable",
    "dual_degree",
]

ORIENTATION = "forward"

CVect = dict  # chord name -> coefficient, a cochain in C^v


class AinfError(ValueError):
    pass


def dual_degree(dga: SemiFreeDGA, name: str) -> int:
    return dga.norm_degree(dga.chords[name].degree + 1)


def _key(inputs: Sequence[str], orientation: str) -> tuple[str, ...]:
    if orientation == "forward":
        return tuple(inputs)
    if orientation == "reversed":
        return tuple(reversed(inputs))
    raise AinfError(f"unknown orientation {orientation!r}")


def mk_raw(td: TwistedDifferential, inputs: Sequence[str], orientation: str = ORIENTATION) -> CVect:
    """m_k on basis duals with no support filtering: scans every chord."""
    key = _key(inputs, orientation)
    out = {}
    for q in td.dga.chords:
        c = td.coeff(q, key)
        if c:
            out[q] = c
    return out


def _corner(td: TwistedDifferential, c: int, r: int) -> list[str]:
    cache = td.__dict__.setdefault("_corner_cache", {})
    names = cache.get((c, r))
    if names is None:
        names = sorted(ch.name for ch in td.dga.chords_between(c, r))
        cache[(c, r)] = names
    return names


def mk(td: TwistedDifferential, inputs: Sequence[str]) -> CVect:
    """m_k(x1^v, ..., xk^v) for chord names ``inputs``."""
    if not inputs:
        raise AinfError("m_k needs at least one input")
    chords = td.dga.chords
    gens = [chords[x] for x in inputs]
    if any(gens[i].r != gens[i + 1].c for i in range(len(gens) - 1)):
        return {}
    key = tuple(inputs)
    out = {}
    for q in _corner(td, gens[0].c, gens[-1].r):
        c = td.coeff(q, key)
        if c:
            out[q] = c
    return out


def mk_multilinear(td: TwistedDifferential, vecs: Sequence[CVect]) -> CVect:
    """Multilinear extension of :func:`mk` to cochains."""
    mul = td.field._mul
    out: dict[str, int] = {}

    def rec(pos: int, names: tuple[str, ...], coef: int) -> None:
        if pos == len(vecs):
            for q, c in mk(td, names).items():
                out[q] = out.get(q, 0) ^ mul[coef][c]
            return
        for x, a in vecs[pos].items():
            if a:
                rec(pos + 1, names + (x,), mul[coef][a])

    rec(0, (), 1)
    return {q: c for q, c in out.items() if c}


def dual_oracle_mk(dga: SemiFreeDGA, eps: Augmentation, inputs: Sequence[str]) -> CVect:
    """Independent evaluation of m_k: pair the dual tensor with the raw
    differential, counting embeddings of ``inputs`` as a subsequence of each
    word with the deleted letters weighted by their eps-values."""
    f = eps.field
    mul = f._mul
    k = len(inputs)
    out = {}
    for q in dga.chords:
        total = 0
        for w, c in dga.d(q):
            g = c
            for h in w[0::2]:
                g = mul[g][eps.group(h)]
            if not g:
                continue
            dp = [1] + [0] * k
            for letter in w[1::2]:
                v = eps.chord(letter)
                for j in range(k, -1, -1):
                    x = mul[dp[j]][v]
                    if j and inputs[j - 1] == letter:
                        x ^= dp[j - 1]
                    dp[j] = x
            total ^= mul[g][dp[k]]
        if total:
            out[q] = total
    return out


def dual_oracle_table(dga: SemiFreeDGA, eps: Augmentation, kmax: int) -> dict[tuple[str, ...], CVect]:
    """The oracle of :func:`dual_oracle_mk` for every tuple of length 1..kmax
    at once: each choice of kept letters in each raw word contributes its
    coefficient times the eps-values of the deleted letters and of the group
    elements."""
    f = eps.field
    mul = f._mul
    out: dict[tuple[str, ...], dict[str, int]] = defaultdict(dict)
    for q in dga.chords:
        for w, c in dga.d(q):
            g = c
            for h in w[0::2]:
                g = mul[g][eps.group(h)]
            if not g:
                continue
            letters = w[1::2]
            values = [eps.chord(x) for x in letters]
            n = len(letters)
            for k in range(1, min(kmax, n) + 1):
                for keep in combinations(range(n), k):
                    coef = g
                    kept = set(keep)
                    for pos in range(n):
                        if pos not in kept:
                            coef = mul[coef][values[pos]]
                            if not coef:
                                break
                    if coef:
                        t = tuple(letters[pos] for pos in keep)
                        slot = out[t]
                        x = slot.get(q, 0) ^ coef
                        if x:
                            slot[q] = x
                        else:
                            del slot[q]
    return {t: v for t, v in out.items() if v}


def _check_output(dga, q, images, by_len, deg, ends, mul, kmax):
    """Support and degree findings for the words hitting ``q``, the failing
    relations at output ``q`` and the number of relation coefficients."""
    findings = []
    c, r = ends[q]
    acc: dict[tuple, int] = defaultdict(int)
    for w, a in images[q].items():
        k = len(w)
        if ends[w[0]][0] != c or ends[w[-1]][1] != r or any(ends[w[i]][1] != ends[w[i + 1]][0] for i in range(k - 1)):
            findings.append(("support", f"m_{k}({', '.join(w)}) hits {q} but the tuple is not composable to ({c},{r})",
                             {"tuple": list(w), "output": q}))
        out_deg = dga.norm_degree(sum(deg[x] for x in w) + 2 - k)
        if out_deg != deg[q]:
            findings.append(("degree", f"m_{k}({', '.join(w)}) hits {q} in degree {deg[q]}, expected {out_deg}",
                             {"tuple": list(w), "output": q}))
        if k > kmax:
            continue
        room = kmax - k + 1
        for p, inner in enumerate(w):
            head, tail = w[:p], w[p + 1:]
            for n, items in by_len[inner]:
                if n > room:
                    break
                for v, b in items:
                    acc[head + v + tail] ^= mul[a][b]
    bad = [t for t, x in acc.items() if x]
    return findings, bad, len(acc)


def check_ainf(td: TwistedDifferential, kmax: int, memo: dict | None = None) -> Report:
    """Verify the A-infinity relations on every composable basis tuple of
    length <= kmax, together with the degree law and the support pattern.

    ``memo`` may be shared between calls on twisted differentials of the
    same DGAs: the checks at an output chord depend only on its image and
    the images of the chords in it, so repeated configurations are reused.
    """
    if kmax < 1:
        raise AinfError("kmax must be at least 1")
    rep = Report("ainf")
    dga = td.dga
    mul = td.field._mul
    chords = dga.chords
    images = td.images()
    deg = {q: dual_degree(dga, q) for q in chords}
    ends = {q: (ch.c, ch.r) for q, ch in chords.items()}
    # images split by word length, for the inner substitutions
    by_len: dict[str, list[tuple[int, list]]] = {}
    for q, img in images.items():
        groups: dict[int, list] = defaultdict(list)
        for v, b in img.items():
            groups[len(v)].append((v, b))
        by_len[q] = sorted(groups.items())
    if memo is not None:
        # holding the DGA keeps its id from being reused while the memo lives
        memo.setdefault("dgas", {})[id(dga)] = dga
        interned = memo.setdefault("images", {})
        fid = {q: interned.setdefault(frozenset(img.items()), len(interned)) for q, img in images.items()}
        results = memo.setdefault("outputs", {})
    bad, checked = [], 0
    for q in sorted(chords):
        if memo is None:
            found = _check_output(dga, q, images, by_len, deg, ends, mul, kmax)
        else:
            inner = sorted({x for w in images[q] if len(w) <= kmax for x in w})
            key = (id(dga), kmax, q, fid[q], tuple(fid[x] for x in inner), tuple(inner))
            found = results.get(key)
            if found is None:
                found = results[key] = _check_output(dga, q, images, by_len, deg, ends, mul, kmax)
        findings, failing, n = found
        for kind, message, data in findings:
            rep.add(kind, message, **data)
        bad.extend((t, q) for t in failing)
        checked += n
    bad.sort()
    for t, q in bad[:20]:
        rep.add("relation", f"A-infinity relation fails on ({', '.join(t)}) at output {q}", tuple=list(t), output=q)
    if len(bad) > 20:
        rep.add("relation", f"... {len(bad) - 20} further failing relations", count=len(bad))
    rep.tables["kmax"] = kmax
    rep.tables["relations_checked"] = checked
    rep.tables["max_arity"] = max((len(w) for n in chords for w in images[n]), default=0)
    return rep


# ---------------------------------------------------------------- homology


class HomologyTable:
    """Cohomology of a finite cochain complex, by degree, with chosen
    representatives and a way to read off class coordinates."""

    def __init__(self, field: Field, basis_by_degree: dict, reps: dict, images: dict):
        self.field = field
        self._basis = basis_by_degree  # degree -> list of chord names
        self.reps = reps  # degree -> list of CVect
        self._images = images  # degree -> list of CVect spanning coboundaries

    @property
    def dims(self) -> dict[int, int]:
        return {d: len(r) for d, r in sorted(self.reps.items()) if r}

    def dim(self, degree: int | None = None) -> int:
        if degree is None:
            return sum(len(r) for r in self.reps.values())
        return len(self.reps.get(degree, []))

    def basis(self) -> list[tuple[int, CVect]]:
        return [(d, v) for d in sorted(self.reps) for v in self.reps[d]]

    def degrees(self) -> list[int]:
        return sorted(d for d, r in self.reps.items() if r)

    def _vec(self, degree: int, v: CVect) -> list[int]:
        return [v.get(n, 0) for n in self._basis.get(degree, [])]

    def coords(self, v: CVect, degree: int | None = None) -> list[int]:
        """Coordinates of the class of cocycle ``v`` in :meth:`basis` order.

        Raises AinfError if ``v`` is not cohomologous to a combination of
        the representatives (in particular if it is not a cocycle)."""
        out = []
        names = {n: d for d, ns in self._basis.items() for n in ns}
        for n in v:
            if v[n] and n not in names:
                raise AinfError(f"{n} is not a basis element of this complex")
        for d in sorted(self.reps):
            part = {n: c for n, c in v.items() if names.get(n) == d}
            reps = self.reps[d]
            imgs = self._images.get(d, [])
            vecs = [self._vec(d, r) for r in reps] + [self._vec(d, b) for b in imgs]
            sol = in_span(self.field, vecs, self._vec(d, part))
            if sol is None:
                raise AinfError(f"cochain in degree {d} is not a cocycle combination of representatives")
            out.extend(sol[: len(reps)])
        # components in degrees with no cohomology must be coboundaries
        for d, ns in self._basis.items():
            if d in self.reps:
                continue
            part = {n: c for n, c in v.items() if names.get(n) == d}
            if any(part.values()):
                imgs = self._images.get(d, [])
                if in_span(self.field, [self._vec(d, b) for b in imgs], self._vec(d, part)) is None:
                    raise AinfError(f"cochain in degree {d} is not a coboundary")
        return out

    def is_zero_class(self, v: CVect) -> bool:
        return not any(self.coords(v))

    def from_coords(self, coords: Sequence[int]) -> CVect:
        mul = self.field._mul
        out: dict[str, int] = {}
        for c, (_, rep) in zip(coords, self.basis()):
            if c:
                for n, a in rep.items():
                    out[n] = out.get(n, 0) ^ mul[c][a]
        return {n: a for n, a in out.items() if a}

    def to_dict(self) -> dict:
        f = self.field
        return {
            "dims": {str(d): n for d, n in self.dims.items()},
            "representatives": {
                str(d): [{k: f.format(c) for k, c in sorted(v.items())} for v in vs]
                for d, vs in sorted(self.reps.items())
                if vs
            },
        }


class HomComplex:
    """The cochain complex (C^v_{ij}, m_1) for a twisted differential."""

    def __init__(self, td: TwistedDifferential, i: int, j: int):
        self.td = td
        self.i, self.j = i, j
        dga = td.dga
        self.field = td.field
        names = sorted(_corner(td, i, j), key=lambda n: (dual_degree(dga, n), n))
        self.names = names
        self.degree = {n: dual_degree(dga, n) for n in names}
        self.by_degree: dict[int, list[str]] = defaultdict(list)
        for n in names:
            self.by_degree[self.degree[n]].append(n)
        self.by_degree = dict(self.by_degree)
        self._homology: HomologyTable | None = None

    def d(self, v: CVect) -> CVect:
        return mk_multilinear(self.td, [v])

    def matrix(self, degree: int) -> tuple[list[str], list[str], list[list[int]]]:
        """Matrix of m_1 from degree ``degree`` to its target degree; columns
        are source basis elements."""
        src = self.by_degree.get(degree, [])
        tgt = self.by_degree.get(self.td.dga.norm_degree(degree + 1), [])
        rows = [[0] * len(src) for _ in tgt]
        pos = {n: k for k, n in enumerate(tgt)}
        for col, x in enumerate(src):
            for q, c in mk(self.td, [x]).items():
                if q not in pos:
                    raise AinfError(f"m_1({x}) has component {q} outside the expected degree")
                rows[pos[q]][col] = c
        return src, tgt, rows

    def check_d_squared(self) -> list[str]:
        bad = []
        for x in self.names:
            if self.d(self.d({x: 1})):
                bad.append(x)
        return bad

    def homology(self) -> HomologyTable:
        if self._homology is not None:
            return self._homology
        f = self.field
        norm = self.td.dga.norm_degree
        reps: dict[int, list[CVect]] = {}
        images: dict[int, list[CVect]] = {}
        for d, src in self.by_degree.items():
            _, tgt, rows = self.matrix(d)
            if tgt:
                ker = kernel(f, rows, len(src))
            else:
                ker = [[int(a == b) for b in range(len(src))] for a in range(len(src))]
            # coboundaries into degree d come from degree d-1
            prev = [p for p in self.by_degree if norm(p + 1) == d]
            img: list[list[int]] = []
            for p in prev:
                psrc, ptgt, prow = self.matrix(p)
                pos = {n: k for k, n in enumerate(src)}
                cols = [[0] * len(src) for _ in psrc]
                for r, n in enumerate(ptgt):
                    for c in range(len(psrc)):
                        cols[c][pos[n]] = prow[r][c]
                img.extend(cols)
            red, _ = rref(f, img, len(src)) if img else ([], [])
            chosen: list[list[int]] = []
            span = list(red)
            base_rank = len(red)
            for v in ker:
                if rank(f, span + [v], len(src)) > base_rank + len(chosen):
                    chosen.append(v)
                    span.append(v)
            reps[d] = [{src[k]: c for k, c in enumerate(v) if c} for v in chosen]
            images[d] = [{src[k]: c for k, c in enumerate(v) if c} for v in red]
        self._homology = HomologyTable(f, dict(self.by_degree), reps, images)
        return self._homology


# ---------------------------------------------------------------- self-test


def _orientation_self_test() -> None:
    # chords a in R^{13}, b in R^{12}, c in R^{23}, with d a = b c
    from .algebra import get_field

    f = get_field(1)
    chords = [ChordGen("a", 1, 1, 3), ChordGen("b", 0, 1, 2), ChordGen("c", 0, 2, 3)]
    dga = SemiFreeDGA(f, [1, 2, 3], FreeProductSpec(()), {}, chords, {"a": Poly(f, {chord_word("b", "c"): 1})})
    td = TwistedDifferential(dga, Augmentation(f))
    passing = []
    for orientation in ("forward", "reversed"):
        ok = True
        for x in dga.chords.values():
            for y in dga.chords.values():
                for q in mk_raw(td, [x.name, y.name], orientation):
                    out = dga.chords[q]
                    if not (x.r == y.c and out.c == x.c and out.r == y.r):
                        ok = False
        if ok and mk_raw(td, ["b", "c"], orientation) == {"a": 1}:
            passing.append(orientation)
    if passing != [ORIENTATION]:
        raise AssertionError(f"orientation self-test failed: passing readings {passing}, configured {ORIENTATION!r}")


_orientation_self_test()
