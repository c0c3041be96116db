"""The pre-augmentation category of a DGA system, its localisation at the
unit classes, the consistent-sequence category, and functors from
morphism families."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

from .ainfty import AinfError, CVect, HomComplex, HomologyTable, mk, mk_multilinear
from .algebra import Field
from .augment import Augmentation, TwistedDifferential, diagonal_aug, enumerate_augs, evaluate, substitute, twist
from .linalg import rank
from .morphism import DGAMorphism, verify_chain_map
from .dga import is_composable, quotient_partition
from .report import Report
from .system import DGASystem, SystemError_, relabel_name, subset_key

__all__ = [
    "CategoryError",
    "InsufficientCopies",
    "PreAugCategory",
    "WClass",
    "LocHom",
    "preaug_hom",
    "preaug_compose",
    "w_class",
    "loc_hom",
    "loc_compose",
    "unit_identity_findings",
    "LocalizedCategory",
    "ConsistentCategory",
    "AinfFunctor",
    "h0_category",
    "consistent_aug_cat",
    "compare_constructions",
    "check_family",
    "functor_from_family",
    "UNIT",
    "TrivialComplex",
]

UNIT = "1"  # the identity morphism of (i, eps), a basis element of k


class CategoryError(ValueError):
    pass


class InsufficientCopies(CategoryError):
    pass


def _add_into(out: dict, v: Mapping, mul, coef: int = 1) -> None:
    for k, a in v.items():
        x = out.get(k, 0) ^ mul[coef][a]
        if x:
            out[k] = x
        else:
            out.pop(k, None)


def _columns_iso(field: Field, cols: list[list[int]], nrows: int) -> bool:
    if len(cols) != nrows:
        return False
    if nrows == 0:
        return True
    rows = [[c[i] for c in cols] for i in range(nrows)]
    return rank(field, rows, len(cols)) == nrows


# ---------------------------------------------------------------- O


class PreAugCategory:
    """The pre-augmentation category O of a system.

    Objects are pairs (i, eps) with eps an augmentation of A^{i}; the
    augmentations of copy i are those of copy 1 moved along the canonical
    identification, in lexicographic order.
    """

    def __init__(self, system: DGASystem, augs: Sequence[Augmentation] | None = None):
        self.sys = system
        self.field = system.field
        self._augs1 = list(augs) if augs is not None else enumerate_augs(system.dga((1,)))
        self._augs: dict[int, list[Augmentation]] = {}
        self._td: dict = {}
        self._hom: dict = {}
        self._inv_incl: dict = {}

    @property
    def objects(self) -> list[Augmentation]:
        return self._augs1

    def augs(self, i: int = 1) -> list[Augmentation]:
        got = self._augs.get(i)
        if got is None:
            got = [self.sys.transport_aug(e, 1, i) for e in self._augs1]
            self._augs[i] = got
        return got

    def obj(self, i: int, k: int) -> Augmentation:
        return self.augs(i)[k]

    def td(self, copies: Sequence[int], parts: Sequence[Augmentation]) -> TwistedDifferential:
        key = (tuple(copies), tuple(parts))
        got = self._td.get(key)
        if got is None:
            eps = diagonal_aug(self.sys, copies, parts)
            got = TwistedDifferential(self.sys.dga(copies), eps)
            self._td[key] = got
        return got

    def hom(self, i: int, ei: Augmentation, j: int, ej: Augmentation) -> HomComplex:
        if i >= j:
            raise CategoryError(f"hom complex needs i < j, got ({i},{j})")
        key = (i, ei, j, ej)
        got = self._hom.get(key)
        if got is None:
            got = HomComplex(self.td((i, j), (ei, ej)), i, j)
            self._hom[key] = got
        return got

    def _inverse_inclusion(self, small, big) -> dict[str, str]:
        key = (tuple(small), tuple(big))
        got = self._inv_incl.get(key)
        if got is None:
            got = {v: k for k, v in self.sys.inclusion(small, big).items()}
            self._inv_incl[key] = got
        return got

    def m(self, copies: Sequence[int], parts: Sequence[Augmentation], vecs: Sequence[CVect]) -> CVect:
        """m_k of O on a strictly increasing chain of copies; ``vecs[l]`` is
        a cochain on A^{c_l, c_l+1}."""
        copies = tuple(copies)
        if len(vecs) != len(copies) - 1 or any(copies[l] >= copies[l + 1] for l in range(len(copies) - 1)):
            raise CategoryError(f"m_{len(vecs)} needs a strictly increasing chain of {len(vecs) + 1} copies")
        P = tuple(sorted(copies))
        td = self.td(P, parts)
        moved = []
        for l, v in enumerate(vecs):
            inc = self.sys.inclusion((copies[l], copies[l + 1]), P)
            moved.append({inc[n]: c for n, c in v.items()})
        out = mk_multilinear(td, moved)
        back = self._inverse_inclusion((copies[0], copies[-1]), P)
        return {back[n]: c for n, c in out.items()}


class TrivialComplex:
    """Hom complex of O between equal copies: the field spanned by the
    formal identity ``UNIT`` when the augmentations agree, zero otherwise."""

    def __init__(self, field: Field, rank: int):
        self.field = field
        self.names = [UNIT] if rank else []
        self.degree = {n: 0 for n in self.names}
        self.by_degree = {0: list(self.names)} if rank else {}

    def d(self, v: CVect) -> CVect:
        return {}

    def homology(self) -> HomologyTable:
        reps = {0: [{UNIT: 1}]} if self.names else {}
        return HomologyTable(self.field, dict(self.by_degree), reps, {})


def preaug_hom(cat: PreAugCategory, src: tuple[int, Augmentation], tgt: tuple[int, Augmentation]):
    """Hom(src, tgt) in O: a HomComplex for i < j; for i = j a TrivialComplex
    of rank 1 when the augmentations agree and rank 0 otherwise."""
    (i, a), (j, b) = src, tgt
    if i > j:
        raise CategoryError(f"O has no morphisms from copy {i} to copy {j} < {i}")
    if i < j:
        return cat.hom(i, a, j, b)
    return TrivialComplex(cat.field, int(a == b))


def preaug_compose(cat: PreAugCategory, objects: Sequence[tuple[int, Augmentation]], inputs: Sequence) -> CVect | int:
    """m_k of O with strict units; an input on an identity slot is an int
    scalar or a cochain on ``UNIT``."""
    k = len(inputs)
    if len(objects) != k + 1:
        raise CategoryError("need k+1 objects for k inputs")
    units = [objects[l][0] == objects[l + 1][0] for l in range(k)]
    for l, u in enumerate(units):
        if u and objects[l][1] != objects[l + 1][1]:
            return {}
        if not u and objects[l][0] > objects[l + 1][0]:
            return {}
    if any(units):
        inputs = [x.get(UNIT, 0) if u and isinstance(x, Mapping) else x for x, u in zip(inputs, units)]
        if k != 2:
            return 0 if all(units) else {}
        if all(units):
            return cat.field.mul(inputs[0], inputs[1])
        s, v = (inputs[0], inputs[1]) if units[0] else (inputs[1], inputs[0])
        return {n: cat.field.mul(s, c) for n, c in v.items() if cat.field.mul(s, c)}
    copies = [o[0] for o in objects]
    parts = [o[1] for o in objects]
    return cat.m(copies, parts, inputs)


# ---------------------------------------------------------------- unit classes


@dataclass
class WClass:
    copy: int
    aug: Augmentation
    cochain: CVect
    m1: CVect
    coords: list[int] | None

    @property
    def is_cocycle(self) -> bool:
        return not self.m1

    @property
    def nonzero(self) -> bool:
        return bool(self.coords) and any(self.coords)


def w_class(cat: PreAugCategory, eps_index: int, i: int = 1) -> WClass:
    """The cochain sum of the designated minima in O((i,eps),(i+1,eps))."""
    names = cat.sys.minima_names(i)
    a, b = cat.obj(i, eps_index), cat.obj(i + 1, eps_index)
    hc = cat.hom(i, a, i + 1, b)
    w = {n: 1 for n in names}
    for n in names:
        if n not in hc.degree:
            raise CategoryError(f"minimum {n} is not a generator of C({i},{i + 1})")
    d = hc.d(w)
    coords = None
    if not d:
        coords = hc.homology().coords(w)
    return WClass(i, a, w, d, coords)


# ---------------------------------------------------------------- localisation


def _class_map(field, src: HomologyTable, tgt: HomologyTable, fn) -> list[list[int]]:
    return [tgt.coords(fn(rep)) for _, rep in src.basis()]


@dataclass
class LocHom:
    source: int
    target: int
    tables: dict[int, HomologyTable]
    transitions: dict[int, list[list[int]]]
    iso: dict[int, bool]
    witness: int
    findings: list[str] = dc_field(default_factory=list)

    @property
    def stable(self) -> HomologyTable:
        return self.tables[self.witness]

    @property
    def dims(self) -> dict[int, int]:
        return self.stable.dims

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "target": self.target,
            "witness": self.witness,
            "dims": {str(d): n for d, n in self.dims.items()},
            "dims_by_copy": {str(j): {str(d): n for d, n in t.dims.items()} for j, t in sorted(self.tables.items())},
            "transition_iso": {f"{j}->{j + 1}": ok for j, ok in sorted(self.iso.items())},
            "findings": list(self.findings),
        }


def _right_w(cat: PreAugCategory, a: Augmentation, b_idx: int, j: int):
    """x -> m2(x, w_{b,j}) from C(1,j) to C(1,j+1), augmentations (a, b, b)."""
    wj = {n: 1 for n in cat.sys.minima_names(j)}
    b_j, b_j1 = cat.obj(j, b_idx), cat.obj(j + 1, b_idx)
    return lambda x: cat.m((1, j, j + 1), (a, b_j, b_j1), [x, wj])


def _left_w(cat: PreAugCategory, a_idx: int, b: Augmentation, j: int):
    """x -> m2(w_{a,1}, x) from C(2,j) to C(1,j), augmentations (a, a, b)."""
    w1 = {n: 1 for n in cat.sys.minima_names(1)}
    return lambda x: cat.m((1, 2, j), (cat.obj(1, a_idx), cat.obj(2, a_idx), b), [w1, x])


def loc_hom(cat: PreAugCategory, a_idx: int, b_idx: int, check_left: bool = True) -> LocHom:
    """Stable cohomology of O((1,a),(j,b)) under right multiplication by the
    unit classes; the witness is the first j where the transitions j -> j+1
    and j+1 -> j+2 are both isomorphisms."""
    sys = cat.sys
    M = sys.copies
    field = cat.field
    a = cat.obj(1, a_idx)
    tables: dict[int, HomologyTable] = {}
    for j in range(2, M + 1):
        tables[j] = cat.hom(1, a, j, cat.obj(j, b_idx)).homology()
    transitions, iso = {}, {}
    for j in range(2, M):
        cols = _class_map(field, tables[j], tables[j + 1], _right_w(cat, a, b_idx, j))
        transitions[j] = cols
        iso[j] = _columns_iso(field, cols, tables[j + 1].dim())
    witness = next((j for j in range(2, M - 1) if iso[j] and iso[j + 1]), None)
    if witness is None:
        need = 4
        raise InsufficientCopies(
            f"insufficient copies: the transitions H O((1,e{a_idx}),(j,e{b_idx})) -> (j+1) do not stabilise "
            f"within M = {M} copies (at least {need} are needed to witness two consecutive isomorphisms)"
        )
    findings = []
    if check_left:
        for j in range(3, M + 1):
            src = cat.hom(2, cat.obj(2, a_idx), j, cat.obj(j, b_idx)).homology()
            cols = _class_map(field, src, tables[j], _left_w(cat, a_idx, cat.obj(j, b_idx), j))
            if not _columns_iso(field, cols, tables[j].dim()):
                findings.append(f"left multiplication by w on H O((2,e{a_idx}),({j},e{b_idx})) is not an isomorphism")
    return LocHom(a_idx, b_idx, tables, transitions, iso, witness, findings)


def unit_identity_findings(cat: PreAugCategory, a_idx: int, b_idx: int, loc: LocHom) -> list[str]:
    """Check that left and right multiplication by the unit classes act as
    the identity under the canonical identification of copy pairs (or, for
    systems without one, as isomorphisms)."""
    sys = cat.sys
    out = []
    a = cat.obj(1, a_idx)
    for j in range(2, sys.copies):
        src, tgt = loc.tables[j], loc.tables[j + 1]
        if not sys.patterned:
            if not loc.iso[j]:
                out.append(f"right action of w on H O((1,e{a_idx}),({j},e{b_idx})) is not an isomorphism")
            continue
        lm = {1: 1, j: j + 1}
        fn = _right_w(cat, a, b_idx, j)
        for k, (_, rep) in enumerate(src.basis()):
            ident = {sys.identify(n, lm): c for n, c in rep.items()}
            if tgt.coords(fn(rep)) != tgt.coords(ident):
                out.append(f"right action of w sends basis class {k} of H O((1,e{a_idx}),({j},e{b_idx})) "
                           "to something other than its canonical image")
    for j in range(3, sys.copies + 1):
        src = cat.hom(2, cat.obj(2, a_idx), j, cat.obj(j, b_idx)).homology()
        tgt = loc.tables[j]
        fn = _left_w(cat, a_idx, cat.obj(j, b_idx), j)
        if not sys.patterned:
            cols = _class_map(cat.field, src, tgt, fn)
            if not _columns_iso(cat.field, cols, tgt.dim()):
                out.append(f"left action of w on H O((2,e{a_idx}),({j},e{b_idx})) is not an isomorphism")
            continue
        lm = {2: 1, j: j}
        for k, (_, rep) in enumerate(src.basis()):
            ident = {sys.identify(n, lm): c for n, c in rep.items()}
            if tgt.coords(fn(rep)) != tgt.coords(ident):
                out.append(f"left action of w sends basis class {k} of H O((2,e{a_idx}),({j},e{b_idx})) "
                           "to something other than its canonical image")
    return out


def _solve_class(field, cols: list[list[int]], target: list[int]) -> list[int]:
    from .linalg import solve

    n = len(target)
    rows = [[c[i] for c in cols] for i in range(n)]
    sol = solve(field, rows, target, len(cols))
    if sol is None:
        raise CategoryError("class is not in the image of an isomorphism that was expected")
    return sol


class LocalizedCategory:
    """Cohomology-level composition in the localisation, with every hom
    represented at copies (1, 2)."""

    def __init__(self, cat: PreAugCategory):
        if cat.sys.copies < 3:
            raise InsufficientCopies("composition in the localisation needs at least 3 copies")
        self.cat = cat
        self.field = cat.field
        self._loc: dict = {}
        self._pre: dict = {}

    def loc(self, a: int, b: int) -> LocHom:
        got = self._loc.get((a, b))
        if got is None:
            got = loc_hom(self.cat, a, b)
            self._loc[(a, b)] = got
        return got

    def table(self, a: int, b: int) -> HomologyTable:
        return self.loc(a, b).tables[2]

    def _pre_cols(self, b: int, c: int):
        """Matrix of m2(w_{b,1}, -): H O((2,b),(3,c)) -> H O((1,b),(3,c))."""
        got = self._pre.get((b, c))
        if got is None:
            cat = self.cat
            src = cat.hom(2, cat.obj(2, b), 3, cat.obj(3, c)).homology()
            tgt = self.loc(b, c).tables[3]
            cols = _class_map(self.field, src, tgt, _left_w(cat, b, cat.obj(3, c), 3))
            if not _columns_iso(self.field, cols, tgt.dim()):
                raise CategoryError(f"left multiplication by w_(e{b}) into copy 3 is not an isomorphism")
            got = (src, cols)
            self._pre[(b, c)] = got
        return got

    def compose(self, a: int, b: int, c: int, x: list[int], y: list[int]) -> list[int]:
        """[x] in L(a,b), [y] in L(b,c) (coordinates at copies (1,2)) to their
        product in L(a,c)."""
        cat, field = self.cat, self.field
        lbc, lac = self.loc(b, c), self.loc(a, c)
        if not lbc.iso[2] or not lac.iso[2]:
            raise CategoryError("composition needs the transition from copy 2 to copy 3 to be an isomorphism")
        # move y to copy 3, then back across w_{b,1} to O((2,b),(3,c))
        y3 = [0] * lbc.tables[3].dim()
        for coef, col in zip(y, lbc.transitions[2]):
            if coef:
                y3 = [u ^ field.mul(coef, v) for u, v in zip(y3, col)]
        src, cols = self._pre_cols(b, c)
        y23 = src.from_coords(_solve_class(field, cols, y3))
        xv = self.table(a, b).from_coords(x)
        prod = cat.m((1, 2, 3), (cat.obj(1, a), cat.obj(2, b), cat.obj(3, c)), [xv, y23])
        z3 = lac.tables[3].coords(prod)
        return _solve_class(field, lac.transitions[2], z3)

    def unit(self, a: int) -> list[int]:
        w = {n: 1 for n in self.cat.sys.minima_names(1)}
        return self.table(a, a).coords(w)


def loc_compose(cat: PreAugCategory, a: int, b: int, c: int, x: list[int], y: list[int]) -> list[int]:
    return LocalizedCategory(cat).compose(a, b, c, x, y)


def _basis_vectors(n: int) -> list[list[int]]:
    return [[int(i == k) for i in range(n)] for k in range(n)]


def _degree_indices(t: HomologyTable, degree: int) -> list[int]:
    return [k for k, (d, _) in enumerate(t.basis()) if d == degree]


def h0_category(cat: PreAugCategory, degree0_only: bool = False) -> Report:
    """Composition tables of the cohomology category of the localisation,
    with associativity and unit checks.  Tables in the report are the
    degree-0 parts."""
    rep = Report("h0")
    lc = LocalizedCategory(cat)
    n = len(cat.objects)
    field = cat.field
    objs = range(n)
    for a, b in itertools.product(objs, objs):
        loc = lc.loc(a, b)
        for msg in loc.findings:
            rep.add("localisation", msg, pair=[a, b])
    comp: dict = {}
    for a, b, c in itertools.product(objs, objs, objs):
        tab = {}
        for i, x in enumerate(_basis_vectors(lc.table(a, b).dim())):
            for j, y in enumerate(_basis_vectors(lc.table(b, c).dim())):
                tab[(i, j)] = lc.compose(a, b, c, x, y)
        comp[(a, b, c)] = tab

    def mult(a, b, c, x, y):
        out = [0] * lc.table(a, c).dim()
        for (i, j), v in comp[(a, b, c)].items():
            s = field.mul(x[i], y[j])
            if s:
                out = [u ^ field.mul(s, t) for u, t in zip(out, v)]
        return out

    for a in objs:
        u = lc.unit(a)
        if not any(u):
            rep.add("unit", f"[w] is zero in L(e{a},e{a})", object=a)
        for b in objs:
            for y in _basis_vectors(lc.table(a, b).dim()):
                if mult(a, a, b, u, y) != y:
                    rep.add("unit", f"[w] is not a left unit on L(e{a},e{b})", pair=[a, b])
                    break
            for x in _basis_vectors(lc.table(b, a).dim()):
                if mult(b, a, a, x, u) != x:
                    rep.add("unit", f"[w] is not a right unit on L(e{b},e{a})", pair=[b, a])
                    break
    # the formal identity of O is checked on its own, apart from [w]
    for a, b in itertools.product(objs, objs):
        ea, eb = cat.obj(1, a), cat.obj(2, b)
        for n in cat.hom(1, ea, 2, eb).names:
            v = {n: 1}
            left = preaug_compose(cat, [(1, ea), (1, ea), (2, eb)], [1, v])
            right = preaug_compose(cat, [(1, ea), (2, eb), (2, eb)], [v, 1])
            if left != v or right != v:
                rep.add("formal_unit", f"the formal identity does not act trivially on {n} in O((1,e{a}),(2,e{b}))",
                        pair=[a, b])
                break
    for a, b, c, d in itertools.product(objs, objs, objs, objs):
        for x in _basis_vectors(lc.table(a, b).dim()):
            for y in _basis_vectors(lc.table(b, c).dim()):
                xy = mult(a, b, c, x, y)
                for z in _basis_vectors(lc.table(c, d).dim()):
                    if mult(a, c, d, xy, z) != mult(a, b, d, x, mult(b, c, d, y, z)):
                        rep.add("associativity", f"(xy)z != x(yz) for objects e{a},e{b},e{c},e{d}",
                                objects=[a, b, c, d])
    tables = {}
    for (a, b, c), tab in comp.items():
        i0 = _degree_indices(lc.table(a, b), 0)
        j0 = _degree_indices(lc.table(b, c), 0)
        k0 = _degree_indices(lc.table(a, c), 0)
        entries = []
        for i in i0:
            row = []
            for j in j0:
                v = tab[(i, j)]
                row.append([field.format(v[k]) for k in k0])
            entries.append(row)
        tables[f"e{a},e{b},e{c}"] = entries
    rep.tables["objects"] = [e.to_dict() for e in cat.objects]
    rep.tables["h0_dims"] = {f"e{a},e{b}": lc.table(a, b).dim(0) for a, b in itertools.product(objs, objs)}
    rep.tables["dims"] = {
        f"e{a},e{b}": {str(d): k for d, k in lc.table(a, b).dims.items()} for a, b in itertools.product(objs, objs)
    }
    rep.tables["composition"] = tables
    rep.tables["units"] = {f"e{a}": [field.format(x) for x in lc.unit(a)] for a in objs}
    kinds = {f.kind for f in rep.findings}
    rep.tables["unit_checks"] = {
        "formal_identity": "fail" if "formal_unit" in kinds else "pass",
        "w_class": "fail" if "unit" in kinds else "pass",
    }
    return rep


# ---------------------------------------------------------------- consistent


def _strict_step(td: TwistedDifferential, word: tuple[str, ...]) -> bool:
    chords = td.dga.chords
    return all(chords[x].c == l + 1 and chords[x].r == l + 2 for l, x in enumerate(word))


class ConsistentCategory:
    """A-infinity category of a consistent sequence: objects are the
    augmentations of A^(1), homs are C^v_{12} of A^(2), and m_k comes from
    A^(k+1) through the pattern relabelings."""

    def __init__(self, system: DGASystem, cat: PreAugCategory | None = None):
        if system.mode != "consistent":
            raise CategoryError("the consistent construction needs a consistent-mode system")
        self.sys = system
        self.cat = cat or PreAugCategory(system)
        self.field = system.field

    @property
    def objects(self):
        return self.cat.objects

    @property
    def max_arity(self) -> int:
        return self.sys.copies - 1

    def hom(self, a: int, b: int) -> HomComplex:
        return self.cat.hom(1, self.cat.obj(1, a), 2, self.cat.obj(2, b))

    def td(self, chain: Sequence[int]) -> TwistedDifferential:
        copies = tuple(range(1, len(chain) + 1))
        return self.cat.td(copies, [self.cat.obj(i, e) for i, e in zip(copies, chain)])

    def m(self, chain: Sequence[int], vecs: Sequence[CVect]) -> CVect:
        k = len(vecs)
        if k + 1 > self.sys.copies:
            raise InsufficientCopies(f"m_{k} needs {k + 1} copies, the system has {self.sys.copies}")
        moved = [{relabel_name(n, {1: l + 1, 2: l + 2}): c for n, c in v.items()} for l, v in enumerate(vecs)]
        out = mk_multilinear(self.td(chain), moved)
        return {relabel_name(n, {1: 1, k + 1: 2}): c for n, c in out.items()}

    def check(self, kmax: int) -> Report:
        """A-infinity relations for every chain of objects and basis tuple of
        length <= kmax (capped at copies - 1)."""
        rep = Report("consistent")
        keff = min(kmax, self.max_arity)
        rep.tables["kmax"] = kmax
        rep.tables["kmax_checked"] = keff
        if keff < kmax:
            rep.tables["note"] = f"operations beyond m_{keff} need more than {self.sys.copies} copies"
        mul = self.field._mul
        objs = range(len(self.objects))
        acc: dict = {}
        to12 = {}

        def rl(name, c, r):
            key = (name, c, r)
            got = to12.get(key)
            if got is None:
                got = relabel_name(name, {c: 1, r: 2}) if c != r else relabel_name(name, {c: 1})
                to12[key] = got
            return got

        for L in range(1, keff + 1):
            for outer in itertools.product(objs, repeat=L + 1):
                td = self.td(outer)
                chords = td.dga.chords
                for q in sorted(ch.name for ch in td.dga.chords_between(1, L + 1)):
                    qn = rl(q, 1, L + 1)
                    for W, a in td.image(q).items():
                        if len(W) != L or not _strict_step(td, W):
                            continue
                        Wn = [rl(x, p + 1, p + 2) for p, x in enumerate(W)]
                        for p in range(L):
                            for s in range(1, keff - L + 2):
                                y = relabel_name(W[p], {p + 1: 1, p + 2: s + 1})
                                for mid in itertools.product(objs, repeat=s - 1):
                                    ichain = (outer[p],) + mid + (outer[p + 1],)
                                    itd = self.td(ichain)
                                    for V, b in itd.image(y).items():
                                        if len(V) != s or not _strict_step(itd, V):
                                            continue
                                        Vn = [rl(x, k + 1, k + 2) for k, x in enumerate(V)]
                                        chain = outer[: p + 1] + mid + outer[p + 1:]
                                        key = (chain, tuple(Wn[:p] + Vn + Wn[p + 1:]), qn)
                                        acc[key] = acc.get(key, 0) ^ mul[a][b]
        bad = sorted(k for k, v in acc.items() if v)
        for chain, t, q in bad[:20]:
            rep.add("relation", f"A-infinity relation fails on objects {list(chain)} inputs ({', '.join(t)}) at {q}",
                    objects=list(chain), tuple=list(t), output=q)
        rep.tables["relations_checked"] = len(acc)
        return rep

    def h0_tables(self) -> dict:
        """Cohomology-level m2 on every triple, in the bases of :meth:`hom`."""
        objs = range(len(self.objects))
        out = {}
        for a, b, c in itertools.product(objs, objs, objs):
            ta, tb, tc = self.hom(a, b).homology(), self.hom(b, c).homology(), self.hom(a, c).homology()
            tab = {}
            for i, (_, x) in enumerate(ta.basis()):
                for j, (_, y) in enumerate(tb.basis()):
                    tab[(i, j)] = tc.coords(self.m((a, b, c), [x, y]))
            out[(a, b, c)] = tab
        return out


def consistent_aug_cat(system: DGASystem, kmax: int = 4) -> tuple[ConsistentCategory, Report]:
    cc = ConsistentCategory(system)
    rep = cc.check(kmax)
    objs = range(len(cc.objects))
    rep.tables["objects"] = [e.to_dict() for e in cc.objects]
    rep.tables["dims"] = {
        f"e{a},e{b}": {str(d): n for d, n in cc.hom(a, b).homology().dims.items()} for a in objs for b in objs
    }
    return cc, rep


def compare_constructions(system: DGASystem) -> Report:
    """Graded hom dimensions and degree-0 composition tables of the
    consistent category against the localisation of O."""
    rep = Report("compare")
    cat = PreAugCategory(system)
    try:
        cc = ConsistentCategory(system, cat)
        lc = LocalizedCategory(cat)
    except CategoryError as exc:
        rep.add("construction", str(exc))
        return rep
    objs = range(len(cat.objects))
    field = cat.field
    for a in objs:
        try:
            wc = w_class(cat, a, 1)
        except CategoryError as exc:
            rep.add("minima", str(exc), object=a)
            continue
        if not wc.is_cocycle:
            rep.add("minima", f"m1(w) != 0 for e{a}: {sorted(wc.m1)}", object=a)
    if not rep.ok:
        return rep
    try:
        for a, b in itertools.product(objs, objs):
            dc = cc.hom(a, b).homology().dims
            dl = lc.loc(a, b).dims
            if dc != dl:
                rep.add("dims", f"H*(e{a},e{b}): consistent {dc} vs localised {dl}", pair=[a, b])
        consistent = cc.h0_tables()
        agree = 0
        for a, b, c in itertools.product(objs, objs, objs):
            i0 = _degree_indices(lc.table(a, b), 0)
            j0 = _degree_indices(lc.table(b, c), 0)
            k0 = _degree_indices(lc.table(a, c), 0)
            ok = True
            for i in i0:
                for j in j0:
                    x = _basis_vectors(lc.table(a, b).dim())[i]
                    y = _basis_vectors(lc.table(b, c).dim())[j]
                    loc = lc.compose(a, b, c, x, y)
                    con = consistent[(a, b, c)][(i, j)]
                    if [loc[k] for k in k0] != [con[k] for k in k0]:
                        ok = False
                        rep.add("h0_table", f"degree-0 products disagree on e{a},e{b},e{c} at basis ({i},{j})",
                                objects=[a, b, c])
            agree += ok
    except CategoryError as exc:
        rep.add("localisation", str(exc))
        return rep
    rep.tables["objects"] = len(cat.objects)
    rep.tables["pairs"] = len(cat.objects) ** 2
    rep.tables["triples_agreeing"] = agree
    rep.tables["dims"] = {
        f"e{a},e{b}": {str(d): n for d, n in cc.hom(a, b).homology().dims.items()} for a in objs for b in objs
    }
    return rep


# ---------------------------------------------------------------- families


def _pullback(eps: Augmentation, f: DGAMorphism) -> Augmentation:
    chords = {n: evaluate(p, eps) for n, p in f.images.items()}
    comps = set(f.source.group_spec.ids())
    groups = {k: v for k, v in eps.group_values.items() if k[0] in comps}
    return Augmentation(eps.field, chords, groups)


def check_family(family: Mapping[tuple[int, ...], DGAMorphism], source: DGASystem, target: DGASystem) -> Report:
    """Chain maps, link compatibility, and commuting squares with the
    restriction maps for nested index sets."""
    rep = Report("family")
    keys = sorted(family, key=lambda P: (len(P), P))
    for P in keys:
        f = family[P]
        if f.source != source.dga(P):
            rep.add("family", f"map for {{{subset_key(P)}}} does not start at the source system's DGA", subset=list(P))
            continue
        if f.target != target.dga(P):
            rep.add("family", f"map for {{{subset_key(P)}}} does not end at the target system's DGA", subset=list(P))
            continue
        cm = verify_chain_map(f)
        for x in cm.findings:
            rep.add(x.kind, f"{{{subset_key(P)}}}: {x.message}", subset=list(P))
        for n, img in f.images.items():
            ch = f.source.chords[n]
            for w, _ in img:
                if not is_composable(f.target, w, ch.c, ch.r):
                    rep.add("link_compatibility", f"{{{subset_key(P)}}}: image of {n} has a word not composable "
                            f"from {ch.c} to {ch.r}", subset=list(P), generator=n)
    for Q in keys:
        for P in keys:
            if len(P) >= len(Q) or not set(P) < set(Q):
                continue
            fP, fQ = family[P], family[Q]
            inc_a = source.inclusion(P, Q)
            inc_b = target.inclusion(P, Q)
            rest = tuple(sorted(set(Q) - set(P)))
            tq = target.dga(Q)
            quot = quotient_partition(tq, [set(P), set(rest)])
            keep = set(quot.chords)
            for n in fP.source.chords:
                big = fQ.image(inc_a[n])
                lhs = {w: c for w, c in big if all(q in keep for q in w[1::2])}
                rhs = {}
                for w, c in fP.image(n):
                    mapped = tuple(
                        inc_b[x] if k % 2 else type(x)(tuple((inc_b[cc], xs) for cc, xs in x.syllables))
                        for k, x in enumerate(w)
                    )
                    rhs[mapped] = rhs.get(mapped, 0) ^ c
                rhs = {w: c for w, c in rhs.items() if c}
                if lhs != rhs:
                    rep.add("square", f"restriction square {{{subset_key(P)}}} in {{{subset_key(Q)}}} fails on {n}",
                            small=list(P), big=list(Q), generator=n)
                    break
    return rep


class AinfFunctor:
    """The functor O_target -> O_source induced by a morphism family."""

    def __init__(self, family, source: DGASystem, target: DGASystem,
                 source_cat: PreAugCategory | None = None, target_cat: PreAugCategory | None = None):
        self.family = dict(family)
        self.src = source
        self.tgt = target
        self.cat_a = source_cat or PreAugCategory(source)
        self.cat_b = target_cat or PreAugCategory(target)
        self.field = source.field
        self._twisted: dict = {}
        self._pulled: dict = {}

    def pull(self, i: int, eps: Augmentation) -> Augmentation:
        key = (i, eps)
        got = self._pulled.get(key)
        if got is None:
            got = _pullback(eps, self.family[(i,)])
            self._pulled[key] = got
        return got

    def _f_eps(self, copies: tuple[int, ...], parts: tuple[Augmentation, ...]) -> dict:
        key = (copies, parts)
        got = self._twisted.get(key)
        if got is None:
            f = self.family[copies]
            eps = diagonal_aug(self.tgt, copies, parts)
            got = {}
            for n, img in f.images.items():
                sub = substitute(img, eps)
                const = evaluate(img, eps)
                if const:
                    sub[()] = sub.get((), 0) ^ const
                    if not sub[()]:
                        del sub[()]
                if () in sub:
                    raise CategoryError(f"twisted family map has a constant term on {n}")
                got[n] = sub
            self._twisted[key] = got
        return got

    def F(self, copies: Sequence[int], parts: Sequence[Augmentation], vecs: Sequence[CVect]) -> CVect:
        """F_k on a strictly increasing chain; ``parts`` are target-side
        augmentations and ``vecs[l]`` cochains on B^{c_l, c_l+1}."""
        copies = tuple(copies)
        P = copies
        fe = self._f_eps(P, tuple(parts))
        mul = self.field._mul
        moved = []
        for l, v in enumerate(vecs):
            inc = self.tgt.inclusion((copies[l], copies[l + 1]), P)
            moved.append({inc[n]: c for n, c in v.items()})
        a_dga = self.src.dga(P)
        corner = [ch.name for ch in a_dga.chords_between(copies[0], copies[-1])]
        out: dict[str, int] = {}

        def rec(pos, names, coef):
            if pos == len(moved):
                for a in corner:
                    c = fe[a].get(names, 0)
                    if c:
                        out[a] = out.get(a, 0) ^ mul[coef][c]
                return
            for x, c in moved[pos].items():
                rec(pos + 1, names + (x,), mul[coef][c])

        rec(0, (), 1)
        back = {v: k for k, v in self.src.inclusion((copies[0], copies[-1]), P).items()}
        return {back[n]: c for n, c in out.items() if c}


def _compositions(n: int):
    if n == 0:
        yield ()
        return
    for first in range(1, n + 1):
        for rest in _compositions(n - first):
            yield (first,) + rest


def _multilinear_basis(vecs_lists):
    return itertools.product(*vecs_lists)


def functor_from_family(family, source: DGASystem, target: DGASystem, kmax: int = 2) -> Report:
    """Verify the family, then the induced functor: object bijection,
    functor equations up to arity ``kmax``, F1 quasi-isomorphisms and
    preservation of the unit classes."""
    rep = Report("functor")
    fam_rep = check_family(family, source, target)
    rep.extend(fam_rep)
    if not fam_rep.ok:
        return rep
    M = min(source.copies, target.copies)
    needed = [P for k in range(1, M + 1) for P in itertools.combinations(range(1, M + 1), k)]
    missing = [P for P in needed if P not in family]
    if missing:
        rep.add("family", f"family has no map for {{{subset_key(missing[0])}}}")
        return rep
    F = AinfFunctor(family, source, target)
    field = source.field
    mul = field._mul
    cat_a, cat_b = F.cat_a, F.cat_b
    # objects
    for i in range(1, M + 1):
        b_augs = cat_b.augs(i)
        a_augs = cat_a.augs(i)
        pulled = [F.pull(i, e) for e in b_augs]
        if len(set(pulled)) != len(pulled) or set(pulled) != set(a_augs):
            rep.add("objects", f"eps -> eps o f on copy {i} is not a bijection onto the source augmentations",
                    copy=i, target_count=len(b_augs), source_count=len(a_augs))
    rep.tables["objects"] = len(cat_b.objects)
    if not rep.ok:
        return rep
    nb = range(len(cat_b.objects))

    def B(i, k):
        return cat_b.obj(i, k)

    # F1 quasi-isomorphisms
    pairs = 0
    for i, j in itertools.combinations(range(1, M + 1), 2):
        for x, y in itertools.product(nb, nb):
            hb = cat_b.hom(i, B(i, x), j, B(j, y))
            ha = cat_a.hom(i, F.pull(i, B(i, x)), j, F.pull(j, B(j, y)))
            tb, ta = hb.homology(), ha.homology()
            parts = (B(i, x), B(j, y))
            try:
                cols = [ta.coords(F.F((i, j), parts, [rep_])) for _, rep_ in tb.basis()]
            except AinfError as exc:
                rep.add("quasi_iso", f"F1 does not send cocycles to cocycles on ({i},e{x}) -> ({j},e{y}): {exc}")
                continue
            if not _columns_iso(field, cols, ta.dim()):
                rep.add("quasi_iso", f"H F1 is not an isomorphism on ({i},e{x}) -> ({j},e{y})", copies=[i, j])
            pairs += 1
    rep.tables["quasi_iso_pairs"] = pairs
    # unit classes
    for i in range(1, M):
        for x in nb:
            wb = {n: 1 for n in target.minima_names(i)}
            wa = {n: 1 for n in source.minima_names(i)}
            ha = cat_a.hom(i, F.pull(i, B(i, x)), i + 1, F.pull(i + 1, B(i + 1, x)))
            img = F.F((i, i + 1), (B(i, x), B(i + 1, x)), [wb])
            try:
                same = ha.homology().coords(img) == ha.homology().coords(wa)
            except AinfError:
                same = False
            if not same:
                rep.add("unit", f"H F([w']) != [w] on copies ({i},{i + 1}) for e{x}", copy=i, object=x)
    # functor equations on strictly increasing chains
    checked = 0
    for n in range(1, min(kmax, M - 1) + 1):
        for copies in itertools.combinations(range(1, M + 1), n + 1):
            for objs in itertools.product(nb, repeat=n + 1):
                parts_b = [B(c, o) for c, o in zip(copies, objs)]
                parts_a = [F.pull(c, e) for c, e in zip(copies, parts_b)]
                bases = []
                for l in range(n):
                    hb = cat_b.hom(copies[l], parts_b[l], copies[l + 1], parts_b[l + 1])
                    bases.append(hb.names)
                for tup in itertools.product(*bases):
                    vecs = [{x: 1} for x in tup]
                    lhs: dict = {}
                    for r in range(n):
                        for s in range(1, n - r + 1):
                            inner = cat_b.m(copies[r:r + s + 1], parts_b[r:r + s + 1], vecs[r:r + s])
                            if not inner:
                                continue
                            oc = copies[: r + 1] + copies[r + s:]
                            op = parts_b[: r + 1] + parts_b[r + s:]
                            _add_into(lhs, F.F(oc, op, vecs[:r] + [inner] + vecs[r + s:]), mul)
                    rhs: dict = {}
                    for comp in _compositions(n):
                        pos, imgs, ends = 0, [], [0]
                        for size in comp:
                            imgs.append(F.F(copies[pos:pos + size + 1], parts_b[pos:pos + size + 1], vecs[pos:pos + size]))
                            pos += size
                            ends.append(pos)
                        if any(not v for v in imgs):
                            continue
                        oc = [copies[e] for e in ends]
                        op = [parts_a[e] for e in ends]
                        _add_into(rhs, cat_a.m(oc, op, imgs), mul)
                    if lhs != rhs:
                        rep.add("functor_equation", f"functor equation fails in arity {n} on copies {list(copies)} "
                                f"objects {list(objs)} inputs {list(tup)}", arity=n)
                    checked += 1
    rep.tables["equations_checked"] = checked
    rep.tables["kmax"] = kmax
    return rep
