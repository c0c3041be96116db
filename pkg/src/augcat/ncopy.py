"""The m-copy construction: from a single-copy DGA to a consistent sequence.

Each base chord q becomes a matrix Q of chords q[i,j].  Each free group
generator g gets a strictly upper-triangular matrix of degree-0 chords
x_g[i,j] (the maxima), and each arc l of the base point decomposition a
strictly upper-triangular matrix of degree -1 chords y_l[i,j] (the minima).
With Phi the algebra map q -> Q, g -> D_g X_g, g^{-1} -> X_g^{-1} D_g^{-1}
(D_g the diagonal of copies of g), the differential is

    d Q   = Phi(d q) + Y_a Q + Q Y_b          (q runs from arc a to arc b)
    d X_g = D_g^{-1} Y_s D_g X_g + X_g Y_e     (g runs from arc s to arc e)
    d Y_l = Y_l^2

which squares to zero whenever consecutive letters of each word of d q
meet on the same arc.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .algebra import IDENTITY, FreeProductSpec, GroupElement, Poly, chord_word
from .dga import ChordGen, SemiFreeDGA
from .system import DGASystem

__all__ = ["NCopyError", "n_copy", "n_copy_system", "base_names"]


class NCopyError(ValueError):
    pass


Matrix = list  # list of rows of Poly


def _zero(field, m: int) -> Matrix:
    return [[Poly(field) for _ in range(m)] for _ in range(m)]


def _ident(field, m: int) -> Matrix:
    z = _zero(field, m)
    for i in range(m):
        z[i][i] = Poly.one(field)
    return z


def _mul(a: Matrix, b: Matrix) -> Matrix:
    m = len(a)
    field = a[0][0].field
    out = _zero(field, m)
    for i in range(m):
        for j in range(m):
            acc = Poly(field)
            for k in range(m):
                if a[i][k] and b[k][j]:
                    acc = acc + a[i][k] * b[k][j]
            out[i][j] = acc
    return out


def _add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def base_names(base: SemiFreeDGA, arcs: int) -> tuple[dict, dict]:
    gens = base.group_spec.generators()
    xs = {g: ("x" if len(gens) == 1 else f"x{k + 1}") for k, g in enumerate(gens)}
    ys = {l: ("y" if arcs == 1 else f"y{l}") for l in range(1, arcs + 1)}
    return xs, ys


def n_copy(
    base: SemiFreeDGA,
    m: int,
    chord_arcs: Mapping[str, tuple[int, int]] | None = None,
    letter_arcs: Mapping[tuple[str, int], tuple[int, int]] | None = None,
    arcs: int = 1,
) -> SemiFreeDGA:
    """The m-copy DGA on labels 1..m.

    ``chord_arcs`` gives (start arc, end arc) per base chord and
    ``letter_arcs`` the same per positive group letter; both default to the
    single arc 1.
    """
    if base.labels != (1,):
        raise NCopyError("base DGA must have the single label 1")
    field = base.field
    chord_arcs = dict(chord_arcs or {})
    letter_arcs = dict(letter_arcs or {})
    for n in base.chords:
        chord_arcs.setdefault(n, (1, 1))
    for g in base.group_spec.generators():
        letter_arcs.setdefault(g, (1, 1))
    xs, ys = base_names(base, arcs)
    clash = (set(xs.values()) | set(ys.values())) & set(base.chords)
    if clash:
        raise NCopyError(f"base chord names {sorted(clash)} clash with the maxima/minima names")

    def name(base_name: str, i: int, j: int) -> str:
        return f"{base_name}[{i},{j}]"

    def comp(c: str, i: int) -> str:
        return f"{c}[{i}]"

    def chord(n: str, i: int, j: int) -> Poly:
        return Poly.chord(field, name(n, i, j))

    rng = range(1, m + 1)
    chords: list[ChordGen] = []
    for n, ch in base.chords.items():
        for i in rng:
            for j in rng:
                chords.append(ChordGen(name(n, i, j), ch.degree, i, j))
    for g, xn in xs.items():
        for i in rng:
            for j in rng:
                if i < j:
                    chords.append(ChordGen(name(xn, i, j), 0, i, j))
    for l, yn in ys.items():
        for i in rng:
            for j in rng:
                if i < j:
                    chords.append(ChordGen(name(yn, i, j), -1, i, j))

    def mat(n: str, strict: bool = False) -> Matrix:
        z = _zero(field, m)
        for i in rng:
            for j in rng:
                if not strict or i < j:
                    z[i - 1][j - 1] = chord(n, i, j)
        return z

    Y = {l: mat(yn, strict=True) for l, yn in ys.items()}
    N = {g: mat(xn, strict=True) for g, xn in xs.items()}
    X = {g: _add(_ident(field, m), N[g]) for g in xs}
    Xinv = {}
    for g in xs:
        acc, power = _ident(field, m), _ident(field, m)
        for _ in range(m - 1):
            power = _mul(power, N[g])
            acc = _add(acc, power)
        Xinv[g] = acc

    def diag(c: str, k: int, sign: int) -> Matrix:
        z = _zero(field, m)
        for i in rng:
            z[i - 1][i - 1] = Poly.group(field, GroupElement.generator(comp(c, i), k if sign > 0 else -k))
        return z

    def phi_letter(c: str, x: int) -> Matrix:
        g = (c, abs(x))
        if x > 0:
            return _mul(diag(c, abs(x), 1), X[g])
        return _mul(Xinv[g], diag(c, abs(x), -1))

    def phi_word(w) -> Matrix:
        acc = _ident(field, m)
        for k, f in enumerate(w):
            if k % 2:
                acc = _mul(acc, mat(f))
            else:
                for c, x in f.letters():
                    acc = _mul(acc, phi_letter(c, x))
        return acc

    diff: dict[str, Poly] = {}
    for n in base.chords:
        total = _zero(field, m)
        for w, c in base.d(n):
            total = _add(total, [[p.scale(c) for p in row] for row in phi_word(w)])
        a, b = chord_arcs[n]
        total = _add(total, _add(_mul(Y[a], mat(n)), _mul(mat(n), Y[b])))
        for i in rng:
            for j in rng:
                diff[name(n, i, j)] = total[i - 1][j - 1]
    for g, xn in xs.items():
        s, e = letter_arcs[g]
        c, k = g
        dx = _add(_mul(_mul(_mul(diag(c, k, -1), Y[s]), diag(c, k, 1)), X[g]), _mul(X[g], Y[e]))
        for i in rng:
            for j in rng:
                if i < j:
                    diff[name(xn, i, j)] = dx[i - 1][j - 1]
                elif dx[i - 1][j - 1]:
                    raise NCopyError("maxima differential is not upper-triangular")
    for l, yn in ys.items():
        dy = _mul(Y[l], Y[l])
        for i in rng:
            for j in rng:
                if i < j:
                    diff[name(yn, i, j)] = dy[i - 1][j - 1]

    spec = FreeProductSpec(tuple((comp(c, i), r) for i in rng for c, r in base.group_spec.components))
    comp_labels = {comp(c, i): i for i in rng for c in base.group_spec.ids()}
    return SemiFreeDGA(field, list(rng), spec, comp_labels, chords, diff, base.grading)


def n_copy_system(
    base: SemiFreeDGA,
    copies: int,
    chord_arcs: Mapping[str, tuple[int, int]] | None = None,
    letter_arcs: Mapping[tuple[str, int], tuple[int, int]] | None = None,
    arcs: int = 1,
    name: str = "",
    minima_arcs: Sequence[int] | None = None,
) -> DGASystem:
    """Consistent system of m-copies for m = 1..copies.  The minima of the
    pair (1,2) are the y-chords of ``minima_arcs`` (default: every arc)."""
    sized = {m: n_copy(base, m, chord_arcs, letter_arcs, arcs) for m in range(1, copies + 1)}
    _, ys = base_names(base, arcs)
    chosen = list(range(1, arcs + 1)) if minima_arcs is None else list(minima_arcs)
    minima = {1: [f"{ys[l]}[1,2]" for l in chosen]} if copies >= 2 else {}
    return DGASystem(base.field, copies, "consistent", sized=sized, minima=minima, grading=base.grading, name=name)
