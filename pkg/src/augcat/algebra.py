"""Exact arithmetic: GF(2^e), free products of free groups, and
noncommutative polynomials over the group algebra.

Field elements are stored as ints holding the coefficient bit-vector in the
polynomial basis (bit ``i`` is the coefficient of ``x**i``).  Bit-strings in
files and reports are written most-significant bit first, so ``"10"`` is
``x`` and ``"111"`` is ``x^2 + x + 1``.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "AlgebraError",
    "Field",
    "Scalar",
    "get_field",
    "field_arith",
    "FreeProductSpec",
    "GroupElement",
    "IDENTITY",
    "group_mul",
    "Word",
    "Poly",
    "poly_add",
    "poly_mul",
    "coeff_of_word",
    "unit_word",
    "chord_word",
    "word_mul",
    "word_chords",
]


class AlgebraError(ValueError):
    """Raised on ill-formed algebraic input (bad modulus, mixed fields, ...)."""


# ---------------------------------------------------------------- GF(2^e)

DEFAULT_MODULI = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0b100011011,
}


def _clmul(a: int, b: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        a <<= 1
        b >>= 1
    return r


def _polymod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def is_irreducible(modulus: int) -> bool:
    """Trial division of a GF(2) polynomial by every polynomial of degree
    1 .. deg-1."""
    deg = modulus.bit_length() - 1
    if deg < 1:
        return False
    for d in range(1, deg):
        for low in range(1 << d):
            if _polymod(modulus, (1 << d) | low) == 0:
                return False
    return True


def parse_bits(text: str) -> int:
    if not isinstance(text, str) or not text or any(ch not in "01" for ch in text):
        raise AlgebraError(f"not a bit-string: {text!r}")
    return int(text, 2)


class Field:
    """GF(2^e) with multiplication and inversion tables."""

    def __init__(self, degree: int = 1, modulus: int | None = None):
        if not isinstance(degree, int) or degree < 1:
            raise AlgebraError(f"extension degree must be a positive integer, got {degree!r}")
        if degree == 1:
            modulus = 0b11
        elif modulus is None:
            if degree not in DEFAULT_MODULI:
                raise AlgebraError(f"no default modulus for degree {degree}; supply one")
            modulus = DEFAULT_MODULI[degree]
        if modulus.bit_length() - 1 != degree:
            raise AlgebraError(
                f"modulus {modulus:b} has degree {modulus.bit_length() - 1}, expected {degree}"
            )
        if not is_irreducible(modulus):
            raise AlgebraError(f"modulus {modulus:b} is reducible over GF(2)")
        self.degree = degree
        self.modulus = modulus
        self.order = 1 << degree
        n = self.order
        self._mul = [[_polymod(_clmul(a, b), modulus) for b in range(n)] for a in range(n)]
        self._inv = [0] * n
        for a in range(1, n):
            for b in range(1, n):
                if self._mul[a][b] == 1:
                    self._inv[a] = b
                    break

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Field)
            and self.degree == other.degree
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.degree, self.modulus))

    def __repr__(self) -> str:
        if self.degree == 1:
            return "GF(2)"
        return f"GF(2^{self.degree}; {self.modulus:b})"

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self._inv[a]

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        r = 1
        for _ in range(n):
            r = self._mul[r][a]
        return r

    def elements(self) -> range:
        return range(self.order)

    def units(self) -> range:
        return range(1, self.order)

    def check(self, a: int) -> int:
        if not isinstance(a, int) or not 0 <= a < self.order:
            raise AlgebraError(f"{a!r} is not an element of {self!r}")
        return a

    def parse(self, text: str) -> int:
        value = parse_bits(text)
        if len(text) > self.degree and value >= self.order:
            raise AlgebraError(f"bit-string {text!r} is too long for {self!r}")
        return value

    def format(self, a: int) -> str:
        return format(a, f"0{self.degree}b")

    def scalar(self, a: int | str) -> "Scalar":
        if isinstance(a, str):
            a = self.parse(a)
        return Scalar(self, self.check(a))

    def modulus_bits(self) -> str:
        return format(self.modulus, "b")


@functools.lru_cache(maxsize=None)
def get_field(degree: int = 1, modulus: int | None = None) -> Field:
    return Field(degree, modulus)


@dataclass(frozen=True)
class Scalar:
    field: Field
    bits: int

    def _same(self, other: "Scalar") -> None:
        if not isinstance(other, Scalar):
            raise TypeError(f"expected Scalar, got {type(other).__name__}")
        if other.field != self.field:
            raise AlgebraError(f"mixed fields: {self.field!r} and {other.field!r}")

    def __add__(self, other: "Scalar") -> "Scalar":
        self._same(other)
        return Scalar(self.field, self.bits ^ other.bits)

    __sub__ = __add__

    def __mul__(self, other: "Scalar") -> "Scalar":
        self._same(other)
        return Scalar(self.field, self.field.mul(self.bits, other.bits))

    def inverse(self) -> "Scalar":
        return Scalar(self.field, self.field.inv(self.bits))

    def __bool__(self) -> bool:
        return self.bits != 0

    def __str__(self) -> str:
        return self.field.format(self.bits)


def field_arith(a: Scalar, b: Scalar | None, op: str) -> Scalar:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    raise AlgebraError(f"unknown field operation {op!r}")


# ---------------------------------------------------------------- groups


@dataclass(frozen=True)
class FreeProductSpec:
    """Free product of free groups; ``components`` is a tuple of
    ``(component_id, rank)``."""

    components: tuple[tuple[str, int], ...]

    def __post_init__(self):
        ids = [c for c, _ in self.components]
        if len(set(ids)) != len(ids):
            raise AlgebraError(f"duplicate component ids in {ids}")
        for cid, rank in self.components:
            if not isinstance(rank, int) or rank < 0:
                raise AlgebraError(f"component {cid!r} has invalid rank {rank!r}")

    def rank(self, component: str) -> int:
        for cid, r in self.components:
            if cid == component:
                return r
        raise AlgebraError(f"unknown group component {component!r}")

    def ids(self) -> list[str]:
        return [c for c, _ in self.components]

    def validate(self, g: "GroupElement") -> None:
        for comp, letters in g.syllables:
            rank = self.rank(comp)
            for x in letters:
                if x == 0 or abs(x) > rank:
                    raise AlgebraError(f"letter {x} out of range for component {comp!r} (rank {rank})")

    def generators(self) -> list[tuple[str, int]]:
        return [(cid, i) for cid, r in self.components for i in range(1, r + 1)]

    def restrict(self, keep: Iterable[str]) -> "FreeProductSpec":
        keep = set(keep)
        return FreeProductSpec(tuple(c for c in self.components if c[0] in keep))


def _reduce_letters(letters: Sequence[tuple[str, int]], reverse: bool = False) -> list[tuple[str, int]]:
    # free reduction via a stack; ``reverse`` scans right-to-left
    seq = reversed(letters) if reverse else iter(letters)
    stack: list[tuple[str, int]] = []
    for comp, x in seq:
        if stack and stack[-1][0] == comp and stack[-1][1] == -x:
            stack.pop()
        else:
            stack.append((comp, x))
    if reverse:
        stack.reverse()
    return stack


def _syllabify(letters: Sequence[tuple[str, int]]) -> tuple[tuple[str, tuple[int, ...]], ...]:
    out: list[tuple[str, list[int]]] = []
    for comp, x in letters:
        if out and out[-1][0] == comp:
            out[-1][1].append(x)
        else:
            out.append((comp, [x]))
    return tuple((c, tuple(xs)) for c, xs in out)


@dataclass(frozen=True)
class GroupElement:
    """Reduced element of a free product of free groups.

    Letters are signed generator indices (``-2`` is the inverse of the second
    generator of that component).
    """

    syllables: tuple[tuple[str, tuple[int, ...]], ...] = ()

    @classmethod
    def from_letters(cls, letters: Iterable[tuple[str, int]]) -> "GroupElement":
        return cls(_syllabify(_reduce_letters(list(letters))))

    @classmethod
    def generator(cls, component: str, index: int) -> "GroupElement":
        return cls(((component, (index,)),))

    def letters(self) -> list[tuple[str, int]]:
        return [(c, x) for c, xs in self.syllables for x in xs]

    def is_identity(self) -> bool:
        return not self.syllables

    def is_reduced(self) -> bool:
        for k, (comp, xs) in enumerate(self.syllables):
            if not xs:
                return False
            if k and self.syllables[k - 1][0] == comp:
                return False
            if any(xs[i] == -xs[i + 1] for i in range(len(xs) - 1)):
                return False
        return True

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if not other.syllables:
            return self
        if not self.syllables:
            return other
        return GroupElement.from_letters(self.letters() + other.letters())

    def inverse(self) -> "GroupElement":
        return GroupElement(
            tuple((c, tuple(-x for x in reversed(xs))) for c, xs in reversed(self.syllables))
        )

    def components(self) -> set[str]:
        return {c for c, _ in self.syllables}

    def __str__(self) -> str:
        if not self.syllables:
            return "1"
        parts = []
        for comp, xs in self.syllables:
            parts.append(comp + "(" + ",".join(str(x) for x in xs) + ")")
        return "*".join(parts)


IDENTITY = GroupElement()


def group_mul(g: GroupElement, h: GroupElement, spec: FreeProductSpec | None = None) -> GroupElement:
    if spec is not None:
        spec.validate(g)
        spec.validate(h)
    return g * h


# ---------------------------------------------------------------- words

# A word is the tuple (g0, q1, g1, ..., qm, gm): chord names at odd
# positions, GroupElements (identity stored explicitly) at even positions.
Word = tuple


def unit_word() -> Word:
    return (IDENTITY,)


def chord_word(*names: str) -> Word:
    w: list = [IDENTITY]
    for n in names:
        w.extend((n, IDENTITY))
    return tuple(w)


def group_word(g: GroupElement) -> Word:
    return (g,)


def word_mul(u: Word, v: Word) -> Word:
    return u[:-1] + (u[-1] * v[0],) + v[1:]


def word_chords(w: Word) -> tuple[str, ...]:
    return w[1::2]


def word_groups(w: Word) -> tuple[GroupElement, ...]:
    return w[0::2]


def word_length(w: Word) -> int:
    return len(w) // 2


def word_str(w: Word) -> str:
    parts = []
    for i, f in enumerate(w):
        if i % 2:
            parts.append(f)
        elif not f.is_identity():
            parts.append(str(f))
    return " ".join(parts) if parts else "1"


# ---------------------------------------------------------------- polys


class Poly:
    """Finite sum of words with nonzero field coefficients."""

    __slots__ = ("field", "terms")

    def __init__(self, field: Field, terms: Mapping[Word, int] | Iterable[tuple[Word, int]] = ()):
        self.field = field
        acc: dict[Word, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for w, c in items:
            if c:
                acc[w] = acc.get(w, 0) ^ c
        self.terms = {w: c for w, c in acc.items() if c}

    @classmethod
    def zero(cls, field: Field) -> "Poly":
        return cls(field)

    @classmethod
    def one(cls, field: Field) -> "Poly":
        return cls(field, {unit_word(): 1})

    @classmethod
    def chord(cls, field: Field, name: str) -> "Poly":
        return cls(field, {chord_word(name): 1})

    @classmethod
    def group(cls, field: Field, g: GroupElement) -> "Poly":
        return cls(field, {(g,): 1})

    def _check(self, other: "Poly") -> None:
        if not isinstance(other, Poly):
            raise TypeError(f"expected Poly, got {type(other).__name__}")
        if other.field != self.field:
            raise AlgebraError(f"mixed fields: {self.field!r} and {other.field!r}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = out.get(w, 0) ^ c
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return _raw(self.field, out)

    __sub__ = __add__

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        mul = self.field._mul
        out: dict[Word, int] = {}
        for u, a in self.terms.items():
            for v, b in other.terms.items():
                w = word_mul(u, v)
                c = out.get(w, 0) ^ mul[a][b]
                if c:
                    out[w] = c
                else:
                    out.pop(w, None)
        return _raw(self.field, out)

    def scale(self, c: int) -> "Poly":
        if not c:
            return Poly(self.field)
        mul = self.field._mul
        return _raw(self.field, {w: mul[a][c] for w, a in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poly) and self.field == other.field and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[Word, int]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def coeff(self, w: Word) -> int:
        return self.terms.get(w, 0)

    def chords(self) -> set[str]:
        return {q for w in self.terms for q in word_chords(w)}

    def sorted_terms(self) -> list[tuple[Word, int]]:
        return sorted(self.terms.items(), key=lambda t: _word_key(t[0]))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms():
            s = word_str(w)
            parts.append(s if c == 1 else f"[{self.field.format(c)}]{s}")
        return " + ".join(parts)


def _raw(field: Field, terms: dict) -> Poly:
    p = Poly.__new__(Poly)
    p.field = field
    p.terms = terms
    return p


def _word_key(w: Word):
    return (len(w), tuple(f if i % 2 else f.syllables for i, f in enumerate(w)))


def word_sort_key(w: Word):
    return _word_key(w)


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def coeff_of_word(p: Poly, w: Word) -> Scalar:
    return Scalar(p.field, p.coeff(w))
