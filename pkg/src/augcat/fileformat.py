"""Reading and writing system and morphism-family files.

Files are JSON.  The decoder records the offset of every object, key and
array item so that diagnostics carry line, column and key path.  Duplicate
keys and unknown keys are rejected.  ``dump_system`` is canonical:
``parse(dump(parse(text)))`` equals ``parse(text)``.
"""

from __future__ import annotations

import itertools
import json
from json.decoder import WHITESPACE, JSONDecodeError, scanstring
from json.scanner import py_make_scanner
from pathlib import Path
from typing import Any, Mapping, Sequence

from .algebra import AlgebraError, Field, FreeProductSpec, GroupElement, Poly, Word, get_field, parse_bits
from .dga import ChordGen, DGAError, SemiFreeDGA
from .morphism import DGAMorphism, MorphismError, elementary_auto, stabilise, destabilise
from .system import (
    DGASystem,
    SystemError_,
    check_system,
    parse_subset,
    pattern_parts,
    relabel_component,
    relabel_name,
    subset_key,
)

__all__ = [
    "FORMAT_VERSION",
    "FormatError",
    "SemanticError",
    "loads",
    "parse_system",
    "parse_system_text",
    "parse_family",
    "parse_family_text",
    "family_from_doc",
    "system_to_doc",
    "dump_system",
    "dump_json",
]

FORMAT_VERSION = 1


class FormatError(ValueError):
    """Syntax or structure error with a source location."""

    def __init__(self, message: str, source: str = "<string>", line: int | None = None,
                 col: int | None = None, keypath: str = ""):
        self.message = message
        self.source = source
        self.line = line
        self.col = col
        self.keypath = keypath
        super().__init__(str(self))

    def __str__(self) -> str:
        where = self.source
        if self.line is not None:
            where += f":{self.line}:{self.col}"
        if self.keypath:
            where += f": at {self.keypath}"
        return f"{where}: {self.message}"

    def to_dict(self) -> dict:
        return {"source": self.source, "line": self.line, "column": self.col,
                "keypath": self.keypath, "message": self.message}


class SemanticError(ValueError):
    """The file is well-formed but the system fails ``check_system``."""

    def __init__(self, system: DGASystem, report):
        self.system = system
        self.report = report
        first = report.findings[0].message if report.findings else "check failed"
        super().__init__(first)


# ---------------------------------------------------------------- decoding


class Node(dict):
    """JSON object remembering where it and its keys start."""

    pos = 0

    def __init__(self):
        super().__init__()
        self.key_pos: dict[str, int] = {}


class Items(list):
    """JSON array remembering where it and its items start."""

    pos = 0

    def __init__(self):
        super().__init__()
        self.item_pos: list[int] = []


def _skip(s: str, end: int) -> int:
    return WHITESPACE.match(s, end).end()


def _parse_object(s_and_end, strict, scan_once, object_hook, object_pairs_hook, memo=None):
    s, end = s_and_end
    out = Node()
    out.pos = end - 1
    end = _skip(s, end)
    if s[end:end + 1] == "}":
        return out, end + 1
    while True:
        if s[end:end + 1] != '"':
            raise JSONDecodeError("Expecting property name enclosed in double quotes", s, end)
        kpos = end
        key, end = scanstring(s, end + 1, strict)
        if key in out:
            raise JSONDecodeError(f"duplicate key {key!r}", s, kpos)
        end = _skip(s, end)
        if s[end:end + 1] != ":":
            raise JSONDecodeError("Expecting ':' delimiter", s, end)
        end = _skip(s, end + 1)
        try:
            value, end = scan_once(s, end)
        except StopIteration as err:
            raise JSONDecodeError("Expecting value", s, err.value) from None
        out[key] = value
        out.key_pos[key] = kpos
        end = _skip(s, end)
        ch = s[end:end + 1]
        end += 1
        if ch == "}":
            return out, end
        if ch != ",":
            raise JSONDecodeError("Expecting ',' delimiter", s, end - 1)
        end = _skip(s, end)


def _parse_array(s_and_end, scan_once):
    s, end = s_and_end
    out = Items()
    out.pos = end - 1
    end = _skip(s, end)
    if s[end:end + 1] == "]":
        return out, end + 1
    while True:
        try:
            out.item_pos.append(end)
            value, end = scan_once(s, end)
        except StopIteration as err:
            raise JSONDecodeError("Expecting value", s, err.value) from None
        out.append(value)
        end = _skip(s, end)
        ch = s[end:end + 1]
        end += 1
        if ch == "]":
            return out, end
        if ch != ",":
            raise JSONDecodeError("Expecting ',' delimiter", s, end - 1)
        end = _skip(s, end)


def _reject_constant(name: str):
    raise ValueError(f"{name} is not allowed")


class _Decoder(json.JSONDecoder):
    def __init__(self):
        super().__init__(parse_constant=_reject_constant)
        self.parse_object = _parse_object
        self.parse_array = _parse_array
        self.memo = {}
        self.scan_once = py_make_scanner(self)


def loads(text: str, source: str = "<string>") -> Any:
    """Decode JSON keeping positions; syntax errors become FormatError."""
    try:
        return _Decoder().decode(text)
    except JSONDecodeError as exc:
        raise FormatError(exc.msg, source, exc.lineno, exc.colno, "") from None
    except ValueError as exc:
        raise FormatError(str(exc), source) from None


class _Reader:
    """Validation helpers tied to one document."""

    def __init__(self, text: str, source: str):
        self.text = text
        self.source = source

    def where(self, offset: int) -> tuple[int, int]:
        line = self.text.count("\n", 0, offset) + 1
        col = offset - (self.text.rfind("\n", 0, offset) + 1) + 1
        return line, col

    def fail(self, message: str, path: Sequence, node: Any = None, key: Any = None):
        offset = None
        if isinstance(node, Node):
            offset = node.key_pos.get(key, node.pos) if key is not None else node.pos
        elif isinstance(node, Items):
            offset = node.item_pos[key] if isinstance(key, int) and key < len(node.item_pos) else node.pos
        line = col = None
        if offset is not None:
            line, col = self.where(offset)
        raise FormatError(message, self.source, line, col, _path_str(path))

    def obj(self, node: Any, path: Sequence, required: Sequence[str], optional: Sequence[str] = (),
            parent: Any = None, key: Any = None) -> Node:
        if not isinstance(node, dict):
            self.fail(f"expected an object, got {_kind(node)}", path, parent, key)
        allowed = set(required) | set(optional)
        for k in node:
            if k not in allowed:
                self.fail(f"unknown key {k!r}", list(path) + [k], node, k)
        for k in required:
            if k not in node:
                self.fail(f"missing key {k!r}", path, node)
        return node

    def array(self, node: Any, path: Sequence, parent: Any = None, key: Any = None) -> Items:
        if not isinstance(node, list):
            self.fail(f"expected an array, got {_kind(node)}", path, parent, key)
        return node

    def mapping(self, node: Any, path: Sequence, parent: Any = None, key: Any = None) -> Node:
        if not isinstance(node, dict):
            self.fail(f"expected an object, got {_kind(node)}", path, parent, key)
        return node

    def integer(self, node: Any, path: Sequence, parent: Any, key: Any, minimum: int | None = None) -> int:
        if not isinstance(node, int) or isinstance(node, bool):
            self.fail(f"expected an integer, got {_kind(node)}", path, parent, key)
        if minimum is not None and node < minimum:
            self.fail(f"expected an integer >= {minimum}, got {node}", path, parent, key)
        return node

    def string(self, node: Any, path: Sequence, parent: Any, key: Any) -> str:
        if not isinstance(node, str) or not node:
            self.fail(f"expected a nonempty string, got {_kind(node)}", path, parent, key)
        return node


def _kind(x: Any) -> str:
    if isinstance(x, bool):
        return "a boolean"
    if x is None:
        return "null"
    for t, text in ((dict, "an object"), (list, "an array"), (str, "a string"), (int, "an integer"),
                    (float, "a number")):
        if isinstance(x, t):
            return text
    return type(x).__name__


def _path_str(path: Sequence) -> str:
    out = ""
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out


# ---------------------------------------------------------------- polynomials


def _parse_group(rd: _Reader, node: Any, path: list, spec: FreeProductSpec, parent, key) -> GroupElement:
    parts = rd.array(node, path, parent, key)
    letters: list[tuple[str, int]] = []
    for k, part in enumerate(parts):
        pp = path + [k]
        rd.obj(part, pp, ("component", "letters"), parent=parts, key=k)
        comp = rd.string(part["component"], pp + ["component"], part, "component")
        if comp not in spec.ids():
            rd.fail(f"unknown group component {comp!r}", pp + ["component"], part, "component")
        rank = spec.rank(comp)
        xs = rd.array(part["letters"], pp + ["letters"], part, "letters")
        for n, x in enumerate(xs):
            rd.integer(x, pp + ["letters", n], xs, n)
            if x == 0 or abs(x) > rank:
                rd.fail(f"letter {x} out of range for component {comp!r} of rank {rank}", pp + ["letters", n], xs, n)
            letters.append((comp, x))
    return GroupElement.from_letters(letters)


def _parse_term(rd: _Reader, node: Any, path: list, field: Field, declared: Mapping[str, Any],
                spec: FreeProductSpec, parent, key, what: str) -> tuple[Word, int]:
    rd.obj(node, path, ("coef", "word"), parent=parent, key=key)
    coef = _parse_coef(rd, node["coef"], path + ["coef"], field, node, "coef")
    factors = rd.array(node["word"], path + ["word"], node, "word")
    word: list = [GroupElement()]
    for k, fac in enumerate(factors):
        fp = path + ["word", k]
        if not isinstance(fac, dict) or len(fac) != 1 or not ({"chord", "group"} & set(fac)):
            rd.fail("a factor must be {\"chord\": name} or {\"group\": [...]}", fp, factors, k)
        if "chord" in fac:
            name = rd.string(fac["chord"], fp + ["chord"], fac, "chord")
            if name not in declared:
                rd.fail(f"term {key + 1} of {what} uses undeclared generator {name!r}", fp + ["chord"], fac, "chord")
            word.extend([name, GroupElement()])
        else:
            g = _parse_group(rd, fac["group"], fp + ["group"], spec, fac, "group")
            word[-1] = word[-1] * g
    return tuple(word), coef


def _parse_coef(rd: _Reader, node: Any, path: list, field: Field, parent, key) -> int:
    if not isinstance(node, str):
        rd.fail(f"coefficient must be a bit-string, got {_kind(node)}", path, parent, key)
    try:
        value = field.parse(node)
    except AlgebraError as exc:
        rd.fail(str(exc), path, parent, key)
    if value == 0:
        rd.fail("zero coefficient", path, parent, key)
    return value


def _parse_poly(rd: _Reader, node: Any, path: list, field: Field, declared, spec, parent, key, what: str) -> Poly:
    terms = rd.array(node, path, parent, key)
    out: dict[Word, int] = {}
    for k, t in enumerate(terms):
        w, c = _parse_term(rd, t, path + [k], field, declared, spec, terms, k, what)
        if w in out:
            rd.fail(f"term {k + 1} of {what} repeats a word", path + [k], terms, k)
        out[w] = c
    return Poly(field, out)


def _word_factors(w: Word) -> list:
    out: list = []
    for k, f in enumerate(w):
        if k % 2:
            out.append({"chord": f})
        elif not f.is_identity():
            parts: list = []
            for comp, x in f.letters():
                if parts and parts[-1]["component"] == comp:
                    parts[-1]["letters"].append(x)
                else:
                    parts.append({"component": comp, "letters": [x]})
            out.append({"group": parts})
    return out


def _poly_doc(p: Poly) -> list:
    return [{"coef": p.field.format(c), "word": _word_factors(w)} for w, c in p.sorted_terms()]


# ---------------------------------------------------------------- systems


_TOP_REQUIRED = ("field", "mode", "copies", "components", "generators", "differentials")
_TOP_OPTIONAL = ("version", "name", "grading", "minima", "inclusions", "morphisms")


def _parse_field(rd: _Reader, node: Any) -> Field:
    rd.obj(node, ["field"], ("degree",), ("modulus",))
    degree = rd.integer(node["degree"], ["field", "degree"], node, "degree", 1)
    modulus = None
    if "modulus" in node:
        try:
            modulus = parse_bits(node["modulus"])
        except AlgebraError as exc:
            rd.fail(str(exc), ["field", "modulus"], node, "modulus")
    try:
        return get_field(degree, modulus)
    except AlgebraError as exc:
        rd.fail(str(exc), ["field", "modulus" if "modulus" in node else "degree"], node,
                "modulus" if "modulus" in node else "degree")


def _check_version(rd: _Reader, doc: Node) -> None:
    if "version" in doc:
        v = doc["version"]
        if v != FORMAT_VERSION or isinstance(v, bool):
            rd.fail(f"version mismatch: file has {v!r}, this reader understands {FORMAT_VERSION}",
                    ["version"], doc, "version")


def _parse_components(rd: _Reader, node: Any, path: list, parent, key, with_label: bool, labels=None):
    comps = rd.array(node, path, parent, key)
    out = []
    seen = set()
    for k, c in enumerate(comps):
        pp = path + [k]
        rd.obj(c, pp, ("id", "pi1_rank") + (("label",) if with_label else ()), parent=comps, key=k)
        cid = rd.string(c["id"], pp + ["id"], c, "id")
        if cid in seen:
            rd.fail(f"duplicate component id {cid!r}", pp + ["id"], c, "id")
        seen.add(cid)
        rank = rd.integer(c["pi1_rank"], pp + ["pi1_rank"], c, "pi1_rank", 0)
        label = None
        if with_label:
            label = rd.integer(c["label"], pp + ["label"], c, "label", 1)
            if labels is not None and label not in labels:
                rd.fail(f"label {label} is outside {sorted(labels)}", pp + ["label"], c, "label")
        out.append((cid, rank, label))
    return out


def _parse_generators(rd: _Reader, node: Any, path: list, parent, key, labels) -> list[ChordGen]:
    gens = rd.array(node, path, parent, key)
    out = []
    seen = set()
    for k, g in enumerate(gens):
        pp = path + [k]
        rd.obj(g, pp, ("name", "degree", "c", "r"), parent=gens, key=k)
        name = rd.string(g["name"], pp + ["name"], g, "name")
        if name in seen:
            rd.fail(f"duplicate generator name {name!r}", pp + ["name"], g, "name")
        seen.add(name)
        degree = rd.integer(g["degree"], pp + ["degree"], g, "degree")
        c = rd.integer(g["c"], pp + ["c"], g, "c")
        r = rd.integer(g["r"], pp + ["r"], g, "r")
        for lab, kk in ((c, "c"), (r, "r")):
            if lab not in labels:
                rd.fail(f"label {lab} is outside {sorted(labels)}", pp + [kk], g, kk)
        out.append(ChordGen(name, degree, c, r))
    return out


def _parse_families(rd: _Reader, node: Any, path: list, parent, key) -> list[tuple[str, str, int]]:
    fams = rd.array(node, path, parent, key)
    out = []
    seen = set()
    for k, f in enumerate(fams):
        pp = path + [k]
        rd.obj(f, pp, ("base", "pairs", "degree"), parent=fams, key=k)
        base = rd.string(f["base"], pp + ["base"], f, "base")
        if base in seen:
            rd.fail(f"duplicate generator family {base!r}", pp + ["base"], f, "base")
        if "[" in base or "]" in base:
            rd.fail(f"family name {base!r} may not contain brackets", pp + ["base"], f, "base")
        seen.add(base)
        pairs = f["pairs"]
        if pairs not in ("all", "upper"):
            rd.fail(f"pairs must be 'all' or 'upper', got {pairs!r}", pp + ["pairs"], f, "pairs")
        degree = rd.integer(f["degree"], pp + ["degree"], f, "degree")
        out.append((base, pairs, degree))
    return out


def _expand_families(fams, m: int) -> list[ChordGen]:
    out = []
    for base, pairs, degree in fams:
        for i in range(1, m + 1):
            for j in range(1, m + 1):
                if pairs == "all" or i < j:
                    out.append(ChordGen(f"{base}[{i},{j}]", degree, i, j))
    return out


def _parse_differentials(rd: _Reader, node: Any, path: list, parent, key, field, chords, spec) -> dict[str, Poly]:
    diffs = rd.mapping(node, path, parent, key)
    declared = {ch.name: ch for ch in chords}
    out = {}
    for name, terms in diffs.items():
        if name not in declared:
            rd.fail(f"differential given for undeclared generator {name!r}", path + [name], diffs, name)
        out[name] = _parse_poly(rd, terms, path + [name], field, declared, spec, diffs, name, f"d({name})")
    return out


def _parse_minima(rd: _Reader, doc: Node, copies: int) -> dict[int, list[str]]:
    if "minima" not in doc:
        return {}
    node = rd.mapping(doc["minima"], ["minima"], doc, "minima")
    out = {}
    for k, names in node.items():
        pp = ["minima", k]
        try:
            a, b = (int(x) for x in k.split("-"))
        except ValueError:
            rd.fail(f"minima key must look like 'i-j', got {k!r}", pp, node, k)
        if b != a + 1 or not 1 <= a < copies:
            rd.fail(f"minima key {k!r} is not an adjacent pair in 1..{copies}", pp, node, k)
        arr = rd.array(names, pp, node, k)
        vals = [rd.string(x, pp + [n], arr, n) for n, x in enumerate(arr)]
        if len(set(vals)) != len(vals):
            rd.fail("duplicate minimum name", pp, node, k)
        out[a] = vals
    return out


def _parse_subset_key(rd: _Reader, k: str, path: list, node, copies: int) -> tuple[int, ...]:
    try:
        P = parse_subset(k)
    except SystemError_ as exc:
        rd.fail(str(exc), path, node, k)
    if not set(P) <= set(range(1, copies + 1)):
        rd.fail(f"subset {{{k}}} is not contained in 1..{copies}", path, node, k)
    return P


def _build(rd: _Reader, doc: Any) -> DGASystem:
    rd.obj(doc, [], _TOP_REQUIRED, _TOP_OPTIONAL)
    _check_version(rd, doc)
    field = _parse_field(rd, doc["field"])
    mode = doc["mode"]
    if mode not in ("consistent", "explicit"):
        rd.fail(f"mode must be 'consistent' or 'explicit', got {mode!r}", ["mode"], doc, "mode")
    copies = rd.integer(doc["copies"], ["copies"], doc, "copies", 1)
    grading = doc.get("grading", "Z")
    if grading not in ("Z", "Z/2"):
        rd.fail(f"grading must be 'Z' or 'Z/2', got {grading!r}", ["grading"], doc, "grading")
    name = doc.get("name", "")
    if not isinstance(name, str):
        rd.fail("name must be a string", ["name"], doc, "name")
    minima = _parse_minima(rd, doc, copies)
    morphisms = []
    if "morphisms" in doc:
        arr = rd.array(doc["morphisms"], ["morphisms"], doc, "morphisms")
        for k, fam in enumerate(arr):
            _validate_family_doc(rd, fam, ["morphisms", k], arr, k, copies, need_name=True)
            morphisms.append(_plain(fam))
    if mode == "consistent":
        if "inclusions" in doc:
            rd.fail("inclusions are only allowed in explicit mode", ["inclusions"], doc, "inclusions")
        sized = _build_consistent(rd, doc, field, copies, grading)
        try:
            return DGASystem(field, copies, mode, sized=sized, minima=minima, grading=grading, name=name,
                             morphisms=morphisms)
        except SystemError_ as exc:
            rd.fail(str(exc), [], doc)
    explicit, inclusions = _build_explicit(rd, doc, field, copies, grading)
    try:
        return DGASystem(field, copies, mode, explicit=explicit, inclusions=inclusions, minima=minima,
                         grading=grading, name=name, morphisms=morphisms)
    except SystemError_ as exc:
        rd.fail(str(exc), [], doc)


def _build_consistent(rd: _Reader, doc: Node, field: Field, copies: int, grading: str) -> dict[int, SemiFreeDGA]:
    comps = _parse_components(rd, doc["components"], ["components"], doc, "components", False)
    for cid, _, _ in comps:
        if "[" in cid or "]" in cid:
            rd.fail(f"component id {cid!r} may not contain brackets in consistent mode", ["components"],
                    doc["components"])
    fams = _parse_families(rd, doc["generators"], ["generators"], doc, "generators")
    diffs = rd.mapping(doc["differentials"], ["differentials"], doc, "differentials")
    keyed = {}
    for k in diffs:
        try:
            m = int(k)
        except ValueError:
            m = 0
        if str(m) != k or not 1 <= m <= copies:
            rd.fail(f"differentials key must be a copy count in 1..{copies}, got {k!r}", ["differentials", k],
                    diffs, k)
        keyed[m] = k
    sized = {}
    for m in range(1, copies + 1):
        spec = FreeProductSpec(tuple((f"{cid}[{i}]", rank) for i in range(1, m + 1) for cid, rank, _ in comps))
        comp_labels = {f"{cid}[{i}]": i for i in range(1, m + 1) for cid, _, _ in comps}
        chords = _expand_families(fams, m)
        d = {}
        if m in keyed:
            k = keyed[m]
            d = _parse_differentials(rd, diffs[k], ["differentials", k], diffs, k, field, chords, spec)
        try:
            sized[m] = SemiFreeDGA(field, range(1, m + 1), spec, comp_labels, chords, d, grading)
        except (DGAError, AlgebraError) as exc:
            rd.fail(str(exc), ["differentials", keyed.get(m, str(m))], diffs, keyed.get(m))
    return sized


def _build_explicit(rd: _Reader, doc: Node, field: Field, copies: int, grading: str):
    subsets = [P for k in range(1, copies + 1) for P in itertools.combinations(range(1, copies + 1), k)]
    labels = set(range(1, copies + 1))

    def per_subset(key: str):
        node = doc[key]
        if isinstance(node, list):
            return None, node
        node = rd.mapping(node, [key], doc, key)
        out = {}
        for k, v in node.items():
            out[_parse_subset_key(rd, k, [key, k], node, copies)] = (k, v)
        for P in subsets:
            if P not in out:
                rd.fail(f"no {key} given for subset {{{subset_key(P)}}}", [key], doc, key)
        return out, node

    comp_keyed, comp_node = per_subset("components")
    gen_keyed, gen_node = per_subset("generators")
    global_comps = global_gens = None
    if comp_keyed is None:
        global_comps = _parse_components(rd, comp_node, ["components"], doc, "components", True, labels)
    if gen_keyed is None:
        global_gens = _parse_generators(rd, gen_node, ["generators"], doc, "generators", labels)
    diffs = rd.mapping(doc["differentials"], ["differentials"], doc, "differentials")
    diff_keys = {}
    for k in diffs:
        diff_keys[_parse_subset_key(rd, k, ["differentials", k], diffs, copies)] = k
    explicit = {}
    for P in subsets:
        if global_comps is not None:
            comps = [c for c in global_comps if c[2] in P]
        else:
            k, node = comp_keyed[P]
            comps = _parse_components(rd, node, ["components", k], comp_node, k, True, set(P))
        if global_gens is not None:
            chords = [g for g in global_gens if g.c in P and g.r in P]
        else:
            k, node = gen_keyed[P]
            chords = _parse_generators(rd, node, ["generators", k], gen_node, k, set(P))
        spec = FreeProductSpec(tuple((cid, rank) for cid, rank, _ in comps))
        comp_labels = {cid: lab for cid, _, lab in comps}
        d = {}
        if P in diff_keys:
            k = diff_keys[P]
            d = _parse_differentials(rd, diffs[k], ["differentials", k], diffs, k, field, chords, spec)
        try:
            explicit[P] = SemiFreeDGA(field, P, spec, comp_labels, chords, d, grading)
        except (DGAError, AlgebraError) as exc:
            k = diff_keys.get(P)
            rd.fail(str(exc), ["differentials", k] if k else ["generators"], diffs if k else doc,
                    k if k else "generators")
    inclusions = {}
    if "inclusions" in doc:
        node = rd.mapping(doc["inclusions"], ["inclusions"], doc, "inclusions")
        for k, m in node.items():
            pp = ["inclusions", k]
            if "->" not in k:
                rd.fail(f"inclusion key must look like 'P->Q', got {k!r}", pp, node, k)
            a, b = k.split("->", 1)
            P = _parse_subset_key(rd, a, pp, node, copies)
            Q = _parse_subset_key(rd, b, pp, node, copies)
            if not set(P) < set(Q):
                rd.fail(f"inclusion {k!r} is not between nested subsets", pp, node, k)
            mm = rd.mapping(m, pp, node, k)
            src = explicit[P]
            tgt = explicit[Q]
            names = set(src.chords) | set(src.group_spec.ids())
            tnames = set(tgt.chords) | set(tgt.group_spec.ids())
            for x, y in mm.items():
                if x not in names:
                    rd.fail(f"{x!r} is not a generator or component of A^{{{a}}}", pp + [x], mm, x)
                if not isinstance(y, str) or y not in tnames:
                    rd.fail(f"{y!r} is not a generator or component of A^{{{b}}}", pp + [x], mm, x)
            full = {n: n for n in names}
            full.update(mm)
            inclusions[(P, Q)] = full
    return explicit, inclusions


def _plain(x: Any) -> Any:
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, list):
        return [_plain(v) for v in x]
    return x


def parse_system_text(text: str, source: str = "<string>", validate: bool = True) -> DGASystem:
    """Parse a system document.  With ``validate`` the result must pass
    ``check_system``; otherwise a SemanticError carries the report."""
    rd = _Reader(text, source)
    doc = loads(text, source)
    system = _build(rd, doc)
    if validate:
        rep = check_system(system)
        if not rep.ok:
            raise SemanticError(system, rep)
    return system


def parse_system(path: str | Path, validate: bool = True) -> DGASystem:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read file: {exc.strerror}", str(path)) from None
    return parse_system_text(text, str(path), validate)


# ---------------------------------------------------------------- serialising


def _families_of(dga: SemiFreeDGA, m: int) -> list[dict]:
    order: list[str] = []
    info: dict[str, tuple[int, set]] = {}
    for ch in dga.chords.values():
        base, c, r = pattern_parts(ch.name)
        if base not in info:
            order.append(base)
            info[base] = (ch.degree, set())
        elif info[base][0] != ch.degree:
            raise SystemError_(f"generators of family {base!r} have different degrees")
        info[base][1].add((c, r))
    out = []
    every = {(i, j) for i in range(1, m + 1) for j in range(1, m + 1)}
    upper = {(i, j) for i, j in every if i < j}
    for base in order:
        degree, pairs = info[base]
        if pairs == every:
            kind = "all"
        elif pairs == upper:
            kind = "upper"
        else:
            raise SystemError_(f"family {base!r} covers neither all nor the upper-triangular pairs")
        out.append({"base": base, "pairs": kind, "degree": degree})
    return out


def _diff_doc(dga: SemiFreeDGA) -> dict:
    return {n: _poly_doc(dga.d(n)) for n in dga.chords if dga.d(n)}


def system_to_doc(system: DGASystem) -> dict:
    """Canonical document for a system."""
    field = system.field
    doc: dict[str, Any] = {"version": FORMAT_VERSION}
    if system.name:
        doc["name"] = system.name
    fd: dict[str, Any] = {"degree": field.degree}
    if field.degree > 1:
        fd["modulus"] = field.modulus_bits()
    doc["field"] = fd
    doc["mode"] = system.mode
    doc["copies"] = system.copies
    doc["grading"] = system.grading
    if system.mode == "consistent":
        top = system.sized[system.copies]
        comps = [{"id": cid[: -len("[1]")], "pi1_rank": rank} for cid, rank in system.sized[1].group_spec.components]
        fams = _families_of(top, system.copies)
        for m in range(1, system.copies + 1):
            expanded = _expand_families([(f["base"], f["pairs"], f["degree"]) for f in fams], m)
            if {ch.name: ch for ch in expanded} != system.sized[m].chords:
                raise SystemError_(f"generators on {m} copies are not the pattern families of the top DGA")
        doc["components"] = comps
        doc["generators"] = fams
        doc["differentials"] = {str(m): _diff_doc(system.sized[m]) for m in range(1, system.copies + 1)}
    else:
        subsets = system.subsets()
        top = system.explicit[tuple(range(1, system.copies + 1))]
        global_comps = [{"id": cid, "pi1_rank": rank, "label": top.component_labels[cid]}
                        for cid, rank in top.group_spec.components]
        global_gens = [{"name": ch.name, "degree": ch.degree, "c": ch.c, "r": ch.r} for ch in top.chords.values()]
        comps_ok = gens_ok = True
        for P in subsets:
            d = system.explicit[P]
            want = tuple((c["id"], c["pi1_rank"]) for c in global_comps if c["label"] in P)
            if d.group_spec.components != want or any(
                    d.component_labels[c] != top.component_labels[c] for c, _ in want):
                comps_ok = False
            chords = {g["name"]: ChordGen(g["name"], g["degree"], g["c"], g["r"])
                      for g in global_gens if g["c"] in P and g["r"] in P}
            if chords != d.chords:
                gens_ok = False
        if comps_ok:
            doc["components"] = global_comps
        else:
            doc["components"] = {subset_key(P): [
                {"id": cid, "pi1_rank": rank, "label": system.explicit[P].component_labels[cid]}
                for cid, rank in system.explicit[P].group_spec.components] for P in subsets}
        if gens_ok:
            doc["generators"] = global_gens
        else:
            doc["generators"] = {subset_key(P): [
                {"name": ch.name, "degree": ch.degree, "c": ch.c, "r": ch.r}
                for ch in system.explicit[P].chords.values()] for P in subsets}
        doc["differentials"] = {subset_key(P): _diff_doc(system.explicit[P]) for P in subsets}
    if system.minima:
        doc["minima"] = {f"{i}-{i + 1}": list(v) for i, v in sorted(system.minima.items())}
    if system.mode == "explicit" and system.given_inclusions:
        inc = {}
        for (P, Q), m in sorted(system.given_inclusions.items(), key=lambda kv: (len(kv[0][0]), kv[0], len(kv[0][1]), kv[0][1])):
            moved = {a: b for a, b in m.items() if a != b}
            if moved:
                inc[f"{subset_key(P)}->{subset_key(Q)}"] = dict(sorted(moved.items()))
        if inc:
            doc["inclusions"] = inc
    if system.morphisms:
        doc["morphisms"] = system.morphisms
    return doc


def dump_json(doc: Any) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def dump_system(system: DGASystem) -> str:
    return dump_json(system_to_doc(system))


# ---------------------------------------------------------------- families


_STEP_KEYS = {
    "elementary": (("kind", "generator"), ("x", "y", "u")),
    "stabilise": (("kind", "names", "degree", "c", "r"), ()),
    "destabilise": (("kind", "names"), ()),
    "map": (("kind", "images"), ()),
}


def _validate_family_doc(rd: _Reader, doc: Any, path: list, parent, key, copies: int | None, need_name: bool):
    required = ("mode", "maps") + (("name",) if need_name else ())
    rd.obj(doc, path, required, ("version", "name", "description"), parent, key)
    _check_version(rd, doc)
    if doc["mode"] not in ("consistent", "explicit"):
        rd.fail(f"mode must be 'consistent' or 'explicit', got {doc['mode']!r}", path + ["mode"], doc, "mode")
    maps = rd.mapping(doc["maps"], path + ["maps"], doc, "maps")
    for k, steps in maps.items():
        pp = path + ["maps", k]
        if doc["mode"] == "consistent":
            if not k.isdigit() or int(k) < 1 or (copies is not None and int(k) > copies):
                rd.fail(f"map key must be a copy count, got {k!r}", pp, maps, k)
        else:
            _parse_subset_key(rd, k, pp, maps, copies if copies is not None else 10**6)
        arr = rd.array(steps, pp, maps, k)
        for n, step in enumerate(arr):
            sp = pp + [n]
            if not isinstance(step, dict) or step.get("kind") not in _STEP_KEYS:
                rd.fail(f"step must be an object with kind in {sorted(_STEP_KEYS)}", sp, arr, n)
            req, opt = _STEP_KEYS[step["kind"]]
            rd.obj(step, sp, req, opt, arr, n)


class _Relabel:
    def __init__(self, lm: Mapping[int, int] | None):
        self.lm = lm

    def chord(self, n: str) -> str:
        return n if self.lm is None else relabel_name(n, self.lm)

    def comp(self, c: str) -> str:
        return c if self.lm is None else relabel_component(c, self.lm)

    def label(self, i: int) -> int:
        return i if self.lm is None else self.lm[i]

    def poly_node(self, node):
        """Rename chords and components inside a term list or monomial."""
        if isinstance(node, list):
            return [self.poly_node(x) for x in node]
        if isinstance(node, dict):
            out = {}
            for k, v in node.items():
                if k == "chord":
                    out[k] = self.chord(v)
                elif k == "component":
                    out[k] = self.comp(v)
                else:
                    out[k] = self.poly_node(v)
            return out
        return node


def _step_map(rd: _Reader, step: Node, sp: list, cur: SemiFreeDGA, final: SemiFreeDGA, rl: _Relabel,
              last: bool) -> DGAMorphism:
    field = cur.field
    kind = step["kind"]
    try:
        if kind == "elementary":
            q = rl.chord(rd.string(step["generator"], sp + ["generator"], step, "generator"))
            if q not in cur.chords:
                rd.fail(f"unknown generator {q!r}", sp + ["generator"], step, "generator")
            units = []
            for side in ("x", "y"):
                if side not in step:
                    units.append(None)
                    continue
                node = step[side]
                rd.obj(node, sp + [side], ("coef",), ("group",), step, side)
                c = _parse_coef(rd, node["coef"], sp + [side, "coef"], field, node, "coef")
                g = GroupElement()
                if "group" in node:
                    g = _parse_group(rd, rl.poly_node(node["group"]), sp + [side, "group"], cur.group_spec, node,
                                     "group")
                units.append(Poly(field, {(g,): c}))
            u = None
            if "u" in step:
                u = _parse_poly(rd, rl.poly_node(step["u"]), sp + ["u"], field, cur.chords, cur.group_spec, step,
                                "u", f"u of {q}")
            return elementary_auto(cur, q, units[0], units[1], u)
        if kind in ("stabilise", "destabilise"):
            names = rd.array(step["names"], sp + ["names"], step, "names")
            if len(names) != 2:
                rd.fail("names must list exactly two generators", sp + ["names"], step, "names")
            e1, e2 = (rl.chord(rd.string(x, sp + ["names", k], names, k)) for k, x in enumerate(names))
            if kind == "destabilise":
                return destabilise(cur, e1, e2)[1]
            degree = rd.integer(step["degree"], sp + ["degree"], step, "degree")
            c = rl.label(rd.integer(step["c"], sp + ["c"], step, "c"))
            r = rl.label(rd.integer(step["r"], sp + ["r"], step, "r"))
            return stabilise(cur, degree, c, r, (e1, e2))[1]
        if not last:
            rd.fail("a 'map' step must be the last step", sp, step)
        images = rd.mapping(step["images"], sp + ["images"], step, "images")
        imgs = {}
        for n, terms in images.items():
            nn = rl.chord(n)
            if nn not in cur.chords:
                rd.fail(f"unknown source generator {nn!r}", sp + ["images", n], images, n)
            imgs[nn] = _parse_poly(rd, rl.poly_node(terms), sp + ["images", n], field, final.chords,
                                   final.group_spec, images, n, f"image of {nn}")
        return DGAMorphism(cur, final, imgs, "map")
    except (MorphismError, DGAError, AlgebraError, SystemError_) as exc:
        rd.fail(str(exc), sp, step)


def _family_maps(rd: _Reader, doc: Node, path: list, source: DGASystem, target: DGASystem) -> dict:
    M = min(source.copies, target.copies)
    maps = doc["maps"]
    consistent = doc["mode"] == "consistent"
    if consistent and not (source.patterned and target.patterned):
        rd.fail("a consistent family needs systems that use the base[c,r] naming pattern", path + ["mode"], doc,
                "mode")
    family = {}
    for k in range(1, M + 1):
        for P in itertools.combinations(range(1, M + 1), k):
            if consistent:
                key = str(len(P))
                rl = _Relabel({i + 1: p for i, p in enumerate(P)})
            else:
                key = next((kk for kk in maps if parse_subset(kk) == P), None)
                rl = _Relabel(None)
            steps = maps.get(key, []) if key is not None else []
            cur = source.dga(P)
            final = target.dga(P)
            total = None
            for n, step in enumerate(steps):
                f = _step_map(rd, step, path + ["maps", key, n], cur, final, rl, n == len(steps) - 1)
                total = f if total is None else total.then(f)
                cur = f.target
            if cur == final:
                images = total.images if total is not None else {}
                family[P] = DGAMorphism(source.dga(P), final, images, "family")
            elif total is None:
                family[P] = DGAMorphism(source.dga(P), cur, {}, "family")
            else:
                family[P] = DGAMorphism(source.dga(P), cur, total.images, "family")
    return family


def family_from_doc(doc: Mapping, source: DGASystem, target: DGASystem, text: str = "",
                    source_name: str = "<family>") -> dict:
    """Family of maps P -> (A_source^P -> A_target^P) from a parsed family
    document; maps whose steps do not end at the target DGA keep their
    actual target so that ``check_family`` reports them."""
    rd = _Reader(text, source_name)
    if not isinstance(doc, Node):
        doc = loads(json.dumps(doc), source_name)
        rd = _Reader(json.dumps(doc), source_name)
    _validate_family_doc(rd, doc, [], None, None, None, need_name=False)
    return _family_maps(rd, doc, [], source, target)


def parse_family_text(text: str, source: DGASystem, target: DGASystem, source_name: str = "<string>") -> dict:
    doc = loads(text, source_name)
    rd = _Reader(text, source_name)
    _validate_family_doc(rd, doc, [], None, None, None, need_name=False)
    return _family_maps(rd, doc, [], source, target)


def parse_family(path: str | Path, source: DGASystem, target: DGASystem) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(f"cannot read file: {exc.strerror}", str(path)) from None
    return parse_family_text(text, source, target, str(path))
