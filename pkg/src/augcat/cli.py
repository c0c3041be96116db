"""Command line interface.

Every subcommand produces a Report.  Exit status: 0 when every check
passes, 1 when a mathematical violation is found, 2 for unreadable input or
bad usage.  ``--json`` prints the report document instead of text.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Sequence

from .algebra import AlgebraError, get_field, parse_bits
from .audit import ainf_audit, oracle_audit
from .augment import AugmentationError, brute_force_augs, coerce_field, diagonal_aug, enumerate_augs, kpoly_str, twist, unknowns
from .category import (
    CategoryError,
    InsufficientCopies,
    PreAugCategory,
    compare_constructions,
    consistent_aug_cat,
    functor_from_family,
    h0_category,
    loc_hom,
    unit_identity_findings,
    w_class,
)
from .fileformat import FormatError, parse_family, parse_system
from .report import Report
from .system import DGASystem, SystemError_, check_system, parse_subset

__all__ = ["UsageError", "build_parser", "execute", "render", "run", "main"]

EXIT = {"pass": 0, "fail": 1, "error": 2}
BRUTE_FORCE_LIMIT = 20


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def _common() -> argparse.ArgumentParser:
    p = _Parser(add_help=False)
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="print the report as JSON")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for randomized audits")
    p.add_argument("--kmax", type=int, default=argparse.SUPPRESS, help="highest arity to check")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="augcat", description="Augmentation categories of systems of semi-free DGAs.")
    parser.add_argument("--json", action="store_true", default=False, help="print the report as JSON")
    parser.add_argument("--seed", type=int, default=None, help="seed for randomized audits")
    parser.add_argument("--kmax", type=int, default=None, help="highest arity to check")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], help=help_text, description=help_text)

    p = add("check", "validate a system file: DGA axioms, restrictions, minima")
    p.add_argument("file")
    p = add("augs", "enumerate augmentations of a single copy")
    p.add_argument("file")
    p.add_argument("--field", help="extension field as degree[:modulus bits], e.g. 2:111")
    p.add_argument("--copy", type=int, default=1)
    p = add("twist", "twisted differential for an augmentation")
    p.add_argument("file")
    p.add_argument("--aug", type=int, required=True, help="augmentation index")
    p.add_argument("--subset", default="1", help="copies to twist, e.g. 1,2 (diagonal augmentation)")
    p = add("ainf", "A-infinity relations, degree law and oracle audit")
    p.add_argument("file")
    p = add("w-check", "certify the unit cochains w are nonzero 0-cocycles")
    p.add_argument("file")
    p = add("loc-hom", "stable hom between two augmentations")
    p.add_argument("file")
    p.add_argument("--source", type=int, required=True, help="augmentation index")
    p.add_argument("--target", type=int, required=True, help="augmentation index")
    p = add("h0", "degree-0 category of the localisation")
    p.add_argument("file")
    p = add("compare", "consistent construction against the localisation")
    p.add_argument("file")
    p = add("functor-check", "verify a morphism family and its induced functor")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--family", required=True, help="family file")
    return parser


# ---------------------------------------------------------------- helpers


class _Failed(Exception):
    """Stop a command early with a finished report."""

    def __init__(self, report: Report):
        self.report = report


def _load(path: str, command: str) -> DGASystem:
    system = parse_system(path, validate=False)
    rep = check_system(system)
    if not rep.ok:
        rep.command = command
        raise _Failed(rep)
    return system


def _error(command: str, message: str, **data) -> Report:
    rep = Report(command, status_override="error")
    rep.add("input", message, **data)
    return rep


def _aug_index(cat: PreAugCategory, k: int, flag: str) -> int:
    n = len(cat.objects)
    if not 0 <= k < n:
        raise UsageError(f"{flag} {k} is out of range: there are {n} augmentations (0..{n - 1})")
    return k


def _field_arg(text: str):
    degree, _, modulus = text.partition(":")
    try:
        return get_field(int(degree), parse_bits(modulus) if modulus else None)
    except ValueError as exc:
        raise UsageError(f"bad --field {text!r}: {exc}") from None


# ---------------------------------------------------------------- commands


def cmd_check(args) -> Report:
    system = parse_system(args.file, validate=False)
    rep = check_system(system)
    rep.tables["name"] = system.name
    rep.tables["mode"] = system.mode
    rep.tables["copies"] = system.copies
    rep.tables["field_degree"] = system.field.degree
    if system.mode == "consistent":
        rep.tables["generators"] = {str(m): len(d.chords) for m, d in sorted(system.sized.items())}
    else:
        rep.tables["generators"] = {",".join(map(str, P)): len(d.chords) for P, d in sorted(system.explicit.items())}
    return rep


def cmd_augs(args) -> Report:
    system = _load(args.file, "augs")
    if not 1 <= args.copy <= system.copies:
        raise UsageError(f"--copy {args.copy} is outside 1..{system.copies}")
    dga = system.dga((args.copy,))
    field = system.field
    if args.field:
        field = _field_arg(args.field)
        try:
            dga = coerce_field(dga, field)
        except AlgebraError as exc:
            raise UsageError(str(exc)) from None
    rep = Report("augs")
    augs = enumerate_augs(dga)
    unk = unknowns(dga)
    rep.tables["copy"] = args.copy
    rep.tables["field"] = {"degree": field.degree, "modulus": field.modulus_bits()}
    rep.tables["unknowns"] = len(unk)
    rep.tables["count"] = len(augs)
    rep.tables["augmentations"] = [e.to_dict(dga) for e in augs]
    if len(unk) <= BRUTE_FORCE_LIMIT:
        brute = brute_force_augs(dga)
        rep.tables["brute_force_count"] = len(brute)
        if set(brute) != set(augs):
            rep.add("oracle", f"search found {len(augs)} augmentations, brute force {len(brute)}")
    else:
        rep.tables["brute_force_count"] = None
    return rep


def cmd_twist(args) -> Report:
    system = _load(args.file, "twist")
    cat = PreAugCategory(system)
    k = _aug_index(cat, args.aug, "--aug")
    try:
        P = parse_subset(args.subset)
    except SystemError_ as exc:
        raise UsageError(str(exc)) from None
    if not set(P) <= set(range(1, system.copies + 1)):
        raise UsageError(f"--subset {args.subset} is not inside 1..{system.copies}")
    dga = system.dga(P)
    eps = diagonal_aug(system, P, [cat.obj(i, k) for i in P])
    rep = Report("twist")
    try:
        td = twist(dga, eps, verify=False)
        images = td.images()
    except AugmentationError as exc:
        rep.add("augmentation", str(exc))
        return rep
    for n in td.square_violations():
        rep.add("d_squared", f"d_eps(d_eps({n})) != 0", generator=n)
    rep.tables["subset"] = list(P)
    rep.tables["augmentation"] = eps.to_dict(dga)
    rep.tables["images"] = {n: kpoly_str(images[n], dga.field) for n in sorted(images)}
    rep.tables["max_word_length"] = td.max_word_length()
    return rep


def cmd_ainf(args) -> Report:
    system = _load(args.file, "ainf")
    kmax = args.kmax if args.kmax is not None else 4
    if kmax < 1:
        raise UsageError("--kmax must be at least 1")
    rep = Report("ainf")
    relations = ainf_audit(system, kmax)
    oracle = oracle_audit(system, kmax, seed=args.seed, samples=50 if args.seed is not None else 0)
    rep.extend(relations)
    rep.extend(oracle)
    rep.tables["relations"] = relations.tables
    rep.tables["oracle"] = oracle.tables
    return rep


def cmd_w_check(args) -> Report:
    system = _load(args.file, "w-check")
    cat = PreAugCategory(system)
    rep = Report("w-check")
    if system.copies < 2:
        raise UsageError("w-check needs at least 2 copies")
    table = {}
    for a in range(len(cat.objects)):
        row = {}
        for i in range(1, system.copies):
            try:
                wc = w_class(cat, a, i)
            except (CategoryError, SystemError_) as exc:
                rep.add("minima", str(exc), object=a, pair=[i, i + 1])
                continue
            if not wc.is_cocycle:
                rep.add("cocycle", f"m1(w) != 0 for e{a} on copies ({i},{i + 1}): {sorted(wc.m1)}",
                        object=a, pair=[i, i + 1])
            elif not wc.nonzero:
                rep.add("zero_class", f"[w] is zero for e{a} on copies ({i},{i + 1})", object=a, pair=[i, i + 1])
            row[f"{i}-{i + 1}"] = {
                "cochain": sorted(wc.cochain),
                "m1": {n: system.field.format(c) for n, c in sorted(wc.m1.items())},
                "class": None if wc.coords is None else [system.field.format(c) for c in wc.coords],
            }
        table[f"e{a}"] = row
    rep.tables["objects"] = len(cat.objects)
    rep.tables["w"] = table
    return rep


def cmd_loc_hom(args) -> Report:
    system = _load(args.file, "loc-hom")
    cat = PreAugCategory(system)
    a = _aug_index(cat, args.source, "--source")
    b = _aug_index(cat, args.target, "--target")
    rep = Report("loc-hom")
    try:
        loc = loc_hom(cat, a, b)
    except InsufficientCopies as exc:
        rep.add("insufficient_copies", str(exc), copies=system.copies)
        return rep
    for msg in loc.findings:
        rep.add("localisation", msg)
    for msg in unit_identity_findings(cat, a, b, loc):
        rep.add("unit", msg)
    rep.tables.update(loc.to_dict())
    return rep


def cmd_h0(args) -> Report:
    system = _load(args.file, "h0")
    cat = PreAugCategory(system)
    try:
        return h0_category(cat)
    except InsufficientCopies as exc:
        rep = Report("h0")
        rep.add("insufficient_copies", str(exc), copies=system.copies)
        return rep


def cmd_compare(args) -> Report:
    system = _load(args.file, "compare")
    if system.mode != "consistent":
        return _error("compare", "compare needs a consistent-mode system")
    rep = compare_constructions(system)
    if rep.ok:
        kmax = args.kmax if args.kmax is not None else 4
        _, crep = consistent_aug_cat(system, kmax)
        rep.extend(crep)
        rep.tables["consistent"] = {k: v for k, v in crep.tables.items() if k not in ("objects", "dims")}
    return rep


def cmd_functor_check(args) -> Report:
    source = _load(args.source, "functor-check")
    target = _load(args.target, "functor-check")
    family = parse_family(args.family, source, target)
    kmax = args.kmax if args.kmax is not None else 2
    return functor_from_family(family, source, target, kmax)


COMMANDS: dict[str, Callable] = {
    "check": cmd_check,
    "augs": cmd_augs,
    "twist": cmd_twist,
    "ainf": cmd_ainf,
    "w-check": cmd_w_check,
    "loc-hom": cmd_loc_hom,
    "h0": cmd_h0,
    "compare": cmd_compare,
    "functor-check": cmd_functor_check,
}


# ---------------------------------------------------------------- driver


def execute(argv: Sequence[str]) -> tuple[int, Report, bool]:
    """Run a command without printing.  Returns (exit code, report, json flag)."""
    argv = list(argv)
    as_json = "--json" in argv
    command = next((a for a in argv if a in COMMANDS), "usage")
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return 2, _error(command, str(exc)), as_json
    as_json = args.json
    try:
        rep = COMMANDS[args.command](args)
    except _Failed as exc:
        rep = exc.report
    except FormatError as exc:
        rep = _error(args.command, str(exc), **{k: v for k, v in exc.to_dict().items() if k != "message"})
    except UsageError as exc:
        rep = _error(args.command, str(exc))
    except (SystemError_, AlgebraError) as exc:
        rep = _error(args.command, str(exc))
    return EXIT[rep.status], rep, as_json


def render(rep: Report, as_json: bool) -> str:
    if as_json:
        return json.dumps(rep.to_dict(), indent=2, ensure_ascii=False) + "\n"
    lines = [f"{rep.command}: {rep.status.upper()}"]
    for f in rep.findings:
        lines.append(f"  [{f.kind}] {f.message}")
    if rep.tables:
        lines.append(json.dumps(rep.tables, indent=2, ensure_ascii=False))
    return "\n".join(lines) + "\n"


def run(argv: Sequence[str] | None = None) -> int:
    code, rep, as_json = execute(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(render(rep, as_json))
    return code


def main() -> None:
    sys.exit(run())
