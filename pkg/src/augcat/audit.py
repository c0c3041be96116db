"""System-wide audits shared by the command line and the acceptance tests."""

from __future__ import annotations

import itertools
import random
from typing import Iterator

from .ainfty import check_ainf, dual_oracle_mk, dual_oracle_table, mk
from .augment import Augmentation, TwistedDifferential, diagonal_aug, enumerate_augs
from .report import Report
from .system import DGASystem, subset_key

__all__ = ["ainf_instances", "ainf_audit", "oracle_compare", "oracle_audit"]


def ainf_instances(system: DGASystem, max_size: int | None = None,
                   augs: list[Augmentation] | None = None) -> Iterator[tuple[tuple[int, ...], tuple[int, ...], TwistedDifferential]]:
    """Every subset P (with |P| <= max_size when given) and every diagonal
    augmentation on it; with a size limit below the copy count the constant
    diagonals on the full copy set are added.  Yields (P, augmentation
    indices, twisted differential)."""
    augs1 = enumerate_augs(system.dga((1,))) if augs is None else augs
    per_copy = {i: [system.transport_aug(e, 1, i) for e in augs1] for i in range(1, system.copies + 1)}
    n = len(augs1)

    def make(P, idx):
        eps = diagonal_aug(system, P, [per_copy[i][k] for i, k in zip(P, idx)])
        return TwistedDifferential(system.dga(P), eps)

    for P in system.subsets(max_size):
        for idx in itertools.product(range(n), repeat=len(P)):
            yield P, idx, make(P, idx)
    full = tuple(range(1, system.copies + 1))
    if max_size is not None and system.copies > max_size:
        for k in range(n):
            yield full, (k,) * len(full), make(full, (k,) * len(full))


def ainf_audit(system: DGASystem, kmax: int = 4, max_size: int | None = None) -> Report:
    """check_ainf (relations, degree law, support) on every instance of
    :func:`ainf_instances`."""
    rep = Report("ainf")
    instances = relations = 0
    arity = 0
    memo: dict = {}
    for P, idx, td in ainf_instances(system, max_size):
        sub = check_ainf(td, kmax, memo)
        for f in sub.findings:
            f.data.update(subset=list(P), augmentations=list(idx))
            rep.findings.append(f)
        instances += 1
        relations += sub.tables["relations_checked"]
        arity = max(arity, sub.tables["max_arity"])
    rep.tables.update(kmax=kmax, instances=instances, relations_checked=relations, max_arity=arity)
    return rep


def _composable(td: TwistedDifferential, t: tuple[str, ...]) -> bool:
    ch = td.dga.chords
    return all(ch[t[i]].r == ch[t[i + 1]].c for i in range(len(t) - 1))


def oracle_compare(td: TwistedDifferential, kmax: int, extra=()) -> tuple[int, list]:
    """Compare mk with the oracle on every composable tuple of length
    <= kmax.  Off the union of the two supports both sides vanish, so the
    union is checked exhaustively; ``extra`` tuples go through the per-tuple
    oracle.  Returns (tuples compared, mismatches)."""
    table = dual_oracle_table(td.dga, td.eps, kmax)
    support = set(table)
    for q in td.dga.chords:
        support.update(w for w in td.image(q) if len(w) <= kmax)
    bad = []
    tuples = sorted(t for t in support if _composable(td, t))
    for t in tuples:
        a = mk(td, t)
        b = table.get(t, {})
        if a != b:
            bad.append((t, a, b))
    for t in extra:
        a = mk(td, t)
        b = dual_oracle_mk(td.dga, td.eps, t)
        if a != b:
            bad.append((t, a, b))
    return len(tuples), bad


def oracle_audit(system: DGASystem, kmax: int = 4, max_size: int | None = None, seed: int | None = None,
                 samples: int = 0) -> Report:
    """mk against the oracle on every composable tuple of length <= kmax
    (see :func:`oracle_compare`), plus ``samples`` random composable
    tuples per instance when a seed is given."""
    rep = Report("oracle")
    rng = random.Random(seed)
    compared = sampled = 0
    for P, idx, td in ainf_instances(system, max_size):
        extra = []
        if seed is not None and samples:
            names = sorted(td.dga.chords)
            for _ in range(samples):
                k = rng.randint(1, kmax)
                t = tuple(rng.choice(names) for _ in range(k))
                if _composable(td, t):
                    extra.append(t)
        n, bad = oracle_compare(td, kmax, extra)
        for t, a, b in bad:
            rep.add("oracle", f"mk and the oracle differ on ({', '.join(t)}) in A^{{{subset_key(P)}}}: {a} vs {b}",
                    subset=list(P), augmentations=list(idx), tuple=list(t))
        compared += n
        sampled += len(extra)
    rep.tables.update(kmax=kmax, tuples_compared=compared, random_tuples=sampled)
    return rep
