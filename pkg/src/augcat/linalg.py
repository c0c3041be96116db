"""Gaussian elimination over GF(2^e); matrices are lists of row lists."""

from __future__ import annotations

from .algebra import Field

__all__ = ["rref", "rank", "kernel", "solve", "in_span", "matmul", "identity", "is_invertible"]


def rref(field: Field, rows: list[list[int]], ncols: int | None = None) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    m = [list(r) for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    mul, inv = field._mul, field._inv
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        s = inv[m[r][c]]
        if s != 1:
            m[r] = [mul[s][x] for x in m[r]]
        pivot_row = m[r]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x ^ mul[f][y] for x, y in zip(m[i], pivot_row)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(field: Field, rows: list[list[int]], ncols: int | None = None) -> int:
    return len(rref(field, rows, ncols)[1])


def kernel(field: Field, rows: list[list[int]], ncols: int) -> list[list[int]]:
    """Basis of {v : A v = 0}, one vector per free column, in order."""
    red, pivots = rref(field, rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(red, pivots):
            v[pc] = row[f]  # characteristic 2: -x = x
        basis.append(v)
    return basis


def solve(field: Field, rows: list[list[int]], rhs: list[int], ncols: int) -> list[int] | None:
    """One solution of A v = rhs, or None."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(field, aug, ncols + 1)
    if ncols in pivots:
        return None
    v = [0] * ncols
    for row, pc in zip(red, pivots):
        v[pc] = row[ncols]
    return v


def in_span(field: Field, vectors: list[list[int]], v: list[int]) -> list[int] | None:
    """Coefficients expressing ``v`` in the given vectors, or None."""
    n = len(v)
    cols = [[vec[i] for vec in vectors] for i in range(n)]
    if not vectors:
        return [] if not any(v) else None
    return solve(field, cols, v, len(vectors))


def matmul(field: Field, a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    mul = field._mul
    inner = len(b)
    cols = len(b[0]) if b else 0
    out = []
    for row in a:
        new = [0] * cols
        for k in range(inner):
            x = row[k]
            if x:
                bk = b[k]
                for j in range(cols):
                    if bk[j]:
                        new[j] ^= mul[x][bk[j]]
        out.append(new)
    return out


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def is_invertible(field: Field, m: list[list[int]]) -> bool:
    n = len(m)
    return all(len(r) == n for r in m) and rank(field, m, n) == n
