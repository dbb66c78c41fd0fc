"""Dense matrices over a FieldSpec, entries held as element codes.

A matrix is a tuple of row tuples; everything here is a pure function.
"""
from __future__ import annotations

from .errors import DomainError, SpecError
from .gf import FieldSpec

Matrix = tuple[tuple[int, ...], ...]


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zero(n: int, m: int | None = None) -> Matrix:
    return tuple((0,) * (n if m is None else m) for _ in range(n))


def unit(n: int, i: int, j: int) -> Matrix:
    """Matrix unit E_{ij}, 0-based indices."""
    return tuple(tuple(1 if (a, b) == (i, j) else 0 for b in range(n)) for a in range(n))


def add(F: FieldSpec, a: Matrix, b: Matrix) -> Matrix:
    if F.r == 1:
        p = F.p
        return tuple(tuple((x + y) % p for x, y in zip(ra, rb)) for ra, rb in zip(a, b))
    return tuple(tuple(F.add(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def sub(F: FieldSpec, a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(F.sub(x, y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def neg(F: FieldSpec, a: Matrix) -> Matrix:
    return tuple(tuple(F.neg(x) for x in row) for row in a)


def scale(F: FieldSpec, c: int, a: Matrix) -> Matrix:
    return tuple(tuple(F.mul(c, x) for x in row) for row in a)


def mul(F: FieldSpec, a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    if F.r == 1:
        p = F.p
        return tuple(
            tuple(sum(x * y for x, y in zip(row, col)) % p for col in cols) for row in a
        )
    out = []
    for row in a:
        new_row = []
        for col in cols:
            acc = 0
            for x, y in zip(row, col):
                if x and y:
                    acc = F.add(acc, F.mul(x, y))
            new_row.append(acc)
        out.append(tuple(new_row))
    return tuple(out)


def is_zero(a: Matrix) -> bool:
    return not any(any(row) for row in a)


def map_entries(fn, a: Matrix) -> Matrix:
    return tuple(tuple(fn(x) for x in row) for row in a)


def flatten(a: Matrix) -> tuple[int, ...]:
    return tuple(x for row in a for x in row)


def unflatten(v, n: int) -> Matrix:
    v = tuple(v)
    return tuple(v[i * n : (i + 1) * n] for i in range(n))


def block(a: Matrix, m: int) -> Matrix:
    """Upper-left m x m block."""
    return tuple(row[:m] for row in a[:m])


def row_reduce(F: FieldSpec, rows: list[list[int]]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form; returns (rows, pivot columns)."""
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    ncols = len(rows[0]) if rows else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = F.inv(rows[r][c])
        rows[r] = [F.mul(inv, x) for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(F: FieldSpec, vectors) -> int:
    vectors = [list(v) for v in vectors]
    if not vectors:
        return 0
    return len(row_reduce(F, vectors)[1])


def inverse(F: FieldSpec, a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + list(e) for row, e in zip(a, identity(n))]
    rows, pivots = row_reduce(F, aug)
    if pivots[:n] != list(range(n)):
        raise DomainError("matrix is singular")
    return tuple(tuple(row[n:]) for row in rows)


def det(F: FieldSpec, a: Matrix) -> int:
    n = len(a)
    rows = [list(r) for r in a]
    result = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            result = F.neg(result)
        result = F.mul(result, rows[c][c])
        inv = F.inv(rows[c][c])
        for i in range(c + 1, n):
            if rows[i][c]:
                f = F.mul(rows[i][c], inv)
                rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[c])]
    return result


def from_ints(F: FieldSpec, rows) -> Matrix:
    """Build a matrix from nested ints (codes) or coefficient vectors."""
    def conv(x):
        if isinstance(x, int):
            return F.from_int(x) if F.r == 1 else x
        return F.code(x)

    mat = tuple(tuple(conv(x) for x in row) for row in rows)
    n = len(mat)
    if any(len(row) != n for row in mat):
        raise SpecError("matrix must be square")
    return mat


def to_coeffs(F: FieldSpec, a: Matrix) -> list[list[list[int]]]:
    return [[list(F.coeffs(x)) for x in row] for row in a]
