"""Counting Z/p-covers of the affine line against index-p subgroups of L_{1,d}(F_p).

Artin-Schreier side: classes of f in t F_p[t] of degree <= D modulo
g^p - g, up to scaling by F_p^x.  Witt side: index-p subgroups of the
truncated big Witt group (1 + s F_p[s]/(s^{d+1}))^x.  The two counts are
compared level by level with d = D.
"""
from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass

from .caps import require_within
from .errors import DomainError, VerificationError
from .gf import FieldSpec, enumerate_field, field_for_order, is_prime
from .lgroup import TruncElem, enumerate_group, lmul
from .subgrp import GroupTable, all_subgroups

AS_PRIMES = (2, 3, 5)
AS_MAX_DEGREE = 12
WITT_CROSSCHECK_MAX = 2_000


@dataclass(frozen=True)
class ASPoly:
    """f = sum_{k>=1} coeffs[k-1] t^k over F_p."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")
        cs = [c % self.p for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    def coeff(self, k: int) -> int:
        return self.coeffs[k - 1] if 1 <= k <= len(self.coeffs) else 0

    def __add__(self, other: "ASPoly") -> "ASPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        return ASPoly(self.p, tuple(self.coeff(k) + other.coeff(k) for k in range(1, n + 1)))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self) -> str:
        terms = [
            (f"{c}*" if c != 1 else "") + (f"t^{k}" if k > 1 else "t")
            for k, c in enumerate(self.coeffs, 1)
            if c
        ]
        return " + ".join(terms) or "0"


def wp(g: ASPoly) -> ASPoly:
    """g^p - g; over F_p the p-th power only raises exponents."""
    p = g.p
    out = [0] * (p * g.degree)
    for k, c in enumerate(g.coeffs, 1):
        out[p * k - 1] += c
        out[k - 1] -= c
    return ASPoly(p, tuple(out))


@dataclass(frozen=True)
class ASClass:
    rep: ASPoly

    def __post_init__(self) -> None:
        p = self.rep.p
        if any(c and k % p == 0 for k, c in enumerate(self.rep.coeffs, 1)):
            raise DomainError("class representative has a term of degree divisible by p")


def as_reduce(f: ASPoly) -> ASClass:
    """Canonical representative: push every c t^{pm} down to c t^m, top degree first."""
    p = f.p
    cs = list(f.coeffs)
    for k in range(len(cs), 0, -1):
        c = cs[k - 1]
        if c and k % p == 0:
            # subtract wp(c t^{k/p}); c^{1/p} = c on F_p
            cs[k - 1] = 0
            cs[k // p - 1] = (cs[k // p - 1] + c) % p
    return ASClass(ASPoly(p, tuple(cs)))


def all_aspolys(p: int, D: int) -> list[ASPoly]:
    return [ASPoly(p, cs) for cs in itertools.product(range(p), repeat=D)]


def wp_image(p: int, D: int) -> set[ASPoly]:
    """{g^p - g : g in t F_p[t], deg g^p <= D}."""
    return {wp(g) for g in all_aspolys(p, D // p)}


def _check_as_args(p: int, D: int) -> None:
    if p not in AS_PRIMES:
        raise DomainError(f"p must be one of {AS_PRIMES}, got {p}")
    if not 0 <= D <= AS_MAX_DEGREE:
        raise DomainError(f"degree bound must lie in 0..{AS_MAX_DEGREE}, got {D}")


def as_count_formula(p: int, D: int) -> int:
    k = sum(1 for m in range(1, D + 1) if m % p)
    return (p**k - 1) // (p - 1)


def as_count_bruteforce(p: int, D: int) -> int:
    """Cosets of the wp-image in t F_p[t]_{<=D}, nonzero ones up to F_p^x scaling."""
    polys = all_aspolys(p, D)
    require_within(len(polys), what="Artin-Schreier enumeration")
    image = wp_image(p, D)
    cosets = {frozenset(f + h for h in image) for f in polys}
    zero = frozenset(image)
    nonzero = len(cosets) - (1 if zero in cosets else 0)
    return nonzero // (p - 1)


def count_as_covers(p: int, D: int) -> int:
    """Number of Z/p-covers with canonical f of degree <= D, by formula and brute force."""
    _check_as_args(p, D)
    formula = as_count_formula(p, D)
    brute = as_count_bruteforce(p, D)
    if formula != brute:
        raise VerificationError(f"AS count mismatch at p={p}, D={D}: formula {formula}, enumeration {brute}")
    return formula


def _p_torsion(group: list[TruncElem], p: int) -> int:
    count = 0
    for x in group:
        y = x
        for _ in range(p - 1):
            y = lmul(y, x)
        if y.is_identity():
            count += 1
    return count


def count_witt_index_p(p: int, d: int, crosscheck_max: int = WITT_CROSSCHECK_MAX) -> int:
    """Index-p subgroups of L_{1,d}(F_p) as (|G[p]| - 1)/(p - 1).

    When |G| <= crosscheck_max the subgroup lattice is enumerated and its
    index-p tally must agree.
    """
    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if d == 0:
        return 0
    require_within(p**d, 2**16, what="Witt group")
    field = FieldSpec.of(p)
    group = enumerate_group(1, d, field)
    count = (_p_torsion(group, p) - 1) // (p - 1)
    if len(group) <= crosscheck_max:
        table = GroupTable.from_elements(group, lmul, f"L_1,{d}(F_{p})")
        tally = sum(1 for s in all_subgroups(table) if s.index == p)
        if tally != count:
            raise VerificationError(f"index-{p} count {count} disagrees with lattice tally {tally}")
    return count


@dataclass
class FiltrationRow:
    D: int
    as_count: int
    witt_count: int

    @property
    def equal(self) -> bool:
        return self.as_count == self.witt_count

    def to_dict(self) -> dict:
        return {"D": self.D, "as_count": self.as_count, "witt_count": self.witt_count, "equal": self.equal}


def match_filtrations(p: int, D_max: int, crosscheck_max: int = WITT_CROSSCHECK_MAX) -> list[FiltrationRow]:
    """Rows D = 1..D_max comparing cover and subgroup counts; mismatches are data."""
    _check_as_args(p, D_max)
    return [
        FiltrationRow(D, count_as_covers(p, D), count_witt_index_p(p, D, crosscheck_max))
        for D in range(1, D_max + 1)
    ]


def rows_to_csv(rows: list[FiltrationRow]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["D", "as_count", "witt_count", "equal"], lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.to_dict())
    return buf.getvalue()


def divisors(n: int) -> list[int]:
    return [k for k in range(1, n + 1) if n % k == 0]


def tame_count(q: int) -> list[int]:
    """Orders of the cyclic subgroups of F_q^x, found by scanning element orders."""
    require_within(q, 2**16, what="tame scan")
    field = field_for_order(q)
    orders = set()
    for x in enumerate_field(field):
        if not x:
            continue
        k, y = 1, x
        while y != 1:
            y = y * x
            k += 1
        orders.add(k)
    result = sorted(orders)
    if result != divisors(q - 1):
        raise VerificationError(f"unit-group scan {result} disagrees with divisors of {q - 1}")
    return result
