"""Truncated matrix groups L_{n,d}(F) = (1 + s gl_n(F)[s]/(s^{d+1}))^x.

An element is stored by its coefficient matrices A_1..A_d; the constant term
is always the identity.  The punctured-line group Z x L_{n,d} and the
polynomial-matrix membership predicates for the affine and punctured line
also live here.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

from . import linalg
from .caps import require_within
from .errors import DomainError, SpecError
from .gf import FieldSpec, embedding_table
from .linalg import Matrix


class TruncElem:
    """I + A_1 s + ... + A_d s^d modulo s^{d+1}."""

    __slots__ = ("n", "d", "field", "coeffs", "_hash")

    def __init__(self, field: FieldSpec, coeffs: Sequence[Matrix]):
        coeffs = tuple(coeffs)
        if not coeffs:
            raise DomainError("truncation level d must be >= 1")
        n = len(coeffs[0])
        if n < 1 or any(len(m) != n or any(len(row) != n for row in m) for m in coeffs):
            raise SpecError("all coefficient matrices must be n x n")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "d", len(coeffs))
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("TruncElem is immutable")

    @classmethod
    def _raw(cls, field: FieldSpec, coeffs: tuple, n: int) -> "TruncElem":
        # trusted constructor for results of group operations; no shape checks
        obj = object.__new__(cls)
        setter = object.__setattr__
        setter(obj, "n", n)
        setter(obj, "d", len(coeffs))
        setter(obj, "field", field)
        setter(obj, "coeffs", coeffs)
        setter(obj, "_hash", None)
        return obj

    @classmethod
    def identity(cls, n: int, d: int, field: FieldSpec) -> "TruncElem":
        if n < 1 or d < 1:
            raise DomainError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
        z = linalg.zero(n)
        return cls(field, (z,) * d)

    @classmethod
    def from_lists(cls, field: FieldSpec, coeffs) -> "TruncElem":
        """Build from a list of d matrices whose entries are codes or coefficient vectors."""
        return cls(field, tuple(linalg.from_ints(field, m) for m in coeffs))

    @classmethod
    def series(cls, field: FieldSpec, terms: Sequence[int]) -> "TruncElem":
        """The 1x1 element 1 + terms[0] s + terms[1] s^2 + ..."""
        return cls(field, tuple(((field.from_int(t) if field.r == 1 else t,),) for t in terms))

    @property
    def shape(self) -> tuple[int, int]:
        return self.n, self.d

    def is_identity(self) -> bool:
        return all(linalg.is_zero(m) for m in self.coeffs)

    def __mul__(self, other: "TruncElem") -> "TruncElem":
        return lmul(self, other)

    def __pow__(self, e: int) -> "TruncElem":
        base = self if e >= 0 else linv(self)
        e = abs(e)
        result = TruncElem.identity(self.n, self.d, self.field)
        while e:
            if e & 1:
                result = lmul(result, base)
            base = lmul(base, base)
            e >>= 1
        return result

    def inverse(self) -> "TruncElem":
        return linv(self)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncElem):
            return NotImplemented
        return self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash(self.coeffs)
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self) -> str:
        if self.n == 1:
            terms = ["1"] + [
                f"({self.field.elem(m[0][0])})s^{i}" for i, m in enumerate(self.coeffs, 1) if m[0][0]
            ]
            return "TruncElem(" + " + ".join(terms) + ")"
        return f"TruncElem(n={self.n}, d={self.d}, {self.field}, coeffs={self.coeffs})"

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "field": self.field.to_dict(),
            "coeffs": [linalg.to_coeffs(self.field, m) for m in self.coeffs],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TruncElem":
        field = FieldSpec.from_dict(data["field"])
        elem = cls.from_lists(field, data["coeffs"])
        if elem.n != data["n"] or elem.d != data["d"]:
            raise SpecError("declared shape does not match coefficients")
        return elem


def _check_same(a: TruncElem, b: TruncElem) -> None:
    if a.n != b.n or a.d != b.d:
        raise SpecError(f"shape mismatch: {a.shape} vs {b.shape}")
    if a.field != b.field:
        raise SpecError(f"field mismatch: {a.field} vs {b.field}")


def lmul(a: TruncElem, b: TruncElem) -> TruncElem:
    """C_k = A_k + B_k + sum_{i+j=k, i,j>=1} A_i B_j."""
    _check_same(a, b)
    F = a.field
    A, B = a.coeffs, b.coeffs
    d = a.d
    if a.n == 1:
        x = [m[0][0] for m in A]
        y = [m[0][0] for m in B]
        out1 = []
        if F.r == 1:
            p = F.p
            for k in range(d):
                c = x[k] + y[k]
                for i in range(k):
                    c += x[i] * y[k - 1 - i]
                out1.append(((c % p,),))
        else:
            add, mul = F.add, F.mul
            for k in range(d):
                c = add(x[k], y[k])
                for i in range(k):
                    if x[i] and y[k - 1 - i]:
                        c = add(c, mul(x[i], y[k - 1 - i]))
                out1.append(((c,),))
        return TruncElem._raw(F, tuple(out1), 1)
    if F.r == 1:
        return TruncElem._raw(F, _prime_series_product(F.p, a.n, A, B, 1), a.n)
    out = []
    for k in range(1, d + 1):
        c = linalg.add(F, A[k - 1], B[k - 1])
        for i in range(1, k):
            c = linalg.add(F, c, linalg.mul(F, A[i - 1], B[k - i - 1]))
        out.append(c)
    return TruncElem._raw(F, tuple(out), a.n)


def _prime_series_product(p: int, n: int, A, B, sign: int) -> tuple:
    """Product coefficients (sign=1) or inverse coefficients of A (sign=-1) over F_p.

    Entries are accumulated as plain integers and reduced once.  For the
    inverse, B is ignored and the recurrence reads back its own output.
    """
    d = len(A)
    rng = range(n)
    out: list[Matrix] = []
    for k in range(d):
        Ak = A[k]
        if sign == 1:
            Bk = B[k]
            acc = [[Ak[i][j] + Bk[i][j] for j in rng] for i in rng]
        else:
            acc = [list(row) for row in Ak]
        for t in range(k):
            X = A[t]
            Y = B[k - 1 - t] if sign == 1 else out[k - 1 - t]
            for i in rng:
                Xi = X[i]
                row = acc[i]
                for l in rng:
                    x = Xi[l]
                    if x:
                        Yl = Y[l]
                        for j in rng:
                            row[j] += x * Yl[j]
        if sign == 1:
            out.append(tuple(tuple(v % p for v in row) for row in acc))
        else:
            out.append(tuple(tuple(-v % p for v in row) for row in acc))
    return tuple(out)


def _series_mul(F: FieldSpec, x: list[Matrix], y: list[Matrix], d: int) -> list[Matrix]:
    """Product of matrix series indexed from s^0, truncated at s^d."""
    n = len(x[0])
    out = []
    for k in range(d + 1):
        c = linalg.zero(n)
        for i in range(k + 1):
            c = linalg.add(F, c, linalg.mul(F, x[i], y[k - i]))
        out.append(c)
    return out


def geometric_inverse(a: TruncElem) -> TruncElem:
    """sum_{k<=d} (-N)^k for a = I + N, expanded power by power."""
    F, n, d = a.field, a.n, a.d
    minus_n = [linalg.zero(n)] + [linalg.neg(F, m) for m in a.coeffs]
    total = [linalg.identity(n)] + [linalg.zero(n)] * d
    power = list(total)
    for _ in range(d):
        power = _series_mul(F, power, minus_n, d)
        total = [linalg.add(F, x, y) for x, y in zip(total, power)]
    return TruncElem._raw(F, tuple(total[1:]), n)


def linv(a: TruncElem) -> TruncElem:
    """Inverse of I + N, i.e. the geometric series sum (-N)^k truncated at s^d.

    Evaluated by the recurrence B_k = -(A_k + sum_{i<k} A_i B_{k-i}), which
    collects the same series in O(d^2) matrix products.
    """
    F, n, d = a.field, a.n, a.d
    A = a.coeffs
    if n == 1:
        x = [m[0][0] for m in A]
        y: list[int] = []
        for k in range(d):
            c = x[k]
            if F.r == 1:
                for i in range(k):
                    c += x[i] * y[k - 1 - i]
                y.append(-c % F.p)
            else:
                for i in range(k):
                    if x[i] and y[k - 1 - i]:
                        c = F.add(c, F.mul(x[i], y[k - 1 - i]))
                y.append(F.neg(c))
        return TruncElem._raw(F, tuple(((c,),) for c in y), 1)
    if F.r == 1:
        return TruncElem._raw(F, _prime_series_product(F.p, n, A, None, -1), n)
    B: list[Matrix] = []
    for k in range(1, d + 1):
        c = A[k - 1]
        for i in range(1, k):
            c = linalg.add(F, c, linalg.mul(F, A[i - 1], B[k - i - 1]))
        B.append(linalg.neg(F, c))
    return TruncElem._raw(F, tuple(B), n)


def _poly_mul(F: FieldSpec, x: list[int], y: list[int], d: int) -> list[int]:
    out = [0] * (d + 1)
    for i, xi in enumerate(x):
        if xi:
            for j in range(d + 1 - i):
                if y[j]:
                    out[i + j] = F.add(out[i + j], F.mul(xi, y[j]))
    return out


def _perm_sign(perm: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(perm)
    for start in range(len(perm)):
        if seen[start]:
            continue
        length, j = 0, start
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def det_map(a: TruncElem) -> TruncElem:
    """Determinant of I + sum A_i s^i mod s^{d+1}, as an element of L_{1,d}."""
    F, n, d = a.field, a.n, a.d
    entry = [
        [[1 if i == j else 0] + [m[i][j] for m in a.coeffs] for j in range(n)] for i in range(n)
    ]
    total = [0] * (d + 1)
    for perm in itertools.permutations(range(n)):
        term = [1] + [0] * d
        for i, j in enumerate(perm):
            term = _poly_mul(F, term, entry[i][j], d)
        if _perm_sign(perm) < 0:
            term = [F.neg(x) for x in term]
        total = [F.add(x, y) for x, y in zip(total, term)]
    if total[0] != 1:  # pragma: no cover - constant term of det(I + sN) is 1
        raise AssertionError("determinant constant term is not 1")
    return TruncElem(F, tuple(((x,),) for x in total[1:]))


def frobenius_exponent(field: FieldSpec, q: int) -> int:
    """e with q == p**e, or DomainError."""
    e, value = 0, 1
    while value < q:
        value *= field.p
        e += 1
    if value != q or q < 1:
        raise DomainError(f"{q} is not a power of the characteristic {field.p}")
    return e


def frob_elem(a: TruncElem, q: int) -> TruncElem:
    """Entrywise x -> x^q on the coefficient matrices; s is fixed."""
    F = a.field
    e = frobenius_exponent(F, q)
    if F.r == 1 or e == 0:
        return a
    return TruncElem(F, tuple(linalg.map_entries(lambda x: F.frob(x, e), m) for m in a.coeffs))


def truncate(a: TruncElem, level: int) -> TruncElem:
    if not 1 <= level <= a.d:
        raise DomainError(f"truncation level must lie in 1..{a.d}, got {level}")
    return TruncElem(a.field, a.coeffs[:level])


def corner_restrict(a: TruncElem, m: int) -> TruncElem:
    """Replace every A_i by its upper-left m x m block (a set map only)."""
    if not 1 <= m < a.n:
        raise DomainError(f"corner size must lie in 1..{a.n - 1}, got {m}")
    return TruncElem(a.field, tuple(linalg.block(c, m) for c in a.coeffs))


@dataclass(frozen=True)
class CornerProbe:
    """Outcome of testing corner(a*b) == corner(a)*corner(b) on one pair."""

    m: int
    restricted_product: TruncElem
    product_of_restrictions: TruncElem

    @property
    def holds(self) -> bool:
        return self.restricted_product == self.product_of_restrictions

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "holds": self.holds,
            "restricted_product": self.restricted_product.to_dict(),
            "product_of_restrictions": self.product_of_restrictions.to_dict(),
        }


def corner_homomorphism_probe(a: TruncElem, b: TruncElem, m: int) -> CornerProbe:
    return CornerProbe(
        m,
        corner_restrict(lmul(a, b), m),
        lmul(corner_restrict(a, m), corner_restrict(b, m)),
    )


def corner_witness(field: FieldSpec | None = None) -> tuple[TruncElem, TruncElem]:
    """The pair I + E_12 s, I + E_21 s in L_{2,2}."""
    F = field or FieldSpec.of(2)
    z = linalg.zero(2)
    a = TruncElem(F, (linalg.unit(2, 0, 1), z))
    b = TruncElem(F, (linalg.unit(2, 1, 0), z))
    return a, b


def group_order(n: int, d: int, field: FieldSpec) -> int:
    return field.q ** (n * n * d)


def iter_group(n: int, d: int, field: FieldSpec, cap: int | None = None) -> Iterator[TruncElem]:
    """All elements, lexicographic in (A_1 row-major, A_2, ...) code order."""
    require_within(group_order(n, d, field), cap, what=f"L_{{{n},{d}}}({field})")
    per = n * n
    for flat in itertools.product(range(field.q), repeat=per * d):
        yield TruncElem._raw(
            field,
            tuple(linalg.unflatten(flat[k * per : (k + 1) * per], n) for k in range(d)),
            n,
        )


def enumerate_group(n: int, d: int, field: FieldSpec, cap: int | None = None) -> list[TruncElem]:
    return list(iter_group(n, d, field, cap))


def element_order(a: TruncElem) -> int:
    k, x = 1, a
    while not x.is_identity():
        x = lmul(x, a)
        k += 1
    return k


def embed_elem(a: TruncElem, target: FieldSpec) -> TruncElem:
    """Push coefficients into an extension field along the fixed embedding."""
    table = embedding_table(a.field, target)
    return TruncElem(target, tuple(linalg.map_entries(table.__getitem__, m) for m in a.coeffs))


def homomorphism_failures(
    elements: Sequence, fn: Callable, mul_src: Callable, mul_dst: Callable, pairs=None
) -> list[tuple]:
    """Pairs (a, b) with fn(a*b) != fn(a)*fn(b); exhaustive unless pairs are given."""
    images = {x: fn(x) for x in elements}
    failures = []
    it = pairs if pairs is not None else itertools.product(elements, repeat=2)
    for a, b in it:
        ab = mul_src(a, b)
        lhs = images[ab] if ab in images else fn(ab)
        if lhs != mul_dst(images[a], images[b]):
            failures.append((a, b))
    return failures


@dataclass
class GroupLawReport:
    n: int
    d: int
    q: int
    size: int
    expected_size: int
    identity_failures: int
    inverse_failures: int
    assoc_samples: int
    assoc_failures: int

    @property
    def passed(self) -> bool:
        return (
            self.size == self.expected_size
            and self.identity_failures == 0
            and self.inverse_failures == 0
            and self.assoc_failures == 0
        )

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        out["passed"] = self.passed
        return out


def check_group_laws(
    n: int, d: int, field: FieldSpec, samples: int = 10_000, seed: int = 0, cap: int | None = None
) -> GroupLawReport:
    """Exhaustive identity/inverse checks and sampled associativity on L_{n,d}(F)."""
    elements = enumerate_group(n, d, field, cap)
    e = TruncElem.identity(n, d, field)
    id_fail = sum(1 for a in elements if lmul(a, e) != a or lmul(e, a) != a)
    inv_fail = 0
    for a in elements:
        b = linv(a)
        if not lmul(a, b).is_identity() or not lmul(b, a).is_identity():
            inv_fail += 1
    rng = random.Random(seed)
    assoc_fail = 0
    for _ in range(samples):
        a, b, c = rng.choice(elements), rng.choice(elements), rng.choice(elements)
        if lmul(lmul(a, b), c) != lmul(a, lmul(b, c)):
            assoc_fail += 1
    return GroupLawReport(
        n, d, field.q, len(set(elements)), group_order(n, d, field), id_fail, inv_fail, samples, assoc_fail
    )


# -- punctured line: Z x L_{n,d} ------------------------------------------------


@dataclass(frozen=True)
class PuncturedElem:
    nu: int
    body: TruncElem

    def __mul__(self, other: "PuncturedElem") -> "PuncturedElem":
        return punctured_mul(self, other)

    def inverse(self) -> "PuncturedElem":
        return punctured_inv(self)

    @classmethod
    def identity(cls, n: int, d: int, field: FieldSpec) -> "PuncturedElem":
        return cls(0, TruncElem.identity(n, d, field))

    def is_identity(self) -> bool:
        return self.nu == 0 and self.body.is_identity()

    def to_dict(self) -> dict:
        out = self.body.to_dict()
        out["nu"] = self.nu
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "PuncturedElem":
        return cls(int(data["nu"]), TruncElem.from_dict(data))


def punctured_mul(a: PuncturedElem, b: PuncturedElem) -> PuncturedElem:
    return PuncturedElem(a.nu + b.nu, lmul(a.body, b.body))


def punctured_inv(a: PuncturedElem) -> PuncturedElem:
    return PuncturedElem(-a.nu, linv(a.body))


def enumerate_punctured(
    n: int, d: int, field: FieldSpec, nu_max: int = 8, cap: int | None = None
) -> list[PuncturedElem]:
    """Elements of Z x L_{n,d}(F) with |nu| <= nu_max."""
    if nu_max < 0:
        raise DomainError("nu_max must be non-negative")
    body = enumerate_group(n, d, field, cap)
    require_within(len(body) * (2 * nu_max + 1), cap, what="punctured enumeration")
    return [PuncturedElem(nu, x) for nu in range(-nu_max, nu_max + 1) for x in body]


# -- polynomial matrices and membership predicates ------------------------------


@dataclass(frozen=True)
class LaurentPoly:
    """sum_k coeffs[k] t^(low + k) over a field, codes as coefficients."""

    field: FieldSpec
    low: int
    coeffs: tuple[int, ...]

    @classmethod
    def make(cls, field: FieldSpec, coeffs: Iterable[int], low: int = 0) -> "LaurentPoly":
        cs = [field.from_int(c) if field.r == 1 else c for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        start = 0
        while start < len(cs) and cs[start] == 0:
            start += 1
        if start == len(cs):
            return cls(field, 0, ())
        return cls(field, low + start, tuple(cs[start:]))

    @classmethod
    def from_dict(cls, field: FieldSpec, terms: dict[int, int]) -> "LaurentPoly":
        if not terms:
            return cls(field, 0, ())
        lo, hi = min(terms), max(terms)
        return cls.make(field, [terms.get(k, 0) for k in range(lo, hi + 1)], lo)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        F = self.field
        lo = min(self.low, other.low)
        hi = max(self.low + len(self.coeffs), other.low + len(other.coeffs))
        out = [0] * (hi - lo)
        for src in (self, other):
            for k, c in enumerate(src.coeffs):
                out[src.low - lo + k] = F.add(out[src.low - lo + k], c)
        return LaurentPoly.make(F, out, lo)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.field, self.low, tuple(self.field.neg(c) for c in self.coeffs))

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        F = self.field
        if self.is_zero() or other.is_zero():
            return LaurentPoly(F, 0, ())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            for j, y in enumerate(other.coeffs):
                out[i + j] = F.add(out[i + j], F.mul(x, y))
        return LaurentPoly.make(F, out, self.low + other.low)

    def evaluate(self, x: int) -> int:
        F = self.field
        if self.is_zero():
            return 0
        if self.low < 0 and x == 0:
            raise DomainError("Laurent polynomial has a pole at t = 0")
        acc = 0
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return F.mul(acc, F.pow(x, self.low)) if self.low else acc

    def monomial_exponent(self) -> int | None:
        """m if the polynomial is c t^m with c != 0, else None."""
        return self.low if len(self.coeffs) == 1 else None


@dataclass(frozen=True)
class PolyMatrix:
    field: FieldSpec
    entries: tuple[tuple[LaurentPoly, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.entries)
        if n < 1 or any(len(row) != n for row in self.entries):
            raise SpecError("PolyMatrix must be square and non-empty")
        if any(e.field != self.field for row in self.entries for e in row):
            raise SpecError("all entries must share the matrix field")

    @property
    def n(self) -> int:
        return len(self.entries)

    @classmethod
    def from_lists(cls, field: FieldSpec, rows) -> "PolyMatrix":
        """Entries given as coefficient lists (t^0 first), ints, dicts {exp: code} or LaurentPoly."""

        def conv(x):
            if isinstance(x, LaurentPoly):
                return x
            if isinstance(x, int):
                return LaurentPoly.make(field, [x])
            if isinstance(x, dict):
                return LaurentPoly.from_dict(field, {int(k): v for k, v in x.items()})
            return LaurentPoly.make(field, x)

        return cls(field, tuple(tuple(conv(x) for x in row) for row in rows))

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        n = self.n
        zero = LaurentPoly(self.field, 0, ())
        rows = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = zero
                for k in range(n):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            rows.append(tuple(row))
        return PolyMatrix(self.field, tuple(rows))

    def evaluate(self, x: int) -> Matrix:
        return tuple(tuple(e.evaluate(x) for e in row) for row in self.entries)

    def det(self) -> LaurentPoly:
        F = self.field
        total = LaurentPoly(F, 0, ())
        for perm in itertools.permutations(range(self.n)):
            term = LaurentPoly.make(F, [1])
            for i, j in enumerate(perm):
                term = term * self.entries[i][j]
            total = total + (term if _perm_sign(perm) > 0 else -term)
        return total

    def is_polynomial(self) -> bool:
        return all(e.low >= 0 for row in self.entries for e in row)


AFFINE = "affine-line"
PUNCTURED = "punctured-line"


def autf_member(M: PolyMatrix, variant: str = AFFINE) -> bool:
    """Membership of a polynomial matrix in the based automorphism functor.

    affine-line: entries in k[t], M(0) = I and det M a nonzero constant.
    punctured-line: entries in k[t, 1/t], M(1) = I and det M = c t^m, c != 0.
    """
    ident = linalg.identity(M.n)
    if variant == AFFINE:
        if not M.is_polynomial():
            return False
        return M.evaluate(0) == ident and M.det().monomial_exponent() == 0
    if variant == PUNCTURED:
        return M.evaluate(1) == ident and M.det().monomial_exponent() is not None
    raise DomainError(f"unknown variant {variant!r}")
