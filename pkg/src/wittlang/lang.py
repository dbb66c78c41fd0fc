"""The Lang map x -> x^{-1} Frob_q(x) on L_{n,d}, its kernel and fibers, and
the induced map alpha: G(F_q) -> Gamma for an isogeny gamma: H -> G.
"""
from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Mapping

from .caps import require_within
from .errors import DomainError, LiftError, SpecError, VerificationError
from .gf import FieldSpec
from .lgroup import (
    TruncElem,
    embed_elem,
    enumerate_group,
    frob_elem,
    frobenius_exponent,
    iter_group,
    linv,
    lmul,
)

MAX_WORK_DEGREE = 12


@dataclass(frozen=True)
class LangContext:
    """Fixed field F_q inside a work field F_{q^m}, for groups of shape (n, d)."""

    base_q: int
    work_field: FieldSpec
    n: int = 1
    d: int = 1

    def __post_init__(self) -> None:
        e = frobenius_exponent(self.work_field, self.base_q)
        if e < 1 or self.work_field.r % e:
            raise DomainError(f"F_{self.base_q} is not a subfield of {self.work_field}")
        if self.n < 1 or self.d < 1:
            raise DomainError("need n >= 1 and d >= 1")

    @classmethod
    def create(cls, p: int, base_degree: int, work_degree: int, n: int = 1, d: int = 1) -> "LangContext":
        """Base F_{p^base_degree}, work field of degree ``work_degree`` over it."""
        return cls(p**base_degree, FieldSpec.of(p, base_degree * work_degree), n, d)

    @property
    def base_field(self) -> FieldSpec:
        w = self.work_field
        return FieldSpec.of(w.p, frobenius_exponent(w, self.base_q))

    @property
    def work_degree(self) -> int:
        return self.work_field.r // self.base_field.r

    def with_work_field(self, work_field: FieldSpec) -> "LangContext":
        return LangContext(self.base_q, work_field, self.n, self.d)

    def group(self) -> list[TruncElem]:
        return enumerate_group(self.n, self.d, self.work_field)

    def identity(self) -> TruncElem:
        return TruncElem.identity(self.n, self.d, self.work_field)

    def to_dict(self) -> dict:
        return {"base_q": self.base_q, "work_field": self.work_field.to_dict(), "n": self.n, "d": self.d}


def _check(x: TruncElem, ctx: LangContext) -> None:
    if x.field != ctx.work_field:
        raise SpecError(f"element lives over {x.field}, context works over {ctx.work_field}")
    if (x.n, x.d) != (ctx.n, ctx.d):
        raise SpecError(f"element shape {x.shape} does not match context {(ctx.n, ctx.d)}")


def lang(x: TruncElem, ctx: LangContext) -> TruncElem:
    _check(x, ctx)
    return lmul(linv(x), frob_elem(x, ctx.base_q))


def lang_kernel(ctx: LangContext) -> list[TruncElem]:
    return [x for x in iter_group(ctx.n, ctx.d, ctx.work_field) if lang(x, ctx).is_identity()]


def rational_subgroup(ctx: LangContext) -> list[TruncElem]:
    """L_{n,d}(F_q) pushed into the work field along the fixed embedding."""
    return [embed_elem(x, ctx.work_field) for x in enumerate_group(ctx.n, ctx.d, ctx.base_field)]


@dataclass
class FiberReport:
    group_size: int
    kernel: list[TruncElem]
    fiber_sizes: Counter

    @property
    def kernel_size(self) -> int:
        return len(self.kernel)

    @property
    def fiber_count(self) -> int:
        return sum(self.fiber_sizes.values())

    @property
    def uniform(self) -> bool:
        return set(self.fiber_sizes) == {self.kernel_size}

    def to_dict(self) -> dict:
        return {
            "kernel_size": self.kernel_size,
            "fiber_count": self.fiber_count,
            "fiber_sizes": {str(k): v for k, v in sorted(self.fiber_sizes.items())},
            "group_size": self.group_size,
            "uniform": self.uniform,
            "elements": [x.to_dict() for x in self.kernel],
        }


def lang_fibers(ctx: LangContext) -> FiberReport:
    """Partition the work-field group by the value of the Lang map."""
    fibers: dict[TruncElem, int] = defaultdict(int)
    kernel = []
    total = 0
    for x in iter_group(ctx.n, ctx.d, ctx.work_field):
        y = lang(x, ctx)
        fibers[y] += 1
        total += 1
        if y.is_identity():
            kernel.append(x)
    return FiberReport(total, kernel, Counter(fibers.values()))


# -- the induced map alpha -----------------------------------------------------


@dataclass
class Isogeny:
    """A homomorphism gamma: H -> G with finite kernel.

    ``kind == "lang"``: gamma is the Lang map for Frob_{q}, recomputed over
    whatever work field is in use.  ``kind == "table"``: gamma is an explicit
    graph over one fixed field, verified to be a homomorphism at construction.
    """

    kind: str
    q: int | None = None
    table: Mapping[TruncElem, TruncElem] | None = None
    abelian: bool | None = None
    _field: FieldSpec | None = field(default=None, repr=False)

    @classmethod
    def lang(cls, q: int) -> "Isogeny":
        return cls("lang", q=q)

    @classmethod
    def from_table(cls, table: Mapping[TruncElem, TruncElem], check: bool = True) -> "Isogeny":
        if not table:
            raise DomainError("empty isogeny table")
        domain = list(table)
        fields = {x.field for x in domain}
        if len(fields) != 1:
            raise SpecError("table domain mixes fields")
        abelian = all(lmul(a, b) == lmul(b, a) for a, b in itertools.combinations(domain, 2))
        if check:
            size = len(domain)
            require_within(size * size, what="isogeny homomorphism check")
            for a in domain:
                for b in domain:
                    ab = lmul(a, b)
                    if ab not in table:
                        raise DomainError("table domain is not closed under multiplication")
                    if table[ab] != lmul(table[a], table[b]):
                        raise DomainError("table is not a homomorphism")
        return cls("table", table=dict(table), abelian=abelian, _field=fields.pop())

    def apply(self, h: TruncElem, ctx: LangContext) -> TruncElem:
        if self.kind == "lang":
            return lmul(linv(h), frob_elem(h, self.q))
        try:
            return self.table[h]
        except KeyError:
            raise SpecError("element outside the isogeny table") from None

    def is_abelian(self, ctx: LangContext) -> bool:
        if self.kind == "lang":
            # L_{n,d} is commutative iff n == 1 or d == 1
            return ctx.n == 1 or ctx.d == 1
        return bool(self.abelian)

    def domain(self, ctx: LangContext) -> list[TruncElem]:
        if self.kind == "lang":
            return ctx.group()
        if self._field != ctx.work_field:
            raise SpecError("isogeny table does not live over the context work field")
        return list(self.table)

    def describe(self) -> dict:
        if self.kind == "lang":
            return {"kind": "lang", "q": self.q}
        return {"kind": "table", "size": len(self.table)}


@dataclass
class AlphaResult:
    x: TruncElem
    value: TruncElem
    values: list[TruncElem]
    work_field: FieldSpec

    @property
    def well_defined(self) -> bool:
        return len(self.values) == 1

    def to_dict(self) -> dict:
        return {
            "x": self.x.to_dict(),
            "value": self.value.to_dict(),
            "well_defined": self.well_defined,
            "values": [v.to_dict() for v in self.values],
            "work_field": self.work_field.to_dict(),
        }


def _rational_in(x: TruncElem, ctx: LangContext) -> TruncElem:
    if x.field == ctx.work_field:
        return x
    if x.field != ctx.base_field:
        raise SpecError(f"{x.field} is neither the base nor the work field")
    return embed_elem(x, ctx.work_field)


def _alpha_scan(gamma: Isogeny, ctx: LangContext) -> dict[TruncElem, list[TruncElem]]:
    """gamma-fibers over the work field: G-element -> list of lang values of its preimages."""
    out: dict[TruncElem, list[TruncElem]] = defaultdict(list)
    for h in gamma.domain(ctx):
        value = lang(h, ctx)
        bucket = out[gamma.apply(h, ctx)]
        if value not in bucket:
            bucket.append(value)
    return out


def _check_in_kernel(values, gamma: Isogeny, ctx: LangContext) -> None:
    for v in values:
        if not gamma.apply(v, ctx).is_identity():
            raise VerificationError("alpha value lies outside ker(gamma); inconsistent cover descriptor")


def step2_alpha(
    x: TruncElem, gamma: Isogeny, ctx: LangContext, max_degree: int = MAX_WORK_DEGREE
) -> AlphaResult:
    """alpha(x) = lang(h) for a preimage h of the rational point x under gamma.

    For a Lang-type gamma the work field is doubled until a preimage appears
    (total degree over F_p at most ``max_degree``).
    """
    while True:
        xw = _rational_in(x, ctx)
        if not frob_elem(xw, ctx.base_q) == xw:
            raise DomainError("x is not F_q-rational")
        values: list[TruncElem] = []
        for h in gamma.domain(ctx):
            if gamma.apply(h, ctx) == xw:
                v = lang(h, ctx)
                if v not in values:
                    values.append(v)
        if values:
            _check_in_kernel(values, gamma, ctx)
            return AlphaResult(xw, values[0], values, ctx.work_field)
        next_degree = 2 * ctx.work_field.r
        if gamma.kind != "lang" or next_degree > max_degree:
            raise LiftError(f"no preimage of x over {ctx.work_field}")
        ctx = ctx.with_work_field(FieldSpec.of(ctx.work_field.p, next_degree))
        if x.field != ctx.base_field:
            raise LiftError("x must be given over the base field when the work field grows")


@dataclass
class AlphaReport:
    gamma: dict
    work_field: FieldSpec
    domain_size: int
    kernel_size: int
    image_size: int
    hom_failures: int
    ambiguous: int
    surjective: bool
    abelian: bool

    @property
    def passed(self) -> bool:
        return self.surjective and self.hom_failures == 0 and self.ambiguous == 0

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        out["work_field"] = self.work_field.to_dict()
        out["passed"] = self.passed
        return out


def alpha_report(gamma: Isogeny, ctx: LangContext, rational: list[TruncElem] | None = None) -> AlphaReport:
    """alpha on every rational point: homomorphism and surjectivity onto ker(gamma)."""
    fibers = _alpha_scan(gamma, ctx)
    points = rational if rational is not None else rational_subgroup(ctx)
    points = [_rational_in(x, ctx) for x in points]
    kernel = [h for h in gamma.domain(ctx) if gamma.apply(h, ctx).is_identity()]
    alpha: dict[TruncElem, TruncElem] = {}
    ambiguous = 0
    for x in points:
        values = fibers.get(x)
        if not values:
            raise LiftError(f"rational point without preimage over {ctx.work_field}")
        _check_in_kernel(values, gamma, ctx)
        if len(values) > 1:
            ambiguous += 1
        alpha[x] = values[0]
    failures = sum(
        1 for a in points for b in points if alpha[lmul(a, b)] != lmul(alpha[a], alpha[b])
    )
    image = set(alpha.values())
    return AlphaReport(
        gamma.describe(),
        ctx.work_field,
        len(points),
        len(kernel),
        len(image),
        failures,
        ambiguous,
        image == set(kernel),
        gamma.is_abelian(ctx),
    )
