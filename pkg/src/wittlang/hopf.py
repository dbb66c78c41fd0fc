"""Coordinate ring O(L_{n,d}) on generators X_{ij lam} and its comultiplication.

X_{ij lam} is the function M -> (A_lam)_{ij}.  Generators with lam = 0 are
never stored: X_{ij0} = delta_ij is substituted while expanding.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DomainError, SpecError
from .gf import FieldElem, FieldSpec
from .lgroup import TruncElem, enumerate_group, linv, lmul

Generator = tuple[int, int, int]


def _order_key(g: Generator) -> tuple[int, int, int]:
    i, j, lam = g
    return (lam, i, j)


@dataclass(frozen=True)
class HopfMonomial:
    n: int
    d: int
    factors: tuple[Generator, ...] = ()

    def __post_init__(self) -> None:
        for g in self.factors:
            _check_generator(g, self.n, self.d)
        object.__setattr__(self, "factors", tuple(sorted(map(tuple, self.factors), key=_order_key)))

    @classmethod
    def one(cls, n: int, d: int) -> "HopfMonomial":
        return cls(n, d, ())

    @classmethod
    def gen(cls, n: int, d: int, i: int, j: int, lam: int) -> "HopfMonomial":
        return cls(n, d, ((i, j, lam),))

    def is_one(self) -> bool:
        return not self.factors

    def __mul__(self, other: "HopfMonomial") -> "HopfMonomial":
        if (self.n, self.d) != (other.n, other.d):
            raise SpecError("monomials of different shapes")
        return HopfMonomial(self.n, self.d, self.factors + other.factors)

    def sort_key(self) -> tuple:
        return (len(self.factors), tuple(_order_key(g) for g in self.factors))

    def to_list(self) -> list[list[int]]:
        return [list(g) for g in self.factors]

    def __repr__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"X{i}{j}{lam}" for i, j, lam in self.factors)


def _check_generator(g: Sequence[int], n: int, d: int) -> None:
    if len(g) != 3:
        raise DomainError(f"generator must be (i, j, lam), got {g!r}")
    i, j, lam = g
    if not (1 <= i <= n and 1 <= j <= n and 1 <= lam <= d):
        raise DomainError(f"generator {tuple(g)} out of range for n={n}, d={d}")


class TensorPoly:
    """F-linear combination of k-fold tensors of monomials (k = 2 unless stated).

    Zero coefficients are never stored.  Equality is equality of term maps.
    """

    __slots__ = ("field", "arity", "terms")

    def __init__(self, field: FieldSpec, terms: dict | None = None, arity: int = 2):
        self.field = field
        self.arity = arity
        self.terms: dict[tuple[HopfMonomial, ...], int] = {}
        for key, c in (terms or {}).items():
            self._accumulate(key, c)

    def _accumulate(self, key: tuple[HopfMonomial, ...], c: int) -> None:
        if len(key) != self.arity:
            raise SpecError(f"expected {self.arity}-fold tensor, got {len(key)}")
        F = self.field
        new = F.add(self.terms.get(key, 0), c)
        if new:
            self.terms[key] = new
        else:
            self.terms.pop(key, None)

    def __add__(self, other: "TensorPoly") -> "TensorPoly":
        out = TensorPoly(self.field, self.terms, self.arity)
        for key, c in other.terms.items():
            out._accumulate(key, c)
        return out

    def __mul__(self, other: "TensorPoly") -> "TensorPoly":
        F = self.field
        out = TensorPoly(F, arity=self.arity)
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                out._accumulate(tuple(x * y for x, y in zip(k1, k2)), F.mul(c1, c2))
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, TensorPoly):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    def __len__(self) -> int:
        return len(self.terms)

    def items(self) -> list[tuple[tuple[HopfMonomial, ...], int]]:
        """Terms in canonical order."""
        return sorted(self.terms.items(), key=lambda kv: tuple(m.sort_key() for m in kv[0]))

    def __repr__(self) -> str:
        parts = []
        for key, c in self.items():
            coeff = "" if c == 1 else f"{self.field.elem(c)}*"
            parts.append(coeff + "(x)".join(map(repr, key)))
        return " + ".join(parts) or "0"

    def to_json(self) -> list[dict]:
        if self.arity != 2:
            raise SpecError("only binary tensors have a JSON form")
        return [
            {"left": left.to_list(), "right": right.to_list(), "coeff": list(self.field.coeffs(c))}
            for (left, right), c in self.items()
        ]

    @classmethod
    def from_json(cls, field: FieldSpec, n: int, d: int, data: list[dict]) -> "TensorPoly":
        out = cls(field)
        for term in data:
            key = (
                HopfMonomial(n, d, tuple(tuple(g) for g in term["left"])),
                HopfMonomial(n, d, tuple(tuple(g) for g in term["right"])),
            )
            out._accumulate(key, field.code(term["coeff"]))
        return out


class CoordinateRing:
    """O(L_{n,d}) over ``field`` with comultiplication, counit and evaluation."""

    def __init__(self, n: int, d: int, field: FieldSpec):
        if n < 1 or d < 1:
            raise DomainError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
        self.n, self.d, self.field = n, d, field
        self._comult_cache: dict[Generator, TensorPoly] = {}

    def generators(self) -> list[Generator]:
        return sorted(
            itertools.product(range(1, self.n + 1), range(1, self.n + 1), range(1, self.d + 1)),
            key=_order_key,
        )

    def one(self) -> HopfMonomial:
        return HopfMonomial.one(self.n, self.d)

    def gen(self, i: int, j: int, lam: int) -> HopfMonomial:
        return HopfMonomial.gen(self.n, self.d, i, j, lam)

    # -- coalgebra ------------------------------------------------------------

    def _lam_factor(self, i: int, j: int, lam: int) -> HopfMonomial | None:
        """X_{ij lam} as a monomial; lam = 0 gives delta_ij (1 or None for 0)."""
        if lam == 0:
            return self.one() if i == j else None
        return self.gen(i, j, lam)

    def comult(self, g: Generator) -> TensorPoly:
        """X_{ij lam} -> sum over l and mu + nu = lam of X_{il nu} (x) X_{lj mu}."""
        g = tuple(g)
        _check_generator(g, self.n, self.d)
        hit = self._comult_cache.get(g)
        if hit is not None:
            return hit
        i, j, lam = g
        out = TensorPoly(self.field)
        for l in range(1, self.n + 1):
            for nu in range(lam + 1):
                left = self._lam_factor(i, l, nu)
                right = self._lam_factor(l, j, lam - nu)
                if left is not None and right is not None:
                    out._accumulate((left, right), 1)
        self._comult_cache[g] = out
        return out

    def comult_monomial(self, m: HopfMonomial) -> TensorPoly:
        out = TensorPoly(self.field, {(self.one(), self.one()): 1})
        for g in m.factors:
            out = out * self.comult(g)
        return out

    def counit(self, m: HopfMonomial) -> FieldElem:
        return self.field.elem(1 if m.is_one() else 0)

    def counit_side(self, t: TensorPoly, side: int) -> dict[HopfMonomial, int]:
        """Apply the counit to tensor slot ``side`` (0 = left), returning {monomial: code}."""
        out: dict[HopfMonomial, int] = {}
        F = self.field
        for key, c in t.terms.items():
            if key[side].is_one():
                rest = key[1 - side]
                v = F.add(out.get(rest, 0), c)
                if v:
                    out[rest] = v
                else:
                    out.pop(rest, None)
        return out

    def coassoc_sides(self, g: Generator) -> tuple[TensorPoly, TensorPoly]:
        """((comult (x) id) comult g, (id (x) comult) comult g) as triple tensors."""
        F = self.field
        lhs, rhs = TensorPoly(F, arity=3), TensorPoly(F, arity=3)
        for (left, right), c in self.comult(g).terms.items():
            for (a, b), c2 in self.comult_monomial(left).terms.items():
                lhs._accumulate((a, b, right), F.mul(c, c2))
            for (a, b), c2 in self.comult_monomial(right).terms.items():
                rhs._accumulate((left, a, b), F.mul(c, c2))
        return lhs, rhs

    def check_coassociativity(self, g: Generator) -> bool:
        lhs, rhs = self.coassoc_sides(g)
        return lhs == rhs

    def check_counit(self, g: Generator) -> bool:
        target = {self.gen(*g): 1}
        t = self.comult(g)
        return self.counit_side(t, 0) == target and self.counit_side(t, 1) == target

    # -- evaluation -----------------------------------------------------------

    def _check_elem(self, a: TruncElem) -> None:
        if (a.n, a.d) != (self.n, self.d) or a.field != self.field:
            raise SpecError(f"element of shape {a.shape} over {a.field} does not match ring")

    def _eval_code(self, m: HopfMonomial, a: TruncElem) -> int:
        F = self.field
        acc = 1
        coeffs = a.coeffs
        for i, j, lam in m.factors:
            acc = F.mul(acc, coeffs[lam - 1][i - 1][j - 1])
            if not acc:
                return 0
        return acc

    def evaluate(self, m: HopfMonomial, a: TruncElem) -> FieldElem:
        if (m.n, m.d) != (self.n, self.d):
            raise SpecError("monomial shape does not match ring")
        self._check_elem(a)
        return self.field.elem(self._eval_code(m, a))

    def _eval_tensor_code(self, t: TensorPoly, a: TruncElem, b: TruncElem) -> int:
        F = self.field
        acc = 0
        for (left, right), c in t.terms.items():
            x = self._eval_code(left, a)
            if x:
                y = self._eval_code(right, b)
                if y:
                    acc = F.add(acc, F.mul(c, F.mul(x, y)))
        return acc

    def evaluate_tensor(self, t: TensorPoly, a: TruncElem, b: TruncElem) -> FieldElem:
        self._check_elem(a)
        self._check_elem(b)
        return self.field.elem(self._eval_tensor_code(t, a, b))

    def pairing_check(self, g: Generator, a: TruncElem, b: TruncElem) -> bool:
        """evaluate(g, a*b) == comult(g) evaluated on (a, b)."""
        self._check_elem(a)
        self._check_elem(b)
        m = self.gen(*g)
        return self._eval_code(m, lmul(a, b)) == self._eval_tensor_code(self.comult(g), a, b)

    def antipode_eval(self, m: HopfMonomial, a: TruncElem) -> FieldElem:
        """S(m) evaluated at a, i.e. m evaluated at the inverse of a."""
        self._check_elem(a)
        return self.field.elem(self._eval_code(m, linv(a)))

    def antipode_identity(self, g: Generator, a: TruncElem) -> bool:
        """sum S(x_(1))(a) x_(2)(a) == counit(x) for x = X_g."""
        self._check_elem(a)
        return self._eval_tensor_code(self.comult(g), linv(a), a) == self.counit(self.gen(*g)).code


@dataclass
class PairingReport:
    n: int
    d: int
    q: int
    pairs: int
    generators: int
    exhaustive: bool
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        out = dict(self.__dict__)
        out["passed"] = self.passed
        return out


def pairing_suite(
    ring: CoordinateRing,
    samples: int | None = None,
    seed: int = 0,
    exhaustive_limit: int = 2**16,
    cap: int | None = None,
) -> PairingReport:
    """Check pairing compatibility for every generator.

    All pairs are used when there are at most ``exhaustive_limit`` of them and
    ``samples`` is not given; otherwise ``samples`` random pairs (default 10^4).
    """
    gens = ring.generators()
    size = ring.field.q ** (ring.n * ring.n * ring.d)
    exhaustive = samples is None and size * size <= exhaustive_limit
    rng = random.Random(seed)
    if exhaustive:
        elements = enumerate_group(ring.n, ring.d, ring.field, cap)
        pairs: Iterable = itertools.product(elements, repeat=2)
        count = len(elements) ** 2
    else:
        count = samples or 10_000
        pairs = (
            (_random_elem(ring, rng), _random_elem(ring, rng)) for _ in range(count)
        )
    terms = [(ring.gen(*g), ring.comult(g)) for g in gens]
    failures = 0
    for a, b in pairs:
        ab = lmul(a, b)
        for m, t in terms:
            if ring._eval_code(m, ab) != ring._eval_tensor_code(t, a, b):
                failures += 1
    return PairingReport(ring.n, ring.d, ring.field.q, count, len(gens), exhaustive, failures)


def _random_elem(ring: CoordinateRing, rng: random.Random) -> TruncElem:
    n, q = ring.n, ring.field.q
    return TruncElem(
        ring.field,
        tuple(
            tuple(tuple(rng.randrange(q) for _ in range(n)) for _ in range(n))
            for _ in range(ring.d)
        ),
    )
