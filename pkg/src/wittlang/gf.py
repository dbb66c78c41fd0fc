"""Exact arithmetic in F_{p^r}.

Elements are stored as coefficient vectors over F_p (constant term first) with
respect to a fixed monic irreducible modulus.  Hot loops elsewhere in the
package work on the integer *code* of an element, ``sum(c_i * p**i)``; the
code order is the enumeration order (highest-degree coefficient most
significant).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

from .caps import require_within
from .errors import DomainError, ModulusError, SpecError

# least monic irreducible (by code) for each (p, r)
BUILTIN_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (0, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (3, 1): (0, 1),
    (3, 2): (1, 0, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 1, 0, 0, 1),
    (5, 1): (0, 1),
    (5, 2): (2, 0, 1),
    (5, 3): (1, 1, 0, 1),
    (5, 4): (2, 0, 0, 0, 1),
}

MAX_PRIME = 97


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_divides(f: tuple[int, ...], g: list[int], p: int) -> bool:
    """True iff monic ``f`` divides ``g`` in F_p[x] (both constant term first)."""
    g = list(g)
    df = len(f) - 1
    for k in range(len(g) - 1, df - 1, -1):
        c = g[k] % p
        if c:
            for i in range(df + 1):
                g[k - df + i] = (g[k - df + i] - c * f[i]) % p
    return not any(x % p for x in g[:df])


def is_irreducible(p: int, modulus: Iterable[int]) -> bool:
    """Irreducibility over F_p by exhaustive trial division."""
    mod = tuple(c % p for c in modulus)
    r = len(mod) - 1
    if r < 1 or mod[-1] != 1:
        return False
    if r == 1:
        return True
    require_within(sum(p**k for k in range(1, r // 2 + 1)), what="irreducibility search")
    for deg in range(1, r // 2 + 1):
        for low in itertools.product(range(p), repeat=deg):
            if _poly_divides(tuple(low) + (1,), list(mod), p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    p: int
    r: int
    modulus: tuple[int, ...]
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "modulus", tuple(int(c) % self.p for c in self.modulus))
        if not (2 <= self.p <= MAX_PRIME and is_prime(self.p)):
            raise DomainError(f"characteristic must be a prime <= {MAX_PRIME}, got {self.p}")
        if self.r < 1 or len(self.modulus) != self.r + 1:
            raise DomainError(f"modulus {self.modulus} does not have degree r={self.r}")
        if not is_irreducible(self.p, self.modulus):
            raise DomainError(f"modulus {self.modulus} is not irreducible over F_{self.p}")
        object.__setattr__(self, "q", self.p**self.r)
        # memo tables for code arithmetic, filled on demand
        object.__setattr__(self, "_mul_cache", {})
        object.__setattr__(self, "_add_cache", {})

    q: int = field(init=False, repr=False, compare=False)

    @classmethod
    def of(cls, p: int, r: int = 1, modulus: Iterable[int] | None = None) -> "FieldSpec":
        """The field F_{p^r}, with a built-in or least-irreducible modulus unless one is given."""
        if modulus is not None:
            return cls(p, r, tuple(modulus))
        return _default_spec(p, r)

    # -- codes ----------------------------------------------------------------

    def coeffs(self, code: int) -> tuple[int, ...]:
        p = self.p
        out = []
        for _ in range(self.r):
            code, c = divmod(code, p)
            out.append(c)
        return tuple(out)

    def code(self, coeffs: Iterable[int]) -> int:
        cs = [int(c) % self.p for c in coeffs]
        if len(cs) > self.r:
            cs = list(self._reduce(cs))
        value = 0
        for c in reversed(cs):
            value = value * self.p + c
        return value

    def _reduce(self, cs: list[int]) -> tuple[int, ...]:
        p, mod, r = self.p, self.modulus, self.r
        cs = [c % p for c in cs]
        for k in range(len(cs) - 1, r - 1, -1):
            c = cs[k]
            if c:
                for i in range(r + 1):
                    cs[k - r + i] = (cs[k - r + i] - c * mod[i]) % p
        cs += [0] * (r - len(cs))
        return tuple(cs[:r])

    # -- arithmetic on codes --------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.r == 1:
            return (a + b) % self.p
        if self.p == 2:
            # coefficient-wise addition mod 2 on bit-packed codes
            return a ^ b
        key = (a, b) if a <= b else (b, a)
        cache = self._add_cache
        hit = cache.get(key)
        if hit is None:
            hit = cache[key] = self.code(x + y for x, y in zip(self.coeffs(a), self.coeffs(b)))
        return hit

    def neg(self, a: int) -> int:
        if self.r == 1:
            return -a % self.p
        return self.code(-x for x in self.coeffs(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.r == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        key = (a, b) if a <= b else (b, a)
        cache = self._mul_cache
        hit = cache.get(key)
        if hit is not None:
            return hit
        x, y = self.coeffs(a), self.coeffs(b)
        prod = [0] * (2 * self.r - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    prod[i + j] += xi * yj
        out = self.code(self._reduce(prod))
        cache[key] = out
        return out

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        result, base = 1, a
        while e:
            if e & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            e >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise DomainError("inverse of zero")
        if self.r == 1:
            return pow(a, -1, self.p)
        return self.pow(a, self.q - 2)

    def frob(self, a: int, e: int = 1) -> int:
        return self.pow(a, self.p**e)

    def from_int(self, n: int) -> int:
        return n % self.p

    # -- element level --------------------------------------------------------

    def elem(self, value: "int | Iterable[int] | FieldElem") -> "FieldElem":
        """Wrap a code (int) or a coefficient vector as a FieldElem."""
        if isinstance(value, FieldElem):
            if value.spec != self:
                raise SpecError("element belongs to a different field")
            return value
        if isinstance(value, int):
            return FieldElem(self, self.coeffs(value))
        return FieldElem(self, self._reduce(list(value)))

    @property
    def zero(self) -> "FieldElem":
        return self.elem(0)

    @property
    def one(self) -> "FieldElem":
        return self.elem(1)

    @property
    def gen(self) -> "FieldElem":
        """The class of x modulo the modulus."""
        return self.elem([0, 1])

    def is_subfield_of(self, other: "FieldSpec") -> bool:
        return self.p == other.p and other.r % self.r == 0

    def to_dict(self) -> dict:
        return {"p": self.p, "r": self.r, "modulus": list(self.modulus)}

    @classmethod
    def from_dict(cls, data: dict) -> "FieldSpec":
        return cls(int(data["p"]), int(data["r"]), tuple(data["modulus"]))

    def __str__(self) -> str:
        return f"F_{self.q}"


def _default_spec(p: int, r: int) -> FieldSpec:
    key = (p, r)
    spec = _DEFAULT_SPECS.get(key)
    if spec is not None:
        return spec
    if key in BUILTIN_MODULI:
        spec = FieldSpec(p, r, BUILTIN_MODULI[key])
    else:
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
        for code in range(p**r):
            low = [(code // p**i) % p for i in range(r)]
            if is_irreducible(p, low + [1]):
                spec = FieldSpec(p, r, tuple(low) + (1,))
                break
        else:  # pragma: no cover - irreducibles exist in every degree
            raise ModulusError(f"no irreducible of degree {r} over F_{p}")
    _DEFAULT_SPECS[key] = spec
    return spec


_DEFAULT_SPECS: dict[tuple[int, int], FieldSpec] = {}


def field_for_order(q: int) -> FieldSpec:
    """Default presentation of the field with ``q`` elements."""
    for p in range(2, min(q, MAX_PRIME) + 1):
        if q % p == 0:
            r, rest = 0, q
            while rest % p == 0:
                rest //= p
                r += 1
            if rest != 1 or not is_prime(p):
                break
            return FieldSpec.of(p, r)
    raise DomainError(f"{q} is not a supported prime power")


class FieldElem:
    """Immutable element of a finite field, stored as a coefficient vector."""

    __slots__ = ("spec", "coeffs")

    def __init__(self, spec: FieldSpec, coeffs: tuple[int, ...]):
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("FieldElem is immutable")

    @property
    def code(self) -> int:
        return self.spec.code(self.coeffs)

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.spec != self.spec:
                raise SpecError(f"field mismatch: {self.spec} vs {other.spec}")
            return other.code
        if isinstance(other, int):
            return self.spec.from_int(other)
        return NotImplemented

    def _wrap(self, code: int) -> "FieldElem":
        return FieldElem(self.spec, self.spec.coeffs(code))

    def __add__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.spec.add(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.spec.sub(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.spec.sub(b, self.code))

    def __neg__(self):
        return self._wrap(self.spec.neg(self.code))

    def __mul__(self, other):
        b = self._other(other)
        return NotImplemented if b is NotImplemented else self._wrap(self.spec.mul(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return NotImplemented
        return self._wrap(self.spec.mul(self.code, self.spec.inv(b)))

    def __pow__(self, e: int):
        return self._wrap(self.spec.pow(self.code, e))

    def inverse(self) -> "FieldElem":
        return self._wrap(self.spec.inv(self.code))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElem):
            return self.spec == other.spec and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.code == self.spec.from_int(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.spec.p, self.spec.modulus, self.coeffs))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("g" if i == 1 else f"g^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}*{mono}")
        return " + ".join(reversed(terms)) or "0"

    def to_dict(self) -> dict:
        return {"coeffs": list(self.coeffs)}


def field_arith(a: FieldElem, b: FieldElem | None, op: str) -> FieldElem:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    raise DomainError(f"unknown field operation {op!r}")


def frobenius(a: FieldElem, e: int = 1) -> FieldElem:
    """a ** (p ** e)."""
    if e < 0:
        raise DomainError("Frobenius exponent must be non-negative")
    return a ** (a.spec.p**e)


def enumerate_field(spec: FieldSpec, cap: int | None = None) -> list[FieldElem]:
    require_within(spec.q, cap, what=f"enumeration of {spec}")
    return [spec.elem(c) for c in range(spec.q)]


def embedding_table(source: FieldSpec, target: FieldSpec) -> tuple[int, ...]:
    """Codes in ``target`` of every element of ``source``, indexed by source code.

    The source generator is sent to the least root (by code) of the source
    modulus in the target field; the table is cached per pair.
    """
    if source.p != target.p:
        raise SpecError(f"characteristics differ: {source.p} vs {target.p}")
    if target.r % source.r:
        raise DomainError(f"degree {source.r} does not divide {target.r}")
    key = ("embed", source)
    table = target._cache.get(key)
    if table is not None:
        return table
    if source == target:
        table = tuple(range(source.q))
    else:
        root = None
        for x in range(target.q):
            acc = 0
            for c in reversed(source.modulus):
                acc = target.add(target.mul(acc, x), target.from_int(c))
            if acc == 0:
                root = x
                break
        if root is None:
            raise ModulusError(f"modulus of {source} has no root in {target}")
        powers = [1]
        for _ in range(source.r - 1):
            powers.append(target.mul(powers[-1], root))
        images = []
        for code in range(source.q):
            acc = 0
            for c, pw in zip(source.coeffs(code), powers):
                if c:
                    acc = target.add(acc, target.mul(target.from_int(c), pw))
            images.append(acc)
        table = tuple(images)
    target._cache[key] = table
    return table


def embed(a: FieldElem, target: FieldSpec) -> FieldElem:
    return target.elem(embedding_table(a.spec, target)[a.code])
