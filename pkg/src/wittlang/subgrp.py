"""Finite groups as multiplication tables: closure, subgroup lattice, quotients.

This is one finite level of the ProSub completion: the subgroups of a finite
quotient and their isomorphism-invariant signatures.
"""
from __future__ import annotations

import itertools
import random
from collections import Counter, deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

from .caps import require_within
from .errors import DomainError, SpecError

CLOSURE_CAP = 10_000
LATTICE_CAP = 2_000
# associativity is checked on all triples up to this order, sampled above
ASSOC_EXHAUSTIVE_MAX = 64
ASSOC_SAMPLES = 1_000


class GroupTable:
    """A finite group on indices 0..N-1 with a full Cayley table.

    ``elements[i]`` is the canonical encoding of element ``i``; ``table[i][j]``
    is the index of ``elements[i] * elements[j]``.
    """

    def __init__(
        self,
        elements: Sequence[Hashable],
        table: Sequence[Sequence[int]],
        identity: int,
        name: str = "group",
        check: bool = True,
        seed: int = 0,
    ):
        self.elements = list(elements)
        self.table = [list(row) for row in table]
        self.identity = identity
        self.name = name
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise SpecError("element encodings are not distinct")
        self.inverses = self._find_inverses()
        if check:
            self.validate(seed)

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def _find_inverses(self) -> list[int]:
        e = self.identity
        inv = []
        for i, row in enumerate(self.table):
            try:
                inv.append(row.index(e))
            except ValueError:
                raise DomainError(f"element {self.elements[i]!r} has no inverse") from None
        return inv

    def validate(self, seed: int = 0) -> None:
        n = len(self)
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise DomainError("Cayley table is not square")
        if any(not 0 <= x < n for row in self.table for x in row):
            raise DomainError("table is not closed")
        e = self.identity
        for i in range(n):
            if self.table[e][i] != i or self.table[i][e] != i:
                raise DomainError(f"index {e} is not a two-sided identity")
            if self.table[self.inverses[i]][i] != e:
                raise DomainError(f"inverse of {self.elements[i]!r} is one-sided")
        t = self.table
        if n <= ASSOC_EXHAUSTIVE_MAX:
            triples: Iterable = itertools.product(range(n), repeat=3)
        else:
            rng = random.Random(seed)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(ASSOC_SAMPLES))
        for a, b, c in triples:
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise DomainError(f"associativity fails on indices {(a, b, c)}")

    @classmethod
    def from_elements(
        cls, elements: Sequence[Hashable], mul: Callable, name: str = "group", seed: int = 0
    ) -> "GroupTable":
        elements = list(elements)
        require_within(len(elements) ** 2, what=f"Cayley table of {name}")
        index = {x: i for i, x in enumerate(elements)}
        table = []
        for a in elements:
            row = []
            for b in elements:
                c = mul(a, b)
                if c not in index:
                    raise DomainError(f"product {c!r} is not in the element list")
                row.append(index[c])
            table.append(row)
        identity = next(
            (i for i in range(len(elements)) if all(table[i][j] == j for j in range(len(elements)))),
            None,
        )
        if identity is None:
            raise DomainError("no identity element")
        return cls(elements, table, identity, name, seed=seed)

    @classmethod
    def from_generators(
        cls, gens: Sequence[Hashable], mul: Callable, identity: Hashable, name: str = "group",
        cap: int = CLOSURE_CAP,
    ) -> "GroupTable":
        """Close ``gens`` under ``mul`` (finite group, so inverses come for free)."""
        seen = {identity: 0}
        order = [identity]
        queue = deque([identity])
        while queue:
            x = queue.popleft()
            for g in gens:
                y = mul(x, g)
                if y not in seen:
                    seen[y] = len(order)
                    order.append(y)
                    queue.append(y)
                    if len(order) > cap:
                        raise DomainError(f"generated group exceeds {cap} elements")
        return cls.from_elements(order, mul, name)

    # -- element level ------------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def order_profile(self, members: Iterable[int] | None = None) -> dict[int, int]:
        idx = range(len(self)) if members is None else members
        return dict(sorted(Counter(self.element_order(i) for i in idx).items()))

    def is_abelian(self) -> bool:
        t = self.table
        n = len(self)
        return all(t[a][b] == t[b][a] for a in range(n) for b in range(a + 1, n))


def symmetric_group(k: int) -> GroupTable:
    """S_k on permutation tuples; product (x*y)(i) = x(y(i))."""
    perms = list(itertools.permutations(range(k)))
    return GroupTable.from_elements(perms, lambda x, y: tuple(x[i] for i in y), f"S_{k}")


def cyclic_group(k: int) -> GroupTable:
    return GroupTable.from_elements(list(range(k)), lambda a, b: (a + b) % k, f"Z/{k}")


def trivial_group() -> GroupTable:
    return GroupTable([()], [[0]], 0, "1")


def direct_product(g: GroupTable, h: GroupTable) -> GroupTable:
    elems = [(a, b) for a in range(len(g)) for b in range(len(h))]
    return GroupTable.from_elements(
        elems, lambda x, y: (g.table[x[0]][y[0]], h.table[x[1]][y[1]]), f"{g.name} x {h.name}"
    )


@dataclass(frozen=True)
class Subgroup:
    parent: GroupTable
    members: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.members)

    @property
    def index(self) -> int:
        return self.parent.order // self.order

    def __contains__(self, i: int) -> bool:
        return i in self._set

    @property
    def _set(self) -> frozenset[int]:
        cached = self.__dict__.get("_member_set")
        if cached is None:
            cached = frozenset(self.members)
            object.__setattr__(self, "_member_set", cached)
        return cached

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.parent is other.parent and self.members == other.members

    def __hash__(self) -> int:
        return hash(self.members)

    def is_subgroup(self) -> bool:
        g = self.parent
        s = self._set
        return (
            g.identity in s
            and all(g.inv(a) in s for a in s)
            and all(g.table[a][b] in s for a in s for b in s)
        )

    def normality_witness(self) -> tuple[int, int] | None:
        """(g, h) with g h g^-1 outside the subgroup, or None if normal."""
        g = self.parent
        s = self._set
        for x in range(g.order):
            xi = g.inv(x)
            for h in self.members:
                if g.table[g.table[x][h]][xi] not in s:
                    return x, h
        return None

    def is_normal(self) -> bool:
        return self.normality_witness() is None

    def signature(self) -> tuple[int, tuple[tuple[int, int], ...]]:
        return self.order, tuple(self.parent.order_profile(self.members).items())

    def to_dict(self) -> dict:
        return {"order": self.order, "members": list(self.members), "normal": self.is_normal()}


def closure(gens: Iterable[int], parent: GroupTable) -> Subgroup:
    """Smallest subgroup containing ``gens``, by breadth-first products."""
    require_within(parent.order, CLOSURE_CAP, what="closure parent")
    gens = list(dict.fromkeys(gens))
    for x in gens:
        if not 0 <= x < parent.order:
            raise DomainError(f"index {x} is not an element of {parent.name}")
    t = parent.table
    seen = {parent.identity}
    queue = deque([parent.identity])
    while queue:
        x = queue.popleft()
        for g in gens:
            y = t[x][g]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return Subgroup(parent, tuple(sorted(seen)))


def all_subgroups(g: GroupTable) -> list[Subgroup]:
    """Every subgroup once: cyclic seeds, then joins until nothing new appears."""
    require_within(g.order, LATTICE_CAP, what="subgroup lattice")
    cyclic: dict[tuple[int, ...], list[int]] = {}
    for x in range(g.order):
        sub = closure([x], g)
        cyclic.setdefault(sub.members, [x])
    found: dict[tuple[int, ...], list[int]] = dict(cyclic)
    frontier = list(found.items())
    seeds = list(cyclic.items())
    while frontier:
        new_frontier = []
        for members, gens in frontier:
            mset = set(members)
            for seed_members, seed_gens in seeds:
                if seed_gens[0] in mset:
                    continue
                joined = closure(gens + seed_gens, g)
                if joined.members not in found:
                    found[joined.members] = gens + seed_gens
                    new_frontier.append((joined.members, gens + seed_gens))
        frontier = new_frontier
    subs = [Subgroup(g, m) for m in found]
    subs.sort(key=lambda s: (s.order, s.members))
    return subs


def quotient(g: GroupTable, n: Subgroup) -> GroupTable:
    """Coset group G/N; cosets are named by their least member index."""
    if n.parent is not g:
        raise SpecError("subgroup belongs to another group")
    witness = n.normality_witness()
    if witness is not None:
        x, h = witness
        raise DomainError(
            f"subgroup is not normal: conjugating {g.elements[h]!r} by {g.elements[x]!r} leaves it"
        )
    proj = coset_projection(g, n)
    reps = sorted(set(proj))
    pos = {r: k for k, r in enumerate(reps)}
    table = [[pos[proj[g.table[a][b]]] for b in reps] for a in reps]
    return GroupTable(reps, table, pos[proj[g.identity]], f"{g.name}/N")


def coset_projection(g: GroupTable, n: Subgroup) -> list[int]:
    """For each element, the least index in its left coset xN."""
    t = g.table
    return [min(t[x][h] for h in n.members) for x in range(g.order)]


Signature = tuple[int, tuple[tuple[int, int], ...]]


@dataclass
class ProSubLevel:
    group_order: int
    subgroup_count: int
    signatures: list[Signature]

    @property
    def orders(self) -> list[int]:
        return sorted({s[0] for s in self.signatures})

    def to_dict(self) -> dict:
        return {
            "group_order": self.group_order,
            "subgroup_count": self.subgroup_count,
            "signatures": [
                {"order": o, "order_profile": {str(k): v for k, v in prof}} for o, prof in self.signatures
            ],
        }


def prosub_level(g: GroupTable) -> ProSubLevel:
    """Signatures (order, element-order profile) of all subgroups of ``g``."""
    subs = all_subgroups(g)
    sigs = sorted({s.signature() for s in subs})
    return ProSubLevel(g.order, len(subs), sigs)
