"""Quotient maps from L_{n,d} onto groups generated by transvections.

A target is a list of square-zero matrices Delta_i, giving order-p elements
T_i = I + Delta_i.  The component map reads the coordinate of A_1 on Delta_i
in a fixed basis of gl_n and returns I + a Delta_i; the full map multiplies
the components in a chosen order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from . import linalg
from .caps import require_within
from .errors import DomainError, SpecError
from .gf import FieldSpec
from .lgroup import TruncElem, iter_group, lmul
from .linalg import Matrix
from .subgrp import GroupTable, closure


@dataclass(frozen=True)
class TransvectionTarget:
    n: int
    field: FieldSpec
    deltas: tuple[Matrix, ...]
    basis: tuple[Matrix, ...]
    labels: tuple[str, ...]
    # rows of the inverse basis matrix belonging to the deltas
    _coord_rows: tuple[tuple[int, ...], ...] = field(repr=False, compare=False, default=())

    def __post_init__(self) -> None:
        n, F = self.n, self.field
        if len(self.basis) != n * n:
            raise DomainError(f"basis of gl_{n} needs {n * n} elements, got {len(self.basis)}")
        if tuple(self.basis[: len(self.deltas)]) != tuple(self.deltas):
            raise DomainError("basis must start with the deltas")
        if len(self.labels) != len(self.deltas):
            raise DomainError("one label per delta required")
        for k, delta in enumerate(self.deltas):
            if linalg.is_zero(delta) or not linalg.is_zero(linalg.mul(F, delta, delta)):
                raise DomainError(f"delta {k} is zero or not square-zero")
        cols = [linalg.flatten(b) for b in self.basis]
        as_matrix = tuple(tuple(col[r] for col in cols) for r in range(n * n))
        try:
            inv = linalg.inverse(F, as_matrix)
        except DomainError:
            raise DomainError("basis does not span gl_n") from None
        object.__setattr__(self, "_coord_rows", tuple(inv[: len(self.deltas)]))

    @property
    def transvections(self) -> tuple[Matrix, ...]:
        ident = linalg.identity(self.n)
        return tuple(linalg.add(self.field, ident, d) for d in self.deltas)

    def resolve(self, i: int | str) -> int:
        if isinstance(i, str):
            if i not in self.labels:
                raise DomainError(f"unknown component {i!r}; labels are {self.labels}")
            return self.labels.index(i)
        if not 0 <= i < len(self.deltas):
            raise DomainError(f"component index {i} out of range")
        return i

    def coordinate(self, a: Matrix, i: int | str) -> int:
        """Coefficient of Delta_i when ``a`` is written in the basis."""
        F = self.field
        row = self._coord_rows[self.resolve(i)]
        acc = 0
        for x, y in zip(row, linalg.flatten(a)):
            if x and y:
                acc = F.add(acc, F.mul(x, y))
        return acc

    def to_dict(self) -> dict:
        F = self.field
        return {
            "n": self.n,
            "field": F.to_dict(),
            "labels": list(self.labels),
            "deltas": [linalg.to_coeffs(F, d) for d in self.deltas],
            "basis": [linalg.to_coeffs(F, b) for b in self.basis],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TransvectionTarget":
        F = FieldSpec.from_dict(data["field"])
        deltas = tuple(linalg.from_ints(F, d) for d in data["deltas"])
        labels = tuple(data.get("labels") or (str(k + 1) for k in range(len(deltas))))
        return cls(
            int(data["n"]), F, deltas, tuple(linalg.from_ints(F, b) for b in data["basis"]), labels
        )


def general_target(
    generators: Sequence[Matrix],
    field: FieldSpec,
    labels: Sequence[str] | None = None,
    extension: Sequence[Matrix] = (),
) -> TransvectionTarget:
    """Target from matrices g with (g - I)^2 = 0 and independent g - I.

    The deltas are extended to a basis of gl_n greedily: first by the
    matrices in ``extension``, then by standard units E_ij in row-major
    order, each kept only if independent of what is already there.
    """
    if not generators:
        raise DomainError("at least one generator is required")
    n = len(generators[0])
    F = field
    ident = linalg.identity(n)
    deltas: list[Matrix] = []
    for k, g in enumerate(generators):
        if len(g) != n or any(len(row) != n for row in g):
            raise SpecError(f"generator {k} is not {n} x {n}")
        delta = linalg.sub(F, g, ident)
        if linalg.is_zero(delta):
            raise DomainError(f"generator {k} is the identity")
        if not linalg.is_zero(linalg.mul(F, delta, delta)):
            raise DomainError(f"generator {k}: (g - I)^2 != 0")
        if linalg.rank(F, [linalg.flatten(x) for x in deltas + [delta]]) != len(deltas) + 1:
            raise DomainError(f"generator {k}: g - I depends on the earlier generators")
        deltas.append(delta)
    basis = list(deltas)
    units = [linalg.unit(n, i, j) for i in range(n) for j in range(n)]
    for e in [tuple(map(tuple, m)) for m in extension] + units:
        if len(basis) == n * n:
            break
        if linalg.rank(F, [linalg.flatten(x) for x in basis + [e]]) == len(basis) + 1:
            basis.append(e)
    labels = tuple(labels) if labels is not None else tuple(str(k + 1) for k in range(len(deltas)))
    return TransvectionTarget(n, F, tuple(deltas), tuple(basis), labels)


def _perm(rows: Sequence[Sequence[int]]) -> Matrix:
    return tuple(tuple(r) for r in rows)


S3_TRANSPOSITIONS = {
    "12": _perm([[0, 1, 0], [1, 0, 0], [0, 0, 1]]),
    "23": _perm([[1, 0, 0], [0, 0, 1], [0, 1, 0]]),
    "13": _perm([[0, 0, 1], [0, 1, 0], [1, 0, 0]]),
}


def _product_family(F: FieldSpec, d12: Matrix, d23: Matrix, d13: Matrix) -> list[Matrix]:
    pairs = [(d12, d23), (d23, d12), (d12, d13), (d13, d12), (d23, d13), (d13, d23)]
    return [d12, d23, d13] + [linalg.mul(F, x, y) for x, y in pairs]


def build_s3_f2() -> TransvectionTarget:
    """S_3 as permutation matrices T_12, T_23, T_13 in GL_3(F_2).

    The nine-element family of deltas and pairwise products spans only a
    4-dimensional subspace, so the basis is that family's independent part
    (Delta_12, Delta_23, Delta_13, Delta_12 Delta_23) completed by E_ij.
    """
    F = FieldSpec.of(2)
    ident = linalg.identity(3)
    d12, d23, d13 = (linalg.sub(F, t, ident) for t in S3_TRANSPOSITIONS.values())
    return general_target(
        list(S3_TRANSPOSITIONS.values()),
        F,
        labels=tuple(S3_TRANSPOSITIONS),
        extension=_product_family(F, d12, d23, d13)[3:],
    )


def s3_product_family(target: TransvectionTarget) -> list[Matrix]:
    """Delta_12, Delta_23, Delta_13 and their six pairwise products, in that order."""
    d12, d23, d13 = (target.deltas[target.resolve(k)] for k in ("12", "23", "13"))
    return _product_family(target.field, d12, d23, d13)


def sl2_f2_target(generators: int = 3) -> TransvectionTarget:
    """Transvections of SL_2(F_2): I+E_12, I+E_21 and (with 3) the swap I+J."""
    F = FieldSpec.of(2)
    gens = [((1, 1), (0, 1)), ((1, 0), (1, 1)), ((0, 1), (1, 0))][:generators]
    return general_target(gens, F, labels=("12", "21", "J")[:generators])


def _check_shape(m: TruncElem, target: TransvectionTarget) -> None:
    if m.n != target.n or m.field != target.field:
        raise SpecError(f"element over {m.field} with n={m.n} does not match the target")


def theta_component(m: TruncElem, target: TransvectionTarget, i: int | str) -> Matrix:
    _check_shape(m, target)
    k = target.resolve(i)
    a = target.coordinate(m.coeffs[0], k)
    F = target.field
    return linalg.add(F, linalg.identity(target.n), linalg.scale(F, a, target.deltas[k]))


def theta(
    m: TruncElem, target: TransvectionTarget, order: Sequence[int | str] | None = None
) -> Matrix:
    """Ordered product of the component maps (a set map; depends on the order)."""
    idx = [target.resolve(i) for i in (order if order is not None else range(len(target.deltas)))]
    if sorted(idx) != list(range(len(target.deltas))):
        raise DomainError(f"order {order!r} is not a permutation of the components")
    F = target.field
    out = linalg.identity(target.n)
    for k in idx:
        out = linalg.mul(F, out, theta_component(m, target, k))
    return out


def theta_image(
    target: TransvectionTarget, d: int = 1, order: Sequence[int | str] | None = None,
    cap: int | None = None,
) -> set[Matrix]:
    return {theta(m, target, order) for m in iter_group(target.n, d, target.field, cap)}


def generated_group(target: TransvectionTarget) -> GroupTable:
    """<T_1, ..., T_k> computed by closure in GL_n."""
    F = target.field
    return GroupTable.from_generators(
        list(target.transvections),
        lambda x, y: linalg.mul(F, x, y),
        linalg.identity(target.n),
        name="<T_i>",
    )


def component_homomorphism_failures(
    target: TransvectionTarget, elements: Sequence[TruncElem]
) -> dict[str, int]:
    """Per component, count pairs with theta_i(a b) != theta_i(a) theta_i(b).

    Every ordered pair of ``elements`` is multiplied once and checked against
    all components.
    """
    F = target.field
    k = len(target.deltas)
    images = {m: tuple(theta_component(m, target, i) for i in range(k)) for m in elements}
    products: dict[tuple[Matrix, Matrix], Matrix] = {}
    failures = [0] * k
    for a in elements:
        ia = images[a]
        for b in elements:
            ab = lmul(a, b)
            lhs_all = images.get(ab)
            if lhs_all is None:
                lhs_all = tuple(theta_component(ab, target, i) for i in range(k))
            ib = images[b]
            for i in range(k):
                key = (ia[i], ib[i])
                rhs = products.get(key)
                if rhs is None:
                    rhs = products[key] = linalg.mul(F, ia[i], ib[i])
                if lhs_all[i] != rhs:
                    failures[i] += 1
    return dict(zip(target.labels, failures))


# -- group algebra units --------------------------------------------------------


@dataclass
class UnitGroup:
    algebra_elements: list[tuple[int, ...]]
    table: GroupTable
    embedding: list[int]

    @property
    def order(self) -> int:
        return self.table.order

    def embedding_is_injective_hom(self, gamma: GroupTable) -> bool:
        emb = self.embedding
        if len(set(emb)) != len(emb):
            return False
        t = self.table.table
        return all(
            emb[gamma.table[a][b]] == t[emb[a]][emb[b]]
            for a in range(gamma.order)
            for b in range(gamma.order)
        )


def regular_matrix(gamma: GroupTable, field: FieldSpec, x: Sequence[int]) -> Matrix:
    """Matrix of left multiplication by x = sum x_g g on the basis of F[gamma]."""
    n = gamma.order
    rows = [[0] * n for _ in range(n)]
    for g, c in enumerate(x):
        if c:
            for h in range(n):
                gh = gamma.table[g][h]
                rows[gh][h] = field.add(rows[gh][h], c)
    return tuple(tuple(r) for r in rows)


def convolve(gamma: GroupTable, field: FieldSpec, x: Sequence[int], y: Sequence[int]) -> tuple[int, ...]:
    out = [0] * gamma.order
    for g, a in enumerate(x):
        if a:
            for h, b in enumerate(y):
                if b:
                    k = gamma.table[g][h]
                    out[k] = field.add(out[k], field.mul(a, b))
    return tuple(out)


def group_algebra_units(gamma: GroupTable, field: FieldSpec, cap: int | None = None) -> UnitGroup:
    """Units of F[gamma] found by scanning for invertible left-regular matrices."""
    n = gamma.order
    require_within(field.q**n, cap, what="group algebra scan")
    units = [
        x
        for x in itertools.product(range(field.q), repeat=n)
        if linalg.det(field, regular_matrix(gamma, field, x)) != 0
    ]
    table = GroupTable.from_elements(units, lambda x, y: convolve(gamma, field, x, y), "F[G]^x")
    embedding = [table.index[tuple(1 if k == g else 0 for k in range(n))] for g in range(n)]
    return UnitGroup(units, table, embedding)


def quasi_p_check(gamma: GroupTable, p: int) -> bool:
    """True iff the elements of p-power order generate gamma."""
    require_within(gamma.order, 10_000, what="quasi-p check")

    def p_power(k: int) -> bool:
        while k % p == 0:
            k //= p
        return k == 1

    gens = [i for i in range(gamma.order) if p_power(gamma.element_order(i))]
    return closure(gens, gamma).order == gamma.order


def matrix_group_table(mats: Sequence[Matrix], field: FieldSpec, name: str = "image") -> GroupTable:
    return GroupTable.from_elements(list(mats), lambda x, y: linalg.mul(field, x, y), name)
