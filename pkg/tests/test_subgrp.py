import itertools

import pytest

from wittlang.errors import DomainError, ResourceError, SpecError
from wittlang.gf import FieldSpec
from wittlang.lgroup import enumerate_group, lmul
from wittlang.subgrp import (
    GroupTable,
    Subgroup,
    all_subgroups,
    closure,
    coset_projection,
    cyclic_group,
    direct_product,
    prosub_level,
    quotient,
    symmetric_group,
    trivial_group,
)


def subsets_that_are_subgroups(g: GroupTable) -> set[frozenset[int]]:
    """Brute force over every subset containing the identity."""
    others = [i for i in range(g.order) if i != g.identity]
    out = set()
    for r in range(len(others) + 1):
        for combo in itertools.combinations(others, r):
            s = frozenset(combo) | {g.identity}
            if all(g.table[a][g.inverses[b]] in s for a in s for b in s):
                out.add(s)
    return out


def dihedral(k: int) -> GroupTable:
    # (rotation, flip) with (r1, f1)(r2, f2) = (r1 + (-1)^f1 r2, f1 xor f2)
    elems = [(r, f) for f in range(2) for r in range(k)]
    return GroupTable.from_elements(
        elems, lambda a, b: ((a[0] + (-1) ** a[1] * b[0]) % k, a[1] ^ b[1]), f"D{k}"
    )


def quaternion() -> GroupTable:
    units = {"1": (1, "1"), "i": (1, "i"), "j": (1, "j"), "k": (1, "k")}
    rules = {
        ("1", x): (1, x) for x in "1ijk"
    } | {(x, "1"): (1, x) for x in "ijk"} | {
        ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
        ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
        ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
    }
    del units

    def mul(a, b):
        s, u = rules[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    elems = [(s, u) for s in (1, -1) for u in "1ijk"]
    return GroupTable.from_elements(elems, mul, "Q8")


def s3_index(g, perm):
    return g.index[tuple(perm)]


def test_closure_examples():
    g = symmetric_group(3)
    assert closure([g.identity], g).order == 1
    t12 = s3_index(g, (1, 0, 2))
    t23 = s3_index(g, (0, 2, 1))
    assert closure([t12], g).order == 2
    assert closure([t12, t23], g).order == 6


def test_closure_rejects_foreign_index():
    with pytest.raises(DomainError):
        closure([17], symmetric_group(3))


@pytest.mark.parametrize(
    "factory,count",
    [
        (lambda: symmetric_group(3), 6),
        (lambda: direct_product(cyclic_group(4), cyclic_group(2)), 8),
        (trivial_group, 1),
        (lambda: cyclic_group(12), 6),
        (lambda: dihedral(4), 10),
        (quaternion, 6),
        (lambda: direct_product(direct_product(cyclic_group(2), cyclic_group(2)), cyclic_group(2)), 16),
        (lambda: dihedral(6), 16),
    ],
)
def test_all_subgroups_against_subset_scan(factory, count):
    g = factory()
    subs = all_subgroups(g)
    assert len(subs) == count
    assert {frozenset(s.members) for s in subs} == subsets_that_are_subgroups(g)


def test_all_subgroups_s4():
    g = symmetric_group(4)
    subs = all_subgroups(g)
    assert len(subs) == 30
    assert sum(1 for s in subs if s.is_normal()) == 4


def test_all_subgroups_s3_profile():
    subs = all_subgroups(symmetric_group(3))
    assert sorted(s.order for s in subs) == [1, 2, 2, 2, 3, 6]


def test_all_subgroups_z4xz2_index_two():
    g = direct_product(cyclic_group(4), cyclic_group(2))
    subs = all_subgroups(g)
    # index-2 subgroups of an abelian 2-group: (|G[2]| - 1)/(2 - 1) = 3
    two_torsion = sum(1 for i in range(g.order) if g.table[i][i] == g.identity)
    assert sum(1 for s in subs if s.index == 2) == (two_torsion - 1) == 3


def test_all_subgroups_l13_f2():
    F2 = FieldSpec.of(2)
    elems = enumerate_group(1, 3, F2)
    g = GroupTable.from_elements(elems, lmul, "L13")
    subs = all_subgroups(g)
    assert len(subs) == 8
    assert sum(1 for s in subs if s.index == 2) == 3


@pytest.mark.parametrize("factory", [lambda: symmetric_group(4), lambda: dihedral(6), quaternion])
def test_lattice_invariants(factory):
    g = factory()
    subs = all_subgroups(g)
    sets = {frozenset(s.members) for s in subs}
    assert len(sets) == len(subs)
    for s in subs:
        assert s.is_subgroup()
        assert g.order % s.order == 0
    for a, b in itertools.combinations(subs, 2):
        assert frozenset(a.members) & frozenset(b.members) in sets


def test_all_subgroups_cap():
    with pytest.raises(ResourceError):
        all_subgroups(cyclic_group(2001))


def test_quotient_examples():
    g = symmetric_group(3)
    a3 = next(s for s in all_subgroups(g) if s.order == 3)
    q = quotient(g, a3)
    assert q.order == 2
    triv = closure([g.identity], g)
    q1 = quotient(g, triv)
    assert q1.order == 6 and not q1.is_abelian()
    t12 = closure([s3_index(g, (1, 0, 2))], g)
    with pytest.raises(DomainError, match="not normal"):
        quotient(g, t12)


@pytest.mark.parametrize("factory", [lambda: symmetric_group(4), lambda: dihedral(4), quaternion])
def test_quotient_projection_is_homomorphism(factory):
    g = factory()
    for n in all_subgroups(g):
        if not n.is_normal():
            continue
        q = quotient(g, n)
        assert q.order * n.order == g.order
        proj = coset_projection(g, n)
        pos = q.index
        for a in range(g.order):
            for b in range(g.order):
                assert pos[proj[g.table[a][b]]] == q.table[pos[proj[a]]][pos[proj[b]]]


def test_quotient_foreign_subgroup():
    g, h = symmetric_group(3), symmetric_group(3)
    with pytest.raises(SpecError):
        quotient(g, closure([h.identity], h))


def test_subgroup_json():
    g = symmetric_group(3)
    data = all_subgroups(g)[-1].to_dict()
    assert data == {"order": 6, "members": list(range(6)), "normal": True}


def test_prosub_level():
    assert prosub_level(symmetric_group(3)).orders == [1, 2, 3, 6]
    assert prosub_level(trivial_group()).orders == [1]
    lvl = prosub_level(direct_product(cyclic_group(4), cyclic_group(2)))
    assert lvl.subgroup_count == 8
    # Z/2 x Z/2, Z/4 (twice, same signature), three Z/2, trivial, whole group
    assert len(lvl.signatures) == 5


def test_group_table_rejects_non_group():
    with pytest.raises(DomainError):
        GroupTable.from_elements([0, 1, 2], lambda a, b: max(a, b))
    with pytest.raises(DomainError):
        GroupTable.from_elements([0, 1], lambda a, b: (a + b) % 3)
    # a Latin square with identity that is not associative
    loop = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(DomainError, match="associativity"):
        GroupTable(list(range(5)), loop, 0)


def test_group_table_large_is_sampled():
    g = cyclic_group(200)
    assert g.order == 200 and g.is_abelian()
    assert g.element_order(1) == 200
