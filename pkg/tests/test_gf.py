import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wittlang.errors import DomainError, ResourceError, SpecError
from wittlang.gf import (
    BUILTIN_MODULI,
    FieldSpec,
    embed,
    enumerate_field,
    field_arith,
    field_for_order,
    frobenius,
    is_irreducible,
)

SMALL_FIELDS = [(p, r) for p in (2, 3, 5, 7) for r in range(1, 7) if p**r <= 81]


def test_add_in_f2(F2):
    assert field_arith(F2.one, F2.one, "add") == F2.zero


def test_mul_gen_squared_in_f4(F4):
    g = F4.gen
    assert field_arith(g, g, "mul") == g + 1


def test_inverse_matches_exhaustive_search(F4):
    g = F4.gen
    candidates = [x for x in enumerate_field(F4) if (g + 1) * x == 1]
    assert candidates == [g]
    assert field_arith(g + 1, None, "inv") == g


def test_inverse_of_zero_raises(F4):
    with pytest.raises(DomainError):
        F4.zero.inverse()


def test_mismatched_fields_raise(F2, F4):
    with pytest.raises(SpecError):
        F2.one + F4.one


def test_unknown_op(F2):
    with pytest.raises(DomainError):
        field_arith(F2.one, F2.one, "pow")


def test_frobenius_examples(F4):
    g = F4.gen
    assert frobenius(g, 1) == g + 1
    assert frobenius(F4.one, 5) == F4.one


@pytest.mark.parametrize("p,r", SMALL_FIELDS)
def test_frobenius_r_fixes_field(p, r):
    F = FieldSpec.of(p, r)
    assert all(frobenius(x, r) == x for x in enumerate_field(F))


def test_enumerate_small_fields(F2, F4):
    assert [x.coeffs for x in enumerate_field(F2)] == [(0,), (1,)]
    assert len(enumerate_field(F4)) == 4


def test_enumerate_f9_frobenius_fixed():
    F9 = FieldSpec.of(3, 2, [1, 0, 1])
    elems = enumerate_field(F9)
    assert len(elems) == 9 and len(set(elems)) == 9
    assert all(x**9 == x for x in elems)


def test_enumeration_order_is_code_order(F4):
    assert [x.code for x in enumerate_field(F4)] == [0, 1, 2, 3]


def test_enumerate_cap(monkeypatch):
    monkeypatch.setenv("WITTLANG_CAP", "8")
    with pytest.raises(ResourceError):
        enumerate_field(FieldSpec.of(2, 4))


def test_embed_unit_and_prime_field(F2, F4):
    assert embed(F2.one, F4) == F4.one
    for a, b in itertools.product(enumerate_field(F2), repeat=2):
        assert embed(a + b, F4) == embed(a, F4) + embed(b, F4)


def test_embed_f4_generator_is_least_root(F4, F16):
    roots = [x for x in enumerate_field(F16) if x * x + x + 1 == 0]
    assert len(roots) == 2
    assert embed(F4.gen, F16) == min(roots, key=lambda x: x.code)


def test_embed_degree_must_divide(F4):
    with pytest.raises(DomainError):
        embed(F4.gen, FieldSpec.of(2, 3))


@pytest.mark.parametrize("src,dst", [((2, 1), (2, 4)), ((2, 2), (2, 4)), ((3, 1), (3, 2)), ((2, 2), (2, 6))])
def test_embed_is_injective_hom_commuting_with_frobenius(src, dst):
    S, T = FieldSpec.of(*src), FieldSpec.of(*dst)
    elems = enumerate_field(S)
    images = [embed(x, T) for x in elems]
    assert len(set(images)) == len(elems)
    for a, b in itertools.product(elems, repeat=2):
        assert embed(a * b, T) == embed(a, T) * embed(b, T)
        assert embed(a + b, T) == embed(a, T) + embed(b, T)
    for x in elems:
        assert embed(frobenius(x, 1), T) == frobenius(embed(x, T), 1)


@pytest.mark.parametrize("p,r", SMALL_FIELDS)
def test_field_axioms_exhaustive(p, r):
    F = FieldSpec.of(p, r)
    q = F.q
    add, mul = F.add, F.mul
    for a in range(q):
        assert add(a, 0) == a and mul(a, 1) == a
        assert add(a, F.neg(a)) == 0
        if a:
            assert mul(a, F.inv(a)) == 1
    for a, b in itertools.product(range(q), repeat=2):
        assert add(a, b) == add(b, a) and mul(a, b) == mul(b, a)
    for a, b, c in itertools.product(range(q), repeat=3):
        assert add(add(a, b), c) == add(a, add(b, c))
        assert mul(mul(a, b), c) == mul(a, mul(b, c))
        assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))


@pytest.mark.parametrize("p,r", SMALL_FIELDS)
def test_frobenius_is_ring_hom(p, r):
    F = FieldSpec.of(p, r)
    elems = enumerate_field(F)
    for a, b in itertools.product(elems, repeat=2):
        assert frobenius(a + b) == frobenius(a) + frobenius(b)
        assert frobenius(a * b) == frobenius(a) * frobenius(b)


def test_builtin_moduli_are_irreducible():
    for (p, r), mod in BUILTIN_MODULI.items():
        assert len(mod) == r + 1 and is_irreducible(p, mod)


def test_rejects_reducible_modulus_and_composite_p():
    with pytest.raises(DomainError):
        FieldSpec(2, 2, (1, 0, 1))  # (x + 1)^2
    with pytest.raises(DomainError):
        FieldSpec(4, 1, (0, 1))
    with pytest.raises(DomainError):
        FieldSpec(101, 1, (0, 1))


def test_default_spec_beyond_table_is_irreducible():
    F = FieldSpec.of(2, 8)
    assert is_irreducible(2, F.modulus)
    assert F.q == 256


def test_field_for_order():
    assert field_for_order(9) == FieldSpec.of(3, 2)
    with pytest.raises(DomainError):
        field_for_order(12)


def test_json_round_trip(F4):
    data = json.loads(json.dumps(F4.to_dict()))
    assert data == {"p": 2, "r": 2, "modulus": [1, 1, 1]}
    assert FieldSpec.from_dict(data) == F4
    assert (F4.gen + 1).to_dict() == {"coeffs": [1, 1]}


@settings(max_examples=200, deadline=None)
@given(
    st.sampled_from([(2, 3), (3, 2), (5, 2), (7, 1), (3, 4)]),
    st.data(),
)
def test_distributivity_property(pr, data):
    F = FieldSpec.of(*pr)
    a, b, c = (F.elem(data.draw(st.integers(0, F.q - 1))) for _ in range(3))
    assert (a + b) * c == a * c + b * c
    assert a - a == 0
    if b:
        assert (a / b) * b == a
