import json
import time

import pytest

from wittlang.errors import DomainError, SpecError
from wittlang.gf import FieldSpec
from wittlang.hopf import CoordinateRing, HopfMonomial, TensorPoly, pairing_suite
from wittlang.lgroup import TruncElem, enumerate_group


def tensor(ring, spec):
    """Build a TensorPoly from [(left_factors, right_factors, coeff)]."""
    F = ring.field
    out = TensorPoly(F)
    for left, right, c in spec:
        key = (HopfMonomial(ring.n, ring.d, tuple(left)), HopfMonomial(ring.n, ring.d, tuple(right)))
        out._accumulate(key, F.from_int(c))
    return out


def comult_by_formula(ring, i, j, lam):
    """Literal expansion of the double sum, with X_{ab0} replaced by the Kronecker delta."""
    terms = []
    for l in range(1, ring.n + 1):
        for nu in range(lam + 1):
            mu = lam - nu
            left = [] if nu == 0 else [(i, l, nu)]
            right = [] if mu == 0 else [(l, j, mu)]
            if nu == 0 and i != l:
                continue
            if mu == 0 and l != j:
                continue
            terms.append((left, right, 1))
    return tensor(ring, terms)


def test_comult_primitive(F2):
    ring = CoordinateRing(1, 1, F2)
    assert ring.comult((1, 1, 1)) == tensor(ring, [([(1, 1, 1)], [], 1), ([], [(1, 1, 1)], 1)])


def test_comult_x112():
    ring = CoordinateRing(1, 2, FieldSpec.of(3))
    expected = tensor(
        ring, [([(1, 1, 2)], [], 1), ([], [(1, 1, 2)], 1), ([(1, 1, 1)], [(1, 1, 1)], 1)]
    )
    assert ring.comult((1, 1, 2)) == expected


def test_comult_x122(F2):
    ring = CoordinateRing(2, 2, F2)
    expected = tensor(
        ring,
        [
            ([(1, 2, 2)], [], 1),
            ([], [(1, 2, 2)], 1),
            ([(1, 1, 1)], [(1, 2, 1)], 1),
            ([(1, 2, 1)], [(2, 2, 1)], 1),
        ],
    )
    assert ring.comult((1, 2, 2)) == expected


@pytest.mark.parametrize("n,d", [(1, 3), (2, 3), (3, 2)])
def test_comult_matches_literal_formula(F3, n, d):
    ring = CoordinateRing(n, d, F3)
    for g in ring.generators():
        assert ring.comult(g) == comult_by_formula(ring, *g)


def test_generators_exclude_lambda_zero(F2):
    ring = CoordinateRing(2, 3, F2)
    gens = ring.generators()
    assert len(gens) == 12
    assert all(lam >= 1 for _, _, lam in gens)
    with pytest.raises(DomainError):
        ring.gen(1, 1, 0)
    with pytest.raises(DomainError):
        ring.gen(3, 1, 1)


def test_counit_examples(F2):
    ring = CoordinateRing(1, 2, F2)
    assert ring.counit(ring.one()) == F2.one
    assert ring.counit(ring.gen(1, 1, 1)) == F2.zero
    t = ring.comult((1, 1, 2))
    assert ring.counit_side(t, 0) == {ring.gen(1, 1, 2): 1}
    assert ring.counit_side(t, 1) == {ring.gen(1, 1, 2): 1}


@pytest.mark.parametrize("pr", [(2, 1), (3, 1), (2, 2)])
@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("d", [1, 2, 3])
def test_coalgebra_laws(pr, n, d):
    ring = CoordinateRing(n, d, FieldSpec.of(*pr))
    for g in ring.generators():
        assert ring.check_coassociativity(g), g
        assert ring.check_counit(g), g


def test_coassociativity_sides_are_nontrivial(F2):
    ring = CoordinateRing(2, 3, F2)
    lhs, rhs = ring.coassoc_sides((1, 2, 3))
    assert len(lhs) == len(rhs) > 3


def test_evaluate_examples(F2, F4):
    ring = CoordinateRing(2, 1, F2)
    a = TruncElem(F2, (((0, 1), (0, 0)),))
    assert ring.evaluate(ring.gen(1, 2, 1), a) == F2.one
    assert ring.evaluate(ring.gen(2, 1, 1), a) == F2.zero
    assert ring.evaluate(ring.one(), a) == F2.one
    r4 = CoordinateRing(1, 2, F4)
    g = F4.gen
    b = TruncElem.series(F4, [g.code, 1])
    m = r4.gen(1, 1, 1) * r4.gen(1, 1, 1) * r4.gen(1, 1, 2)
    assert r4.evaluate(m, b) == g * g


def test_pairing_identity_counit(F2):
    ring = CoordinateRing(2, 2, F2)
    e = TruncElem.identity(2, 2, F2)
    for a in enumerate_group(2, 2, F2)[:40]:
        for g in ring.generators():
            assert ring.pairing_check(g, a, e)
            assert ring.pairing_check(g, e, a)


def test_pairing_shape_mismatch(F2):
    ring = CoordinateRing(2, 2, F2)
    with pytest.raises(SpecError):
        ring.pairing_check((1, 1, 1), TruncElem.identity(1, 2, F2), TruncElem.identity(1, 2, F2))


def test_pairing_suite_exhaustive_small(F3):
    report = pairing_suite(CoordinateRing(1, 3, F3))
    assert report.exhaustive and report.pairs == 27**2 and report.failures == 0


def test_pairing_suite_sampled():
    ring = CoordinateRing(1, 3, FieldSpec.of(3))
    report = pairing_suite(ring, samples=2000, seed=1)
    assert not report.exhaustive and report.pairs == 2000 and report.passed


def test_pairing_suite_l22_f2_exhaustive(F2):
    t0 = time.perf_counter()
    report = pairing_suite(CoordinateRing(2, 2, F2))
    elapsed = time.perf_counter() - t0
    assert report.exhaustive
    assert (report.pairs, report.generators, report.failures) == (65536, 8, 0)
    assert elapsed < 30


def test_pairing_detects_wrong_comult(F2):
    ring = CoordinateRing(1, 2, F2)
    wrong = tensor(ring, [([(1, 1, 2)], [], 1), ([], [(1, 1, 2)], 1)])
    m = ring.gen(1, 1, 2)
    a = TruncElem.series(F2, [1, 0])
    assert ring.evaluate(m, a * a) != ring.evaluate_tensor(wrong, a, a)


def test_antipode_examples(F2):
    ring = CoordinateRing(1, 1, F2)
    assert ring.antipode_eval(ring.gen(1, 1, 1), TruncElem.series(F2, [1])) == F2.one
    F5 = FieldSpec.of(5)
    r5 = CoordinateRing(1, 2, F5)
    for a in range(5):
        x = TruncElem.series(F5, [a, 0])
        assert r5.antipode_eval(r5.gen(1, 1, 2), x) == F5.elem(a * a)


def test_antipode_identity_exhaustive(F2):
    ring = CoordinateRing(1, 2, F2)
    for a in enumerate_group(1, 2, F2):
        for g in ring.generators():
            assert ring.antipode_identity(g, a)
    ring = CoordinateRing(2, 2, F2)
    for a in enumerate_group(2, 2, F2):
        for g in ring.generators():
            assert ring.antipode_identity(g, a)


def test_tensor_json_round_trip(F4):
    ring = CoordinateRing(2, 2, F4)
    t = ring.comult((2, 1, 2))
    data = json.loads(json.dumps(t.to_json()))
    assert {"left", "right", "coeff"} <= set(data[0])
    assert TensorPoly.from_json(F4, 2, 2, data) == t


def test_monomials_are_commutative(F2):
    ring = CoordinateRing(2, 2, F2)
    x, y = ring.gen(1, 2, 1), ring.gen(2, 1, 2)
    assert x * y == y * x
