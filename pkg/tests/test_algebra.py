import cmath

import numpy as np
import pytest

from nlgames.algebra import (
    FiniteAbelianGroup,
    FiniteField,
    GroupElement,
    is_prime,
)

SMALL_GROUPS = [
    (2,),
    (3,),
    (4,),
    (5,),
    (2, 2),
    (6,),
    (2, 4),
    (3, 3),
    (2, 2, 2),
    (16,),
]

SMALL_FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3), (2, 4)]


def test_is_prime():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23}
    for n in range(-3, 25):
        assert is_prime(n) == (n in primes)


# ---------------------------------------------------------------------------
# Groups
# ---------------------------------------------------------------------------


def test_group_order_and_identity():
    g = FiniteAbelianGroup([2, 3, 4])
    assert g.order == 24
    assert g.identity.coords == (0, 0, 0)
    assert len(g.elements) == 24
    for el in g.elements:
        assert all(0 <= c < n for c, n in zip(el.coords, g.factors))


def test_add_examples():
    z3 = FiniteAbelianGroup([3])
    assert z3.add(z3.element(1), z3.element(2)) == z3.element(0)
    z22 = FiniteAbelianGroup([2, 2])
    assert z22.add(z22.element((1, 0)), z22.element((1, 1))) == z22.element((0, 1))
    z5 = FiniteAbelianGroup([5])
    for x in z5.elements:
        assert z5.add(x, z5.identity) == x


def test_add_is_abelian_group():
    for factors in [(3,), (4,), (2, 2), (2, 3)]:
        g = FiniteAbelianGroup(factors)
        for x in g.elements:
            assert g.add(x, g.neg(x)) == g.identity
            for y in g.elements:
                assert g.add(x, y) == g.add(y, x)
                for z in g.elements:
                    assert g.add(g.add(x, y), z) == g.add(x, g.add(y, z))


def test_element_reduction_idempotent():
    g = FiniteAbelianGroup([3, 4])
    el = g.element((5, 7))
    assert el.coords == (2, 3)
    assert g.element(el) == el


def test_dimension_mismatch_rejected():
    g = FiniteAbelianGroup([2, 2])
    stray = GroupElement((1,))
    with pytest.raises(ValueError, match="factor list"):
        g.add(stray, g.identity)
    with pytest.raises(ValueError, match="factor list"):
        g.element((1, 2, 3))


def test_group_construction_rejects_bad_factors():
    with pytest.raises(ValueError):
        FiniteAbelianGroup([])
    with pytest.raises(ValueError):
        FiniteAbelianGroup([1, 2])
    with pytest.raises(ValueError):
        FiniteAbelianGroup([0])


def test_character_examples():
    z2 = FiniteAbelianGroup([2])
    assert z2.character(z2.element(1), z2.element(1)) == pytest.approx(-1.0)
    z3 = FiniteAbelianGroup([3])
    expected = cmath.exp(4j * cmath.pi / 3)
    assert z3.character(z3.element(1), z3.element(2)) == pytest.approx(expected)


@pytest.mark.parametrize("factors", SMALL_GROUPS)
def test_character_sum_vanishes_for_nontrivial(factors):
    g = FiniteAbelianGroup(factors)
    for a in g.elements:
        total = sum(g.character(a, x) for x in g.elements)
        if a == g.identity:
            assert total == pytest.approx(g.order)
        else:
            assert abs(total) < 1e-10


@pytest.mark.parametrize("factors", SMALL_GROUPS)
def test_character_orthogonality(factors):
    g = FiniteAbelianGroup(factors)
    chars = g.character_table()
    gram = chars @ chars.conj().T / g.order
    assert np.max(np.abs(gram - np.eye(g.order))) < 1e-12


@pytest.mark.parametrize("factors", [(3,), (4,), (2, 2), (2, 3)])
def test_character_properties(factors):
    g = FiniteAbelianGroup(factors)
    for a in g.elements:
        for x in g.elements:
            # Symmetry of the chosen indexing and conjugation as negation.
            assert g.character(a, x) == pytest.approx(g.character(x, a))
            assert np.conj(g.character(a, x)) == pytest.approx(g.character(a, g.neg(x)))
            for y in g.elements:
                assert g.character(a, g.add(x, y)) == pytest.approx(
                    g.character(a, x) * g.character(a, y)
                )
    for x in g.elements:
        assert g.character(g.identity, x) == pytest.approx(1.0)


def test_tables_are_consistent():
    g = FiniteAbelianGroup([2, 3])
    add = g.addition_table()
    sub = g.subtraction_table()
    neg = g.negation_table()
    for i, x in enumerate(g.elements):
        assert add[i, neg[i]] == 0
        for j, y in enumerate(g.elements):
            assert g.elements[add[i, j]] == g.add(x, y)
            assert add[sub[i, j], j] == i


# ---------------------------------------------------------------------------
# Fields
# ---------------------------------------------------------------------------


def test_default_moduli():
    assert FiniteField(2, 1).modulus == (0, 1)
    assert FiniteField(2, 2).modulus == (1, 1, 1)
    assert FiniteField(3, 2).modulus == (1, 0, 1)


def test_gf9_modulus_is_smallest_irreducible():
    # Independent search: monic quadratics over Z_3 without roots, ordered by
    # the same big-endian digit encoding the constructor documents.
    def has_root(c0, c1):
        return any((x * x + c1 * x + c0) % 3 == 0 for x in range(3))

    ordered = [
        (c0, c1, 1)
        for m in range(9)
        for c0, c1 in [(m % 3, m // 3)]
        if not has_root(m % 3, m // 3)
    ]
    assert ordered[0] == FiniteField(3, 2).modulus
    assert set(ordered) == {(1, 0, 1), (2, 1, 1), (2, 2, 1)}


def test_field_construction_errors():
    with pytest.raises(ValueError, match="prime"):
        FiniteField(4, 1)
    with pytest.raises(ValueError, match="degree"):
        FiniteField(2, 0)
    with pytest.raises(ValueError, match="degree"):
        FiniteField(2, 5)
    with pytest.raises(ValueError, match="reducible"):
        FiniteField(2, 2, modulus=(1, 0, 1))  # x^2 + 1 = (x + 1)^2 over Z_2
    with pytest.raises(ValueError, match="monic"):
        FiniteField(3, 2, modulus=(1, 0, 2))


def test_gf4_multiplication():
    f = FiniteField(2, 2)
    x = f.element((0, 1))
    assert f.mul(x, x) == f.element((1, 1))
    for a in f.elements:
        assert f.mul(a, f.one) == a


@pytest.mark.parametrize("p,r", SMALL_FIELDS)
def test_power_d_fixes_every_element(p, r):
    f = FiniteField(p, r)
    for a in f.elements:
        assert f.pow(a, f.size) == a


@pytest.mark.parametrize("p,r", [(2, 2), (3, 2), (2, 3), (5, 1), (7, 1)])
def test_nonzero_elements_form_cyclic_group(p, r):
    f = FiniteField(p, r)
    orders = []
    for a in f.elements[1:]:
        power = a
        order = 1
        while power != f.one:
            power = f.mul(power, a)
            order += 1
        orders.append(order)
        assert (f.size - 1) % order == 0
    assert max(orders) == f.size - 1


@pytest.mark.parametrize("p,r", [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (3, 2), (2, 3)])
def test_field_axioms_exhaustive(p, r):
    f = FiniteField(p, r)
    if f.size > 9:
        pytest.skip("axiom sweep kept to sizes <= 9")
    for a in f.elements:
        for b in f.elements:
            assert f.mul(a, b) == f.mul(b, a)
            for c in f.elements:
                assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
                assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    for a in f.elements[1:]:
        assert f.mul(a, f.inv(a)) == f.one


@pytest.mark.parametrize("p,r", [(2, 2), (3, 2), (2, 3), (2, 4)])
def test_frobenius_is_additive(p, r):
    f = FiniteField(p, r)
    for a in f.elements:
        for b in f.elements:
            assert f.pow(f.add(a, b), p) == f.add(f.pow(a, p), f.pow(b, p))


@pytest.mark.parametrize("p,r", [(2, 2), (3, 2), (2, 3), (2, 4)])
def test_trace_linear_and_in_prime_field(p, r):
    f = FiniteField(p, r)
    for a in f.elements:
        ta = f.trace(a)
        assert 0 <= ta < p
        for b in f.elements:
            assert f.trace(f.add(a, b)) == (f.trace(a) + f.trace(b)) % p


def test_field_mismatch_rejected():
    f1 = FiniteField(2, 2)
    f2 = FiniteField(3, 1)
    with pytest.raises(ValueError, match="field mismatch"):
        f1.mul(f1.one, f2.one)
    f3 = FiniteField(3, 2, modulus=(2, 1, 1))
    with pytest.raises(ValueError, match="field mismatch"):
        FiniteField(3, 2).add(FiniteField(3, 2).one, f3.one)


def test_zero_has_no_inverse():
    f = FiniteField(3, 1)
    with pytest.raises(ZeroDivisionError):
        f.inv(f.zero)


# ---------------------------------------------------------------------------
# Additive characters
# ---------------------------------------------------------------------------


def test_additive_character_examples():
    gf4 = FiniteField(2, 2)
    for a in gf4.elements:
        assert gf4.additive_character(gf4.zero, a) == pytest.approx(1.0)
    gf2 = FiniteField(2, 1)
    assert gf2.additive_character(gf2.one, gf2.one) == pytest.approx(-1.0)
    total = sum(gf4.additive_character(gf4.one, a) for a in gf4.elements)
    assert abs(total) < 1e-12


@pytest.mark.parametrize("p,r", SMALL_FIELDS)
def test_additive_character_sum_over_multiples(p, r):
    f = FiniteField(p, r)
    for b in f.elements:
        for k in f.elements[1:]:
            total = sum(f.additive_character(k, f.mul(a, b)) for a in f.elements)
            if b == f.zero:
                assert total == pytest.approx(f.size)
            else:
                assert abs(total) < 1e-10


@pytest.mark.parametrize("p,r", [(2, 2), (3, 2), (5, 1)])
def test_additive_character_homomorphism(p, r):
    f = FiniteField(p, r)
    for k in f.elements:
        for a in f.elements:
            for b in f.elements:
                assert f.additive_character(k, f.add(a, b)) == pytest.approx(
                    f.additive_character(k, a) * f.additive_character(k, b)
                )


@pytest.mark.parametrize("p,r", [(2, 2), (3, 2), (2, 3)])
def test_additive_character_trivial_only_for_zero(p, r):
    f = FiniteField(p, r)
    for k in f.elements[1:]:
        assert any(
            abs(f.additive_character(k, a) - 1.0) > 1e-9 for a in f.elements
        )


@pytest.mark.parametrize("p,r", [(2, 2), (3, 2)])
def test_field_additive_group_is_valid_group(p, r):
    f = FiniteField(p, r)
    g = f.additive_group()
    assert g.order == f.size
    assert g.identity == f.zero
    assert g.describe() == {"field": {"p": p, "r": r}}
    chars = g.character_table()
    gram = chars @ chars.conj().T / g.order
    assert np.max(np.abs(gram - np.eye(g.order))) < 1e-12
    # Symmetric indexing, as assumed by the correlator inversion.
    assert np.max(np.abs(chars - chars.T)) < 1e-12


def test_field_element_int_encoding():
    f = FiniteField(3, 2)
    for m, el in enumerate(f.elements):
        assert int(el) == m
        assert f.from_int(m) == el
    assert f.element([2, 1]) == f.from_int(5)
    with pytest.raises(ValueError):
        f.from_int(9)
