from itertools import combinations
from math import gcd, isqrt, prod

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from d4count.analytic import analytic_class_number
from d4count.classgroup import (
    class_group,
    class_number,
    fundamental_unit,
    selmer2_basis,
    torsion_order,
    unit_from_cycle,
    unit_group,
)
from d4count.errors import CapacityError, DomainError
from d4count.quadfield import QuadField, QuadIdeal, factor_ideal, fundamental_discriminants, sqrt_in_field

DISCS_1000 = fundamental_discriminants(1000)


def reduced_forms(d):
    """Brute-force count of reduced primitive forms (a, b, c) of discriminant d < 0."""
    n = 0
    a = 1
    while 3 * a * a <= -d:
        for b in range(-a + 1, a + 1):
            if (b * b - d) % (4 * a):
                continue
            c = (b * b - d) // (4 * a)
            if c < a or (c == a and b < 0) or gcd(gcd(a, b), c) != 1:
                continue
            n += 1
        a += 1
    return n


@pytest.mark.parametrize("d,h,structure", [(-4, 1, ()), (-23, 3, (3,)), (40, 2, (2,))])
def test_class_group_examples(d, h, structure):
    cg = class_group(QuadField(d))
    assert cg.order == h
    assert cg.structure == structure


def test_imaginary_class_numbers_match_forms():
    for d in DISCS_1000:
        if d < 0:
            assert class_number(d) == reduced_forms(d), d


def test_class_numbers_match_analytic_formula():
    for d in DISCS_1000:
        K = QuadField(d)
        assert analytic_class_number(K).contains(class_number(d)), d


def test_capacity():
    with pytest.raises(CapacityError):
        class_group(QuadField(-10007), bound=10**4)
    with pytest.raises(CapacityError):
        class_number(1009, bound=1000)


def test_structure_and_generators():
    for d in (-3299, -4027, 229, 904, 328, -84, -420, 1365):
        cg = class_group(QuadField(d))
        assert prod(cg.structure) == cg.order
        for g, n in zip(cg.generators, cg.structure):
            assert not any(cg.is_principal(g**k) for k in range(1, n))
            assert cg.is_principal(g**n)


def test_known_structures():
    assert class_group(QuadField(-3299)).structure == (9, 3)
    assert class_group(QuadField(-4027)).structure == (3, 3)
    assert class_group(QuadField(229)).order == 3


@given(st.sampled_from([-84, -3299, -420, 229, 328, 904, -20, -23]), st.integers(-40, 40), st.integers(-40, 40))
def test_h_power_is_principal(d, x, y):
    K = QuadField(d)
    alpha = K(x, y)
    assume(not alpha.is_zero())
    cg = class_group(K)
    for P, _ in factor_ideal(QuadIdeal.principal(alpha) * QuadIdeal.from_generators(K, [K(3), K(1, 1)])):
        Ph = P**cg.order
        gen = cg.principal_generator(Ph)
        assert gen is not None and QuadIdeal.principal(gen) == Ph


@pytest.mark.parametrize("d,coords", [(8, (1, 1)), (5, (0, 1)), (12, (2, 1))])
def test_fundamental_unit_examples(d, coords):
    assert fundamental_unit(QuadField(d)).coords() == coords


def test_fundamental_unit_rejects_imaginary():
    with pytest.raises(DomainError):
        fundamental_unit(QuadField(-4))


def test_units_all_real_fields():
    for d in DISCS_1000:
        if d < 0:
            continue
        K = QuadField(d)
        eps = fundamental_unit(K)
        assert abs(eps.norm()) == 1 and eps.is_integral()
        assert float(K.embed(eps)) > 1
        assert unit_from_cycle(K) == eps


def test_fundamental_unit_is_minimal():
    # every unit u > 1 is (t + f sqrt(D))/2 with t^2 - D f^2 = +-4; none may lie below eps
    for d in DISCS_1000:
        if d < 0 or d > 300:
            continue
        K = QuadField(d)
        e = float(K.embed(fundamental_unit(K)))
        if e > 1e6:
            continue
        for t in range(1, int(e) + 2):
            for s in (4, -4):
                q, r = divmod(t * t - s, d)
                if r == 0 and q > 0 and isqrt(q) ** 2 == q:
                    u = (t + isqrt(q) * d**0.5) / 2
                    assert u >= e * (1 - 1e-12), (d, t)


def test_torsion():
    assert torsion_order(QuadField(-4)) == 4
    assert torsion_order(QuadField(-3)) == 6
    assert torsion_order(QuadField(-7)) == 2
    assert unit_group(QuadField(-4)).fundamental is None
    ug = unit_group(QuadField(5))
    assert ug.torsion == 2 and abs(float(ug.regulator) - 0.48121182505960344) < 1e-15


def _is_square_class(K, elts, target):
    for r in elts:
        if sqrt_in_field(r / target) is not None:
            return True
    return False


def test_selmer_examples():
    sel = selmer2_basis(QuadField(-4))
    K = sel.field
    assert sel.order == 2 and sel.basis == (K(0, 1),)
    sel = selmer2_basis(QuadField(8))
    K = sel.field
    assert sel.order == 4
    assert {e for e in sel.elements()} == {K(1), K(-1), K(1, 1), K(-1, -1)}
    sel = selmer2_basis(QuadField(-20))
    K = sel.field
    assert sel.order == 4
    for r in (K(1), K(-1), K(2), K(-2)):
        assert _is_square_class(K, sel.elements(), r)


def test_selmer_law_and_evenness():
    for d in DISCS_1000:
        K = QuadField(d)
        sel = selmer2_basis(K)
        t = class_group(K).two_rank
        assert sel.rank == (1 if d < 0 else 2) + t
        for beta in sel.basis:
            for _, e in factor_ideal(QuadIdeal.principal(beta)):
                assert e % 2 == 0


def test_selmer_independence():
    for d in [x for x in DISCS_1000 if abs(x) <= 300] + [-3299, 1365, -420]:
        K = QuadField(d)
        sel = selmer2_basis(K)
        for r in range(1, sel.rank + 1):
            for sub in combinations(sel.basis, r):
                assert sqrt_in_field(prod(sub, start=K(1))) is None
