"""
Unit Tests -- Coefficient Field

Exact arithmetic in Q(zeta)(v): cyclotomic reduction, rational functions,
q-integers and Gaussian binomials.
"""
import random
from fractions import Fraction

import pytest

from taffin.engine.coeff import CoeffField, CycloNum, field_arith, gauss_binom, q_integer
from taffin.errors import DivisionByZero, IndexOutOfRange


@pytest.fixture
def f2():
    """Field for N = 2, so zeta = i and xi = -1"""
    return CoeffField(4)


@pytest.fixture
def f3():
    return CoeffField(6)


# ---------------------------------------------------------------------------
# Cyclotomic numbers
# ---------------------------------------------------------------------------

class TestCycloNum:
    def test_zeta_has_full_order(self, f2):
        assert f2.zeta(4) == f2.one
        assert f2.zeta(2) == -1
        assert f2.zeta(1) != f2.one

    def test_xi_is_minus_one_for_order_two(self, f2):
        assert f2.xi(1) == -1
        assert f2.xi(2) == 1

    def test_cube_roots_sum_to_zero(self, f3):
        assert f3.one + f3.xi(1) + f3.xi(2) == f3.zero

    def test_negative_powers_wrap(self, f3):
        assert f3.zeta(-1) * f3.zeta(1) == f3.one
        assert CycloNum.zeta(6, -5) == CycloNum.zeta(6, 1)

    def test_inverse(self):
        x = CycloNum.zeta(6, 1) + 2
        assert x * x.inverse() == 1

    def test_mixed_orders_rejected(self):
        with pytest.raises(ValueError):
            CycloNum.zeta(4, 1) + CycloNum.zeta(6, 1)

    def test_rational_equality_with_int(self):
        assert CycloNum.rational(6, Fraction(3, 2)) == Fraction(3, 2)
        assert CycloNum.zeta(6, 1) != 1

    def test_from_poly_reduces(self):
        # zeta^2 = -1 in Q(zeta_4)
        assert CycloNum.from_poly(4, [1, 0, 1]) == 0


# ---------------------------------------------------------------------------
# Rational functions in v
# ---------------------------------------------------------------------------

class TestCoeffElem:
    def test_q_is_v_squared(self, f2):
        assert f2.q(1) == f2.v(2)
        assert f2.q(Fraction(1, 2)) == f2.v(1)

    def test_non_half_integer_exponent_rejected(self, f2):
        with pytest.raises(ValueError):
            f2.q(Fraction(1, 3))

    def test_laurent_inverse_of_monomial(self, f2):
        assert f2.v(3).inverse() == f2.v(-3)

    def test_fraction_reduces(self, f2):
        x = f2.poly({0: 1, 1: 1}) / f2.poly({0: 1, 2: -1})
        expected = f2.one / f2.poly({0: 1, 1: -1})
        assert x == expected

    def test_fraction_times_denominator_is_polynomial(self, f2):
        den = f2.v(1) - f2.v(-1)
        x = f2.one / den
        assert not x.is_polynomial()
        assert (x * den).is_polynomial()
        assert x * den == f2.one

    def test_add_and_subtract_fractions(self, f2):
        a = f2.one / (f2.one - f2.q(1))
        b = f2.one / (f2.one + f2.q(1))
        assert a + b == f2.const(2) / (f2.one - f2.q(2))
        assert a - a == f2.zero

    def test_division_by_zero(self, f2):
        with pytest.raises(DivisionByZero):
            f2.one / f2.zero
        with pytest.raises(DivisionByZero):
            f2.zero.inverse()

    def test_negative_power(self, f2):
        x = f2.one - f2.q(1)
        assert x ** -2 * x ** 2 == f2.one

    def test_equal_elements_hash_equal(self, f2):
        a = f2.poly({0: 1, 1: 1}) / f2.poly({0: 1, 2: -1})
        b = f2.one / f2.poly({0: 1, 1: -1})
        assert hash(a) == hash(b)

    def test_monomial_zero_coefficient(self, f2):
        assert f2.monomial(1, 1, 0) == f2.zero

    def test_field_arith_operators(self, f2):
        a, b = f2.v(1), f2.q(1)
        assert field_arith(a, b, "+") == a + b
        assert field_arith(a, b, "−") == a - b
        assert field_arith(a, b, "×") == a * b
        assert field_arith(a, b, "÷") == a / b
        with pytest.raises(ValueError):
            field_arith(a, b, "%")


# ---------------------------------------------------------------------------
# Canonical form
# ---------------------------------------------------------------------------

def _random_poly(rng, field):
    total = field.zero
    for _ in range(rng.randint(1, 3)):
        coef = rng.choice((-3, -2, -1, 1, 2, 3))
        total = total + field.monomial(rng.randrange(field.order), rng.randint(-3, 3), coef)
    return total


def _random_elements(field, count, seed):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        num, den = _random_poly(rng, field), _random_poly(rng, field)
        if den.is_zero():
            continue
        out.append(num / den)
    return out


class TestCanonicalForm:
    def test_difference_with_self_is_zero(self, f2):
        for a in _random_elements(f2, 1000, seed=11):
            assert (a - a).is_zero()
            assert a - a == f2.zero

    def test_quotient_by_self_is_one(self, f2):
        for a in _random_elements(f2, 1000, seed=12):
            if a.is_zero():
                continue
            assert a / a == f2.one

    def test_products_cancel(self, f3):
        elements = _random_elements(f3, 200, seed=13)
        for a, b in zip(elements, elements[1:]):
            if b.is_zero():
                continue
            assert (a * b) / b == a
            assert hash((a * b) / b) == hash(a)


# ---------------------------------------------------------------------------
# q-integers
# ---------------------------------------------------------------------------

class TestQInteger:
    def test_three(self, f2):
        assert q_integer(f2, 3) == f2.poly({4: 1, 0: 1, -4: 1})

    def test_zero_and_negative(self, f2):
        assert q_integer(f2, 0) == f2.zero
        assert q_integer(f2, -2) == -q_integer(f2, 2)

    def test_half_integer_base(self, f2):
        # [2]_{q^{1/2}} = v + v^{-1}
        assert q_integer(f2, 2, Fraction(1, 2)) == f2.v(1) + f2.v(-1)

    def test_matches_quotient(self, f2):
        n = 5
        quotient = (f2.q(n) - f2.q(-n)) / (f2.q(1) - f2.q(-1))
        assert q_integer(f2, n) == quotient

    def test_gauss_binom_four_two(self, f2):
        assert gauss_binom(f2, 4, 2) == f2.poly({8: 1, 4: 1, 0: 2, -4: 1, -8: 1})

    def test_gauss_binom_edges(self, f2):
        assert gauss_binom(f2, 3, 0) == f2.one
        assert gauss_binom(f2, 3, 3) == f2.one
        assert gauss_binom(f2, 3, 1) == q_integer(f2, 3)

    def test_gauss_binom_out_of_range(self, f2):
        with pytest.raises(IndexOutOfRange):
            gauss_binom(f2, 2, 3)
