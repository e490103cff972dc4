"""
Unit Tests -- Distribution Calculus

q-deformed binomials, two-region expansions and the delta-function
identities, all checked exactly.
"""
import pytest

from taffin.engine.coeff import CoeffField, q_integer
from taffin.engine.distcalc import (
    LARGE,
    SMALL,
    TruncSeries,
    check_cgjt,
    check_delta_prop,
    check_dual_route,
    check_orbit_products,
    check_ps0,
    check_qbinom_products,
    check_serre_scalar,
    delta_coefficient,
    expand_factor,
    qdef_binom_coeffs,
)
from taffin.errors import DegenerateConstants, Inapplicable, RegionMismatch


@pytest.fixture
def field():
    return CoeffField(4)


# ---------------------------------------------------------------------------
# q-deformed binomials
# ---------------------------------------------------------------------------

class TestQBinomial:
    def test_exponent_two(self, field):
        coeffs = qdef_binom_coeffs(field, 2, 4)
        # (1 - q^{-1} x)(1 - q x)
        assert coeffs[0] == field.one
        assert coeffs[1] == -q_integer(field, 2)
        assert coeffs[2] == field.one
        assert coeffs[3] == field.zero
        assert coeffs[4] == field.zero

    def test_exponent_one_and_zero(self, field):
        assert qdef_binom_coeffs(field, 1, 3) == [field.one, -field.one, field.zero, field.zero]
        assert qdef_binom_coeffs(field, 0, 3) == [field.one, field.zero, field.zero, field.zero]

    def test_exponent_minus_one_is_geometric(self, field):
        assert qdef_binom_coeffs(field, -1, 5) == [field.one] * 6

    def test_products_to_order_30(self, field):
        ok, witness = check_qbinom_products(field, 30)
        assert ok, witness

    def test_large_region_expansion(self, field):
        # (1 - c x)^{-1} for |x| > 1 is -sum_{n>0} c^{-n} x^{-n}
        c = field.q(1)
        series = expand_factor(field, c, -1, -4, 0, LARGE)
        assert series.coeff(0) == field.zero
        for n in range(1, 5):
            assert series.coeff(-n) == -(c.inverse() ** n)

    def test_regions_do_not_mix(self, field):
        small = TruncSeries.one_var(field, {0: field.one}, 0, 3, SMALL)
        large = TruncSeries.one_var(field, {0: field.one}, -3, 0, LARGE)
        with pytest.raises(RegionMismatch):
            small + large


# ---------------------------------------------------------------------------
# Products over orbits
# ---------------------------------------------------------------------------

class TestOrbitProducts:
    @pytest.mark.parametrize("fixture,i,j", [
        ("a2_flip", 0, 0),
        ("a3_flip", 0, 0),
        ("a3_flip", 1, 1),
        ("a3_flip", 0, 1),
    ])
    def test_dual_route(self, fixture, i, j, request):
        od = request.getfixturevalue(fixture)
        ok, witness = check_dual_route(od, i, j, 20)
        assert ok, witness

    @pytest.mark.parametrize("fixture,i,j", [
        ("a2", 0, 0),
        ("a2", 0, 1),
        ("a2_flip", 0, 0),
        ("a3_flip", 1, 1),
        ("a3_flip", 0, 1),
        ("a3_flip", 1, 0),
    ])
    def test_closed_forms(self, fixture, i, j, request):
        od = request.getfixturevalue(fixture)
        for sign in (1, -1):
            ok, witness = check_orbit_products(od, i, j, sign, 12)
            assert ok, witness


# ---------------------------------------------------------------------------
# Delta-function identities
# ---------------------------------------------------------------------------

class TestDelta:
    def test_delta_coefficient(self, field):
        assert delta_coefficient(0, 2, 3, field) == field.q(3)
        assert delta_coefficient(2, 0, 1, field) == field.xi(1)

    @pytest.mark.parametrize("fixture,i", [("a2_flip", 0), ("a3_flip", 0), ("a3_flip", 1), ("a1", 0)])
    def test_delta_proposition(self, fixture, i, request):
        od = request.getfixturevalue(fixture)
        ok, witness = check_delta_prop(od, i, i, 20)
        assert ok, witness

    def test_cgjt_single_pole(self, field):
        ok, witness = check_cgjt(field, [field.q(1)], [-1], 10)
        assert ok, witness

    def test_cgjt_mixed(self):
        field = CoeffField(6)
        constants = [field.monomial(1, 2), field.monomial(4, -1), field.monomial(0, 3)]
        ok, witness = check_cgjt(field, constants, [-1, 2, -1], 15)
        assert ok, witness

    def test_cgjt_rejects_repeated_constants(self, field):
        with pytest.raises(DegenerateConstants):
            check_cgjt(field, [field.q(1), field.q(1)], [-1, -1], 5)

    def test_cgjt_rejects_zero_constant(self, field):
        with pytest.raises(DegenerateConstants):
            check_cgjt(field, [field.zero], [-1], 5)


class TestSerreScalars:
    def test_ps0(self):
        assert check_ps0()

    @pytest.mark.parametrize("d_i,d_ii", [(1, 1), (1, 2), (2, 2)])
    @pytest.mark.parametrize("sign", [1, -1])
    def test_serre_scalar(self, d_i, d_ii, sign):
        assert check_serre_scalar(d_i, d_ii, sign)

    def test_serre_scalar_needs_divisibility(self):
        with pytest.raises(Inapplicable):
            check_serre_scalar(2, 1, 1)
        with pytest.raises(Inapplicable):
            check_serre_scalar(1, 0, 1)
