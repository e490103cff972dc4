"""
Unit Tests -- Relation Catalog

Structure polynomials, constants, the untwisted reduction and catalog
contents per fixture.
"""
from fractions import Fraction

import pytest

from taffin.engine.coeff import q_integer
from taffin.engine.relcat import (
    MPoly,
    QiInterpretation,
    RelationId,
    build_FG,
    build_p_i,
    build_p_ij,
    emit_catalog,
    emit_q9p,
    epsilon_sq,
    expand_g,
    h_action_constant,
    h_bracket_constant,
    q7_constant,
    qi_exponent,
    serre_partner,
)
from taffin.engine.cartan import validate
from taffin.engine.catalog import type_a_affine
from taffin.errors import Inapplicable, InexactDivision


def _families(catalog):
    return [d.rel for d in catalog]


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

class TestMPoly:
    def test_exact_division(self, a2_flip):
        field = a2_flip.field
        x_minus_y = MPoly.binomial(field, 2, field.one, (1, 0), -field.one, (0, 1))
        x2_minus_y2 = MPoly.binomial(field, 2, field.one, (2, 0), -field.one, (0, 2))
        x_plus_y = MPoly.binomial(field, 2, field.one, (1, 0), field.one, (0, 1))
        assert x2_minus_y2.exact_div(x_minus_y) == x_plus_y

    def test_inexact_division(self, a2_flip):
        field = a2_flip.field
        x = MPoly.monomial(field, 2, (1, 0))
        y_plus_one = MPoly.binomial(field, 2, field.one, (0, 1), field.one, (0, 0))
        with pytest.raises(InexactDivision):
            x.exact_div(y_plus_one)

    def test_permute_and_specialize(self, a2_flip):
        field = a2_flip.field
        p = MPoly.binomial(field, 2, field.q(1), (1, 0), field.one, (0, 2))
        swapped = p.permute((1, 0))
        assert swapped == MPoly.binomial(field, 2, field.q(1), (0, 1), field.one, (2, 0))
        assert p.specialize_first(field.v(1)) == MPoly.binomial(field, 1, field.v(3), (0,), field.one, (2,))


# ---------------------------------------------------------------------------
# Untwisted reduction
# ---------------------------------------------------------------------------

class TestUntwisted:
    def test_fg_single_factor(self, a1):
        field = a1.field
        f, g = build_FG(a1, 0, 0, 1)
        assert f == MPoly.binomial(field, 2, field.one, (1, 0), -field.q(2), (0, 1))
        assert g == MPoly.binomial(field, 2, field.q(2), (1, 0), -field.one, (0, 1))

    def test_g_series(self, a1):
        field = a1.field
        g = expand_g(a1, 0, 0, 3)
        # (q^2 - x) / (1 - q^2 x)
        assert g.coeff(0) == field.q(2)
        assert g.coeff(1) == field.q(4) - field.one
        assert g.coeff(2) == field.q(2) * (field.q(4) - field.one)

    def test_g_inverse(self, a2):
        field = a2.field
        product = expand_g(a2, 0, 1, 5) * expand_g(a2, 0, 1, 5, power=-1)
        assert product.coeff(0) == field.one
        for n in range(1, 6):
            assert product.coeff(n) == field.zero

    def test_q7_constant(self, a1):
        field = a1.field
        expected = (field.q(1) - field.q(-1)).inverse()
        for qi in QiInterpretation:
            assert q7_constant(a1, 0, qi) == expected
        assert epsilon_sq(a1, 0) == field.one

    def test_serre_polynomial_is_constant(self, a2):
        for s in (1, -1):
            assert build_p_ij(a2, 0, 1, s).degree() == 0


# ---------------------------------------------------------------------------
# Twisted structure data
# ---------------------------------------------------------------------------

class TestTwisted:
    def test_a2_flip_f_factors(self, a2_flip):
        field = a2_flip.field
        f, _ = build_FG(a2_flip, 0, 0, 1)
        first = MPoly.binomial(field, 2, field.one, (1, 0), -field.q(2), (0, 1))
        # xi = -1 and a_12 = -1
        second = MPoly.binomial(field, 2, field.one, (1, 0), field.q(-1), (0, 1))
        assert f == first * second

    def test_cubic_serre_polynomial(self, a2_flip):
        field = a2_flip.field
        expected = (
            MPoly.monomial(field, 3, (1, 0, 0), field.v(-3))
            - MPoly.monomial(field, 3, (0, 1, 0), field.v(1) + field.v(-1))
            + MPoly.monomial(field, 3, (0, 0, 1), field.v(3))
        )
        assert build_p_i(a2_flip, 0, 1) == expected

    def test_p_i_needs_self_link(self, a3_flip):
        with pytest.raises(Inapplicable):
            build_p_i(a3_flip, 0, 1)

    def test_p_ij_rejects_same_orbit(self, a2_flip):
        with pytest.raises(Inapplicable):
            build_p_ij(a2_flip, 0, 1, 1)

    def test_p_ij_quotient_for_fixed_partner(self, a3_flip):
        field = a3_flip.field
        # d_12 = 2, d_1 = 1: (q^4 z^2 - w^2) / (q^2 z - w) = q^2 z + w
        p = build_p_ij(a3_flip, 0, 1, 1)
        expected = MPoly.const(field, 2, 2) * MPoly.binomial(field, 2, field.q(2), (1, 0), field.one, (0, 1))
        assert p == expected

    def test_serre_partner(self, a3_flip):
        assert serre_partner(a3_flip, 0, 1) == 1
        assert serre_partner(a3_flip, 1, 0) == 0
        assert serre_partner(a3_flip, 0, 0) is None

    def test_qi_interpretations(self, a3_flip):
        assert qi_exponent(a3_flip, 1, QiInterpretation.Q) == 1
        assert qi_exponent(a3_flip, 1, QiInterpretation.Q_DI) == 2
        assert qi_exponent(a3_flip, 1, QiInterpretation.Q_DI_SI) == Fraction(2)
        field = a3_flip.field
        assert q7_constant(a3_flip, 1, QiInterpretation.Q_DI) == (field.q(2) - field.q(-2)).inverse()

    def test_epsilon_sq_with_self_link(self, a2_flip):
        field = a2_flip.field
        assert epsilon_sq(a2_flip, 0) == field.one / (field.v(1) + field.v(-1))

    def test_epsilon_sq_fixed_node(self, a3_flip):
        assert epsilon_sq(a3_flip, 1) == q_integer(a3_flip.field, 2) * 2


class TestHeisenbergConstants:
    def test_degenerate_modes_vanish(self, a3_flip):
        for m in (-9, -7, -5, -3, -1, 1, 3, 5, 7, 9):
            assert h_bracket_constant(a3_flip, 1, 1, m) == a3_flip.field.zero

    def test_even_modes_survive(self, a3_flip):
        field = a3_flip.field
        # (1/2) * 2 [4] [2]
        assert h_bracket_constant(a3_flip, 1, 1, 2) == q_integer(field, 4) * q_integer(field, 2)

    def test_untwisted_bracket(self, a1):
        field = a1.field
        assert h_bracket_constant(a1, 0, 0, 1) == q_integer(field, 2)

    def test_action_constant_sign(self, a1):
        field = a1.field
        plus = h_action_constant(a1, 0, 0, 1, 1)
        minus = h_action_constant(a1, 0, 0, 1, -1)
        assert plus == q_integer(field, 2) * field.v(-1)
        assert minus == -q_integer(field, 2) * field.v(1)


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

class TestCatalog:
    def test_a1_has_no_serre(self, a1):
        families = _families(emit_catalog(a1))
        assert RelationId.Q9 not in families
        assert RelationId.Q10 not in families
        assert families.count(RelationId.Q8) == 2
        assert families.count(RelationId.Q1) == 1

    def test_a2_flip_has_cubic_serre(self, a2_flip):
        families = _families(emit_catalog(a2_flip))
        assert families.count(RelationId.Q10) == 2
        assert RelationId.Q9 not in families

    def test_a3_flip_has_quadratic_serre(self, a3_flip):
        catalog = emit_catalog(a3_flip)
        q9 = [d for d in catalog if d.rel is RelationId.Q9]
        assert sorted({d.instance for d in q9}) == [(0, 1), (1, 0)]
        assert len(q9) == 4

    def test_q0_per_index(self, a3_flip):
        q0 = [d for d in emit_catalog(a3_flip) if d.rel is RelationId.Q0]
        assert len(q0) == 3
        assert q0[2].payload == {"representative": 1, "rotation": 1}

    def test_rejects_failing_linking(self):
        od = validate(type_a_affine(2), [1, 2, 0])
        with pytest.raises(Inapplicable):
            emit_catalog(od)

    def test_q9p_only_on_request(self, a3_flip):
        families = _families(emit_catalog(a3_flip))
        assert RelationId.Q9P not in families
        with_folded = emit_catalog(a3_flip, include_q9p=True)
        folded = [d for d in with_folded if d.rel is RelationId.Q9P]
        assert folded
        assert all(d.status_hint == "unverified-equivalence" for d in folded)

    def test_q9p_coefficients(self, a3_flip):
        # folded row entry -2 at base q^1 gives [3, r] with alternating signs
        by_pair = {d.instance: d for d in emit_q9p(a3_flip)}
        coeffs = by_pair[(0, 1)].payload["coefficients"]
        field = a3_flip.field
        assert len(coeffs) == 4
        assert coeffs[1] == -q_integer(field, 3)

    def test_descriptor_serialization(self, a2_flip):
        entry = next(d for d in emit_catalog(a2_flip) if d.rel is RelationId.Q8 and d.sign == 1)
        data = entry.to_dict()
        assert data["relation"] == "Q8"
        assert data["instance"] == [1, 1]
        assert data["sign"] == "+"
        assert set(data["payload"]) == {"F", "G"}
        assert entry.label == "Q8(1,1)+"
