"""
Taffin Distribution Calculus

Truncated formal series with region tags, q-deformed binomials
(1 - x)^a_{q^2}, delta functions, and standalone checks of the delta-function
identities used by the vertex construction.

Exponents are stored doubled so half-integer powers fit in integers.
"""
import itertools
import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from taffin.engine.cartan import OrbitData
from taffin.engine.coeff import CoeffElem, CoeffField, q_integer
from taffin.errors import DegenerateConstants, Inapplicable, RegionMismatch

Bound = Tuple[Optional[int], Optional[int]]
Witness = Dict[str, str]

SMALL = ("1", "x")
LARGE = ("x", "1")


class TruncSeries:
    """
    Truncated multivariate formal series.

    Args:
        field: Coefficient field
        vars: Ordered variable names
        terms: doubled-exponent tuple -> coefficient
        window: per-variable doubled (lo, hi), None for unbounded
        region: variable names from largest to smallest modulus; "1" stands
            for the unit circle, so ("1", "x") means |x| < 1
    """

    __slots__ = ("field", "vars", "terms", "window", "region")

    def __init__(
        self,
        field: CoeffField,
        vars: Sequence[str],
        terms: Dict[Tuple[int, ...], CoeffElem],
        window: Sequence[Bound],
        region: Sequence[str],
    ):
        self.field = field
        self.vars = tuple(vars)
        self.window = tuple(window)
        self.region = tuple(region)
        self.terms = {e: c for e, c in terms.items() if not c.is_zero() and self.inside(e)}

    @classmethod
    def one_var(cls, field: CoeffField, coeffs: Dict[int, CoeffElem], lo: int, hi: int,
                region: Sequence[str] = SMALL, var: str = "x") -> "TruncSeries":
        """Series in one variable from integer exponents (not doubled)"""
        terms = {(2 * n,): c for n, c in coeffs.items()}
        return cls(field, (var,), terms, ((2 * lo, 2 * hi),), region)

    def inside(self, exps: Tuple[int, ...]) -> bool:
        for e, (lo, hi) in zip(exps, self.window):
            if (lo is not None and e < lo) or (hi is not None and e > hi):
                return False
        return True

    def coefficient(self, exps: Tuple[int, ...]) -> CoeffElem:
        return self.terms.get(tuple(exps), self.field.zero)

    def coeff(self, n: int) -> CoeffElem:
        """Coefficient of x^n for a one-variable series"""
        return self.coefficient((2 * n,))

    def _compatible(self, other: "TruncSeries") -> None:
        if self.vars != other.vars:
            raise RegionMismatch(f"Variables {self.vars} and {other.vars} differ")
        if self.region != other.region:
            raise RegionMismatch(f"Regions {self.region} and {other.region} differ")

    def _meet(self, other: "TruncSeries") -> Tuple[Bound, ...]:
        out = []
        for (a, b), (c, d) in zip(self.window, other.window):
            lo = c if a is None else (a if c is None else max(a, c))
            hi = d if b is None else (b if d is None else min(b, d))
            out.append((lo, hi))
        return tuple(out)

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._compatible(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return TruncSeries(self.field, self.vars, terms, self._meet(other), self.region)

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(self.field, self.vars, {e: -c for e, c in self.terms.items()}, self.window, self.region)

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + (-other)

    def __mul__(self, other) -> "TruncSeries":
        if not isinstance(other, TruncSeries):
            return self.scale(other)
        self._compatible(other)
        window = self._meet(other)
        window_series = TruncSeries(self.field, self.vars, {}, window, self.region)
        terms: Dict[Tuple[int, ...], CoeffElem] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if not window_series.inside(e):
                    continue
                p = c1 * c2
                terms[e] = terms[e] + p if e in terms else p
        return TruncSeries(self.field, self.vars, terms, window, self.region)

    def scale(self, c) -> "TruncSeries":
        c = self.field.const(c) if not isinstance(c, CoeffElem) else c
        return TruncSeries(self.field, self.vars, {e: x * c for e, x in self.terms.items()}, self.window, self.region)

    def rename(self, perm: Sequence[int]) -> "TruncSeries":
        """Permute variables: new position p takes old variable perm[p]"""
        terms = {tuple(e[k] for k in perm): c for e, c in self.terms.items()}
        window = tuple(self.window[k] for k in perm)
        return TruncSeries(self.field, self.vars, terms, window, self.region)

    def is_zero(self) -> bool:
        return not self.terms


# ---------------------------------------------------------------------------
# q-deformed binomials
# ---------------------------------------------------------------------------

def qdef_binom_coeffs(field: CoeffField, a: int, order: int) -> List[CoeffElem]:
    """
    Coefficients of (1 - x)^a_{q^2} up to x^order.

    Exponentiates log(1 - x)^a_{q^2} = -sum_{m>0} [a]_{q^m} x^m / m.
    """
    logs = [field.zero] + [q_integer(field, a, m) * Fraction(-1, m) for m in range(1, order + 1)]
    out = [field.one]
    for n in range(1, order + 1):
        acc = field.zero
        for k in range(1, n + 1):
            if not logs[k].is_zero() and not out[n - k].is_zero():
                acc = acc + logs[k] * out[n - k] * k
        out.append(acc * Fraction(1, n))
    return out


def qdef_binom_expand(field: CoeffField, a: int, order: int, var: str = "x") -> TruncSeries:
    """(1 - x)^a_{q^2} expanded for |x| < 1 to order D"""
    coeffs = qdef_binom_coeffs(field, a, order)
    return TruncSeries.one_var(field, dict(enumerate(coeffs)), 0, order, SMALL, var)


def geometric(field: CoeffField, c: CoeffElem, order: int) -> TruncSeries:
    """(1 - c x)^{-1} for |x| < 1"""
    return TruncSeries.one_var(field, {n: c ** n for n in range(order + 1)}, 0, order)


def qdef_binom_product(field: CoeffField, a: int, order: int) -> TruncSeries:
    """Finite-product form prod_{j<|a|} (1 - q^{|a|-1-2j} x)^{sign a}, the oracle for small a"""
    result = TruncSeries.one_var(field, {0: field.one}, 0, order)
    for j in range(abs(a)):
        c = field.q(abs(a) - 1 - 2 * j)
        if a > 0:
            factor = TruncSeries.one_var(field, {0: field.one, 1: -c}, 0, order)
        else:
            factor = geometric(field, c, order)
        result = result * factor
    return result


def expand_factor(field: CoeffField, c: CoeffElem, a: int, lo: int, hi: int, region: Sequence[str]) -> TruncSeries:
    """
    (1 - c x)^a_{q^2} in the given region, exponents of x kept in [lo, hi].

    For |x| > 1 this uses (1 - c x)^a = (-c x)^a (1 - c^{-1} x^{-1})^a.
    """
    if tuple(region) == SMALL:
        base = qdef_binom_coeffs(field, a, max(hi, 0))
        coeffs = {n: base[n] * c ** n for n in range(max(lo, 0), max(hi, 0) + 1)}
        return TruncSeries.one_var(field, coeffs, lo, hi, SMALL)
    depth = max(a - lo, 0)
    base = qdef_binom_coeffs(field, a, depth)
    lead = (-c) ** a
    cinv = c.inverse()
    coeffs = {a - n: lead * base[n] * cinv ** n for n in range(depth + 1) if lo <= a - n <= hi}
    return TruncSeries.one_var(field, coeffs, lo, hi, LARGE)


def _scale_argument(series: TruncSeries, c: CoeffElem) -> TruncSeries:
    """f(x) -> f(c x) for a one-variable series with integer exponents"""
    terms = {e: x * c ** (e[0] // 2) for e, x in series.terms.items()}
    return TruncSeries(series.field, series.vars, terms, series.window, series.region)


def factorwise_product(od: OrbitData, i: int, j: int, lo: int, hi: int,
                       region: Sequence[str] = SMALL, shift: int = 0) -> TruncSeries:
    """prod_k (1 - xi^k q^shift x)^{-<alpha_i|mu^k alpha_j>}_{q^2} factor by factor"""
    field = od.field
    result = TruncSeries.one_var(field, {0: field.one} if lo <= 0 <= hi else {}, lo, hi, region)
    if tuple(region) == LARGE:
        # polynomial degrees push low exponents up, so widen before truncating
        pos = sum(max(-od.pairing(i, j, k), 0) for k in range(od.n))
        wide_lo = lo - pos
        acc = TruncSeries.one_var(field, {0: field.one}, wide_lo, pos, region)
        for k in range(od.n):
            e = od.pairing(i, j, k)
            if e:
                acc = acc * expand_factor(field, field.xi(k) * field.q(shift), -e, wide_lo, pos, region)
        return TruncSeries(field, acc.vars, acc.terms, ((2 * lo, 2 * hi),), region)
    for k in range(od.n):
        e = od.pairing(i, j, k)
        if e:
            result = result * expand_factor(field, field.xi(k) * field.q(shift), -e, lo, hi, region)
    return result


def closed_form_product(od: OrbitData, i: int, j: int, order: int, shift: int = 0) -> TruncSeries:
    """
    prod_k (1 - xi^k x)^{-<alpha_i|mu^k alpha_j>}_{q^2} for |x| < 1, argument scaled by q^shift.

    When j = mu^b(i) this is R(xi^{-b} x) with
    R(x) = (1 + x^{d_ii}) / ((1 - q^{d_i} x^{d_i})(1 - q^{-d_i} x^{d_i})),
    the numerator dropped when d_ii = 0. Otherwise the factorwise route is used.
    """
    field = od.field
    if not od.in_orbit(i, j):
        return factorwise_product(od, i, j, 0, order, SMALL, shift)
    b = od.twists_to(j, i)[0]
    di, dii = od.d_plus[i], od.d[i, i]
    pole_a = geometric(field, field.q(di), order // di)
    pole_b = geometric(field, field.q(-di), order // di)
    poles = pole_a * pole_b
    coeffs: Dict[int, CoeffElem] = {}
    for e, c in poles.terms.items():
        n = (e[0] // 2) * di
        if n <= order:
            coeffs[n] = coeffs.get(n, field.zero) + c
    if dii:
        shifted = {n + dii: c for n, c in coeffs.items() if n + dii <= order}
        for n, c in shifted.items():
            coeffs[n] = coeffs.get(n, field.zero) + c
    series = TruncSeries.one_var(field, coeffs, 0, order)
    return _scale_argument(series, field.xi(-b) * field.q(shift))


def delta_coefficient(c_zeta: int, c_v: int, n: int, field: CoeffField) -> CoeffElem:
    """Coefficient of x^n in delta(c x) for c = zeta^c_zeta v^c_v"""
    return field.monomial(c_zeta * n, c_v * n)


# ---------------------------------------------------------------------------
# Identity checks
# ---------------------------------------------------------------------------

def _witness(n, lhs: CoeffElem, rhs: CoeffElem) -> Witness:
    return {"exponent": str(n), "lhs": str(lhs), "rhs": str(rhs)}


def check_delta_prop(od: OrbitData, i: int, j: int, order: int) -> Tuple[bool, Optional[Witness]]:
    """
    Two-region difference of prod_k (1 - xi^k x)^{-<alpha_i|mu^k alpha_j>}_{q^2}
    against its delta-function decomposition, for |n| <= order.
    """
    field = od.field
    small = factorwise_product(od, i, j, -order, order, SMALL)
    large = factorwise_product(od, i, j, -order, order, LARGE)
    di, dii = od.d_plus[i], od.d[i, i]
    prefactors = {}
    for s in (1, -1):
        denom = field.const(di) * (field.one - field.q(-2 * s * di))
        numer = field.one + field.q(-s * dii) if dii else field.one
        prefactors[s] = numer / denom
    twists = od.twists_to(i, j)
    for n in range(-order, order + 1):
        lhs = small.coeff(n) - large.coeff(n)
        rhs = field.zero
        for k in twists:
            for s in (1, -1):
                # delta(q^s xi^k x)
                rhs = rhs + prefactors[s] * delta_coefficient(2 * k, 2 * s, n, field)
        if lhs != rhs:
            return False, _witness(n, lhs, rhs)
    return True, None


def check_cgjt(field: CoeffField, constants: Sequence[CoeffElem], exponents: Sequence[int],
               order: int) -> Tuple[bool, Optional[Witness]]:
    """
    prod (1 - c_i x)^{a_i} expanded in |x| < 1 minus the |x| > 1 expansion
    equals sum over a_i = -1 of prod_{j != i} (1 - c_j / c_i)^{a_j} delta(c_i x).

    Raises:
        DegenerateConstants: constants repeated or zero
    """
    if any(c.is_zero() for c in constants):
        raise DegenerateConstants("Zero constant")
    for a, b in itertools.combinations(constants, 2):
        if a == b:
            raise DegenerateConstants(f"Repeated constant {a}")
    if any(a < -1 for a in exponents):
        raise ValueError("Exponents must be >= -1")

    pos = sum(max(a, 0) for a in exponents)
    wide_lo = -order - pos
    small = TruncSeries.one_var(field, {0: field.one}, 0, order + pos)
    large = TruncSeries.one_var(field, {0: field.one}, wide_lo, pos, LARGE)
    for c, a in zip(constants, exponents):
        if a >= 0:
            coeffs = {n: (-c) ** n * math.comb(a, n) for n in range(a + 1)}
            small = small * TruncSeries.one_var(field, coeffs, 0, order + pos)
            large = large * TruncSeries.one_var(field, coeffs, wide_lo, pos, LARGE)
        else:
            small = small * geometric(field, c, order + pos)
            cinv = c.inverse()
            coeffs = {-n: -(cinv ** n) for n in range(1, -wide_lo + 1)}
            large = large * TruncSeries.one_var(field, coeffs, wide_lo, pos, LARGE)

    prefactors = []
    for idx, (ci, ai) in enumerate(zip(constants, exponents)):
        if ai != -1:
            continue
        pref = field.one
        for jdx, (cj, aj) in enumerate(zip(constants, exponents)):
            if jdx != idx:
                pref = pref * (field.one - cj / ci) ** aj
        prefactors.append((ci, pref))

    for n in range(-order, order + 1):
        lhs = small.coeff(n) - large.coeff(n)
        rhs = field.zero
        for ci, pref in prefactors:
            rhs = rhs + pref * ci ** n
        if lhs != rhs:
            return False, _witness(n, lhs, rhs)
    return True, None


def _ps0_symbols():
    z1, z2, w, q = sympy.symbols("z1 z2 w q")
    return z1, z2, w, q


def _ps0_expression(z1, z2, w, q):
    return (z1 - q ** -2 * z2) * (
        1 / ((z1 - w / q) * (z2 - w / q))
        + (q + 1 / q) / ((z1 - w / q) * (w - z2 / q))
        + 1 / ((w - z1 / q) * (w - z2 / q))
    )


def _ps0_truncated(order: int) -> bool:
    """P(z1, z2, w) - P(z2, z1, w) in C((z1, z2))((w)) to w-order `order`"""
    field = CoeffField(2)
    depth = order + 3
    vars = ("z1", "z2", "w")
    window = ((-2 * depth, 4), (-2 * depth, 4), (0, 2 * order))
    region = ("z1", "z2", "w")

    def series(terms):
        return TruncSeries(field, vars, terms, window, region)

    def pole_small(slot: int) -> TruncSeries:
        # (z - q^{-1} w)^{-1} = sum q^{-n} w^n z^{-n-1}
        terms = {}
        for n in range(order + 1):
            e = [0, 0, 2 * n]
            e[slot] = -2 * (n + 1)
            terms[tuple(e)] = field.q(-n)
        return series(terms)

    def pole_large(slot: int) -> TruncSeries:
        # (w - q^{-1} z)^{-1} = -q z^{-1} sum q^n w^n z^{-n}
        terms = {}
        for n in range(order + 1):
            e = [0, 0, 2 * n]
            e[slot] = -2 * (n + 1)
            terms[tuple(e)] = -field.q(n + 1)
        return series(terms)

    a1, a2, b1, b2 = pole_small(0), pole_small(1), pole_large(0), pole_large(1)
    bracket = a1 * a2 + (a1 * b2).scale(field.q(1) + field.q(-1)) + b1 * b2
    lead = series({(2, 0, 0): field.one, (0, 2, 0): -field.q(-2)})
    p = lead * bracket
    return (p - p.rename((1, 0, 2))).is_zero()


def check_ps0(order: int = 8) -> bool:
    """Antisymmetrized three-variable identity, exact and truncated routes"""
    z1, z2, w, q = _ps0_symbols()
    p = _ps0_expression(z1, z2, w, q)
    swapped = p.subs({z1: z2, z2: z1}, simultaneous=True)
    exact = sympy.cancel(sympy.together(p - swapped)) == 0
    diagonal = sympy.simplify((p - swapped).subs(z2, z1)) == 0
    return exact and diagonal and _ps0_truncated(order)


def check_serre_scalar(d_i: int, d_ii: int, sign: int) -> bool:
    """
    S3-symmetrized scalar sum behind the cubic Serre relation.

    Raises:
        Inapplicable: d_ii = 0 or d_i does not divide d_ii
    """
    if d_ii <= 0 or d_i <= 0 or d_ii % d_i:
        raise Inapplicable(f"Serre scalar needs d_ii > 0 and d_i | d_ii, got d_i={d_i}, d_ii={d_ii}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    v = sympy.Symbol("v")
    zs = sympy.symbols("z1 z2 z3")
    d, s = d_ii, sign
    total = 0
    for perm in itertools.permutations(range(3)):
        u = [zs[k] ** d for k in perm]
        head = v ** (-3 * d * s) * u[0] - (v ** d + v ** -d) * u[1] + v ** (3 * d * s) * u[2]
        body = 1
        for a, b in itertools.combinations(range(3), 2):
            body *= (u[a] - u[b]) * (u[a] - v ** (-4 * d * s) * u[b]) / (u[a] + v ** (-2 * d * s) * u[b])
        total += head * body
    return sympy.cancel(sympy.together(total)) == 0


def check_qbinom_products(field: CoeffField, order: int) -> Tuple[bool, Optional[Witness]]:
    """log/exp expansion against finite products for a in {-2..2}, and the inverse property"""
    for a in (-2, -1, 0, 1, 2):
        lhs = qdef_binom_expand(field, a, order)
        rhs = qdef_binom_product(field, a, order)
        for n in range(order + 1):
            if lhs.coeff(n) != rhs.coeff(n):
                return False, _witness(f"a={a},n={n}", lhs.coeff(n), rhs.coeff(n))
        inv = lhs * qdef_binom_expand(field, -a, order)
        for n in range(order + 1):
            expected = field.one if n == 0 else field.zero
            if inv.coeff(n) != expected:
                return False, _witness(f"a={a},inverse,n={n}", inv.coeff(n), expected)
    return True, None


def check_dual_route(od: OrbitData, i: int, j: int, order: int) -> Tuple[bool, Optional[Witness]]:
    """closed_form_product against factorwise_product"""
    closed = closed_form_product(od, i, j, order)
    factor = factorwise_product(od, i, j, 0, order)
    for n in range(order + 1):
        if closed.coeff(n) != factor.coeff(n):
            return False, _witness(n, closed.coeff(n), factor.coeff(n))
    return True, None


def check_orbit_products(od: OrbitData, i: int, j: int, sign: int, order: int) -> Tuple[bool, Optional[Witness]]:
    """
    prod_k (1 - q^{-sign} xi^k x)^{<alpha_i|mu^k alpha_j>}_{q^2} against its closed form:
    (1 - x^{d_i})(1 - q^{-2 sign d_i} x^{d_i}) / (1 + q^{-sign d_ii} x^{d_ii}) for j = i
    (no denominator when d_ii = 0), and (1 - q^{-sign d_ij} x^{d_ij})^{-1} for a_ij < 0, j not in O(i).
    """
    field = od.field
    factor = TruncSeries.one_var(field, {0: field.one}, 0, order)
    for k in range(od.n):
        e = od.pairing(i, j, k)
        if e:
            factor = factor * expand_factor(field, field.xi(k) * field.q(-sign), e, 0, order, SMALL)
    if i == j:
        di, dii = od.d_plus[i], od.d[i, i]
        numer = TruncSeries.one_var(
            field, {0: field.one, di: -(field.one + field.q(-2 * sign * di))}, 0, order
        )
        if 2 * di <= order:
            numer = numer + TruncSeries.one_var(field, {2 * di: field.q(-2 * sign * di)}, 0, order)
        closed = numer
        if dii:
            c = -field.q(-sign * dii)
            inv = {dii * n: c ** n for n in range(order // dii + 1)}
            closed = closed * TruncSeries.one_var(field, inv, 0, order)
    elif od.a(i, j) < 0 and not od.in_orbit(i, j):
        dij = od.d[i, j]
        c = field.q(-sign * dij)
        closed = TruncSeries.one_var(field, {dij * n: c ** n for n in range(order // dij + 1)}, 0, order)
    else:
        raise Inapplicable(f"No closed form for ({i + 1},{j + 1})")
    for n in range(order + 1):
        if closed.coeff(n) != factor.coeff(n):
            return False, _witness(n, factor.coeff(n), closed.coeff(n))
    return True, None
