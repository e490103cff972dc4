"""
Taffin Relation Catalog

Structure polynomials F, G, g, p of the twisted quantum affinization and the
catalog of relation instances (Q0)-(Q10), the h-form brackets and the folded
Serre form, generated over orbit representatives.
"""
import enum
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from taffin.engine.cartan import OrbitData, check_linking, folded_matrix
from taffin.engine.coeff import CoeffElem, CoeffField, gauss_binom, q_integer
from taffin.engine.distcalc import TruncSeries, expand_factor, SMALL
from taffin.errors import Inapplicable, InexactDivision

Exps = Tuple[int, ...]


class RelationId(str, enum.Enum):
    """Relation families"""
    Q0 = "Q0"
    Q1 = "Q1"
    Q2 = "Q2"
    Q3 = "Q3"
    Q4 = "Q4"
    Q5 = "Q5"
    Q6 = "Q6"
    Q7 = "Q7"
    Q8 = "Q8"
    Q9 = "Q9"
    Q10 = "Q10"
    H1 = "H1"
    Q4P = "Q4p"
    Q5P = "Q5p"
    Q6P = "Q6p"
    Q9P = "Q9p"


SERRE_RELATIONS = (RelationId.Q9, RelationId.Q10)


class QiInterpretation(str, enum.Enum):
    """Readings of the undefined q_i in (Q7)"""
    Q = "q"
    Q_DI = "q^{d_i}"
    Q_DI_SI = "q^{d_i/s_i}"


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------

class MPoly:
    """Polynomial in a fixed number of variables with CoeffElem coefficients"""

    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: CoeffField, nvars: int, terms: Optional[Dict[Exps, CoeffElem]] = None):
        self.field = field
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def const(cls, field: CoeffField, nvars: int, c) -> "MPoly":
        c = c if isinstance(c, CoeffElem) else field.const(c)
        return cls(field, nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, field: CoeffField, nvars: int, exps: Sequence[int], c=1) -> "MPoly":
        c = c if isinstance(c, CoeffElem) else field.const(c)
        return cls(field, nvars, {tuple(exps): c})

    @classmethod
    def binomial(cls, field: CoeffField, nvars: int, a: CoeffElem, ea: Sequence[int],
                 b: CoeffElem, eb: Sequence[int]) -> "MPoly":
        """a x^ea + b x^eb"""
        return cls.monomial(field, nvars, ea, a) + cls.monomial(field, nvars, eb, b)

    def __add__(self, other: "MPoly") -> "MPoly":
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms[e] + c if e in terms else c
        return MPoly(self.field, self.nvars, terms)

    def __neg__(self) -> "MPoly":
        return MPoly(self.field, self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "MPoly") -> "MPoly":
        return self + (-other)

    def __mul__(self, other) -> "MPoly":
        if not isinstance(other, MPoly):
            c = other if isinstance(other, CoeffElem) else self.field.const(other)
            return MPoly(self.field, self.nvars, {e: x * c for e, x in self.terms.items()})
        terms: Dict[Exps, CoeffElem] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                p = c1 * c2
                terms[e] = terms[e] + p if e in terms else p
        return MPoly(self.field, self.nvars, terms)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, MPoly):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def leading(self) -> Tuple[Exps, CoeffElem]:
        e = max(self.terms)
        return e, self.terms[e]

    def exact_div(self, divisor: "MPoly") -> "MPoly":
        """
        Lex-order division; the remainder must vanish.

        Raises:
            InexactDivision: nonzero remainder
        """
        if divisor.is_zero():
            raise InexactDivision("Division by the zero polynomial")
        lead_e, lead_c = divisor.leading()
        quotient = MPoly(self.field, self.nvars)
        rest = self
        while not rest.is_zero():
            e, c = rest.leading()
            if any(a < b for a, b in zip(e, lead_e)):
                raise InexactDivision(f"Remainder term with exponents {e}")
            t = MPoly.monomial(self.field, self.nvars, [a - b for a, b in zip(e, lead_e)], c / lead_c)
            quotient = quotient + t
            rest = rest - t * divisor
        return quotient

    def permute(self, perm: Sequence[int]) -> "MPoly":
        """Variable k of the result is variable perm[k] of self"""
        return MPoly(self.field, self.nvars, {tuple(e[p] for p in perm): c for e, c in self.terms.items()})

    def specialize_first(self, value: CoeffElem) -> "MPoly":
        """Set the first variable to a scalar, keeping nvars - 1 variables"""
        terms: Dict[Exps, CoeffElem] = {}
        for e, c in self.terms.items():
            rest = e[1:]
            p = c * value ** e[0]
            terms[rest] = terms[rest] + p if rest in terms else p
        return MPoly(self.field, self.nvars - 1, terms)

    def to_json(self) -> List[List]:
        return [[list(e), str(c)] for e, c in sorted(self.terms.items(), reverse=True)]

    def __str__(self) -> str:
        names = ("z", "w") if self.nvars == 2 else tuple(f"z{k + 1}" for k in range(self.nvars))
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(n if p == 1 else f"{n}^{p}" for n, p in zip(names, e) if p)
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts)


def build_FG(od: OrbitData, i: int, j: int, sign: int) -> Tuple[MPoly, MPoly]:
    """
    F = prod_{k in Gamma_ij} (z - xi^k q^{sign a} w),
    G = prod_{k in Gamma_ij} (q^{sign a} z - xi^k w), a = a_{i mu^k(j)}.
    """
    field = od.field
    f = MPoly.const(field, 2, 1)
    g = MPoly.const(field, 2, 1)
    for k in sorted(od.gamma[i, j]):
        a = od.pairing(i, j, k)
        qa = field.q(sign * a)
        f = f * MPoly.binomial(field, 2, field.one, (1, 0), -(field.xi(k) * qa), (0, 1))
        g = g * MPoly.binomial(field, 2, qa, (1, 0), -field.xi(k), (0, 1))
    return f, g


def g_factors(od: OrbitData, i: int, j: int) -> List[Tuple[int, int]]:
    """(k, a_{i mu^k(j)}) over Gamma_ij"""
    return [(k, od.pairing(i, j, k)) for k in sorted(od.gamma[i, j])]


def expand_g(od: OrbitData, i: int, j: int, order: int, scale: Optional[CoeffElem] = None,
             power: int = 1) -> TruncSeries:
    """
    g_ij(c x)^power for |x| < 1, where g_ij(x) = G^+(1, x) / F^+(1, x).

    Args:
        od: Orbit data
        i, j: Indices
        order: Highest power of x kept
        scale: Argument multiplier c (default 1)
        power: +1 or -1
    """
    field = od.field
    c = scale if scale is not None else field.one
    series = TruncSeries.one_var(field, {0: field.one}, 0, order)
    for k, a in g_factors(od, i, j):
        # (q^a - xi^k y) / (1 - xi^k q^a y) with y = c x
        head = field.q(a * power)
        top = TruncSeries.one_var(field, {0: field.one, 1: -(field.xi(k) * field.q(-a) * c)}, 0, order)
        bottom = expand_factor(field, field.xi(k) * field.q(a) * c, -1, 0, order, SMALL)
        if power > 0:
            series = series * top * bottom
        else:
            inv_top = expand_factor(field, field.xi(k) * field.q(-a) * c, -1, 0, order, SMALL)
            lin = TruncSeries.one_var(field, {0: field.one, 1: -(field.xi(k) * field.q(a) * c)}, 0, order)
            series = series * inv_top * lin
        series = series.scale(head)
    return series


def _p_ratio(field: CoeffField, nvars: int, a: int, b: int, d_top: int, d_bot: int, s: int) -> MPoly:
    """(q^{2s d_top} x_a^{d_top} - x_b^{d_top}) / (q^{2s d_bot} x_a^{d_bot} - x_b^{d_bot})"""
    def mono(var, deg):
        e = [0] * nvars
        e[var] = deg
        return e
    top = MPoly.binomial(field, nvars, field.q(2 * s * d_top), mono(a, d_top), -field.one, mono(b, d_top))
    bottom = MPoly.binomial(field, nvars, field.q(2 * s * d_bot), mono(a, d_bot), -field.one, mono(b, d_bot))
    return top.exact_div(bottom)


def build_p_ij(od: OrbitData, i: int, j: int, sign: int) -> MPoly:
    """
    p_ij^sign(z, w) = (z^{d_ii} + q^{-sign d_ii} w^{d_ii})
                      (q^{2 sign d_ij} z^{d_ij} - w^{d_ij}) / (q^{2 sign d_i} z^{d_i} - w^{d_i})

    Raises:
        Inapplicable: a_ij >= 0 or i in O(j)
        InexactDivision: d_i does not divide d_ij
    """
    if od.a(i, j) >= 0 or od.in_orbit(i, j):
        raise Inapplicable(f"p_ij needs a_ij < 0 and i not in O(j) for ({i + 1},{j + 1})")
    field = od.field
    dii, dij, di = od.d[i, i], od.d[i, j], od.d_plus[i]
    head = MPoly.binomial(field, 2, field.one, (dii, 0), field.q(-sign * dii), (0, dii))
    return head * _p_ratio(field, 2, 0, 1, dij, di, sign)


def build_p_i(od: OrbitData, i: int, sign: int) -> MPoly:
    """
    p_i^sign(z1, z2, z3), the branch paired with x^sign in the cubic Serre relation:
    (q^{-3 sign d_ii/2} z1^{d_ii} - [2]_{q^{d_ii/2}} z2^{d_ii} + q^{3 sign d_ii/2} z3^{d_ii})
    times prod_{a<b} of exact quotients over the d_i-powered factors.

    Raises:
        Inapplicable: d_ii = 0
    """
    dii, di = od.d[i, i], od.d_plus[i]
    if dii == 0:
        raise Inapplicable(f"d_{i + 1}{i + 1} = 0")
    field = od.field
    head = (
        MPoly.monomial(field, 3, (dii, 0, 0), field.v(-3 * sign * dii))
        - MPoly.monomial(field, 3, (0, dii, 0), field.v(dii) + field.v(-dii))
        + MPoly.monomial(field, 3, (0, 0, dii), field.v(3 * sign * dii))
    )
    result = head
    for a, b in ((0, 1), (0, 2), (1, 2)):
        def diff(deg, c):
            ea = [0, 0, 0]
            eb = [0, 0, 0]
            ea[a] = deg
            eb[b] = deg
            return MPoly.binomial(field, 3, field.one, ea, -c, eb)
        top = diff(dii, field.one) * diff(dii, field.q(-2 * sign * dii))
        bottom = diff(di, field.one) * diff(di, field.q(-2 * sign * di))
        result = result * top.exact_div(bottom)
    return result


# ---------------------------------------------------------------------------
# Constants
# ---------------------------------------------------------------------------

def h_bracket_constant(od: OrbitData, i: int, j: int, m: int) -> CoeffElem:
    """(1/m) sum_k xi^{mk} [m a_{i mu^k(j)}]_q [m]_q, the level-one (Q4') constant"""
    field = od.field
    total = field.zero
    for k in range(od.n):
        total = total + field.xi(m * k) * q_integer(field, m * od.pairing(i, j, k))
    return total * q_integer(field, m) * Fraction(1, m)


def h_action_constant(od: OrbitData, i: int, j: int, m: int, sign: int) -> CoeffElem:
    """
    Constant of [h_{i,m}, x^sign_{j,n}] = c x^sign_{j,m+n}:
    sign (1/m) sum_k xi^{mk} [m a_{i mu^k(j)}]_q q^{-sign |m| / 2}.
    """
    field = od.field
    total = field.zero
    for k in range(od.n):
        total = total + field.xi(m * k) * q_integer(field, m * od.pairing(i, j, k))
    return total * Fraction(sign, m) * field.v(-sign * abs(m))


def s_value(od: OrbitData, i: int) -> Fraction:
    total = sum(od.a(od.mu(i, k), i) for k in range(od.n))
    return 3 - Fraction(total, od.d_plus[i])


def qi_exponent(od: OrbitData, i: int, interpretation: QiInterpretation) -> Fraction:
    """Exponent e with q_i = q^e"""
    interpretation = QiInterpretation(interpretation)
    if interpretation is QiInterpretation.Q:
        return Fraction(1)
    if interpretation is QiInterpretation.Q_DI:
        return Fraction(od.d_plus[i])
    return Fraction(od.d_plus[i]) / s_value(od, i)


def q7_constant(od: OrbitData, i: int, interpretation: QiInterpretation) -> CoeffElem:
    """1 / (q_i - q_i^{-1})"""
    field = od.field
    e = qi_exponent(od, i, interpretation)
    if (2 * e).denominator != 1:
        raise Inapplicable(f"q_i = q^{e} is not a power of v")
    return (field.q(e) - field.q(-e)).inverse()


def epsilon_sq(od: OrbitData, i: int) -> CoeffElem:
    """d_i [d_i]_q / [2]_{q^{d_ii/2}} when d_ii > 0, else d_i [d_i]_q"""
    field = od.field
    di, dii = od.d_plus[i], od.d[i, i]
    value = q_integer(field, di) * di
    if dii:
        value = value / q_integer(field, 2, Fraction(dii, 2))
    return value


# ---------------------------------------------------------------------------
# Catalog
# ---------------------------------------------------------------------------

class RelationDescriptor:
    """One relation instance: family, indices, signs and payload"""

    def __init__(self, rel: RelationId, instance: Tuple = (), sign: int = 0,
                 payload: Optional[dict] = None, status_hint: Optional[str] = None):
        self.rel = RelationId(rel)
        self.instance = tuple(instance)
        self.sign = sign
        self.payload = payload or {}
        self.status_hint = status_hint

    @property
    def label(self) -> str:
        idx = ",".join(str(k + 1) for k in self.instance)
        mark = {1: "+", -1: "-"}.get(self.sign, "")
        return f"{self.rel.value}({idx}){mark}"

    def to_dict(self) -> dict:
        payload = {}
        for key, value in self.payload.items():
            if isinstance(value, MPoly):
                payload[key] = value.to_json()
            elif isinstance(value, CoeffElem):
                payload[key] = str(value)
            elif isinstance(value, dict):
                payload[key] = {str(k): str(v) for k, v in value.items()}
            elif isinstance(value, list):
                payload[key] = [str(x) if isinstance(x, CoeffElem) else x for x in value]
            else:
                payload[key] = value
        out = {
            "relation": self.rel.value,
            "instance": [k + 1 for k in self.instance],
            "sign": {1: "+", -1: "-"}.get(self.sign, ""),
            "payload": payload,
        }
        if self.status_hint:
            out["status"] = self.status_hint
        return out

    def __repr__(self) -> str:
        return f"RelationDescriptor({self.label})"


SIGNS = (1, -1)


def serre_partner(od: OrbitData, i: int, rep_j: int) -> Optional[int]:
    """Smallest j in O(rep_j) with a_ij < 0 and i not in O(j)"""
    if od.in_orbit(i, rep_j):
        return None
    for j in od.orbit(rep_j):
        if od.a(i, j) < 0:
            return j
    return None


def emit_catalog(od: OrbitData, include_q9p: bool = False, modes: int = 3,
                 qi: QiInterpretation = QiInterpretation.Q) -> List[RelationDescriptor]:
    """
    Every applicable relation instance over orbit representatives.

    Args:
        od: Orbit data; (LC) must hold
        include_q9p: Also emit the folded Serre form
        modes: h-form constants are listed for 1 <= |m| <= modes
        qi: Reading of q_i in (Q7)

    Raises:
        Inapplicable: (LC) fails
    """
    ok, offending = check_linking(od)
    if not ok:
        raise Inapplicable(f"Linking condition fails at {[(i + 1, j + 1) for i, j in offending]}")
    field = od.field
    reps = od.reps
    out: List[RelationDescriptor] = []

    for i in range(od.size):
        rep, rot = od.rep_of[i]
        out.append(RelationDescriptor(RelationId.Q0, (i,), 0, {"representative": rep + 1, "rotation": rot}))
    out.append(RelationDescriptor(RelationId.Q1, (), 0, {}))
    out.append(RelationDescriptor(RelationId.Q2, (), 0, {}))
    for i in reps:
        for s in SIGNS:
            out.append(RelationDescriptor(RelationId.Q3, (i,), s, {}))
    for i in reps:
        for j in reps:
            out.append(RelationDescriptor(RelationId.Q4, (i, j), 0, {"g": _g_payload(od, i, j)}))
            for s in SIGNS:
                out.append(RelationDescriptor(RelationId.Q5, (i, j), s, {"g": _g_payload(od, i, j)}))
                out.append(RelationDescriptor(RelationId.Q6, (i, j), s, {"g": _g_payload(od, j, i)}))
    for i in reps:
        for j in reps:
            twists = od.twists_to(i, j)
            payload = {"twists": twists}
            if twists:
                payload["inverse_q_i_term"] = q7_constant(od, i, qi)
                payload["epsilon_sq"] = epsilon_sq(od, i)
            out.append(RelationDescriptor(RelationId.Q7, (i, j), 0, payload))
    for i in reps:
        for j in reps:
            for s in SIGNS:
                f, g = build_FG(od, i, j, s)
                out.append(RelationDescriptor(RelationId.Q8, (i, j), s, {"F": f, "G": g}))
    for i in reps:
        for rep_j in reps:
            j = serre_partner(od, i, rep_j)
            if j is None:
                continue
            for s in SIGNS:
                out.append(RelationDescriptor(
                    RelationId.Q9, (i, j), s,
                    {"p": build_p_ij(od, i, j, s), "q_binomial": q_integer(field, 2, od.d[i, j])},
                ))
    for i in reps:
        if od.d[i, i] > 0:
            for s in SIGNS:
                out.append(RelationDescriptor(RelationId.Q10, (i,), s, {"p": build_p_i(od, i, s)}))
    for i in reps:
        for j in reps:
            ms = [m for m in range(-modes, modes + 1) if m]
            out.append(RelationDescriptor(RelationId.H1, (i, j), 0,
                                          {"constants": {m: h_bracket_constant(od, i, j, m) for m in ms}}))
            out.append(RelationDescriptor(RelationId.Q4P, (i, j), 0,
                                          {"constants": {m: h_bracket_constant(od, i, j, m) for m in ms}}))
            for s in SIGNS:
                out.append(RelationDescriptor(
                    RelationId.Q5P, (i, j), s,
                    {"constants": {m: h_action_constant(od, i, j, m, s) for m in range(1, modes + 1)}}))
                out.append(RelationDescriptor(
                    RelationId.Q6P, (i, j), s,
                    {"constants": {m: h_action_constant(od, i, j, m, s) for m in range(-modes, 0)}}))
    if include_q9p:
        out.extend(emit_q9p(od))
    return out


def _g_payload(od: OrbitData, i: int, j: int) -> List[str]:
    return [f"xi^{k} q^{a}" for k, a in g_factors(od, i, j)]


def emit_q9p(od: OrbitData) -> List[RelationDescriptor]:
    """
    Folded Serre relations sum_r (-1)^r [1 - a_ij, r]_{q^{d_i/s_i}} x^r x_j x^{1 - a_ij - r},
    emitted without verification.
    """
    field = od.field
    rows, s = folded_matrix(od)
    out = []
    for pi, i in enumerate(od.reps):
        base = Fraction(od.d_plus[i]) / Fraction(s[pi])
        for pj, j in enumerate(od.reps):
            if pi == pj or rows[pi][pj] >= 0:
                continue
            top = 1 - rows[pi][pj]
            if top.denominator != 1 or (2 * base).denominator != 1:
                continue
            top = int(top)
            coeffs = [gauss_binom(field, top, r, base) * (-1) ** r for r in range(top + 1)]
            out.append(RelationDescriptor(
                RelationId.Q9P, (i, j), 0,
                {"folded_entry": str(rows[pi][pj]), "base": f"q^{base}", "coefficients": coeffs},
                status_hint="unverified-equivalence",
            ))
    return out
