"""
Taffin Vertex Operators

Twisted vertex operators X, Phi and the half-exponentials E on the Fock
space, generating series as exact operator series, and normal ordering.

Exponents of formal variables are doubled throughout so that the half-integer
powers carried by X currents stay integral.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from taffin.engine.cartan import OrbitData, RootVec
from taffin.engine.coeff import CoeffElem
from taffin.engine.distcalc import expand_factor, SMALL
from taffin.engine.fock import (
    FockVector,
    HeisenbergModule,
    Key,
    Mono,
    partitions,
    accumulate,
    degree,
)
from taffin.errors import NegativeMode, UnsupportedArity

Exps = Tuple[int, ...]
Slice = Dict[Key, CoeffElem]

KINDS = ("X", "Phi+", "Phi-")


@dataclass(frozen=True)
class Current:
    """
    One generating current placed on a formal variable.

    Args:
        kind: "X", "Phi+" or "Phi-"
        index: Node index, representative or not
        sign: +1 or -1 for X currents
        var: Position of the formal variable it lives on
        scale: (a, b) so the argument is zeta^a v^b times the variable
    """

    kind: str
    index: int
    sign: int = 1
    var: int = 0
    scale: Tuple[int, int] = (0, 0)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"Unknown current kind {self.kind!r}")
        if self.sign not in (1, -1):
            raise ValueError(f"Current sign must be +1 or -1, got {self.sign}")

    def label(self) -> str:
        head = "X" + ("+" if self.sign > 0 else "-") if self.kind == "X" else self.kind
        return f"{head}_{self.index + 1}(z{self.var + 1})"


class OperatorSeries:
    """
    Formal series in several variables with Fock-vector coefficients.

    Keys are doubled exponent tuples; values map basis keys to coefficients.
    """

    __slots__ = ("nvars", "data")

    def __init__(self, nvars: int, data: Optional[Dict[Exps, Slice]] = None):
        self.nvars = nvars
        self.data = {e: dict(s) for e, s in (data or {}).items() if s}

    def add_term(self, exps: Exps, key: Key, c: CoeffElem) -> None:
        target = self.data.setdefault(exps, {})
        accumulate(target, key, c)
        if not target:
            del self.data[exps]

    def __add__(self, other: "OperatorSeries") -> "OperatorSeries":
        out = OperatorSeries(self.nvars, self.data)
        for e, s in other.data.items():
            for key, c in s.items():
                out.add_term(e, key, c)
        return out

    def __neg__(self) -> "OperatorSeries":
        return OperatorSeries(self.nvars, {e: {k: -c for k, c in s.items()} for e, s in self.data.items()})

    def __sub__(self, other: "OperatorSeries") -> "OperatorSeries":
        return self + (-other)

    def scale(self, c: CoeffElem) -> "OperatorSeries":
        if c.is_zero():
            return OperatorSeries(self.nvars)
        return OperatorSeries(self.nvars, {e: {k: x * c for k, x in s.items()} for e, s in self.data.items()})

    def coefficient(self, exps: Exps) -> FockVector:
        return FockVector(self.data.get(tuple(exps), {}))

    def permute(self, perm: Sequence[int]) -> "OperatorSeries":
        """Variable perm[p] of the result takes the exponent of variable p"""
        out: Dict[Exps, Slice] = {}
        for e, s in self.data.items():
            new = [0] * self.nvars
            for p, x in enumerate(e):
                new[perm[p]] = x
            out[tuple(new)] = s
        return OperatorSeries(self.nvars, out)

    def times_poly(self, poly) -> "OperatorSeries":
        """Multiply by a polynomial whose exponents are plain integers"""
        out = OperatorSeries(self.nvars)
        for pe, pc in poly.terms.items():
            pe = tuple(pe) + (0,) * (self.nvars - len(pe))
            for e, s in self.data.items():
                shifted = tuple(x + 2 * d for x, d in zip(e, pe))
                for key, c in s.items():
                    out.add_term(shifted, key, c * pc)
        return out

    def times_ratio(self, coeffs: Dict[int, CoeffElem], num: int, den: int) -> "OperatorSeries":
        """Multiply by sum_n coeffs[n] (z_num / z_den)^n"""
        out = OperatorSeries(self.nvars)
        for n, h in coeffs.items():
            if h.is_zero():
                continue
            for e, s in self.data.items():
                new = list(e)
                new[num] += 2 * n
                new[den] -= 2 * n
                for key, c in s.items():
                    out.add_term(tuple(new), key, c * h)
        return out

    def first_mismatch(self, other: "OperatorSeries", lo: Sequence[int], hi: Sequence[int]):
        """
        First (exponents, basis key, lhs, rhs) inside the doubled window where
        the series differ, or None.
        """
        def inside(e):
            return all(a <= x <= b for x, a, b in zip(e, lo, hi))

        for e in sorted(set(self.data) | set(other.data)):
            if not inside(e):
                continue
            left = FockVector(self.data.get(e, {}))
            right = FockVector(other.data.get(e, {}))
            diff = left.first_difference(right)
            if diff is not None:
                key, a, b = diff
                return e, key, a, b
        return None

    def is_zero(self) -> bool:
        return not self.data

    def __repr__(self) -> str:
        return f"OperatorSeries({self.nvars} vars, {len(self.data)} exponents)"


def exponent_label(exps: Exps, names: Sequence[str] = ("z", "w", "u")) -> str:
    parts = []
    for p, e in enumerate(exps):
        name = names[p] if p < len(names) else f"z{p + 1}"
        value = Fraction(e, 2)
        parts.append(f"{name}^{value}")
    return " ".join(parts)


class VertexAlgebra:
    """
    Currents acting on the Fock space of one orbit datum.

    Applications of a current to a basis key are memoized for the lifetime of
    the instance.
    """

    def __init__(self, od: OrbitData):
        self.od = od
        self.field = od.field
        self.module = HeisenbergModule(od)
        self._minus: Dict[Tuple[int, int], List[Tuple[Mono, Fraction, int]]] = {}
        self._cache: Dict[tuple, Dict[int, Slice]] = {}
        self.applications = 0

    # -- exponential pieces -----------------------------------------------

    def minus_terms(self, rep: int, total: int) -> List[Tuple[Mono, Fraction, int]]:
        """
        Partitions of total into parts divisible by d_rep, as
        (monomial, 1 / prod k_n!, number of parts).
        """
        key = (rep, total)
        if key not in self._minus:
            d = self.od.d_plus[rep]
            out = []
            if total % d == 0:
                for parts in partitions(total, d):
                    weight = Fraction(1)
                    for n in set(parts):
                        k = parts.count(n)
                        for t in range(2, k + 1):
                            weight /= t
                    mono = tuple(sorted((rep, n) for n in parts))
                    out.append((mono, weight, len(parts)))
            self._minus[key] = out
        return self._minus[key]

    def plus_shifts(self, rep: int, s: int, mono: Mono, scale: Tuple[int, int]) -> Dict[Tuple[int, int], CoeffElem]:
        """Shifts b_f -> b_f + t_f z^{-m} realizing E_+(s alpha_rep, c z), c = zeta^a v^b"""
        a, b = scale
        out = {}
        for f in set(mono):
            j, m = f
            lam = self.module.lam(rep, j, m)
            if not lam.is_zero():
                out[f] = self.field.monomial(-a * m, -b * m, -s) * lam
        return out

    def e_minus(self, rep: int, s: int, scale: Tuple[int, int], total: int) -> List[Tuple[Mono, CoeffElem]]:
        """Coefficient of z^total in E_-(s alpha_rep, c z) as (monomial, coefficient) pairs"""
        a, b = scale
        c_pow = self.field.monomial(a * total, b * total)
        return [(mono, c_pow * (w * s ** length)) for mono, w, length in self.minus_terms(rep, total)]

    # -- currents on basis keys -----------------------------------------

    def x_on_key(self, rep: int, s: int, key: Key, hi: int) -> Dict[int, Slice]:
        """X^s_rep(z) on a basis key, every doubled exponent <= hi"""
        od, field, module = self.od, self.field, self.module
        a = od.simple_root(rep)
        mono, beta = key
        e0 = 2 * s * od.grading(a, RootVec(beta)) + od.grading(a, a)
        (_, new_beta), eps = module.lattice(a * s, key)
        out: Dict[int, Slice] = {}
        plus = module.shift_substitute(mono, self.plus_shifts(rep, s, mono, (0, s)))
        for (rest, zp), c in plus.items():
            base = e0 + 2 * zp
            if base > hi:
                continue
            c = c * eps
            for total in range((hi - base) // 2 + 1):
                for parts, coef in self.e_minus(rep, s, (0, -s), total):
                    target = out.setdefault(base + 2 * total, {})
                    accumulate(target, (tuple(sorted(rest + parts)), new_beta), c * coef)
        return {e: sl for e, sl in out.items() if sl}

    def phi_plus_on_key(self, index: int, key: Key) -> Dict[int, Slice]:
        """Phi^+_index(z) on a basis key; exponents are <= 0"""
        od, field, module = self.od, self.field, self.module
        rep, r = od.rep_of[index]
        mono, beta = key
        scalar = field.q(od.grading(od.simple_root(rep), RootVec(beta)))
        step = field.q(1) - field.q(-1)
        shifts = {}
        for f in set(mono):
            j, m = f
            kappa = module.kappa(rep, j, m)
            if not kappa.is_zero():
                shifts[f] = step * field.xi(r * m) * kappa
        out: Dict[int, Slice] = {}
        for (rest, zp), c in module.shift_substitute(mono, shifts).items():
            accumulate(out.setdefault(2 * zp, {}), (rest, beta), c * scalar)
        return {e: sl for e, sl in out.items() if sl}

    def phi_minus_on_key(self, index: int, key: Key, hi: int) -> Dict[int, Slice]:
        """Phi^-_index(z) on a basis key, doubled exponents in [0, hi]"""
        od, field = self.od, self.field
        rep, r = od.rep_of[index]
        mono, beta = key
        scalar = field.q(-od.grading(od.simple_root(rep), RootVec(beta)))
        out: Dict[int, Slice] = {}
        for total in range(hi // 2 + 1):
            for parts, weight, _ in self.minus_terms(rep, total):
                c = scalar * weight
                for _, n in parts:
                    c = c * (-(field.q(n) - field.q(-n)) * field.xi(-r * n))
                accumulate(out.setdefault(2 * total, {}), (tuple(sorted(mono + parts)), beta), c)
        return {e: sl for e, sl in out.items() if sl}

    def current_on_key(self, cur: Current, key: Key, hi: int) -> Dict[int, Slice]:
        cache_key = (cur.kind, cur.index, cur.sign, cur.scale, key, hi)
        hit = self._cache.get(cache_key)
        if hit is not None:
            return hit
        self.applications += 1
        rep, r = self.od.rep_of[cur.index]
        if cur.kind == "X":
            raw = self.x_on_key(rep, cur.sign, key, hi)
            if r:
                # X_{mu^r(i)}(z) = X_i(xi^{-r} z)
                raw = self._rescale(raw, (-2 * r, 0))
        elif cur.kind == "Phi+":
            raw = self.phi_plus_on_key(cur.index, key)
        else:
            raw = self.phi_minus_on_key(cur.index, key, hi)
        if cur.scale != (0, 0):
            raw = self._rescale(raw, cur.scale)
        self._cache[cache_key] = raw
        return raw

    def _rescale(self, raw: Dict[int, Slice], scale: Tuple[int, int]) -> Dict[int, Slice]:
        """f(z) -> f(c z) with c = zeta^a v^b"""
        a, b = scale
        out = {}
        for e, sl in raw.items():
            if (a * e) % 2 or (b * e) % 2:
                raise ValueError(f"Scaling by zeta^{a} v^{b} needs a square root at z^{Fraction(e, 2)}")
            factor = self.field.monomial(a * e // 2, b * e // 2)
            out[e] = {k: c * factor for k, c in sl.items()}
        return out

    # -- products ---------------------------------------------------------

    def product(self, currents: Sequence[Current], v: FockVector, his: Sequence[int]) -> OperatorSeries:
        """
        currents[0](z_.) ... currents[-1](z_.) v, applied right to left.

        Every variable carries at most one current, so coefficients with all
        doubled exponents <= his are exact.
        """
        nvars = len(his)
        used = set()
        state: Dict[Exps, Slice] = {(0,) * nvars: dict(v.terms)}
        for cur in reversed(currents):
            if cur.var in used:
                raise ValueError(f"Variable {cur.var} carries two currents")
            used.add(cur.var)
            hi = his[cur.var]
            new: Dict[Exps, Slice] = {}
            for exps, vec in state.items():
                for key, c in vec.items():
                    for e, res in self.current_on_key(cur, key, hi).items():
                        if e > hi:
                            continue
                        ex = list(exps)
                        ex[cur.var] = e
                        target = new.setdefault(tuple(ex), {})
                        for k2, c2 in res.items():
                            accumulate(target, k2, c * c2)
            state = {e: sl for e, sl in new.items() if sl}
        return OperatorSeries(nvars, state)

    def map_vectors(self, series: OperatorSeries, fn) -> OperatorSeries:
        """Apply a linear map on Fock vectors coefficientwise"""
        out = OperatorSeries(series.nvars)
        for e, sl in series.data.items():
            image = fn(FockVector(sl))
            for key, c in image.terms.items():
                out.add_term(e, key, c)
        return out

    # -- normal ordering --------------------------------------------------

    def lattice_exponents(self, factors: Sequence[Tuple[int, int]], beta: Sequence[int]) -> List[int]:
        """Doubled z-powers the lattice parts contribute, right to left"""
        od = self.od
        cur = RootVec(beta)
        out = [0] * len(factors)
        for b in reversed(range(len(factors))):
            index, s = factors[b]
            a = od.simple_root(od.rep_of[index][0])
            out[b] = 2 * s * od.grading(a, cur) + od.grading(a, a)
            cur = cur + a * s
        return out

    def normal_ordered(self, factors: Sequence[Tuple[int, int]], v: FockVector, his: Sequence[int]) -> OperatorSeries:
        """
        :X^{s_1}_{i_1}(z_1) ... X^{s_k}_{i_k}(z_k): v with every E_- left of
        every E_+ and the lattice parts kept in the written order.

        Raises:
            UnsupportedArity: more than three currents
        """
        k = len(factors)
        if k > 3:
            raise UnsupportedArity(f"Normal ordering of {k} currents is not supported")
        od, field, module = self.od, self.field, self.module
        reps = [(od.rep_of[i][0], od.rep_of[i][1], s) for i, s in factors]
        out = OperatorSeries(k)
        for key, c0 in v.terms.items():
            mono, beta = key
            exps0 = self.lattice_exponents(factors, beta)
            cur_key, eps_total = key, field.one
            for b in reversed(range(k)):
                rep, _, s = reps[b]
                cur_key, eps = module.lattice(od.simple_root(rep) * s, cur_key)
                eps_total = eps_total * eps
            new_beta = cur_key[1]

            partial: Dict[Tuple[Mono, Exps], CoeffElem] = {(mono, (0,) * k): c0 * eps_total}
            for b in range(k):
                rep, _, s = reps[b]
                nxt: Dict[Tuple[Mono, Exps], CoeffElem] = {}
                for (m, zps), cc in partial.items():
                    shifts = self.plus_shifts(rep, s, m, (0, s))
                    for (rest, zp), c2 in module.shift_substitute(m, shifts).items():
                        z2 = list(zps)
                        z2[b] = zp
                        accumulate(nxt, (rest, tuple(z2)), cc * c2)
                partial = nxt

            for (rest, zps), cc in partial.items():
                bases = [exps0[b] + 2 * zps[b] for b in range(k)]
                if any(base > hi for base, hi in zip(bases, his)):
                    continue
                terms: List[Tuple[Mono, Exps, CoeffElem]] = [(rest, tuple(bases), cc)]
                for b in range(k):
                    rep, _, s = reps[b]
                    grown = []
                    for m, ex, c in terms:
                        for total in range((his[b] - ex[b]) // 2 + 1):
                            for parts, coef in self.e_minus(rep, s, (0, -s), total):
                                ex2 = list(ex)
                                ex2[b] += 2 * total
                                grown.append((m + parts, tuple(ex2), c * coef))
                    terms = grown
                for m, ex, c in terms:
                    phase = field.one
                    for b in range(k):
                        r = reps[b][1]
                        if r:
                            phase = phase * field.zeta(-r * ex[b])
                    out.add_term(ex, (tuple(sorted(m)), new_beta), c * phase)
        return out

    def lowest_exponents(self, factors: Sequence[Tuple[int, int]], v: FockVector) -> List[int]:
        """Doubled lower bounds per variable for the normal-ordered product on v"""
        lows = None
        for (mono, beta) in v.terms:
            exps0 = self.lattice_exponents(factors, beta)
            cand = [e - 2 * degree(mono) for e in exps0]
            lows = cand if lows is None else [min(a, b) for a, b in zip(lows, cand)]
        return lows or [0] * len(factors)

    def ope_prefactor(self, first: Tuple[int, int], second: Tuple[int, int], order: int) -> Dict[int, CoeffElem]:
        """
        prod_k (1 - xi^k q^{-(s+t)/2} x)^{s t <alpha_i|mu^k alpha_j>}_{q^2}, x = w/z,
        the factor relating X^s_i(z) X^t_j(w) to its normal ordering on |w| < |z|.
        Both indices must be representatives.
        """
        od, field = self.od, self.field
        (i, s), (j, t) = first, second
        acc = None
        for k in range(od.n):
            e = od.pairing(i, j, k) * s * t
            if not e:
                continue
            c = field.xi(k) * field.v(-(s + t))
            factor = expand_factor(field, c, e, 0, order, SMALL)
            acc = factor if acc is None else acc * factor
        if acc is None:
            return {0: field.one}
        return {n: acc.coeff(n) for n in range(order + 1)}


def substitute(series: OperatorSeries, keep: int, drop: int, scale: Tuple[int, int], field) -> OperatorSeries:
    """
    Set z_drop = c z_keep with c = zeta^a v^b and merge the two variables.

    The result has one variable fewer; sums over the merged exponents are
    only exact where the caller computed every contributing term.
    """
    a, b = scale
    out = OperatorSeries(series.nvars - 1)
    for e, sl in series.data.items():
        ed = e[drop]
        if (a * ed) % 2 or (b * ed) % 2:
            raise ValueError(f"Substitution by zeta^{a} v^{b} needs a square root at exponent {Fraction(ed, 2)}")
        factor = field.monomial(a * ed // 2, b * ed // 2)
        merged = list(e)
        merged[keep] += ed
        del merged[drop]
        for key, c in sl.items():
            out.add_term(tuple(merged), key, c * factor)
    return out


# ---------------------------------------------------------------------------
# Operation surface
# ---------------------------------------------------------------------------

def apply_E(algebra: VertexAlgebra, part: str, index: int, s: int, scale: Tuple[int, int],
            v: FockVector, hi: int = 0) -> OperatorSeries:
    """
    E_-(s alpha, c z) or E_+(s alpha, c z) on a vector, c = zeta^a v^b.

    Args:
        part: "-" for the creation half, "+" for the annihilation half
        index: Representative index
        hi: Doubled exponent bound for the creation half
    """
    rep = algebra.od.rep_of[index][0]
    out = OperatorSeries(1)
    for (mono, beta), c in v.terms.items():
        if part == "+":
            shifts = algebra.plus_shifts(rep, s, mono, scale)
            for (rest, zp), c2 in algebra.module.shift_substitute(mono, shifts).items():
                out.add_term((2 * zp,), (rest, beta), c * c2)
        else:
            for total in range(hi // 2 + 1):
                for parts, coef in algebra.e_minus(rep, s, scale, total):
                    out.add_term((2 * total,), (tuple(sorted(mono + parts)), beta), c * coef)
    return out


def apply_X(algebra: VertexAlgebra, index: int, s: int, v: FockVector, hi: int) -> OperatorSeries:
    """X^s_index(z) v with doubled exponents <= hi"""
    return algebra.product([Current("X", index, s)], v, (hi,))


def apply_Phi(algebra: VertexAlgebra, index: int, sign: int, mode: int, v: FockVector) -> FockVector:
    """
    Mode of Phi^sign_index on a vector: Phi^+_{i,m} is the z^{-m} coefficient
    of Phi^+_i(z), Phi^-_{i,-m} the z^m coefficient of Phi^-_i(z).

    Raises:
        NegativeMode: mode < 0
    """
    if mode < 0:
        raise NegativeMode(f"Phi modes are indexed by m >= 0, got {mode}")
    if sign > 0:
        series = algebra.product([Current("Phi+", index)], v, (0,))
        return series.coefficient((-2 * mode,))
    series = algebra.product([Current("Phi-", index)], v, (2 * mode,))
    return series.coefficient((2 * mode,))


def normal_ordered_apply(algebra: VertexAlgebra, factors: Sequence[Tuple[int, int]], v: FockVector,
                         his: Sequence[int]) -> OperatorSeries:
    return algebra.normal_ordered(factors, v, his)
