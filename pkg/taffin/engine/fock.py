"""
Taffin Fock Space

The twisted Heisenberg algebra acting on S(h^-_mu) tensor the lattice module.

Creation generators are stored divided: b_{i,-n} = a_{i,-n} / [n]_q for a
representative i. Every exponential the vertex operators need then has
rational or Laurent-polynomial coefficients in this basis.

Basis element key: (monomial, lattice coordinates), where a monomial is a
sorted tuple of (representative, level) pairs with repetition.
"""
import itertools
import math
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from taffin.engine.cartan import OrbitData, RootVec
from taffin.engine.coeff import CoeffElem, q_integer
from taffin.errors import ZeroMode

Mono = Tuple[Tuple[int, int], ...]
Key = Tuple[Mono, Tuple[int, ...]]


class FockVector:
    """Finite linear combination of basis keys with nonzero coefficients"""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Key, CoeffElem]] = None):
        self.terms = {k: c for k, c in (terms or {}).items() if not c.is_zero()}

    @classmethod
    def basis(cls, od: OrbitData, mono: Mono = (), beta: Sequence[int] = None) -> "FockVector":
        beta = tuple(beta) if beta is not None else (0,) * od.size
        return cls({(tuple(sorted(mono)), beta): od.field.one})

    @classmethod
    def vacuum(cls, od: OrbitData) -> "FockVector":
        return cls.basis(od)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "FockVector") -> "FockVector":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return FockVector(out)

    def __neg__(self) -> "FockVector":
        return FockVector({k: -c for k, c in self.terms.items()})

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + (-other)

    def scale(self, c: CoeffElem) -> "FockVector":
        if c.is_zero():
            return FockVector()
        return FockVector({k: x * c for k, x in self.terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, FockVector):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def coefficient(self, key: Key) -> Optional[CoeffElem]:
        return self.terms.get(key)

    def first_difference(self, other: "FockVector") -> Optional[Tuple[Key, CoeffElem, CoeffElem]]:
        """Smallest key where the vectors differ, with both coefficients"""
        for key in sorted(set(self.terms) | set(other.terms)):
            a, b = self.terms.get(key), other.terms.get(key)
            if a is None or b is None or a != b:
                return key, a, b
        return None

    def __repr__(self) -> str:
        return " + ".join(f"({c})*{basis_label(k)}" for k, c in sorted(self.terms.items())) or "0"


def accumulate(target: Dict[Key, CoeffElem], key: Key, c: CoeffElem) -> None:
    """target[key] += c, dropping zeros"""
    if key in target:
        s = target[key] + c
        if s.is_zero():
            del target[key]
        else:
            target[key] = s
    elif not c.is_zero():
        target[key] = c


def basis_label(key: Key) -> str:
    """e.g. b[1,-2]^2 * t[1,0]; b[i,-n] = a[i,-n]/[n]_q"""
    mono, beta = key
    parts = []
    for (i, n), group in itertools.groupby(mono):
        count = len(list(group))
        parts.append(f"b[{i + 1},-{n}]" + (f"^{count}" if count > 1 else ""))
    parts.append("t[" + ",".join(str(c) for c in beta) + "]")
    return " * ".join(parts)


def degree(mono: Mono) -> int:
    return sum(n for _, n in mono)


class HeisenbergModule:
    """
    Heisenberg and lattice actions for one orbit datum.

    Constants are memoized per instance; instances are not shared between
    threads.
    """

    def __init__(self, od: OrbitData):
        self.od = od
        self.field = od.field
        self._kappa: Dict[Tuple[int, int, int], CoeffElem] = {}
        self._lambda: Dict[Tuple[int, int, int], CoeffElem] = {}
        self._bracket: Dict[Tuple[int, int, int], CoeffElem] = {}

    # -- constants --------------------------------------------------------

    def allowed(self, rep: int, level: int) -> bool:
        """a_{rep, +-level} vanishes unless d_rep divides the level"""
        return level % self.od.d_plus[rep] == 0

    def bracket(self, i: int, j: int, m: int) -> CoeffElem:
        """[a_{i,m}, a_{j,-m}] = (1/m) sum_k xi^{mk} [m <a_i|mu^k a_j>]_q [m]_q"""
        if m == 0:
            raise ZeroMode("Heisenberg mode 0")
        key = (i, j, m)
        if key not in self._bracket:
            od, field = self.od, self.field
            total = field.zero
            ai, aj = od.simple_root(i), od.simple_root(j)
            for k in range(od.n):
                e = od.form(ai, od.mu_apply(aj, k))
                if e:
                    total = total + field.xi(m * k) * q_integer(field, m * e)
            self._bracket[key] = total * q_integer(field, m) * Fraction(1, m)
        return self._bracket[key]

    def kappa(self, i: int, j: int, m: int) -> CoeffElem:
        """[a_{i,m}, b_{j,-m}] = bracket / [m]_q, m > 0"""
        key = (i, j, m)
        if key not in self._kappa:
            self._kappa[key] = self.bracket(i, j, m) / q_integer(self.field, m)
        return self._kappa[key]

    def lam(self, i: int, j: int, m: int) -> CoeffElem:
        """[a_{i,m} / [m]_q, b_{j,-m}] = (1/m) sum_k xi^{mk} [<a_i|mu^k a_j>]_{q^m}, m > 0"""
        key = (i, j, m)
        if key not in self._lambda:
            od, field = self.od, self.field
            total = field.zero
            ai, aj = od.simple_root(i), od.simple_root(j)
            for k in range(od.n):
                e = od.form(ai, od.mu_apply(aj, k))
                if e:
                    total = total + field.xi(m * k) * q_integer(field, e, m)
            self._lambda[key] = total * Fraction(1, m)
        return self._lambda[key]

    # -- operators on basis keys -----------------------------------------

    def create(self, i: int, n: int, key: Key) -> Dict[Key, CoeffElem]:
        """a_{i,-n} on a basis key, n > 0, any index i"""
        rep, r = self.od.rep_of[i]
        if not self.allowed(rep, n):
            return {}
        mono, beta = key
        c = self.field.xi(-r * n) * q_integer(self.field, n)
        return {(tuple(sorted(mono + ((rep, n),))), beta): c}

    def annihilate(self, i: int, m: int, key: Key) -> Dict[Key, CoeffElem]:
        """a_{i,m} on a basis key, m > 0: derivation lowering one factor of level m"""
        rep, r = self.od.rep_of[i]
        if not self.allowed(rep, m):
            return {}
        mono, beta = key
        out: Dict[Key, CoeffElem] = {}
        phase = self.field.xi(r * m)
        for pos, (j, n) in enumerate(mono):
            if n != m or (pos > 0 and mono[pos - 1] == (j, n)):
                continue
            count = sum(1 for f in mono if f == (j, n))
            c = self.kappa(rep, j, m)
            if c.is_zero():
                continue
            rest = mono[:pos] + mono[pos + 1:]
            accumulate(out, (rest, beta), c * phase * count)
        return out

    def shift_substitute(self, mono: Mono, shifts: Dict[Tuple[int, int], CoeffElem]) -> Dict[Tuple[Mono, int], CoeffElem]:
        """
        Expand prod b_f with b_f -> b_f + shifts[f] * z^{-level(f)}.

        Returns:
            (remaining monomial, z-power) -> coefficient
        """
        out: Dict[Tuple[Mono, int], CoeffElem] = {((), 0): self.field.one}
        for factor, group in itertools.groupby(mono):
            count = len(list(group))
            shift = shifts.get(factor)
            level = factor[1]
            nxt: Dict[Tuple[Mono, int], CoeffElem] = {}
            for (rest, zp), c in out.items():
                for taken in range(count + 1):
                    if taken and (shift is None or shift.is_zero()):
                        break
                    coef = c * Fraction(_binom(count, taken))
                    if taken:
                        coef = coef * shift ** taken
                    new = (rest + (factor,) * (count - taken), zp - level * taken)
                    nxt[new] = nxt[new] + coef if new in nxt else coef
            out = nxt
        return {k: c for k, c in out.items() if not c.is_zero()}

    # -- lattice ----------------------------------------------------------

    def lattice(self, alpha: RootVec, key: Key) -> Tuple[Key, CoeffElem]:
        """e_alpha on a basis key"""
        mono, beta = key
        b = RootVec(beta)
        eps = self.od.cocycle(alpha, b)
        return (mono, (b + alpha).coords), self.field.const(eps)

    def grading(self, alpha: RootVec, beta: Sequence[int]) -> int:
        return self.od.grading(alpha, RootVec(beta))


@lru_cache(maxsize=None)
def _binom(n: int, k: int) -> int:
    return math.comb(n, k)


def _apply_keywise(v: FockVector, fn) -> FockVector:
    out: Dict[Key, CoeffElem] = {}
    for key, c in v.terms.items():
        for k2, c2 in fn(key).items():
            accumulate(out, k2, c * c2)
    return FockVector(out)


def heis_bracket_constant(od: OrbitData, i: int, j: int, m: int) -> CoeffElem:
    """(1/m) sum_k xi^{mk} [m <alpha_i|mu^k alpha_j>]_q [m]_q at level one"""
    return HeisenbergModule(od).bracket(i, j, m)


def apply_alpha(module: HeisenbergModule, i: int, m: int, v: FockVector) -> FockVector:
    """a_{i,m} on a vector; any index i, m != 0"""
    if m == 0:
        raise ZeroMode("Heisenberg mode 0")
    if m < 0:
        return _apply_keywise(v, lambda key: module.create(i, -m, key))
    return _apply_keywise(v, lambda key: module.annihilate(i, m, key))


def apply_lattice(module: HeisenbergModule, alpha: RootVec, v: FockVector) -> FockVector:
    """e_alpha t_beta = eps(alpha, beta) t_{alpha + beta}"""
    def one(key):
        k2, c = module.lattice(alpha, key)
        return {k2: c}
    return _apply_keywise(v, one)


def apply_k(module: HeisenbergModule, alpha: RootVec, v: FockVector) -> FockVector:
    """k_alpha acts as q^{<alpha_(0)|beta>}"""
    def one(key):
        return {key: module.field.q(module.grading(alpha, key[1]))}
    return _apply_keywise(v, one)


def grading_exponent(od: OrbitData, alpha: RootVec, beta: RootVec) -> int:
    """<alpha_(0) | beta>"""
    return od.grading(alpha, beta)


def x_shift(od: OrbitData, i: int) -> Fraction:
    """<alpha_{i(0)} | alpha_i> / 2, the constant part of the X-current grading"""
    a = od.simple_root(i)
    return Fraction(od.grading(a, a), 2)


def partitions(total: int, step: int, max_part: Optional[int] = None) -> Iterable[Tuple[int, ...]]:
    """Partitions of total into parts divisible by step, non-increasing"""
    if total == 0:
        yield ()
        return
    top = total if max_part is None else min(total, max_part)
    top -= top % step
    for part in range(top, 0, -step):
        for rest in partitions(total - part, step, part):
            yield (part,) + rest


def monomials(od: OrbitData, bound: int) -> List[Mono]:
    """All monomials of degree <= bound respecting the level constraint"""
    pieces = []
    for rep in od.reps:
        d = od.d_plus[rep]
        pieces.append([(rep, p) for p in range(d, bound + 1, d)])
    factors = sorted(f for group in pieces for f in group)
    out: List[Mono] = []

    def extend(start: int, current: Tuple[Tuple[int, int], ...], deg: int):
        out.append(current)
        for idx in range(start, len(factors)):
            f = factors[idx]
            if deg + f[1] <= bound:
                extend(idx, current + (f,), deg + f[1])

    extend(0, (), 0)
    return sorted(set(out), key=lambda m: (degree(m), m))


def fock_basis(od: OrbitData, bound: int, support: Sequence[RootVec]) -> List[Key]:
    """Basis keys of degree <= bound over the lattice support"""
    monos = monomials(od, bound)
    lattice = sorted({tuple(b.coords) for b in support})
    return [(m, beta) for beta in lattice for m in monos]


def lattice_support(od: OrbitData, height: int = 2) -> List[RootVec]:
    """
    {0, +-alpha_i, alpha_i + alpha_j} over representatives, restricted to height <= height.
    """
    zero = RootVec.zero(od.size)
    points = {zero}
    if height >= 1:
        for i in od.reps:
            a = od.simple_root(i)
            points.add(a)
            points.add(-a)
    if height >= 2:
        for i, j in itertools.combinations(od.reps, 2):
            points.add(od.simple_root(i) + od.simple_root(j))
    return sorted(points)
