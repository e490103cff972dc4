"""
Taffin Coefficient Field

Exact arithmetic in Q(zeta)(v), where zeta is a primitive 2N-th root of unity
and v is a square root of the formal parameter q. So q = v^2 and xi = zeta^2.

Cyclotomic numbers are reduced modulo the 2N-th cyclotomic polynomial.
Rational functions in v are stored reduced, with a monic denominator whose
constant term is nonzero; powers of v always live in the numerator.
"""
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple, Union

import sympy

from taffin.errors import DivisionByZero, IndexOutOfRange

Rational = Union[int, Fraction]


# ---------------------------------------------------------------------------
# Cyclotomic numbers
# ---------------------------------------------------------------------------

class CycloData:
    """Reduction tables for the 2N-th cyclotomic field"""

    def __init__(self, order: int):
        x = sympy.Symbol("x")
        coeffs = sympy.Poly(sympy.cyclotomic_poly(order, x), x).all_coeffs()
        self.order = order
        # low -> high, monic
        self.modulus = tuple(Fraction(int(c)) for c in reversed(coeffs))
        self.degree = len(self.modulus) - 1
        assert self.degree == int(sympy.totient(order))

        powers = []
        current = [Fraction(0)] * self.degree
        current[0] = Fraction(1)
        for _ in range(order):
            powers.append(tuple(current))
            carry = current[-1]
            shifted = [Fraction(0)] + current[:-1]
            if carry:
                for i in range(self.degree):
                    shifted[i] -= carry * self.modulus[i]
            current = shifted
        self.powers: Tuple[Tuple[Fraction, ...], ...] = tuple(powers)


@lru_cache(maxsize=None)
def cyclo_data(order: int) -> CycloData:
    """Shared reduction data for Q(zeta_order)"""
    if order < 1:
        raise ValueError(f"Cyclotomic order must be positive, got {order}")
    return CycloData(order)


def _trim(p: list) -> list:
    while p and not p[-1]:
        p.pop()
    return p


def _qpoly_mul(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out)


def _qpoly_sub(a: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim([Fraction(c) for c in out])


def _qpoly_divmod(a: List[Fraction], b: List[Fraction]) -> Tuple[List[Fraction], List[Fraction]]:
    a = _trim(list(a))
    quot = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    lead = b[-1]
    while len(a) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] / lead
        quot[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] -= c * bc
        _trim(a)
    return _trim(quot), a


class CycloNum:
    """
    Element of Q(zeta) for zeta a primitive root of unity of the given order.

    Stored as the coefficient vector (length phi(order)) of the unique
    representative of degree below phi(order).
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Tuple[Fraction, ...]):
        self.order = order
        self.coeffs = coeffs

    @classmethod
    def rational(cls, order: int, value: Rational) -> "CycloNum":
        data = cyclo_data(order)
        c = [Fraction(0)] * data.degree
        c[0] = Fraction(value)
        return cls(order, tuple(c))

    @classmethod
    def zeta(cls, order: int, k: int) -> "CycloNum":
        """zeta^k, any integer k"""
        return cls(order, cyclo_data(order).powers[k % order])

    @classmethod
    def from_poly(cls, order: int, poly: List[Rational]) -> "CycloNum":
        """Reduce an arbitrary polynomial in zeta (low -> high)"""
        data = cyclo_data(order)
        out = [Fraction(0)] * data.degree
        for e, c in enumerate(poly):
            if c:
                for i, p in enumerate(data.powers[e % order]):
                    if p:
                        out[i] += c * p
        return cls(order, tuple(out))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __bool__(self) -> bool:
        return not self.is_zero()

    def _coerce(self, other) -> "CycloNum":
        if isinstance(other, CycloNum):
            if other.order != self.order:
                raise ValueError(f"Mixed cyclotomic orders {self.order} and {other.order}")
            return other
        if isinstance(other, (int, Fraction)):
            return CycloNum.rational(self.order, other)
        return NotImplemented

    def scale(self, r: Rational) -> "CycloNum":
        return CycloNum(self.order, tuple(c * r for c in self.coeffs))

    def __add__(self, other) -> "CycloNum":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloNum(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "CycloNum":
        return CycloNum(self.order, tuple(-c for c in self.coeffs))

    def __sub__(self, other) -> "CycloNum":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return CycloNum(self.order, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __rsub__(self, other) -> "CycloNum":
        return (-self) + other

    def __mul__(self, other) -> "CycloNum":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_rational():
            return self.scale(other.coeffs[0])
        if self.is_rational():
            return other.scale(self.coeffs[0])
        data = cyclo_data(self.order)
        deg = data.degree
        prod = [Fraction(0)] * (2 * deg - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        out = prod[:deg]
        for e in range(deg, 2 * deg - 1):
            c = prod[e]
            if c:
                for i, p in enumerate(data.powers[e]):
                    if p:
                        out[i] += c * p
        return CycloNum(self.order, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> "CycloNum":
        if self.is_zero():
            raise DivisionByZero("Inverse of zero cyclotomic number")
        if self.is_rational():
            return CycloNum.rational(self.order, 1 / self.coeffs[0])
        modulus = list(cyclo_data(self.order).modulus)
        r0, r1 = modulus, _trim(list(self.coeffs))
        s0, s1 = [], [Fraction(1)]
        while r1:
            quot, rem = _qpoly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _qpoly_sub(s0, _qpoly_mul(quot, s1))
        # r0 is a nonzero constant because the modulus is irreducible
        c = r0[0]
        _, rem = _qpoly_divmod([x / c for x in s0], modulus)
        return CycloNum.from_poly(self.order, rem)

    def __truediv__(self, other) -> "CycloNum":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __pow__(self, n: int) -> "CycloNum":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = CycloNum.rational(self.order, 1)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if isinstance(other, CycloNum):
            return self.order == other.order and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.order, self.coeffs))

    def term_count(self) -> int:
        return sum(1 for c in self.coeffs if c)

    def __str__(self) -> str:
        tokens = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                tokens.append(str(c))
                continue
            mono = "z" if k == 1 else f"z^{k}"
            if c == 1:
                tokens.append(mono)
            elif c == -1:
                tokens.append("-" + mono)
            else:
                tokens.append(f"{c}*{mono}")
        if not tokens:
            return "0"
        return "+".join(tokens).replace("+-", "-")

    def __repr__(self) -> str:
        return f"CycloNum({self})"


# ---------------------------------------------------------------------------
# Laurent polynomials in v
# ---------------------------------------------------------------------------

class VPoly:
    """Laurent polynomial in v with CycloNum coefficients (sparse, zero-free)"""

    __slots__ = ("order", "terms")

    def __init__(self, order: int, terms: Dict[int, CycloNum]):
        self.order = order
        self.terms = terms

    @classmethod
    def from_dense(cls, order: int, coeffs: List[CycloNum], shift: int = 0) -> "VPoly":
        return cls(order, {e + shift: c for e, c in enumerate(coeffs) if c})

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def min_exp(self) -> int:
        return min(self.terms)

    def max_exp(self) -> int:
        return max(self.terms)

    def dense(self) -> List[CycloNum]:
        """Coefficient list from v^0 upward; requires min_exp() >= 0"""
        zero = CycloNum.rational(self.order, 0)
        out = [zero] * (self.max_exp() + 1)
        for e, c in self.terms.items():
            out[e] = c
        return out

    def shift(self, k: int) -> "VPoly":
        if not k:
            return self
        return VPoly(self.order, {e + k: c for e, c in self.terms.items()})

    def scale(self, c: CycloNum) -> "VPoly":
        if c.is_zero():
            return VPoly(self.order, {})
        return VPoly(self.order, {e: x * c for e, x in self.terms.items()})

    def __add__(self, other: "VPoly") -> "VPoly":
        terms = dict(self.terms)
        for e, c in other.terms.items():
            s = terms.get(e)
            s = c if s is None else s + c
            if s.is_zero():
                terms.pop(e, None)
            else:
                terms[e] = s
        return VPoly(self.order, terms)

    def __neg__(self) -> "VPoly":
        return VPoly(self.order, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "VPoly") -> "VPoly":
        return self + (-other)

    def __mul__(self, other: "VPoly") -> "VPoly":
        terms: Dict[int, CycloNum] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                p = c1 * c2
                s = terms.get(e)
                terms[e] = p if s is None else s + p
        return VPoly(self.order, {e: c for e, c in terms.items() if not c.is_zero()})

    def key(self) -> tuple:
        return tuple(sorted((e, c.coeffs) for e, c in self.terms.items()))

    def __eq__(self, other) -> bool:
        return isinstance(other, VPoly) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        tokens = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "" if e == 0 else ("v" if e == 1 else f"v^{e}")
            if not mono:
                cs = str(c)
                tokens.append(f"({cs})" if c.term_count() > 1 else cs)
            elif c == 1:
                tokens.append(mono)
            elif c == -1:
                tokens.append("-" + mono)
            elif c.term_count() == 1 and c.is_rational():
                tokens.append(f"{c}*{mono}")
            elif c.term_count() == 1 and not str(c).startswith("-"):
                tokens.append(f"{c}*{mono}")
            else:
                tokens.append(f"({c})*{mono}")
        return "+".join(tokens).replace("+-", "-")


def _cp_divmod(a: List[CycloNum], b: List[CycloNum]) -> Tuple[List[CycloNum], List[CycloNum]]:
    """Division of dense polynomials over Q(zeta); b has a nonzero leading coefficient"""
    a = _trim(list(a))
    zero = b[-1] * 0
    quot = [zero] * max(len(a) - len(b) + 1, 1)
    lead_inv = b[-1].inverse()
    while len(a) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] * lead_inv
        quot[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] = a[i + shift] - c * bc
        _trim(a)
    return _trim(quot), a


def _cp_gcd(a: List[CycloNum], b: List[CycloNum]) -> List[CycloNum]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        _, r = _cp_divmod(a, b)
        a, b = b, r
    inv = a[-1].inverse()
    return [c * inv for c in a]


# ---------------------------------------------------------------------------
# Field elements
# ---------------------------------------------------------------------------

class CoeffElem:
    """
    Element of Q(zeta)(v) as a reduced fraction num/den.

    ``den`` is None for Laurent polynomials, which is the common case and
    keeps arithmetic on the fast path.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: VPoly, den: Optional[VPoly] = None):
        self.num = num
        self.den = den

    @property
    def order(self) -> int:
        return self.num.order

    @classmethod
    def make(cls, num: VPoly, den: Optional[VPoly]) -> "CoeffElem":
        """Canonical form of num/den"""
        if den is None:
            return cls(num, None)
        if den.is_zero():
            raise DivisionByZero("Denominator is zero")
        if num.is_zero():
            return cls(num, None)
        lo = den.min_exp()
        if lo:
            num, den = num.shift(-lo), den.shift(-lo)
        if den.is_monomial():
            return cls(num.scale(den.terms[0].inverse()), None)
        nlo = num.min_exp()
        n_dense = num.shift(-nlo).dense()
        d_dense = den.dense()
        g = _cp_gcd(n_dense, d_dense)
        if len(g) > 1:
            n_dense, _ = _cp_divmod(n_dense, g)
            d_dense, _ = _cp_divmod(d_dense, g)
        inv = d_dense[-1].inverse()
        num = VPoly.from_dense(num.order, [c * inv for c in n_dense], nlo)
        if len(d_dense) == 1:
            return cls(num, None)
        den = VPoly.from_dense(num.order, [c * inv for c in d_dense])
        return cls(num, den)

    def _coerce(self, other) -> "CoeffElem":
        if isinstance(other, CoeffElem):
            return other
        if isinstance(other, (int, Fraction)):
            other = CycloNum.rational(self.order, other)
        if isinstance(other, CycloNum):
            terms = {} if other.is_zero() else {0: other}
            return CoeffElem(VPoly(self.order, terms), None)
        return NotImplemented

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den is None

    def is_unit_monomial(self) -> bool:
        return self.den is None and self.num.is_monomial()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __add__(self, other) -> "CoeffElem":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den is None and other.den is None:
            return CoeffElem(self.num + other.num, None)
        if self.den is not None and self.den == other.den:
            return CoeffElem.make(self.num + other.num, self.den)
        d1 = self.den if self.den is not None else _one_poly(self.order)
        d2 = other.den if other.den is not None else _one_poly(self.order)
        return CoeffElem.make(self.num * d2 + other.num * d1, d1 * d2)

    __radd__ = __add__

    def __neg__(self) -> "CoeffElem":
        return CoeffElem(-self.num, self.den)

    def __sub__(self, other) -> "CoeffElem":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "CoeffElem":
        return (-self) + other

    def __mul__(self, other) -> "CoeffElem":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.den is None and other.den is None:
            return CoeffElem(self.num * other.num, None)
        if other.is_unit_monomial():
            return CoeffElem(self.num * other.num, self.den)
        if self.is_unit_monomial():
            return CoeffElem(self.num * other.num, other.den)
        d1 = self.den if self.den is not None else _one_poly(self.order)
        d2 = other.den if other.den is not None else _one_poly(self.order)
        return CoeffElem.make(self.num * other.num, d1 * d2)

    __rmul__ = __mul__

    def inverse(self) -> "CoeffElem":
        if self.is_zero():
            raise DivisionByZero("Inverse of zero")
        if self.is_unit_monomial():
            (e, c), = self.num.terms.items()
            return CoeffElem(VPoly(self.order, {-e: c.inverse()}), None)
        den = self.den if self.den is not None else _one_poly(self.order)
        return CoeffElem.make(den, self.num)

    def __truediv__(self, other) -> "CoeffElem":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.is_zero():
            raise DivisionByZero("Division by zero")
        return self * other.inverse()

    def __rtruediv__(self, other) -> "CoeffElem":
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "CoeffElem":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = self._coerce(1)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num.key(), None if self.den is None else self.den.key()))

    def __str__(self) -> str:
        if self.den is None:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"CoeffElem({self})"


@lru_cache(maxsize=None)
def _one_poly(order: int) -> VPoly:
    return VPoly(order, {0: CycloNum.rational(order, 1)})


class CoeffField:
    """
    Constructors for Q(zeta_order)(v).

    ``order`` is 2N for an automorphism of order N.
    """

    def __init__(self, order: int):
        cyclo_data(order)
        self.order = order

    def __eq__(self, other) -> bool:
        return isinstance(other, CoeffField) and other.order == self.order

    def __hash__(self) -> int:
        return hash(("CoeffField", self.order))

    @property
    def zero(self) -> CoeffElem:
        return CoeffElem(VPoly(self.order, {}), None)

    @property
    def one(self) -> CoeffElem:
        return self.const(1)

    def const(self, r: Union[Rational, CycloNum]) -> CoeffElem:
        return self.zero._coerce(r)

    def monomial(self, zeta_exp: int = 0, v_exp: int = 0, coef: Rational = 1) -> CoeffElem:
        """coef * zeta^zeta_exp * v^v_exp"""
        if not coef:
            return self.zero
        c = CycloNum.zeta(self.order, zeta_exp).scale(Fraction(coef))
        return CoeffElem(VPoly(self.order, {v_exp: c}), None)

    def v(self, k: int = 1) -> CoeffElem:
        return self.monomial(0, k)

    def q(self, k: Rational = 1) -> CoeffElem:
        """q^k; 2k must be an integer"""
        return self.monomial(0, _doubled(k))

    def zeta(self, k: int = 1) -> CoeffElem:
        return self.monomial(k, 0)

    def xi(self, k: int = 1) -> CoeffElem:
        return self.monomial(2 * k, 0)

    def xi_prime(self) -> CoeffElem:
        """(-1)^N xi"""
        n = self.order // 2
        return self.monomial(2, 0, (-1) ** n)

    def poly(self, terms: Dict[int, Rational]) -> CoeffElem:
        """Laurent polynomial sum(c * v^e) with rational coefficients"""
        return CoeffElem(
            VPoly(self.order, {e: CycloNum.rational(self.order, c) for e, c in terms.items() if c}),
            None,
        )


def _doubled(b: Rational) -> int:
    twice = Fraction(b) * 2
    if twice.denominator != 1:
        raise ValueError(f"Exponent {b} is not a half-integer")
    return int(twice)


def field_arith(a: CoeffElem, b: CoeffElem, op: str) -> CoeffElem:
    """Apply one of + - * / (unicode forms accepted) exactly"""
    if op in ("+",):
        return a + b
    if op in ("-", "−"):
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        return a / b
    raise ValueError(f"Unknown operation {op!r}")


def q_integer(field: CoeffField, n: int, b: Rational = 1) -> CoeffElem:
    """
    [n] in base q^b, i.e. (q^{bn} - q^{-bn}) / (q^b - q^{-b}).

    Args:
        field: Coefficient field
        n: Any integer; [-n] = -[n] and [0] = 0
        b: Base exponent with 2b integral

    Returns:
        The Laurent polynomial sum_{j<n} q^{b(n-1-2j)}
    """
    step = _doubled(b)
    if step == 0:
        return field.const(n)
    sign = 1 if n >= 0 else -1
    n = abs(n)
    return field.poly({step * (n - 1 - 2 * j): sign for j in range(n)})


def gauss_binom(field: CoeffField, n: int, r: int, b: Rational = 1) -> CoeffElem:
    """Gaussian binomial [n choose r] in base q^b"""
    if r < 0 or r > n:
        raise IndexOutOfRange(f"Binomial index r={r} outside [0, {n}]")
    r = min(r, n - r)
    result = field.one
    for k in range(1, r + 1):
        result = result * q_integer(field, n - k + 1, b) / q_integer(field, k, b)
    return result
