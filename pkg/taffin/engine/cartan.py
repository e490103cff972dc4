"""
Taffin Cartan Data

Simply-laced generalized Cartan matrices, diagram automorphisms and the
orbit invariants built from them: the twist sets Gamma_ij, the d-invariants,
the linking condition, the folded matrix, and the root lattice with its
bilinear form, commutator map and ordered-basis cocycle.

Indices are 0-based internally; reports shift them to 1-based.
"""
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from taffin.engine.coeff import CoeffField, CycloNum
from taffin.errors import (
    CocycleObstruction,
    Inapplicable,
    InvariantViolation,
    NotAutomorphism,
    NotSimplyLaced,
)

Pair = Tuple[int, int]


class Gcm:
    """Simply-laced generalized Cartan matrix"""

    def __init__(self, matrix: Sequence[Sequence[int]]):
        rows = tuple(tuple(int(x) for x in row) for row in matrix)
        size = len(rows)
        if size == 0 or any(len(row) != size for row in rows):
            raise NotSimplyLaced("Cartan matrix must be square and non-empty")
        for i in range(size):
            if rows[i][i] != 2:
                raise NotSimplyLaced(f"Diagonal entry ({i + 1},{i + 1}) is {rows[i][i]}, expected 2")
            for j in range(size):
                if i == j:
                    continue
                if rows[i][j] not in (0, -1):
                    raise NotSimplyLaced(f"Entry ({i + 1},{j + 1}) is {rows[i][j]}, expected 0 or -1")
                if (rows[i][j] == 0) != (rows[j][i] == 0):
                    raise NotSimplyLaced(f"Entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) disagree on zero")
        self.rows = rows
        self.size = size

    def __getitem__(self, ij: Pair) -> int:
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, Gcm) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)


class DiagramAut:
    """Index permutation with its exact order N"""

    def __init__(self, perm: Sequence[int], declared_order: Optional[int] = None):
        perm = tuple(int(p) for p in perm)
        if sorted(perm) != list(range(len(perm))):
            raise NotAutomorphism(f"{[p + 1 for p in perm]} is not a permutation")
        order = 1
        current = perm
        identity = tuple(range(len(perm)))
        while current != identity:
            current = tuple(perm[c] for c in current)
            order += 1
        if declared_order is not None and declared_order != order:
            raise NotAutomorphism(f"Declared order {declared_order} but the permutation has order {order}")
        self.perm = perm
        self.order = order

    @classmethod
    def identity(cls, size: int) -> "DiagramAut":
        return cls(range(size))

    def power(self, k: int) -> Tuple[int, ...]:
        """Images of every index under mu^k"""
        k %= self.order
        current = tuple(range(len(self.perm)))
        for _ in range(k):
            current = tuple(self.perm[c] for c in current)
        return current

    def __eq__(self, other) -> bool:
        return isinstance(other, DiagramAut) and self.perm == other.perm

    def __hash__(self) -> int:
        return hash(self.perm)


class RootVec:
    """Element of the root lattice Q in the simple-root basis"""

    __slots__ = ("coords",)

    def __init__(self, coords: Sequence[int]):
        self.coords = tuple(int(c) for c in coords)

    @classmethod
    def zero(cls, size: int) -> "RootVec":
        return cls((0,) * size)

    @classmethod
    def basis(cls, size: int, i: int) -> "RootVec":
        return cls(tuple(1 if k == i else 0 for k in range(size)))

    def __add__(self, other: "RootVec") -> "RootVec":
        return RootVec(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "RootVec") -> "RootVec":
        return RootVec(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "RootVec":
        return RootVec(tuple(-a for a in self.coords))

    def __mul__(self, s: int) -> "RootVec":
        return RootVec(tuple(s * a for a in self.coords))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __eq__(self, other) -> bool:
        return isinstance(other, RootVec) and self.coords == other.coords

    def __lt__(self, other: "RootVec") -> bool:
        return self.coords < other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        return f"RootVec({list(self.coords)})"

    def label(self) -> str:
        return "t[" + ",".join(str(c) for c in self.coords) + "]"


class OrbitData:
    """
    Twist sets and orbit invariants of a validated (A, mu) pair.

    Gamma sets are keyed by 0-based (i, j) and hold elements of Z_N.
    """

    def __init__(self, gcm: Gcm, aut: DiagramAut):
        self.gcm = gcm
        self.aut = aut
        self.n = aut.order
        self.size = gcm.size
        self.mu_powers: Tuple[Tuple[int, ...], ...] = tuple(aut.power(k) for k in range(self.n))

        self.gamma: Dict[Pair, FrozenSet[int]] = {}
        self.gamma_plus: Dict[Pair, FrozenSet[int]] = {}
        self.gamma_minus: Dict[Pair, FrozenSet[int]] = {}
        for i in range(self.size):
            for j in range(self.size):
                entries = [(k, gcm[i, self.mu_powers[k][j]]) for k in range(self.n)]
                self.gamma[i, j] = frozenset(k for k, a in entries if a != 0)
                self.gamma_plus[i, j] = frozenset(k for k, a in entries if a > 0)
                self.gamma_minus[i, j] = frozenset(k for k, a in entries if a < 0)

        self.d: Dict[Pair, int] = {ij: len(s) for ij, s in self.gamma_minus.items()}
        self.d_plus: Dict[int, int] = {i: len(self.gamma_plus[i, i]) for i in range(self.size)}

        self.rep_of: Dict[int, Tuple[int, int]] = {}
        for i in range(self.size):
            orbit = [self.mu_powers[k][i] for k in range(self.n)]
            rep = min(orbit)
            k = next(k for k in range(self.n) if self.mu_powers[k][rep] == i)
            self.rep_of[i] = (rep, k)
        self.reps: Tuple[int, ...] = tuple(sorted({r for r, _ in self.rep_of.values()}))
        self.orbit_len: Dict[int, int] = {
            i: len({self.mu_powers[k][i] for k in range(self.n)}) for i in range(self.size)
        }

    @cached_property
    def field(self) -> CoeffField:
        return CoeffField(2 * self.n)

    @cached_property
    def cocycle(self) -> "LatticeCocycle":
        return LatticeCocycle(self)

    def a(self, i: int, j: int) -> int:
        return self.gcm[i, j]

    def mu(self, i: int, k: int = 1) -> int:
        return self.mu_powers[k % self.n][i]

    def orbit(self, i: int) -> Tuple[int, ...]:
        return tuple(sorted({self.mu(i, k) for k in range(self.n)}))

    def in_orbit(self, i: int, j: int) -> bool:
        """i in O(j)"""
        return self.rep_of[i][0] == self.rep_of[j][0]

    def twists_to(self, i: int, j: int) -> List[int]:
        """All k in Z_N with mu^k(j) = i"""
        return [k for k in range(self.n) if self.mu(j, k) == i]

    def pairing(self, i: int, j: int, k: int) -> int:
        """<alpha_i | mu^k alpha_j>"""
        return self.gcm[i, self.mu(j, k)]

    # -- root lattice -----------------------------------------------------

    def simple_root(self, i: int) -> RootVec:
        return RootVec.basis(self.size, i)

    def form(self, alpha: RootVec, beta: RootVec) -> int:
        """<alpha | beta> = sum alpha_i beta_j a_ij"""
        total = 0
        for i, x in enumerate(alpha.coords):
            if x:
                row = self.gcm.rows[i]
                for j, y in enumerate(beta.coords):
                    if y:
                        total += x * y * row[j]
        return total

    def mu_apply(self, alpha: RootVec, k: int = 1) -> RootVec:
        images = self.mu_powers[k % self.n]
        out = [0] * self.size
        for j, c in enumerate(alpha.coords):
            out[images[j]] += c
        return RootVec(out)

    def alpha_0(self, alpha: RootVec) -> RootVec:
        """alpha + mu(alpha) + ... + mu^{N-1}(alpha)"""
        out = RootVec.zero(self.size)
        for k in range(self.n):
            out = out + self.mu_apply(alpha, k)
        return out

    def grading(self, alpha: RootVec, beta: RootVec) -> int:
        """<alpha_(0) | beta>"""
        return sum(self.form(alpha, self.mu_apply(beta, k)) for k in range(self.n))

    # -- serialization ----------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, OrbitData):
            return NotImplemented
        return (
            self.gcm == other.gcm
            and self.aut == other.aut
            and self.gamma == other.gamma
            and self.gamma_plus == other.gamma_plus
            and self.gamma_minus == other.gamma_minus
            and self.d == other.d
            and self.d_plus == other.d_plus
            and self.orbit_len == other.orbit_len
            and self.reps == other.reps
        )

    __hash__ = None


def validate(matrix: Sequence[Sequence[int]], perm: Sequence[int], declared_order: Optional[int] = None) -> OrbitData:
    """
    Validate (A, mu) and compute all orbit invariants.

    Args:
        matrix: Cartan matrix rows
        perm: 0-based permutation images
        declared_order: Optional N from the config; must equal the order of perm

    Returns:
        OrbitData

    Raises:
        NotSimplyLaced: matrix is not a simply-laced GCM
        NotAutomorphism: perm is not a permutation preserving the matrix
    """
    gcm = matrix if isinstance(matrix, Gcm) else Gcm(matrix)
    if len(perm) != gcm.size:
        raise NotAutomorphism(f"Permutation has {len(perm)} entries for a {gcm.size}x{gcm.size} matrix")
    aut = perm if isinstance(perm, DiagramAut) else DiagramAut(perm, declared_order)
    p = aut.perm
    for i in range(gcm.size):
        for j in range(gcm.size):
            if gcm[i, j] != gcm[p[i], p[j]]:
                raise NotAutomorphism(f"a({i + 1},{j + 1}) != a({p[i] + 1},{p[j] + 1})")
    return OrbitData(gcm, aut)


def _is_subgroup(s: FrozenSet[int], n: int) -> bool:
    if 0 not in s:
        return False
    return all((a + b) % n in s for a in s for b in s)


def check_linking(od: OrbitData) -> Tuple[bool, List[Pair]]:
    """(LC): Gamma_ij^- is a subgroup of Z_N whenever a_ij < 0"""
    offending = [
        (i, j)
        for i in range(od.size)
        for j in range(od.size)
        if od.a(i, j) < 0 and not _is_subgroup(od.gamma_minus[i, j], od.n)
    ]
    return not offending, offending


def check_divisibility(od: OrbitData) -> None:
    """
    Assert d_i | d_ij and d_j | d_ij for every pair with d_ij > 0.

    Raises:
        InvariantViolation: on the first failing pair
    """
    for (i, j), dij in sorted(od.d.items()):
        if dij and (dij % od.d_plus[i] or dij % od.d_plus[j]):
            raise InvariantViolation(
                f"d_{i + 1}{j + 1}={dij} not divisible by d_{i + 1}={od.d_plus[i]} and d_{j + 1}={od.d_plus[j]}"
            )


def lemma_product(od: OrbitData, i: int) -> CycloNum:
    """prod over k in Gamma_ii^- of xi^k"""
    if od.d[i, i] == 0:
        raise Inapplicable(f"d_{i + 1}{i + 1} = 0")
    return CycloNum.zeta(2 * od.n, 2 * sum(od.gamma_minus[i, i]))


def check_lemma_product(od: OrbitData, i: int) -> bool:
    return lemma_product(od, i) == -1


def folded_matrix(od: OrbitData) -> Tuple[List[List[Fraction]], Tuple[int, ...]]:
    """
    The mu-folded matrix over representatives and its multipliers s_i.

    Returns:
        (rows, s) with rows[r][c] indexed by positions in od.reps
    """
    s = []
    for i in od.reps:
        total = sum(od.a(od.mu(i, k), i) for k in range(od.n))
        s.append(3 - Fraction(total, od.d_plus[i]))
    rows = []
    for pos, i in enumerate(od.reps):
        row = []
        for j in od.reps:
            total = sum(od.a(od.mu(i, k), j) for k in range(od.n))
            row.append(s[pos] / od.d_plus[i] * total)
        rows.append(row)
    return rows, tuple(int(x) if x.denominator == 1 else x for x in s)


def commutator_exponent(od: OrbitData, alpha: RootVec, beta: RootVec) -> int:
    """zeta-exponent of C(alpha, beta) = prod_k (-xi^{-k})^{<alpha|mu^k beta>}"""
    total = 0
    for k in range(od.n):
        total += (od.n - 2 * k) * od.form(alpha, od.mu_apply(beta, k))
    return total % (2 * od.n)


def commutator_map(od: OrbitData, alpha: RootVec, beta: RootVec) -> CycloNum:
    return CycloNum.zeta(2 * od.n, commutator_exponent(od, alpha, beta))


class LatticeCocycle:
    """
    Bimultiplicative cocycle eps with eps(a_i, a_j) = C(a_i, a_j) for i > j
    and 1 otherwise, so eps(a, b) / eps(b, a) = C(a, b).
    """

    def __init__(self, od: OrbitData):
        self.od = od
        self.modulus = 2 * od.n
        basis = [od.simple_root(i) for i in range(od.size)]
        self.table = [[commutator_exponent(od, basis[i], basis[j]) for j in range(od.size)] for i in range(od.size)]
        for i in range(od.size):
            if self.table[i][i]:
                raise CocycleObstruction(f"C(alpha_{i + 1}, alpha_{i + 1}) != 1")

    def exponent(self, alpha: RootVec, beta: RootVec) -> int:
        total = 0
        for i, x in enumerate(alpha.coords):
            if x:
                row = self.table[i]
                for j in range(i):
                    y = beta.coords[j]
                    if y:
                        total += x * y * row[j]
        return total % self.modulus

    def __call__(self, alpha: RootVec, beta: RootVec) -> CycloNum:
        return CycloNum.zeta(self.modulus, self.exponent(alpha, beta))


def cocycle(od: OrbitData, alpha: RootVec, beta: RootVec) -> CycloNum:
    return od.cocycle(alpha, beta)
