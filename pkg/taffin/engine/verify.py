"""
Taffin Relation Verification

Instantiates each relation over orbit representatives, applies both sides to
every vector of a truncated Fock basis and compares coefficients exactly.
Windows are chosen so that every compared coefficient is a finite exact sum.
"""
import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from taffin.config import settings
from taffin.diagnostics import RunLogger
from taffin.engine.cartan import OrbitData
from taffin.engine.coeff import CoeffElem
from taffin.engine.fock import (
    FockVector,
    Key,
    apply_alpha,
    apply_k,
    basis_label,
    fock_basis,
    lattice_support,
)
from taffin.engine.relcat import (
    MPoly,
    QiInterpretation,
    RelationDescriptor,
    RelationId,
    SERRE_RELATIONS,
    build_FG,
    emit_catalog,
    epsilon_sq,
    expand_g,
    q7_constant,
)
from taffin.engine.vertex import Current, OperatorSeries, VertexAlgebra, substitute
from taffin.models import RelationReport, RelationStatus, Witness

Check = Callable[[FockVector], Tuple[OperatorSeries, OperatorSeries]]

MUTATIONS = ("q7-delta", "f-factor")


@dataclass
class VerifyPlan:
    """
    What to verify and on which windows.

    Args:
        relations: Relation ids to run; None runs every family
        mode_window: Doubled bound D2; coefficients with |exponent| <= D2/2 are compared
        basis_degree: Highest Heisenberg degree of test vectors
        lattice_height: Height bound for the lattice support
        serre_window: Doubled bound for the three-variable Serre checks
        qi_interpretation: Reading of q_i in (Q7)
        mutation: Deliberate corruption used to test sensitivity
    """

    relations: Optional[Sequence[str]] = None
    mode_window: int = dc_field(default_factory=lambda: settings.MODE_WINDOW)
    basis_degree: int = dc_field(default_factory=lambda: settings.BASIS_DEGREE)
    lattice_height: int = dc_field(default_factory=lambda: settings.LATTICE_HEIGHT)
    serre_window: int = dc_field(default_factory=lambda: settings.SERRE_WINDOW)
    qi_interpretation: str = dc_field(default_factory=lambda: settings.QI_INTERPRETATION)
    include_q9p: bool = dc_field(default_factory=lambda: settings.INCLUDE_Q9P)
    modes: int = dc_field(default_factory=lambda: settings.H_MODES)
    mutation: Optional[str] = None
    jobs: int = dc_field(default_factory=lambda: settings.JOBS)

    def __post_init__(self):
        if self.mutation is not None and self.mutation not in MUTATIONS:
            raise ValueError(f"Unknown mutation {self.mutation!r}")
        if self.mode_window <= 0 or self.serre_window <= 0:
            raise ValueError("Windows must be positive")

    def wants(self, rel: RelationId) -> bool:
        return self.relations is None or rel.value in self.relations


def as_series(v: FockVector) -> OperatorSeries:
    """A vector as a series in no variables"""
    return OperatorSeries(0, {(): v.terms})


def make_witness(source: Key, exps: Sequence[int], key: Key, lhs, rhs) -> Witness:
    return Witness(
        basis=f"{basis_label(source)} -> {basis_label(key)}",
        exponents=[str(Fraction(e, 2)) for e in exps],
        lhs=str(lhs) if lhs is not None else "0",
        rhs=str(rhs) if rhs is not None else "0",
    )


class RelationVerifier:
    """
    Runs relation checks for one orbit datum.

    The vertex algebra and its caches live as long as the verifier, so one
    instance should serve a whole run.
    """

    def __init__(self, od: OrbitData, plan: VerifyPlan):
        self.od = od
        self.plan = plan
        self.field = od.field
        self.algebra = VertexAlgebra(od)
        self.support = lattice_support(od, plan.lattice_height)
        self.basis = fock_basis(od, plan.basis_degree, self.support)
        self.qi = QiInterpretation(plan.qi_interpretation)

    # -- harness ----------------------------------------------------------

    def vectors(self, max_degree: Optional[int] = None):
        for key in self.basis:
            if max_degree is not None and sum(n for _, n in key[0]) > max_degree:
                continue
            yield key, FockVector({key: self.field.one})

    def run_check(self, check: Check, lo: Sequence[int], hi: Sequence[int],
                  max_degree: Optional[int] = None) -> Tuple[int, Optional[Witness]]:
        """Compare both sides of a check on every basis vector; stops at the first difference"""
        grid = 1
        for a, b in zip(lo, hi):
            grid *= max(b - a + 1, 0)
        checked = 0
        for key, v in self.vectors(max_degree):
            lhs, rhs = check(v)
            bad = lhs.first_mismatch(rhs, lo, hi)
            if bad is not None:
                exps, comp, a, b = bad
                return checked, make_witness(key, exps, comp, a, b)
            checked += grid
        return checked, None

    def report(self, desc: RelationDescriptor, outcome: Tuple[int, Optional[Witness]],
               detail: Optional[str] = None) -> RelationReport:
        checked, witness = outcome
        status = RelationStatus.PASS if witness is None else RelationStatus.FAIL
        return RelationReport(
            relation=desc.rel.value,
            instance=[k + 1 for k in desc.instance],
            sign=desc.sign,
            status=status,
            coefficients_checked=checked,
            first_failure=witness,
            detail=detail,
        )

    def window(self, nvars: int, d2: Optional[int] = None) -> Tuple[List[int], List[int]]:
        d2 = self.plan.mode_window if d2 is None else d2
        return [-d2] * nvars, [d2] * nvars

    def product(self, currents: Sequence[Current], v: FockVector, his: Sequence[int]) -> OperatorSeries:
        return self.algebra.product(currents, v, his)

    # -- dispatch ---------------------------------------------------------

    def verify(self, desc: RelationDescriptor) -> RelationReport:
        rel = desc.rel
        if desc.status_hint == "unverified-equivalence" or rel is RelationId.Q9P:
            return RelationReport(relation=rel.value, instance=[k + 1 for k in desc.instance],
                                  sign=desc.sign, status=RelationStatus.EMITTED,
                                  detail="folded form emitted without verification")
        if rel is RelationId.Q1:
            return RelationReport(relation=rel.value, status=RelationStatus.BY_CONSTRUCTION,
                                  detail="q^{c/2} acts as q^{1/2} on the level-one module")
        handler = getattr(self, f"check_{rel.value.lower()}")
        return handler(desc)

    # -- (Q0) (Q2) (Q3) -----------------------------------------------------

    def check_q0(self, desc: RelationDescriptor) -> RelationReport:
        """Phi^+-_{mu(i)}(z) = Phi^+-_i(xi^{-1} z) and k_{mu(alpha)} = k_alpha; X holds by construction"""
        od, module = self.od, self.algebra.module
        (i,) = desc.instance
        nxt = od.mu(i)
        lo, hi = self.window(1)
        a_i, a_next = od.simple_root(i), od.simple_root(nxt)

        def phi_check(v):
            lhs = OperatorSeries(1)
            rhs = OperatorSeries(1)
            for kind in ("Phi+", "Phi-"):
                lhs = lhs + self.product([Current(kind, nxt)], v, hi)
                rhs = rhs + self.product([Current(kind, i, scale=(-2, 0))], v, hi)
            return lhs, rhs

        def k_check(v):
            return as_series(apply_k(module, a_next, v)), as_series(apply_k(module, a_i, v))

        checked, witness = self.run_check(phi_check, lo, hi)
        if witness is None:
            more, witness = self.run_check(k_check, [], [])
            checked += more
        return self.report(desc, (checked, witness), detail="X currents: by construction")

    def check_q2(self, desc: RelationDescriptor) -> RelationReport:
        """k_a k_b = k_{a+b}, [k_a, Phi^+-_i(z)] = 0 and [Phi^s_i(z), Phi^s_j(w)] = 0"""
        od, module = self.od, self.algebra.module
        lo, hi = self.window(2)
        roots = [od.simple_root(i) for i in range(od.size)]

        def check(v):
            lhs = OperatorSeries(2)
            rhs = OperatorSeries(2)
            for a, b in itertools.product(roots, repeat=2):
                lhs = lhs + _lift(as_series(apply_k(module, a, apply_k(module, b, v))), 2)
                rhs = rhs + _lift(as_series(apply_k(module, a + b, v)), 2)
            for i in od.reps:
                for kind in ("Phi+", "Phi-"):
                    for a in roots:
                        phi_k = self.product([Current(kind, i)], apply_k(module, a, v), hi[:1])
                        k_phi = self.algebra.map_vectors(self.product([Current(kind, i)], v, hi[:1]),
                                                         lambda u: apply_k(module, a, u))
                        lhs = lhs + _lift(k_phi, 2)
                        rhs = rhs + _lift(phi_k, 2)
                for j in od.reps:
                    for kind in ("Phi+", "Phi-"):
                        lhs = lhs + self.product([Current(kind, i, var=0), Current(kind, j, var=1)], v, hi)
                        rhs = rhs + self.product([Current(kind, j, var=1), Current(kind, i, var=0)], v, hi)
            return lhs, rhs

        return self.report(desc, self.run_check(check, lo, hi))

    def check_q3(self, desc: RelationDescriptor) -> RelationReport:
        """k_a X^s_i(z) k_{-a} = q^{s <a|alpha_{i(0)}>} X^s_i(z) for every simple a"""
        od, module = self.od, self.algebra.module
        (i,), s = desc.instance, desc.sign
        lo, hi = self.window(1)
        a_i = od.simple_root(i)

        def check(v):
            lhs = OperatorSeries(1)
            rhs = OperatorSeries(1)
            for l in range(od.size):
                a = od.simple_root(l)
                inner = apply_k(module, -a, v)
                lhs = lhs + self.algebra.map_vectors(self.product([Current("X", i, s)], inner, hi),
                                                     lambda u: apply_k(module, a, u))
                rhs = rhs + self.product([Current("X", i, s)], v, hi).scale(
                    self.field.q(s * od.grading(a, a_i)))
            return lhs, rhs

        return self.report(desc, self.run_check(check, lo, hi))

    # -- (Q4) (Q5) (Q6) -----------------------------------------------------

    def _g_coeffs(self, i: int, j: int, order: int, scale: CoeffElem, power: int) -> Dict[int, CoeffElem]:
        series = expand_g(self.od, i, j, order, scale, power)
        return {n: series.coeff(n) for n in range(order + 1)}

    def check_q4(self, desc: RelationDescriptor) -> RelationReport:
        """Phi^+_i(z) Phi^-_j(w) = g_ij(q x)^{-1} g_ij(q^{-1} x) Phi^-_j(w) Phi^+_i(z), x = w/z"""
        i, j = desc.instance
        lo, hi = self.window(2)
        order = self.plan.mode_window // 2 + 1
        field = self.field
        up = expand_g(self.od, i, j, order, field.q(1), -1)
        down = expand_g(self.od, i, j, order, field.q(-1), 1)
        prod = up * down
        h = {n: prod.coeff(n) for n in range(order + 1)}

        def check(v):
            lhs = self.product([Current("Phi+", i, var=0), Current("Phi-", j, var=1)], v, hi)
            ordered = self.product([Current("Phi-", j, var=1), Current("Phi+", i, var=0)], v, hi)
            return lhs, ordered.times_ratio(h, 1, 0)

        return self.report(desc, self.run_check(check, lo, hi))

    def check_q5(self, desc: RelationDescriptor) -> RelationReport:
        """Phi^+_i(z) X^s_j(w) = g_ij(q^{-s/2} x)^s X^s_j(w) Phi^+_i(z), x = w/z"""
        i, j = desc.instance
        s = desc.sign
        lo, hi = self.window(2)
        order = self.plan.mode_window // 2 + 1
        h = self._g_coeffs(i, j, order, self.field.v(-s), s)

        def check(v):
            lhs = self.product([Current("Phi+", i, var=0), Current("X", j, s, var=1)], v, hi)
            ordered = self.product([Current("X", j, s, var=1), Current("Phi+", i, var=0)], v, hi)
            return lhs, ordered.times_ratio(h, 1, 0)

        return self.report(desc, self.run_check(check, lo, hi))

    def check_q6(self, desc: RelationDescriptor) -> RelationReport:
        """Phi^-_i(z) X^s_j(w) = g_ji(q^{-s/2} x)^{-s} X^s_j(w) Phi^-_i(z), x = z/w"""
        i, j = desc.instance
        s = desc.sign
        lo, hi = self.window(2)
        d2 = self.plan.mode_window
        order = d2 // 2 + 1
        h = self._g_coeffs(j, i, order, self.field.v(-s), -s)

        def check(v):
            lhs = self.product([Current("Phi-", i, var=0), Current("X", j, s, var=1)], v, hi)
            ordered = self.product([Current("X", j, s, var=1), Current("Phi-", i, var=0)], v, (d2, 2 * d2 + 2))
            return lhs, ordered.times_ratio(h, 0, 1)

        return self.report(desc, self.run_check(check, lo, hi))

    # -- (Q7) -------------------------------------------------------------

    def check_q7(self, desc: RelationDescriptor) -> RelationReport:
        """
        eps_i^2 [X^+_i(z), X^-_j(w)] = 1/(q_i - q_i^{-1}) sum_{k: mu^k(j) = i}
            (Phi^+_i(q^{-1/2} z) delta(q xi^k w/z) - Phi^-_i(q^{1/2} z) delta(q^{-1} xi^k w/z))
        """
        od, field = self.od, self.field
        i, j = desc.instance
        lo, hi = self.window(2)
        d2 = self.plan.mode_window
        twists = od.twists_to(i, j)
        eps2 = epsilon_sq(od, i)
        const = q7_constant(od, i, self.qi) if twists else field.zero
        # doubled exponent of v in gamma^{1/2} for the Phi^+ delta
        up = 2 if self.plan.mutation == "q7-delta" else 1

        def check(v):
            lhs = (self.product([Current("X", i, 1, var=0), Current("X", j, -1, var=1)], v, hi)
                   - self.product([Current("X", j, -1, var=1), Current("X", i, 1, var=0)], v, hi))
            lhs = lhs.scale(eps2)
            rhs = OperatorSeries(2)
            if not twists:
                return lhs, rhs
            plus = self.product([Current("Phi+", i, scale=(0, -1))], v, (0,))
            minus = self.product([Current("Phi-", i, scale=(0, 1))], v, (2 * d2,))
            for a2 in range(lo[0], hi[0] + 1):
                for b2 in range(lo[1], hi[1] + 1):
                    total = a2 + b2
                    if total % 2:
                        continue
                    for k in twists:
                        if total <= 0:
                            c = field.monomial(k * b2, up * b2) * const
                            for key, x in plus.data.get((total,), {}).items():
                                rhs.add_term((a2, b2), key, x * c)
                        if total >= 0:
                            c = field.monomial(k * b2, -b2) * const
                            for key, x in minus.data.get((total,), {}).items():
                                rhs.add_term((a2, b2), key, -(x * c))
            return lhs, rhs

        detail = f"q_i = {self.qi.value}" if twists else "i not in O(j): bracket vanishes"
        return self.report(desc, self.run_check(check, lo, hi), detail=detail)

    # -- (Q8) -------------------------------------------------------------

    def _fg(self, i: int, j: int, s: int) -> Tuple[MPoly, MPoly]:
        f, g = build_FG(self.od, i, j, s)
        if self.plan.mutation == "f-factor" and s > 0 and self.od.gamma[i, j]:
            # first factor of F^+ with its q-power off by one
            od, field = self.od, self.field
            f = MPoly.const(field, 2, 1)
            for n, k in enumerate(sorted(od.gamma[i, j])):
                a = od.pairing(i, j, k) + (1 if n == 0 else 0)
                f = f * MPoly.binomial(field, 2, field.one, (1, 0), -(field.xi(k) * field.q(s * a)), (0, 1))
        return f, g

    def check_q8(self, desc: RelationDescriptor) -> RelationReport:
        """F(z, w) X^s_i(z) X^s_j(w) = G(z, w) X^s_j(w) X^s_i(z)"""
        i, j = desc.instance
        s = desc.sign
        lo, hi = self.window(2)
        f, g = self._fg(i, j, s)

        def check(v):
            left = self.product([Current("X", i, s, var=0), Current("X", j, s, var=1)], v, hi)
            right = self.product([Current("X", j, s, var=1), Current("X", i, s, var=0)], v, hi)
            return left.times_poly(f), right.times_poly(g)

        return self.report(desc, self.run_check(check, lo, hi))

    # -- Heisenberg forms ---------------------------------------------------

    def check_h1(self, desc: RelationDescriptor) -> RelationReport:
        """[a_{i,m}, a_{j,n}] = delta_{m,-n} B_m(i, j) for every member of the orbit of i"""
        od, module = self.od, self.algebra.module
        i, j = desc.instance
        modes = [m for m in range(-self.plan.modes, self.plan.modes + 1) if m]

        def check(v):
            lhs = OperatorSeries(0)
            rhs = OperatorSeries(0)
            for i2 in od.orbit(i):
                for m in modes:
                    for n in modes:
                        comm = (apply_alpha(module, i2, m, apply_alpha(module, j, n, v))
                                - apply_alpha(module, j, n, apply_alpha(module, i2, m, v)))
                        lhs = lhs + as_series(comm)
                        if m + n == 0:
                            rhs = rhs + as_series(v.scale(module.bracket(i2, j, m)))
            return lhs, rhs

        return self.report(desc, self.run_check(check, [], []))

    def check_q4p(self, desc: RelationDescriptor) -> RelationReport:
        """[h_{i,m}, h_{j,-m}] against the catalog constants"""
        module = self.algebra.module
        i, j = desc.instance
        constants = desc.payload["constants"]

        def check(v):
            lhs = OperatorSeries(0)
            rhs = OperatorSeries(0)
            for m, c in sorted(constants.items()):
                comm = (apply_alpha(module, i, m, apply_alpha(module, j, -m, v))
                        - apply_alpha(module, j, -m, apply_alpha(module, i, m, v)))
                lhs = lhs + as_series(comm)
                rhs = rhs + as_series(v.scale(c))
            return lhs, rhs

        return self.report(desc, self.run_check(check, [], []))

    def _h_action(self, desc: RelationDescriptor) -> RelationReport:
        """[h_{i,m}, X^s_j(w)] = c_m w^m X^s_j(w), mode by mode"""
        module = self.algebra.module
        i, j = desc.instance
        s = desc.sign
        lo, hi = self.window(1)
        constants = desc.payload["constants"]
        reach = max((abs(m) for m in constants), default=0)

        def check(v):
            lhs = OperatorSeries(1)
            rhs = OperatorSeries(1)
            wide = (hi[0] + 2 * reach,)
            for m, c in sorted(constants.items()):
                x_v = self.product([Current("X", j, s)], v, wide)
                x_av = self.product([Current("X", j, s)], apply_alpha(module, i, m, v), wide)
                lhs = lhs + (self.algebra.map_vectors(x_v, lambda u: apply_alpha(module, i, m, u)) - x_av)
                rhs = rhs + OperatorSeries(1, {(e[0] + 2 * m,): sl for e, sl in x_v.data.items()}).scale(c)
            return lhs, rhs

        return self.report(desc, self.run_check(check, lo, hi))

    check_q5p = _h_action
    check_q6p = _h_action

    # -- Serre ------------------------------------------------------------

    def check_q9(self, desc: RelationDescriptor) -> RelationReport:
        """
        Sym_{z1,z2} p_ij(z1, z2) (X_i X_i X_j - [2]_{q^{d_ij}} X_i X_j X_i + X_j X_i X_i) = 0
        """
        i, j = desc.instance
        s = desc.sign
        p = desc.payload["p"]
        qb = desc.payload["q_binomial"]
        w2 = self.plan.serre_window
        lo, hi = self.window(3, w2)
        xi1, xi2, xj = Current("X", i, s, var=0), Current("X", i, s, var=1), Current("X", j, s, var=2)

        def check(v):
            total = (self.product([xi1, xi2, xj], v, hi)
                     - self.product([xi1, xj, xi2], v, hi).scale(qb)
                     + self.product([xj, xi1, xi2], v, hi))
            total = total.times_poly(p)
            return total + total.permute((1, 0, 2)), OperatorSeries(3)

        return self.report(desc, self.run_check(check, lo, hi))

    def check_q10(self, desc: RelationDescriptor) -> RelationReport:
        """Sym_{z1,z2,z3} p_i(z1, z2, z3) X_i(z1) X_i(z2) X_i(z3) = 0"""
        (i,), s = desc.instance, desc.sign
        p = desc.payload["p"]
        w2 = self.plan.serre_window
        lo, hi = self.window(3, w2)
        currents = [Current("X", i, s, var=k) for k in range(3)]

        def check(v):
            base = self.product(currents, v, hi).times_poly(p)
            total = OperatorSeries(3)
            for perm in itertools.permutations(range(3)):
                total = total + base.permute(perm)
            return total, OperatorSeries(3)

        return self.report(desc, self.run_check(check, lo, hi))


def _lift(series: OperatorSeries, nvars: int) -> OperatorSeries:
    """Pad exponent tuples with zeros up to nvars variables"""
    return OperatorSeries(nvars, {e + (0,) * (nvars - len(e)): sl for e, sl in series.data.items()})


# ---------------------------------------------------------------------------
# Normal ordering checks
# ---------------------------------------------------------------------------

def check_normal_order_specialisation(algebra: VertexAlgebra, i: int, v: FockVector, d2: int,
                                      line: int = 1) -> Tuple[bool, Optional[str]]:
    """
    :X^+_i(z) X^-_i(w): at w = q^line z against
    q^{line (d_i - d_ii/2)} Phi^{-line}_i(q^{line/2} z), for line = +1 or -1.
    """
    od, field = algebra.od, algebra.field
    factors = [(i, 1), (i, -1)]
    lows = algebra.lowest_exponents(factors, v)
    his = (d2 - lows[1], d2 - lows[0])
    ordered = algebra.normal_ordered(factors, v, his)
    merged = substitute(ordered, 0, 1, (0, 2 * line), field)
    a = od.simple_root(i)
    kind = "Phi-" if line > 0 else "Phi+"
    phi = algebra.product([Current(kind, i, scale=(0, line))], v, (d2,))
    expected = phi.scale(field.v(line * od.grading(a, a)))
    bad = merged.first_mismatch(expected, [-d2], [d2])
    if bad is None:
        return True, None
    exps, key, lhs, rhs = bad
    return False, f"z^{Fraction(exps[0], 2)} {basis_label(key)}: {lhs} != {rhs}"


def check_ope(algebra: VertexAlgebra, factors: Sequence[Tuple[int, int]], v: FockVector,
              d2: int) -> Tuple[bool, Optional[str]]:
    """
    True product of two or three X currents against the normal-ordered
    product times the pairwise prefactors in z_b / z_a (a < b), on |z_1| > |z_2| > |z_3|.
    """
    k = len(factors)
    if k not in (2, 3):
        raise ValueError("OPE check handles two or three currents")
    lows = algebra.lowest_exponents(factors, v)
    reach = [max((d2 - lo) // 2, 0) for lo in lows]
    if k == 2:
        orders = {(0, 1): reach[1]}
        his = (d2 + 2 * reach[1], d2)
    else:
        orders = {(0, 1): reach[1] + reach[2], (0, 2): reach[2], (1, 2): reach[2]}
        his = (d2 + 2 * (reach[1] + 2 * reach[2]), d2 + 2 * reach[2], d2)
    ordered = algebra.normal_ordered(factors, v, his)
    for (a, b), order in orders.items():
        h = algebra.ope_prefactor(factors[a], factors[b], order)
        ordered = ordered.times_ratio(h, b, a)
    currents = [Current("X", idx, s, var=p) for p, (idx, s) in enumerate(factors)]
    true = algebra.product(currents, v, [d2] * k)
    bad = true.first_mismatch(ordered, [-d2] * k, [d2] * k)
    if bad is None:
        return True, None
    exps, key, lhs, rhs = bad
    return False, f"{[str(Fraction(e, 2)) for e in exps]} {basis_label(key)}: {lhs} != {rhs}"


# ---------------------------------------------------------------------------
# Operation surface
# ---------------------------------------------------------------------------

def verify_relation(plan: VerifyPlan, descriptor: RelationDescriptor, od: OrbitData,
                    verifier: Optional[RelationVerifier] = None) -> RelationReport:
    verifier = verifier or RelationVerifier(od, plan)
    return verifier.verify(descriptor)


def verify_serre(plan: VerifyPlan, descriptor: RelationDescriptor, od: OrbitData,
                 verifier: Optional[RelationVerifier] = None) -> RelationReport:
    if descriptor.rel not in SERRE_RELATIONS:
        raise ValueError(f"{descriptor.label} is not a Serre relation")
    return verify_relation(plan, descriptor, od, verifier)


_worker: Optional[RelationVerifier] = None


def _init_worker(od: OrbitData, plan: VerifyPlan):
    global _worker
    _worker = RelationVerifier(od, plan)


def _run_in_worker(descriptor: RelationDescriptor) -> RelationReport:
    return _worker.verify(descriptor)


def verify_theorem(od: OrbitData, plan: VerifyPlan) -> Tuple[List[RelationReport], bool]:
    """
    Every applicable relation instance, in catalog order.

    Returns:
        (reports, passed); passed is True iff no report failed
    """
    catalog = emit_catalog(od, plan.include_q9p, plan.modes, QiInterpretation(plan.qi_interpretation))
    selected = [d for d in catalog if plan.wants(d.rel)]
    RunLogger.log_debug(f"verifying {len(selected)} relation instances")
    if plan.jobs > 1 and len(selected) > 1:
        with ProcessPoolExecutor(max_workers=plan.jobs, initializer=_init_worker, initargs=(od, plan)) as pool:
            reports = list(pool.map(_run_in_worker, selected))
    else:
        verifier = RelationVerifier(od, plan)
        reports = [verifier.verify(d) for d in selected]
    for rep in reports:
        RunLogger.log_verify(rep.relation, rep.instance, rep.status.value, rep.coefficients_checked)
    passed = all(r.passed for r in reports)
    return reports, passed
