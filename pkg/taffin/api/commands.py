"""
Taffin Command Layer

Parses run configs and routes CLI commands to the engine. Every command
returns a RunReport; the CLI turns it into output and an exit status.
"""
import json
import random
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from pydantic import ValidationError

from taffin.diagnostics import RunLogger, config_validator, discrepancy_notes
from taffin.engine import distcalc
from taffin.engine.cartan import (
    OrbitData,
    check_divisibility,
    check_lemma_product,
    check_linking,
    folded_matrix,
    validate,
)
from taffin.engine.fock import FockVector, fock_basis, lattice_support
from taffin.engine.relcat import QiInterpretation, RelationId, emit_catalog
from taffin.engine.verify import VerifyPlan, check_normal_order_specialisation, check_ope, verify_theorem
from taffin.engine.vertex import VertexAlgebra
from taffin.errors import ConfigError, Inapplicable, ParseError, TaffinError
from taffin.models import (
    Command,
    Config,
    IdentityResult,
    RelationReport,
    RelationStatus,
    RunReport,
)

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2

RELATION_NAMES = tuple(r.value for r in RelationId)


def parse_config(path: str) -> Config:
    """
    Read and validate a JSON run config.

    Raises:
        ParseError: unreadable file or malformed JSON
        ConfigError: schema violation; field holds the pydantic location
    """
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise ParseError(f"Config not found: {path}") from e
    except json.JSONDecodeError as e:
        raise ParseError(f"Malformed JSON in {path}: {e.msg} at line {e.lineno}") from e
    return config_from_dict(raw)


def config_from_dict(raw: dict) -> Config:
    try:
        cfg = Config.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(p) for p in first["loc"])
        raise ConfigError(f"{field}: {first['msg']}", field=field) from e
    ok, message = config_validator.validate_matrix(cfg.cartan)
    if not ok:
        raise ConfigError(message, field="cartan")
    return cfg


def orbit_data(cfg: Config) -> OrbitData:
    try:
        return validate(cfg.cartan, cfg.perm, cfg.order)
    except TaffinError as e:
        raise ConfigError(str(e), field="mu") from e


def orbit_to_dict(od: OrbitData) -> dict:
    """1-based serialization; pairs render as "(i,j)" """
    def pair(ij):
        return f"({ij[0] + 1},{ij[1] + 1})"

    def zset(s):
        return sorted(s)

    rows, s = folded_matrix(od)
    return {
        "cartan": [list(r) for r in od.gcm.rows],
        "mu": [p + 1 for p in od.aut.perm],
        "order": od.n,
        "gamma": {pair(k): zset(v) for k, v in sorted(od.gamma.items()) if v},
        "gamma_plus": {pair(k): zset(v) for k, v in sorted(od.gamma_plus.items()) if v},
        "gamma_minus": {pair(k): zset(v) for k, v in sorted(od.gamma_minus.items()) if v},
        "d": {pair(k): v for k, v in sorted(od.d.items()) if v},
        "d_plus": {str(i + 1): v for i, v in sorted(od.d_plus.items())},
        "orbit_len": {str(i + 1): v for i, v in sorted(od.orbit_len.items())},
        "representatives": [r + 1 for r in od.reps],
        "folded": [[str(x) for x in row] for row in rows],
        "s": list(s),
    }


def orbit_from_dict(data: dict) -> OrbitData:
    return validate(data["cartan"], [m - 1 for m in data["mu"]], data.get("order"))


class CommandRunner:
    """Registry of CLI commands over one parsed config"""

    def __init__(self, cfg: Config, relations: Optional[List[str]] = None, mutation: Optional[str] = None):
        self.cfg = cfg
        self.relations = relations
        self.mutation = mutation
        self.commands: Dict[str, Callable[[], RunReport]] = {}
        self._register_commands()

    def _register_commands(self):
        self.register_command(Command.VALIDATE, self.cmd_validate)
        self.register_command(Command.ORBITS, self.cmd_orbits)
        self.register_command(Command.RELATIONS, self.cmd_relations)
        self.register_command(Command.IDENTITIES, self.cmd_identities)
        self.register_command(Command.VERIFY, self.cmd_verify)

    def register_command(self, name: Command, handler: Callable[[], RunReport]):
        self.commands[name.value] = handler

    def run(self, name: str) -> RunReport:
        handler = self.commands.get(name)
        if handler is None:
            raise ConfigError(f"Unknown command {name!r}", field="command")
        return handler()

    def _report(self, command: Command, passed: bool, **extra) -> RunReport:
        notes = discrepancy_notes(extra.pop("notes", None))
        return RunReport(
            config_digest=self.cfg.digest(),
            command=command,
            config_name=self.cfg.name,
            qi_interpretation=self.cfg.qi_interpretation,
            truncation=self.cfg.truncation,
            passed=passed,
            discrepancy_log=notes,
            **extra,
        )

    # -- commands ---------------------------------------------------------

    def cmd_validate(self) -> RunReport:
        od = orbit_data(self.cfg)
        ok, offending = check_linking(od)
        data = {
            "linking": ok,
            "offending_pairs": [[i + 1, j + 1] for i, j in offending],
            "order": od.n,
        }
        identities = []
        if ok:
            try:
                check_divisibility(od)
                identities.append(IdentityResult(name="divisibility", passed=True))
            except TaffinError as e:
                identities.append(IdentityResult(name="divisibility", passed=False, detail=str(e)))
                ok = False
        RunLogger.log_config(f"linking={'ok' if data['linking'] else 'fails'} order={od.n}")
        return self._report(Command.VALIDATE, ok, data=data, identities=identities)

    def cmd_orbits(self) -> RunReport:
        od = orbit_data(self.cfg)
        notes = []
        lemma = {}
        for i in od.reps:
            if od.d[i, i]:
                holds = check_lemma_product(od, i)
                lemma[str(i + 1)] = holds
                if not holds:
                    notes.append(f"Orbit-product lemma fails at node {i + 1}: product is not -1")
        data = orbit_to_dict(od)
        data["lemma_product_is_minus_one"] = lemma
        for note in notes:
            RunLogger.log_discrepancy(note)
        return self._report(Command.ORBITS, True, data=data, notes=notes)

    def cmd_relations(self) -> RunReport:
        od = orbit_data(self.cfg)
        try:
            catalog = emit_catalog(od, self.cfg.include_q9p, qi=QiInterpretation(self.cfg.qi_interpretation))
        except Inapplicable as e:
            return self._report(Command.RELATIONS, False, data={"error": str(e)})
        results = [
            RelationReport(
                relation=d.rel.value,
                instance=[k + 1 for k in d.instance],
                sign=d.sign,
                status=RelationStatus.EMITTED,
            )
            for d in catalog
        ]
        data = {"catalog": [d.to_dict() for d in catalog]}
        return self._report(Command.RELATIONS, True, results=results, data=data)

    def cmd_identities(self) -> RunReport:
        od = orbit_data(self.cfg)
        order = self.cfg.truncation.coeff_order
        field = od.field
        results: List[IdentityResult] = []

        def record(name: str, outcome):
            if isinstance(outcome, tuple):
                ok, witness = outcome
            else:
                ok, witness = bool(outcome), None
            results.append(IdentityResult(name=name, passed=ok, detail=None if witness is None else str(witness)))
            RunLogger.log_identity(name, ok)

        record("qbinom_products", distcalc.check_qbinom_products(field, order))
        for i in od.reps:
            for j in od.reps:
                if od.gamma[i, j]:
                    record(f"dual_route({i + 1},{j + 1})", distcalc.check_dual_route(od, i, j, order))
                if i == j or (od.a(i, j) < 0 and not od.in_orbit(i, j)):
                    for s in (1, -1):
                        record(f"orbit_products({i + 1},{j + 1},{'+' if s > 0 else '-'})",
                               distcalc.check_orbit_products(od, i, j, s, order))
            record(f"delta_prop({i + 1},{i + 1})", distcalc.check_delta_prop(od, i, i, order))
            if od.d[i, i]:
                for s in (1, -1):
                    name = f"serre_scalar({i + 1},{'+' if s > 0 else '-'})"
                    try:
                        record(name, distcalc.check_serre_scalar(od.d_plus[i], od.d[i, i], s))
                    except Inapplicable as e:
                        # an unchecked row never counts as a pass
                        record(name, (False, e))
        record("cgjt", _cgjt_sample(field, min(order, 15)))
        record("ps0", distcalc.check_ps0())

        algebra = VertexAlgebra(od)
        d2 = min(self.cfg.truncation.mode_window, 4)
        keys = fock_basis(od, 1, lattice_support(od, 1))
        for i in od.reps:
            for line in (1, -1):
                outcome = (True, None)
                for key in keys:
                    outcome = check_normal_order_specialisation(algebra, i, FockVector({key: field.one}), d2, line)
                    if not outcome[0]:
                        break
                record(f"normal_order({i + 1},{line:+d})", outcome)
            record(f"ope({i + 1},+-)", check_ope(algebra, [(i, 1), (i, -1)], FockVector.vacuum(od), d2))
        passed = all(r.passed for r in results)
        return self._report(Command.IDENTITIES, passed, identities=results)

    def cmd_verify(self) -> RunReport:
        od = orbit_data(self.cfg)
        ok, offending = check_linking(od)
        if not ok:
            data = {"offending_pairs": [[i + 1, j + 1] for i, j in offending]}
            return self._report(Command.VERIFY, False, data=data)
        t = self.cfg.truncation
        plan = VerifyPlan(
            relations=self.relations,
            mode_window=t.mode_window,
            basis_degree=t.basis_degree,
            lattice_height=t.lattice_height,
            serre_window=t.serre_window,
            qi_interpretation=self.cfg.qi_interpretation,
            include_q9p=self.cfg.include_q9p,
            mutation=self.mutation,
        )
        reports, passed = verify_theorem(od, plan)
        return self._report(Command.VERIFY, passed, results=reports)


def _cgjt_sample(field, order: int, count: int = 50, seed: int = 7) -> Tuple[bool, Optional[dict]]:
    """Randomized instances with distinct constants zeta^j v^m"""
    rng = random.Random(seed)
    done = 0
    while done < count:
        t = rng.randint(1, 3)
        picks = set()
        while len(picks) < t:
            picks.add((rng.randrange(field.order), rng.randint(-3, 3)))
        constants = [field.monomial(j, m) for j, m in sorted(picks)]
        exponents = [rng.choice((-1, 0, 1, 2)) for _ in constants]
        try:
            ok, witness = distcalc.check_cgjt(field, constants, exponents, order)
        except TaffinError:
            continue
        if not ok:
            return False, witness
        done += 1
    return True, None


def run_command(name: str, cfg: Config, relations: Optional[List[str]] = None,
                mutation: Optional[str] = None) -> Tuple[int, RunReport]:
    """
    Run one command.

    Returns:
        (exit status, report)
    """
    if relations:
        ok, message = config_validator.validate_relations(relations, RELATION_NAMES)
        if not ok:
            raise ConfigError(message, field="relations")
    report = CommandRunner(cfg, relations, mutation).run(name)
    return (EXIT_PASS if report.passed else EXIT_FAIL), report
