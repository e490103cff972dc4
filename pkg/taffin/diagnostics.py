"""
Taffin Diagnostics

Config guards, run logging and the fixed list of known misprints carried by
every report.
"""
import sys
from typing import List, Optional, Sequence

from taffin.config import settings


# Known misprints in the published construction, reported with every run
DISCREPANCY_LOG = (
    "H0: the lattice relation reads xi where xi^m is meant for the m-th twist; "
    "xi^m is used throughout",
    "Commutator proposition: the x^+/x^- bracket is stated for x = eps X with a bare "
    "eps in place of eps^2; only eps_i^2 enters the check",
    "Q7: q_i is never defined; the interpretation used is recorded in each report",
    "Coefficient lemma: the prefactor prod_{j != i}(1 - c_i/c_j)^{a_j} should read "
    "prod_{j != i}(1 - c_j/c_i)^{a_j}",
    "Orbit-product lemma: prod of xi^k over Gamma_ii^- equals 1, not -1, for the "
    "order-4 rotation of A3^(1)",
    "Normal-ordering example: :X+_i(z) X-_i(qz): specializes to Phi^-, not Phi^+",
)


class ConfigValidator:
    """Guards on raw config values; every check returns (ok, message)"""

    MAX_RANK = 12

    @staticmethod
    def validate_matrix(matrix: Sequence[Sequence[int]]) -> tuple[bool, Optional[str]]:
        """
        Check that a matrix is a square simply-laced GCM.

        Returns:
            (is_valid, error_message)
        """
        n = len(matrix)
        if n == 0:
            return False, "Cartan matrix is empty"
        if n > ConfigValidator.MAX_RANK:
            return False, f"Rank {n} exceeds {ConfigValidator.MAX_RANK}"
        for i, row in enumerate(matrix):
            if len(row) != n:
                return False, f"Row {i + 1} has {len(row)} entries, expected {n}"
            for j, a in enumerate(row):
                if i == j and a != 2:
                    return False, f"Diagonal entry ({i + 1},{i + 1}) is {a}, expected 2"
                if i != j and a not in (0, -1):
                    return False, f"Entry ({i + 1},{j + 1}) is {a}, expected 0 or -1"
                if i != j and (a == 0) != (matrix[j][i] == 0):
                    return False, f"Zero pattern not symmetric at ({i + 1},{j + 1})"
        return True, None

    @staticmethod
    def validate_permutation(mu: Sequence[int], size: int) -> tuple[bool, Optional[str]]:
        """1-based permutation images of 1..size"""
        if len(mu) != size:
            return False, f"mu has {len(mu)} entries, expected {size}"
        if sorted(mu) != list(range(1, size + 1)):
            return False, f"mu is not a permutation of 1..{size}"
        return True, None

    @staticmethod
    def validate_relations(names: Sequence[str], known: Sequence[str]) -> tuple[bool, Optional[str]]:
        unknown = [n for n in names if n not in known]
        if unknown:
            return False, f"Unknown relations: {', '.join(unknown)}"
        return True, None


class RunLogger:
    """
    Tagged one-line log records.

    Lines carry no timestamps so that captured output is reproducible. They
    go to stderr unless the report is written to a file.
    """

    to_stdout = False

    @staticmethod
    def _emit(line: str):
        print(line, file=sys.stdout if RunLogger.to_stdout else sys.stderr)

    @staticmethod
    def log_verify(relation: str, instance: Sequence[int], status: str, checked: int):
        """Log one relation outcome"""
        inst = ",".join(str(i) for i in instance)
        RunLogger._emit(f"[VERIFY] relation={relation} instance=({inst}) status={status} checked={checked}")

    @staticmethod
    def log_identity(name: str, passed: bool):
        RunLogger._emit(f"[IDENTITY] {name}: {'pass' if passed else 'FAIL'}")

    @staticmethod
    def log_discrepancy(note: str):
        RunLogger._emit(f"[DISCREPANCY] {note}")

    @staticmethod
    def log_config(message: str):
        RunLogger._emit(f"[CONFIG] {message}")

    @staticmethod
    def log_debug(message: str):
        """Only printed with TAFFIN_DEBUG set"""
        if settings.DEBUG:
            RunLogger._emit(f"[DEBUG] {message}")


def discrepancy_notes(extra: Optional[List[str]] = None) -> List[str]:
    return list(DISCREPANCY_LOG) + list(extra or [])


# Global instances
config_validator = ConfigValidator()
run_logger = RunLogger()
