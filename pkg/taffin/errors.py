"""
Taffin Errors

Exception hierarchy shared by the engine, the command layer and the CLI.
"""


class TaffinError(Exception):
    """Base class for every error raised by taffin"""


class DivisionByZero(TaffinError, ZeroDivisionError):
    """Division by the zero element of the coefficient field"""


class IndexOutOfRange(TaffinError, IndexError):
    """Index outside the admissible range (binomial index, node index)"""


class NotSimplyLaced(TaffinError):
    """Matrix is not a simply-laced generalized Cartan matrix"""


class NotAutomorphism(TaffinError):
    """Permutation does not preserve the Cartan matrix"""


class InvariantViolation(TaffinError):
    """A structural invariant of the orbit data failed"""


class Inapplicable(TaffinError):
    """Operation guard not satisfied for the given indices"""


class InexactDivision(TaffinError):
    """Polynomial division left a nonzero remainder"""


class CocycleObstruction(TaffinError):
    """C(alpha_i, alpha_i) != 1, so the ordered-basis cocycle does not exist"""


class ZeroMode(TaffinError):
    """Heisenberg mode 0 requested"""


class NegativeMode(TaffinError):
    """Negative mode requested where only m >= 0 exists"""


class UnsupportedArity(TaffinError):
    """Normal ordering of more currents than supported"""


class DegenerateConstants(TaffinError):
    """Delta-lemma constants are repeated or zero"""


class RegionMismatch(TaffinError):
    """Series expanded in different regions were combined"""


class ConfigError(TaffinError):
    """Configuration failed validation"""

    def __init__(self, message: str, field: str = ""):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)


class ParseError(ConfigError):
    """Configuration file could not be read or parsed"""
