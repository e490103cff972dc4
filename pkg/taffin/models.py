"""
Taffin Data Models

Run configuration and report records. Reports are serialized with sorted
keys so repeated runs produce identical bytes.
"""
import enum
import hashlib
import json
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from taffin.config import settings


class RelationStatus(str, enum.Enum):
    """Outcome of one relation instance"""
    PASS = "pass"
    FAIL = "fail"
    BY_CONSTRUCTION = "by-construction"
    EMITTED = "emitted"
    INAPPLICABLE = "inapplicable"


class Command(str, enum.Enum):
    VALIDATE = "validate"
    ORBITS = "orbits"
    RELATIONS = "relations"
    IDENTITIES = "identities"
    VERIFY = "verify"


class TruncationConfig(BaseModel):
    """Windows; mode_window is doubled, so 6 means |exponent| <= 3"""
    model_config = ConfigDict(extra="forbid")

    coeff_order: int = Field(default_factory=lambda: settings.COEFF_ORDER, ge=0)
    mode_window: int = Field(default_factory=lambda: settings.MODE_WINDOW, ge=0)
    basis_degree: int = Field(default_factory=lambda: settings.BASIS_DEGREE, ge=0)
    lattice_height: int = Field(default_factory=lambda: settings.LATTICE_HEIGHT, ge=0)
    serre_window: int = Field(default_factory=lambda: settings.SERRE_WINDOW, ge=0)


class Config(BaseModel):
    """One verification run: Cartan matrix, automorphism and windows"""
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    name: str = "unnamed"
    cartan: List[List[int]]
    mu: List[int]
    order: Optional[int] = None
    truncation: TruncationConfig = Field(default_factory=TruncationConfig)
    qi_interpretation: str = Field(default_factory=lambda: settings.QI_INTERPRETATION)
    include_q9p: bool = Field(default_factory=lambda: settings.INCLUDE_Q9P, alias="include_Q9p")

    @field_validator("cartan")
    @classmethod
    def _square(cls, value: List[List[int]]) -> List[List[int]]:
        if not value or any(len(row) != len(value) for row in value):
            raise ValueError("cartan must be a non-empty square matrix")
        return value

    @field_validator("qi_interpretation")
    @classmethod
    def _known_qi(cls, value: str) -> str:
        allowed = ("q", "q^{d_i}", "q^{d_i/s_i}")
        if value not in allowed:
            raise ValueError(f"qi_interpretation must be one of {allowed}")
        return value

    @model_validator(mode="after")
    def _permutation(self) -> "Config":
        size = len(self.cartan)
        if sorted(self.mu) != list(range(1, size + 1)):
            raise ValueError(f"mu must be a permutation of 1..{size}")
        return self

    @property
    def perm(self) -> List[int]:
        """0-based permutation images"""
        return [m - 1 for m in self.mu]

    def canonical_json(self) -> str:
        return json.dumps(self.model_dump(mode="json", by_alias=True), sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode("utf-8")).hexdigest()


class Witness(BaseModel):
    """First coefficient where the two sides differ"""
    basis: str
    exponents: List[str]
    lhs: str
    rhs: str


class RelationReport(BaseModel):
    relation: str
    instance: List[int] = Field(default_factory=list)
    sign: int = 0
    status: RelationStatus
    coefficients_checked: int = 0
    first_failure: Optional[Witness] = None
    detail: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.status is not RelationStatus.FAIL


class IdentityResult(BaseModel):
    """One line of the identities scorecard"""
    name: str
    passed: bool
    detail: Optional[str] = None


class RunReport(BaseModel):
    schema_version: str = Field(default_factory=lambda: settings.REPORT_SCHEMA_VERSION)
    tool_version: str = Field(default_factory=lambda: settings.TOOL_VERSION)
    config_digest: str
    command: Command
    config_name: str
    qi_interpretation: str
    truncation: TruncationConfig
    passed: bool
    results: List[RelationReport] = Field(default_factory=list)
    identities: List[IdentityResult] = Field(default_factory=list)
    data: Dict[str, Any] = Field(default_factory=dict)
    discrepancy_log: List[str] = Field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"
