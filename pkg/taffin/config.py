"""
Taffin Configuration

Process-wide defaults. Per-run configs (taffin.models.Config) fill their
missing truncation values from here.
"""
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Verification kernel settings"""

    # Application
    APP_NAME: str = "taffin"
    TOOL_VERSION: str = "1.0.0"
    REPORT_SCHEMA_VERSION: str = "1"
    DEBUG: bool = False

    # Truncation (windows are doubled so half-integer exponents stay integral)
    COEFF_ORDER: int = 20
    MODE_WINDOW: int = 6
    BASIS_DEGREE: int = 3
    LATTICE_HEIGHT: int = 2
    SERRE_WINDOW: int = 2

    # Relation catalog
    QI_INTERPRETATION: str = "q"  # q, q^{d_i}, q^{d_i/s_i}
    INCLUDE_Q9P: bool = False
    H_MODES: int = 3  # |m| range for the h-form constants

    # Worker processes for verify; 1 runs in-process
    JOBS: int = 1

    class Config:
        env_file = ".env"
        env_prefix = "TAFFIN_"
        case_sensitive = True


settings = Settings()
