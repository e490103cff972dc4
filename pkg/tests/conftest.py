"""
Taffin Test Configuration

Shared fixtures for the entire test suite.
"""
import json
from pathlib import Path

import pytest

from taffin.diagnostics import RunLogger
from taffin.engine.cartan import validate
from taffin.engine.catalog import type_a_affine
from taffin.models import Config

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"

A2 = [[2, -1], [-1, 2]]
A3 = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]


# ---------------------------------------------------------------------------
# Orbit data fixtures
# ---------------------------------------------------------------------------

@pytest.fixture(scope="session")
def a1():
    """Untwisted A1"""
    return validate([[2]], [0])


@pytest.fixture(scope="session")
def a2():
    """Untwisted A2"""
    return validate(A2, [0, 1])


@pytest.fixture(scope="session")
def a2_flip():
    """A2 with the order-2 flip; one orbit, d_11 = 1"""
    return validate(A2, [1, 0])


@pytest.fixture(scope="session")
def a3_flip():
    """A3 with the order-2 flip; node 2 is fixed"""
    return validate(A3, [2, 1, 0])


@pytest.fixture(scope="session")
def a3():
    """Untwisted A3"""
    return validate(A3, [0, 1, 2])


@pytest.fixture(scope="session")
def a2_affine_rotation():
    """A2^(1) with the 3-cycle; fails the linking condition"""
    return validate(type_a_affine(2), [1, 2, 0])


@pytest.fixture(scope="session")
def a3_affine_rotation():
    """A3^(1) with the 4-cycle; single orbit, d_11 = 2"""
    return validate(type_a_affine(3), [1, 2, 3, 0])


# ---------------------------------------------------------------------------
# Config fixtures
# ---------------------------------------------------------------------------

@pytest.fixture
def config_file(tmp_path):
    """Write a raw dict as a JSON config and return its path"""
    def _write(raw, name="config.json"):
        path = tmp_path / name
        path.write_text(json.dumps(raw), encoding="utf-8")
        return str(path)
    return _write


@pytest.fixture
def shipped_config():
    """Path of a config under configs/"""
    def _path(name):
        return str(CONFIG_DIR / f"{name}.json")
    return _path


@pytest.fixture
def a2_flip_config():
    return Config(name="A2-flip", cartan=A2, mu=[2, 1])


@pytest.fixture(autouse=True)
def _log_to_stderr():
    """Reset the log target between tests"""
    RunLogger.to_stdout = False
    yield
    RunLogger.to_stdout = False
