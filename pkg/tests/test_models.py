"""
Unit Tests -- Data Models

Run configuration validation, digests and report serialization.
"""
import json

import pytest
from pydantic import ValidationError

from taffin.models import (
    Command,
    Config,
    RelationReport,
    RelationStatus,
    RunReport,
    TruncationConfig,
    Witness,
)


def _config(**kwargs):
    data = {"name": "A2 flip", "cartan": [[2, -1], [-1, 2]], "mu": [2, 1]}
    data.update(kwargs)
    return Config(**data)


# ---------------------------------------------------------------------------
# Config
# ---------------------------------------------------------------------------

class TestConfig:
    def test_defaults_from_settings(self):
        cfg = _config()
        assert cfg.truncation.mode_window == 6
        assert cfg.truncation.coeff_order == 20
        assert cfg.qi_interpretation == "q"
        assert cfg.include_q9p is False
        assert cfg.order is None

    def test_perm_is_zero_based(self):
        assert _config().perm == [1, 0]

    def test_rejects_repeated_image(self):
        with pytest.raises(ValidationError):
            _config(mu=[1, 1])

    def test_rejects_wrong_length(self):
        with pytest.raises(ValidationError):
            _config(mu=[1, 2, 3])

    def test_rejects_ragged_matrix(self):
        with pytest.raises(ValidationError):
            _config(cartan=[[2, -1], [-1]])

    def test_rejects_empty_matrix(self):
        with pytest.raises(ValidationError):
            _config(cartan=[], mu=[])

    def test_rejects_unknown_qi(self):
        with pytest.raises(ValidationError):
            _config(qi_interpretation="q^2")

    def test_rejects_unknown_key(self):
        with pytest.raises(ValidationError):
            _config(colour="red")

    def test_rejects_negative_window(self):
        with pytest.raises(ValidationError):
            _config(truncation={"mode_window": -2})

    def test_include_q9p_alias(self):
        assert _config(include_Q9p=True).include_q9p is True
        assert _config(include_q9p=True).include_q9p is True

    def test_partial_truncation_fills_defaults(self):
        cfg = _config(truncation={"mode_window": 4})
        assert cfg.truncation.mode_window == 4
        assert cfg.truncation.basis_degree == 3


class TestDigest:
    def test_stable(self):
        assert _config().digest() == _config().digest()
        assert len(_config().digest()) == 64

    def test_tracks_content(self):
        assert _config().digest() != _config(mu=[1, 2]).digest()
        assert _config().digest() != _config(truncation={"mode_window": 4}).digest()

    def test_canonical_json_uses_alias(self):
        data = json.loads(_config().canonical_json())
        assert "include_Q9p" in data
        assert "include_q9p" not in data


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------

class TestRelationReport:
    def test_passed(self):
        assert RelationReport(relation="Q7", status=RelationStatus.PASS).passed
        assert RelationReport(relation="Q1", status=RelationStatus.BY_CONSTRUCTION).passed
        assert RelationReport(relation="Q9p", status=RelationStatus.EMITTED).passed
        assert not RelationReport(relation="Q8", status=RelationStatus.FAIL).passed


class TestRunReport:
    def _report(self):
        witness = Witness(basis="t[0] -> t[1]", exponents=["1/2", "-1"], lhs="1", rhs="0")
        return RunReport(
            config_digest="0" * 64,
            command=Command.VERIFY,
            config_name="A1",
            qi_interpretation="q",
            truncation=TruncationConfig(),
            passed=False,
            results=[RelationReport(relation="Q8", instance=[1, 1], sign=1,
                                    status=RelationStatus.FAIL, first_failure=witness)],
        )

    def test_to_json_sorted_with_newline(self):
        text = self._report().to_json()
        assert text.endswith("}\n")
        data = json.loads(text)
        assert list(data) == sorted(data)
        assert data["results"][0]["status"] == "fail"
        assert data["command"] == "verify"

    def test_to_json_deterministic(self):
        assert self._report().to_json() == self._report().to_json()

    def test_versions_from_settings(self):
        report = self._report()
        assert report.schema_version == "1"
        assert report.tool_version == "1.0.0"
