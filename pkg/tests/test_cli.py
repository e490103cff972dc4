"""
Unit Tests -- Command Line

Drives main() in-process against the shipped configs and checks exit
statuses, report contents and the report schema.
"""
import json
from pathlib import Path

import jsonschema
import pytest

from taffin.api.commands import (
    EXIT_CONFIG,
    EXIT_FAIL,
    EXIT_PASS,
    CommandRunner,
    config_from_dict,
    orbit_data,
    orbit_from_dict,
    orbit_to_dict,
)
from taffin.engine import distcalc
from taffin.errors import ConfigError, Inapplicable
from taffin.main import build_parser, main

SCHEMA = json.loads((Path(__file__).parent.parent / "schemas" / "report.schema.json").read_text())


def _run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr().out
    return status, out


def _report(capsys, *argv):
    status, out = _run(capsys, *argv)
    return status, json.loads(out)


# ---------------------------------------------------------------------------
# validate / orbits
# ---------------------------------------------------------------------------

class TestValidateCommand:
    def test_twisted_config_passes(self, capsys, shipped_config):
        status, report = _report(capsys, "validate", "-c", shipped_config("a3_flip"))
        assert status == EXIT_PASS
        assert report["data"]["linking"] is True
        assert report["data"]["order"] == 2

    def test_linking_failure(self, capsys, shipped_config):
        status, report = _report(capsys, "validate", "-c", shipped_config("a2_affine_rotation"))
        assert status == EXIT_FAIL
        assert report["passed"] is False
        assert [1, 2] in report["data"]["offending_pairs"]

    def test_order_four_rotation_passes(self, capsys, shipped_config):
        status, report = _report(capsys, "validate", "-c", shipped_config("a3_affine_rotation"))
        assert status == EXIT_PASS
        assert report["data"]["order"] == 4


class TestOrbitsCommand:
    def test_a3_flip_invariants(self, capsys, shipped_config):
        status, report = _report(capsys, "orbits", "-c", shipped_config("a3_flip"))
        assert status == EXIT_PASS
        data = report["data"]
        assert data["d"]["(1,2)"] == 2
        assert data["d_plus"]["2"] == 2
        assert data["representatives"] == [1, 2]
        assert data["folded"] == [["2", "-2"], ["-1", "2"]]

    def test_lemma_counterexample_logged(self, capsys, shipped_config):
        status, report = _report(capsys, "orbits", "-c", shipped_config("a3_affine_rotation"))
        assert status == EXIT_PASS
        assert False in report["data"]["lemma_product_is_minus_one"].values()
        assert any("Orbit-product lemma fails" in n for n in report["discrepancy_log"])

    def test_round_trip(self, a3_flip):
        assert orbit_from_dict(orbit_to_dict(a3_flip)) == a3_flip


# ---------------------------------------------------------------------------
# relations / verify
# ---------------------------------------------------------------------------

class TestRelationsCommand:
    def test_catalog_emitted(self, capsys, shipped_config):
        status, report = _report(capsys, "relations", "-c", shipped_config("a2_flip"))
        assert status == EXIT_PASS
        families = {entry["relation"] for entry in report["data"]["catalog"]}
        assert "Q10" in families
        assert all(r["status"] == "emitted" for r in report["results"])

    def test_linking_failure_reported(self, capsys, shipped_config):
        status, report = _report(capsys, "relations", "-c", shipped_config("a2_affine_rotation"))
        assert status == EXIT_FAIL
        assert "Linking condition" in report["data"]["error"]


class TestVerifyCommand:
    def test_single_family(self, capsys, shipped_config):
        status, report = _report(capsys, "verify", "-c", shipped_config("a1"), "--relations", "Q7",
                                 "--mode-window", "2", "--basis-degree", "1", "--lattice-height", "1")
        assert status == EXIT_PASS
        assert report["truncation"]["mode_window"] == 2
        assert {r["relation"] for r in report["results"]} == {"Q7"}

    def test_mutation_fails(self, capsys, shipped_config):
        status, report = _report(capsys, "verify", "-c", shipped_config("a2_flip"), "--relations", "Q7",
                                 "--mode-window", "2", "--basis-degree", "1", "--lattice-height", "1",
                                 "--mutation", "q7-delta")
        assert status == EXIT_FAIL
        failed = [r for r in report["results"] if r["status"] == "fail"]
        assert failed and failed[0]["first_failure"] is not None

    def test_linking_failure(self, capsys, shipped_config):
        status, report = _report(capsys, "verify", "-c", shipped_config("a2_affine_rotation"))
        assert status == EXIT_FAIL
        assert report["results"] == []


class TestIdentitiesCommand:
    def test_a3_flip_scorecard(self, capsys, shipped_config):
        status, report = _report(capsys, "identities", "-c", shipped_config("a3_flip"), "--coeff-order", "10")
        failed = [r for r in report["identities"] if not r["passed"]]
        assert status == EXIT_PASS, failed
        assert report["passed"] is True
        jsonschema.validate(report, SCHEMA)
        names = {r["name"] for r in report["identities"]}
        assert {"cgjt", "ps0", "qbinom_products", "delta_prop(1,1)", "delta_prop(2,2)"} <= names
        # d_ii = 0 for both representatives
        assert not any(n.startswith("serre_scalar") for n in names)

    def test_serre_rows(self, capsys, shipped_config):
        status, report = _report(capsys, "identities", "-c", shipped_config("a2_flip"), "--coeff-order", "10")
        assert status == EXIT_PASS
        jsonschema.validate(report, SCHEMA)
        rows = {r["name"]: r for r in report["identities"] if r["name"].startswith("serre_scalar")}
        assert set(rows) == {"serre_scalar(1,+)", "serre_scalar(1,-)"}
        assert all(r["passed"] for r in rows.values())

    def test_inapplicable_serre_is_not_a_pass(self, monkeypatch, a2_flip_config):
        def inapplicable(d_i, d_ii, sign):
            raise Inapplicable(f"Serre scalar needs d_i | d_ii, got d_i={d_i}, d_ii={d_ii}")

        monkeypatch.setattr(distcalc, "check_serre_scalar", inapplicable)
        a2_flip_config.truncation.coeff_order = 6
        report = CommandRunner(a2_flip_config).run("identities")
        assert report.passed is False
        rows = [r for r in report.identities if r.name.startswith("serre_scalar")]
        assert [r.name for r in rows] == ["serre_scalar(1,+)", "serre_scalar(1,-)"]
        assert all(not r.passed for r in rows)
        assert all("d_i | d_ii" in r.detail for r in rows)

    @pytest.mark.slow
    def test_default_order(self, capsys, shipped_config):
        status, report = _report(capsys, "identities", "-c", shipped_config("a3_flip"))
        assert status == EXIT_PASS, [r for r in report["identities"] if not r["passed"]]
        jsonschema.validate(report, SCHEMA)


# ---------------------------------------------------------------------------
# Configuration errors
# ---------------------------------------------------------------------------

class TestConfigErrors:
    def test_bad_permutation(self, capsys, config_file):
        path = config_file({"cartan": [[2, -1], [-1, 2]], "mu": [1, 1]})
        status = main(["validate", "-c", path])
        captured = capsys.readouterr()
        assert status == EXIT_CONFIG
        assert captured.out == ""
        assert "[CONFIG]" in captured.err

    def test_not_an_automorphism(self, capsys, config_file):
        path = config_file({"cartan": [[2, -1, 0], [-1, 2, -1], [0, -1, 2]], "mu": [2, 1, 3]})
        assert main(["validate", "-c", path]) == EXIT_CONFIG

    def test_non_simply_laced(self, config_file):
        path = config_file({"cartan": [[2, -2], [-1, 2]], "mu": [1, 2]})
        assert main(["validate", "-c", path]) == EXIT_CONFIG

    def test_missing_file(self, tmp_path):
        assert main(["validate", "-c", str(tmp_path / "nope.json")]) == EXIT_CONFIG

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{\"cartan\": [[2]", encoding="utf-8")
        assert main(["validate", "-c", str(path)]) == EXIT_CONFIG

    def test_unknown_relation(self, shipped_config):
        assert main(["verify", "-c", shipped_config("a1"), "--relations", "Q99"]) == EXIT_CONFIG

    def test_negative_override(self, shipped_config):
        assert main(["verify", "-c", shipped_config("a1"), "--mode-window", "-2"]) == EXIT_CONFIG

    def test_declared_order_mismatch(self, config_file):
        path = config_file({"cartan": [[2, -1], [-1, 2]], "mu": [2, 1], "order": 3})
        assert main(["validate", "-c", path]) == EXIT_CONFIG

    def test_error_carries_field(self):
        with pytest.raises(ConfigError) as e:
            config_from_dict({"cartan": [[2]], "mu": [1], "qi_interpretation": "q^2"})
        assert e.value.field == "qi_interpretation"

    def test_unknown_command(self, a2_flip_config):
        with pytest.raises(ConfigError):
            CommandRunner(a2_flip_config).run("fold")

    def test_orbit_data_wraps_engine_errors(self):
        cfg = config_from_dict({"cartan": [[2, -1, 0], [-1, 2, -1], [0, -1, 2]], "mu": [2, 1, 3]})
        with pytest.raises(ConfigError):
            orbit_data(cfg)


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

class TestOutput:
    def test_out_file(self, capsys, tmp_path, shipped_config):
        target = tmp_path / "report.json"
        status = main(["validate", "-c", shipped_config("a2_flip"), "--out", str(target)])
        assert status == EXIT_PASS
        report = json.loads(target.read_text(encoding="utf-8"))
        assert report["command"] == "validate"
        # log lines move to stdout when the report goes to a file
        assert "[CONFIG]" in capsys.readouterr().out

    def test_text_output(self, capsys, shipped_config):
        status, out = _run(capsys, "orbits", "-c", shipped_config("a2_flip"), "--emit", "text")
        assert status == EXIT_PASS
        assert out.startswith("orbits A2-flip [PASS]")
        assert "known discrepancies" in out

    def test_deterministic(self, capsys, shipped_config):
        _, first = _run(capsys, "relations", "-c", shipped_config("a3_flip"))
        _, second = _run(capsys, "relations", "-c", shipped_config("a3_flip"))
        assert first == second

    @pytest.mark.parametrize("command,config", [
        ("validate", "a2_affine_rotation"),
        ("orbits", "a3_flip"),
        ("relations", "a2_flip"),
    ])
    def test_schema(self, capsys, shipped_config, command, config):
        _, report = _report(capsys, command, "-c", shipped_config(config))
        jsonschema.validate(report, SCHEMA)

    def test_verify_schema(self, capsys, shipped_config):
        _, report = _report(capsys, "verify", "-c", shipped_config("a2_flip"), "--relations", "Q1,Q7",
                            "--mode-window", "2", "--basis-degree", "1", "--lattice-height", "1")
        jsonschema.validate(report, SCHEMA)
        assert report["results"][0]["status"] == "by-construction"

    def test_parser_requires_config(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["validate"])

    def test_parser_rejects_unknown_command(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["fold", "-c", "x.json"])
