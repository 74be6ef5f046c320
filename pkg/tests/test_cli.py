import asyncio
import json

import pytest

from cubic_bundles.cli import EXIT_FINDINGS, EXIT_OK, EXIT_VALIDATION, async_main, build_parser
from cubic_bundles.runner import REPORT_SCHEMA, parse_report


def cli(*argv) -> int:
    return asyncio.run(async_main([str(a) for a in argv]))


class TestRun:
    def test_structured_report(self, scenario_dir, capsys):
        assert cli("run", scenario_dir / "two-sections.json", "--format", "structured") == EXIT_OK
        report = parse_report(capsys.readouterr().out)
        assert report.scenario == "two-sections"
        assert report.schema_version == REPORT_SCHEMA

    def test_text_is_the_default(self, scenario_dir, capsys, monkeypatch):
        monkeypatch.delenv("CUBIC_BUNDLES_REPORT_FORMAT", raising=False)
        assert cli("run", scenario_dir / "empty.json") == EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith("cubic-bundles report: empty")
        assert "no requests" in out

    def test_format_from_environment(self, scenario_dir, capsys, monkeypatch):
        monkeypatch.setenv("CUBIC_BUNDLES_REPORT_FORMAT", "structured")
        assert cli("run", scenario_dir / "ratio-two.json") == EXIT_OK
        assert json.loads(capsys.readouterr().out)["scenario"] == "ratio-two"

    def test_out_file(self, scenario_dir, tmp_path, capsys):
        target = tmp_path / "report.json"
        assert cli("--format", "structured", "run", scenario_dir / "cube-roots.json", "--out", target) == EXIT_OK
        assert capsys.readouterr().out == ""
        assert parse_report(target.read_text()).scenario == "cube-roots"

    def test_invalid_scenario(self, tmp_path, capsys):
        broken = tmp_path / "broken.json"
        broken.write_text('{"name": "broken", "input": [')
        assert cli("run", broken) == EXIT_VALIDATION
        assert capsys.readouterr().out == ""

    def test_failed_request(self, tmp_path, capsys):
        path = tmp_path / "cusp.json"
        path.write_text(
            json.dumps(
                {
                    "name": "cusp",
                    "input": {"constants": [1, -1], "divisors": [[{"point": 0, "mult": 1}], []]},
                    "requests": [{"task": "osculate", "k": 2, "fiber": 0}],
                }
            )
        )
        assert cli("run", path) == EXIT_FINDINGS
        assert "ERROR in osculate" in capsys.readouterr().out


class TestSingleCommands:
    def test_decide(self, scenario_dir, capsys):
        assert cli("decide", scenario_dir / "two-sections.json") == EXIT_OK
        assert "projective: true" in capsys.readouterr().out

    def test_classify(self, scenario_dir, capsys):
        assert cli("classify", "--fiber", "0", scenario_dir / "two-sections.json") == EXIT_OK
        assert '"cuspidal"' in capsys.readouterr().out

    def test_osculate_needs_the_roots(self, scenario_dir, capsys):
        assert cli("osculate", "--k", "3", "--fiber", "5", scenario_dir / "two-sections.json") == EXIT_FINDINGS
        assert "InsufficientConductorError" in capsys.readouterr().out

    def test_cartier(self, capsys):
        assert cli("cartier", "--xi", "2", "--k", "6", "--m", "1") == EXIT_OK
        assert "member: false" in capsys.readouterr().out

    def test_cartier_with_root_of_unity(self, capsys):
        xi = json.dumps({"conductor": 3, "coeffs": ["0", "1"]})
        assert cli("--format", "structured", "cartier", "--xi", xi, "--k", "3", "--m", "2") == EXIT_OK
        report = parse_report(capsys.readouterr().out)
        assert report.conductor == 3
        assert report.results[0].result["member"] is True

    def test_cartier_trivial_ratio(self, capsys):
        assert cli("cartier", "--xi", "1", "--k", "2", "--m", "1") == EXIT_FINDINGS
        assert "TrivialRatioError" in capsys.readouterr().out


class TestParser:
    @pytest.mark.parametrize(
        "argv",
        [
            ["cartier", "--xi", "2", "--k", "0", "--m", "1"],
            ["cartier", "--xi", "two", "--k", "1", "--m", "1"],
            ["osculate", "--k", "2", "scenario.json"],
            ["run"],
        ],
    )
    def test_rejects(self, argv):
        with pytest.raises(SystemExit):
            build_parser().parse_args(argv)

    def test_cartier_limit(self):
        args = build_parser().parse_args(["--cartier-limit", "9", "cartier", "--xi", "1/2", "--k", "2", "--m", "1"])
        assert args.cartier_limit == 9
        assert args.xi == "1/2"
