import asyncio
import json

import pytest

from cubic_bundles.errors import ReportFormatError, ScenarioValidationError
from cubic_bundles.pipeline import construct_bundle, construction_data, trafo_to_trivial
from cubic_bundles.runner import (
    REPORT_SCHEMA,
    Report,
    ScenarioRunner,
    parse_report,
    render_report,
    run_scenario,
)
from cubic_bundles.scenario import (
    RequestModel,
    descriptor_payload,
    elt_payload,
    load_scenario,
    locate,
    parse_descriptor,
    parse_elt,
    parse_scenario,
)
from cubic_bundles.session import ScenarioSession
from cubic_bundles.tools import CartierTool, ClassifyTool, DecideTool, OsculateTool

TWO_SECTIONS = {
    "name": "inline",
    "input": {
        "constants": [1, -1],
        "divisors": [[{"point": 0, "mult": 1}], [{"point": 1, "mult": 1}]],
    },
    "requests": [],
}


def scenario_text(**changes) -> str:
    payload = json.loads(json.dumps(TWO_SECTIONS))
    payload.update(changes)
    return json.dumps(payload)


def run(path):
    return asyncio.run(run_scenario(path))


def by_tag(report: Report, tag: str):
    return [r for r in report.results if r.tag == tag]


class TestScenarioParsing:
    def test_bundled_scenarios_load(self, scenario_dir):
        for path in sorted(scenario_dir.glob("*.json")):
            scenario = load_scenario(path)
            assert scenario.source == str(path)

    def test_defaults(self):
        scenario = parse_scenario(scenario_text())
        assert scenario.conductor == 1
        assert scenario.input.c_inf.is_infinity
        assert scenario.requests == ()

    def test_bare_task_names(self):
        scenario = parse_scenario(scenario_text(requests=["decide", {"task": "classify", "fiber": 2}]))
        assert scenario.requests[0] == RequestModel(task="decide")
        assert scenario.requests[1].params() == {"fiber": 2}

    def test_malformed_json(self):
        with pytest.raises(ScenarioValidationError) as caught:
            parse_scenario('{\n  "name": "broken",\n  "input": }')
        assert caught.value.line == 3
        assert caught.value.column is not None

    def test_schema_path(self):
        payload = json.loads(scenario_text())
        del payload["input"]["constants"]
        with pytest.raises(ScenarioValidationError) as caught:
            parse_scenario(json.dumps(payload))
        assert caught.value.path == "input.constants"

    def test_unknown_field(self):
        with pytest.raises(ScenarioValidationError) as caught:
            parse_scenario(scenario_text(colour="blue"))
        assert caught.value.path == "colour"

    def test_schema_errors_report_a_line(self):
        payload = json.loads(scenario_text(colour="blue"))
        text = json.dumps(payload, indent=2)
        with pytest.raises(ScenarioValidationError) as caught:
            parse_scenario(text)
        expected = next(i for i, line in enumerate(text.splitlines(), 1) if '"colour"' in line)
        assert caught.value.path == "colour"
        assert caught.value.line == expected
        assert caught.value.column == 3
        assert f"line {expected}" in str(caught.value)

    def test_missing_field_points_at_its_parent(self):
        payload = json.loads(scenario_text())
        del payload["input"]["constants"]
        text = json.dumps(payload, indent=2)
        with pytest.raises(ScenarioValidationError) as caught:
            parse_scenario(text)
        assert caught.value.path == "input.constants"
        assert (caught.value.line, caught.value.column) == (3, 3)

    def test_value_errors_report_a_line(self):
        text = (
            '{\n  "name": "x",\n  "input": {\n'
            '    "constants": [1, {"conductor": 4, "coeffs": ["0", "1"]}],\n'
            '    "divisors": [[], []]\n  }\n}'
        )
        with pytest.raises(ScenarioValidationError) as caught:
            parse_scenario(text)
        assert caught.value.path == "input.constants.1"
        assert caught.value.line == 4
        assert caught.value.column == text.splitlines()[3].index("{") + 1

    def test_locate(self):
        text = '{"a": [10, {"b": 2}], "c": {}}'
        assert locate(text, ["a", 1, "b"]) == (1, text.index('"b"') + 1)
        assert locate(text, ["a", 0]) == (1, text.index("10") + 1)
        assert locate(text, ["c", "missing"]) == (1, text.index('"c"') + 1)
        assert locate(text, ["a", 5]) == (1, text.index('"a"') + 1)
        assert locate(text, ["a", 1, "RequestModel", "k"]) == (1, text.index('{"b"') + 1)
        assert locate('\n\n  {"x": 1}', ["x"]) == (3, 4)

    def test_value_outside_the_field(self):
        text = scenario_text(
            input={"constants": [{"conductor": 4, "coeffs": ["0", "1"]}], "divisors": [[]]},
        )
        with pytest.raises(ScenarioValidationError) as caught:
            parse_scenario(text)
        assert caught.value.path == "input.constants.0"

    def test_osculate_needs_parameters(self):
        with pytest.raises(ScenarioValidationError) as caught:
            parse_scenario(scenario_text(requests=[{"task": "osculate", "k": 2}]))
        assert caught.value.path == "requests.0"

    def test_degenerate_input(self):
        with pytest.raises(ScenarioValidationError):
            parse_scenario(scenario_text(input={"constants": [0], "divisors": [[]]}))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioValidationError):
            load_scenario(tmp_path / "absent.json")


class TestPayloads:
    def test_descriptor_text_form(self, cube_roots_input):
        desc = construct_bundle(cube_roots_input)
        text = json.dumps(descriptor_payload(desc), sort_keys=True)
        assert parse_descriptor(json.loads(text)) == desc

    def test_elt_text_form(self, two_sections_input):
        data, _ = construction_data(two_sections_input)
        trivial = trafo_to_trivial(construct_bundle(two_sections_input))
        for pairs in (data, trivial.data):
            assert parse_elt(json.loads(json.dumps(elt_payload(pairs)))) == pairs


class TestTools:
    def test_missing_action(self):
        output = json.loads(asyncio.run(DecideTool(ScenarioSession(None)).handle({})))
        assert output == {"error": "Action parameter is required"}

    def test_unknown_action(self):
        output = json.loads(asyncio.run(CartierTool(ScenarioSession(None)).handle({"action": "guess"})))
        assert output["error"].startswith("Unknown action")

    def test_cartier_without_scenario(self):
        tool = CartierTool(ScenarioSession(None))
        output = json.loads(asyncio.run(tool.handle({"action": "reduce", "xi": -1, "k": 2, "m": 1})))
        assert output["member"] is True
        output = json.loads(asyncio.run(tool.handle({"action": "minimal", "xi": "3/2", "m": 1})))
        assert output["k"] is None

    def test_errors_carry_their_kind(self, scenario_dir):
        session = ScenarioSession(load_scenario(scenario_dir / "two-sections.json"))
        output = json.loads(asyncio.run(OsculateTool(session).handle({"action": "profile", "fiber": 0})))
        assert output["kind"] == "CuspidalFiberError"

    def test_classify_cusps(self, scenario_dir):
        session = ScenarioSession(load_scenario(scenario_dir / "two-sections.json"))
        output = json.loads(asyncio.run(ClassifyTool(session).handle({"action": "cusps"})))
        assert output["allCuspidal"] is True
        assert output["kinds"] == ["cuspidal", "cuspidal"]


class TestRunner:
    def test_two_sections(self, scenario_dir):
        report = run(scenario_dir / "two-sections.json")
        assert not report.has_errors
        assert report.findings == []
        assert by_tag(report, "construct")[0].result["descriptor"]
        assert by_tag(report, "decide")[0].result["projective"] is True
        assert by_tag(report, "roundtrip")[0].result["roundtrip"] is True
        assert by_tag(report, "recover")[0].result["divisorsMatch"] is True
        kinds = [r.result["kind"] for r in by_tag(report, "classify")]
        assert kinds == ["cuspidal", "nodal"]
        assert by_tag(report, "osculate")[0].result["verified"] is True

    def test_cube_roots(self, scenario_dir):
        report = run(scenario_dir / "cube-roots.json")
        assert not report.has_errors
        roundtrip = by_tag(report, "roundtrip")[0].result
        assert roundtrip["descriptorRoundtrip"] is True
        assert roundtrip["roundtrip"] is None and roundtrip["hypothesisViolations"]
        assert by_tag(report, "decide")[0].result["witness"]["orders"] == [1, 3, 3]

    def test_ratio_two(self, scenario_dir):
        report = run(scenario_dir / "ratio-two.json")
        decide = by_tag(report, "decide")[0].result
        assert decide["projective"] is False
        assert decide["witness"]["failing_index"] == 2
        cartier = by_tag(report, "cartier")[0].result
        assert cartier["member"] is False

    def test_empty(self, scenario_dir):
        report = run(scenario_dir / "empty.json")
        assert report.results == []
        assert "no requests" in render_report(report, "text")

    def test_errors_stay_with_their_request(self, tmp_path):
        path = tmp_path / "mixed.json"
        path.write_text(
            scenario_text(requests=["decide", {"task": "osculate", "k": 2, "fiber": 0}, {"task": "classify", "fiber": 5}])
        )
        report = run(path)
        assert [r.failed for r in report.results] == [False, True, False]
        assert report.results[1].kind == "CuspidalFiberError"
        assert "ERROR in osculate (CuspidalFiberError)" in render_report(report, "text")

    def test_call_dispatches_cartier_by_arguments(self, scenario_dir):
        runner = ScenarioRunner(ScenarioSession(load_scenario(scenario_dir / "two-sections.json")))
        local = asyncio.run(runner.call(RequestModel(task="cartier")))
        assert "certificates" in local.result
        reduced = asyncio.run(runner.call(RequestModel(task="cartier", xi=-1, k=2, m=1)))
        assert reduced.result["member"] is True


class TestReports:
    def test_text_layout(self, scenario_dir):
        text = render_report(run(scenario_dir / "two-sections.json"), "text")
        assert text.startswith("cubic-bundles report: two-sections\n")
        assert f"schema {REPORT_SCHEMA}" in text
        assert "[2] decide" in text

    def test_structured(self, scenario_dir):
        output = render_report(run(scenario_dir / "two-sections.json"), "structured")
        payload = json.loads(output)
        assert payload["schema"] == REPORT_SCHEMA
        assert '"projective": true' in output

    @pytest.mark.parametrize("name", ["two-sections", "cube-roots", "ratio-two"])
    def test_deterministic(self, scenario_dir, name):
        first = render_report(run(scenario_dir / f"{name}.json"), "structured")
        second = render_report(run(scenario_dir / f"{name}.json"), "structured")
        assert first == second

    def test_parse_report(self, scenario_dir):
        report = run(scenario_dir / "cube-roots.json")
        assert parse_report(render_report(report, "structured")) == report

    def test_parse_rejects_other_documents(self):
        with pytest.raises(ReportFormatError):
            parse_report("not json")
        with pytest.raises(ReportFormatError):
            parse_report(json.dumps({"scenario": "x"}))
        with pytest.raises(ReportFormatError):
            parse_report(json.dumps({"schema": "other@2", "scenario": "x", "conductor": 1}))

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            render_report(Report(scenario="x", conductor=1), "yaml")
