"""Scenario runner and report rendering."""

import asyncio
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import ReportFormatError
from .scenario import RequestModel, Scenario, load_scenario
from .session import ScenarioSession
from .tools import CartierTool, ClassifyTool, ConstructTool, DecideTool, OsculateTool, RoundtripTool

logger = logging.getLogger(__name__)

REPORT_SCHEMA = "cubic-bundles/report@1"

ReportFormat = Literal["text", "structured"]


class RequestResult(BaseModel):
    """Outcome of one request: a result payload or a structured error."""

    model_config = ConfigDict(extra="forbid")

    tag: str
    params: Dict[str, Any] = Field(default_factory=dict)
    result: Optional[Dict[str, Any]] = None
    error: Optional[str] = None
    kind: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None


class Report(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    schema_version: str = Field(default=REPORT_SCHEMA, alias="schema")
    scenario: str
    conductor: int
    results: List[RequestResult] = Field(default_factory=list)
    validation_log: List[str] = Field(default_factory=list)
    findings: List[str] = Field(default_factory=list)

    @property
    def has_errors(self) -> bool:
        return any(r.failed for r in self.results)


class ScenarioRunner:
    """Runs the requests of one scenario against a shared session."""

    def __init__(self, session: ScenarioSession):
        self.session = session

    async def call(self, request: RequestModel) -> RequestResult:
        """Dispatch one request to its tool.

        Args:
            request: Validated request with its task tag

        Returns:
            RequestResult carrying either the tool's payload or its error
        """
        args: Dict[str, Any] = request.params()
        tag = request.task
        logger.debug(f"dispatching {tag} {args}")

        try:
            if tag == "construct":
                tool = ConstructTool(self.session)
                output = await tool.handle({**args, "action": "construct"})
            elif tag == "recover":
                tool = ConstructTool(self.session)
                output = await tool.handle({**args, "action": "recover"})
            elif tag == "decide":
                tool = DecideTool(self.session)
                output = await tool.handle({**args, "action": "decide"})
            elif tag == "roundtrip":
                tool = RoundtripTool(self.session)
                output = await tool.handle({**args, "action": "roundtrip"})
            elif tag == "osculate":
                tool = OsculateTool(self.session)
                output = await tool.handle({**args, "action": "points"})
            elif tag == "cartier":
                tool = CartierTool(self.session)
                action = "reduce" if "xi" in args else "local"
                output = await tool.handle({**args, "action": action})
            elif tag == "classify":
                tool = ClassifyTool(self.session)
                output = await tool.handle({**args, "action": "classify"})
            else:
                output = json.dumps({"error": f"Unknown request: {tag}"})
        except Exception as e:
            logger.error(f"Error running {tag}: {e}")
            output = json.dumps({"error": str(e), "kind": type(e).__name__})

        payload = json.loads(output)
        if "error" in payload:
            return RequestResult(tag=tag, params=args, error=payload["error"], kind=payload.get("kind"))
        return RequestResult(tag=tag, params=args, result=payload)

    async def run(self, scenario: Scenario) -> Report:
        logger.info(f"running scenario '{scenario.name}' with {len(scenario.requests)} requests")
        results = await asyncio.gather(*(self.call(r) for r in scenario.requests))

        log = [
            f"scenario '{scenario.name}' validated",
            f"conductor {scenario.conductor}, {scenario.input.n} osculating constants",
            f"divisor degrees {[d.degree for d in scenario.input.divisors]}",
        ]
        findings: List[str] = []
        for result in results:
            if result.result and result.result.get("findings"):
                findings.extend(f for f in result.result["findings"] if f not in findings)
            if result.kind == "DescriptorInvariantError":
                findings.append(f"{result.tag}: {result.error}")
        logger.info(f"scenario '{scenario.name}' finished with {len(findings)} findings")
        return Report(
            scenario=scenario.name,
            conductor=scenario.conductor,
            results=list(results),
            validation_log=log,
            findings=findings,
        )


async def run_scenario(path: Union[str, Path], cartier_limit: Optional[int] = None) -> Report:
    """Load, validate and run a scenario file.

    Raises:
        ScenarioValidationError: when the file does not parse or validate
    """
    scenario = load_scenario(path)
    runner = ScenarioRunner(ScenarioSession(scenario, cartier_limit))
    return await runner.run(scenario)


def _render_text(report: Report) -> str:
    lines = [
        f"cubic-bundles report: {report.scenario}",
        f"schema {report.schema_version}, conductor {report.conductor}",
        "",
    ]
    lines += [f"  - {entry}" for entry in report.validation_log]
    lines.append("")

    if not report.results:
        lines.append("no requests")
    for index, result in enumerate(report.results, start=1):
        params = " ".join(f"{k}={json.dumps(v, sort_keys=True)}" for k, v in sorted(result.params.items()))
        lines.append(f"[{index}] {result.tag} {params}".rstrip())
        if result.failed:
            lines.append(f"  ERROR in {result.tag} ({result.kind or 'error'}): {result.error}")
            continue
        for key in sorted(result.result):
            lines.append(f"  {key}: {json.dumps(result.result[key], sort_keys=True, ensure_ascii=False)}")

    if report.findings:
        lines.append("")
        lines.append("findings:")
        lines += [f"  ! {finding}" for finding in report.findings]
    return "\n".join(lines) + "\n"


def render_report(report: Report, fmt: ReportFormat = "text") -> str:
    """Render a report.

    Args:
        report: Report to render
        fmt: "text" for people, "structured" for the JSON that parse_report reads

    Returns:
        The rendered document
    """
    if fmt == "structured":
        payload = report.model_dump(by_alias=True)
        return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if fmt == "text":
        return _render_text(report)
    raise ValueError(f"Unknown report format: {fmt}")


def parse_report(text: str) -> Report:
    try:
        report = Report.model_validate(json.loads(text))
    except (json.JSONDecodeError, ValidationError) as e:
        raise ReportFormatError(f"not a {REPORT_SCHEMA} document: {e}") from e
    if report.schema_version != REPORT_SCHEMA:
        raise ReportFormatError(f"unsupported report schema {report.schema_version!r}")
    return report
