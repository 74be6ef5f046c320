"""Scenario files and the JSON forms of every exchanged object."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, ValidationError, field_validator

from .cubic_bundle import BundleDescriptor, GmPoint
from .errors import CubicBundleError, ScenarioValidationError
from .exact_field import Polynomial, ProjValue, Scalar, format_scalar, parse_scalar
from .projectivity import CartierCertificate, ConstructionInput, ProjectivityVerdict
from .ruled_surface import CurveDivisor, EltData, Section

logger = logging.getLogger(__name__)

Task = Literal["construct", "decide", "roundtrip", "recover", "osculate", "cartier", "classify"]


# JSON forms

def proj_payload(value: ProjValue) -> Dict[str, Any]:
    return {"u": format_scalar(value.u), "v": format_scalar(value.v)}


def parse_proj(payload: Any) -> ProjValue:
    """A ProjValue from {"u", "v"}, the string "inf", or an affine scalar."""
    if isinstance(payload, str) and payload.strip().lower() in ("inf", "infinity", "oo"):
        return ProjValue.infinity()
    if isinstance(payload, dict) and "u" in payload:
        return ProjValue(parse_scalar(payload["u"]), parse_scalar(payload.get("v", 1)))
    return ProjValue.of(parse_scalar(payload))


def polynomial_payload(p: Polynomial) -> List[Dict[str, Any]]:
    return [format_scalar(c) for c in p.coeffs]


def parse_polynomial(payload: Any) -> Polynomial:
    if not isinstance(payload, list):
        payload = [payload]
    return Polynomial(tuple(parse_scalar(c) for c in payload))


def section_payload(section: Section) -> Dict[str, Any]:
    return {"a": polynomial_payload(section.a), "b": polynomial_payload(section.b)}


def parse_section(payload: Dict[str, Any]) -> Section:
    return Section(parse_polynomial(payload["a"]), parse_polynomial(payload["b"]))


def divisor_payload(divisor: CurveDivisor) -> List[Dict[str, Any]]:
    return [{"point": format_scalar(p), "mult": m} for p, m in divisor]


def parse_divisor(payload: Any) -> CurveDivisor:
    return CurveDivisor(tuple((parse_scalar(e["point"]), int(e["mult"])) for e in payload or ()))


def elt_payload(data: EltData) -> List[Dict[str, Any]]:
    return [{"section": section_payload(s), "divisor": divisor_payload(d)} for s, d in data]


def parse_elt(payload: List[Dict[str, Any]]) -> EltData:
    return EltData(tuple((parse_section(e["section"]), parse_divisor(e["divisor"])) for e in payload))


def descriptor_payload(desc: BundleDescriptor) -> Dict[str, Any]:
    return {
        "sigma0": section_payload(desc.sigma0),
        "sigmaInf": section_payload(desc.sigma_inf),
        "osculating": [section_payload(s) for s in desc.osculating],
        "cusp_divisor": divisor_payload(desc.cusp_divisor),
        "k": desc.relative_degree,
    }


def parse_descriptor(payload: Dict[str, Any]) -> BundleDescriptor:
    return BundleDescriptor(
        sigma0=parse_section(payload["sigma0"]),
        sigma_inf=parse_section(payload["sigmaInf"]),
        osculating=tuple(parse_section(s) for s in payload["osculating"]),
        cusp_divisor=parse_divisor(payload["cusp_divisor"]),
        relative_degree=int(payload["k"]),
    )


def input_payload(config: ConstructionInput) -> Dict[str, Any]:
    return {
        "conductor": config.conductor,
        "c0": proj_payload(config.c0),
        "cInf": proj_payload(config.c_inf),
        "constants": [proj_payload(c) for c in config.constants],
        "divisors": [divisor_payload(d) for d in config.divisors],
    }


def verdict_payload(verdict: ProjectivityVerdict) -> Dict[str, Any]:
    if verdict.projective:
        witness: Dict[str, Any] = {"orders": list(verdict.orders)}
    else:
        witness = {"failing_index": verdict.failing_index}
    return {"projective": verdict.projective, "witness": witness}


def certificate_payload(certificate: CartierCertificate) -> Dict[str, Any]:
    return {
        "xi": format_scalar(certificate.xi),
        "k": certificate.k,
        "m": certificate.m,
        "member": certificate.member,
        "oddPart": {"y0": polynomial_payload(certificate.odd_part)},
        "evenPart": polynomial_payload(certificate.even_part),
    }


def gm_payload(points: List[GmPoint]) -> List[Dict[str, Any]]:
    return [format_scalar(p.t) for p in points]


# Scenario schema

class DivisorEntryModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    point: Any
    mult: PositiveInt


class InputModel(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    c0: Any = 0
    c_inf: Any = Field(default="inf", alias="cInf")
    constants: List[Any]
    divisors: List[List[DivisorEntryModel]]


class RequestModel(BaseModel):
    """One request; only the parameters its task uses may be present."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    task: Task
    k: Optional[PositiveInt] = None
    m: Optional[PositiveInt] = None
    xi: Optional[Any] = None
    fiber: Optional[Any] = None

    @field_validator("xi", "fiber")
    @classmethod
    def _scalar_text(cls, value: Any) -> Any:
        if value is not None:
            parse_scalar(value)
        return value

    def params(self) -> Dict[str, Any]:
        return {k: v for k, v in self.model_dump(exclude={"task"}).items() if v is not None}


class ScenarioModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    conductor: PositiveInt = 1
    input: InputModel
    requests: List[Union[Task, RequestModel]] = Field(default_factory=list)


@dataclass(frozen=True)
class Scenario:
    name: str
    input: ConstructionInput
    requests: Tuple[RequestModel, ...]
    source: Optional[str] = None

    @property
    def conductor(self) -> int:
        return self.input.conductor


def _check_expressible(value: Scalar, conductor: int, where: str) -> None:
    if not value.is_rational and math.lcm(2, conductor) % value.conductor:
        raise ScenarioValidationError(
            f"{where} has conductor {value.conductor}, outside Q(zeta_{conductor})", path=where
        )


def _build(model: ScenarioModel) -> Scenario:
    conductor = model.conductor
    try:
        c0 = parse_proj(model.input.c0)
        c_inf = parse_proj(model.input.c_inf)
        constants = [parse_proj(c) for c in model.input.constants]
        divisors = [
            CurveDivisor(tuple((parse_scalar(e.point), e.mult) for e in entries))
            for entries in model.input.divisors
        ]
    except (ValueError, ArithmeticError, CubicBundleError) as e:
        raise ScenarioValidationError(f"invalid input value: {e}", path="input") from e

    for label, value in [("input.c0", c0), ("input.cInf", c_inf)] + [
        (f"input.constants.{i}", c) for i, c in enumerate(constants)
    ]:
        _check_expressible(value.u, conductor, label)
    for i, divisor in enumerate(divisors):
        for point in divisor.support:
            _check_expressible(point, conductor, f"input.divisors.{i}")

    requests = []
    for i, request in enumerate(model.requests):
        if isinstance(request, str):
            request = RequestModel(task=request)
        for key in ("xi", "fiber"):
            raw = getattr(request, key)
            if raw is not None:
                _check_expressible(parse_scalar(raw), conductor, f"requests.{i}.{key}")
        if request.task == "osculate" and (request.k is None or request.fiber is None):
            raise ScenarioValidationError("osculate needs k and fiber", path=f"requests.{i}")
        if request.task == "classify" and request.fiber is None:
            raise ScenarioValidationError("classify needs fiber", path=f"requests.{i}")
        requests.append(request)

    try:
        config = ConstructionInput(
            conductor=conductor, c0=c0, c_inf=c_inf, constants=tuple(constants), divisors=tuple(divisors)
        )
    except CubicBundleError as e:
        raise ScenarioValidationError(str(e), path="input") from e
    return Scenario(name=model.name, input=config, requests=tuple(requests))


def _skip_space(text: str, pos: int) -> int:
    while pos < len(text) and text[pos] in " \t\r\n":
        pos += 1
    return pos


def _member(text: str, pos: int, key: str, decoder: json.JSONDecoder) -> Optional[Tuple[int, int]]:
    """Offsets of the key and of the value of `key` in the object opening at pos."""
    pos = _skip_space(text, pos + 1)
    while pos < len(text) and text[pos] == '"':
        key_pos = pos
        name, pos = decoder.raw_decode(text, pos)
        pos = _skip_space(text, pos)
        if pos >= len(text) or text[pos] != ":":
            return None
        pos = _skip_space(text, pos + 1)
        if name == key:
            return key_pos, pos
        _, pos = decoder.raw_decode(text, pos)
        pos = _skip_space(text, pos)
        if pos >= len(text) or text[pos] != ",":
            return None
        pos = _skip_space(text, pos + 1)
    return None


def _element(text: str, pos: int, index: int, decoder: json.JSONDecoder) -> Optional[Tuple[int, int]]:
    pos = _skip_space(text, pos + 1)
    current = 0
    while pos < len(text) and text[pos] != "]":
        if current == index:
            return pos, pos
        _, pos = decoder.raw_decode(text, pos)
        pos = _skip_space(text, pos)
        if pos >= len(text) or text[pos] != ",":
            return None
        pos = _skip_space(text, pos + 1)
        current += 1
    return None


def locate(text: str, path: Sequence[Union[str, int]]) -> Tuple[int, int]:
    """1-based line and column of the deepest part of path present in the JSON text.

    A key that is absent (a missing field) resolves to its enclosing object;
    steps naming a union branch rather than a JSON member are ignored.
    """
    decoder = json.JSONDecoder()
    pos = found = _skip_space(text, 0)
    for part in path:
        if pos >= len(text):
            break
        try:
            if text[pos] == "{" and isinstance(part, str):
                target = _member(text, pos, part, decoder)
            elif text[pos] == "[" and isinstance(part, int):
                target = _element(text, pos, part, decoder)
            else:
                break
        except json.JSONDecodeError:
            break
        if target is None:
            break
        found, pos = target
    line = text.count("\n", 0, found) + 1
    column = found - (text.rfind("\n", 0, found) + 1) + 1
    return line, column


def _split_path(path: str) -> List[Union[str, int]]:
    return [int(part) if part.isdigit() else part for part in path.split(".")]


def parse_scenario(text: str, source: Optional[str] = None) -> Scenario:
    """Parse and validate scenario JSON.

    Raises:
        ScenarioValidationError: with line/column for syntax errors; schema
            errors carry the dotted path and the line/column where it points
    """
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioValidationError(f"malformed JSON: {e.msg}", line=e.lineno, column=e.colno) from e
    try:
        model = ScenarioModel.model_validate(payload)
    except ValidationError as e:
        first = e.errors()[0]
        path = ".".join(str(part) for part in first["loc"])
        line, column = locate(text, first["loc"])
        raise ScenarioValidationError(first["msg"], line=line, column=column, path=path) from e
    try:
        scenario = _build(model)
    except ScenarioValidationError as e:
        if e.line is not None or not e.path:
            raise
        line, column = locate(text, _split_path(e.path))
        raise ScenarioValidationError(e.message, line=line, column=column, path=e.path) from e
    logger.info(
        f"loaded scenario '{scenario.name}' (conductor {scenario.conductor}, "
        f"{scenario.input.n} constants, {len(scenario.requests)} requests)"
    )
    if source is not None:
        scenario = Scenario(scenario.name, scenario.input, scenario.requests, source)
    return scenario


def load_scenario(path: Union[str, Path]) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioValidationError(f"cannot read {path}: {e.strerror}") from e
    return parse_scenario(text, source=str(path))
