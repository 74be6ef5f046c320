#!/usr/bin/env python3
"""Call a single tool action directly, e.g.

    uv run python run-tool.py cartier --action reduce --xi 2 --k 6 --m 1
    uv run python run-tool.py --scenario scenarios/cube-roots.json osculate --action profile --fiber 5
"""
import argparse
import asyncio
import json

from cubic_bundles.scenario import load_scenario
from cubic_bundles.session import ScenarioSession
from cubic_bundles.tools import (
    CartierTool,
    ClassifyTool,
    ConstructTool,
    DecideTool,
    OsculateTool,
    RoundtripTool,
)

TOOLS = {
    "construct": ConstructTool,
    "decide": DecideTool,
    "roundtrip": RoundtripTool,
    "osculate": OsculateTool,
    "cartier": CartierTool,
    "classify": ClassifyTool,
}


async def run_tool(tool_name, scenario_path, args_dict):
    scenario = load_scenario(scenario_path) if scenario_path else None
    tool = TOOLS[tool_name](ScenarioSession(scenario))
    result = await tool.handle(args_dict)
    print(json.dumps(json.loads(result), indent=2, ensure_ascii=False))


def main():
    parser = argparse.ArgumentParser(description="Run one cubic-bundles tool action")
    parser.add_argument("tool", nargs="?", choices=sorted(TOOLS), help="Tool name to call")
    parser.add_argument(
        "--list-tools",
        dest="list_tools",
        action="store_true",
        help="List available tools and exit",
    )
    parser.add_argument("--scenario", default=None, help="Scenario file the tool works on")
    parser.add_argument(
        "params",
        nargs=argparse.REMAINDER,
        help="Arguments for tool (e.g. --action reduce --xi 1/2 --k 4 --m 1)",
    )
    args = parser.parse_args()

    def coerce_value(raw: str | None):
        if raw is None:
            return None
        text = str(raw)
        # integers and JSON scalar objects; p/q stays a string
        try:
            return json.loads(text)
        except json.JSONDecodeError:
            return text

    params_dict = {}
    it = iter(args.params)
    for k in it:
        if k.startswith("--"):
            params_dict[k[2:]] = coerce_value(next(it, None))

    if args.list_tools:
        for name in sorted(TOOLS):
            print(f" - {name}")
        return

    if args.tool is None:
        parser.error("tool is required unless --list-tools is supplied")

    asyncio.run(run_tool(args.tool, args.scenario, params_dict))


if __name__ == "__main__":
    main()
