"""Decide tool for the projectivity criterion."""

import json
import logging
from typing import Any, Dict

from ..exact_field import format_scalar
from ..projectivity import normalize_configuration
from ..scenario import verdict_payload

logger = logging.getLogger(__name__)


class DecideTool:
    """Tool for deciding projectivity of a construction."""

    def __init__(self, session):
        self.session = session

    async def handle(self, arguments: Dict[str, Any]) -> str:
        action = arguments.get("action")
        if not action:
            return json.dumps({"error": "Action parameter is required"})

        try:
            if action == "decide":
                return await self._decide(arguments)
            elif action == "normalize":
                return await self._normalize(arguments)
            else:
                return json.dumps({"error": f"Unknown action: {action}"})

        except Exception as e:
            logger.error(f"Error in decide tool: {e}")
            return json.dumps({"error": str(e), "kind": type(e).__name__})

    async def _decide(self, arguments: Dict[str, Any]) -> str:
        return json.dumps(verdict_payload(self.session.verdict), ensure_ascii=False)

    async def _normalize(self, arguments: Dict[str, Any]) -> str:
        """Constants after sending c0 to 0 and cInf to infinity."""
        normalized = normalize_configuration(self.session.input)
        result = {
            "values": [format_scalar(v) for v in normalized.values],
            "ratios": [format_scalar(r) for r in normalized.ratios],
        }
        return json.dumps(result, ensure_ascii=False)
