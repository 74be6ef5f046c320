"""Classify tool for fibers of a constructed bundle."""

import json
import logging
from typing import Any, Dict

from ..cubic_bundle import FiberKind, classify_fiber
from ..exact_field import format_scalar, parse_scalar

logger = logging.getLogger(__name__)


class ClassifyTool:
    """Tool for classifying fibers as nodal or cuspidal."""

    def __init__(self, session):
        """Initialize with scenario session."""
        self.session = session

    async def handle(self, arguments: Dict[str, Any]) -> str:
        """Handle classify tool requests.

        Args:
            arguments: Tool arguments containing action (classify, cusps)

        Returns:
            JSON string with results
        """
        action = arguments.get("action")
        if not action:
            return json.dumps({"error": "Action parameter is required"})

        try:
            if action == "classify":
                return await self._classify(arguments)
            elif action == "cusps":
                return await self._cusps(arguments)
            else:
                return json.dumps({"error": f"Unknown action: {action}"})

        except Exception as e:
            logger.error(f"Error in classify tool: {e}")
            return json.dumps({"error": str(e), "kind": type(e).__name__})

    async def _classify(self, arguments: Dict[str, Any]) -> str:
        fiber = arguments.get("fiber")
        if fiber is None:
            return json.dumps({"error": "fiber is required for classify action"})

        classified = classify_fiber(self.session.descriptor, parse_scalar(fiber))
        result = {
            "fiber": format_scalar(classified.mu),
            "kind": classified.kind.value,
            "g": format_scalar(classified.c),
        }
        return json.dumps(result, ensure_ascii=False)

    async def _cusps(self, arguments: Dict[str, Any]) -> str:
        """Classify every point of the divisor supports; all of them should be cuspidal."""
        descriptor = self.session.descriptor
        points = [p for divisor in self.session.input.divisors for p in divisor.support]
        kinds = [classify_fiber(descriptor, p).kind for p in points]
        result = {
            "points": [format_scalar(p) for p in points],
            "kinds": [kind.value for kind in kinds],
            "allCuspidal": all(kind is FiberKind.CUSPIDAL for kind in kinds),
        }
        return json.dumps(result, ensure_ascii=False)
