"""Roundtrip tool: elementary transformations and their inverses."""

import json
import logging
from typing import Any, Dict

from ..exact_field import format_scalar
from ..pipeline import trafo_to_trivial
from ..ruled_surface import elt_composite, inverse_elt_data, inverse_hypothesis_violations, roundtrip_verify
from ..scenario import elt_payload, section_payload

logger = logging.getLogger(__name__)


class RoundtripTool:
    """Tool for checking that inverse transformation data undoes the construction."""

    def __init__(self, session):
        """Initialize with scenario session."""
        self.session = session

    async def handle(self, arguments: Dict[str, Any]) -> str:
        """Handle roundtrip tool requests.

        Args:
            arguments: Tool arguments containing action (roundtrip, inverse)

        Returns:
            JSON string with results
        """
        action = arguments.get("action")
        if not action:
            return json.dumps({"error": "Action parameter is required"})

        try:
            if action == "roundtrip":
                return await self._roundtrip(arguments)
            elif action == "inverse":
                return await self._inverse(arguments)
            else:
                return json.dumps({"error": f"Unknown action: {action}"})

        except Exception as e:
            logger.error(f"Error in roundtrip tool: {e}")
            return json.dumps({"error": str(e), "kind": type(e).__name__})

    async def _roundtrip(self, arguments: Dict[str, Any]) -> str:
        """Round trip of the construction data and of the trivializing transformation.

        With three or more osculating sections every other section avoids sigma_i
        over a point of D_i, so the construction data has no unique inverse partner;
        only the descriptor-level round trip is checked then.
        """
        data = self.session.elt_data
        violations = inverse_hypothesis_violations(data)
        trivial = trafo_to_trivial(self.session.descriptor)
        result = {
            "roundtrip": None if violations else roundtrip_verify(data, self.session.tracked),
            "hypothesisViolations": [
                {"index": i + 1, "point": format_scalar(point)} for i, point in violations
            ],
            "descriptorRoundtrip": roundtrip_verify(trivial.data, self.session.descriptor.sections),
        }
        return json.dumps(result, ensure_ascii=False)

    async def _inverse(self, arguments: Dict[str, Any]) -> str:
        """Inverse data written on the strict transforms."""
        data = self.session.elt_data
        forward = elt_composite(data, self.session.tracked)
        result = {
            "transforms": [section_payload(s) for s in forward.tracked],
            "inverse": elt_payload(inverse_elt_data(data, forward)),
        }
        return json.dumps(result, ensure_ascii=False)
