"""Construct tool: forward construction and recovery of construction data."""

import json
import logging
from typing import Any, Dict

from ..exact_field import format_scalar
from ..pipeline import recover_construction, trafo_to_trivial
from ..projectivity import same_configuration
from ..scenario import descriptor_payload, divisor_payload, input_payload, proj_payload, section_payload

logger = logging.getLogger(__name__)


class ConstructTool:
    """Tool for building bundles and transforming them back."""

    def __init__(self, session):
        """Initialize with scenario session."""
        self.session = session

    async def handle(self, arguments: Dict[str, Any]) -> str:
        """Handle construct tool requests.

        Args:
            arguments: Tool arguments containing action (construct, recover, trivialize)

        Returns:
            JSON string with results
        """
        action = arguments.get("action")
        if not action:
            return json.dumps({"error": "Action parameter is required"})

        try:
            if action == "construct":
                return await self._construct(arguments)
            elif action == "recover":
                return await self._recover(arguments)
            elif action == "trivialize":
                return await self._trivialize(arguments)
            else:
                return json.dumps({"error": f"Unknown action: {action}"})

        except Exception as e:
            logger.error(f"Error in construct tool: {e}")
            return json.dumps({"error": str(e), "kind": type(e).__name__})

    async def _construct(self, arguments: Dict[str, Any]) -> str:
        """Build the descriptor; findings are reported, not raised."""
        descriptor = self.session.descriptor
        result = {
            "descriptor": descriptor_payload(descriptor),
            "cusps": [
                {"point": format_scalar(point), "mult": mult} for point, mult in descriptor.cusp_divisor
            ],
            "findings": list(self.session.findings),
        }
        return json.dumps(result, ensure_ascii=False)

    async def _recover(self, arguments: Dict[str, Any]) -> str:
        original = self.session.input
        recovered = recover_construction(self.session.descriptor)
        result = {
            "input": input_payload(recovered),
            "divisorsMatch": recovered.divisors == original.divisors,
            "sameConfiguration": same_configuration(original, recovered),
        }
        return json.dumps(result, ensure_ascii=False)

    async def _trivialize(self, arguments: Dict[str, Any]) -> str:
        trivial = trafo_to_trivial(self.session.descriptor)
        result = {
            "centerDivisor": divisor_payload(trivial.data.pairs[0][1]),
            "sections": [section_payload(s) for s in trivial.sections],
            "constants": [proj_payload(c) for c in trivial.constants],
        }
        return json.dumps(result, ensure_ascii=False)
