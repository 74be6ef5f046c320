"""Cartier tool for subring membership certificates."""

import json
import logging
from typing import Any, Dict

from ..exact_field import format_scalar, parse_scalar
from ..projectivity import (
    local_cartier_certificates,
    minimal_cartier_exponent,
    q_cartier_reduce,
    verify_AB_decomposition,
)
from ..scenario import certificate_payload

logger = logging.getLogger(__name__)


class CartierTool:
    """Tool for Q-Cartier checks; reduce, decompose and minimal work without a scenario."""

    def __init__(self, session):
        """Initialize with scenario session."""
        self.session = session

    async def handle(self, arguments: Dict[str, Any]) -> str:
        """Handle cartier tool requests.

        Args:
            arguments: Tool arguments containing action (reduce, decompose, local, minimal)
                and xi, k, m as the action needs

        Returns:
            JSON string with results
        """
        action = arguments.get("action")
        if not action:
            return json.dumps({"error": "Action parameter is required"})

        try:
            if action == "reduce":
                return await self._reduce(arguments)
            elif action == "decompose":
                return await self._decompose(arguments)
            elif action == "local":
                return await self._local(arguments)
            elif action == "minimal":
                return await self._minimal(arguments)
            else:
                return json.dumps({"error": f"Unknown action: {action}"})

        except Exception as e:
            logger.error(f"Error in cartier tool: {e}")
            return json.dumps({"error": str(e), "kind": type(e).__name__})

    async def _reduce(self, arguments: Dict[str, Any]) -> str:
        xi, k, m = arguments.get("xi"), arguments.get("k"), arguments.get("m")
        if xi is None or k is None or m is None:
            return json.dumps({"error": "xi, k and m are required for reduce action"})

        certificate = q_cartier_reduce(parse_scalar(xi), int(k), int(m))
        return json.dumps(certificate_payload(certificate), ensure_ascii=False)

    async def _decompose(self, arguments: Dict[str, Any]) -> str:
        xi, k, m = arguments.get("xi"), arguments.get("k"), arguments.get("m")
        if xi is None or k is None or m is None:
            return json.dumps({"error": "xi, k and m are required for decompose action"})

        holds = verify_AB_decomposition(parse_scalar(xi), int(k), int(m))
        return json.dumps({"xi": format_scalar(parse_scalar(xi)), "k": int(k), "m": int(m), "decomposes": holds})

    async def _local(self, arguments: Dict[str, Any]) -> str:
        """One certificate per osculating index and cusp of another divisor."""
        data = local_cartier_certificates(self.session.input, self.session.cartier_limit)
        result = {
            "limit": self.session.cartier_limit,
            "certificates": [
                {
                    "index": d.index,
                    "partner": d.partner,
                    "point": format_scalar(d.point),
                    "xi": format_scalar(d.xi),
                    "m": d.m,
                    "order": d.order,
                    "certificate": certificate_payload(d.certificate) if d.certificate else None,
                }
                for d in data
            ],
        }
        return json.dumps(result, ensure_ascii=False)

    async def _minimal(self, arguments: Dict[str, Any]) -> str:
        xi, m = arguments.get("xi"), arguments.get("m")
        if xi is None or m is None:
            return json.dumps({"error": "xi and m are required for minimal action"})

        limit = arguments.get("limit") or (self.session.cartier_limit if self.session else None)
        found = minimal_cartier_exponent(parse_scalar(xi), int(m), limit)
        return json.dumps({"xi": format_scalar(parse_scalar(xi)), "m": int(m), "limit": limit, "k": found})
