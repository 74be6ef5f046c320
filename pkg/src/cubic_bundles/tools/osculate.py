"""Osculate tool: osculating points on nodal fibers and near cusps."""

import json
import logging
from typing import Any, Dict

from ..cubic_bundle import (
    NodalCubic,
    fiber_osculating_profile,
    osculating_points,
    osculating_sections_near_cusp,
)
from ..exact_field import Polynomial, format_scalar, parse_scalar
from ..ruled_surface import Section, intersection_multiplicity
from ..scenario import gm_payload, section_payload

logger = logging.getLogger(__name__)


class OsculateTool:
    """Tool for osculating points of the relative degree on a fiber."""

    def __init__(self, session):
        """Initialize with scenario session."""
        self.session = session

    async def handle(self, arguments: Dict[str, Any]) -> str:
        """Handle osculate tool requests.

        Args:
            arguments: Tool arguments containing action (points, profile, near_cusp)
                with k, fiber or m as the action needs

        Returns:
            JSON string with results
        """
        action = arguments.get("action")
        if not action:
            return json.dumps({"error": "Action parameter is required"})

        try:
            if action == "points":
                return await self._points(arguments)
            elif action == "profile":
                return await self._profile(arguments)
            elif action == "near_cusp":
                return await self._near_cusp(arguments)
            else:
                return json.dumps({"error": f"Unknown action: {action}"})

        except Exception as e:
            logger.error(f"Error in osculate tool: {e}")
            return json.dumps({"error": str(e), "kind": type(e).__name__})

    async def _points(self, arguments: Dict[str, Any]) -> str:
        """The k osculating points through the first osculating section.

        Each point tau is checked with the group law: k * tau = k * base.
        """
        k = arguments.get("k")
        fiber = arguments.get("fiber")
        if k is None or fiber is None:
            return json.dumps({"error": "k and fiber are required for points action"})

        profile = fiber_osculating_profile(self.session.descriptor, parse_scalar(fiber))
        base = profile.parameters[0]
        points = osculating_points(int(k), base, self.session.scenario.conductor)

        cubic = NodalCubic(profile.h)
        target = cubic.multiply(int(k), cubic.point_of(base))
        verified = all(cubic.multiply(int(k), cubic.point_of(p)) == target for p in points)
        values = {p.t for p in points}
        result = {
            "fiber": format_scalar(profile.mu),
            "h": format_scalar(profile.h),
            "points": gm_payload(points),
            "verified": verified,
            "sectionsOnPoints": [p.t in values for p in profile.parameters],
        }
        return json.dumps(result, ensure_ascii=False)

    async def _profile(self, arguments: Dict[str, Any]) -> str:
        fiber = arguments.get("fiber")
        if fiber is None:
            return json.dumps({"error": "fiber is required for profile action"})

        profile = fiber_osculating_profile(self.session.descriptor, parse_scalar(fiber))
        result = {
            "fiber": format_scalar(profile.mu),
            "h": format_scalar(profile.h),
            "parameters": gm_payload(list(profile.parameters)),
            "ratios": [format_scalar(r) for r in profile.ratios],
            "orders": list(profile.orders),
        }
        return json.dumps(result, ensure_ascii=False)

    async def _near_cusp(self, arguments: Dict[str, Any]) -> str:
        """Local sections at a cusp of multiplicity m and their meeting orders at x = 0."""
        m = arguments.get("m")
        k = arguments.get("k")
        if m is None or k is None:
            return json.dumps({"error": "m and k are required for near_cusp action"})

        m, k = int(m), int(k)
        sections = osculating_sections_near_cusp(m, k)
        sigma0 = Section.of(Polynomial.monomial(m))
        sigma_inf = Section.of(Polynomial.monomial(m, -1))
        listed = [sigma0, sigma_inf, *sections]
        origin = parse_scalar(0)
        meetings = [
            [None if a == b else intersection_multiplicity(listed[a], listed[b], origin) for b in range(len(listed))]
            for a in range(len(listed))
        ]
        result = {
            "sections": [section_payload(s) for s in sections],
            "multiplicities": meetings,
        }
        return json.dumps(result, ensure_ascii=False)
