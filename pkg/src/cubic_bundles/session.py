"""Shared, lazily computed state of one scenario."""

import logging
from functools import cached_property
from typing import List, Optional

from .cubic_bundle import BundleDescriptor, check_descriptor
from .pipeline import construct_bundle, construction_data
from .projectivity import ConstructionInput, ProjectivityVerdict, cartier_limit, decide_projective
from .ruled_surface import EltData, Section
from .scenario import Scenario

logger = logging.getLogger(__name__)


class ScenarioSession:
    """Scenario input plus the objects several requests share.

    Every derived value is computed at most once; requests only read them.
    """

    def __init__(self, scenario: Optional[Scenario], cartier_limit_value: Optional[int] = None):
        """Initialize session.

        Args:
            scenario: Parsed scenario, or None for commands that need no input
            cartier_limit_value: Bound of the Cartier exponent search
                (defaults to CUBIC_BUNDLES_CARTIER_LIMIT)
        """
        self.scenario = scenario
        self.cartier_limit = cartier_limit_value or cartier_limit()

    @property
    def input(self) -> ConstructionInput:
        if self.scenario is None:
            raise ValueError("this request needs a scenario")
        return self.scenario.input

    @cached_property
    def elt_data(self) -> EltData:
        data, _ = construction_data(self.input)
        return data

    @cached_property
    def tracked(self) -> List[Section]:
        _, tracked = construction_data(self.input)
        return tracked

    @cached_property
    def descriptor(self) -> BundleDescriptor:
        logger.debug(f"constructing bundle for scenario '{self.scenario.name}'")
        return construct_bundle(self.input)

    @cached_property
    def findings(self) -> List[str]:
        return check_descriptor(self.descriptor)

    @cached_property
    def verdict(self) -> ProjectivityVerdict:
        return decide_projective(self.input)
