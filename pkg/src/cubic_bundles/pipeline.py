"""Forward construction of cubic bundles and recovery of their construction data."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import List, Tuple

from .cubic_bundle import BundleDescriptor, check_descriptor
from .errors import DescriptorInvariantError
from .exact_field import ProjValue, Scalar
from .projectivity import ConstructionInput, working_conductor
from .ruled_surface import (
    CurveDivisor,
    EltData,
    Frame,
    Section,
    TransformResult,
    cross,
    elt_composite,
    inverse_elt_data,
    lemma21_recover_divisor,
)

logger = logging.getLogger(__name__)


def construction_data(config: ConstructionInput) -> Tuple[EltData, List[Section]]:
    """Elementary-transformation data of the construction and the sections it tracks."""
    sigma0 = Section.constant(config.c0)
    sigma_inf = Section.constant(config.c_inf)
    osculating = [Section.constant(c) for c in config.constants]
    data = EltData(tuple(zip(osculating, config.divisors)))
    return data, [sigma0, sigma_inf, *osculating]


def construct_bundle(config: ConstructionInput) -> BundleDescriptor:
    """Transform P^1 x A^1 along (sigma_i, D_i) and read off the bundle descriptor.

    Args:
        config: Validated construction input

    Returns:
        BundleDescriptor; inputs that are not projective still produce one,
        and check_descriptor reports what it violates
    """
    data, tracked = construction_data(config)
    result = elt_composite(data, tracked)
    sigma0, sigma_inf, *osculating = result.tracked
    total = sum(config.divisors, CurveDivisor.empty())
    candidates = total.support
    descriptor = BundleDescriptor(
        sigma0=sigma0,
        sigma_inf=sigma_inf,
        osculating=tuple(osculating),
        cusp_divisor=lemma21_recover_divisor(sigma0, sigma_inf, candidates),
        relative_degree=config.n,
    )
    if descriptor.cusp_divisor != total:
        logger.warning(f"cusp divisor {descriptor.cusp_divisor} differs from the sum of the divisors {total}")
    logger.debug(f"constructed bundle with cusp divisor {descriptor.cusp_divisor}")
    return descriptor


@dataclass(frozen=True)
class Trivialization:
    """Result of transforming a bundle back to P^1 x A^1.

    data/transform describe elt_{(sigma0, D0)}; sections are the transforms
    after the constant frame change putting sigma0 at [0:1] and sigmaInf at [1:0].
    """

    data: EltData
    transform: TransformResult
    sections: Tuple[Section, ...]

    @property
    def constants(self) -> Tuple[ProjValue, ...]:
        return tuple(s.evaluate(Scalar.zero()) for s in self.sections[2:])


def trafo_to_trivial(desc: BundleDescriptor) -> Trivialization:
    """Apply elt_{(sigma0, cusp divisor)} and move the result to constant sections."""
    tracked = list(desc.sections)
    data = EltData(
        ((desc.sigma0, desc.cusp_divisor),)
        + tuple((s, CurveDivisor.empty()) for s in tracked[1:])
    )
    transform = elt_composite(data, tracked)
    sigma0, sigma_inf = transform.tracked[0], transform.tracked[1]

    basis = cross(sigma_inf, sigma0)
    if basis.degree != 0:
        raise DescriptorInvariantError(
            [f"transforms of sigma0 and sigmaInf still meet where {basis} vanishes"]
        )
    # columns: sigmaInf then sigma0, so the new coordinates send them to [1:0] and [0:1]
    change = Frame(((sigma_inf.a, sigma0.a), (sigma_inf.b, sigma0.b))).adjugate()
    sections = tuple(Section(*change.apply(s.vector)) for s in transform.tracked)

    findings = [
        f"osculating section {i} is not constant after trivialization: {s}"
        for i, s in enumerate(sections[2:], start=1)
        if not s.is_constant
    ]
    for i, first in enumerate(sections):
        for second in sections[i + 1 :]:
            if cross(first, second).degree != 0:
                findings.append(f"transformed sections {first} and {second} are not disjoint")
    if findings:
        raise DescriptorInvariantError(findings)
    return Trivialization(data=data, transform=transform, sections=sections)


def recovered_divisors(desc: BundleDescriptor) -> Tuple[CurveDivisor, ...]:
    """D_i = sum of mult_p(sigma0, sigmaInf) over cusps p not on sigma_i."""
    divisors = []
    for section in desc.osculating:
        entries = []
        for point, mult in desc.cusp_divisor:
            cusp = desc.sigma0.evaluate(point)
            if section.evaluate(point) != cusp:
                entries.append((point, mult))
        divisors.append(CurveDivisor(tuple(entries)))
    return tuple(divisors)


def recover_construction(desc: BundleDescriptor) -> ConstructionInput:
    """Construction data whose construct_bundle reproduces desc up to one Möbius.

    Args:
        desc: Descriptor satisfying the unique-index structure at every cusp

    Returns:
        ConstructionInput with c0 = [0:1], cInf = [1:0] and the constants read
        in the coordinate produced by trafo_to_trivial
    """
    findings = check_descriptor(desc)
    if findings:
        raise DescriptorInvariantError(findings)
    trivial = trafo_to_trivial(desc)
    divisors = recovered_divisors(desc)

    inverse = inverse_elt_data(trivial.data, trivial.transform)
    by_section = {section: divisor for section, divisor in inverse}
    expected = [CurveDivisor.empty(), CurveDivisor.empty(), *divisors]
    mismatches = [
        f"inverse data gives {by_section.get(section, CurveDivisor.empty())} for "
        f"section {i}, the cusp formula gives {divisor}"
        for i, (section, divisor) in enumerate(zip(trivial.transform.tracked, expected))
        if by_section.get(section, CurveDivisor.empty()) != divisor
    ]
    if mismatches:
        raise DescriptorInvariantError(mismatches)

    config = ConstructionInput(
        conductor=1,
        c0=ProjValue.of(0),
        c_inf=ProjValue.infinity(),
        constants=trivial.constants,
        divisors=divisors,
    )
    conductor = working_conductor(config)
    logger.debug(f"recovered {config.n} pairs over conductor {conductor}")
    return replace(config, conductor=conductor)

