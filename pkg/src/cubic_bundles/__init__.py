"""Exact construction and recovery of bundles of singular plane cubics."""

__version__ = "0.1.0"

from .cubic_bundle import BundleDescriptor, NodalCubic, classify_fiber, collinear_test, osculating_points
from .exact_field import Polynomial, ProjValue, Scalar
from .pipeline import construct_bundle, recover_construction, trafo_to_trivial
from .projectivity import ConstructionInput, decide_projective, q_cartier_reduce
from .ruled_surface import CurveDivisor, EltData, Section, elt_composite, roundtrip_verify
from .runner import parse_report, render_report, run_scenario

__all__ = [
    "BundleDescriptor",
    "ConstructionInput",
    "CurveDivisor",
    "EltData",
    "NodalCubic",
    "Polynomial",
    "ProjValue",
    "Scalar",
    "Section",
    "classify_fiber",
    "collinear_test",
    "construct_bundle",
    "decide_projective",
    "elt_composite",
    "osculating_points",
    "parse_report",
    "q_cartier_reduce",
    "recover_construction",
    "render_report",
    "roundtrip_verify",
    "run_scenario",
    "trafo_to_trivial",
]
