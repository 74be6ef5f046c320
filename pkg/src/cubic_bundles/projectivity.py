"""Projectivity criterion and Q-Cartier certificates.

A bundle built from constant sections is projective exactly when, after moving
sigma0 to 0 and sigmaInf to infinity, all ratios of the remaining constants are
roots of unity. Near a cusp the osculating sections are cut out by
f = y0 (xi - 1) + x^m (xi + 1), and f^k lies in the subring generated by x,
y0^2 and (y0^2 - x^2m) precisely when xi^k = 1.
"""

from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass
from functools import reduce
from math import comb
from typing import List, Optional, Sequence, Tuple

import sympy

from .errors import (
    DegenerateConfigurationError,
    OverlappingSupportError,
    RootOfUnityRequiredError,
    TrivialRatioError,
)
from .exact_field import (
    CurvePoint,
    Polynomial,
    ProjValue,
    Scalar,
    ScalarMatrix,
    as_scalar,
    cyclotomic_polynomial,
    is_root_of_unity,
    moebius_apply,
)
from .ruled_surface import CurveDivisor

logger = logging.getLogger(__name__)

DEFAULT_CARTIER_LIMIT = 24


def cartier_limit() -> int:
    """Exponent bound of the bounded Cartier search, from CUBIC_BUNDLES_CARTIER_LIMIT."""
    raw = os.getenv("CUBIC_BUNDLES_CARTIER_LIMIT", str(DEFAULT_CARTIER_LIMIT))
    try:
        return max(1, int(raw))
    except ValueError:
        logger.warning(f"ignoring CUBIC_BUNDLES_CARTIER_LIMIT={raw!r}")
        return DEFAULT_CARTIER_LIMIT


@dataclass(frozen=True)
class ConstructionInput:
    """sigma0, sigmaInf and the sigma_i as constant sections, with divisors D_i."""

    conductor: int
    c0: ProjValue
    c_inf: ProjValue
    constants: Tuple[ProjValue, ...]
    divisors: Tuple[CurveDivisor, ...]

    def __post_init__(self):
        object.__setattr__(self, "constants", tuple(self.constants))
        object.__setattr__(self, "divisors", tuple(self.divisors))
        if self.conductor < 1:
            raise DegenerateConfigurationError(f"conductor must be positive, got {self.conductor}")
        if len(self.constants) != len(self.divisors):
            raise DegenerateConfigurationError(
                f"{len(self.constants)} constants but {len(self.divisors)} divisors"
            )
        values = [self.c0, self.c_inf, *self.constants]
        for i in range(len(values)):
            for j in range(i + 1, len(values)):
                if values[i] == values[j]:
                    raise DegenerateConfigurationError(
                        f"fiber constants {_label(i)} and {_label(j)} coincide at {values[i]}"
                    )
        for i in range(len(self.divisors)):
            for j in range(i + 1, len(self.divisors)):
                for point in self.divisors[i].support:
                    if point in self.divisors[j]:
                        raise OverlappingSupportError(point, i + 1, j + 1)

    @property
    def n(self) -> int:
        return len(self.constants)


def _label(index: int) -> str:
    return ("c0", "cInf")[index] if index < 2 else f"constant {index - 1}"


@dataclass(frozen=True)
class NormalizedConfig:
    values: Tuple[Scalar, ...]

    @property
    def ratios(self) -> Tuple[Scalar, ...]:
        if not self.values:
            return ()
        first = self.values[0]
        return tuple(v / first for v in self.values)


@dataclass(frozen=True)
class ProjectivityVerdict:
    projective: bool
    orders: Optional[Tuple[int, ...]] = None
    failing_index: Optional[int] = None

    def __post_init__(self):
        if self.projective != (self.orders is not None) or self.projective == (self.failing_index is not None):
            raise ValueError("witness does not match the verdict")


@dataclass(frozen=True)
class CartierCertificate:
    """f^k reduced to even_part + odd_part * y0; member exactly when odd_part = 0."""

    xi: Scalar
    k: int
    m: int
    member: bool
    odd_part: Polynomial
    even_part: Polynomial


def normalization_matrix(c0: ProjValue, c_inf: ProjValue) -> ScalarMatrix:
    """Möbius matrix sending c0 to [0:1] and c_inf to [1:0]."""
    if c0 == c_inf:
        raise DegenerateConfigurationError("c0 and cInf coincide")
    return (c0.v, -c0.u), (-c_inf.v, c_inf.u)


def normalize_configuration(config: ConstructionInput) -> NormalizedConfig:
    matrix = normalization_matrix(config.c0, config.c_inf)
    values = []
    for constant in config.constants:
        image = moebius_apply(matrix, constant)
        if image.is_infinity or image.u.is_zero:
            raise DegenerateConfigurationError(f"{constant} collides with c0 or cInf")
        values.append(image.u)
    return NormalizedConfig(tuple(values))


def decide_projective(config: ConstructionInput) -> ProjectivityVerdict:
    """Projective iff every normalized ratio v_i / v_1 is a root of unity.

    Args:
        config: Construction data with at least one osculating constant

    Returns:
        Verdict with the orders of the ratios, or the 1-based index of the first
        ratio that is not a root of unity
    """
    if config.n < 1:
        raise DegenerateConfigurationError("the criterion needs at least one constant")
    orders = []
    for index, ratio in enumerate(normalize_configuration(config).ratios, start=1):
        order = is_root_of_unity(ratio)
        if order is None:
            logger.info(f"ratio {index} = {ratio} is not a root of unity")
            return ProjectivityVerdict(False, failing_index=index)
        orders.append(order)
    return ProjectivityVerdict(True, orders=tuple(orders))


def same_configuration(first: ConstructionInput, second: ConstructionInput) -> bool:
    """True when the two inputs agree up to one Möbius transformation of the fiber."""
    a = normalize_configuration(first).ratios
    b = normalize_configuration(second).ratios
    return a == b


def _multiply(p: Tuple[Polynomial, Polynomial], q: Tuple[Polynomial, Polynomial], square: Polynomial):
    a, b = p
    c, d = q
    return a * c + b * d * square, a * d + b * c


def q_cartier_reduce(xi: Scalar, k: int, m: int) -> CartierCertificate:
    """Reduce f(x, y0, 1)^k modulo y0^2 -> x^2m and test the odd part."""
    xi = as_scalar(xi)
    if xi == 1:
        raise TrivialRatioError("xi = 1 corresponds to the section through infinity")
    if k < 1 or m < 1:
        raise ValueError("k and m must be positive")
    square = Polynomial.monomial(2 * m)
    base = (Polynomial.monomial(m, xi + 1), Polynomial.constant(xi - 1))
    result = (Polynomial.one(), Polynomial.zero())
    exponent = k
    while exponent:
        if exponent & 1:
            result = _multiply(result, base, square)
        base = _multiply(base, base, square)
        exponent >>= 1
    even, odd = result
    return CartierCertificate(xi=xi, k=k, m=m, member=odd.is_zero, odd_part=odd, even_part=even)


def verify_AB_decomposition(xi: Scalar, k: int, m: int) -> bool:
    """Check f^k - A lies in the ideal (y0^2 - x^2m) for A = 2 sum_{i even} C(k,i) x^{m(k-i)} y0^i."""
    xi = as_scalar(xi)
    if xi**k != 1:
        raise RootOfUnityRequiredError(f"{xi} is not a {k}-th root of unity")
    x, y0, t = sympy.symbols("x y0 t")
    modulus = sum(c * t**i for i, c in enumerate(cyclotomic_polynomial(xi.conductor)))
    xi_expr = xi.as_expr(t)
    f = y0 * (xi_expr - 1) + x**m * (xi_expr + 1)
    a_part = 2 * sum(comb(k, i) * x ** (m * (k - i)) * y0**i for i in range(0, k + 1, 2))
    basis = sympy.groebner([y0**2 - x ** (2 * m), modulus], y0, x, t, order="lex")
    _, remainder = basis.reduce(sympy.expand(f**k - a_part))
    return remainder == 0


def minimal_cartier_exponent(xi: Scalar, m: int, limit: Optional[int] = None) -> Optional[int]:
    """Least k up to limit with f^k in the subring, or None."""
    limit = cartier_limit() if limit is None else limit
    for k in range(1, limit + 1):
        if q_cartier_reduce(xi, k, m).member:
            return k
    return None


@dataclass(frozen=True)
class LocalCartierDatum:
    """Certificate for osculating section `index` near the cusp over `point` of D_partner."""

    index: int
    partner: int
    point: CurvePoint
    xi: Scalar
    m: int
    order: Optional[int]
    certificate: Optional[CartierCertificate]
    searched_up_to: int


def local_cartier_certificates(config: ConstructionInput, limit: Optional[int] = None) -> List[LocalCartierDatum]:
    """One datum per osculating index i and cusp point of another D_j.

    In the chart at that cusp sigma_j is [1 : 0] and sigma_i is
    -((xi + 1) / (xi - 1)) x^m with xi = v_i / v_j.
    """
    limit = cartier_limit() if limit is None else limit
    values = normalize_configuration(config).values
    data = []
    for j, divisor in enumerate(config.divisors):
        for point, mult in divisor:
            for i, value in enumerate(values):
                if i == j:
                    continue
                xi = value / values[j]
                order = is_root_of_unity(xi)
                if order is not None:
                    certificate = q_cartier_reduce(xi, order, mult)
                else:
                    found = minimal_cartier_exponent(xi, mult, limit)
                    certificate = q_cartier_reduce(xi, found, mult) if found else None
                data.append(
                    LocalCartierDatum(
                        index=i + 1,
                        partner=j + 1,
                        point=point,
                        xi=xi,
                        m=mult,
                        order=order,
                        certificate=certificate,
                        searched_up_to=limit,
                    )
                )
    return data


def working_conductor(config: ConstructionInput) -> int:
    """Least common conductor of every scalar in the input."""
    scalars = [config.c0.u, config.c0.v, config.c_inf.u, config.c_inf.v]
    for value in config.constants:
        scalars += [value.u, value.v]
    for divisor in config.divisors:
        scalars += list(divisor.support)
    return reduce(math.lcm, (s.conductor for s in scalars), config.conductor)
