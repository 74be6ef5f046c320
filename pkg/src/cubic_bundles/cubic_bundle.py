"""Bundles of singular plane cubics obtained from a split double section.

The identification map sends [y0 : y1] over x to
[y0^2 y1 - g y1^3 : y0^3 - g y0 y1^2 : y1^3], whose image is the cubic
z1^2 z2 = z0^3 + g z0^2 z2. Over a fiber where g = h^2 is nonzero the cubic
is nodal and t = (y0 - h y1) / (y0 + h y1) identifies its smooth locus with
the multiplicative group; three points are collinear exactly when the product
of their t-values is 1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

import sympy

from .errors import (
    CubicBundleError,
    CuspidalFiberError,
    DegenerateConfigurationError,
    DescriptorInvariantError,
    InsufficientConductorError,
    NodePreimageError,
)
from .exact_field import (
    CurvePoint,
    Polynomial,
    ProjValue,
    RationalLike,
    Scalar,
    as_scalar,
    is_root_of_unity,
    moebius_apply,
)
from .ruled_surface import (
    CurveDivisor,
    Frame,
    Section,
    cross,
    divisor_matches,
    intersection_multiplicity,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BundleDescriptor:
    """Transformed node-preimage sections, osculating sections and the cusp divisor."""

    sigma0: Section
    sigma_inf: Section
    osculating: Tuple[Section, ...]
    cusp_divisor: CurveDivisor
    relative_degree: int

    def __post_init__(self):
        object.__setattr__(self, "osculating", tuple(self.osculating))

    @property
    def sections(self) -> Tuple[Section, ...]:
        return (self.sigma0, self.sigma_inf) + self.osculating


class FiberKind(str, Enum):
    NODAL = "nodal"
    CUSPIDAL = "cuspidal"


@dataclass(frozen=True)
class CubicFiber:
    c: Scalar
    mu: CurvePoint
    kind: FiberKind

    def __post_init__(self):
        if (self.kind is FiberKind.CUSPIDAL) != self.c.is_zero:
            raise CubicBundleError(f"fiber over {self.mu} with g = {self.c} cannot be {self.kind.value}")


@dataclass(frozen=True)
class GmPoint:
    t: Scalar

    def __post_init__(self):
        t = as_scalar(self.t)
        if t.is_zero:
            raise NodePreimageError("t = 0 is not a point of the multiplicative group")
        object.__setattr__(self, "t", t)

    def __mul__(self, other: GmPoint) -> GmPoint:
        return GmPoint(self.t * other.t)

    def __str__(self) -> str:
        return str(self.t)


@dataclass(frozen=True)
class P2Point:
    """[z0 : z1 : z2], scaled so the last nonzero coordinate is 1."""

    coords: Tuple[Scalar, Scalar, Scalar]

    def __post_init__(self):
        coords = [as_scalar(c) for c in self.coords]
        pivot = next((c for c in reversed(coords) if c), None)
        if pivot is None:
            raise CubicBundleError("[0 : 0 : 0] is not a point of the plane")
        inverse = pivot.inverse()
        object.__setattr__(self, "coords", tuple(c * inverse for c in coords))

    def __str__(self) -> str:
        return "[" + " : ".join(str(c) for c in self.coords) + "]"


def _gamma(g_value: Scalar, y: ProjValue) -> P2Point:
    y0, y1 = y.u, y.v
    residue = y0 * y0 - g_value * y1 * y1
    return P2Point((y1 * residue, y0 * residue, y1 * y1 * y1))


def gamma_map(g: Polynomial, y: ProjValue, mu: CurvePoint) -> P2Point:
    """Image of the fiber point y over mu in the plane cubic."""
    return _gamma(g.evaluate(mu), y)


def cubic_equation(g_value: Union[Scalar, RationalLike], point: P2Point) -> Scalar:
    """z1^2 z2 - z0^3 - g z0^2 z2 at the point; zero on the cubic."""
    z0, z1, z2 = point.coords
    g_value = as_scalar(g_value)
    return z1 * z1 * z2 - z0 * z0 * z0 - g_value * z0 * z0 * z2


def cubic_residual(g: Optional[Polynomial] = None) -> sympy.Expr:
    """Expanded z1^2 z2 - z0^3 - g z0^2 z2 after substituting the identification map.

    With g omitted the residual is taken in Z[y0, y1, g]; otherwise the
    coefficients of g enter through symbols x and zeta.
    """
    y0, y1, g_symbol = sympy.symbols("y0 y1 g")
    z0 = y0**2 * y1 - g_symbol * y1**3
    z1 = y0**3 - g_symbol * y0 * y1**2
    z2 = y1**3
    residual = sympy.expand(z1**2 * z2 - z0**3 - g_symbol * z0**2 * z2)
    if g is not None:
        x, zeta = sympy.symbols("x zeta")
        g_expr = sum((c.as_expr(zeta) * x**i for i, c in enumerate(g.coeffs)), sympy.Integer(0))
        residual = sympy.expand(residual.subs(g_symbol, g_expr))
    return residual


@dataclass(frozen=True)
class DoubleSectionChart:
    """Fiber coordinate near mu in which the double section reads y^2 = g(x).

    valid_on is the symmetrizing change of coordinates as a polynomial matrix;
    it is invertible wherever denominator does not vanish.
    """

    g: Polynomial
    h: Polynomial
    valid_on: Frame
    denominator: Polynomial
    mu: CurvePoint

    def __post_init__(self):
        if self.g.is_zero:
            raise CubicBundleError("the double section degenerates in every fiber")

    def fiber_value(self, section: Section, point: Optional[CurvePoint] = None) -> ProjValue:
        point = self.mu if point is None else point
        return moebius_apply(self.valid_on.evaluate(point), section.evaluate(point))


def double_section_chart(desc: BundleDescriptor, mu: CurvePoint) -> DoubleSectionChart:
    mu = as_scalar(mu)
    avoid = {desc.sigma0.evaluate(mu), desc.sigma_inf.evaluate(mu)}
    c = next(n for n in range(3) if ProjValue.of(n) not in avoid)

    one, zero = Polynomial.one(), Polynomial.zero()
    flip = Frame(((zero, one), (one, Polynomial.constant(-c))))
    a0, b0 = flip.apply(desc.sigma0.vector)
    ai, bi = flip.apply(desc.sigma_inf.vector)
    h = a0 * bi - ai * b0
    symmetrize = Frame(((b0 * bi * 2, -(a0 * bi + ai * b0)), (zero, one)))
    return DoubleSectionChart(
        g=h * h,
        h=h,
        valid_on=symmetrize @ flip,
        denominator=b0 * bi,
        mu=mu,
    )


def classify_fiber(desc: BundleDescriptor, mu: CurvePoint) -> CubicFiber:
    mu = as_scalar(mu)
    chart = double_section_chart(desc, mu)
    meeting = intersection_multiplicity(desc.sigma0, desc.sigma_inf, mu)
    kind = FiberKind.CUSPIDAL if meeting >= 1 else FiberKind.NODAL
    return CubicFiber(chart.g.evaluate(mu), mu, kind)


def gm_coordinate(h: Union[Scalar, RationalLike], y: ProjValue) -> GmPoint:
    """t = (y0 - h y1) / (y0 + h y1); the node preimages [+-h : 1] are excluded."""
    h = as_scalar(h)
    if h.is_zero:
        raise NodePreimageError("h = 0 describes a cuspidal fiber")
    numerator = y.u - h * y.v
    denominator = y.u + h * y.v
    if numerator.is_zero or denominator.is_zero:
        raise NodePreimageError(f"{y} is a preimage of the node")
    return GmPoint(numerator / denominator)


def iota(h: Union[Scalar, RationalLike], t: GmPoint) -> ProjValue:
    """Inverse of gm_coordinate: [h(1 + t) : 1 - t]."""
    h = as_scalar(h)
    return ProjValue(h * (1 + t.t), 1 - t.t)


def _gradient(g: Scalar, z: Tuple[Scalar, Scalar, Scalar]) -> Tuple[Scalar, Scalar, Scalar]:
    z0, z1, z2 = z
    return (-3 * z0 * z0 - 2 * g * z0 * z2, 2 * z1 * z2, z1 * z1 - g * z0 * z0)


def _hessian(g: Scalar, z: Tuple[Scalar, Scalar, Scalar]) -> Scalar:
    z0, z1, z2 = z
    return 24 * z0 * z1 * z1 + 8 * g * z1 * z1 * z2 - 8 * g * g * z0 * z0 * z2


def _determinant(rows: Sequence[Tuple[Scalar, Scalar, Scalar]]) -> Scalar:
    (a, b, c), (d, e, f), (g, h, i) = rows
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def collinearity_mode(t1: GmPoint, t2: GmPoint, t3: GmPoint) -> str:
    distinct = len({t1.t, t2.t, t3.t})
    return {3: "chord", 2: "tangent", 1: "flex"}[distinct]


def flex_test(h: Union[Scalar, RationalLike], t: GmPoint) -> bool:
    """True when the tangent at iota(t) meets the cubic with multiplicity 3."""
    h = as_scalar(h)
    return _hessian(h * h, _gamma(h * h, iota(h, t)).coords).is_zero


def collinear_test(h: Union[Scalar, RationalLike], t1: GmPoint, t2: GmPoint, t3: GmPoint) -> bool:
    """Whether the three points lie on one line, counted with tangency.

    A repeated parameter means the line is tangent there; three equal
    parameters ask for a flex.
    """
    h = as_scalar(h)
    if h.is_zero:
        raise NodePreimageError("collinearity is only defined on nodal fibers")
    g = h * h
    mode = collinearity_mode(t1, t2, t3)
    if mode == "flex":
        return flex_test(h, t1)
    points = [_gamma(g, iota(h, t)).coords for t in (t1, t2, t3)]
    if mode == "chord":
        return _determinant(points).is_zero
    if t1.t == t2.t:
        double, other = points[0], points[2]
    elif t1.t == t3.t:
        double, other = points[0], points[1]
    else:
        double, other = points[1], points[0]
    gradient = _gradient(g, double)
    return sum((a * b for a, b in zip(gradient, other)), Scalar.zero()).is_zero


@lru_cache(maxsize=1)
def collinearity_constant() -> Fraction:
    """The constant c with: collinear iff t1 t2 t3 = c, found by factoring the determinant."""
    t1, t2, t3, h = sympy.symbols("t1 t2 t3 h")
    rows = []
    for t in (t1, t2, t3):
        y0, y1 = h * (1 + t), 1 - t
        residue = y0**2 - h**2 * y1**2
        rows.append([y1 * residue, y0 * residue, y1**3])
    _, factors = sympy.factor_list(sympy.Matrix(rows).det())
    for factor, _ in factors:
        if {t1, t2, t3} <= factor.free_symbols:
            poly = sympy.Poly(factor, t1, t2, t3)
            a = poly.coeff_monomial(t1 * t2 * t3)
            b = poly.coeff_monomial(1)
            if a and sympy.expand(poly.as_expr() - a * t1 * t2 * t3 - b) == 0:
                value = sympy.Rational(-b, a)
                return Fraction(int(value.p), int(value.q))
    raise CubicBundleError("collinearity determinant has no factor of the form a*t1*t2*t3 + b")


@dataclass(frozen=True)
class CubicPoint:
    """Affine point (x, y) of Y^2 = X^3 + g X^2, or the flex at infinity."""

    x: Optional[Scalar] = None
    y: Optional[Scalar] = None

    @property
    def is_identity(self) -> bool:
        return self.x is None


class NodalCubic:
    """Chord-tangent group law on the smooth locus of Y^2 = X^3 + h^2 X^2."""

    def __init__(self, h: Union[Scalar, RationalLike]):
        self.h = as_scalar(h)
        if self.h.is_zero:
            raise CuspidalFiberError("h = 0 gives a cuspidal cubic")
        self.g = self.h * self.h

    @property
    def identity(self) -> CubicPoint:
        return CubicPoint()

    def contains(self, point: CubicPoint) -> bool:
        if point.is_identity:
            return True
        x, y = point.x, point.y
        return (y * y - x * x * x - self.g * x * x).is_zero and not x.is_zero

    def point_of(self, t: GmPoint) -> CubicPoint:
        if t.t == 1:
            return self.identity
        slope = self.h * (1 + t.t) / (1 - t.t)
        x = slope * slope - self.g
        return CubicPoint(x, slope * x)

    def parameter_of(self, point: CubicPoint) -> GmPoint:
        if point.is_identity:
            return GmPoint(Scalar.one())
        slope = point.y / point.x
        return GmPoint((slope - self.h) / (slope + self.h))

    def negate(self, point: CubicPoint) -> CubicPoint:
        if point.is_identity:
            return point
        return CubicPoint(point.x, -point.y)

    def add(self, p: CubicPoint, q: CubicPoint) -> CubicPoint:
        if p.is_identity:
            return q
        if q.is_identity:
            return p
        if p.x == q.x:
            if (p.y + q.y).is_zero:
                return self.identity
            # tangent slope
            slope = (3 * p.x * p.x + 2 * self.g * p.x) / (2 * p.y)
        else:
            # secant slope
            slope = (q.y - p.y) / (q.x - p.x)
        x = slope * slope - self.g - p.x - q.x
        y = slope * (x - p.x) + p.y
        return CubicPoint(x, -y)

    def multiply(self, k: int, point: CubicPoint) -> CubicPoint:
        if k < 0:
            return self.multiply(-k, self.negate(point))
        result, addend = self.identity, point
        while k:
            if k & 1:
                result = self.add(result, addend)
            addend = self.add(addend, addend)
            k >>= 1
        return result


def osculating_points(k: int, base: GmPoint, conductor: Optional[int] = None) -> List[GmPoint]:
    """The k points base * xi with xi^k = 1.

    When a working conductor N is given, zeta_k must already lie in Q(zeta_N).
    """
    if k < 1:
        raise ValueError(f"relative degree must be positive, got {k}")
    if conductor is not None and math.lcm(2, conductor) % k:
        raise InsufficientConductorError(
            f"Q(zeta_{conductor}) lacks the primitive {k}-th roots of unity",
            required=math.lcm(conductor, k),
        )
    return [base * GmPoint(Scalar.root_of_unity(k, j)) for j in range(k)]


def osculating_sections_near_cusp(m: int, k: int) -> List[Section]:
    """Local model of the osculating multisection at a cusp of multiplicity m.

    xi = 1 gives [1 : 0]; any other k-th root of unity gives [((xi+1)/(xi-1)) x^m : 1].
    """
    if m < 1 or k < 1:
        raise ValueError("m and k must be positive")
    sections = []
    for j in range(k):
        xi = Scalar.root_of_unity(k, j)
        if xi == 1:
            sections.append(Section.constant(ProjValue.infinity()))
        else:
            sections.append(Section.of(Polynomial.monomial(m, (xi + 1) / (xi - 1))))
    return sections


@dataclass(frozen=True)
class FiberProfile:
    """Gm coordinates of the osculating sections over a nodal fiber."""

    mu: CurvePoint
    h: Scalar
    parameters: Tuple[GmPoint, ...]
    ratios: Tuple[Scalar, ...]
    orders: Tuple[Optional[int], ...]


def fiber_osculating_profile(desc: BundleDescriptor, mu: CurvePoint) -> FiberProfile:
    """Where the osculating sections meet a nodal fiber, relative to the first of them."""
    mu = as_scalar(mu)
    if not desc.osculating:
        raise DegenerateConfigurationError("the descriptor has no osculating section to compare against")
    fiber = classify_fiber(desc, mu)
    if fiber.kind is FiberKind.CUSPIDAL:
        raise CuspidalFiberError(f"the fiber over x = {mu} is cuspidal")
    chart = double_section_chart(desc, mu)
    h = chart.h.evaluate(mu)
    parameters = tuple(gm_coordinate(h, chart.fiber_value(s)) for s in desc.osculating)
    first = parameters[0].t
    ratios = tuple(p.t / first for p in parameters)
    return FiberProfile(mu, h, parameters, ratios, tuple(is_root_of_unity(r) for r in ratios))


def check_descriptor(desc: BundleDescriptor) -> List[str]:
    """Structural findings; an empty list means the descriptor is consistent."""
    findings: List[str] = []
    if desc.sigma0 == desc.sigma_inf:
        return ["sigma0 and sigmaInf coincide"]
    if desc.relative_degree < 1:
        findings.append(f"relative degree {desc.relative_degree} is not positive")
    if desc.relative_degree != len(desc.osculating):
        findings.append(
            f"relative degree {desc.relative_degree} differs from the "
            f"{len(desc.osculating)} osculating sections"
        )
    for i, section in enumerate(desc.osculating, start=1):
        if section in (desc.sigma0, desc.sigma_inf):
            findings.append(f"osculating section {i} coincides with sigma0 or sigmaInf")
    if findings:
        return findings

    if not divisor_matches(cross(desc.sigma0, desc.sigma_inf), desc.cusp_divisor):
        findings.append("cusp divisor differs from the intersection divisor of sigma0 and sigmaInf")

    for mu, mult in desc.cusp_divisor:
        cusp = desc.sigma0.evaluate(mu)
        away = [i for i, s in enumerate(desc.osculating, start=1) if s.evaluate(mu) != cusp]
        if len(away) != 1:
            findings.append(
                f"x = {mu}: expected one osculating section away from the cusp, found {len(away)}"
            )
        through = [desc.sigma0, desc.sigma_inf] + [
            s for i, s in enumerate(desc.osculating, start=1) if i not in away
        ]
        for a in range(len(through)):
            for b in range(a + 1, len(through)):
                found = intersection_multiplicity(through[a], through[b], mu)
                if found != mult:
                    findings.append(
                        f"x = {mu}: sections through the cusp meet with multiplicity {found}, expected {mult}"
                    )
    for finding in findings:
        logger.warning(f"descriptor check: {finding}")
    return findings


def validate_descriptor(desc: BundleDescriptor) -> BundleDescriptor:
    findings = check_descriptor(desc)
    if findings:
        raise DescriptorInvariantError(findings)
    return desc
