"""Sections of P^1-bundles over the affine line and elementary transformations.

A surface is the homothety class of a rank-2 k[x]-lattice inside k(x)^2. The
lattice is recorded by a Frame whose columns are a basis expressed in the
starting coordinates; sections are coprime polynomial vectors read in the
current basis. After a composite transformation the frame is brought to its
primitive column Hermite normal form, so the resulting coordinates depend only
on the lattice and not on the order in which single steps were taken.
"""

from __future__ import annotations

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import (
    CoincidentSectionsError,
    DegenerateValueError,
    InverseHypothesisError,
    InvalidDivisorError,
    OverlappingSupportError,
    UntrackedSectionError,
)
from .exact_field import (
    CurvePoint,
    Polynomial,
    ProjValue,
    RationalLike,
    Scalar,
    as_scalar,
    poly_gcd,
    poly_xgcd,
    roots_in_field,
    vanishing_order,
)

logger = logging.getLogger(__name__)

Vector = Tuple[Polynomial, Polynomial]


def _as_polynomial(value: Union[Polynomial, Scalar, RationalLike]) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    return Polynomial.constant(as_scalar(value))


@dataclass(frozen=True)
class Section:
    """The section x -> [a(x) : b(x)], kept coprime with b (or a) monic."""

    a: Polynomial
    b: Polynomial

    def __post_init__(self):
        a, b = _as_polynomial(self.a), _as_polynomial(self.b)
        if a.is_zero and b.is_zero:
            raise DegenerateValueError("[0 : 0] is not a section")
        common = poly_gcd(a, b)
        if common.degree > 0:
            a, b = a // common, b // common
        lead = (b if not b.is_zero else a).leading.inverse()
        object.__setattr__(self, "a", a.scale(lead))
        object.__setattr__(self, "b", b.scale(lead))

    @classmethod
    def of(
        cls,
        a: Union[Polynomial, Scalar, RationalLike],
        b: Union[Polynomial, Scalar, RationalLike] = 1,
    ) -> Section:
        return cls(_as_polynomial(a), _as_polynomial(b))

    @classmethod
    def constant(cls, value: ProjValue) -> Section:
        return cls(Polynomial.constant(value.u), Polynomial.constant(value.v))

    @property
    def vector(self) -> Vector:
        return self.a, self.b

    @property
    def is_constant(self) -> bool:
        return self.a.degree <= 0 and self.b.degree <= 0

    def evaluate(self, point: CurvePoint) -> ProjValue:
        return ProjValue(self.a.evaluate(point), self.b.evaluate(point))

    def __str__(self) -> str:
        return f"[{self.a} : {self.b}]"


def evaluate_section(section: Section, point: CurvePoint) -> ProjValue:
    return section.evaluate(as_scalar(point))


def cross(s: Section, t: Section) -> Polynomial:
    """a_s b_t - a_t b_s; its zeros are where the two sections meet."""
    return s.a * t.b - t.a * s.b


def intersection_multiplicity(s: Section, t: Section, point: CurvePoint) -> Union[int, float]:
    if s == t:
        return math.inf
    return vanishing_order(cross(s, t), point)


@dataclass(frozen=True, eq=False)
class CurveDivisor:
    """Effective divisor on the base curve: points with positive multiplicities."""

    entries: Tuple[Tuple[Scalar, int], ...] = ()

    def __post_init__(self):
        seen: Dict[Scalar, int] = {}
        for point, mult in self.entries:
            point = as_scalar(point)
            if not isinstance(mult, int) or isinstance(mult, bool) or mult < 1:
                raise InvalidDivisorError(f"multiplicity at x = {point} must be a positive integer")
            if point in seen:
                raise InvalidDivisorError(f"point x = {point} appears twice")
            seen[point] = mult
        object.__setattr__(self, "entries", tuple(seen.items()))

    @classmethod
    def from_mapping(cls, mapping: Mapping[Union[Scalar, RationalLike], int]) -> CurveDivisor:
        return cls(tuple((as_scalar(p), m) for p, m in mapping.items() if m))

    @classmethod
    def empty(cls) -> CurveDivisor:
        return cls(())

    @property
    def support(self) -> Tuple[Scalar, ...]:
        return tuple(p for p, _ in self.entries)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.entries)

    def multiplicity(self, point: CurvePoint) -> int:
        return dict(self.entries).get(as_scalar(point), 0)

    def as_dict(self) -> Dict[Scalar, int]:
        return dict(self.entries)

    def __iter__(self) -> Iterator[Tuple[Scalar, int]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __contains__(self, point: object) -> bool:
        return self.multiplicity(point) > 0

    def __add__(self, other: CurveDivisor) -> CurveDivisor:
        total = self.as_dict()
        for p, m in other:
            total[p] = total.get(p, 0) + m
        return CurveDivisor(tuple(total.items()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CurveDivisor):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __hash__(self) -> int:
        return hash(frozenset(self.entries))

    def __str__(self) -> str:
        if not self.entries:
            return "0"
        return " + ".join(f"{m}*[{p}]" for p, m in self.entries)


Pair = Tuple[Section, CurveDivisor]


@dataclass(frozen=True)
class EltData:
    """Ordered (section, divisor) pairs of a composite elementary transformation."""

    pairs: Tuple[Pair, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((s, d) for s, d in self.pairs))
        for i, (_, first) in enumerate(self.pairs):
            for j in range(i + 1, len(self.pairs)):
                for point in first.support:
                    if point in self.pairs[j][1]:
                        raise OverlappingSupportError(point, i, j)

    @property
    def sections(self) -> Tuple[Section, ...]:
        return tuple(s for s, _ in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[Pair]:
        return iter(self.pairs)


@dataclass(frozen=True)
class Frame:
    """2x2 polynomial matrix whose columns span the current lattice."""

    rows: Tuple[Tuple[Polynomial, Polynomial], Tuple[Polynomial, Polynomial]]

    @classmethod
    def identity(cls) -> Frame:
        one, zero = Polynomial.one(), Polynomial.zero()
        return cls(((one, zero), (zero, one)))

    def __matmul__(self, other: Frame) -> Frame:
        (a, b), (c, d) = self.rows
        (e, f), (g, h) = other.rows
        return Frame(((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h)))

    def apply(self, vector: Vector) -> Vector:
        (a, b), (c, d) = self.rows
        u, v = vector
        return a * u + b * v, c * u + d * v

    def adjugate(self) -> Frame:
        (a, b), (c, d) = self.rows
        return Frame(((d, -b), (-c, a)))

    def determinant(self) -> Polynomial:
        (a, b), (c, d) = self.rows
        return a * d - b * c

    def evaluate(self, point: CurvePoint) -> Tuple[Tuple[Scalar, Scalar], Tuple[Scalar, Scalar]]:
        (a, b), (c, d) = self.rows
        return (a(point), b(point)), (c(point), d(point))

    def canonical(self) -> Frame:
        """Primitive upper-triangular Hermite form [[d1, h], [0, e]] of the lattice.

        d1 and e are monic and deg h < deg d1. Two frames describe homothetic
        lattices exactly when their canonical forms agree.
        """
        entries = [p for row in self.rows for p in row]
        content = reduce(poly_gcd, entries, Polynomial.zero())
        a, b, c, d = (p // content for p in entries)
        if not c.is_zero:
            g, s, t = poly_xgcd(c, d)
            a, b = a * (d // g) - b * (c // g), a * s + b * t
            c, d = Polynomial.zero(), g
        a_scale, d_scale = a.leading.inverse(), d.leading.inverse()
        a = a.scale(a_scale)
        b, d = b.scale(d_scale), d.scale(d_scale)
        b = b % a
        return Frame(((a, b), (c, d)))

    def __str__(self) -> str:
        (a, b), (c, d) = self.rows
        return f"[[{a}, {b}], [{c}, {d}]]"


@dataclass(frozen=True)
class TransformResult:
    tracked: Tuple[Section, ...]
    steps: Tuple[Tuple[Scalar, ProjValue], ...]
    frame: Frame = field(default_factory=Frame.identity)
    origin: Tuple[Section, ...] = ()


def _step_frame(center: ProjValue, point: Scalar) -> Frame:
    """Basis of the index-one sublattice of vectors whose value at point lies on center."""
    line = Polynomial.linear(point)
    one, zero = Polynomial.one(), Polynomial.zero()
    if center.is_infinity:
        return Frame(((one, zero), (zero, line)))
    return Frame(((line, Polynomial.constant(center.u)), (zero, one)))


def _apply_schedule(
    tracked: Sequence[Section],
    schedule: Sequence[Tuple[int, Scalar]],
    frame: Optional[Frame],
) -> TransformResult:
    start = frame or Frame.identity()
    current = list(tracked)
    running = start
    performed: List[Tuple[Scalar, ProjValue]] = []
    for index, point in schedule:
        center = current[index].evaluate(point)
        step = _step_frame(center, point)
        reader = step.adjugate()
        current = [Section(*reader.apply(s.vector)) for s in current]
        running = running @ step
        performed.append((point, center))
        logger.debug(f"elementary transformation at x = {point}, center {center}")

    final = running.canonical()
    reader = final.adjugate()
    result = tuple(Section(*reader.apply(start.apply(s.vector))) for s in tracked)
    return TransformResult(result, tuple(performed), final, tuple(tracked))


def elt_single(
    tracked: Sequence[Section],
    center_index: int,
    point: CurvePoint,
    frame: Optional[Frame] = None,
) -> TransformResult:
    """Strict transforms under the elementary transformation centered on tracked[center_index] over point."""
    if not 0 <= center_index < len(tracked):
        raise IndexError(f"center index {center_index} out of range for {len(tracked)} sections")
    return _apply_schedule(tracked, [(center_index, as_scalar(point))], frame)


def processing_schedule(data: EltData) -> List[Tuple[int, Scalar]]:
    """Default order of single steps: pair by pair, point by point, mult times each."""
    return [(i, point) for i, (_, divisor) in enumerate(data) for point, mult in divisor for _ in range(mult)]


def _tracked_index(tracked: Sequence[Section], section: Section) -> int:
    try:
        return list(tracked).index(section)
    except ValueError:
        raise UntrackedSectionError(f"center section {section} is not among the tracked sections") from None


def elt_composite(
    data: EltData,
    tracked: Sequence[Section],
    frame: Optional[Frame] = None,
    schedule: Optional[Sequence[Tuple[int, Scalar]]] = None,
) -> TransformResult:
    """Apply elt_{(sigma_i, D_i)} to the tracked sections.

    Args:
        data: Pairs of center sections and divisors with disjoint supports
        tracked: Sections to transform; must contain every center section
        frame: Lattice the tracked sections are written in (identity when omitted)
        schedule: Optional permutation of processing_schedule(data)

    Returns:
        TransformResult with strict transforms in the canonical frame
    """
    tracked = list(tracked)
    centers = [_tracked_index(tracked, s) for s in data.sections]
    default = processing_schedule(data)
    if schedule is None:
        schedule = default
    elif Counter(schedule) != Counter(default):
        raise ValueError("schedule is not a permutation of the divisor points")
    return _apply_schedule(tracked, [(centers[i], point) for i, point in schedule], frame)


def divisor_matches(p: Polynomial, divisor: CurveDivisor) -> bool:
    """True when p = c * prod (x - mu)^mult over the divisor with c a nonzero constant."""
    if p.is_zero:
        return False
    rest = p
    for point, mult in divisor:
        if vanishing_order(rest, point) != mult:
            return False
        rest = rest // Polynomial.linear(point) ** mult
    return rest.degree == 0


def intersection_divisor(
    s: Section,
    t: Section,
    candidates: Optional[Iterable[CurvePoint]] = None,
) -> CurveDivisor:
    """Sum over the base of mult_mu(s, t) * mu.

    Candidate points are tried first; whatever is left of the cross polynomial
    is split over the cyclotomic field.
    """
    if s == t:
        raise CoincidentSectionsError(f"{s} meets itself everywhere")
    rest = cross(s, t)
    entries: Dict[Scalar, int] = {}
    for point in candidates or ():
        point = as_scalar(point)
        if point in entries:
            continue
        order = vanishing_order(rest, point)
        if order:
            entries[point] = order
            rest = rest // Polynomial.linear(point) ** order
    if rest.degree > 0:
        for point, order in roots_in_field(rest, require_split=True).items():
            entries[point] = entries.get(point, 0) + order
    return CurveDivisor(tuple(entries.items()))


def lemma21_recover_divisor(
    s2: Section,
    s3: Section,
    candidates: Optional[Iterable[CurvePoint]] = None,
) -> CurveDivisor:
    """Divisor of a single transformation read off two strict transforms of disjoint sections."""
    return intersection_divisor(s2, s3, candidates)


def _disjoint_partners(data: EltData, index: int, point: Scalar) -> List[int]:
    section = data.pairs[index][0]
    return [
        j
        for j, (other, _) in enumerate(data)
        if j != index and intersection_multiplicity(section, other, point) == 0
    ]


def inverse_hypothesis_violations(data: EltData) -> List[Tuple[int, Scalar]]:
    """Pairs (i, mu) with mu in |D_i| lacking a unique section disjoint from sigma_i over mu."""
    return [
        (i, point)
        for i, (_, divisor) in enumerate(data)
        for point in divisor.support
        if len(_disjoint_partners(data, i, point)) != 1
    ]


def inverse_elt_data(data: EltData, transforms: TransformResult) -> EltData:
    """Data of the inverse transformation on the strict transforms.

    Each point mu of |D_i| moves, with its multiplicity, to the unique partner
    section disjoint from sigma_i over mu. When no center section qualifies,
    a tracked section outside the data that is disjoint from sigma_i is used.
    """
    origin = list(transforms.origin)
    indices = [_tracked_index(origin, s) for s in data.sections]
    bystanders = [k for k in range(len(origin)) if k not in indices]
    assigned: Dict[int, Dict[Scalar, int]] = {}

    for i, (section, divisor) in enumerate(data):
        for point, mult in divisor:
            partners = _disjoint_partners(data, i, point)
            if len(partners) > 1:
                raise InverseHypothesisError(i, point, partners)
            if partners:
                target = indices[partners[0]]
            else:
                fallback = [
                    k for k in bystanders if intersection_multiplicity(section, origin[k], point) == 0
                ]
                if not fallback:
                    raise InverseHypothesisError(i, point)
                target = fallback[0]
            assigned.setdefault(target, {})[point] = mult

    order = indices + [k for k in bystanders if k in assigned]
    return EltData(
        tuple(
            (transforms.tracked[k], CurveDivisor(tuple(assigned.get(k, {}).items())))
            for k in order
        )
    )


def roundtrip_verify(data: EltData, tracked: Sequence[Section]) -> bool:
    """True when the inverse data undoes the transformation exactly."""
    forward = elt_composite(data, tracked)
    inverse = inverse_elt_data(data, forward)
    back = elt_composite(inverse, forward.tracked, frame=forward.frame)
    ok = back.tracked == tuple(tracked)
    if not ok:
        logger.warning(f"round trip mismatch: {[str(s) for s in back.tracked]}")
    return ok
