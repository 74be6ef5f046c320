"""Hypothesis strategies shared by the test modules."""

import math

from hypothesis import strategies as st

from cubic_bundles.exact_field import Polynomial, ProjValue, Scalar, interpolate, totient
from cubic_bundles.projectivity import ConstructionInput
from cubic_bundles.ruled_surface import CurveDivisor, EltData, Section

CONDUCTORS = [1, 3, 4, 5, 6, 8, 12]

rationals = st.fractions(min_value=-6, max_value=6, max_denominator=5)
nonzero_rationals = rationals.filter(lambda q: q != 0)


@st.composite
def scalars(draw, conductor=None):
    n = conductor if conductor is not None else draw(st.sampled_from(CONDUCTORS))
    coeffs = draw(st.lists(rationals, min_size=totient(n), max_size=totient(n)))
    return Scalar(n, tuple(coeffs))


def nonzero_scalars(conductor=None):
    return scalars(conductor).filter(lambda s: not s.is_zero)


@st.composite
def polynomials(draw, conductor=1, max_degree=4):
    coeffs = draw(st.lists(scalars(conductor), max_size=max_degree + 1))
    return Polynomial(tuple(coeffs))


def nonzero_polynomials(conductor=1, max_degree=4):
    return polynomials(conductor, max_degree).filter(lambda p: not p.is_zero)


@st.composite
def admissible_elt_data(draw, min_pairs=1, max_pairs=4, min_points=0, max_points=3):
    """Center sections, bystanders and divisors meeting the unique-partner hypothesis.

    Over every point of D_i all sections except one partner pass through
    sigma_i; the partner is another center or, for a single center, a bystander.
    """
    n = draw(st.integers(min_value=min_pairs, max_value=max_pairs))
    bystanders = draw(st.integers(min_value=1 if n == 1 else 0, max_value=2))
    total = n + bystanders
    conductor = draw(st.sampled_from(CONDUCTORS))
    points = draw(st.lists(scalars(conductor), min_size=min_points, max_size=max_points, unique=True))

    values = [[None] * len(points) for _ in range(total)]
    divisors = [dict() for _ in range(n)]
    for index, point in enumerate(points):
        center = draw(st.integers(0, n - 1))
        choices = [j for j in range(total) if j != center]
        if n > 1:
            choices = [j for j in range(n) if j != center]
        partner = draw(st.sampled_from(choices))
        common = draw(st.integers(-3, 3))
        for k in range(total):
            values[k][index] = common + 1 if k == partner else common
        divisors[center][point] = draw(st.integers(1, 3))

    vanishing = Polynomial.from_roots(points)
    sections = []
    for k in range(total):
        through = interpolate(points, [Scalar.from_rational(v) for v in values[k]])
        sections.append(Section.of(through + vanishing.scale(k + 1)))

    data = EltData(tuple((sections[i], CurveDivisor.from_mapping(divisors[i])) for i in range(n)))
    return data, sections


@st.composite
def projective_inputs(draw, max_constants=4, max_degree=3):
    """Constants s * zeta_N^j with distinct j and disjoint divisors of small degree."""
    conductor = draw(st.sampled_from([1, 3, 4, 6, 8, 12]))
    roots = math.lcm(2, conductor)
    n = draw(st.integers(min_value=1, max_value=min(max_constants, roots)))
    powers = draw(st.lists(st.integers(0, roots - 1), min_size=n, max_size=n, unique=True))
    scale = draw(nonzero_rationals)
    constants = tuple(ProjValue.of(Scalar.root_of_unity(roots, j) * scale) for j in powers)

    points = draw(st.lists(st.integers(-5, 5), max_size=2 * n, unique=True))
    divisors = [dict() for _ in range(n)]
    for point in points:
        owner = draw(st.integers(0, n - 1))
        if sum(divisors[owner].values()) < max_degree:
            divisors[owner][point] = draw(st.integers(1, max_degree - sum(divisors[owner].values())))
    return ConstructionInput(
        conductor=roots,
        c0=ProjValue.of(0),
        c_inf=ProjValue.infinity(),
        constants=constants,
        divisors=tuple(CurveDivisor.from_mapping(d) for d in divisors),
    )
