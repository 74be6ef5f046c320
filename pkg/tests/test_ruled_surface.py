import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from cubic_bundles.errors import (
    CoincidentSectionsError,
    InverseHypothesisError,
    OverlappingSupportError,
    UntrackedSectionError,
)
from cubic_bundles.exact_field import Polynomial, ProjValue, Scalar
from cubic_bundles.ruled_surface import (
    CurveDivisor,
    EltData,
    Section,
    cross,
    divisor_matches,
    elt_composite,
    elt_single,
    evaluate_section,
    intersection_divisor,
    intersection_multiplicity,
    inverse_elt_data,
    inverse_hypothesis_violations,
    lemma21_recover_divisor,
    processing_schedule,
    roundtrip_verify,
)

from strategies import admissible_elt_data

x = Polynomial.x()
ZERO = Section.of(0)
INFINITY = Section.constant(ProjValue.infinity())


def const(value) -> Section:
    return Section.of(value)


@st.composite
def section_triples(draw):
    """Three sections, some through a common value over point, plus a second point."""
    point = draw(st.integers(-3, 3))
    sections = []
    for _ in range(3):
        value = draw(st.integers(0, 2))
        rest = Polynomial(tuple(Scalar.from_rational(c) for c in draw(st.lists(st.integers(-3, 3), max_size=3))))
        sections.append(Section.of(Polynomial.linear(point) * rest + value))
    center = draw(st.integers(0, 2))
    other = draw(st.integers(-3, 3).filter(lambda p: p != point))
    return sections, center, point, other


class TestSections:
    def test_normal_form(self):
        s = Section(x * 2, x * 4)
        assert s.a == Polynomial.constant(Fraction(1, 2))
        assert s.b == Polynomial.one()
        assert INFINITY.b.is_zero and INFINITY.a == Polynomial.one()

    def test_evaluate(self):
        assert evaluate_section(Section.of(x), 0) == ProjValue.of(0)
        assert evaluate_section(INFINITY, 17) == ProjValue.infinity()
        assert evaluate_section(Section(x**2 + 1, x), 2) == ProjValue.of(Fraction(5, 2))

    def test_intersection_multiplicity(self):
        for m in (1, 2, 3):
            assert intersection_multiplicity(Section.of(x**m), Section.of(-(x**m)), 0) == m
        assert intersection_multiplicity(const(0), const(1), 0) == 0
        assert intersection_multiplicity(Section.of(x**2 + x), Section.of(x), 0) == 2
        assert intersection_multiplicity(Section.of(x), Section.of(x), 0) == math.inf


class TestDivisors:
    def test_rejects_bad_entries(self):
        with pytest.raises(ValueError):
            CurveDivisor(((Scalar.zero(), 0),))
        with pytest.raises(ValueError):
            CurveDivisor(((Scalar.zero(), 1), (Scalar.zero(3), 2)))

    def test_equality_ignores_order(self):
        assert CurveDivisor.from_mapping({0: 1, 1: 2}) == CurveDivisor.from_mapping({1: 2, 0: 1})
        assert CurveDivisor.from_mapping({0: 1, 1: 2}).degree == 3

    def test_sum(self):
        total = CurveDivisor.from_mapping({0: 1, 1: 2}) + CurveDivisor.from_mapping({1: 1, 3: 1})
        assert total == CurveDivisor.from_mapping({0: 1, 1: 3, 3: 1})
        assert sum([total], CurveDivisor.empty()) == total

    def test_overlapping_supports(self):
        with pytest.raises(OverlappingSupportError):
            EltData(((const(1), CurveDivisor.from_mapping({0: 1})), (const(2), CurveDivisor.from_mapping({0: 2}))))

    def test_divisor_matches(self):
        p = Polynomial.from_roots([0, 1, 1]).scale(5)
        assert divisor_matches(p, CurveDivisor.from_mapping({0: 1, 1: 2}))
        assert not divisor_matches(p, CurveDivisor.from_mapping({0: 1, 1: 1}))
        assert not divisor_matches(p * x, CurveDivisor.from_mapping({0: 1, 1: 2}))


class TestEltSingle:
    def test_center_on_sections_through_it(self):
        result = elt_single([ZERO, Section.of(x)], 0, 0)
        assert result.tracked == (ZERO, const(1))
        assert intersection_multiplicity(*result.tracked, 0) == 0

    def test_sections_off_the_center_meet(self):
        result = elt_single([const(1), const(2), ZERO], 2, 0)
        s1, s2, _ = result.tracked
        assert s1.evaluate(0) == ProjValue.infinity()
        assert s2.evaluate(0) == ProjValue.infinity()
        assert intersection_multiplicity(s1, s2, 0) == 1

    def test_two_sections_through_the_center(self):
        result = elt_single([Section.of(x), Section.of(-x), ZERO], 2, 0)
        assert result.tracked[:2] == (const(1), const(-1))
        assert result.steps == ((Scalar.zero(), ProjValue.of(0)),)

    @given(section_triples())
    def test_multiplicity_rules(self, case):
        sections, center_index, point, other = case
        assume(len(set(sections)) == 3)
        center = sections[center_index].evaluate(point)
        after = elt_single(sections, center_index, point).tracked
        for i in range(3):
            for j in range(i + 1, 3):
                before = intersection_multiplicity(sections[i], sections[j], point)
                now = intersection_multiplicity(after[i], after[j], point)
                through = [sections[k].evaluate(point) == center for k in (i, j)]
                if all(through):
                    assert now == before - 1
                elif not any(through):
                    assert now == before + 1
                else:
                    assert now == 0
                assert intersection_multiplicity(after[i], after[j], other) == intersection_multiplicity(
                    sections[i], sections[j], other
                )


class TestEltComposite:
    def test_empty_data(self):
        tracked = [const(1), Section.of(x)]
        assert elt_composite(EltData(()), tracked).tracked == tuple(tracked)

    def test_two_pairs(self):
        s1, s2 = const(1), const(-1)
        data = EltData(((s1, CurveDivisor.from_mapping({0: 1})), (s2, CurveDivisor.from_mapping({1: 1}))))
        result = elt_composite(data, [ZERO, INFINITY, s1, s2])
        sigma0, sigma_inf = result.tracked[:2]
        assert intersection_multiplicity(sigma0, sigma_inf, 0) == 1
        assert intersection_multiplicity(sigma0, sigma_inf, 1) == 1
        assert divisor_matches(cross(sigma0, sigma_inf), CurveDivisor.from_mapping({0: 1, 1: 1}))

    def test_processing_order(self):
        s1, s2 = const(1), const(-1)
        data = EltData(((s1, CurveDivisor.from_mapping({0: 1})), (s2, CurveDivisor.from_mapping({1: 1}))))
        tracked = [ZERO, INFINITY, s1, s2]
        forward = elt_composite(data, tracked)
        backward = elt_composite(data, tracked, schedule=list(reversed(processing_schedule(data))))
        assert forward.tracked == backward.tracked
        assert forward.frame == backward.frame

    @settings(max_examples=25)
    @given(admissible_elt_data(min_pairs=2, min_points=2), st.randoms(use_true_random=False))
    def test_order_independence(self, case, random):
        data, sections = case
        schedule = processing_schedule(data)
        assume(len(data) >= 2 and len(schedule) >= 2)
        if len(schedule) <= 5:
            orders = list(dict.fromkeys(itertools.permutations(schedule)))
        else:
            orders = [list(reversed(schedule))]
            for _ in range(40):
                shuffled = list(schedule)
                random.shuffle(shuffled)
                orders.append(shuffled)
        expected = elt_composite(data, sections)
        for order in orders:
            result = elt_composite(data, sections, schedule=list(order))
            assert result.frame == expected.frame
            assert result.tracked == expected.tracked

    def test_rejects_foreign_schedule(self):
        data = EltData(((const(1), CurveDivisor.from_mapping({0: 1})),))
        with pytest.raises(ValueError):
            elt_composite(data, [const(1), ZERO], schedule=[(0, Scalar.one())])

    def test_center_must_be_tracked(self):
        data = EltData(((const(1), CurveDivisor.from_mapping({0: 1})),))
        with pytest.raises(UntrackedSectionError):
            elt_composite(data, [ZERO, INFINITY])


class TestRecoverDivisor:
    def test_examples(self):
        assert lemma21_recover_divisor(Section.of(x), Section.of(-x)) == CurveDivisor.from_mapping({0: 1})
        assert lemma21_recover_divisor(ZERO, INFINITY) == CurveDivisor.empty()
        with pytest.raises(CoincidentSectionsError):
            intersection_divisor(ZERO, ZERO)

    def test_double_point(self):
        s1, s2, s3 = const(1), const(2), const(3)
        data = EltData(((s1, CurveDivisor.from_mapping({0: 2})),))
        _, t2, t3 = elt_composite(data, [s1, s2, s3]).tracked
        assert lemma21_recover_divisor(t2, t3) == CurveDivisor.from_mapping({0: 2})

    @settings(max_examples=50)
    @given(
        st.lists(st.integers(-5, 5), min_size=3, max_size=3, unique=True),
        st.dictionaries(st.integers(-4, 4), st.integers(1, 3), max_size=3),
    )
    def test_recovers_single_divisor(self, values, mapping):
        s1, s2, s3 = (const(v) for v in values)
        divisor = CurveDivisor.from_mapping(mapping)
        _, t2, t3 = elt_composite(EltData(((s1, divisor),)), [s1, s2, s3]).tracked
        assert lemma21_recover_divisor(t2, t3) == divisor


class TestInverse:
    def test_single_pair_moves_to_partner(self):
        s1, s2 = const(1), const(2)
        divisor = CurveDivisor.from_mapping({0: 1, 3: 2})
        data = EltData(((s1, divisor),))
        forward = elt_composite(data, [s1, s2])
        inverse = inverse_elt_data(data, forward)
        assert inverse.pairs == ((forward.tracked[0], CurveDivisor.empty()), (forward.tracked[1], divisor))

    def test_empty_data(self):
        forward = elt_composite(EltData(()), [ZERO])
        assert inverse_elt_data(EltData(()), forward).pairs == ()
        assert roundtrip_verify(EltData(()), [ZERO, INFINITY])

    def test_single_pair_roundtrip(self):
        data = EltData(((const(1), CurveDivisor.from_mapping({0: 1})),))
        assert roundtrip_verify(data, [const(1), ZERO, INFINITY])

    def test_two_pair_roundtrip(self):
        s1, s2 = const(1), const(-1)
        data = EltData(((s1, CurveDivisor.from_mapping({0: 1})), (s2, CurveDivisor.from_mapping({1: 1}))))
        assert roundtrip_verify(data, [ZERO, INFINITY, s1, s2])

    def test_hypothesis_violation(self):
        s1, s2, s3 = const(1), const(2), const(3)
        data = EltData(
            ((s1, CurveDivisor.from_mapping({0: 1})), (s2, CurveDivisor.empty()), (s3, CurveDivisor.empty()))
        )
        assert inverse_hypothesis_violations(data) == [(0, Scalar.zero())]
        with pytest.raises(InverseHypothesisError) as caught:
            inverse_elt_data(data, elt_composite(data, [s1, s2, s3]))
        assert caught.value.index == 0

    @settings(max_examples=100)
    @given(admissible_elt_data())
    def test_roundtrip(self, case):
        data, sections = case
        if len(data) > 1:
            assert inverse_hypothesis_violations(data) == []
        assert roundtrip_verify(data, sections)
