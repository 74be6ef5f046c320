"""Exception hierarchy for cubic-bundles."""

from typing import Any, Optional, Sequence


class CubicBundleError(Exception):
    """Base class for every error raised by the library."""


class FieldDivisionError(CubicBundleError, ZeroDivisionError):
    """Division by the zero element of a cyclotomic field or by the zero polynomial."""


class DegenerateValueError(CubicBundleError, ValueError):
    """A projective value or section with both coordinates zero."""


class InvalidDivisorError(CubicBundleError, ValueError):
    """A divisor with a non-positive multiplicity or a repeated point."""


class SingularTransformError(CubicBundleError):
    """A Möbius transformation with vanishing determinant."""


class OverlappingSupportError(CubicBundleError):
    """Two divisors of one transformation share a point."""

    def __init__(self, point: Any, first: int, second: int):
        self.point = point
        self.first = first
        self.second = second
        super().__init__(
            f"divisor supports of pairs {first} and {second} overlap at x = {point}"
        )


class UntrackedSectionError(CubicBundleError, ValueError):
    """A transformation center that is not among the tracked sections."""


class CoincidentSectionsError(CubicBundleError):
    """Two sections that were required to differ are equal."""


class InverseHypothesisError(CubicBundleError):
    """No unique partner section exists for the inverse transformation."""

    def __init__(self, index: int, point: Any, partners: Sequence[int] = ()):
        self.index = index
        self.point = point
        self.partners = tuple(partners)
        if self.partners:
            detail = f"sections {list(self.partners)} are all disjoint from it"
        else:
            detail = "no section is disjoint from it"
        super().__init__(f"pair {index} at x = {point}: {detail}")


class UnsplitPolynomialError(CubicBundleError):
    """A polynomial whose roots do not all lie in the working cyclotomic field."""


class NodePreimageError(CubicBundleError):
    """A fiber value that maps onto the node of a nodal cubic."""


class CuspidalFiberError(CubicBundleError):
    """A group-law computation requested on a cuspidal fiber."""


class DegenerateConfigurationError(CubicBundleError, ValueError):
    """Construction data whose fiber constants are not pairwise distinct, or missing."""


class InsufficientConductorError(CubicBundleError):
    """The working field does not contain the roots of unity a computation needs."""

    def __init__(self, message: str, required: int):
        self.required = required
        super().__init__(f"{message} (embed into conductor {required})")


class RootOfUnityRequiredError(CubicBundleError, ValueError):
    """An identity that only holds for roots of unity was requested for another value."""


class TrivialRatioError(CubicBundleError, ValueError):
    """The ratio 1 belongs to the section through infinity and has no Cartier datum."""


class DescriptorInvariantError(CubicBundleError):
    """A bundle descriptor failed one or more structural checks."""

    def __init__(self, findings: Sequence[str]):
        self.findings = list(findings)
        super().__init__("; ".join(self.findings))


class ScenarioValidationError(CubicBundleError):
    """A scenario file that does not parse or does not validate."""

    def __init__(
        self,
        message: str,
        line: Optional[int] = None,
        column: Optional[int] = None,
        path: Optional[str] = None,
    ):
        self.message = message
        self.line = line
        self.column = column
        self.path = path
        parts = []
        if path:
            parts.append(f"at {path}")
        if line is not None:
            parts.append(f"line {line}, column {column}")
        location = f" ({', '.join(parts)})" if parts else ""
        super().__init__(f"{message}{location}")


class ReportFormatError(CubicBundleError, ValueError):
    """Structured report text that does not match the report schema."""
