"""Exact arithmetic over cyclotomic fields.

Scalars live in Q(zeta_N) for a conductor N carried by each value; mixed
conductors are embedded into the lcm. Polynomials in the base coordinate x
have Scalar coefficients, lowest degree first.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, TypeAlias, Union

from sympy import I, Poly, QQ, Rational, Symbol, divisors, exp, factorint, pi

from .errors import (
    DegenerateValueError,
    FieldDivisionError,
    SingularTransformError,
    UnsplitPolynomialError,
)

logger = logging.getLogger(__name__)

RationalLike = Union[int, Fraction]

_X = Symbol("x")


# Integer and rational coefficient lists, lowest degree first.

def _trim(coeffs: List[Any]) -> List[Any]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _exact_quotient(numerator: List[int], monic: Sequence[int]) -> List[int]:
    remainder = list(numerator)
    shift = len(remainder) - len(monic)
    quotient = [0] * (shift + 1)
    for k in range(shift, -1, -1):
        factor = remainder[k + len(monic) - 1]
        quotient[k] = factor
        if factor:
            for i, c in enumerate(monic):
                remainder[k + i] -= factor * c
    if any(remainder):
        raise ArithmeticError("cyclotomic division left a remainder")
    return quotient


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> Tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, lowest degree first."""
    if n < 1:
        raise ValueError(f"conductor must be positive, got {n}")
    numerator = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        numerator = _exact_quotient(numerator, cyclotomic_polynomial(d))
    return tuple(numerator)


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _mobius(n: int) -> int:
    exponents = factorint(n).values()
    if any(e > 1 for e in exponents):
        return 0
    return -1 if len(exponents) % 2 else 1


def _reduce_mod(coeffs: Sequence[Fraction], modulus: Sequence[int]) -> List[Fraction]:
    remainder = list(coeffs)
    degree = len(modulus) - 1
    for k in range(len(remainder) - 1, degree - 1, -1):
        factor = remainder[k]
        if factor:
            base = k - degree
            for i, c in enumerate(modulus):
                if c:
                    remainder[base + i] -= factor * c
    return remainder[:degree]


def _q_divmod(a: List[Fraction], b: List[Fraction]) -> Tuple[List[Fraction], List[Fraction]]:
    remainder = _trim(list(a))
    b = _trim(list(b))
    if len(remainder) < len(b):
        return [], remainder
    lead = b[-1]
    quotient = [Fraction(0)] * (len(remainder) - len(b) + 1)
    while len(remainder) >= len(b) and remainder:
        shift = len(remainder) - len(b)
        factor = remainder[-1] / lead
        quotient[shift] = factor
        for i, c in enumerate(b):
            remainder[shift + i] -= factor * c
        _trim(remainder)
    return quotient, remainder


def _q_sub_mul(a: List[Fraction], q: List[Fraction], b: List[Fraction]) -> List[Fraction]:
    out = list(a) + [Fraction(0)] * max(0, len(q) + len(b) - 1 - len(a))
    for i, x in enumerate(q):
        if x:
            for j, y in enumerate(b):
                out[i + j] -= x * y
    return _trim(out)


def _q_inverse_mod(a: List[Fraction], modulus: Sequence[int]) -> List[Fraction]:
    """Inverse of a modulo an irreducible modulus, by the extended Euclidean algorithm."""
    r0, r1 = [Fraction(c) for c in modulus], _trim(list(a))
    s0: List[Fraction] = []
    s1: List[Fraction] = [Fraction(1)]
    while len(r1) > 1:
        q, r = _q_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _q_sub_mul(s0, q, s1)
    if not r1:
        raise FieldDivisionError("element is not invertible")
    return [c / r1[0] for c in s1]


@dataclass(frozen=True, eq=False)
class Scalar:
    """Element of Q(zeta_N) in the power basis 1, zeta, ..., zeta^(phi(N)-1)."""

    conductor: int
    coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        if self.conductor < 1:
            raise ValueError(f"conductor must be positive, got {self.conductor}")
        modulus = cyclotomic_polynomial(self.conductor)
        reduced = _reduce_mod([Fraction(c) for c in self.coeffs], modulus)
        reduced += [Fraction(0)] * (len(modulus) - 1 - len(reduced))
        object.__setattr__(self, "coeffs", tuple(reduced))

    @classmethod
    def from_rational(cls, value: RationalLike, conductor: int = 1) -> Scalar:
        return cls(conductor, (Fraction(value),))

    @classmethod
    def zero(cls, conductor: int = 1) -> Scalar:
        return cls(conductor, ())

    @classmethod
    def one(cls, conductor: int = 1) -> Scalar:
        return cls(conductor, (Fraction(1),))

    @classmethod
    def root_of_unity(cls, n: int, power: int = 1) -> Scalar:
        if n < 1:
            raise ValueError(f"order must be positive, got {n}")
        exponent = power % n
        return cls(n, tuple([Fraction(0)] * exponent + [Fraction(1)]))

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    @property
    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def embed(self, conductor: int) -> Scalar:
        """Image under Q(zeta_N) -> Q(zeta_M), zeta_N = zeta_M^(M/N)."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError(
                f"Q(zeta_{self.conductor}) does not embed into Q(zeta_{conductor})"
            )
        step = conductor // self.conductor
        spread = [Fraction(0)] * ((len(self.coeffs) - 1) * step + 1)
        for i, c in enumerate(self.coeffs):
            spread[i * step] = c
        return Scalar(conductor, tuple(spread))

    def trace(self) -> Fraction:
        """Trace to Q divided by the degree; independent of the conductor."""
        n = self.conductor
        total = Fraction(0)
        for i, c in enumerate(self.coeffs):
            if c:
                order = n // math.gcd(n, i)
                total += c * Fraction(_mobius(order), totient(order))
        return total

    def inverse(self) -> Scalar:
        if self.is_zero:
            raise FieldDivisionError("division by zero in a cyclotomic field")
        modulus = cyclotomic_polynomial(self.conductor)
        return Scalar(self.conductor, tuple(_q_inverse_mod(list(self.coeffs), modulus)))

    def _aligned(self, other: Scalar) -> Tuple[int, Tuple[Fraction, ...], Tuple[Fraction, ...]]:
        n = math.lcm(self.conductor, other.conductor)
        return n, self.embed(n).coeffs, other.embed(n).coeffs

    def __add__(self, other: Any) -> Scalar:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        n, a, b = self._aligned(other)
        return Scalar(n, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        return Scalar(self.conductor, tuple(-c for c in self.coeffs))

    def __sub__(self, other: Any) -> Scalar:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> Scalar:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other: Any) -> Scalar:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        n, a, b = self._aligned(other)
        product = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    product[i + j] += x * y
        return Scalar(n, tuple(product))

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> Scalar:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: Any) -> Scalar:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent: int) -> Scalar:
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = Scalar.one(self.conductor)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other: object) -> bool:
        other = _coerce(other)
        if other is None:
            return NotImplemented
        _, a, b = self._aligned(other)
        return a == b

    def __hash__(self) -> int:
        return hash(self.trace())

    def as_expr(self, zeta: Symbol):
        """The element as a sympy polynomial expression in a symbol standing for zeta_N."""
        return sum(
            (Rational(c.numerator, c.denominator) * zeta**i for i, c in enumerate(self.coeffs) if c),
            Rational(0),
        )

    def __repr__(self) -> str:
        return f"Scalar({self.conductor}, {[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if self.is_rational:
            return str(self.coeffs[0])
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            power = "" if i == 0 else (f"z{self.conductor}" if i == 1 else f"z{self.conductor}^{i}")
            if not power:
                terms.append(str(c))
            elif c == 1:
                terms.append(power)
            elif c == -1:
                terms.append(f"-{power}")
            else:
                terms.append(f"{c}*{power}")
        return "(" + " + ".join(terms).replace("+ -", "- ") + ")"


CurvePoint: TypeAlias = Scalar


def _coerce(value: Any) -> Optional[Scalar]:
    if isinstance(value, Scalar):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Scalar.from_rational(value)
    return None


def as_scalar(value: Union[Scalar, RationalLike]) -> Scalar:
    scalar = _coerce(value)
    if scalar is None:
        raise TypeError(f"cannot interpret {value!r} as a cyclotomic scalar")
    return scalar


def make_root_of_unity(n: int, power: int) -> Scalar:
    """zeta_n^power as a Scalar of conductor n."""
    return Scalar.root_of_unity(n, power)


def is_root_of_unity(u: Scalar) -> Optional[int]:
    """Multiplicative order of u, or None when u is not a root of unity.

    The torsion of Q(zeta_N)* is generated by -zeta_N, so only divisors of
    lcm(2, N) need testing.
    """
    u = as_scalar(u)
    if u.is_zero:
        return None
    for d in divisors(math.lcm(2, u.conductor)):
        if u**d == 1:
            return d
    return None


def format_scalar(value: Scalar) -> Dict[str, Any]:
    return {
        "conductor": value.conductor,
        "coeffs": [_format_fraction(c) for c in value.coeffs],
    }


def _format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_scalar(payload: Any) -> Scalar:
    """Read a Scalar from its JSON form, a rational string like "-3/4", or an int."""
    if isinstance(payload, Scalar):
        return payload
    if isinstance(payload, bool):
        raise ValueError("booleans are not scalars")
    if isinstance(payload, int):
        return Scalar.from_rational(payload)
    if isinstance(payload, str):
        return Scalar.from_rational(Fraction(payload.strip()))
    if isinstance(payload, Mapping):
        try:
            conductor = int(payload["conductor"])
            coeffs = payload["coeffs"]
        except (KeyError, TypeError, ValueError) as e:
            raise ValueError(f"scalar needs 'conductor' and 'coeffs': {e}") from e
        if conductor < 1:
            raise ValueError(f"conductor must be positive, got {conductor}")
        return Scalar(conductor, tuple(Fraction(str(c)) for c in coeffs))
    raise ValueError(f"cannot read a scalar from {payload!r}")


@dataclass(frozen=True)
class ProjValue:
    """Point [u : v] of P^1 over the scalar field, stored with v = 1 or u = 1."""

    u: Scalar
    v: Scalar

    def __post_init__(self):
        u, v = as_scalar(self.u), as_scalar(self.v)
        if v:
            u, v = u / v, Scalar.one()
        elif u:
            u, v = Scalar.one(), Scalar.zero()
        else:
            raise DegenerateValueError("[0 : 0] is not a point of the projective line")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @classmethod
    def of(cls, u: Union[Scalar, RationalLike], v: Union[Scalar, RationalLike] = 1) -> ProjValue:
        return cls(as_scalar(u), as_scalar(v))

    @classmethod
    def infinity(cls) -> ProjValue:
        return cls(Scalar.one(), Scalar.zero())

    @property
    def is_infinity(self) -> bool:
        return self.v.is_zero

    @property
    def value(self) -> Optional[Scalar]:
        return None if self.is_infinity else self.u

    def __str__(self) -> str:
        return f"[{self.u}:{self.v}]"


ScalarMatrix: TypeAlias = Tuple[Tuple[Scalar, Scalar], Tuple[Scalar, Scalar]]


def moebius_apply(matrix: Sequence[Sequence[Any]], point: ProjValue) -> ProjValue:
    """[u:v] -> [m00 u + m01 v : m10 u + m11 v]."""
    (a, b), (c, d) = [[as_scalar(e) for e in row] for row in matrix]
    if (a * d - b * c).is_zero:
        raise SingularTransformError("Möbius matrix has zero determinant")
    return ProjValue(a * point.u + b * point.v, c * point.u + d * point.v)


@dataclass(frozen=True)
class Polynomial:
    """Univariate polynomial in x over cyclotomic scalars, lowest degree first."""

    coeffs: Tuple[Scalar, ...] = ()

    def __post_init__(self):
        coeffs = [as_scalar(c) for c in self.coeffs]
        object.__setattr__(self, "coeffs", tuple(_trim(coeffs)))

    @classmethod
    def zero(cls) -> Polynomial:
        return cls(())

    @classmethod
    def constant(cls, value: Union[Scalar, RationalLike]) -> Polynomial:
        return cls((as_scalar(value),))

    @classmethod
    def one(cls) -> Polynomial:
        return cls.constant(1)

    @classmethod
    def monomial(cls, degree: int, coefficient: Union[Scalar, RationalLike] = 1) -> Polynomial:
        return cls(tuple([Scalar.zero()] * degree + [as_scalar(coefficient)]))

    @classmethod
    def x(cls) -> Polynomial:
        return cls.monomial(1)

    @classmethod
    def linear(cls, root: Union[Scalar, RationalLike]) -> Polynomial:
        """x - root."""
        return cls((-as_scalar(root), Scalar.one()))

    @classmethod
    def from_roots(cls, roots: Iterable[Union[Scalar, RationalLike]]) -> Polynomial:
        return reduce(lambda acc, r: acc * cls.linear(r), roots, cls.one())

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Scalar:
        if self.is_zero:
            raise FieldDivisionError("the zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def conductor(self) -> int:
        return reduce(math.lcm, (c.conductor for c in self.coeffs), 1)

    def __bool__(self) -> bool:
        return not self.is_zero

    def __add__(self, other: Any) -> Polynomial:
        other = _as_polynomial(other)
        if other is None:
            return NotImplemented
        size = max(len(self.coeffs), len(other.coeffs))
        zero = Scalar.zero()
        return Polynomial(
            tuple(
                (self.coeffs[i] if i < len(self.coeffs) else zero)
                + (other.coeffs[i] if i < len(other.coeffs) else zero)
                for i in range(size)
            )
        )

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: Any) -> Polynomial:
        other = _as_polynomial(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Any) -> Polynomial:
        other = _as_polynomial(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other: Any) -> Polynomial:
        other = _as_polynomial(other)
        if other is None:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Polynomial.zero()
        product = [Scalar.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        product[i + j] = product[i + j] + a * b
        return Polynomial(tuple(product))

    __rmul__ = __mul__

    def scale(self, factor: Union[Scalar, RationalLike]) -> Polynomial:
        factor = as_scalar(factor)
        return Polynomial(tuple(c * factor for c in self.coeffs))

    def __pow__(self, exponent: int) -> Polynomial:
        if exponent < 0:
            raise ValueError("negative powers of polynomials are not polynomials")
        result, base = Polynomial.one(), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __divmod__(self, other: Polynomial) -> Tuple[Polynomial, Polynomial]:
        if other.is_zero:
            raise FieldDivisionError("polynomial division by zero")
        remainder = list(self.coeffs)
        if len(remainder) < len(other.coeffs):
            return Polynomial.zero(), self
        inverse_lead = other.leading.inverse()
        quotient = [Scalar.zero()] * (len(remainder) - len(other.coeffs) + 1)
        for shift in range(len(quotient) - 1, -1, -1):
            factor = remainder[shift + len(other.coeffs) - 1] * inverse_lead
            quotient[shift] = factor
            if factor:
                for i, c in enumerate(other.coeffs):
                    remainder[shift + i] = remainder[shift + i] - factor * c
        return Polynomial(tuple(quotient)), Polynomial(tuple(remainder[: len(other.coeffs) - 1]))

    def __floordiv__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[0]

    def __mod__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[1]

    def monic(self) -> Polynomial:
        if self.is_zero:
            return self
        return self.scale(self.leading.inverse())

    def evaluate(self, point: Union[Scalar, RationalLike]) -> Scalar:
        point = as_scalar(point)
        result = Scalar.zero()
        for c in reversed(self.coeffs):
            result = result * point + c
        return result

    __call__ = evaluate

    def shift(self, point: Union[Scalar, RationalLike]) -> Polynomial:
        """p(x + point); its low coefficients are the Taylor coefficients at point."""
        step = Polynomial((as_scalar(point), Scalar.one()))
        result = Polynomial.zero()
        for c in reversed(self.coeffs):
            result = result * step + Polynomial.constant(c)
        return result

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            power = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not power:
                terms.append(str(c))
            elif c == 1:
                terms.append(power)
            elif c == -1:
                terms.append(f"-{power}")
            else:
                terms.append(f"{c}*{power}")
        return " + ".join(terms).replace("+ -", "- ")


def _as_polynomial(value: Any) -> Optional[Polynomial]:
    if isinstance(value, Polynomial):
        return value
    scalar = _coerce(value)
    if scalar is None:
        return None
    return Polynomial.constant(scalar)


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor; zero only when both inputs are zero."""
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Polynomial, b: Polynomial) -> Tuple[Polynomial, Polynomial, Polynomial]:
    """(g, s, t) with s*a + t*b = g and g the monic gcd."""
    r0, r1 = a, b
    s0, s1 = Polynomial.one(), Polynomial.zero()
    t0, t1 = Polynomial.zero(), Polynomial.one()
    while not r1.is_zero:
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero:
        return r0, s0, t0
    inverse_lead = r0.leading.inverse()
    return r0.scale(inverse_lead), s0.scale(inverse_lead), t0.scale(inverse_lead)


def interpolate(points: Sequence[Scalar], values: Sequence[Scalar]) -> Polynomial:
    """Lagrange interpolation through distinct points."""
    if len(points) != len(values):
        raise ValueError("interpolation needs as many values as points")
    result = Polynomial.zero()
    for i, (p, v) in enumerate(zip(points, values)):
        others = [q for j, q in enumerate(points) if j != i]
        basis = Polynomial.from_roots(others)
        denominator = basis.evaluate(p)
        if denominator.is_zero:
            raise ValueError("interpolation points must be distinct")
        result = result + basis.scale(as_scalar(v) / denominator)
    return result


def vanishing_order(p: Polynomial, point: Union[Scalar, RationalLike]) -> Union[int, float]:
    """Largest e with (x - point)^e dividing p; infinity for the zero polynomial."""
    if p.is_zero:
        return math.inf
    order = 0
    for c in p.shift(point).coeffs:
        if c:
            break
        order += 1
    return order


@lru_cache(maxsize=None)
def _number_field(conductor: int):
    if conductor <= 2:
        return QQ
    return QQ.algebraic_field(exp(2 * pi * I / conductor))


def _to_domain(value: Scalar, domain, conductor: int):
    value = value.embed(conductor)
    if domain is QQ:
        c = value.coeffs[0]
        return QQ(c.numerator, c.denominator)
    high_first = [QQ(c.numerator, c.denominator) for c in reversed(value.coeffs)]
    return domain(high_first)


def _from_domain(element, domain, conductor: int) -> Scalar:
    if domain is QQ:
        return Scalar.from_rational(Fraction(int(element.numerator), int(element.denominator)))
    high_first = element.to_list()
    coeffs = [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(high_first)]
    return Scalar(conductor, tuple(coeffs))


def roots_in_field(
    p: Polynomial,
    conductor: Optional[int] = None,
    *,
    require_split: bool = False,
) -> Dict[Scalar, int]:
    """Roots of p in Q(zeta_N) with their multiplicities.

    Candidates come from a factorization over the number field; each one is
    re-checked with exact vanishing orders before it is reported.
    """
    if p.is_zero:
        raise ValueError("the zero polynomial vanishes everywhere")
    if p.degree <= 0:
        return {}
    n = math.lcm(p.conductor, conductor or 1)
    domain = _number_field(n)
    high_first = [_to_domain(c, domain, n) for c in reversed(p.coeffs)]
    _, factors = Poly.from_list(high_first, _X, domain=domain).factor_list()

    roots: Dict[Scalar, int] = {}
    unsplit = []
    for factor, _multiplicity in factors:
        if factor.degree() != 1:
            unsplit.append(factor)
            continue
        a, b = factor.rep.to_list()
        root = _from_domain(domain.quo(-b, a), domain, n)
        order = vanishing_order(p, root)
        if not order:
            raise ArithmeticError(f"factorization produced a non-root {root}")
        roots[root] = order
    if unsplit:
        logger.debug(f"{len(unsplit)} factor(s) of {p} do not split over Q(zeta_{n})")
        if require_split:
            raise UnsplitPolynomialError(
                f"{p} has irreducible factors of degree > 1 over Q(zeta_{n})"
            )
    return roots
