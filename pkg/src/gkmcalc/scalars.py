"""Graded coefficient rings for the supported cohomology theories.

Every scalar is a homogeneous element of the coefficient ring, graded
cohomologically, so the periodicity generators carry negative degree:
|v_n| = -2(p^n - 1) for the height-n theories and |b| = -2 for the
multiplicative one.  Arithmetic is exact; adding scalars of unequal degree
is an error rather than a coercion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

ORDINARY = "ordinary-integral"
MOD_P = "ordinary-mod-p"
MULTIPLICATIVE = "multiplicative"
MORAVA = "morava"
# Internal extension: exact rational coefficients in degree 0.  Not part of
# the public theory menu, but needed as the scalar extension for localization
# over the integral theory and as an independent rank oracle for the solver.
RATIONAL = "rational"

PUBLIC_KINDS = (ORDINARY, MOD_P, MULTIPLICATIVE, MORAVA)
_MOD_P_KINDS = (MOD_P, MORAVA)
_FIELD_KINDS = (MOD_P, MORAVA, RATIONAL)


class DegreeError(ValueError):
    """An operation would mix homogeneous scalars of unequal degree."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class TheoryConfig:
    kind: str
    trunc: int
    p: int | None = None
    n: int | None = None


@dataclass(frozen=True)
class Theory:
    """A coefficient ring together with the global truncation degree.

    The truncation degree bounds total variable exponents in every series
    built over this theory; it is fixed here so that all rings attached to
    the theory agree on precision.
    """

    kind: str
    trunc: int
    p: int | None = None
    n: int | None = None

    @property
    def period_degree(self) -> int:
        """|unit|: cohomological degree of the inverse periodicity generator."""
        if self.kind == MULTIPLICATIVE:
            return 2
        if self.kind == MORAVA:
            return 2 * (self.p ** self.n - 1)
        return 0

    @property
    def is_graded_field(self) -> bool:
        return self.kind in _FIELD_KINDS

    @property
    def char(self) -> int:
        return self.p if self.kind in _MOD_P_KINDS else 0

    @property
    def unit_name(self) -> str | None:
        if self.kind == MORAVA:
            return f"v{self.n}"
        if self.kind == MULTIPLICATIVE:
            return "b"
        return None

    def scalar(self, coeff, vexp: int = 0) -> "GradedScalar":
        return GradedScalar(self, coeff, vexp)

    @property
    def zero(self) -> "GradedScalar":
        return GradedScalar(self, 0)

    @property
    def one(self) -> "GradedScalar":
        return GradedScalar(self, 1)

    @property
    def periodicity(self) -> "GradedScalar":
        """The degree-(-period_degree) unit: v_n or b."""
        if self.period_degree == 0:
            raise ValueError(f"theory {self.kind} has no periodicity generator")
        return GradedScalar(self, 1, 1)

    def rationalized(self) -> "Theory":
        if self.kind not in (ORDINARY, RATIONAL):
            raise ValueError(f"cannot extend {self.kind} scalars to the rationals")
        return Theory(RATIONAL, self.trunc)


def make_theory(config: TheoryConfig) -> Theory:
    """Validate a configuration and return the theory handle."""
    kind = config.kind
    if kind not in PUBLIC_KINDS and kind != RATIONAL:
        raise ValueError(f"unknown theory kind {kind!r}")
    if not isinstance(config.trunc, int) or config.trunc < 1:
        raise ValueError("truncation degree must be a positive integer")
    needs_p = kind in _MOD_P_KINDS
    if needs_p:
        if config.p is None:
            raise ValueError(f"theory kind {kind!r} requires a prime p")
        if not is_prime(config.p):
            raise ValueError(f"p = {config.p} is not prime")
    elif config.p is not None:
        raise ValueError(f"theory kind {kind!r} does not take a prime p")
    if kind == MORAVA:
        if config.n is None:
            raise ValueError("morava theory requires a height n")
        if not isinstance(config.n, int) or config.n < 1:
            raise ValueError("height n must be an integer >= 1")
    elif config.n is not None:
        raise ValueError(f"theory kind {kind!r} does not take a height n")
    return Theory(kind, config.trunc, config.p, config.n)


def rational_theory(trunc: int) -> Theory:
    """The degree-0 exact-rational coefficient ring (internal oracle ring)."""
    return Theory(RATIONAL, trunc)


@dataclass(frozen=True)
class GradedScalar:
    """A homogeneous element c * unit^vexp of the coefficient ring.

    The zero scalar is stored with vexp 0 and is compatible with any degree.
    """

    theory: Theory
    coeff: object
    vexp: int = 0

    def __post_init__(self):
        th = self.theory
        c = self.coeff
        if th.kind in _MOD_P_KINDS:
            c = c % th.p
        elif th.kind == RATIONAL:
            c = Fraction(c)
        v = self.vexp
        if c == 0:
            v = 0
        if v != 0 and th.period_degree == 0:
            raise ValueError(f"theory {th.kind} has no periodicity generator")
        object.__setattr__(self, "coeff", c)
        object.__setattr__(self, "vexp", v)

    def is_zero(self) -> bool:
        return self.coeff == 0

    def __bool__(self) -> bool:
        return self.coeff != 0

    @property
    def degree(self) -> int | None:
        """Cohomological degree; None for zero (compatible with any degree)."""
        if self.coeff == 0:
            return None
        return -self.theory.period_degree * self.vexp

    def _check(self, other: "GradedScalar"):
        if self.theory != other.theory:
            raise ValueError("scalars belong to different theories")

    def __add__(self, other: "GradedScalar") -> "GradedScalar":
        self._check(other)
        if self.coeff == 0:
            return other
        if other.coeff == 0:
            return self
        if self.vexp != other.vexp:
            raise DegreeError(
                f"cannot add scalars of degrees {self.degree} and {other.degree}"
            )
        return GradedScalar(self.theory, self.coeff + other.coeff, self.vexp)

    def __neg__(self) -> "GradedScalar":
        return GradedScalar(self.theory, -self.coeff, self.vexp)

    def __sub__(self, other: "GradedScalar") -> "GradedScalar":
        return self + (-other)

    def __mul__(self, other: "GradedScalar") -> "GradedScalar":
        self._check(other)
        return GradedScalar(self.theory, self.coeff * other.coeff, self.vexp + other.vexp)

    def is_unit(self) -> bool:
        th = self.theory
        if self.coeff == 0:
            return False
        if th.kind in _FIELD_KINDS:
            return True
        return self.coeff in (1, -1)

    def inverse(self) -> "GradedScalar":
        th = self.theory
        if not self.is_unit():
            raise ZeroDivisionError(f"scalar {self} is not a unit in {th.kind}")
        if th.kind in _MOD_P_KINDS:
            c = pow(self.coeff, -1, th.p)
        elif th.kind == RATIONAL:
            c = 1 / Fraction(self.coeff)
        else:
            c = self.coeff  # +-1 over the integers
        return GradedScalar(th, c, -self.vexp)

    def __str__(self) -> str:
        neg, body = scalar_parts(self)
        return ("-" if neg else "") + body


def scalar_parts(s: GradedScalar, with_monomial: bool = False) -> tuple[bool, str]:
    """Render a scalar as (negative?, factor-string), omitting unit factors.

    With with_monomial=True a trailing '*monomial' will follow, so a bare
    coefficient 1 is dropped entirely.
    """
    c = s.coeff
    neg = c < 0
    a = -c if neg else c
    factors = []
    if s.vexp != 0:
        name = s.theory.unit_name
        factors.append(name if s.vexp == 1 else f"{name}^{s.vexp}")
    if a != 1 or (not factors and not with_monomial):
        factors.insert(0, str(a))
    return neg, "*".join(factors)
