"""Exact rational algebra in one indeterminate.

Everything downstream (coefficient families, interval certificates, the
all-dimension positivity proofs) is built on the types here: dense
polynomials over ``fractions.Fraction``, normalized rational functions,
partial-fraction decompositions over distinct linear factors, certified
rational enclosures of square roots, and a Sturm-based decision procedure
for strict positivity of a polynomial on a ray ``[n0, +oo)``.

No floating point is used anywhere in this module; floats are accepted
only as conveniences when seeding Newton iterations internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int]


class AlgebraError(ValueError):
    """Base class for structured algebra errors."""


class InvalidFactorization(AlgebraError):
    """The supplied linear factors do not factor the denominator."""


class NegativeRadicand(AlgebraError):
    """sqrt_enclosure called on a negative rational."""


class UndecidedTie(AlgebraError):
    """Enclosure refinement hit the width cap without separating signs."""


def _as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class Polynomial:
    """Dense univariate polynomial with Fraction coefficients.

    Coefficients are stored in ascending order (index = degree).  The zero
    polynomial is represented by an empty coefficient tuple and reports
    degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[RationalLike] = ()):
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    # -- constructors -------------------------------------------------

    @staticmethod
    def constant(c: RationalLike) -> "Polynomial":
        return Polynomial([c])

    @staticmethod
    def x() -> "Polynomial":
        return Polynomial([0, 1])

    @staticmethod
    def linear_root(root: RationalLike) -> "Polynomial":
        """The monic linear polynomial n - root."""
        return Polynomial([-_as_fraction(root), 1])

    # -- basic queries -------------------------------------------------

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if not self.coeffs:
            raise AlgebraError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial([other])
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs])

    def __sub__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return -(self - other)

    def __mul__(self, other) -> "Polynomial":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise AlgebraError("negative polynomial power")
        result = Polynomial([1])
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    @staticmethod
    def _coerce(other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial([other])
        return NotImplemented

    def divmod(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise AlgebraError("polynomial division by zero")
        q = [Fraction(0)] * max(0, self.degree - other.degree + 1)
        rem = list(self.coeffs)
        d = other.degree
        lead = other.leading
        for i in range(len(rem) - 1, d - 1, -1):
            if rem[i] == 0:
                continue
            f = rem[i] / lead
            q[i - d] = f
            for j, c in enumerate(other.coeffs):
                rem[i - d + j] -= f * c
        return Polynomial(q), Polynomial(rem)

    def __divmod__(self, other):
        return self.divmod(self._coerce(other))

    def __floordiv__(self, other):
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(self._coerce(other))[1]

    def scale(self, c: RationalLike) -> "Polynomial":
        c = _as_fraction(c)
        return Polynomial([a * c for a in self.coeffs])

    def derivative(self) -> "Polynomial":
        return Polynomial([i * c for i, c in enumerate(self.coeffs)][1:])

    def compose(self, inner: "Polynomial") -> "Polynomial":
        """Horner evaluation of self at a polynomial argument."""
        result = Polynomial()
        for c in reversed(self.coeffs):
            result = result * inner + Polynomial([c])
        return result

    def shift(self, a: RationalLike) -> "Polynomial":
        """Return p(x + a)."""
        return self.compose(Polynomial([_as_fraction(a), 1]))

    def primitive(self) -> "Polynomial":
        """Divide out the rational content; sign of the leading coefficient
        is preserved.  Used to tame coefficient growth in Sturm chains."""
        if self.is_zero():
            return self
        num_gcd = 0
        den_lcm = 1
        for c in self.coeffs:
            num_gcd = math.gcd(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
        factor = Fraction(den_lcm, num_gcd)
        return self.scale(factor)

    def content_free_gcd(self, other: "Polynomial") -> "Polynomial":
        """Monic gcd via the Euclidean algorithm with primitive scaling."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, (a % b).primitive()
        if a.is_zero():
            return a
        return a.scale(1 / a.leading)

    # -- evaluation ----------------------------------------------------

    def __call__(self, x):
        result = 0 * x if not isinstance(x, (int, Fraction)) else Fraction(0)
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def sign_at_plus_infinity(self) -> int:
        if self.is_zero():
            return 0
        return 1 if self.leading > 0 else -1

    # -- formatting ----------------------------------------------------

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                term = str(mag)
            else:
                var = "n" if i == 1 else f"n^{i}"
                term = var if mag == 1 else f"{mag}*{var}"
            if not parts:
                parts.append(term if c > 0 else f"-{term}")
            else:
                parts.append(f"+ {term}" if c > 0 else f"- {term}")
        return " ".join(parts)


class RationalFunction:
    """Quotient of two Polynomials, normalized so that gcd(num, den) = 1
    and the denominator is monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial, den: Polynomial = Polynomial([1])):
        num = Polynomial._coerce(num)
        den = Polynomial._coerce(den)
        if den.is_zero():
            raise AlgebraError("zero denominator")
        if num.is_zero():
            self.num = Polynomial()
            self.den = Polynomial([1])
            return
        g = num.content_free_gcd(den)
        if g.degree > 0:
            num = num // g
            den = den // g
        lead = den.leading
        self.num = num.scale(1 / lead)
        self.den = den.scale(1 / lead)

    @staticmethod
    def from_polynomial(p: Polynomial) -> "RationalFunction":
        return RationalFunction(p, Polynomial([1]))

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def as_polynomial(self) -> Polynomial:
        if not self.is_polynomial():
            raise AlgebraError("not a polynomial")
        return self.num.scale(1 / self.den.coeffs[0])

    @staticmethod
    def _coerce(other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (int, Fraction, Polynomial)):
            return RationalFunction(Polynomial._coerce(other))
        return NotImplemented

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __add__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            raise AlgebraError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __call__(self, x):
        den = self.den(x)
        if isinstance(den, Fraction) and den == 0:
            raise AlgebraError(f"pole at {x}")
        return self.num(x) / den

    def __repr__(self) -> str:
        return f"RationalFunction({self.num!r}, {self.den!r})"

    def __str__(self) -> str:
        if self.is_polynomial():
            return str(self.as_polynomial())
        return f"({self.num}) / ({self.den})"


@dataclass(frozen=True)
class PartialFractionExpansion:
    """Quadratic-or-lower polynomial part plus simple poles.

    ``simple_poles`` holds pairs (root, residue) meaning residue/(n - root);
    residues are relative to monic linear factors.
    """

    polynomial_part: Polynomial
    simple_poles: tuple[tuple[Fraction, Fraction], ...]

    def recombine(self) -> RationalFunction:
        total = RationalFunction.from_polynomial(self.polynomial_part)
        for root, residue in self.simple_poles:
            total = total + RationalFunction(Polynomial.constant(residue),
                                             Polynomial.linear_root(root))
        return total

    def residue_at(self, root: RationalLike) -> Fraction:
        root = _as_fraction(root)
        for r, res in self.simple_poles:
            if r == root:
                return res
        raise AlgebraError(f"no pole at n = {root}")


def partial_fractions(f: RationalFunction,
                      factors: Sequence[Polynomial]) -> PartialFractionExpansion:
    """Decompose f into polynomial part + simple fractions over the given
    distinct linear factors of its denominator.

    The factors must be linear, with pairwise distinct roots, and their
    product must equal den(f) up to a rational constant.
    """
    roots = []
    for fac in factors:
        if fac.degree != 1:
            raise InvalidFactorization(f"non-linear factor {fac}")
        roots.append(-fac.coeffs[0] / fac.coeffs[1])
    if len(set(roots)) != len(roots):
        raise InvalidFactorization("repeated factors")

    if f.num.is_zero():
        return PartialFractionExpansion(Polynomial(),
                                        tuple((r, Fraction(0)) for r in roots))

    den = f.den  # monic by normalization
    product = Polynomial([1])
    for r in roots:
        product = product * Polynomial.linear_root(r)
    if product != den:
        raise InvalidFactorization(
            "factors do not multiply to the denominator")
    if f.num.degree - den.degree > 2:
        raise InvalidFactorization("numerator degree excess > 2")

    poly_part, remainder = f.num.divmod(den)
    poles = []
    for r in roots:
        others = Fraction(1)
        for s in roots:
            if s != r:
                others *= (r - s)
        poles.append((r, remainder(r) / others))
    expansion = PartialFractionExpansion(poly_part, tuple(poles))
    if expansion.recombine() != f:
        raise InvalidFactorization("reconstruction mismatch")  # pragma: no cover
    return expansion


# ---------------------------------------------------------------------------
# Square-root enclosures
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SqrtEnclosure:
    lower: Fraction
    upper: Fraction
    radicand: Fraction

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2


def _isqrt_fraction_seed(x: Fraction) -> Fraction:
    """An upper seed u >= sqrt(x) built from integer square roots."""
    # sqrt(p/q) <= (isqrt(p)+1)/isqrt(q) once isqrt(q) >= 1
    p, q = x.numerator, x.denominator
    return Fraction(math.isqrt(p) + 1, max(math.isqrt(q), 1))


def sqrt_enclosure(x: RationalLike, width: RationalLike) -> SqrtEnclosure:
    """Rational bounds l <= sqrt(x) <= u with u - l <= width, exact."""
    x = _as_fraction(x)
    width = _as_fraction(width)
    if x < 0:
        raise NegativeRadicand(f"negative radicand {x}")
    if width <= 0:
        raise AlgebraError("width must be positive")
    if x == 0:
        return SqrtEnclosure(Fraction(0), Fraction(0), x)
    # exact square shortcut
    pn, pd = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if pn * pn == x.numerator and pd * pd == x.denominator:
        r = Fraction(pn, pd)
        return SqrtEnclosure(r, r, x)
    u = _isqrt_fraction_seed(x)
    if u * u < x:  # defensive; the seed construction should prevent this
        u = u + 1
    lower = x / u
    while u - lower > width:
        u = (u + x / u) / 2
        lower = x / u
        # keep intermediate fractions from ballooning: round the upper bound
        # up to a controlled denominator while preserving u >= sqrt(x)
        if u.denominator.bit_length() > 4 * max(64, width.denominator.bit_length()):
            u = _round_up(u, 2 * width.denominator.bit_length() + 64)
    return SqrtEnclosure(lower, u, x)


def _round_up(v: Fraction, bits: int) -> Fraction:
    scale = 1 << bits
    return Fraction(-((-v.numerator * scale) // v.denominator), scale)


# ---------------------------------------------------------------------------
# Positivity on a ray
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RayPositivityWitness:
    """Evidence backing a nonnegative_on_ray verdict.

    method is "shifted-coefficients" when the fast sufficient test fired
    (all coefficients of p(n0 + m) nonnegative, constant term positive),
    or "sturm" with the root count of p on [n0, oo) and a sample value.
    """

    method: str
    positive: bool
    root_count: int | None = None
    sample_point: Fraction | None = None
    sample_value: Fraction | None = None


def sturm_chain(p: Polynomial) -> list[Polynomial]:
    """Sturm sequence of p, with primitive scaling of every remainder.

    Scaling each remainder by a positive rational preserves the sign
    pattern, so root counts are unaffected while coefficients stay small.
    """
    chain = [p.primitive()]
    d = p.derivative()
    if not d.is_zero():
        chain.append(d.primitive())
        while True:
            r = -(chain[-2] % chain[-1])
            if r.is_zero():
                break
            chain.append(r.primitive())
    return chain


def _sign_variations(values: Iterable[int]) -> int:
    signs = [v for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a * b < 0)


def count_roots_on_ray(p: Polynomial, n0: RationalLike) -> int:
    """Number of distinct real roots of p in [n0, +oo)."""
    n0 = _as_fraction(n0)
    if p.is_zero():
        raise AlgebraError("root count of the zero polynomial")
    square_free = p // p.content_free_gcd(p.derivative()) if p.degree > 0 else p
    chain = sturm_chain(square_free)
    at_n0 = [(1 if q(n0) > 0 else -1 if q(n0) < 0 else 0) for q in chain]
    at_inf = [q.sign_at_plus_infinity() for q in chain]
    interior = _sign_variations(at_n0) - _sign_variations(at_inf)
    at_endpoint = 1 if (p(n0) == 0) else 0
    return interior + at_endpoint


def nonnegative_on_ray(p: Polynomial,
                       n0: RationalLike) -> tuple[bool, RayPositivityWitness]:
    """Decide whether p(n) > 0 for every real n >= n0 (strict positivity;
    the permissive name matches the negated-inequality call sites).

    The shifted-coefficient test is a fast sufficient certificate; Sturm
    root counting is the complete fallback.
    """
    n0 = _as_fraction(n0)
    if p.is_zero():
        raise AlgebraError("positivity query on the zero polynomial")
    shifted = p.shift(n0)
    if all(c >= 0 for c in shifted.coeffs) and shifted.coeffs[0] > 0:
        return True, RayPositivityWitness(method="shifted-coefficients",
                                          positive=True)
    value_at_n0 = p(n0)
    roots = count_roots_on_ray(p, n0)
    ok = roots == 0 and value_at_n0 > 0
    return ok, RayPositivityWitness(method="sturm", positive=ok,
                                    root_count=roots,
                                    sample_point=n0,
                                    sample_value=value_at_n0)


# ---------------------------------------------------------------------------
# Sign decision for A + sum c_i sqrt(x_i)
# ---------------------------------------------------------------------------

_WIDTH_CAP = Fraction(1, 10 ** 200)


def sign_with_sqrts(constant: RationalLike,
                    sqrt_terms: Sequence[tuple[RationalLike, RationalLike]],
                    initial_width: RationalLike = Fraction(1, 10 ** 30)) -> int:
    """Exact sign of constant + sum_i c_i*sqrt(x_i), c_i and x_i rational.

    Enclosures are refined geometrically; if the interval still straddles
    zero at width 1e-200 the computation aborts with UndecidedTie rather
    than guessing.  (With every radicand a perfect square the decision is
    exact at width zero, so a genuine zero is still reported as 0.)
    """
    constant = _as_fraction(constant)
    terms = [(_as_fraction(c), _as_fraction(x)) for c, x in sqrt_terms]
    terms = [(c, x) for c, x in terms if c != 0 and x != 0]
    if not terms:
        return (constant > 0) - (constant < 0)
    width = _as_fraction(initial_width)
    while True:
        lo = constant
        hi = constant
        exact = True
        for c, x in terms:
            enc = sqrt_enclosure(x, width)
            if enc.lower != enc.upper:
                exact = False
            if c > 0:
                lo += c * enc.lower
                hi += c * enc.upper
            else:
                lo += c * enc.upper
                hi += c * enc.lower
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        if exact:
            return 0
        if width <= _WIDTH_CAP:
            raise UndecidedTie("undecided - possible tie at width cap 1e-200")
        width = max(width * width, _WIDTH_CAP) if width < 1 else width / 2
