"""Exact amplitudes ``g * 2**(-k/2)`` and dyadic probabilities ``n / 2**e``.

Every lattice amplitude of the checkers model is a Gaussian integer divided
by a half-integer power of two, and every probability is a dyadic rational.
Nothing here ever rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

_SQRT2 = math.sqrt(2.0)


class ParityMismatch(ArithmeticError):
    """Raised when adding amplitudes whose scales differ by an odd power of sqrt(2)."""


@dataclass(frozen=True)
class GaussianInt:
    re: int = 0
    im: int = 0

    def __add__(self, other: GaussianInt) -> GaussianInt:
        return GaussianInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other: GaussianInt) -> GaussianInt:
        return GaussianInt(self.re - other.re, self.im - other.im)

    def __neg__(self) -> GaussianInt:
        return GaussianInt(-self.re, -self.im)

    def __mul__(self, other: GaussianInt | int) -> GaussianInt:
        if isinstance(other, int):
            return GaussianInt(self.re * other, self.im * other)
        return GaussianInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.re or self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> GaussianInt:
        return GaussianInt(self.re, -self.im)

    def __str__(self) -> str:
        return _format_gaussian(self.re, self.im)


def _format_gaussian(re: int, im: int) -> str:
    if not im:
        return str(re)
    if not re:
        return {1: "i", -1: "-i"}.get(im, f"{im}i")
    sign = "+" if im > 0 else "-"
    mag = "" if abs(im) == 1 else str(abs(im))
    return f"{re}{sign}{mag}i"


ZERO_G = GaussianInt(0, 0)
ONE = GaussianInt(1, 0)
I = GaussianInt(0, 1)
MINUS_ONE = GaussianInt(-1, 0)
MINUS_I = GaussianInt(0, -1)
UNITS = (ONE, I, MINUS_ONE, MINUS_I)


class HalfPowerAmplitude:
    """The value ``g * 2**(-k/2)`` kept in canonical form.

    Canonical means: zero is stored as ``(0, 0)``; otherwise ``g`` is not
    divisible by 2 (its real and imaginary parts are not both even).  That
    makes the representation unique, so ``==`` and ``hash`` compare values.
    """

    __slots__ = ("g", "k")

    g: GaussianInt
    k: int

    def __init__(self, g: GaussianInt | int | complex = ZERO_G, k: int = 0):
        if isinstance(g, int):
            g = GaussianInt(g, 0)
        elif isinstance(g, complex):
            if g.real != int(g.real) or g.imag != int(g.imag):
                raise ValueError(f"non-integral Gaussian numerator {g!r}")
            g = GaussianInt(int(g.real), int(g.imag))
        re, im = g.re, g.im
        if not (re or im):
            k = 0
        elif not (re & 1 or im & 1):
            # strip the common power of two in one go
            shift = _twos(re | im)
            re >>= shift
            im >>= shift
            k -= 2 * shift
            g = GaussianInt(re, im)
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "k", k)

    def __setattr__(self, name, value):
        raise AttributeError("HalfPowerAmplitude is immutable")

    def __eq__(self, other) -> bool:
        if not isinstance(other, HalfPowerAmplitude):
            return NotImplemented
        return self.g == other.g and self.k == other.k

    def __hash__(self) -> int:
        return hash((self.g, self.k))

    def __repr__(self) -> str:
        return f"HalfPowerAmplitude(g={self.g}, k={self.k})"

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        return f"({self.g})*2^(-{self.k}/2)" if self.k else str(self.g)

    def __bool__(self) -> bool:
        return bool(self.g)

    def is_zero(self) -> bool:
        return not self.g

    def __add__(self, other: HalfPowerAmplitude) -> HalfPowerAmplitude:
        return amp_add(self, other)

    def __sub__(self, other: HalfPowerAmplitude) -> HalfPowerAmplitude:
        return amp_add(self, -other)

    def __neg__(self) -> HalfPowerAmplitude:
        return HalfPowerAmplitude(-self.g, self.k)

    def __mul__(self, other: HalfPowerAmplitude) -> HalfPowerAmplitude:
        return amp_mul(self, other)

    def __complex__(self) -> complex:
        return amp_to_float(self)

    @property
    def real(self) -> HalfPowerAmplitude:
        return HalfPowerAmplitude(GaussianInt(self.g.re, 0), self.k)

    @property
    def imag(self) -> HalfPowerAmplitude:
        return HalfPowerAmplitude(GaussianInt(self.g.im, 0), self.k)


def _twos(n: int) -> int:
    """Number of trailing zero bits of a nonzero integer."""
    return (n & -n).bit_length() - 1


AMP_ZERO = HalfPowerAmplitude()


def amp(re: int = 0, im: int = 0, k: int = 0) -> HalfPowerAmplitude:
    """Shorthand constructor: ``(re + im*i) * 2**(-k/2)``."""
    return HalfPowerAmplitude(GaussianInt(re, im), k)


def amp_add(a: HalfPowerAmplitude, b: HalfPowerAmplitude) -> HalfPowerAmplitude:
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    if (a.k - b.k) & 1:
        raise ParityMismatch(f"cannot add {a!r} and {b!r}: scales differ by an odd power of sqrt(2)")
    if a.k < b.k:
        a, b = b, a
    # a has the larger k; lift b onto it: b.g * 2**((a.k-b.k)/2)
    lifted = GaussianInt(b.g.re << ((a.k - b.k) // 2), b.g.im << ((a.k - b.k) // 2))
    return HalfPowerAmplitude(a.g + lifted, a.k)


def amp_scale_sqrt2(a: HalfPowerAmplitude, m: int) -> HalfPowerAmplitude:
    """Return ``a * 2**(m/2)``."""
    if a.is_zero():
        return a
    return HalfPowerAmplitude(a.g, a.k - m)


def amp_mul(a: HalfPowerAmplitude, b: HalfPowerAmplitude) -> HalfPowerAmplitude:
    return HalfPowerAmplitude(a.g * b.g, a.k + b.k)


def amp_mul_unit(a: HalfPowerAmplitude, u: GaussianInt | complex) -> HalfPowerAmplitude:
    """Multiply by one of the units 1, i, -1, -i (a quarter-turn rotation)."""
    if isinstance(u, complex):
        u = GaussianInt(int(u.real), int(u.imag))
    if u not in UNITS:
        raise ValueError(f"{u} is not a unit of the Gaussian integers")
    return HalfPowerAmplitude(a.g * u, a.k)


def amp_norm_sq(a: HalfPowerAmplitude) -> DyadicRational:
    n = a.g.norm()
    if a.k >= 0:
        return DyadicRational(n, a.k)
    return DyadicRational(n << -a.k, 0)


def _scaled_to_float(n: int, e: int) -> float:
    """Correctly rounded ``n * 2**(-e)``; raises OverflowError when out of range."""
    if e >= 0:
        return n / (1 << e)
    return float(n << -e)


def amp_to_float(a: HalfPowerAmplitude) -> complex:
    """Double-precision value of ``a``.

    Each component is rounded once from the exact rational and, for odd
    ``k``, multiplied by sqrt(2) once more, so the relative error stays within
    a few ulps.  Raises OverflowError when the value exceeds the double range.
    """
    re, im, k = a.g.re, a.g.im, a.k
    if k & 1:
        e = (k + 1) // 2
        return complex(_scaled_to_float(re, e) * _SQRT2, _scaled_to_float(im, e) * _SQRT2)
    e = k // 2
    return complex(_scaled_to_float(re, e), _scaled_to_float(im, e))


class DyadicRational:
    """Nonnegative ``num / 2**exp`` with ``num`` odd (or ``0/2**0``)."""

    __slots__ = ("num", "exp")

    num: int
    exp: int

    def __init__(self, num: int = 0, exp: int = 0):
        if num < 0:
            raise ValueError("DyadicRational is nonnegative")
        if exp < 0:
            num <<= -exp
            exp = 0
        if num == 0:
            exp = 0
        elif exp and not num & 1:
            shift = min(_twos(num), exp)
            num >>= shift
            exp -= shift
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "exp", exp)

    def __setattr__(self, name, value):
        raise AttributeError("DyadicRational is immutable")

    @classmethod
    def from_fraction(cls, q: Fraction) -> DyadicRational:
        den = q.denominator
        if den & (den - 1):
            raise ValueError(f"{q} is not dyadic")
        return cls(q.numerator, den.bit_length() - 1)

    def __eq__(self, other) -> bool:
        if isinstance(other, DyadicRational):
            return self.num == other.num and self.exp == other.exp
        if isinstance(other, (int, Fraction)):
            return self.to_fraction() == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.to_fraction())

    def __lt__(self, other: DyadicRational) -> bool:
        return self.to_fraction() < _as_fraction(other)

    def __le__(self, other: DyadicRational) -> bool:
        return self.to_fraction() <= _as_fraction(other)

    def __gt__(self, other: DyadicRational) -> bool:
        return self.to_fraction() > _as_fraction(other)

    def __ge__(self, other: DyadicRational) -> bool:
        return self.to_fraction() >= _as_fraction(other)

    def __add__(self, other: DyadicRational) -> DyadicRational:
        e = max(self.exp, other.exp)
        return DyadicRational((self.num << (e - self.exp)) + (other.num << (e - other.exp)), e)

    def __mul__(self, other: DyadicRational | int) -> DyadicRational:
        if isinstance(other, int):
            return DyadicRational(self.num * other, self.exp)
        return DyadicRational(self.num * other.num, self.exp + other.exp)

    __rmul__ = __mul__

    def __float__(self) -> float:
        return _scaled_to_float(self.num, self.exp)

    def __repr__(self) -> str:
        return f"DyadicRational({self.num}, {self.exp})"

    def __str__(self) -> str:
        return str(self.num) if not self.exp else f"{self.num}/2^{self.exp}"

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, 1 << self.exp)


def _as_fraction(x) -> Fraction:
    if isinstance(x, DyadicRational):
        return x.to_fraction()
    return Fraction(x)


DYADIC_ZERO = DyadicRational(0, 0)
DYADIC_ONE = DyadicRational(1, 0)


def dyadic_sum(values) -> DyadicRational:
    """Exact sum of an iterable of DyadicRationals using one common denominator."""
    values = list(values)
    if not values:
        return DYADIC_ZERO
    e = max(v.exp for v in values)
    return DyadicRational(sum(v.num << (e - v.exp) for v in values), e)
