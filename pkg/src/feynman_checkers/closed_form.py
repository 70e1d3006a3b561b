"""Catalan closed form for first returns to the start line, and identity checkers.

Every ``verify_*`` function evaluates both sides independently from exact
engine amplitudes and compares canonical forms.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

from .arith import (
    AMP_ZERO,
    MINUS_I,
    MINUS_ONE,
    HalfPowerAmplitude,
    amp_add,
    amp_mul,
    amp_mul_unit,
    amp_scale_sqrt2,
)
from .engine import amplitude, bypass
from .oracle import DomainError


@dataclass(frozen=True)
class IdentityReport:
    identity: str
    t: int
    lhs: HalfPowerAmplitude
    rhs: HalfPowerAmplitude

    @property
    def holds(self) -> bool:
        return self.lhs == self.rhs

    def __str__(self) -> str:
        mark = "ok  " if self.holds else "FAIL"
        return f"{mark} {self.identity} t={self.t}: lhs={self.lhs} rhs={self.rhs}"


def catalan(k: int) -> int:
    if k < 0:
        raise ValueError("catalan index must be >= 0")
    return comb(2 * k, k) // (k + 1)


def theorem1_amplitude(t: int) -> HalfPowerAmplitude:
    """Closed form of ``a(0, t bypass 0)``.

    ``1/sqrt2`` at ``t = 2``; ``(-1)**k C_k / 2**((4k+3)/2)`` at ``t = 4k + 4``;
    zero otherwise.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    if t == 2:
        return HalfPowerAmplitude(1, 1)
    if t % 4:
        return AMP_ZERO
    k = (t - 4) // 4
    return HalfPowerAmplitude((-1) ** k * catalan(k), 4 * k + 3)


def _check_t(t: int, t_min: int, name: str) -> None:
    if t <= t_min:
        raise DomainError(f"{name} holds for t > {t_min}, got t={t}")


def verify_lemma1(t: int) -> IdentityReport:
    """``a(-1, t bypass -1) = sqrt2 * a(0, t+1 bypass 0)`` for ``t > 2``."""
    _check_t(t, 2, "lemma 1")
    lhs = amplitude(-1, t, bypass(-1))
    rhs = amp_scale_sqrt2(amplitude(0, t + 1, bypass(0)), 1)
    return IdentityReport("lemma1", t, lhs, rhs)


def verify_lemma2(t: int) -> IdentityReport:
    """``a(2, t bypass 2) = -i * a(0, t bypass 0)`` for ``t > 2``."""
    _check_t(t, 2, "lemma 2")
    lhs = amplitude(2, t, bypass(2))
    rhs = amp_mul_unit(amplitude(0, t, bypass(0)), MINUS_I)
    return IdentityReport("lemma2", t, lhs, rhs)


def verify_lemma3(t: int) -> IdentityReport:
    """``a(3, t bypass 3) = sqrt2 * a(2, t-1 bypass 2) - i * a(-1, t bypass -1)`` for ``t > 3``."""
    _check_t(t, 3, "lemma 3")
    lhs = amplitude(3, t, bypass(3))
    rhs = amp_add(
        amp_scale_sqrt2(amplitude(2, t - 1, bypass(2)), 1),
        amp_mul_unit(amplitude(-1, t, bypass(-1)), MINUS_I),
    )
    return IdentityReport("lemma3", t, lhs, rhs)


def verify_proposition1(t: int) -> IdentityReport:
    """``a(3, t bypass 3) = -i sqrt2 (a(0, t+1 bypass 0) + a(0, t-1 bypass 0))`` for ``t > 3``."""
    _check_t(t, 3, "proposition 1")
    lhs = amplitude(3, t, bypass(3))
    inner = amp_add(amplitude(0, t + 1, bypass(0)), amplitude(0, t - 1, bypass(0)))
    rhs = amp_mul_unit(amp_scale_sqrt2(inner, 1), MINUS_I)
    return IdentityReport("proposition1", t, lhs, rhs)


def lemma4_convolution(n: int, values) -> HalfPowerAmplitude:
    """``(-1/sqrt2) * sum_{j=2}^{n-2} f(2(n-j)) f(2j)`` for a callable ``f(t)``."""
    total = AMP_ZERO
    for j in range(2, n - 1):
        total = amp_add(total, amp_mul(values(2 * (n - j)), values(2 * j)))
    return amp_scale_sqrt2(amp_mul_unit(total, MINUS_ONE), -1)


def verify_lemma4(n: int) -> IdentityReport:
    """``a(0, 2n bypass 0) = (-1/sqrt2) sum_{j=2}^{n-2} a(0, 2(n-j) bypass 0) a(0, 2j bypass 0)``, ``n > 2``."""
    if n <= 2:
        raise DomainError(f"lemma 4 holds for n > 2, got n={n}")
    cfg = bypass(0)
    lhs = amplitude(0, 2 * n, cfg)
    rhs = lemma4_convolution(n, lambda t: amplitude(0, t, cfg))
    return IdentityReport("lemma4", n, lhs, rhs)


def theorem1_induction_check(n_max: int) -> bool:
    """The closed form reproduces itself through the lemma-4 convolution for ``3 <= n <= n_max``.

    No lattice evaluation is involved.
    """
    if n_max < 3:
        raise ValueError("n_max must be >= 3")
    return all(
        theorem1_amplitude(2 * n) == lemma4_convolution(n, theorem1_amplitude)
        for n in range(3, n_max + 1)
    )
