"""Absorption-probability series and their certification against closed constants.

All four covered lines reduce to one base family

    f_k = P(0, 4k+4 bypass 0) = C_k**2 / 2**(4k+3),   k >= 0,

with ``f_{k+1} / f_k = (2(2k+1) / (k+2))**2 / 16``:

    line 0, 2:  1/2 + sum_k f_k                       -> 2/pi
    line -1:    2 sum_k f_k                           -> 4/pi - 1
    line 3:     1/4 + 2 sum_{k>=1} f_k + 2 sum_k f_k  -> 8/pi - 2

Partial sums are accumulated in fixed point (``FIXED_BITS`` fractional bits)
with floor rounding, so the computed value is a certified lower bound whose
error is at most ``(K+1)(K+2)/2`` units in the last place.  Certification
then compares integers, with no floating-point noise in the residual.

The discarded tail obeys ``sum_{k>K} f_k <= 1/(16 pi K**2)``: from
``binom(2k, k) <= 4**k / sqrt(pi k)`` we get ``f_k <= 1/(8 pi k (k+1)**2) <= 1/(8 pi k**3)``,
and the sum of ``k**-3`` over ``k > K`` is below the integral from ``K``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import mpmath

from .arith import DyadicRational, amp_norm_sq, dyadic_sum
from .closed_form import theorem1_amplitude
from .engine import Mode, bypass, run

FIXED_BITS = 128


class UnsupportedLine(ValueError):
    pass


# how many copies of the base family each line's series contains
_TAIL_MULTIPLICITY = {0: 1, 2: 1, -1: 2, 3: 4}
SUPPORTED_LINES = tuple(sorted(_TAIL_MULTIPLICITY))


def _target_mp(line: int):
    two_over_pi = 2 / mpmath.pi
    return {
        0: two_over_pi,
        2: two_over_pi,
        -1: 2 * two_over_pi - 1,
        3: 4 * two_over_pi - 2,
    }[line]


def target(line: int) -> float:
    """The limiting absorption probability for a covered line."""
    _check_line(line)
    return {0: 2 / math.pi, 2: 2 / math.pi, -1: 4 / math.pi - 1, 3: 8 / math.pi - 2}[line]


def _check_line(line: int) -> None:
    if line not in _TAIL_MULTIPLICITY:
        raise UnsupportedLine(
            f"no closed form for line {line}; covered lines are {SUPPORTED_LINES}"
        )


def _target_fixed(line: int) -> tuple[int, int]:
    """Integers ``lo <= target * 2**FIXED_BITS <= hi`` with ``hi - lo <= 1``."""
    with mpmath.workprec(FIXED_BITS + 64):
        v = _target_mp(line) * mpmath.mpf(2) ** FIXED_BITS
        lo = int(mpmath.floor(v))
    return lo, lo + 1


@dataclass(frozen=True)
class SeriesReport:
    line: int
    terms_used: int
    partial_sum: float
    target: Optional[float]
    tail_bound: Optional[float]
    residual: Optional[float] = None
    verdict: str = "exploratory"
    exact: Optional[DyadicRational] = None
    source: str = "closed"
    index: int = 0
    reference_residual: Optional[float] = field(default=None, compare=False)
    last_term: Optional[float] = field(default=None, compare=False)

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"


# --- individual terms ----------------------------------------------------

def exact_term(line: int, t: int) -> DyadicRational:
    """``P(line, t bypass line)`` from the closed form, exact."""
    _check_line(line)
    if t < 1:
        raise ValueError("t must be >= 1")

    def p0(s: int) -> DyadicRational:
        return amp_norm_sq(theorem1_amplitude(s))

    if line in (0, 2):
        return p0(t)
    if line == -1:
        return 2 * p0(t + 1) if t > 2 else DyadicRational(0)
    # line 3
    if t == 3:
        return DyadicRational(1, 2)
    if t < 3:
        return DyadicRational(0)
    return 2 * (p0(t + 1) + p0(t - 1))


def term(line: int, t: int) -> float:
    return float(exact_term(line, t))


def base_terms_fixed(k_max: int, bits: int = FIXED_BITS):
    """Yield ``(k, F_k)`` where ``F_k <= f_k * 2**bits < F_k + k + 1``."""
    f = 1 << (bits - 3)  # f_0 = 1/8
    yield 0, f
    for k in range(k_max):
        num = 2 * (2 * k + 1)
        f = f * num * num // (16 * (k + 2) * (k + 2))
        yield k + 1, f


def _family_sum(line: int, s0: int, s_all: int, one_half: int) -> int:
    """Combine the running base sums into the line's partial sum (fixed point)."""
    if line in (0, 2):
        return one_half + s_all
    if line == -1:
        return 2 * s_all
    # line 3: P(3,3) = 1/4, then the t = 4k+3 family (k >= 1) and the t = 4k+5 family (k >= 0)
    quarter = one_half >> 1
    return quarter + 2 * (s_all - s0) + 2 * s_all


def _ceil_tail_fixed(k_max: int) -> int:
    with mpmath.workprec(FIXED_BITS + 64):
        v = mpmath.mpf(2) ** FIXED_BITS / (16 * mpmath.pi * mpmath.mpf(k_max) ** 2)
        return int(mpmath.ceil(v)) + 1


def tail_bound(line: int, k_max: int) -> float:
    """Upper bound on the part of the series beyond base index ``k_max``."""
    _check_line(line)
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    b = _TAIL_MULTIPLICITY[line] / (16 * math.pi * k_max * k_max)
    return math.nextafter(b * (1 + 4 * 2.0 ** -52), math.inf)


def _report(line: int, k: int, s_fixed: int, err_units: int, f_k: int) -> SeriesReport:
    scale = 1 << FIXED_BITS
    lo, hi = _target_fixed(line)
    tail_fixed = _TAIL_MULTIPLICITY[line] * _ceil_tail_fixed(k)
    # target = S + tail with 0 <= tail <= bound and S in [s_fixed, s_fixed + err]
    ok = s_fixed <= hi and lo <= s_fixed + err_units + tail_fixed
    return SeriesReport(
        line=line,
        terms_used=_terms_used(line, k),
        partial_sum=s_fixed / scale,
        target=target(line),
        tail_bound=tail_bound(line, k),
        residual=(lo - s_fixed) / scale,
        verdict="certified" if ok else "failed",
        source="closed",
        index=k,
        # newest term: f_k itself on lines 0 and 2, 2 f_k on lines -1 and 3
        last_term=(f_k if line in (0, 2) else 2 * f_k) / scale,
    )


def _terms_used(line: int, k: int) -> int:
    """Nonzero series terms included up to base index ``k``."""
    return {0: k + 2, 2: k + 2, -1: k + 1, 3: 2 * k + 2}[line]


def partial_sums_closed(line: int, k_max: int, checkpoints=()) -> list[SeriesReport]:
    """Reports at every requested checkpoint index plus ``k_max`` (one pass)."""
    _check_line(line)
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    wanted = {c for c in checkpoints if 1 <= c <= k_max} | {k_max}
    one_half = 1 << (FIXED_BITS - 1)
    s0 = 0
    s_all = 0
    err = 0
    reports = []
    for k, f in base_terms_fixed(k_max):
        if k == 0:
            s0 = f
        s_all += f
        err += k + 1
        if k in wanted:
            # line 3 counts the base family four times, line -1 twice
            mult = _TAIL_MULTIPLICITY[line]
            reports.append(_report(line, k, _family_sum(line, s0, s_all, one_half), mult * err, f))
    return reports


def partial_sum_closed(line: int, k_max: int) -> SeriesReport:
    return partial_sums_closed(line, k_max)[-1]


def validate_tail_bound(line: int, k_max: int, k_ref: int = 10**6) -> SeriesReport:
    """Compare the analytic tail bound with a deep reference partial sum.

    Returns the ``k_max`` report with ``reference_residual`` set to
    ``S(k_ref) - S(k_max)``, a lower estimate of the true tail; the verdict
    becomes ``failed`` if that exceeds the bound.
    """
    reports = partial_sums_closed(line, k_ref, [k_max])
    head, ref = reports[0], reports[-1]
    gap = ref.partial_sum - head.partial_sum
    verdict = head.verdict if gap <= head.tail_bound else "failed"
    return SeriesReport(**{**head.__dict__, "reference_residual": gap, "verdict": verdict})


def engine_checkpoints(line: int, t_max: int, mode: Mode = "exact", checkpoints=()) -> list[SeriesReport]:
    """Partial sums of lattice arrival probabilities on ``x = line`` at each checkpoint time.

    One lattice run serves every checkpoint.  Lines with a known limit get
    verdict ``consistent`` while the partial sum stays below it; other lines
    are ``exploratory``.
    """
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    state = run(t_max, bypass(line), mode)
    tgt = target(line) if line in _TAIL_MULTIPLICITY else None
    wanted = sorted({c for c in checkpoints if 1 <= c <= t_max} | {t_max})
    reports = []
    for cut in wanted:
        arrivals = [a for t, a in state.absorbed if t <= cut]
        if mode == "exact":
            exact = dyadic_sum(amp_norm_sq(a) for a in arrivals)
            s = float(exact)
            last = float(amp_norm_sq(arrivals[-1])) if arrivals else 0.0
        else:
            exact = None
            s = math.fsum(abs(a) ** 2 for a in arrivals)
            last = abs(arrivals[-1]) ** 2 if arrivals else 0.0
        if tgt is None:
            verdict = "exploratory"
        else:
            verdict = "consistent" if s <= tgt + 1e-15 else "failed"
        reports.append(SeriesReport(
            line=line,
            terms_used=len(arrivals),
            partial_sum=s,
            target=tgt,
            tail_bound=None,
            residual=None if tgt is None else tgt - s,
            verdict=verdict,
            exact=exact,
            source="engine",
            index=cut,
            last_term=last,
        ))
    return reports


def partial_sum_engine(line: int, t_max: int, mode: Mode = "exact") -> SeriesReport:
    """Sum of arrival probabilities on ``x = line`` up to ``t_max``, read off the lattice."""
    return engine_checkpoints(line, t_max, mode)[-1]
