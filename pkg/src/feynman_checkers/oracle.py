"""Brute-force path sums and the path bijections behind the identities.

This module never uses the row recurrence: amplitudes are obtained by
listing every checker path and adding ``2**((1-t)/2) * i * (-i)**turns``.
It is the ground truth the engine is tested against.

Paths are move strings over ``R`` = (1, 1) and ``L`` = (-1, 1), always
starting with ``R`` (every admissible path passes through (1, 1)).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator, Optional

from .arith import (
    AMP_ZERO,
    MINUS_I,
    GaussianInt,
    HalfPowerAmplitude,
    amp_add,
    amp_mul,
    amp_mul_unit,
    amp_scale_sqrt2,
)
from .engine import FREE, AbsorptionConfig, bypass

DEFAULT_CAP = 24

_UNIT_POWERS = (
    GaussianInt(0, 1),   # i * (-i)**0
    GaussianInt(1, 0),   # i * (-i)**1
    GaussianInt(0, -1),  # i * (-i)**2
    GaussianInt(-1, 0),  # i * (-i)**3
)


class CapExceeded(ValueError):
    pass


class DomainError(ValueError):
    """A lemma map was applied to a path outside its domain."""


@dataclass(frozen=True)
class PathRecord:
    moves: str

    def __post_init__(self):
        if not self.moves or set(self.moves) - {"R", "L"}:
            raise ValueError(f"bad move string {self.moves!r}")

    def __len__(self) -> int:
        return len(self.moves)

    def __str__(self) -> str:
        return self.moves

    @property
    def t(self) -> int:
        return len(self.moves)

    def vertices(self) -> list[tuple[int, int]]:
        pts = [(0, 0)]
        x = 0
        for i, m in enumerate(self.moves, 1):
            x += 1 if m == "R" else -1
            pts.append((x, i))
        return pts

    @property
    def end(self) -> tuple[int, int]:
        return (self.moves.count("R") - self.moves.count("L"), self.t)

    def turns(self) -> int:
        return sum(a != b for a, b in zip(self.moves, self.moves[1:]))

    def weight(self) -> HalfPowerAmplitude:
        """``a(s) = 2**((1-t)/2) * i * (-i)**turns(s)``."""
        return HalfPowerAmplitude(_UNIT_POWERS[self.turns() % 4], self.t - 1)

    def avoids(self, x0: Optional[int]) -> bool:
        """True when no interior vertex lies on ``x = x0``."""
        if x0 is None:
            return True
        return all(x != x0 for x, _ in self.vertices()[1:-1])

    def contributes_to(self, x: int, t: int, cfg: AbsorptionConfig) -> bool:
        return self.moves[0] == "R" and self.end == (x, t) and self.avoids(cfg.line)


def _flip(moves: str) -> str:
    return moves.translate(str.maketrans("RL", "LR"))


def iter_paths(t: int, cfg: AbsorptionConfig = FREE, x_end: Optional[int] = None,
               cap: int = DEFAULT_CAP) -> Iterator[str]:
    """Yield admissible move strings of length ``t`` (optionally ending at ``x_end``).

    Depth-first over prefixes; a prefix is dropped as soon as an interior
    vertex lands on the absorbing line or ``x_end`` becomes unreachable.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    if t > cap:
        raise CapExceeded(f"t={t} exceeds the enumeration cap {cap}")
    x0 = cfg.line
    buf = ["R"]

    def walk(x: int, depth: int) -> Iterator[str]:
        if depth == t:
            if x_end is None or x == x_end:
                yield "".join(buf)
            return
        # vertex at time `depth` is interior here
        if x == x0:
            return
        if x_end is not None and abs(x_end - x) > t - depth:
            return
        for m, dx in (("R", 1), ("L", -1)):
            buf.append(m)
            yield from walk(x + dx, depth + 1)
            buf.pop()

    yield from walk(1, 1)


def enumerate_paths(x: int, t: int, cfg: AbsorptionConfig = FREE,
                    cap: int = DEFAULT_CAP) -> list[PathRecord]:
    return [PathRecord(m) for m in iter_paths(t, cfg, x, cap)]


def _turn_phase_sum(paths) -> HalfPowerAmplitude:
    counts = [0, 0, 0, 0]
    t = None
    for m in paths:
        t = len(m)
        counts[sum(a != b for a, b in zip(m, m[1:])) % 4] += 1
    if t is None:
        return AMP_ZERO
    g = sum((_UNIT_POWERS[r] * c for r, c in enumerate(counts)), GaussianInt())
    return HalfPowerAmplitude(g, t - 1)


def oracle_amplitude(x: int, t: int, cfg: AbsorptionConfig = FREE,
                     cap: int = DEFAULT_CAP) -> HalfPowerAmplitude:
    """The defining path sum, evaluated literally."""
    return _turn_phase_sum(iter_paths(t, cfg, x, cap))


def oracle_row(t: int, cfg: AbsorptionConfig = FREE, cap: int = DEFAULT_CAP) -> dict[int, HalfPowerAmplitude]:
    """Path sums for every endpoint of row ``t`` from a single enumeration."""
    by_end: dict[int, list[str]] = defaultdict(list)
    for m in iter_paths(t, cfg, None, cap):
        by_end[m.count("R") - m.count("L")].append(m)
    return {x: _turn_phase_sum(ms) for x, ms in by_end.items()}


def path_sum(paths) -> HalfPowerAmplitude:
    total = AMP_ZERO
    for p in paths:
        total = amp_add(total, p.weight())
    return total


# --- bijections -----------------------------------------------------------

def _require(path: PathRecord, x: int, t: int, x0: int, t_min: int, name: str) -> None:
    if t <= t_min:
        raise DomainError(f"{name}: needs t > {t_min}, got path of length {path.t}")
    if path.moves[0] != "R":
        raise DomainError(f"{name}: {path} does not start with R")
    if path.end != (x, t):
        raise DomainError(f"{name}: {path} ends at {path.end}, expected {(x, t)}")
    if not path.avoids(x0):
        raise DomainError(f"{name}: {path} touches x={x0} at an interior vertex")


def map_lemma1(s: PathRecord) -> PathRecord:
    """Contributor of ``a(0, t+1 bypass 0)`` -> contributor of ``a(-1, t bypass -1)``.

    Drop the first move and shift by (-1, -1).  Weights: ``sqrt2 * a(s) = a(s')``.
    """
    _require(s, 0, s.t, 0, 3, "map_lemma1")
    return PathRecord(s.moves[1:])


def map_lemma1_inverse(s: PathRecord) -> PathRecord:
    _require(s, -1, s.t, -1, 2, "map_lemma1_inverse")
    return PathRecord("R" + s.moves)


def map_lemma2(s: PathRecord) -> PathRecord:
    """Contributor of ``a(0, t bypass 0)`` -> contributor of ``a(2, t bypass 2)``.

    Reflect in ``x = 1`` from the second move on.  Weights: ``-i * a(s) = a(s')``.
    """
    _require(s, 0, s.t, 0, 2, "map_lemma2")
    return PathRecord(s.moves[0] + _flip(s.moves[1:]))


def map_lemma2_inverse(s: PathRecord) -> PathRecord:
    _require(s, 2, s.t, 2, 2, "map_lemma2_inverse")
    return PathRecord(s.moves[0] + _flip(s.moves[1:]))


def map_lemma3_split(s: PathRecord) -> tuple[str, PathRecord]:
    """Classify a contributor of ``a(3, t bypass 3)`` by its first two moves.

    ``RR...`` (branch ``"R"``): drop the first move and shift by (-1, -1),
    landing on a contributor of ``a(2, t-1 bypass 2)`` with ``a(image) = sqrt2 * a(s)``.

    ``RL...`` (branch ``"L"``): reflect in ``x = 1`` from the second move on,
    landing on an ``RR``-starting contributor of ``a(-1, t bypass -1)`` with
    ``a(s) = -i * a(image)``.
    """
    _require(s, 3, s.t, 3, 3, "map_lemma3_split")
    if s.moves[1] == "R":
        return "R", PathRecord(s.moves[1:])
    return "L", PathRecord(s.moves[0] + _flip(s.moves[1:]))


def map_lemma3_rl(s: PathRecord) -> PathRecord:
    """``RL``-starting contributor of ``a(-1, t bypass -1)`` -> contributor of ``a(2, t-1 bypass 2)``.

    Drop the first move, shift by (-1, -1), reflect in ``x = 0``.
    Weights: ``a(s) = -i * a(image) / sqrt2``.
    """
    _require(s, -1, s.t, -1, 3, "map_lemma3_rl")
    if s.moves[1] != "L":
        raise DomainError(f"map_lemma3_rl: {s} does not start with RL")
    return PathRecord(_flip(s.moves[1:]))


def map_lemma4_split(p: PathRecord) -> tuple[int, PathRecord, PathRecord]:
    """Cut a contributor of ``a(0, 2n bypass 0)`` at its first return to ``x = 1``.

    Returns ``(j, m, l)`` where ``(1, 2j+1)`` is the first vertex after
    ``(1, 1)`` on ``x = 1``; ``l`` repeats moves 2..2j+1 of ``p`` and ``m`` is
    ``R`` followed by moves 2j+2..2n.  Then ``l`` contributes to
    ``a(0, 2j bypass 0)``, ``m`` to ``a(0, 2(n-j) bypass 0)``, and
    ``a(m) a(l) = -sqrt2 a(p)`` for ``j < n-1``, ``+sqrt2 a(p)`` for ``j = n-1``.
    """
    if p.t % 2:
        raise DomainError(f"map_lemma4_split: odd length {p.t}")
    _require(p, 0, p.t, 0, 5, "map_lemma4_split")
    x = 1
    for i, mv in enumerate(p.moves[1:], 2):
        x += 1 if mv == "R" else -1
        if x == 1:
            j = (i - 1) // 2
            break
    else:  # pragma: no cover - excluded by the endpoint check
        raise DomainError(f"map_lemma4_split: {p} never returns to x=1")
    return j, PathRecord("R" + p.moves[2 * j + 1:]), PathRecord(p.moves[1:2 * j + 1])


def lemma4_join(j: int, m: PathRecord, l: PathRecord) -> PathRecord:
    """Inverse of :func:`map_lemma4_split`: ``R``, then ``l``, then ``m`` without its first move."""
    if l.t != 2 * j:
        raise DomainError(f"lemma4_join: l has length {l.t}, expected {2 * j}")
    return PathRecord("R" + l.moves + m.moves[1:])


@dataclass(frozen=True)
class BijectionReport:
    name: str
    t: int
    domain_size: int
    injective: bool
    surjective: bool
    weights_ok: bool
    round_trip: bool = True
    detail: str = ""

    @property
    def holds(self) -> bool:
        return self.injective and self.surjective and self.weights_ok and self.round_trip

    def __str__(self) -> str:
        mark = "ok  " if self.holds else "FAIL"
        extra = f" ({self.detail})" if self.detail and not self.holds else ""
        return f"{mark} {self.name} t={self.t}: {self.domain_size} paths{extra}"


def _bijection_report(name, t, domain, image, codomain, weights_ok, round_trip) -> BijectionReport:
    problems = []
    if len(set(image)) != len(domain):
        problems.append("not injective")
    if set(image) != set(codomain):
        problems.append("image differs from codomain")
    if not weights_ok:
        problems.append("weight relation broken")
    if not round_trip:
        problems.append("inverse does not round-trip")
    return BijectionReport(
        name, t, len(domain),
        injective=len(set(image)) == len(domain),
        surjective=set(image) == set(codomain),
        weights_ok=weights_ok,
        round_trip=round_trip,
        detail=", ".join(problems),
    )


def check_lemma1(t: int, cap: int = DEFAULT_CAP) -> BijectionReport:
    """``map_lemma1`` against the full contributor sets, for ``t > 2`` (paths of length ``t + 1``)."""
    domain = enumerate_paths(0, t + 1, bypass(0), cap)
    image = [map_lemma1(s) for s in domain]
    codomain = enumerate_paths(-1, t, bypass(-1), cap)
    weights = all(amp_scale_sqrt2(s.weight(), 1) == s2.weight() for s, s2 in zip(domain, image))
    back = all(map_lemma1_inverse(s2) == s for s, s2 in zip(domain, image))
    return _bijection_report("lemma1", t, domain, image, codomain, weights, back)


def check_lemma2(t: int, cap: int = DEFAULT_CAP) -> BijectionReport:
    domain = enumerate_paths(0, t, bypass(0), cap)
    image = [map_lemma2(s) for s in domain]
    codomain = enumerate_paths(2, t, bypass(2), cap)
    weights = all(
        amp_mul_unit(s.weight(), MINUS_I) == s2.weight() and abs(s2.turns() - s.turns()) == 1
        for s, s2 in zip(domain, image)
    )
    back = all(map_lemma2_inverse(s2) == s for s, s2 in zip(domain, image))
    return _bijection_report("lemma2", t, domain, image, codomain, weights, back)


def check_lemma3(t: int, cap: int = DEFAULT_CAP) -> list[BijectionReport]:
    """The three maps used for ``a(3, t bypass 3)``, plus the two partial-sum identities."""
    domain = enumerate_paths(3, t, bypass(3), cap)
    split = [(s, *map_lemma3_split(s)) for s in domain]
    r_dom = [s for s, b, _ in split if b == "R"]
    r_img = [img for _, b, img in split if b == "R"]
    l_dom = [s for s, b, _ in split if b == "L"]
    l_img = [img for _, b, img in split if b == "L"]

    minus_one_paths = enumerate_paths(-1, t, bypass(-1), cap)
    rr = [p for p in minus_one_paths if p.moves[1] == "R"]
    rl = [p for p in minus_one_paths if p.moves[1] == "L"]
    two_paths = enumerate_paths(2, t - 1, bypass(2), cap)

    r_weights = all(amp_scale_sqrt2(s.weight(), 1) == img.weight() for s, img in zip(r_dom, r_img))
    l_weights = all(s.weight() == amp_mul_unit(img.weight(), MINUS_I) for s, img in zip(l_dom, l_img))
    rl_img = [map_lemma3_rl(p) for p in rl]
    rl_weights = all(
        p.weight() == amp_scale_sqrt2(amp_mul_unit(img.weight(), MINUS_I), -1)
        for p, img in zip(rl, rl_img)
    )

    a2 = path_sum(two_paths)
    a_m1 = path_sum(minus_one_paths)
    sum_r_ok = path_sum(r_dom) == amp_scale_sqrt2(a2, -1)
    sum_l_ok = path_sum(l_dom) == amp_add(amp_mul_unit(a_m1, MINUS_I), amp_scale_sqrt2(a2, -1))
    partition_ok = len(r_dom) + len(l_dom) == len(domain)

    return [
        _bijection_report("lemma3/R", t, r_dom, r_img, two_paths, r_weights and sum_r_ok, partition_ok),
        _bijection_report("lemma3/L", t, l_dom, l_img, rr, l_weights and sum_l_ok, partition_ok),
        _bijection_report("lemma3/RL", t, rl, rl_img, two_paths, rl_weights, True),
    ]


def check_lemma4(n: int, cap: int = DEFAULT_CAP) -> BijectionReport:
    """First-return split of ``a(0, 2n bypass 0)`` contributors into pairs ``(m, l)``."""
    cfg = bypass(0)
    domain = enumerate_paths(0, 2 * n, cfg, cap)
    image = []
    weights = True
    back = True
    for p in domain:
        j, m, l = map_lemma4_split(p)
        image.append((j, m, l))
        sign = 1 if j == n - 1 else -1
        rhs = amp_mul(m.weight(), l.weight())
        lhs = amp_scale_sqrt2(HalfPowerAmplitude(p.weight().g * sign, p.weight().k), 1)
        weights &= (
            lhs == rhs
            and l.contributes_to(0, 2 * j, cfg)
            and m.contributes_to(0, 2 * (n - j), cfg)
        )
        back &= lemma4_join(j, m, l) == p
    codomain = [
        (j, m, l)
        for j in range(1, n)
        for l in enumerate_paths(0, 2 * j, cfg, cap)
        for m in enumerate_paths(0, 2 * (n - j), cfg, cap)
    ]
    return _bijection_report("lemma4", 2 * n, domain, image, codomain, weights, back)


__all__ = [
    "BijectionReport",
    "CapExceeded",
    "DomainError",
    "PathRecord",
    "bypass",
    "check_lemma1",
    "check_lemma2",
    "check_lemma3",
    "check_lemma4",
    "enumerate_paths",
    "iter_paths",
    "lemma4_join",
    "map_lemma1",
    "map_lemma1_inverse",
    "map_lemma2",
    "map_lemma2_inverse",
    "map_lemma3_rl",
    "map_lemma3_split",
    "map_lemma4_split",
    "oracle_amplitude",
    "oracle_row",
    "path_sum",
]
