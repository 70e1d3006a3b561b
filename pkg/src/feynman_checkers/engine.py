"""Row-by-row evaluation of checker amplitudes, with an optional absorbing line.

The path sum ending at ``(x, t)`` is split by the last move: ``u`` collects
paths whose last move is up-left, ``v`` those whose last move is up-right.
With the shared factor ``2**(-(t-1)/2)`` pulled out, ``u`` is a real integer
``U`` and ``v`` is ``i`` times a real integer ``V``, and one time step is

    V[x, t+1] = V[x-1, t] - U[x-1, t]
    U[x, t+1] = U[x+1, t] + V[x+1, t]

(a turn multiplies by ``-i``; ``-i * U`` and ``-i * (i V)`` give the signs).
Exact mode runs this on Python integers; float mode runs the same recurrence
on numpy arrays with the ``1/sqrt(2)`` applied every step.

Rows are dense over the light cone ``2-t <= x <= t``, ``x = t (mod 2)``;
slot ``j`` of row ``t`` is ``x = 2 - t + 2*j``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Optional

import numpy as np

from .arith import (
    AMP_ZERO,
    DYADIC_ONE,
    DyadicRational,
    GaussianInt,
    HalfPowerAmplitude,
    amp_norm_sq,
    dyadic_sum,
)

Mode = Literal["exact", "float"]

DEFAULT_EXACT_T_MAX = 2000
_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class ExactCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class AbsorptionConfig:
    """``line=None`` is the free walk; otherwise paths may not visit ``x = line``
    except at their first and last points."""

    line: Optional[int] = None

    def __str__(self) -> str:
        return "free" if self.line is None else f"bypass {self.line}"


FREE = AbsorptionConfig()


def bypass(x0: int) -> AbsorptionConfig:
    return AbsorptionConfig(x0)


@dataclass(frozen=True)
class WalkState:
    """Spinor pair per light-cone column at time ``t``.

    In exact mode ``u[j]``/``v[j]`` are the integers ``U``/``V`` described in
    the module docstring (scale ``2**(-(t-1)/2)``); in float mode they are the
    actual real numbers ``u`` and ``v/i``.  ``absorbed`` lists
    ``(t', arrival)`` for every nonzero arrival on the line so far.
    """

    t: int
    u: tuple
    v: tuple
    mode: Mode = "exact"
    absorbed: tuple = field(default=())

    def xs(self) -> range:
        return range(2 - self.t, self.t + 1, 2)

    def _slot(self, x: int) -> Optional[int]:
        if (x - self.t) & 1 or x < 2 - self.t or x > self.t:
            return None
        return (x - (2 - self.t)) // 2

    def spinor(self, x: int):
        """``(u, v)`` at column ``x``: HalfPowerAmplitudes in exact mode, complex in float mode."""
        j = self._slot(x)
        if self.mode == "float":
            if j is None:
                return 0j, 0j
            return complex(self.u[j]), complex(0.0, self.v[j])
        if j is None:
            return AMP_ZERO, AMP_ZERO
        k = self.t - 1
        return (
            HalfPowerAmplitude(GaussianInt(self.u[j], 0), k),
            HalfPowerAmplitude(GaussianInt(0, self.v[j]), k),
        )

    def amplitude_at(self, x: int):
        """``u + v`` at column ``x`` of the current row (zero on an absorbed column)."""
        j = self._slot(x)
        if self.mode == "float":
            if j is None:
                return 0j
            return complex(self.u[j], self.v[j])
        if j is None:
            return AMP_ZERO
        return HalfPowerAmplitude(GaussianInt(self.u[j], self.v[j]), self.t - 1)

    @property
    def columns(self) -> dict:
        """Map ``x -> (u, v)`` over the nonzero columns."""
        return {
            x: self.spinor(x)
            for x, a, b in zip(self.xs(), self.u, self.v)
            if a or b
        }


def initial_state(cfg: AbsorptionConfig = FREE, mode: Mode = "exact") -> WalkState:
    """State at ``t = 1``: the single path R, with ``a(1, 1) = i``.

    If the absorbing line is ``x = 1`` the point ``(1, 1)`` is treated as an
    ordinary path vertex: the arrival ``i`` is recorded at ``t = 1`` and the
    column is cleared.
    """
    one = 1 if mode == "exact" else 1.0
    zero = 0 if mode == "exact" else 0.0
    if cfg.line == 1:
        arrival = HalfPowerAmplitude(GaussianInt(0, 1), 0) if mode == "exact" else 1j
        return WalkState(1, (zero,), (zero,), mode, ((1, arrival),))
    return WalkState(1, (zero,), (one,), mode)


def _propagate_exact(u: tuple, v: tuple) -> tuple[list, list]:
    n = len(u)
    new_u = [0] * (n + 1)
    new_v = [0] * (n + 1)
    for j in range(n):
        a, b = u[j], v[j]
        if a or b:
            new_u[j] = a + b
            new_v[j + 1] = b - a
    return new_u, new_v


def _propagate_float(u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = len(u)
    new_u = np.zeros(n + 1)
    new_v = np.zeros(n + 1)
    new_u[:n] = (u + v) * _INV_SQRT2
    new_v[1:] = (v - u) * _INV_SQRT2
    return new_u, new_v


def step(state: WalkState, cfg: AbsorptionConfig = FREE) -> WalkState:
    """Advance one row; on an absorbing line, record the arrival and clear that column."""
    t = state.t + 1
    if state.mode == "exact":
        new_u, new_v = _propagate_exact(state.u, state.v)
    else:
        new_u, new_v = _propagate_float(np.asarray(state.u), np.asarray(state.v))
    absorbed = state.absorbed
    x0 = cfg.line
    if x0 is not None and not (x0 - t) & 1 and 2 - t <= x0 <= t:
        j = (x0 - (2 - t)) // 2
        a, b = new_u[j], new_v[j]
        if a or b:
            if state.mode == "exact":
                arrival = HalfPowerAmplitude(GaussianInt(a, b), t - 1)
            else:
                arrival = complex(a, b)
            absorbed = absorbed + ((t, arrival),)
        new_u[j] = 0
        new_v[j] = 0
    if state.mode == "exact":
        return WalkState(t, tuple(new_u), tuple(new_v), "exact", absorbed)
    new_u.flags.writeable = False
    new_v.flags.writeable = False
    return WalkState(t, new_u, new_v, "float", absorbed)


def run(
    t_max: int,
    cfg: AbsorptionConfig = FREE,
    mode: Mode = "exact",
    exact_t_max: int = DEFAULT_EXACT_T_MAX,
) -> WalkState:
    """Evolve from ``t = 1`` to ``t = t_max``; the absorbed log lives on the returned state."""
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    if mode not in ("exact", "float"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "exact" and t_max > exact_t_max:
        raise ExactCapExceeded(f"exact run to t={t_max} exceeds the cap {exact_t_max}")
    state = initial_state(cfg, mode)
    if mode == "float":
        state = WalkState(1, np.array(state.u, float), np.array(state.v, float), "float", state.absorbed)
    for _ in range(t_max - 1):
        state = step(state, cfg)
    return state


def trajectory(
    t_max: int,
    cfg: AbsorptionConfig = FREE,
    mode: Mode = "exact",
    exact_t_max: int = DEFAULT_EXACT_T_MAX,
) -> list[WalkState]:
    """All states ``t = 1..t_max`` (index ``t - 1``)."""
    if mode == "exact" and t_max > exact_t_max:
        raise ExactCapExceeded(f"exact run to t={t_max} exceeds the cap {exact_t_max}")
    state = run(1, cfg, mode, exact_t_max)
    rows = [state]
    for _ in range(t_max - 1):
        state = step(state, cfg)
        rows.append(state)
    return rows


class Lattice:
    """Cached exact rows for one absorption configuration, grown on demand.

    Identity checks query hundreds of ``(x, t)`` points under the same
    configuration; this keeps the total work at one sweep per configuration.
    """

    def __init__(self, cfg: AbsorptionConfig = FREE, exact_t_max: int = DEFAULT_EXACT_T_MAX):
        self.cfg = cfg
        self.exact_t_max = exact_t_max
        self._rows = [initial_state(cfg)]
        self._arrivals = dict(self._rows[0].absorbed)

    def row(self, t: int) -> WalkState:
        if t < 1:
            raise ValueError("t must be >= 1")
        if t > self.exact_t_max:
            raise ExactCapExceeded(f"exact run to t={t} exceeds the cap {self.exact_t_max}")
        while len(self._rows) < t:
            nxt = step(self._rows[-1], self.cfg)
            if len(nxt.absorbed) > len(self._rows[-1].absorbed):
                t_arr, arrival = nxt.absorbed[-1]
                self._arrivals[t_arr] = arrival
            self._rows.append(nxt)
        return self._rows[t - 1]

    def amplitude(self, x: int, t: int) -> HalfPowerAmplitude:
        state = self.row(t)
        if x == self.cfg.line:
            return self._arrivals.get(t, AMP_ZERO)
        return state.amplitude_at(x)

    def arrival(self, t: int) -> HalfPowerAmplitude:
        self.row(t)
        return self._arrivals.get(t, AMP_ZERO)


_lattices: dict[tuple[Optional[int], int], Lattice] = {}


def lattice(cfg: AbsorptionConfig = FREE, exact_t_max: int = DEFAULT_EXACT_T_MAX) -> Lattice:
    """Shared cached Lattice for ``cfg``."""
    key = (cfg.line, exact_t_max)
    if key not in _lattices:
        _lattices[key] = Lattice(cfg, exact_t_max)
    return _lattices[key]


def amplitude(x: int, t: int, cfg: AbsorptionConfig = FREE) -> HalfPowerAmplitude:
    """``a(x, t)`` (free) or ``a(x, t bypass x0)``, exact.

    On the absorbing column itself this is the arrival amplitude at time
    ``t``: the final point of a path may lie on the line.
    """
    if t < 1:
        raise ValueError("t must be >= 1")
    return lattice(cfg).amplitude(x, t)


def probability(x: int, t: int, cfg: AbsorptionConfig = FREE) -> DyadicRational:
    return amp_norm_sq(amplitude(x, t, cfg))


def survival_mass(state: WalkState):
    """Total ``|u|^2 + |v|^2`` still on the lattice: exact DyadicRational, or float in float mode."""
    if state.mode == "float":
        u = np.asarray(state.u)
        v = np.asarray(state.v)
        return float(np.sum(u * u) + np.sum(v * v))
    return DyadicRational(sum(a * a + b * b for a, b in zip(state.u, state.v)), state.t - 1)


def absorbed_mass(state: WalkState):
    if state.mode == "float":
        return float(sum(abs(a) ** 2 for _, a in state.absorbed))
    return dyadic_sum(amp_norm_sq(a) for _, a in state.absorbed)


def conservation_holds(state: WalkState) -> bool:
    """Exact check that surviving plus absorbed probability is 1."""
    return survival_mass(state) + absorbed_mass(state) == DYADIC_ONE
