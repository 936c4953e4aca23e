"""Bound states of a contact model: pole search, normalization, wavefunction.

A bound state of decay constant q > 0 sits at k = iq, so its energy is
E = -q^2 and the pole condition of the amplitude reads g(E) + q = 0. The
normalization constant |A|^2 follows from requiring unit norm with respect
to the modified scalar product, which reduces to

    |A|^2 = (1/4 pi) * 2 / (1/q - (hbar^2/mu) g'(E)).

A non-positive denominator is reported through ``norm_sign`` rather than
raised: such states fall outside the model's validity window but are still
useful diagnostics.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy.optimize import brentq

from .contact import ATOM_MASS, HBAR, REDUCED_MASS, PhaseShiftModel
from .errors import InvalidInput, RootAtGridBoundary

Q_MIN_DEFAULT = 1e-8
POINTS_PER_DECADE = 512


@dataclass(frozen=True)
class BoundState:
    """Pole of the amplitude on the positive imaginary k axis."""

    q: float
    energy: float
    a2: float
    norm_sign: Literal["positive", "negative"]

    def __post_init__(self):
        if not (self.q > 0.0 and self.energy < 0.0):
            raise InvalidInput("bound state needs q > 0 and energy < 0")


def _pole_condition(model: PhaseShiftModel, q):
    """h(q) = g(-q^2) + q; roots are the bound states."""
    energy = -(HBAR**2 / ATOM_MASS) * q * q
    return model.g(energy) + q


def _normalization_parts(model: PhaseShiftModel, q: float):
    energy = -(HBAR**2 / ATOM_MASS) * q * q
    denom = 1.0 / q - (HBAR**2 / REDUCED_MASS) * model.g_prime(energy)
    if denom == 0.0:
        return math.inf, "negative"
    a2 = 0.5 / (math.pi * denom)
    return a2, ("positive" if denom > 0.0 else "negative")


def _polish(model: PhaseShiftModel, q: float, lo: float, hi: float) -> float:
    # One guarded Newton step drives |h(q)| to the rounding floor, which the
    # bracketing refiner alone does not guarantee.
    for _ in range(2):
        h = _pole_condition(model, q)
        if h == 0.0:
            return q
        energy = -(HBAR**2 / ATOM_MASS) * q * q
        hp = 1.0 - 2.0 * q * (HBAR**2 / ATOM_MASS) * model.g_prime(energy)
        if hp == 0.0:
            return q
        q_new = q - h / hp
        if not (lo <= q_new <= hi) or abs(_pole_condition(model, q_new)) >= abs(h):
            return q
        q = q_new
    return q


def find_bound_states(
    model: PhaseShiftModel,
    q_max: float,
    q_min: float = Q_MIN_DEFAULT,
) -> list[BoundState]:
    """All roots of g(-q^2) + q on (q_min, q_max], sorted by increasing q.

    The interval is scanned on a geometric grid of ``POINTS_PER_DECADE``
    points per decade; each sign change is refined by a bracketing solver
    and polished with a guarded Newton step. An empty list means no bound
    state, not a failure. A root within one grid step of ``q_max`` triggers
    a :class:`RootAtGridBoundary` warning since further poles may lie just
    outside the window.
    """
    if not q_max > 0.0:
        raise InvalidInput("q_max must be positive")
    if not 0.0 < q_min < q_max:
        raise InvalidInput("need 0 < q_min < q_max")
    decades = math.log10(q_max / q_min)
    n = max(2, int(math.ceil(POINTS_PER_DECADE * decades)) + 1)
    grid = np.geomspace(q_min, q_max, n)
    h = np.asarray(_pole_condition(model, grid), dtype=float)

    roots: list[float] = []
    for i in range(n - 1):
        if h[i] == 0.0:
            roots.append(float(grid[i]))
        elif h[i] * h[i + 1] < 0.0:
            lo, hi = float(grid[i]), float(grid[i + 1])
            q = brentq(
                lambda x: _pole_condition(model, x),
                lo,
                hi,
                rtol=4.0 * np.finfo(float).eps,
            )
            roots.append(_polish(model, q, lo, hi))
    if h[-1] == 0.0:
        roots.append(float(grid[-1]))

    deduped: list[float] = []
    for q in roots:
        if not deduped or abs(q - deduped[-1]) > 1e-12 * q:
            deduped.append(q)

    last_step = float(grid[-1] - grid[-2])
    states = []
    for q in deduped:
        if q_max - q <= last_step:
            warnings.warn(
                f"root q = {q:.6g} lies at the edge of the scan window q_max = {q_max:.6g}",
                RootAtGridBoundary,
                stacklevel=2,
            )
        a2, sign = _normalization_parts(model, q)
        energy = -(HBAR**2 / ATOM_MASS) * q * q
        states.append(BoundState(q=q, energy=energy, a2=a2, norm_sign=sign))
    return states


def normalization(model: PhaseShiftModel, state: BoundState) -> float:
    """|A|^2 fixed by unit norm under the modified scalar product."""
    a2, _ = _normalization_parts(model, state.q)
    return a2


def wavefunction(state: BoundState, r):
    """phi(r) = -A exp(-q r)/r with A = +sqrt(|A|^2) (real positive phase)."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise InvalidInput("radius must be positive")
    if not (math.isfinite(state.a2) and state.a2 >= 0.0):
        raise InvalidInput("state has no real amplitude (non-positive norm)")
    amp = math.sqrt(state.a2)
    out = -amp * np.exp(-state.q * r) / r
    return float(out) if out.ndim == 0 else out


def modified_norm_check(model: PhaseShiftModel, state: BoundState) -> float:
    """|(phi|phi)_0 - 1| with the closed-form plain norm 4 pi |A|^2/(2q).

    The modified norm subtracts (2 pi hbar^2/mu) |A|^2 g'(E) from the plain
    one; for a state normalized by :func:`normalization` the result is 1 up
    to rounding, for any polynomial model.
    """
    plain = 4.0 * math.pi * state.a2 / (2.0 * state.q)
    modified = plain - (
        2.0 * math.pi * HBAR**2 / REDUCED_MASS
    ) * state.a2 * model.g_prime(state.energy)
    return abs(modified - 1.0)
