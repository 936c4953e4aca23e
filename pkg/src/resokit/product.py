"""Modified scalar product for energy-dependent contact models.

For two eigenstates with source amplitudes A_1, A_2 and energies E_1, E_2,
the usual scalar product of the zero-range limit equals

    <1|2> = (2 pi hbar^2 / mu) conj(A_1) A_2 (g(E_1) - g(E_2))/(E_1 - E_2),

so subtracting that quantity defines a product under which nondegenerate
eigenstates are orthogonal. Two equivalent routes are provided: the
difference-quotient subtraction (:func:`modified_product`) and the double
series over regularized kinetic-power matrix elements
(:func:`modified_product_series`). For a polynomial g both are finite sums
and agree identically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .bound import BoundState
from .contact import ATOM_MASS, HBAR, REDUCED_MASS, PhaseShiftModel
from .errors import InvalidInput, KindMismatch, SingularSystem

DEGENERACY_TOL = 1e-8
ENERGY_FLOOR = 1e-12


@dataclass(frozen=True)
class ContactEigenstate:
    """Eigenstate of a contact model reduced to (energy, source amplitude)."""

    energy: float
    amplitude: complex
    kind: Literal["bound", "scattering"]

    def __post_init__(self):
        if self.kind == "bound" and not self.energy < 0.0:
            raise InvalidInput("bound state needs energy < 0")
        if self.kind == "scattering" and not self.energy >= 0.0:
            raise InvalidInput("scattering state needs energy >= 0")
        if self.kind not in ("bound", "scattering"):
            raise InvalidInput(f"unknown kind {self.kind!r}")

    @classmethod
    def bound(cls, energy: float, amplitude: complex) -> "ContactEigenstate":
        return cls(energy=energy, amplitude=complex(amplitude), kind="bound")

    @classmethod
    def scattering(cls, energy: float, amplitude: complex) -> "ContactEigenstate":
        return cls(energy=energy, amplitude=complex(amplitude), kind="scattering")

    @classmethod
    def from_bound_state(cls, state: BoundState) -> "ContactEigenstate":
        if not (math.isfinite(state.a2) and state.a2 >= 0.0):
            raise InvalidInput("state has no real amplitude (non-positive norm)")
        return cls.bound(state.energy, math.sqrt(state.a2))

    @property
    def q(self) -> float:
        """Decay constant sqrt(-m E)/hbar; bound states only."""
        if self.kind != "bound":
            raise KindMismatch("q is defined for bound states only")
        return math.sqrt(-ATOM_MASS * self.energy) / HBAR


def plain_overlap_bound(s1: ContactEigenstate, s2: ContactEigenstate) -> complex:
    """Closed-form <1|2> for two bound-type wavefunctions -A exp(-qr)/r."""
    if s1.kind != "bound" or s2.kind != "bound":
        raise KindMismatch("plain_overlap_bound needs two bound states")
    return s1.amplitude.conjugate() * s2.amplitude * 4.0 * math.pi / (s1.q + s2.q)


def _difference_quotient(coeffs, e1, e2):
    # sum_{n>=1} c_n sum_{p=1..n} e1^{n-p} e2^{p-1}: algebraically equal to
    # (g(e1)-g(e2))/(e1-e2) but free of the cancellation the literal quotient
    # suffers when e1 ~ e2.
    n_max = len(coeffs) - 1
    pow1 = [1.0]
    pow2 = [1.0]
    for _ in range(n_max - 1):
        pow1.append(pow1[-1] * e1)
        pow2.append(pow2[-1] * e2)
    total = 0.0
    for n in range(1, n_max + 1):
        c = coeffs[n]
        if c == 0.0:
            continue
        inner = 0.0
        for p in range(1, n + 1):
            inner += pow1[n - p] * pow2[p - 1]
        total += c * inner
    return total


def modified_product(
    model: PhaseShiftModel,
    s1: ContactEigenstate,
    s2: ContactEigenstate,
    plain: complex,
) -> complex:
    """(1|2)_0 = plain - (2 pi hbar^2/mu) conj(A_1) A_2 D.

    D is the difference quotient of g between the two energies, evaluated in
    the stable telescoped-sum form; within DEGENERACY_TOL of degeneracy it
    is replaced by g'(E_1).
    """
    e1, e2 = s1.energy, s2.energy
    scale = max(abs(e1), abs(e2), ENERGY_FLOOR)
    if abs(e1 - e2) < DEGENERACY_TOL * scale:
        quotient = model.g_prime(e1)
    else:
        quotient = _difference_quotient(model.coeffs, e1, e2)
    prefactor = 2.0 * math.pi * HBAR**2 / REDUCED_MASS
    return plain - prefactor * s1.amplitude.conjugate() * s2.amplitude * quotient


def reg_matrix_element(s: ContactEigenstate, n: int) -> complex:
    """Regularized large-k limit of <k|(p^2/2mu)^n|s>.

    Equals -(2 pi hbar^2 A/mu) E^(n-1) for n >= 1 and 0 for n = 0.
    """
    if n < 0:
        raise InvalidInput("power must be nonnegative")
    if n == 0:
        return 0.0j
    prefactor = -2.0 * math.pi * HBAR**2 / REDUCED_MASS
    return prefactor * s.amplitude * s.energy ** (n - 1)


def modified_product_series(
    model: PhaseShiftModel,
    s1: ContactEigenstate,
    s2: ContactEigenstate,
    plain: complex,
) -> complex:
    """(1|2)_0 through the double series of regularized matrix elements.

    Exact finite sum for a polynomial model; no truncation is involved.
    """
    acc = 0.0j
    for n in range(1, model.degree + 1):
        c = model.coeffs[n]
        if c == 0.0:
            continue
        inner = 0.0j
        for p in range(1, n + 1):
            inner += (
                reg_matrix_element(s1, n - p + 1).conjugate()
                * reg_matrix_element(s2, p)
            )
        acc += c * inner
    return plain - (REDUCED_MASS / (2.0 * math.pi * HBAR**2)) * acc


def construct_two_pole_model(q1: float, q2: float) -> PhaseShiftModel:
    """Linear-in-energy model whose bound states sit exactly at q1 and q2.

    Solves the 2x2 system g(-q_i^2) = -q_i for (c_0, c_1).
    """
    if not (q1 > 0.0 and q2 > 0.0):
        raise InvalidInput("decay constants must be positive")
    e1 = -(HBAR**2 / ATOM_MASS) * q1 * q1
    e2 = -(HBAR**2 / ATOM_MASS) * q2 * q2
    det = e2 - e1
    if det == 0.0:
        raise SingularSystem("coincident energies: the two poles must differ")
    c1 = (q1 - q2) / det
    c0 = -q1 - c1 * e1
    return PhaseShiftModel((c0, c1))
