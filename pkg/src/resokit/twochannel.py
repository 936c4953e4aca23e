"""Two-channel resonance model with a Gaussian interchannel form factor.

Open-channel atom pairs (mass m each) couple with amplitude ``lam`` to a
structureless molecular level of internal energy ``e_mol`` through the
momentum-space form factor chi(k) = exp(-k^2 eps^2/4). Everything here is
the two-body relative motion at zero total momentum, with hbar = 1.

The scattering amplitude is

    f(E) = -(m/4 pi hbar^2) chi(k0)^2 / [ (E - e_mol)/(2 lam^2) - I(E) ],

where I(E) is the regularized loop integral over intermediate atom pairs.
At low energy the model reproduces a two-term phase function with
scattering length a_eps and range parameter rstar_eps; as eps -> 0 at fixed
(a, R*) it converges to the one-channel effective-range description, and
R* = 2 pi hbar^4/(m^2 lam^2) exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import dawsn, erfcx

from .errors import (
    InconsistentExpansion,
    InvalidInput,
    NoBoundState,
    ParameterMismatch,
    PoleHit,
    QuadratureFailure,
)

HBAR = 1.0

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)

# Bound-state scan: geometric grid resolution and window stretch factors.
SCAN_POINTS_PER_DECADE = 256
SCAN_E_FLOOR = 1e-12
SCAN_WINDOW_FACTOR = 1e3

# Tail extraction window fractions c in k = c/eps.
TAIL_FRACTIONS = (0.05, 0.1)

NORM_QUAD_RTOL = 1e-10


@dataclass(frozen=True)
class TwoChannelParams:
    """Coupling amplitude, molecular energy, regulator width, atom mass."""

    lam: float
    e_mol: float
    eps: float
    mass: float = 1.0

    def __post_init__(self):
        if not self.eps > 0.0:
            raise InvalidInput("regulator width eps must be positive")
        if self.lam == 0.0:
            raise InvalidInput("coupling amplitude must be nonzero")
        if not self.mass > 0.0:
            raise InvalidInput("mass must be positive")

    def chi(self, k):
        """Form factor chi(k) = exp(-k^2 eps^2/4)."""
        return np.exp(-0.25 * (k * self.eps) ** 2)


@dataclass(frozen=True)
class TwoChannelBoundState:
    """Dressed molecular state below threshold.

    ``beta2`` is the closed-channel population, ``open_norm`` the open
    channel one (they sum to 1 by normalization), and ``a_tail`` the source
    amplitude extracted from the 1/k^2 tail of the open-channel momentum
    wavefunction.
    """

    params: TwoChannelParams
    energy: float
    beta2: float
    a_tail: float
    open_norm: float

    @property
    def beta(self) -> float:
        """Molecular amplitude, real positive by phase convention."""
        return math.sqrt(self.beta2)

    def psi(self, k):
        """Open-channel momentum wavefunction sqrt(2) lam beta chi(k)/(E - k^2/m)."""
        p = self.params
        denom = self.energy - (HBAR * np.asarray(k, dtype=float)) ** 2 / p.mass
        return math.sqrt(2.0) * p.lam * self.beta * p.chi(k) / denom


def loop_integral(p: TwoChannelParams, energy: float) -> complex:
    """Regularized loop integral I(E) over intermediate atom pairs.

    For the Gaussian form factor the integral has a closed form: below
    threshold it involves the scaled complementary error function, above it
    the Dawson function for the principal value plus an exact on-shell
    imaginary part. Scaled special functions keep the evaluation finite for
    arbitrarily deep energies.
    """
    m = p.mass
    alpha = 0.5 * p.eps**2
    prefactor = m / (2.0 * math.pi**2 * HBAR**2)
    if energy < 0.0:
        kappa = math.sqrt(-m * energy) / HBAR
        x = kappa * math.sqrt(alpha)
        real = prefactor * (
            -0.5 * math.sqrt(math.pi / alpha)
            + 0.5 * math.pi * kappa * float(erfcx(x))
        )
        return complex(real, 0.0)
    if energy == 0.0:
        return complex(
            -(m / HBAR**2) * math.sqrt(2.0 * math.pi) / (4.0 * math.pi**2 * p.eps),
            0.0,
        )
    k0 = math.sqrt(m * energy) / HBAR
    x = k0 * math.sqrt(alpha)
    real = -prefactor * (
        0.5 * math.sqrt(math.pi / alpha) - math.sqrt(math.pi) * k0 * float(dawsn(x))
    )
    imag = -(m * k0 / (4.0 * math.pi * HBAR**2)) * math.exp(-alpha * k0 * k0)
    return complex(real, imag)


def _pole_bracket(p: TwoChannelParams, energy):
    """(E - e_mol)/(2 lam^2) - Re I(E) for E < 0, vectorized over energy."""
    m = p.mass
    alpha = 0.5 * p.eps**2
    energy = np.asarray(energy, dtype=float)
    kappa = np.sqrt(-m * energy) / HBAR
    loop = (m / (2.0 * math.pi**2 * HBAR**2)) * (
        -0.5 * math.sqrt(math.pi / alpha)
        + 0.5 * math.pi * kappa * erfcx(kappa * math.sqrt(alpha))
    )
    return (energy - p.e_mol) / (2.0 * p.lam**2) - loop


def inverse_amplitude(p: TwoChannelParams, energy: float) -> complex:
    """1/f(E); safe on both sides of threshold.

    Below threshold the form factor is analytically continued, which makes
    1/f the numerically tame direction (the continued chi^2 grows, its
    inverse decays).
    """
    bracket = (energy - p.e_mol) / (2.0 * p.lam**2) - loop_integral(p, energy)
    chi2_inv = math.exp(p.mass * energy * p.eps**2 / (2.0 * HBAR**2))
    return -(4.0 * math.pi * HBAR**2 / p.mass) * bracket * chi2_inv


def amplitude(p: TwoChannelParams, energy: float, pole_rtol: float = 1e-12) -> complex:
    """f(E), raising :class:`PoleHit` when the denominator vanishes.

    A vanishing bracket is the bound state, not a scattering point.
    """
    loop = loop_integral(p, energy)
    detuning = (energy - p.e_mol) / (2.0 * p.lam**2)
    bracket = detuning - loop
    scale = max(abs(detuning), abs(loop))
    if abs(bracket) <= pole_rtol * scale:
        raise PoleHit(f"amplitude pole within tolerance at E = {energy!r}")
    inv = inverse_amplitude(p, energy)
    if inv == 0.0:
        raise InvalidInput("energy too deep below threshold for the continued amplitude")
    return 1.0 / inv


def _closed_form_params(p: TwoChannelParams) -> tuple[float, float]:
    m = p.mass
    inv_a = SQRT_2_OVER_PI / p.eps - 2.0 * math.pi * HBAR**2 * p.e_mol / (p.lam**2 * m)
    a_eps = math.inf if inv_a == 0.0 else 1.0 / inv_a
    rstar = -SQRT_2_OVER_PI * p.eps + 2.0 * math.pi * HBAR**4 / (p.lam**2 * m**2)
    if math.isfinite(a_eps):
        rstar += p.eps**2 / (2.0 * a_eps)
    return a_eps, rstar


def fit_effective_params(p: TwoChannelParams, n_points: int = 24) -> tuple[float, float]:
    """(a_eps, rstar_eps) from a quadratic fit of Re(1/f) at low energy.

    The fit window spans [1e-6, 1e-3] in units of hbar^2/(m l^2), where l is
    the largest length scale of the model, so it stays inside the expansion
    region for any parameter set.
    """
    a_cf, r_cf = _closed_form_params(p)
    scale_len = max(p.eps, abs(r_cf), abs(a_cf) if math.isfinite(a_cf) else p.eps)
    e_scale = HBAR**2 / (p.mass * scale_len**2)
    energies = np.linspace(1e-6, 1e-3, n_points) * e_scale
    values = np.array([inverse_amplitude(p, e).real for e in energies])
    x = energies / energies[-1]
    coef = np.polyfit(x, values, 2)
    inv_a_fit = -coef[2]
    rstar_fit = -coef[1] / energies[-1] * HBAR**2 / p.mass
    a_fit = math.inf if inv_a_fit == 0.0 else 1.0 / inv_a_fit
    return a_fit, rstar_fit


def effective_params(p: TwoChannelParams, rtol: float = 1e-6) -> tuple[float, float]:
    """Closed-form (a_eps, rstar_eps), cross-checked against the low-energy fit.

    Disagreement beyond ``rtol`` raises :class:`InconsistentExpansion`; that
    signals an implementation defect rather than a property of the inputs,
    so it is surfaced loudly instead of averaged away.
    """
    a_cf, r_cf = _closed_form_params(p)
    a_fit, r_fit = fit_effective_params(p)
    inv_cf = 0.0 if math.isinf(a_cf) else 1.0 / a_cf
    inv_fit = 0.0 if math.isinf(a_fit) else 1.0 / a_fit
    scale_inv = max(abs(inv_cf), 1e-12 * SQRT_2_OVER_PI / p.eps)
    scale_len = max(p.eps, abs(a_cf) if math.isfinite(a_cf) else p.eps)
    err_a = abs(inv_fit - inv_cf) / scale_inv
    err_r = abs(r_fit - r_cf) / max(abs(r_cf), 1e-3 * scale_len)
    if err_a > rtol or err_r > rtol:
        raise InconsistentExpansion(
            f"closed form (a={a_cf!r}, rstar={r_cf!r}) vs fit "
            f"(a={a_fit!r}, rstar={r_fit!r}): relative errors ({err_a:.3e}, {err_r:.3e})"
        )
    return a_cf, r_cf


def lambda_from_rstar(rstar: float, mass: float = 1.0) -> float:
    """Coupling amplitude reproducing a given width radius, lam = sqrt(2 pi hbar^4/(m^2 R*))."""
    if not rstar > 0.0:
        raise InvalidInput("this mapping covers only rstar > 0")
    return math.sqrt(2.0 * math.pi * HBAR**4 / (mass**2 * rstar))


def rstar_from_lambda(lam: float, mass: float = 1.0) -> float:
    """Width radius of the zero-range limit, R* = 2 pi hbar^4/(m^2 lam^2)."""
    if lam == 0.0:
        raise InvalidInput("coupling amplitude must be nonzero")
    return 2.0 * math.pi * HBAR**4 / (mass**2 * lam**2)


def emol_for_target_a(a_target: float, p: TwoChannelParams) -> float:
    """Molecular energy that sets the scattering length to ``a_target``."""
    if a_target == 0.0:
        raise InvalidInput("target scattering length must be nonzero")
    return (p.lam**2 * p.mass / (2.0 * math.pi * HBAR**2)) * (
        SQRT_2_OVER_PI / p.eps - 1.0 / a_target
    )


def params_for_targets(
    a: float, rstar: float, eps: float, mass: float = 1.0
) -> TwoChannelParams:
    """Parameter set holding (a_eps, R*) = (a, rstar) at regulator width eps."""
    lam = lambda_from_rstar(rstar, mass)
    probe = TwoChannelParams(lam=lam, e_mol=0.0, eps=eps, mass=mass)
    return TwoChannelParams(
        lam=lam, e_mol=emol_for_target_a(a, probe), eps=eps, mass=mass
    )


def _norm_integral(p: TwoChannelParams, energy: float) -> float:
    """int d3k/(2 pi)^3 chi^2/(E - k^2/m)^2 by adaptive radial quadrature."""
    m = p.mass
    alpha = 0.5 * p.eps**2

    def integrand(k):
        return k * k * math.exp(-alpha * k * k) / (energy - (HBAR * k) ** 2 / m) ** 2

    value, abserr = quad(integrand, 0.0, np.inf, epsabs=0.0, epsrel=1e-11, limit=200)
    value /= 2.0 * math.pi**2
    abserr /= 2.0 * math.pi**2
    if not math.isfinite(value) or abserr > NORM_QUAD_RTOL * abs(value):
        raise QuadratureFailure(
            f"norm integral did not converge: value {value!r}, abserr {abserr!r}"
        )
    return value


def bound_state(p: TwoChannelParams) -> TwoChannelBoundState:
    """Locate the dressed molecular state and build its normalized content.

    The pole condition (E - e_mol)/(2 lam^2) = I(E) is bracketed on a
    geometric grid below threshold and refined to machine tolerance; when
    several poles exist the shallowest one (the state connected to the
    resonance) is returned. The closed-channel weight follows from unit
    total norm, and the tail amplitude from the plateau of k^2 psi(k),
    sampled at k = c/eps and extrapolated against the inverse-square window
    variable.
    """
    e_hi = SCAN_WINDOW_FACTOR * max(HBAR**2 / (p.mass * p.eps**2), abs(p.e_mol), 1.0)
    decades = math.log10(e_hi / SCAN_E_FLOOR)
    n = max(2, int(math.ceil(SCAN_POINTS_PER_DECADE * decades)) + 1)
    magnitudes = np.geomspace(SCAN_E_FLOOR, e_hi, n)
    energies = -magnitudes[::-1]
    values = _pole_bracket(p, energies)

    def bracket_scalar(e):
        return float(_pole_bracket(p, e))

    roots: list[float] = []
    for i in range(n - 1):
        if values[i] == 0.0:
            roots.append(float(energies[i]))
        elif values[i] * values[i + 1] < 0.0:
            roots.append(
                brentq(
                    bracket_scalar,
                    float(energies[i]),
                    float(energies[i + 1]),
                    rtol=4.0 * np.finfo(float).eps,
                )
            )
    if values[-1] == 0.0:
        roots.append(float(energies[-1]))
    if not roots:
        raise NoBoundState("no pole below threshold in the scan window")
    energy = max(roots)

    j = _norm_integral(p, energy)
    beta2 = 1.0 / (1.0 + 2.0 * p.lam**2 * j)
    open_norm = 2.0 * p.lam**2 * j * beta2
    beta = math.sqrt(beta2)

    def plateau(c):
        k = c / p.eps
        psi = (
            math.sqrt(2.0)
            * p.lam
            * beta
            * math.exp(-0.25 * (k * p.eps) ** 2)
            / (energy - (HBAR * k) ** 2 / p.mass)
        )
        return -(k * k * psi) / (4.0 * math.pi)

    lo, hi = TAIL_FRACTIONS
    # Error model: plateau approached like 1/k^2 from the shallow side; with
    # samples at k and 2k the extrapolant is (4 P(2k) - P(k))/3.
    a_tail = (4.0 * plateau(hi) - plateau(lo)) / 3.0

    return TwoChannelBoundState(
        params=p, energy=energy, beta2=beta2, a_tail=a_tail, open_norm=open_norm
    )


def tail_amplitude_from_beta(p: TwoChannelParams, beta: float) -> float:
    """Zero-range-limit relation A = sqrt(2) m lam beta/(4 pi hbar^2)."""
    return math.sqrt(2.0) * p.mass * p.lam * beta / (4.0 * math.pi * HBAR**2)


def open_channel_overlap(
    s1: TwoChannelBoundState, s2: TwoChannelBoundState
) -> float:
    """<1_open|2_open> = int d3k/(2 pi)^3 psi_1(k) psi_2(k) by quadrature."""
    p = s1.params
    alpha = 0.5 * p.eps**2
    m = p.mass
    pref = 2.0 * p.lam**2 * s1.beta * s2.beta

    def integrand(k):
        ek = (HBAR * k) ** 2 / m
        return (
            k * k * math.exp(-alpha * k * k) / ((s1.energy - ek) * (s2.energy - ek))
        )

    value, abserr = quad(integrand, 0.0, np.inf, epsabs=0.0, epsrel=1e-11, limit=200)
    value *= pref / (2.0 * math.pi**2)
    abserr *= abs(pref) / (2.0 * math.pi**2)
    if not math.isfinite(value) or abserr > NORM_QUAD_RTOL * max(abs(value), 1e-300):
        raise QuadratureFailure("open-channel overlap quadrature did not converge")
    return value


@dataclass(frozen=True)
class IdentityReport:
    """Numerical content of the closed-channel product identity.

    ``residual_beta`` compares beta_1 beta_2 against 4 pi R* A_1 A_2 with the
    tail-extracted amplitudes (vanishes linearly in eps), ``residual_total``
    compares the full two-channel product against open product plus the same
    tail term, and ``residual_exact`` uses the algebraic amplitude relation
    A(beta), under which the identity holds to machine precision.
    """

    rstar: float
    beta_product: float
    open_overlap: float
    total_overlap: float
    tail_product: float
    exact_tail_product: float
    residual_beta: float
    residual_total: float
    residual_exact: float


def product_identity_check(
    p: TwoChannelParams,
    s1: TwoChannelBoundState,
    s2: TwoChannelBoundState,
) -> IdentityReport:
    """Check <1_tot|2_tot> = <1_open|2_open> + 4 pi R* A_1 A_2 numerically.

    The two states must share lam, eps and mass (their molecular energies
    and hence energies may differ).
    """
    for s in (s1, s2):
        q = s.params
        if (q.lam, q.eps, q.mass) != (p.lam, p.eps, p.mass):
            raise ParameterMismatch(
                "states must share coupling, regulator width and mass"
            )
    rstar = rstar_from_lambda(p.lam, p.mass)
    beta_product = s1.beta * s2.beta
    open_part = open_channel_overlap(s1, s2)
    total = open_part + beta_product
    tail_product = 4.0 * math.pi * rstar * s1.a_tail * s2.a_tail
    exact_tail = (
        4.0
        * math.pi
        * rstar
        * tail_amplitude_from_beta(p, s1.beta)
        * tail_amplitude_from_beta(p, s2.beta)
    )
    return IdentityReport(
        rstar=rstar,
        beta_product=beta_product,
        open_overlap=open_part,
        total_overlap=total,
        tail_product=tail_product,
        exact_tail_product=exact_tail,
        residual_beta=abs(beta_product - tail_product) / abs(beta_product),
        residual_total=abs(total - (open_part + tail_product)) / abs(total),
        residual_exact=abs(beta_product - exact_tail) / abs(beta_product),
    )
