"""Verification battery: every library-level invariant as a named check.

Each check returns a :class:`CheckResult` with the worst observed residual
and its tolerance. The CLI ``verify`` subcommand and the acceptance test
module both run these functions, so there is a single source of truth for
what "passing" means. Derived reference values are produced by independent
oracles (adaptive quadrature of defining integrals, closed-form roots)
rather than by the code paths under test.
"""

from __future__ import annotations

import functools
import math
import tempfile
import time
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import bound, scattering, twochannel
from .contact import PhaseShiftModel
from .product import (
    ContactEigenstate,
    construct_two_pole_model,
    modified_product,
    modified_product_series,
    plain_overlap_bound,
)
from .species import load_species
from .units import scattering_length_of_field, vdw_length, width_radius

DEFAULT_SEED = 20260810

# Bound state of the two-term model with a = R* = 1: positive root of
# q^2 + q - 1 = 0 and the normalization constant it implies.
Q_REFERENCE = (math.sqrt(5.0) - 1.0) / 2.0
E_REFERENCE = -(Q_REFERENCE**2)
BETA2_LIMIT = 2.0 / ((1.0 + math.sqrt(5.0)) / 2.0 + 2.0)

EPS_SEQUENCE = (0.2, 0.1, 0.05, 0.025)

SYNTHETIC_SPECIES_CSV = """\
# synthetic resonance table for the verification battery
species,mass_amu,C6_au,B0_G,DeltaB_G,abg_a0,dmu_muB
synthA,86.909,4700.0,100.5,2.5,98.98,2.0
synthB,39.964,3926.9,543.25,0.0625,61.65,1.5
synthC,6.0151,1393.4,716.0,10.0,-25.0,0.5
"""


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    tolerance: float
    detail: str
    seconds: float
    cases: list | None = None

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (
            f"[{status}] {self.name}: worst {self.worst:.3e} vs tol {self.tolerance:.0e}"
            f" ({self.seconds:.2f}s) {self.detail}"
        )


def _timed(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = fn(*args, **kwargs)
        result.seconds = time.perf_counter() - start
        return result

    return wrapper


def _random_model(rng, max_degree, coeff_range=2.0):
    degree = int(rng.integers(0, max_degree + 1))
    coeffs = rng.uniform(-coeff_range, coeff_range, degree + 1)
    if abs(coeffs[0]) < 1e-3:
        coeffs[0] = math.copysign(1e-3, coeffs[0] if coeffs[0] != 0.0 else 1.0)
    if degree > 0 and coeffs[degree] == 0.0:
        coeffs[degree] = 0.5
    return PhaseShiftModel(tuple(coeffs))


@_timed
def check_unitarity_one_channel(seed: int = DEFAULT_SEED) -> CheckResult:
    """Im(1/f) = -k for 200 random polynomial models on a 50-point log grid."""
    rng = np.random.default_rng(seed)
    ks = np.geomspace(1e-2, 1e2, 50)
    worst = 0.0
    for _ in range(200):
        model = _random_model(rng, max_degree=6)
        for k in ks:
            worst = max(worst, scattering.unitarity_residual(model, float(k)))
    tol = 1e-13
    return CheckResult(
        "unitarity-one-channel", worst < tol, worst, tol,
        "200 models x 50 wavenumbers", 0.0,
    )


@_timed
def check_unitarity_two_channel(seed: int = DEFAULT_SEED) -> CheckResult:
    """Im(1/f) = -k0 at finite regulator width for 50 random parameter sets."""
    rng = np.random.default_rng(seed + 1)
    worst = 0.0
    for _ in range(50):
        rstar = rng.uniform(0.2, 5.0)
        eps = rng.uniform(0.05, 0.5)
        p = twochannel.TwoChannelParams(
            lam=twochannel.lambda_from_rstar(rstar),
            e_mol=rng.uniform(-5.0, 5.0),
            eps=eps,
        )
        for k0 in np.geomspace(1e-3, 1.0 / eps, 40):
            energy = (twochannel.HBAR * k0) ** 2 / p.mass
            inv = twochannel.inverse_amplitude(p, float(energy))
            worst = max(worst, abs(inv.imag + k0) / k0)
    tol = 1e-12
    return CheckResult(
        "unitarity-two-channel", worst < tol, worst, tol,
        "50 parameter sets, k0 in [1e-3, 1/eps]", 0.0,
    )


@_timed
def check_orthogonality(seed: int = DEFAULT_SEED) -> CheckResult:
    """Modified product of the two bound states of 100 two-pole models."""
    rng = np.random.default_rng(seed + 2)
    worst = 0.0
    cases = []
    while len(cases) < 100:
        q1, q2 = 10.0 ** rng.uniform(-1.0, 1.0, 2)
        if abs(q1 - q2) < 0.05 * max(q1, q2):
            continue
        model = construct_two_pole_model(q1, q2)
        states = bound.find_bound_states(model, q_max=4.0 * max(q1, q2))
        assert len(states) == 2, "two-pole model must have exactly two states"
        s1 = ContactEigenstate.bound(states[0].energy, 1.0)
        s2 = ContactEigenstate.bound(states[1].energy, 1.0)
        plain = plain_overlap_bound(s1, s2)
        mod = modified_product(model, s1, s2, plain)
        residual = abs(mod) / abs(plain)
        worst = max(worst, residual)
        cases.append(
            {
                "model": list(model.coeffs),
                "states": [states[0].q, states[1].q],
                "plain": plain.real,
                "modified": mod.real,
                "residual": residual,
            }
        )
    tol = 1e-12
    return CheckResult(
        "orthogonality", worst < tol, worst, tol,
        "100 two-pole models, relative to the plain overlap", 0.0,
        cases=cases,
    )


@_timed
def check_series_quotient(seed: int = DEFAULT_SEED) -> CheckResult:
    """Difference-quotient and double-series products agree over 500 draws."""
    rng = np.random.default_rng(seed + 3)
    worst = 0.0
    for i in range(500):
        model = _random_model(rng, max_degree=8)
        e1 = float(rng.choice([-1.0, 1.0]) * 10.0 ** rng.uniform(-2.0, 1.0))
        mode = i % 5
        if mode == 0:
            e2 = e1  # exactly degenerate
        elif mode in (1, 2):
            e2 = e1 * (1.0 + 10.0 ** rng.uniform(-7.0, -2.0))  # near degenerate
        else:
            e2 = float(rng.choice([-1.0, 1.0]) * 10.0 ** rng.uniform(-2.0, 1.0))
        amps = rng.normal(size=4)
        s1 = _eigenstate(e1, complex(amps[0], amps[1]))
        s2 = _eigenstate(e2, complex(amps[2], amps[3]))
        plain = complex(rng.normal(), rng.normal())
        lhs = modified_product(model, s1, s2, plain)
        rhs = modified_product_series(model, s1, s2, plain)
        scale = max(abs(lhs), abs(rhs), abs(plain), 1e-30)
        worst = max(worst, abs(lhs - rhs) / scale)
    tol = 1e-12
    return CheckResult(
        "series-quotient", worst < tol, worst, tol,
        "500 draws incl. degenerate and near-degenerate pairs", 0.0,
    )


def _eigenstate(energy: float, amplitude: complex) -> ContactEigenstate:
    if energy < 0.0:
        return ContactEigenstate.bound(energy, amplitude)
    return ContactEigenstate.scattering(energy, amplitude)


@_timed
def check_normalization(seed: int = DEFAULT_SEED) -> CheckResult:
    """Modified-norm residual for the reference models and 50 random ones."""
    worst = 0.0
    const_model = PhaseShiftModel.from_effective_range(1.0)
    for state in bound.find_bound_states(const_model, q_max=10.0):
        worst = max(worst, bound.modified_norm_check(const_model, state))
    eff = PhaseShiftModel.from_effective_range(1.0, 1.0)
    states = bound.find_bound_states(eff, q_max=10.0)
    assert len(states) == 1
    if abs(states[0].a2 - 0.043989344375088815) > 1e-12:
        return CheckResult(
            "normalization", False, abs(states[0].a2 - 0.043989344375088815), 1e-12,
            "reference |A|^2 mismatch", 0.0,
        )
    worst = max(worst, bound.modified_norm_check(eff, states[0]))

    rng = np.random.default_rng(seed + 4)
    found = 0
    while found < 50:
        model = _random_model(rng, max_degree=4)
        states = bound.find_bound_states(model, q_max=10.0)
        for state in states:
            # Skip states whose normalization denominator nearly vanishes;
            # the residual there measures cancellation, not correctness.
            if abs(1.0 / state.q - 2.0 * model.g_prime(state.energy)) < 1e-2 / state.q:
                continue
            worst = max(worst, bound.modified_norm_check(model, state))
            found += 1
            if found == 50:
                break
    tol = 1e-10
    return CheckResult(
        "normalization", worst < tol, worst, tol,
        "reference models plus 50 random bound states", 0.0,
    )


def loop_integral_quadrature(p: twochannel.TwoChannelParams, energy: float) -> float:
    """Real part of the loop integral by adaptive quadrature of its definition.

    Below threshold the radial integrand is smooth; above it the principal
    value is taken by pairing symmetric intervals around the on-shell
    wavenumber. Kept independent of the closed-form implementation.
    """
    m = p.mass
    alpha = 0.5 * p.eps**2

    def g(k):
        return k * k * math.exp(-alpha * k * k)

    if energy <= 0.0:
        def integrand(k):
            return g(k) / (energy - (twochannel.HBAR * k) ** 2 / m)

        value, _ = quad(integrand, 0.0, np.inf, epsabs=1e-300, epsrel=1e-12, limit=300)
        return value / (2.0 * math.pi**2)

    k0 = math.sqrt(m * energy) / twochannel.HBAR

    def paired(u):
        gp = g(k0 + u)
        gm = g(k0 - u)
        return (2.0 * k0 * (gp - gm) - u * (gp + gm)) / (
            u * (2.0 * k0 + u) * (2.0 * k0 - u)
        )

    inner, _ = quad(paired, 0.0, k0, epsabs=1e-300, epsrel=1e-11, limit=300)

    def outer(k):
        return g(k) / (k * k - k0 * k0)

    tail, _ = quad(outer, 2.0 * k0, np.inf, epsabs=1e-300, epsrel=1e-12, limit=300)
    return -(m / twochannel.HBAR**2) * (inner + tail) / (2.0 * math.pi**2)


@_timed
def check_loop_oracle() -> CheckResult:
    """Closed-form loop integral against the quadrature oracle on a 30x5 grid."""
    eps_values = (0.05, 0.1, 0.2, 0.5, 1.0)
    neg = -np.geomspace(1e-6, 100.0, 15)
    pos = np.geomspace(1e-6, 100.0, 15)
    worst_neg = 0.0
    worst_pos = 0.0
    for eps in eps_values:
        p = twochannel.TwoChannelParams(lam=1.0, e_mol=0.0, eps=eps)
        for energy in neg:
            closed = twochannel.loop_integral(p, float(energy)).real
            oracle = loop_integral_quadrature(p, float(energy))
            worst_neg = max(worst_neg, abs(closed - oracle) / abs(oracle))
        for energy in pos:
            closed = twochannel.loop_integral(p, float(energy)).real
            oracle = loop_integral_quadrature(p, float(energy))
            worst_pos = max(worst_pos, abs(closed - oracle) / abs(oracle))
    passed = worst_neg < 1e-10 and worst_pos < 1e-8
    worst = max(worst_neg, worst_pos)
    return CheckResult(
        "loop-integral-oracle", passed, worst, 1e-8,
        f"E<0 worst {worst_neg:.2e} (tol 1e-10), E>0 Re worst {worst_pos:.2e} (tol 1e-8)",
        0.0,
    )


@_timed
def check_effective_params(seed: int = DEFAULT_SEED) -> CheckResult:
    """Closed-form (a_eps, R*_eps) against the low-energy fit; coupling round trip."""
    rng = np.random.default_rng(seed + 5)
    worst = 0.0
    for _ in range(20):
        rstar = rng.uniform(0.3, 3.0)
        eps = rng.uniform(0.03, 0.3)
        a_target = float(rng.choice([-1.0, 1.0])) * rng.uniform(0.5, 3.0)
        p = twochannel.params_for_targets(a_target, rstar, eps)
        a_cf, r_cf = twochannel._closed_form_params(p)
        a_fit, r_fit = twochannel.fit_effective_params(p)
        worst = max(worst, abs(1.0 / a_fit - 1.0 / a_cf) * abs(a_cf))
        worst = max(worst, abs(r_fit - r_cf) / abs(r_cf))
        twochannel.effective_params(p)  # raises InconsistentExpansion on defect
    round_trip = 0.0
    for rstar in (0.25, 1.0, 4.0):
        lam = twochannel.lambda_from_rstar(rstar)
        round_trip = max(
            round_trip, abs(twochannel.rstar_from_lambda(lam) - rstar) / rstar
        )
    passed = worst < 1e-6 and round_trip < 1e-12
    return CheckResult(
        "effective-params", passed, max(worst, round_trip), 1e-6,
        f"fit worst {worst:.2e} (tol 1e-6), coupling round trip {round_trip:.2e} (tol 1e-12)",
        0.0,
    )


@_timed
def check_zero_range_limit() -> CheckResult:
    """Convergence to the two-term model as eps -> 0 at fixed (a, R*) = (1, 1)."""
    energy_errors = []
    rstar_fits = []
    a_dev = 0.0
    for eps in EPS_SEQUENCE:
        p = twochannel.params_for_targets(1.0, 1.0, eps)
        state = twochannel.bound_state(p)
        energy_errors.append(abs(state.energy - E_REFERENCE))
        a_fit, r_fit = twochannel.fit_effective_params(p)
        a_dev = max(a_dev, abs(a_fit - 1.0))
        rstar_fits.append(r_fit)
    ratios = [energy_errors[i] / energy_errors[i + 1] for i in range(3)]
    ratios_ok = all(1.5 <= r <= 2.5 for r in ratios)
    coeffs = np.polyfit(np.array(EPS_SEQUENCE), np.array(rstar_fits) - 1.0, 2)
    slope = coeffs[1]
    slope_target = -math.sqrt(2.0 / math.pi)
    slope_dev = abs(slope - slope_target) / abs(slope_target)
    passed = ratios_ok and a_dev < 1e-6 and slope_dev < 0.05
    worst = max(slope_dev, a_dev, max(abs(r - 2.0) for r in ratios))
    return CheckResult(
        "zero-range-limit", passed, worst, 0.5,
        f"energy error ratios {['%.2f' % r for r in ratios]} (2.0 +- 0.5), "
        f"|a_fit-1| {a_dev:.1e} (tol 1e-6), R* slope dev {slope_dev:.2e} (tol 5e-2)",
        0.0,
    )


@_timed
def check_molecular_identity() -> CheckResult:
    """Closed-channel weight equals the tail term of the modified product."""
    exact_worst = 0.0
    residuals = []
    beta2_final = None
    for eps in EPS_SEQUENCE:
        p = twochannel.params_for_targets(1.0, 1.0, eps)
        state = twochannel.bound_state(p)
        report = twochannel.product_identity_check(p, state, state)
        exact_worst = max(exact_worst, report.residual_exact)
        residuals.append(report.residual_beta)
        beta2_final = state.beta2
    monotone = all(residuals[i] > residuals[i + 1] for i in range(3))
    beta2_dev = abs(beta2_final - BETA2_LIMIT) / BETA2_LIMIT
    passed = (
        exact_worst < 1e-13
        and monotone
        and residuals[-1] < 0.02
        and beta2_dev < 0.02
    )
    return CheckResult(
        "molecular-identity", passed, residuals[-1], 0.02,
        f"exact algebra {exact_worst:.1e} (tol 1e-13), tail residuals "
        f"{['%.3f' % r for r in residuals]} (monotone, last < 2e-2), "
        f"beta2 dev {beta2_dev:.4f} (tol 2e-2)",
        0.0,
    )


@_timed
def check_feshbach_layer() -> CheckResult:
    """Field dependence, exact zero crossing and width-radius round trip."""
    with tempfile.TemporaryDirectory() as tmpdir:
        path = f"{tmpdir}/species.csv"
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(SYNTHETIC_SPECIES_CSV)
        rows = load_species(path, mode="natural")
    if len(rows) != 3:
        return CheckResult("feshbach-layer", False, float("nan"), 1e-5,
                           "expected 3 species rows", 0.0)
    worst_bg = 0.0
    worst_product = 0.0
    zero_ok = True
    for res in rows:
        for sign in (1.0, -1.0):
            field = res.b0 + sign * 1e6 * res.delta_b
            a = scattering_length_of_field(res, field)
            worst_bg = max(worst_bg, abs(a - res.a_bg) / abs(res.a_bg))
        zero_ok = zero_ok and scattering_length_of_field(
            res, res.b0 + res.delta_b
        ) == 0.0
        product = width_radius(res) * (
            res.a_bg * res.dmu * res.delta_b * res.mass / res.units.hbar**2
        )
        worst_product = max(worst_product, abs(product - 1.0))
        vdw_length(res)  # must be finite and positive for every row
    passed = worst_bg < 1e-5 and zero_ok and worst_product < 1e-12
    return CheckResult(
        "feshbach-layer", passed, max(worst_bg, worst_product), 1e-5,
        f"background dev {worst_bg:.2e} (tol 1e-5), exact zero {zero_ok}, "
        f"width-radius product dev {worst_product:.2e} (tol 1e-12)",
        0.0,
    )


ALL_CHECKS = (
    check_unitarity_one_channel,
    check_unitarity_two_channel,
    check_orthogonality,
    check_series_quotient,
    check_normalization,
    check_loop_oracle,
    check_effective_params,
    check_zero_range_limit,
    check_molecular_identity,
    check_feshbach_layer,
)

GROUPS = {
    "all": tuple(fn.__name__ for fn in ALL_CHECKS),
    "unitarity": ("check_unitarity_one_channel", "check_unitarity_two_channel"),
    "orthogonality": ("check_orthogonality", "check_series_quotient"),
    "mapping": (
        "check_loop_oracle",
        "check_effective_params",
        "check_zero_range_limit",
    ),
    "identity": ("check_normalization", "check_molecular_identity"),
}

_BY_NAME = {fn.__name__: fn for fn in ALL_CHECKS}


def run_battery(group: str = "all", seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Run one named group of checks and return their results."""
    if group not in GROUPS:
        raise KeyError(f"unknown verification group {group!r}")
    results = []
    for name in GROUPS[group]:
        fn = _BY_NAME[name]
        if "seed" in fn.__wrapped__.__code__.co_varnames:
            results.append(fn(seed=seed))
        else:
            results.append(fn())
    return results
