"""Polynomial phase-function models."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import mp_polyder, mp_polyval, richardson_derivative
from resokit.contact import PhaseShiftModel, parse_model_literal
from resokit.errors import InvalidInput

# fixed draw for the arbitrary-precision comparisons
DEG6_COEFFS = (-0.73, 1.21, -0.44, 0.9, -1.37, 0.25, 0.61)


class TestConstruction:
    def test_effective_range_cases(self):
        assert PhaseShiftModel.from_effective_range(1.0, 0.0).coeffs == (-1.0,)
        assert PhaseShiftModel.from_effective_range(2.0, 0.5).coeffs == (-0.5, -0.5)
        assert PhaseShiftModel.from_effective_range(-1.0, 1.0).coeffs == (1.0, -1.0)

    def test_zero_scattering_length_rejected(self):
        with pytest.raises(InvalidInput):
            PhaseShiftModel.from_effective_range(0.0, 1.0)

    def test_trailing_zeros_stripped(self):
        model = PhaseShiftModel((1.0, 2.0, 0.0, 0.0))
        assert model.coeffs == (1.0, 2.0)
        assert model.degree == 1
        assert PhaseShiftModel((0.0, 0.0)).coeffs == (0.0,)

    def test_empty_or_nonfinite_rejected(self):
        with pytest.raises(InvalidInput):
            PhaseShiftModel(())
        with pytest.raises(InvalidInput):
            PhaseShiftModel((1.0, math.nan))

    def test_accessor_round_trip(self):
        model = PhaseShiftModel.from_effective_range(2.5, -0.75)
        assert model.scattering_length == pytest.approx(2.5, rel=1e-15)
        assert model.width_radius == pytest.approx(-0.75, rel=1e-15)
        assert model.effective_range == pytest.approx(1.5, rel=1e-15)

    @given(
        a=st.floats(min_value=0.05, max_value=50.0),
        rstar=st.floats(min_value=-10.0, max_value=10.0),
    )
    def test_accessor_round_trip_property(self, a, rstar):
        model = PhaseShiftModel.from_effective_range(a, rstar)
        assert model.scattering_length == pytest.approx(a, rel=1e-12)
        assert model.width_radius == pytest.approx(rstar, rel=1e-12, abs=1e-12)

    def test_scattering_length_undefined_for_zero_c0(self):
        with pytest.raises(InvalidInput):
            _ = PhaseShiftModel((0.0, 1.0)).scattering_length


class TestEvaluation:
    def test_constant_model(self):
        model = PhaseShiftModel.from_effective_range(1.0)
        for energy in (0.0, 0.3, 100.0):
            assert model.g(energy) == -1.0
            assert model.g_prime(energy) == 0.0

    def test_two_term_value(self):
        model = PhaseShiftModel.from_effective_range(2.0, 0.5)
        assert model.g(1.0) == pytest.approx(-1.0, rel=1e-15)
        assert model.g_prime(10.0) == pytest.approx(-0.5, rel=1e-15)

    def test_degree6_against_mp_horner(self):
        model = PhaseShiftModel(DEG6_COEFFS)
        expected = mp_polyval(DEG6_COEFFS, 0.37)
        assert expected == pytest.approx(-0.31932561366551, rel=1e-13)
        assert model.g(0.37) == pytest.approx(expected, rel=1e-14)

    def test_degree6_derivative_against_finite_differences(self):
        model = PhaseShiftModel(DEG6_COEFFS)
        fd = richardson_derivative(model.g, 0.37)
        exact = mp_polyder(DEG6_COEFFS, 0.37)
        assert exact == pytest.approx(1.025258460762, rel=1e-12)
        assert model.g_prime(0.37) == pytest.approx(exact, rel=1e-14)
        assert model.g_prime(0.37) == pytest.approx(fd, rel=1e-9)

    @settings(max_examples=150, deadline=None)
    @given(
        coeffs=st.lists(
            st.floats(min_value=-2.0, max_value=2.0), min_size=1, max_size=7
        ),
        energy=st.floats(min_value=-3.0, max_value=3.0),
    )
    def test_derivative_matches_finite_differences(self, coeffs, energy):
        model = PhaseShiftModel(tuple(coeffs))
        fd = richardson_derivative(model.g, energy, h0=1e-2)
        scale = max(abs(fd), abs(model.g_prime(energy)), 1.0)
        assert abs(model.g_prime(energy) - fd) / scale < 1e-8

    def test_validity_scale(self):
        assert PhaseShiftModel.from_effective_range(1.0).validity_scale() == math.inf
        # r_e = -2 R*; scale = hbar^2/(mu r_e^2) = 1/(0.5 * 4) for R* = 1
        model = PhaseShiftModel.from_effective_range(1.0, 1.0)
        assert model.validity_scale() == pytest.approx(0.5, rel=1e-15)


class TestLiteralParsing:
    def test_bracket_forms(self):
        assert parse_model_literal("g = [1, -2]").coeffs == (1.0, -2.0)
        assert parse_model_literal("[1,-2,0.5]").coeffs == (1.0, -2.0, 0.5)

    def test_effective_range_forms(self):
        assert parse_model_literal("a=2 rstar=0.5").coeffs == (-0.5, -0.5)
        assert parse_model_literal("a=-1").coeffs == (1.0,)

    def test_rejects_garbage(self):
        for text in ("", "g = []", "a=zed", "q=3", "[1, two]"):
            with pytest.raises(InvalidInput):
                parse_model_literal(text)
