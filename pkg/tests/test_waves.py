import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wavestab.errors import DomainError, GridSizeError, OutOfRangeError
from wavestab.waves import (
    Model,
    build_wave,
    build_wave_from_period,
    kappa_from_period,
    measured_period,
    ode_residual,
    parse_model,
    period_infimum,
    period_of,
    sample_profile,
    turning_values_residual,
)

MODELS = list(Model)
kappas = st.floats(min_value=0.01, max_value=0.99)
ws = st.floats(min_value=0.05, max_value=1.0)


@pytest.mark.parametrize("alias,model", [
    ("b2", Model.BOUSSINESQ2), ("Boussinesq3", Model.BOUSSINESQ3), ("KGZ", Model.KGZ),
])
def test_parse_model_aliases(alias, model):
    assert parse_model(alias) is model


def test_parse_model_rejects_unknown():
    with pytest.raises(DomainError):
        parse_model("kdv")


@pytest.mark.parametrize("model", MODELS)
@pytest.mark.parametrize("kappa", [0.1, 0.5, 0.9, 0.99])
def test_profile_solves_ode(model, kappa):
    p = build_wave(model, kappa, 0.7)
    assert ode_residual(sample_profile(p, 256)) <= 1e-8


@pytest.mark.parametrize("model", MODELS)
def test_ode_residual_converges_spectrally(model):
    p = build_wave(model, 0.99, 1.0)
    res = [ode_residual(sample_profile(p, n)) for n in (32, 64, 128)]
    assert res[1] < 1e-2 * res[0]
    assert res[2] < 1e-8


@pytest.mark.parametrize("model", MODELS)
@given(kappa=kappas, w=ws)
def test_period_round_trip(model, kappa, w):
    T = period_of(model, kappa, w)
    back = kappa_from_period(model, T, w)
    assert period_of(model, back, w) == pytest.approx(T, rel=1e-10)
    assert back == pytest.approx(kappa, abs=1e-9)


@pytest.mark.parametrize("model", MODELS)
@given(kappa=kappas, w=ws)
def test_turning_values_satisfy_first_integral(model, kappa, w):
    p = build_wave(model, kappa, w)
    scale = max(1.0, abs(p.phi1)) ** 4
    assert turning_values_residual(p) <= 1e-12 * scale


@pytest.mark.parametrize("model", MODELS)
@pytest.mark.parametrize("kappa", [0.2, 0.7, 0.95])
def test_measured_period_matches_formula(model, kappa):
    p = build_wave(model, kappa, 0.5)
    assert measured_period(p) == pytest.approx(p.T, rel=1e-10)


@pytest.mark.parametrize("model", MODELS)
@given(kappa=kappas, w=ws)
def test_period_exceeds_infimum(model, kappa, w):
    assert period_of(model, kappa, w) > period_infimum(model, w)


@pytest.mark.parametrize("model", MODELS)
def test_period_infimum_approached_as_kappa_vanishes(model):
    assert period_of(model, 1e-6, 0.4) == pytest.approx(period_infimum(model, 0.4), rel=1e-10)


@pytest.mark.parametrize("model,T,c", [
    (Model.BOUSSINESQ2, 9.0, 0.3), (Model.BOUSSINESQ3, 10.0, 0.5), (Model.KGZ, 6.0, 0.6),
])
def test_wave_from_period_and_speed(model, T, c):
    p = build_wave_from_period(model, T, c)
    assert p.T == pytest.approx(T, rel=1e-10)
    assert p.w == pytest.approx(1.0 - c * c, rel=1e-15)
    assert p.c == c


def test_speed_inconsistent_with_w_rejected():
    with pytest.raises(DomainError):
        build_wave(Model.BOUSSINESQ3, 0.5, 0.5, c=0.3)


@pytest.mark.parametrize("model", MODELS)
def test_period_below_infimum_rejected(model):
    with pytest.raises(OutOfRangeError):
        kappa_from_period(model, 0.99 * period_infimum(model, 1.0), 1.0)


@pytest.mark.parametrize("kappa", [0.0, 1.0, -0.2])
def test_modulus_outside_open_interval_rejected(kappa):
    with pytest.raises(DomainError):
        build_wave(Model.KGZ, kappa, 1.0)


@pytest.mark.parametrize("n", [15, 17, 8])
def test_bad_grid_rejected(n):
    with pytest.raises(GridSizeError):
        sample_profile(build_wave(Model.KGZ, 0.5, 1.0), n)


def test_kgz_profile_has_second_component():
    p = build_wave(Model.KGZ, 0.5, 0.8)
    prof = sample_profile(p, 16)
    assert np.allclose(prof.psi, -prof.phi**2 / (2 * 0.8))
    lines = prof.to_csv().splitlines()
    assert lines[0] == "x,phi,psi"
    assert len(lines) == 17
    assert float(lines[1].split(",")[1]) == prof.phi[0]


def test_boussinesq_csv_header():
    prof = sample_profile(build_wave(Model.BOUSSINESQ2, 0.5, 1.0), 16)
    assert prof.to_csv().splitlines()[0] == "x,phi"


@pytest.mark.parametrize("model", MODELS)
def test_profile_derivative_matches_finite_difference(model):
    p = build_wave(model, 0.8, 0.6)
    x = np.linspace(0.1, p.T, 7)
    h = 1e-6
    fd = (p.profile(x + h) - p.profile(x - h)) / (2 * h)
    assert np.allclose(p.profile_derivative(x), fd, atol=1e-8)


def test_profile_is_periodic_and_even():
    p = build_wave(Model.BOUSSINESQ3, 0.9, 1.0)
    x = np.linspace(0.0, p.T, 13)
    assert np.allclose(p.profile(x), p.profile(x + p.T), atol=1e-12)
    assert np.allclose(p.profile(x), p.profile(-x), atol=1e-12)
    assert math.isclose(p.profile(0.0), p.phi1, rel_tol=1e-15)
