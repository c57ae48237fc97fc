import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wavestab import indices as ix
from wavestab.elliptic import complete_elliptic
from wavestab.errors import DomainError, NoSignChangeError, OutOfRangeError
from wavestab.waves import Model

# 50-digit reference values rounded to 17 digits:
# kappa, M, Ftilde, bracket, N (derivative c1), N (reduced c1), fig8, fig9
REF = [
    (0.01, 1.8751875154553176e-9, 1.8751875082028907e-9, 0.20000000084383438,
     0.49999999996093359, -53322667370816241.0, 0.19636426821550533, 0.33333333328124479),
    (0.2, 0.00031240847835479203, 0.00031220739045109138, 0.20014054023140734,
     0.49999349060035586, -1921024.5882197407, 0.20243032819203636, 0.33332465424679468),
    (0.5, 0.0153999368910808, 0.014934661908673826, 0.20682752638428278,
     0.49967699391093591, -788.08839432566383, 0.24221923589102023, 0.33290293605198569),
    (0.8, 0.17861729401509242, 0.13683100468865719, 0.27002811400553444,
     0.49596759010102763, -5.2117458305784508, 0.39285129708061313, 0.32799879231884094),
    (0.95, 0.68632471011360187, 0.37395333009370974, 0.41821550968022536,
     0.48007199176457521, 0.12044432375514392, 0.78218433483651923, 0.30767539978570971),
    (0.99, 1.263560331304876, 0.5784230010119156, 0.55167928525714695,
     0.44992548150672859, 0.34805119254022671, 1.4224973261324204, 0.27129819904515902),
]

kappas = st.floats(min_value=1e-4, max_value=0.999)


@pytest.mark.parametrize("row", REF, ids=[str(r[0]) for r in REF])
def test_closed_forms_match_reference(row):
    k, M, Ft, br, N, Nred, f8, f9 = row
    assert ix.index_M(k) == pytest.approx(M, rel=1e-12)
    assert ix.index_Ftilde(k) == pytest.approx(Ft, rel=1e-10)
    assert ix.ftilde_bracket(k) == pytest.approx(br, rel=1e-12)
    # the closed form for N cancels like eps / kappa^8 just above the series range
    assert ix.index_N(k) == pytest.approx(N, rel=1e-12 if k >= 0.3 or k < ix.SERIES_KAPPA else 1e-9)
    assert ix.fig8_function(k) == pytest.approx(f8, rel=1e-11)
    assert ix.fig9_ratio(k) == pytest.approx(f9, rel=1e-12)
    if k >= 0.5:
        assert ix.index_N(k, "reduced") == pytest.approx(Nred, rel=1e-9)


@pytest.mark.parametrize("name,func", [
    ("M", ix.index_M), ("Ftilde", ix.index_Ftilde), ("bracket", ix.ftilde_bracket),
    ("N", ix.index_N), ("fig8", ix.fig8_function), ("fig9", ix.fig9_ratio),
])
def test_small_modulus_series_joins_closed_form(name, func):
    below = func(ix.SERIES_KAPPA * (1 - 1e-12))
    above = func(ix.SERIES_KAPPA * (1 + 1e-12))
    assert below == pytest.approx(above, rel=1e-9)


def test_small_modulus_leading_behaviour():
    k = 1e-4
    assert ix.index_M(k) == pytest.approx(3 * k**4 / 16, rel=1e-7)
    assert ix.index_Ftilde(k) == pytest.approx(3 * k**4 / 16, rel=1e-7)
    assert ix.index_N(k) == pytest.approx(0.5, rel=1e-8)
    assert ix.fig9_ratio(k) == pytest.approx(1 / 3, rel=1e-8)
    assert ix.fig8_function(k) == pytest.approx(math.pi / 16, rel=1e-7)


def test_m_form_variant_differs():
    assert ix.index_M(0.7, "K") != pytest.approx(ix.index_M(0.7, "K2"), rel=1e-3)
    with pytest.raises(DomainError):
        ix.index_M(0.7, "K3")


@pytest.mark.parametrize("kappa", [0.1, 0.5, 0.9])
def test_f_prime_matches_finite_difference(kappa):
    h = 1e-6
    fd = (ix.aux_F(kappa + h) - ix.aux_F(kappa - h)) / (2 * h)
    # F' is small against F near kappa = 0, so compare on the scale of F
    assert ix.aux_F_prime(kappa) == pytest.approx(fd, abs=1e-7 * abs(ix.aux_F(kappa)))


@pytest.mark.parametrize("kappa", [0.1, 0.5, 0.9])
def test_g_is_reciprocal_derivative(kappa):
    def g(k):
        K = complete_elliptic(k).bigK
        return K**4 * (1 - k * k + k**4)

    h = 1e-6
    fd = (g(kappa + h) - g(kappa - h)) / (2 * h)
    assert ix.aux_G(kappa) == pytest.approx(1.0 / (128.0 * fd), rel=1e-7)


@pytest.mark.parametrize("kappa", [0.3, 0.7, 0.95])
def test_fig9_is_ratio_of_derivatives(kappa):
    def num(k):
        p = complete_elliptic(k)
        return p.bigK * p.bigE

    def den(k):
        return (2 - k * k) * complete_elliptic(k).bigK ** 2

    h = 1e-6
    ratio = 2 * (num(kappa + h) - num(kappa - h)) / (den(kappa + h) - den(kappa - h))
    assert ix.fig9_ratio(kappa) == pytest.approx(ratio, rel=1e-7)


@given(kappas)
def test_shape_functions_positive(kappa):
    assert ix.index_M(kappa) > 0
    assert ix.index_Ftilde(kappa) > 0
    assert ix.ftilde_bracket(kappa) > 0
    assert ix.fig8_function(kappa) > 0
    assert ix.index_N(kappa) > 0


@given(kappas)
def test_fig9_bounded_by_one_third(kappa):
    assert ix.fig9_ratio(kappa) <= 1 / 3


@pytest.mark.parametrize("model", list(Model))
@given(kappa=st.floats(min_value=0.05, max_value=0.99), w=st.floats(min_value=0.1, max_value=1.0))
def test_mu_star_and_threshold_speed(model, kappa, w):
    idx = ix.index_closed(model, kappa, w)
    assert idx < 0
    mu = ix.mu_star(model, kappa, w)
    assert mu == pytest.approx(1.0 / (2.0 * math.sqrt(-idx)), rel=1e-14)
    c = ix.threshold_speed(model, kappa)
    assert 0 < c < 1
    # at w = 1 - c^2 the critical value equals the speed
    assert ix.mu_star(model, kappa, 1 - c * c) == pytest.approx(c, rel=1e-10)


@pytest.mark.parametrize("model,T,kappa_T,c_T", [
    (Model.BOUSSINESQ3, 10.0, 0.99810, 0.547571),
    (Model.BOUSSINESQ2, 8.0, 0.837186, 0.203771),
    (Model.KGZ, 6.0, 0.99552, 0.60493),
])
def test_kappa_star_for_period(model, T, kappa_T, c_T):
    k, c = ix.kappa_star_for_period(model, T)
    assert k == pytest.approx(kappa_T, abs=1e-5)
    assert c == pytest.approx(c_T, abs=1e-5)
    assert ix.threshold_period_map(model, k) == pytest.approx(T, rel=1e-12)


@pytest.mark.parametrize("model", list(Model))
@given(kappa=st.floats(min_value=0.01, max_value=0.999))
def test_threshold_period_round_trip(model, kappa):
    T = ix.threshold_period_map(model, kappa)
    k, _ = ix.kappa_star_for_period(model, T)
    assert ix.threshold_period_map(model, k) == pytest.approx(T, rel=1e-10)


@pytest.mark.parametrize("model", list(Model))
def test_threshold_period_below_infimum_rejected(model):
    inf_T = ix.threshold_period_infimum(model)
    with pytest.raises(OutOfRangeError):
        ix.kappa_star_for_period(model, 0.99 * inf_T)


def test_kgz_threshold_period_infimum():
    assert ix.threshold_period_infimum(Model.KGZ) == pytest.approx(2 * math.pi / math.sqrt(3))
    assert ix.threshold_period_map(Model.KGZ, 1e-6) == pytest.approx(
        2 * math.pi / math.sqrt(3), rel=1e-10
    )


def test_n_keeps_sign_with_derivative_c1():
    with pytest.raises(NoSignChangeError):
        ix.kappa0_root("derivative")


def test_reduced_c1_root():
    assert ix.kappa0_root("reduced") == pytest.approx(0.937094634985025, abs=1e-12)


def test_c1_forms_differ():
    assert ix.c1_kgz(0.9) != pytest.approx(ix.c1_kgz(0.9, "reduced"), rel=1e-3)
    with pytest.raises(DomainError):
        ix.c1_kgz(0.9, "other")


def test_index_report_fields():
    rep = ix.index_report(Model.BOUSSINESQ3, 0.6, 1.0)
    d = rep.as_dict()
    assert d["model"] == "boussinesq3"
    assert d["index_closed"] == pytest.approx(-1.0 / ix.index_M(0.6))
    assert d["stable_iff"].startswith("|c| >= ")


@given(kappa=st.floats(min_value=0.01, max_value=0.99), w=st.floats(min_value=0.1, max_value=1.0))
def test_kgz_linv_phi_above_bound(kappa, w):
    T = 2 * complete_elliptic(kappa).bigK * math.sqrt(2 - kappa * kappa) * math.sqrt(w)
    val = ix.linv_phi_kgz_closed(kappa, w)
    assert val == pytest.approx(-w * T * ix.fig9_ratio(kappa), rel=1e-14)
    assert val >= -w * T / 3


@given(kappa=st.floats(min_value=0.01, max_value=0.99), w=st.floats(min_value=0.1, max_value=1.0))
def test_boussinesq_linv_one_positive(kappa, w):
    assert ix.linv_one_b3_closed(kappa, w) > 0
    assert ix.linv_one_closed(kappa, w) > 0


@pytest.mark.parametrize("bad", [0.0, 1e-7, 1.0])
def test_modulus_outside_evaluation_domain_rejected(bad):
    with pytest.raises(DomainError):
        ix.index_N(bad)
