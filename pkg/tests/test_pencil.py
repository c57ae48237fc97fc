import numpy as np
import pytest

from wavestab.errors import DomainError
from wavestab.indices import kappa_star_for_period
from wavestab.pencil import (
    admissible_speed_range,
    classify_stability,
    companion_matrix,
    default_c_grid,
    pencil_spectrum,
    stability_scan,
)
from wavestab.waves import Model, build_wave_from_period


def test_companion_matrix_solves_quadratic_pencil():
    rng = np.random.default_rng(1)
    H = rng.standard_normal((6, 6))
    H = H + H.T
    D = rng.standard_normal((6, 6))
    D = D - D.T
    A = companion_matrix(H, D, 0.4, 1)
    lam, vecs = np.linalg.eig(A)
    for i in range(A.shape[0]):
        psi = vecs[:6, i]
        res = lam[i] ** 2 * psi + 0.8 * lam[i] * (D @ psi) + H @ psi
        assert np.linalg.norm(res) <= 1e-9 * max(1.0, abs(lam[i]) ** 2) * np.linalg.norm(psi)


@pytest.mark.parametrize("model,T,c", [
    (Model.BOUSSINESQ3, 10.0, 0.3), (Model.BOUSSINESQ2, 8.0, 0.6), (Model.KGZ, 6.0, 0.5),
])
def test_spectrum_symmetric_under_conjugation_and_frame_sign(model, T, c):
    p = build_wave_from_period(model, T, c)
    a = pencil_spectrum(model, p, c, 64, sign=1)
    b = pencil_spectrum(model, p, c, 64, sign=-1)
    assert a.conjugation_defect <= 1e-8
    assert abs(np.abs(a.nonkernel().real).max() - np.abs(b.nonkernel().real).max()) <= 1e-8


def test_speed_must_be_subluminal():
    p = build_wave_from_period(Model.BOUSSINESQ3, 10.0, 0.3)
    with pytest.raises(DomainError):
        pencil_spectrum(Model.BOUSSINESQ3, p, 1.0, 64)


@pytest.mark.parametrize("model,T", [(Model.BOUSSINESQ3, 10.0), (Model.BOUSSINESQ2, 8.0)])
def test_verdicts_away_from_threshold(model, T):
    _, c_T = kappa_star_for_period(model, T)
    below = classify_stability(model, T, c_T - 0.05, 128)
    above = classify_stability(model, T, c_T + 0.05, 128)
    assert below.max_growth > 1e-3 and not below.stable and below.agreement
    assert above.stable and above.agreement


@pytest.mark.parametrize("model,T", [(Model.BOUSSINESQ3, 10.0), (Model.BOUSSINESQ2, 8.0)])
def test_scan_boundary_within_one_step(model, T):
    scan = stability_scan(model, T, n=96)
    assert scan.monotone
    assert scan.abs_diff is not None and scan.abs_diff <= scan.grid_step


def test_kgz_scan_boundary_follows_closed_form_threshold():
    scan = stability_scan(Model.KGZ, 6.0, n=96)
    assert scan.monotone
    assert scan.abs_diff is not None and scan.abs_diff <= scan.grid_step


def test_admissible_ranges():
    lo, hi = admissible_speed_range(Model.KGZ, 4.0)
    assert lo == pytest.approx(np.sqrt(1 - 16 / (2 * np.pi**2)))
    assert hi == 1.0
    lo, hi = admissible_speed_range(Model.BOUSSINESQ2, 8.0)
    assert lo == 0.0 and hi == pytest.approx(np.sqrt(1 - (2 * np.pi / 8) ** 2))
    grid = default_c_grid(Model.BOUSSINESQ3, 10.0)
    b3_hi = admissible_speed_range(Model.BOUSSINESQ3, 10.0)[1]
    assert grid.size == 21 and 0 < grid[0] and grid[-1] < b3_hi
