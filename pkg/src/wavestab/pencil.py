"""Growth modes of the quadratic pencil ``lam^2 psi + s 2 c lam psi' + H psi = 0``.

``s = +1`` for Boussinesq (the ``x + ct`` frame) and ``s = -1`` for KGZ
(the ``x - ct`` frame). The pencil is linearized in companion form,

    [[0, I], [-H, -s 2c D]] (psi, lam psi) = lam (psi, lam psi),

on the mean-zero-restricted coordinates of
:class:`~wavestab.spectral.SpectralOperatorBundle`, and solved with a
dense nonsymmetric eigensolver. Eigenvalues inside a small ball around
zero come from ``ker H`` and are ignored when measuring growth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import DomainError, EigenConvergenceError, NoThresholdError, OutOfRangeError
from .indices import kappa_star_for_period
from .spectral import SpectralOperatorBundle, build_bundle
from .waves import (
    Model,
    WaveParams,
    build_wave_from_period,
    parse_model,
    period_infimum,
)

KERNEL_BALL = 1e-6
"""Kernel ball radius relative to ``sqrt(||H||)``."""

GROWTH_TOL = 1e-6
"""Default growth tolerance relative to ``sqrt(||H||)``."""


def frame_sign(model: Model | str) -> int:
    """``+1`` for Boussinesq, ``-1`` for KGZ."""
    return -1 if parse_model(model) is Model.KGZ else 1


@dataclass(frozen=True)
class PencilSpectrum:
    """Eigenvalues of the companion pencil at one speed ``c``."""

    model: Model
    params: WaveParams
    c: float
    n: int
    eigenvalues: np.ndarray = field(repr=False)
    max_growth: float
    scale: float
    kernel_radius: float
    sign: int

    @property
    def conjugation_defect(self) -> float:
        """Largest distance from ``conj(lam)`` to the spectrum, over ``max(1, max|lam|)``."""
        ev = self.eigenvalues
        if ev.size == 0:
            return 0.0
        gaps = np.min(np.abs(np.conj(ev)[:, None] - ev[None, :]), axis=1)
        return float(gaps.max()) / max(1.0, float(np.abs(ev).max()))

    def nonkernel(self) -> np.ndarray:
        """Eigenvalues outside the kernel ball."""
        return self.eigenvalues[np.abs(self.eigenvalues) > self.kernel_radius]


def companion_matrix(H: np.ndarray, D: np.ndarray, c: float, sign: int) -> np.ndarray:
    """Companion linearization ``[[0, I], [-H, -sign 2 c D]]``."""
    m = H.shape[0]
    return np.block([[np.zeros((m, m)), np.eye(m)], [-H, -sign * 2.0 * c * D]])


def pencil_spectrum(
    model: Model | str,
    params: WaveParams,
    c: float,
    n: int,
    *,
    bundle: SpectralOperatorBundle | None = None,
    sign: int | None = None,
) -> PencilSpectrum:
    """Solve the quadratic pencil for the wave ``params`` at speed ``c``.

    ``c`` is a scan parameter and need not equal ``params.c``. ``sign``
    overrides the model's frame sign.
    """
    model = parse_model(model)
    c = float(c)
    if not abs(c) < 1.0:
        raise DomainError(f"speed c = {c!r} must satisfy |c| < 1")
    bundle = bundle or build_bundle(model, params, n)
    s = frame_sign(model) if sign is None else int(sign)
    H = bundle.opH
    D = bundle.restricted_diff1()
    try:
        ev = sla.eigvals(companion_matrix(H, D, c, s))
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigenConvergenceError(f"pencil eigensolver failed: {exc}") from exc
    if not np.all(np.isfinite(ev)):
        raise EigenConvergenceError("pencil eigensolver returned non-finite values")
    scale = math.sqrt(float(np.linalg.norm(H, 2)))
    radius = KERNEL_BALL * scale
    outside = ev[np.abs(ev) > radius]
    growth = float(outside.real.max()) if outside.size else 0.0
    return PencilSpectrum(
        model=model,
        params=params,
        c=c,
        n=bundle.n,
        eigenvalues=ev,
        max_growth=growth,
        scale=scale,
        kernel_radius=radius,
        sign=s,
    )


@dataclass(frozen=True)
class StabilityVerdict:
    """Pencil verdict compared with the closed-form threshold ``c_T``."""

    model: Model
    T: float
    c: float
    kappa: float
    stable: bool
    max_growth: float
    tolerance: float
    threshold_prediction: float
    predicted_stable: bool
    agreement: bool


def threshold_for_period(model: Model | str, T: float) -> float:
    """Closed-form ``c_T``; ``math.inf`` when no threshold wave of period ``T`` exists."""
    try:
        return kappa_star_for_period(model, T)[1]
    except (OutOfRangeError, NoThresholdError):
        return math.inf


def classify_stability(
    model: Model | str,
    T: float,
    c: float,
    n: int = 128,
    growth_tol: float = GROWTH_TOL,
    *,
    c_T: float | None = None,
) -> StabilityVerdict:
    """Build the wave of period ``T`` and speed ``c`` and classify it.

    Stable iff ``max_growth <= growth_tol * sqrt(||H||)``; the prediction
    is ``|c| >= c_T``.
    """
    model = parse_model(model)
    params = build_wave_from_period(model, T, c)
    spec = pencil_spectrum(model, params, c, n)
    tol = growth_tol * spec.scale
    stable = spec.max_growth <= tol
    c_T = threshold_for_period(model, T) if c_T is None else c_T
    predicted = abs(c) >= c_T
    return StabilityVerdict(
        model=model,
        T=float(T),
        c=float(c),
        kappa=params.kappa,
        stable=stable,
        max_growth=spec.max_growth,
        tolerance=tol,
        threshold_prediction=c_T,
        predicted_stable=predicted,
        agreement=stable == predicted,
    )


def admissible_speed_range(model: Model | str, T: float) -> tuple[float, float]:
    """Open interval of ``|c|`` for which a wave of period ``T`` exists."""
    model = parse_model(model)
    T = float(T)
    if model is Model.KGZ:
        # T > sqrt(2) pi sqrt(w)  <=>  w < T^2 / (2 pi^2)
        w_max = T * T / (2.0 * math.pi**2)
        lo = math.sqrt(1.0 - w_max) if w_max < 1.0 else 0.0
        return lo, 1.0
    inf1 = period_infimum(model, 1.0)
    if T <= inf1:
        raise OutOfRangeError(f"period {T!r} must exceed {inf1!r} for {model}")
    return 0.0, math.sqrt(1.0 - (inf1 / T) ** 2)


def default_c_grid(model: Model | str, T: float, points: int = 21) -> np.ndarray:
    """``points`` interior speeds equally spaced across the admissible range."""
    lo, hi = admissible_speed_range(model, T)
    return np.linspace(lo, hi, points + 2)[1:-1]


@dataclass(frozen=True)
class ScanResult:
    """Pencil verdicts along a speed grid."""

    model: Model
    T: float
    n: int
    rows: tuple[tuple[float, float, bool], ...]
    c_T_closed: float
    c_T_empirical: float | None
    last_unstable: float | None
    first_stable: float | None
    abs_diff: float | None
    grid_step: float
    monotone: bool

    def summary(self) -> dict:
        return {
            "model": str(self.model),
            "T": self.T,
            "c_T_closed": self.c_T_closed,
            "c_T_empirical": self.c_T_empirical,
            "abs_diff": self.abs_diff,
        }


def stability_scan(
    model: Model | str,
    T: float,
    c_grid=None,
    n: int = 128,
    growth_tol: float = GROWTH_TOL,
) -> ScanResult:
    """Classify every speed in ``c_grid`` and locate the empirical boundary.

    The boundary is the midpoint between the last unstable and the first
    stable ``|c|``. ``monotone`` is false if the verdicts along increasing
    ``|c|`` switch more than once.
    """
    model = parse_model(model)
    grid = default_c_grid(model, T) if c_grid is None else np.asarray(c_grid, dtype=float)
    grid = grid[np.argsort(np.abs(grid))]
    c_T = threshold_for_period(model, T)
    rows = []
    for c in grid:
        v = classify_stability(model, T, float(c), n, growth_tol, c_T=c_T)
        rows.append((float(c), v.max_growth, v.stable))
    flags = [r[2] for r in rows]
    switches = sum(1 for a, b in zip(flags, flags[1:]) if a != b)
    monotone = switches == 0 or (switches == 1 and not flags[0])
    last_unstable = first_stable = emp = diff = None
    if monotone and switches == 1:
        i = flags.index(True)
        last_unstable = abs(rows[i - 1][0])
        first_stable = abs(rows[i][0])
        emp = 0.5 * (last_unstable + first_stable)
        diff = abs(emp - c_T) if math.isfinite(c_T) else None
    step = float(np.max(np.diff(np.abs(grid)))) if grid.size > 1 else math.nan
    return ScanResult(
        model=model,
        T=float(T),
        n=n,
        rows=tuple(rows),
        c_T_closed=c_T,
        c_T_empirical=emp,
        last_unstable=last_unstable,
        first_stable=first_stable,
        abs_diff=diff,
        grid_step=step,
        monotone=monotone,
    )
