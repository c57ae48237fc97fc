"""Periodic traveling waves of the Boussinesq (p = 2, 3) and KGZ models.

Each family is parametrized by the elliptic modulus ``kappa`` and the
frequency-like parameter ``w = 1 - c**2``; equivalently by the period
``T`` and the speed ``c``. Only the symmetric (``a = 0``) families on
their positive branches are built:

========== ================================ ===========================
model      profile                          period
========== ================================ ===========================
B2         phi0 + (phi1 - phi0) cn^2(a x)   4 K (1-k^2+k^4)^(1/4) / sqrt(w)
B3         phi1 dn(a x)                     2 K sqrt(2-k^2) / sqrt(w)
KGZ        phi1 dn(a x)                     2 K sqrt(2-k^2) sqrt(w)
========== ================================ ===========================
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt
from scipy import optimize

from .elliptic import complete_elliptic, jacobi_scd
from .errors import DomainError, GridSizeError, OutOfRangeError

KAPPA_MIN = 1e-9
KAPPA_MAX = 1.0 - 1e-9


class Model(enum.Enum):
    """Wave family tag."""

    BOUSSINESQ2 = "boussinesq2"
    BOUSSINESQ3 = "boussinesq3"
    KGZ = "kgz"

    @property
    def is_boussinesq(self) -> bool:
        return self is not Model.KGZ

    def __str__(self) -> str:
        return self.value


_ALIASES = {
    "b2": Model.BOUSSINESQ2,
    "boussinesq2": Model.BOUSSINESQ2,
    "b3": Model.BOUSSINESQ3,
    "boussinesq3": Model.BOUSSINESQ3,
    "kgz": Model.KGZ,
}


def parse_model(model: Model | str) -> Model:
    """Accept a :class:`Model` or one of its names (case-insensitive)."""
    if isinstance(model, Model):
        return model
    key = str(model).strip().lower()
    if key not in _ALIASES:
        raise DomainError(
            f"unknown model {model!r}; expected boussinesq2, boussinesq3 or kgz"
        )
    return _ALIASES[key]


@dataclass(frozen=True)
class WaveParams:
    """One constructed wave.

    ``c`` is ``None`` when the wave was requested with ``w > 1`` (no real
    speed); otherwise ``c >= 0`` unless a signed speed was supplied.
    """

    model: Model
    kappa: float
    w: float
    c: float | None
    T: float
    alpha: float
    phi0: float
    phi1: float
    b: float
    a: float = 0.0

    def profile(self, x: npt.ArrayLike) -> np.ndarray:
        """Evaluate the wave profile at ``x``."""
        sn, cn, dn = jacobi_scd(self.alpha * np.asarray(x, dtype=float), self.kappa)
        if self.model is Model.BOUSSINESQ2:
            return self.phi0 + (self.phi1 - self.phi0) * cn * cn
        return self.phi1 * dn

    def profile_derivative(self, x: npt.ArrayLike) -> np.ndarray:
        """Evaluate ``d phi / dx`` at ``x`` analytically."""
        sn, cn, dn = jacobi_scd(self.alpha * np.asarray(x, dtype=float), self.kappa)
        if self.model is Model.BOUSSINESQ2:
            return -2.0 * self.alpha * (self.phi1 - self.phi0) * cn * sn * dn
        return -self.phi1 * self.alpha * self.kappa**2 * sn * cn


@dataclass(frozen=True)
class WaveProfile:
    """A wave sampled on the endpoint-exclusive grid ``x_j = j T / n``."""

    params: WaveParams
    n: int
    xs: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    psi: np.ndarray | None = field(default=None, repr=False)

    def to_csv(self) -> str:
        """Render as CSV with header ``x,phi[,psi]`` (17 significant digits)."""
        buf = io.StringIO()
        cols = [self.xs, self.phi]
        header = "x,phi"
        if self.psi is not None:
            cols.append(self.psi)
            header += ",psi"
        buf.write(header + "\n")
        for row in zip(*cols):
            buf.write(",".join(format_number(v) for v in row) + "\n")
        return buf.getvalue()


def format_number(value: float) -> str:
    """Format a float with 17 significant digits."""
    return f"{float(value):.17g}"


def _check_kappa(kappa: float) -> float:
    kappa = float(kappa)
    if not (KAPPA_MIN <= kappa <= KAPPA_MAX):
        raise DomainError(
            f"kappa = {kappa!r} outside [{KAPPA_MIN:g}, 1 - 1e-9]"
        )
    return kappa


def _check_w(w: float) -> float:
    w = float(w)
    if not (math.isfinite(w) and w > 0.0):
        raise DomainError(f"w = {w!r} must be a positive finite number")
    return w


def _check_c(c: float) -> float:
    c = float(c)
    if not (math.isfinite(c) and abs(c) < 1.0):
        raise DomainError(f"speed c = {c!r} must satisfy |c| < 1")
    return c


def period_infimum(model: Model | str, w: float) -> float:
    """Lower end of the admissible period interval at fixed ``w``."""
    model = parse_model(model)
    w = _check_w(w)
    if model is Model.BOUSSINESQ2:
        return 2.0 * math.pi / math.sqrt(w)
    if model is Model.BOUSSINESQ3:
        return math.sqrt(2.0) * math.pi / math.sqrt(w)
    return math.sqrt(2.0) * math.pi * math.sqrt(w)


def period_of(model: Model | str, kappa: float, w: float) -> float:
    """Fundamental period ``T(kappa, w)`` of the requested family."""
    model = parse_model(model)
    kappa = _check_kappa(kappa)
    w = _check_w(w)
    K = complete_elliptic(kappa).bigK
    k2 = kappa * kappa
    if model is Model.BOUSSINESQ2:
        return 4.0 * K * (1.0 - k2 + k2 * k2) ** 0.25 / math.sqrt(w)
    if model is Model.BOUSSINESQ3:
        return 2.0 * K * math.sqrt(2.0 - k2) / math.sqrt(w)
    return 2.0 * K * math.sqrt(2.0 - k2) * math.sqrt(w)


def build_wave(
    model: Model | str, kappa: float, w: float, c: float | None = None
) -> WaveParams:
    """Construct the wave with modulus ``kappa`` and parameter ``w``.

    Parameters
    ----------
    model : Model or str
    kappa : float
        Elliptic modulus in ``[1e-9, 1 - 1e-9]``.
    w : float
        Positive; equals ``1 - c**2`` for a physical speed.
    c : float, optional
        Signed speed. If given it must satisfy ``|c| < 1`` and
        ``c**2 + w == 1`` to rounding. If omitted, ``c = sqrt(1 - w)``
        when ``w <= 1`` and ``None`` otherwise.

    Returns
    -------
    WaveParams
    """
    model = parse_model(model)
    kappa = _check_kappa(kappa)
    w = _check_w(w)
    if c is not None:
        c = _check_c(c)
        if abs(c * c + w - 1.0) > 1e-12:
            raise DomainError(f"inconsistent pair: c**2 + w = {c * c + w!r} != 1")
    elif w <= 1.0:
        c = math.sqrt(1.0 - w)

    K = complete_elliptic(kappa).bigK
    k2 = kappa * kappa
    if model is Model.BOUSSINESQ2:
        s = math.sqrt(1.0 - k2 + k2 * k2)
        alpha2 = w / (4.0 * s)
        alpha = math.sqrt(alpha2)
        phi1 = 4.0 * alpha2 * (1.0 + k2) + w
        phi0 = 4.0 * alpha2 * (1.0 - 2.0 * k2) + w
        b = phi1**3 / 3.0 - w * phi1**2
    elif model is Model.BOUSSINESQ3:
        alpha = math.sqrt(w / (2.0 - k2))
        phi1 = math.sqrt(2.0) * alpha
        phi0 = phi1 * math.sqrt((1.0 - kappa) * (1.0 + kappa))
        b = 0.5 * phi1**4 - w * phi1**2
    else:
        alpha = 1.0 / math.sqrt(w * (2.0 - k2))
        phi1 = 2.0 * math.sqrt(w / (2.0 - k2))
        phi0 = phi1 * math.sqrt((1.0 - kappa) * (1.0 + kappa))
        b = (4.0 * w * phi1**2 - phi1**4) / (4.0 * w * w)
    return WaveParams(
        model=model,
        kappa=kappa,
        w=w,
        c=c,
        T=2.0 * K / alpha,
        alpha=alpha,
        phi0=phi0,
        phi1=phi1,
        b=b,
    )


def kappa_from_period(model: Model | str, T: float, w: float) -> float:
    """Invert the period map at fixed ``w`` by bisection.

    Raises
    ------
    OutOfRangeError
        If ``T`` is not above the family's period infimum, or is so large
        that the modulus would exceed ``1 - 1e-9``.
    """
    model = parse_model(model)
    w = _check_w(w)
    T = float(T)
    lo_T = period_infimum(model, w)
    if not (math.isfinite(T) and T > lo_T):
        raise OutOfRangeError(
            f"period {T!r} must exceed {lo_T!r} for {model} at w = {w!r}"
        )
    f_lo = period_of(model, KAPPA_MIN, w) - T
    f_hi = period_of(model, KAPPA_MAX, w) - T
    if f_lo > 0.0:
        # T lies between the infimum and T(1e-9): clamp to the bracket end
        return KAPPA_MIN
    if f_hi < 0.0:
        raise OutOfRangeError(
            f"period {T!r} needs kappa > 1 - 1e-9 for {model} at w = {w!r}"
        )
    return optimize.bisect(
        lambda k: period_of(model, k, w) - T,
        KAPPA_MIN,
        KAPPA_MAX,
        xtol=1e-12,
        rtol=4.0 * np.finfo(float).eps,
        maxiter=200,
    )


def build_wave_from_period(model: Model | str, T: float, c: float) -> WaveParams:
    """Construct the wave with period ``T`` and speed ``c`` (``w = 1 - c**2``)."""
    c = _check_c(c)
    w = 1.0 - c * c
    kappa = kappa_from_period(model, T, w)
    return build_wave(model, kappa, w, c=c)


def sample_profile(params: WaveParams, n: int) -> WaveProfile:
    """Sample the wave on ``n`` equispaced points of ``[0, T)``.

    Raises
    ------
    GridSizeError
        If ``n`` is odd or below 16.
    """
    n = _check_grid(n, 16)
    xs = params.T * np.arange(n) / n
    phi = params.profile(xs)
    psi = -phi * phi / (2.0 * params.w) if params.model is Model.KGZ else None
    return WaveProfile(params=params, n=n, xs=xs, phi=phi, psi=psi)


def _check_grid(n: int, minimum: int) -> int:
    if isinstance(n, bool) or int(n) != n:
        raise GridSizeError(f"grid size must be an integer, got {n!r}")
    n = int(n)
    if n < minimum or n % 2:
        raise GridSizeError(f"grid size must be even and >= {minimum}, got {n}")
    return n


def spectral_second_derivative(values: np.ndarray, period: float) -> np.ndarray:
    """Second derivative of periodic samples via FFT multipliers."""
    n = values.size
    k = 2.0 * np.pi / period * np.fft.fftfreq(n, d=1.0 / n)
    return np.real(np.fft.ifft(-(k * k) * np.fft.fft(values)))


def ode_residual(profile: WaveProfile) -> float:
    """Max-norm residual of the profile equation on the sample grid."""
    p = profile.params
    phi = profile.phi
    d2 = spectral_second_derivative(phi, p.T)
    if p.model is Model.BOUSSINESQ2:
        res = d2 - p.w * phi + 0.5 * phi**2
    elif p.model is Model.BOUSSINESQ3:
        res = d2 - p.w * phi + phi**3
    else:
        res = -p.w * d2 + phi - phi**3 / (2.0 * p.w)
    return float(np.max(np.abs(res)))


def measured_period(params: WaveParams, *, length_scale: float | None = None) -> float:
    """Period recovered from the profile evaluator alone.

    A coarse scan locates the first return of the maximum at ``x = 0``.
    The estimate is refined as the stationary point of the
    autocorrelation defect ``D(tau) = int_0^W (phi(x + tau) - phi(x))^2 dx``
    over a fixed window ``W``; ``D`` vanishes exactly at the period.
    """
    h = (length_scale or period_infimum(params.model, params.w)) / 64.0
    dphi = params.profile_derivative
    x = h
    # leave the first maximum, then wait for the slope to turn negative again
    while dphi(x) <= 0.0:
        x += h
    while dphi(x) > 0.0:
        x += h
        if x > 1e6 * h:
            raise ArithmeticError("no second maximum found")
    guess = optimize.brentq(dphi, x - h, x, xtol=1e-14)

    window = guess
    nodes, weights = np.polynomial.legendre.leggauss(400)
    xq = 0.5 * window * (nodes + 1.0)
    wq = 0.5 * window * weights
    phi_x = params.profile(xq)

    def d_defect(tau: float) -> float:
        shifted = params.profile(xq + tau)
        return 2.0 * float(np.sum(wq * (shifted - phi_x) * dphi(xq + tau)))

    lo, hi = guess - 0.25 * h, guess + 0.25 * h
    if d_defect(lo) * d_defect(hi) > 0.0:
        return guess
    return optimize.brentq(d_defect, lo, hi, xtol=1e-15, rtol=1e-15)


def turning_values_residual(params: WaveParams) -> float:
    """Largest violation of the first-integral relation at ``phi0``, ``phi1``."""
    w, b = params.w, params.b
    if params.model is Model.BOUSSINESQ2:
        g = lambda r: r**3 / 3.0 - w * r**2 - b  # noqa: E731
    elif params.model is Model.BOUSSINESQ3:
        g = lambda r: 0.5 * r**4 - w * r**2 - b  # noqa: E731
    else:
        g = lambda r: 4.0 * w * r**2 - r**4 - 4.0 * w * w * b  # noqa: E731
    return max(abs(g(params.phi0)), abs(g(params.phi1)))

