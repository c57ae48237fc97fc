"""Closed-form stability indices, critical speeds and threshold periods.

For every family the stability index is the scalar
``<H^{-1} psi0', psi0'>`` and depends on ``(kappa, w)`` only through

* Boussinesq p = 3: ``-1 / (w M(kappa))``
* Boussinesq p = 2: ``-1 / (w Ftilde(kappa))``
* KGZ: ``-N(kappa) / w``

A negative index gives the critical value ``mu* = 1 / (2 sqrt(-index))``
and waves are stable exactly when ``|c| >= mu*``. Solving
``c**2 = mu*(w = 1 - c**2)**2`` gives the threshold speed as a function
of ``kappa`` alone.

All kappa-derivatives are assembled analytically from
:func:`~wavestab.elliptic.d_complete_elliptic`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np
from scipy import optimize

from .elliptic import EllipticPair, complete_elliptic, d_complete_elliptic
from .errors import (
    DegenerateFormulaError,
    DomainError,
    NoSignChangeError,
    NoThresholdError,
    OutOfRangeError,
)
from .waves import Model, parse_model, period_of

KAPPA_LO = 1e-6
KAPPA_HI = 1.0 - 1e-9

C1Form = Literal["derivative", "reduced"]
MForm = Literal["K2", "K"]


def _check(kappa: float) -> float:
    kappa = float(kappa)
    if not (KAPPA_LO <= kappa <= KAPPA_HI):
        raise DomainError(f"kappa = {kappa!r} outside [1e-6, 1 - 1e-9]")
    return kappa


def _kp2(kappa: float) -> float:
    return (1.0 - kappa) * (1.0 + kappa)


def _quartic(kappa: float) -> tuple[float, float]:
    """``q = 1 - k^2 + k^4`` and ``dq/dk``."""
    k2 = kappa * kappa
    return 1.0 - k2 + k2 * k2, -2.0 * kappa + 4.0 * kappa * k2


# Below SERIES_KAPPA the closed forms lose digits to cancellation between
# O(1) terms (relative error grows like eps / kappa^8). There the same
# functions are evaluated from their Maclaurin series in m = kappa^2,
# whose coefficients are exact rationals (times pi for fig8_function).
# At the switch point both evaluations agree to about 1e-10 relative.
SERIES_KAPPA = 0.08

_SERIES = {
    "M": (0, 0, 3 / 16, 3 / 16, 633 / 4096, 249 / 2048, 24993 / 262144,
          19875 / 262144, 16524225 / 268435456),
    "Ftilde": (0, 0, 3 / 16, 3 / 16, 21 / 256, -3 / 128, -13425 / 262144,
               -339 / 262144, 2091285 / 33554432),
    "bracket": (1 / 5, 0, 27 / 320, 27 / 320, 441 / 8192, 477 / 20480,
                16659 / 2097152, 81693 / 10485760, 1830375 / 134217728),
    "N": (1 / 2, 0, -1 / 256, -1 / 256, -29 / 8192, -13 / 4096,
          -23969 / 8388608, -21731 / 8388608, -158743 / 67108864),
    "fig9": (1 / 3, 0, -1 / 192, -1 / 192, -115 / 24576, -17 / 4096,
             -23257 / 6291456, -20875 / 6291456, -1208807 / 402653184),
    "fig8_over_pi": (1 / 16, 3 / 64, 75 / 2048, 245 / 8192, 6615 / 262144,
                     22869 / 1048576, 1288287 / 67108864, 4601025 / 268435456,
                     265939245 / 17179869184),
}


def _series(name: str, kappa: float) -> float:
    m = kappa * kappa
    acc = 0.0
    for coeff in reversed(_SERIES[name]):
        acc = acc * m + coeff
    return acc


# --------------------------------------------------------------------------
# Boussinesq p = 3
# --------------------------------------------------------------------------


def index_M(kappa: float, form: MForm = "K2") -> float:
    """The function ``M(kappa)`` with index ``-1 / (w M)``.

    Parameters
    ----------
    kappa : float
    form : {"K2", "K"}
        Denominator ``E^2 - (1 - k^2) K^2`` (default, dimensionally
        consistent) or the variant ``E^2 - (1 - k^2) K``.
    """
    kappa = _check(kappa)
    p = complete_elliptic(kappa)
    K, E = p.bigK, p.bigE
    k2 = kappa * kappa
    kp2 = _kp2(kappa)
    first = 4.0 * E - math.pi**2 / K
    # (2 - k^2) E - 2 k'^2 K = 2 (E - k'^2 K) - k^2 E
    second = 2.0 * p.e_minus_kp2k - k2 * E
    if form == "K2":
        den = E * E - kp2 * K * K
    elif form == "K":
        den = E * E - kp2 * K
    else:
        raise DomainError(f"unknown M form {form!r}")
    if form == "K2" and kappa < SERIES_KAPPA:
        return _series("M", kappa)
    return first * second / ((2.0 - k2) * den)


def fig8_function(kappa: float) -> float:
    """``B1 / ((k^2-2-2s) B3) + B2 / ((k^2-2+2s) B4)``, ``s = sqrt(1-k^2+k^4)``.

    Equals ``(alpha^3 / 2) <L^{-1} 1, 1>`` for the p = 3 dnoidal wave.
    """
    kappa = _check(kappa)
    if kappa < SERIES_KAPPA:
        return math.pi * _series("fig8_over_pi", kappa)
    p = complete_elliptic(kappa)
    K, E = p.bigK, p.bigE
    k2 = kappa * kappa
    k4 = k2 * k2
    s = math.sqrt(_quartic(kappa)[0])
    sn4 = (2.0 + k2) * K - 2.0 * (1.0 + k2) * E
    B1 = ((s - 1.0) / k2 * K + (1.0 + k2 - s) / k2 * E) ** 2
    B2 = (-(s + 1.0) / k2 * K + (1.0 + k2 + s) / k2 * E) ** 2
    r3 = 1.0 + k2 - s
    r4 = 1.0 + k2 + s
    B3 = K - 2.0 * r3 / k2 * p.k_minus_e + r3 * r3 / (3.0 * k4) * sn4
    B4 = K - 2.0 * r4 / k2 * p.k_minus_e + r4 * r4 / (3.0 * k4) * sn4
    return B1 / ((k2 - 2.0 - 2.0 * s) * B3) + B2 / ((k2 - 2.0 + 2.0 * s) * B4)


def linv_one_b3_closed(kappa: float, w: float) -> float:
    """``<L^{-1} 1, 1>`` over one period for the p = 3 wave."""
    alpha = math.sqrt(w / (2.0 - kappa * kappa))
    return 2.0 / alpha**3 * fig8_function(kappa)


# --------------------------------------------------------------------------
# Boussinesq p = 2
# --------------------------------------------------------------------------


def aux_F(kappa: float) -> float:
    """``F = 16 K [3E + (k^2 - 2 + sqrt(1-k^2+k^4)) K]``."""
    kappa = _check(kappa)
    p = complete_elliptic(kappa)
    s = math.sqrt(_quartic(kappa)[0])
    return 16.0 * p.bigK * (3.0 * p.bigE + (kappa * kappa - 2.0 + s) * p.bigK)


def aux_F_prime(kappa: float) -> float:
    """Analytic ``dF/dkappa``."""
    kappa = _check(kappa)
    p = complete_elliptic(kappa)
    K, E = p.bigK, p.bigE
    dK, dE = d_complete_elliptic(kappa)
    q, dq = _quartic(kappa)
    s = math.sqrt(q)
    ds = dq / (2.0 * s)
    inner = 3.0 * E + (kappa * kappa - 2.0 + s) * K
    d_inner = 3.0 * dE + (2.0 * kappa + ds) * K + (kappa * kappa - 2.0 + s) * dK
    return 16.0 * (dK * inner + K * d_inner)


def aux_G(kappa: float) -> float:
    """``G = 1 / (128 d/dk [K^4 (1 - k^2 + k^4)])``."""
    kappa = _check(kappa)
    K = complete_elliptic(kappa).bigK
    dK, _ = d_complete_elliptic(kappa)
    q, dq = _quartic(kappa)
    return 1.0 / (128.0 * (4.0 * K**3 * dK * q + K**4 * dq))


def ftilde_bracket(kappa: float) -> float:
    """``1 - 16 sqrt(1-k^2+k^4) K^2 F' G``; positive on (0, 1)."""
    kappa = _check(kappa)
    if kappa < SERIES_KAPPA:
        return _series("bracket", kappa)
    K = complete_elliptic(kappa).bigK
    s = math.sqrt(_quartic(kappa)[0])
    return 1.0 - 16.0 * s * K * K * aux_F_prime(kappa) * aux_G(kappa)


def index_Ftilde(kappa: float) -> float:
    """The function ``Ftilde(kappa)`` with index ``-1 / (w Ftilde)``.

    Raises
    ------
    DegenerateFormulaError
        If the inner bracket :func:`ftilde_bracket` vanishes.
    """
    kappa = _check(kappa)
    if kappa < SERIES_KAPPA:
        return _series("Ftilde", kappa)
    K = complete_elliptic(kappa).bigK
    q, _ = _quartic(kappa)
    s = math.sqrt(q)
    F = aux_F(kappa)
    FG = aux_F_prime(kappa) * aux_G(kappa)
    bracket = 1.0 - 16.0 * s * K * K * FG
    if abs(bracket) < 1e-13:
        raise DegenerateFormulaError(
            f"bracket 1 - 16 s K^2 F' G vanishes at kappa = {kappa!r}"
        )
    num = 2.0 * F - F * F / (16.0 * s * K * K)
    den = F + 256.0 * K**4 * FG * q + 4096.0 * K**6 * q**1.5 * FG * FG / bracket
    return num / den


def linv_one_closed(kappa: float, w: float, T: float | None = None) -> float:
    """``<L^{-1} 1, 1> = (T / w) [1 - 16 s K^2 F' G]`` for the p = 2 wave."""
    if T is None:
        T = period_of(Model.BOUSSINESQ2, kappa, w)
    return T / w * ftilde_bracket(kappa)


# --------------------------------------------------------------------------
# KGZ
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class _KgzParts:
    pair: EllipticPair
    dK: float
    dE: float
    P: float
    dP: float
    dQ: float


def _kgz_parts(kappa: float) -> _KgzParts:
    pair = complete_elliptic(kappa)
    K, E = pair.bigK, pair.bigE
    dK, dE = d_complete_elliptic(kappa)
    q = 2.0 - kappa * kappa
    P = q * K * K
    dP = -2.0 * kappa * K * K + 2.0 * q * K * dK
    dQ = dK * E + K * dE
    return _KgzParts(pair, dK, dE, P, dP, dQ)


def quartic_moment_I1(kappa: float) -> float:
    """``I1 = int_0^K dn^4 dy = ((4 - 2k^2) E - (1 - k^2) K) / 3``."""
    kappa = _check(kappa)
    p = complete_elliptic(kappa)
    return ((4.0 - 2.0 * kappa * kappa) * p.bigE - _kp2(kappa) * p.bigK) / 3.0


def fig9_ratio(kappa: float) -> float:
    """``2 d/dk[K E] / d/dk[(2 - k^2) K^2]``; tends to 1/3 as k -> 0."""
    kappa = _check(kappa)
    if kappa < SERIES_KAPPA:
        return _series("fig9", kappa)
    parts = _kgz_parts(kappa)
    return 2.0 * parts.dQ / parts.dP


def linv_phi_kgz_closed(kappa: float, w: float, T: float | None = None) -> float:
    """``<L^{-1} phi, phi> = -w T * fig9_ratio(kappa)`` for the KGZ wave."""
    if T is None:
        T = period_of(Model.KGZ, kappa, w)
    return -w * T * fig9_ratio(kappa)


def c1_kgz(kappa: float, form: C1Form = "derivative") -> float:
    """Integration constant ``c1`` as a function of ``kappa``.

    Parameters
    ----------
    form : {"derivative", "reduced"}
        ``"derivative"`` evaluates
        ``(2EK P' - 2P (KE)') / (P P' - 2P (KE)')`` with
        ``P = (2 - k^2) K^2``. ``"reduced"`` evaluates the rational
        expression in ``E`` and ``K`` alone,
        ``((2-k^2)E^2 - 8k'^2 EK + 2k'^2(2-k^2)K^2) /
        (2(2-k^2)^2 EK - 2k'^2(2-k^2)K^2 - 2(2-k^2)E^2)``. The two are
        not equal; only the first agrees with the numerically solved
        index.
    """
    kappa = _check(kappa)
    parts = _kgz_parts(kappa)
    K, E = parts.pair.bigK, parts.pair.bigE
    if form == "derivative":
        P, dP, dQ = parts.P, parts.dP, parts.dQ
        return (2.0 * E * K * dP - 2.0 * P * dQ) / (P * dP - 2.0 * P * dQ)
    if form == "reduced":
        q = 2.0 - kappa * kappa
        kp2 = _kp2(kappa)
        num = q * E * E - 8.0 * kp2 * E * K + 2.0 * kp2 * q * K * K
        den = 2.0 * q * q * E * K - 2.0 * kp2 * q * K * K - 2.0 * q * E * E
        return num / den
    raise DomainError(f"unknown c1 form {form!r}")


def index_N(kappa: float, c1_form: C1Form = "derivative") -> float:
    """The function ``N(kappa)`` with KGZ index ``-N / w``.

    Assembled from ``I1``, ``c1`` and the moments ``J1 ... J5``,
    normalized by ``1/m^2 = (16 w / T)[EK - k'^2 K^2/(2-k^2) - E^2/(2-k^2)]``.
    """
    kappa = _check(kappa)
    if kappa < SERIES_KAPPA and c1_form == "derivative":
        return _series("N", kappa)
    parts = _kgz_parts(kappa)
    K, E = parts.pair.bigK, parts.pair.bigE
    dK, dE = parts.dK, parts.dE
    P, dP, dQ = parts.P, parts.dP, parts.dQ
    q = 2.0 - kappa * kappa
    kp2 = _kp2(kappa)
    c1 = c1_kgz(kappa, c1_form)

    I1 = quartic_moment_I1(kappa)
    dI1 = (-4.0 * kappa * E + (4.0 - 2.0 * kappa * kappa) * dE
           + 2.0 * kappa * K - kp2 * dK) / 3.0
    R = K * I1 / q
    dR = (dK * I1 + K * dI1) / q + 2.0 * kappa * K * I1 / (q * q)

    J1 = 16.0 * R
    J2 = 8.0 * c1 * E * K
    J3 = 8.0 * (1.0 - c1) * (3.0 * R - P / dP * dR)
    J4 = 32.0 * c1 * R
    J5 = 8.0 * (1.0 - c1) * (2.0 * K * E - P * dQ / dP)
    # E K - (k'^2 K^2 + E^2) / (2 - k^2) factors as (K - E)(E - k'^2 K) / (2 - k^2)
    norm = 16.0 * parts.pair.k_minus_e * parts.pair.e_minus_kp2k / q
    return -(J1 + 3.0 * J2 - 2.0 * J3 - 2.0 * J4 + J5) / norm


# --------------------------------------------------------------------------
# Model-generic quantities
# --------------------------------------------------------------------------


def _shape_value(model: Model, kappa: float, c1_form: C1Form) -> float:
    """``M``, ``Ftilde`` or ``1 / N``: the index is ``-1 / (w * value)``."""
    if model is Model.BOUSSINESQ3:
        return index_M(kappa)
    if model is Model.BOUSSINESQ2:
        return index_Ftilde(kappa)
    return 1.0 / index_N(kappa, c1_form)


def index_closed(
    model: Model | str, kappa: float, w: float, c1_form: C1Form = "derivative"
) -> float:
    """Closed-form ``<H^{-1} psi0', psi0'>`` at ``(kappa, w)``."""
    model = parse_model(model)
    w = float(w)
    if not w > 0.0:
        raise DomainError(f"w = {w!r} must be positive")
    if model is Model.BOUSSINESQ3:
        return -1.0 / (w * index_M(kappa))
    if model is Model.BOUSSINESQ2:
        return -1.0 / (w * index_Ftilde(kappa))
    return -index_N(kappa, c1_form) / w


def mu_star(
    model: Model | str, kappa: float, w: float, c1_form: C1Form = "derivative"
) -> float:
    """Critical value ``1 / (2 sqrt(-index))``; ``math.inf`` if index >= 0."""
    idx = index_closed(model, kappa, w, c1_form)
    if idx >= 0.0:
        return math.inf
    return 1.0 / (2.0 * math.sqrt(-idx))


def threshold_speed(
    model: Model | str, kappa: float, c1_form: C1Form = "derivative"
) -> float:
    """Minimal stable ``|c|`` at modulus ``kappa``.

    ``sqrt(M / (4 + M))``, ``sqrt(Ft / (4 + Ft))`` or ``1 / sqrt(1 + 4N)``.

    Raises
    ------
    NoThresholdError
        When the index is nonnegative (unstable for every speed).
    """
    model = parse_model(model)
    if model is Model.KGZ:
        N = index_N(kappa, c1_form)
        if N <= 0.0:
            raise NoThresholdError(
                f"N({kappa!r}) = {N!r} <= 0: KGZ wave unstable for every speed"
            )
        return 1.0 / math.sqrt(1.0 + 4.0 * N)
    v = _shape_value(model, kappa, c1_form)
    if v <= 0.0:
        raise NoThresholdError(f"index nonnegative at kappa = {kappa!r}")
    return math.sqrt(v / (4.0 + v))


def threshold_period_map(
    model: Model | str, kappa: float, c1_form: C1Form = "derivative"
) -> float:
    """Period of the threshold wave at modulus ``kappa``.

    ``K sqrt(2-k^2) sqrt(4+M)``, ``2K (1-k^2+k^4)^(1/4) sqrt(4+Ft)`` or
    ``4K sqrt(2-k^2) sqrt(N) / sqrt(1+4N)``.
    """
    model = parse_model(model)
    kappa = _check(kappa)
    K = complete_elliptic(kappa).bigK
    k2 = kappa * kappa
    if model is Model.BOUSSINESQ3:
        return K * math.sqrt(2.0 - k2) * math.sqrt(4.0 + index_M(kappa))
    if model is Model.BOUSSINESQ2:
        q, _ = _quartic(kappa)
        return 2.0 * K * q**0.25 * math.sqrt(4.0 + index_Ftilde(kappa))
    N = index_N(kappa, c1_form)
    if N <= 0.0:
        raise NoThresholdError(f"N({kappa!r}) = {N!r} <= 0: no threshold wave")
    return 4.0 * K * math.sqrt(2.0 - k2) * math.sqrt(N) / math.sqrt(1.0 + 4.0 * N)


def threshold_period_infimum(
    model: Model | str, c1_form: C1Form = "derivative"
) -> float:
    """Infimum of :func:`threshold_period_map` over ``0 < kappa < 1``.

    For KGZ with the derivative form ``N -> 1/2`` as ``kappa -> 0``, giving
    ``2 pi / sqrt(3)``; with the reduced form the map vanishes at the root
    of ``N``.
    """
    model = parse_model(model)
    if model is Model.BOUSSINESQ3:
        return math.sqrt(2.0) * math.pi
    if model is Model.BOUSSINESQ2:
        return 2.0 * math.pi
    if c1_form == "derivative":
        return 2.0 * math.pi / math.sqrt(3.0)
    return 0.0


def _positive_lower_end(model: Model, c1_form: C1Form) -> float:
    """Smallest kappa at which the threshold exists."""
    if model is not Model.KGZ:
        return KAPPA_LO
    if index_N(KAPPA_LO, c1_form) > 0.0:
        return KAPPA_LO
    return kappa0_root(c1_form) + 1e-12


def kappa_star_for_period(
    model: Model | str, T: float, c1_form: C1Form = "derivative"
) -> tuple[float, float]:
    """Solve the threshold-period equation for ``kappa_T``; return ``(kappa_T, c_T)``.

    Raises
    ------
    OutOfRangeError
        If ``T`` lies outside the range of :func:`threshold_period_map`
        on the evaluation domain.
    """
    model = parse_model(model)
    T = float(T)
    inf_T = threshold_period_infimum(model, c1_form)
    if not (math.isfinite(T) and T > inf_T):
        raise OutOfRangeError(f"period {T!r} must exceed {inf_T!r} for {model}")
    lo = _positive_lower_end(model, c1_form)
    f = lambda k: threshold_period_map(model, k, c1_form) - T  # noqa: E731
    f_lo, f_hi = f(lo), f(KAPPA_HI)
    if f_lo > 0.0:
        if model is Model.KGZ and lo == KAPPA_LO:
            raise OutOfRangeError(
                f"period {T!r} below the smallest threshold period "
                f"{f_lo + T!r} attained for {model}"
            )
        kappa_T = lo
    elif f_hi < 0.0:
        raise OutOfRangeError(f"period {T!r} needs kappa > 1 - 1e-9 for {model}")
    else:
        kappa_T = optimize.brentq(f, lo, KAPPA_HI, xtol=1e-14, rtol=1e-15, maxiter=200)
    return kappa_T, threshold_speed(model, kappa_T, c1_form)


def kappa0_root(c1_form: C1Form = "derivative", grid: int = 400) -> float:
    """Root of ``N`` on ``[0.05, 1 - 1e-9]``, located by a scan then bisection.

    Raises
    ------
    NoSignChangeError
        If ``N`` keeps one sign on the scan grid.
    """
    ks = np.linspace(0.05, KAPPA_HI, grid)
    vals = np.array([index_N(k, c1_form) for k in ks])
    flips = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    if flips.size == 0:
        raise NoSignChangeError(
            f"N keeps sign {np.sign(vals[0]):+.0f} on [0.05, 1 - 1e-9] "
            f"(c1 form {c1_form!r}); min N = {vals.min():.6g}"
        )
    i = int(flips[0])
    return optimize.bisect(
        lambda k: index_N(k, c1_form), ks[i], ks[i + 1], xtol=1e-14, maxiter=200
    )


# --------------------------------------------------------------------------
# Reports
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class IndexReport:
    """Closed-form index data at one ``(model, kappa, w)``."""

    model: Model
    kappa: float
    w: float
    index_closed: float
    mu_star: float
    c_star: float | None
    stable_iff: str
    index_numeric: float | None = None

    def as_dict(self) -> dict:
        return {
            "model": str(self.model),
            "kappa": self.kappa,
            "w": self.w,
            "index_closed": self.index_closed,
            "mu_star": self.mu_star,
            "c_star": self.c_star,
            "stable_iff": self.stable_iff,
            "index_numeric": self.index_numeric,
        }


def index_report(
    model: Model | str,
    kappa: float,
    w: float,
    c1_form: C1Form = "derivative",
    index_numeric: float | None = None,
) -> IndexReport:
    """Bundle index, ``mu*`` and threshold speed."""
    model = parse_model(model)
    idx = index_closed(model, kappa, w, c1_form)
    mu = mu_star(model, kappa, w, c1_form)
    if math.isinf(mu):
        c_star, verdict = None, "unstable for all c"
    else:
        c_star = threshold_speed(model, kappa, c1_form)
        verdict = f"|c| >= {c_star:.17g}"
    return IndexReport(
        model=model,
        kappa=float(kappa),
        w=float(w),
        index_closed=idx,
        mu_star=mu,
        c_star=c_star,
        stable_iff=verdict,
        index_numeric=index_numeric,
    )
