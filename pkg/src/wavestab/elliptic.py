"""Complete elliptic integrals and Jacobi elliptic functions.

Everything here is evaluated with the arithmetic-geometric mean (AGM).
The AGM also yields the differences ``K - E`` and ``E - (1 - k^2) K`` as
sums of positive terms, so the derivative formulas and every closed form
built on them keep full relative accuracy for small moduli.

The modulus ``kappa`` (not the parameter ``m = kappa**2``) is used
throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

KAPPA_CAP = 1.0 - 1e-12
"""Largest modulus accepted; ``K`` diverges logarithmically at 1."""

_MAX_AGM_STEPS = 64


@dataclass(frozen=True)
class EllipticPair:
    """``K(kappa)`` and ``E(kappa)`` from one AGM evaluation.

    ``k_minus_e`` and ``e_minus_kp2k`` hold ``K - E`` and
    ``E - (1 - kappa^2) K`` computed without cancellation.
    """

    kappa: float
    bigK: float
    bigE: float
    k_minus_e: float
    e_minus_kp2k: float

    @property
    def kappa_prime_sq(self) -> float:
        return (1.0 - self.kappa) * (1.0 + self.kappa)


def _check_kappa(kappa: float, *, allow_zero: bool = True) -> float:
    kappa = float(kappa)
    if not math.isfinite(kappa):
        raise DomainError(f"elliptic modulus must be finite, got {kappa!r}")
    if kappa < 0.0 or (kappa == 0.0 and not allow_zero):
        raise DomainError(f"elliptic modulus {kappa!r} outside the domain")
    if kappa >= KAPPA_CAP:
        raise DomainError(
            f"elliptic modulus {kappa!r} too close to 1 (cap is 1 - 1e-12)"
        )
    return kappa


def _agm_ladder(kappa: float) -> tuple[list[float], list[float]]:
    """Return the AGM sequences ``a_n`` and ``c_n`` started from (1, k')."""
    a = 1.0
    b = math.sqrt((1.0 - kappa) * (1.0 + kappa))
    c = kappa
    a_seq, c_seq = [a], [c]
    for _ in range(_MAX_AGM_STEPS):
        a_next = 0.5 * (a + b)
        # c_{n+1} = c_n^2 / (4 a_{n+1}) avoids forming a_n - b_n
        c = c * c / (4.0 * a_next)
        b = math.sqrt(a * b)
        a = a_next
        a_seq.append(a)
        c_seq.append(c)
        if c <= 1e-17 * a:
            break
    return a_seq, c_seq


def complete_elliptic(kappa: float) -> EllipticPair:
    """Complete elliptic integrals of the first and second kind.

    Parameters
    ----------
    kappa : float
        Modulus in ``[0, 1 - 1e-12)``.

    Returns
    -------
    EllipticPair
    """
    kappa = _check_kappa(kappa)
    a_seq, c_seq = _agm_ladder(kappa)
    bigK = math.pi / (2.0 * a_seq[-1])
    # E = K (1 - sum_{n>=0} 2^{n-1} c_n^2); split off the n = 0 term
    tail = 0.0
    weight = 1.0
    for c in c_seq[1:]:
        tail += weight * c * c
        weight *= 2.0
    half_k2 = 0.5 * kappa * kappa
    k_minus_e = bigK * (half_k2 + tail)
    e_minus_kp2k = bigK * (half_k2 - tail)
    return EllipticPair(
        kappa=kappa,
        bigK=bigK,
        bigE=bigK - k_minus_e,
        k_minus_e=k_minus_e,
        e_minus_kp2k=e_minus_kp2k,
    )


def d_complete_elliptic(kappa: float) -> tuple[float, float]:
    """Derivatives ``dK/dkappa`` and ``dE/dkappa``.

    Uses ``K' = (E - (1-k^2) K) / (k (1-k^2))`` and ``E' = (E - K) / k``
    with both numerators taken from the AGM sums.
    """
    kappa = _check_kappa(kappa, allow_zero=False)
    pair = complete_elliptic(kappa)
    kp2 = pair.kappa_prime_sq
    dK = pair.e_minus_kp2k / (kappa * kp2)
    dE = -pair.k_minus_e / kappa
    return dK, dE


def jacobi_scd(y, kappa: float):
    """Jacobi elliptic functions ``sn``, ``cn``, ``dn`` at real argument(s).

    Descending Landen transformation driven by the AGM ladder. The
    argument is first reduced modulo the real period ``4K`` so that
    periodicity holds to rounding level for large ``y``.

    Parameters
    ----------
    y : float or array_like
    kappa : float

    Returns
    -------
    sn, cn, dn : float or ndarray
        Same shape as ``y``.
    """
    kappa = _check_kappa(kappa)
    y_arr = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(y_arr)):
        raise DomainError("jacobi_scd needs finite arguments")
    scalar = y_arr.ndim == 0
    y_arr = np.atleast_1d(y_arr)

    if kappa == 0.0:
        sn, cn, dn = np.sin(y_arr), np.cos(y_arr), np.ones_like(y_arr)
    else:
        a_seq, c_seq = _agm_ladder(kappa)
        quarter = math.pi / (2.0 * a_seq[-1])
        period = 4.0 * quarter
        y_red = y_arr - period * np.round(y_arr / period)

        n_steps = len(a_seq) - 1
        phi = (2.0**n_steps) * a_seq[-1] * y_red
        for n in range(n_steps, 0, -1):
            ratio = c_seq[n] / a_seq[n]
            phi = 0.5 * (phi + np.arcsin(ratio * np.sin(phi)))
        sn = np.sin(phi)
        cn = np.cos(phi)
        # dn^2 = k'^2 + k^2 cn^2 is a sum of nonnegative terms
        dn = np.sqrt((1.0 - kappa) * (1.0 + kappa) + kappa * kappa * cn * cn)

    if scalar:
        return float(sn[0]), float(cn[0]), float(dn[0])
    return sn, cn, dn
