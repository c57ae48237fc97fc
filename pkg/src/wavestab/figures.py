"""Tabulated figure functions and checks of their qualitative claims.

====  ==========================================  ==========================
id    function of kappa                           claims
====  ==========================================  ==========================
1     sqrt(M / (4 + M))                           positive, -> sqrt(2)/2
2     K sqrt(2-k^2) sqrt(4 + M)                   increasing, inf sqrt(2) pi
3     sqrt(Ft / (4 + Ft))                         positive, -> 1/2
4     2K (1-k^2+k^4)^(1/4) sqrt(4 + Ft)           increasing, inf 2 pi
5     1 / sqrt(1 + 4N)                            positive, -> sqrt(2)/2
6     4K sqrt(2-k^2) sqrt(N) / sqrt(1 + 4N)       increasing, inf 0
7     1 - 16 sqrt(1-k^2+k^4) K^2 F' G             positive
8     B1/((k^2-2-2s) B3) + B2/((k^2-2+2s) B4)     positive
9     2 (KE)' / ((2-k^2) K^2)'                    <= 1/3, -> 1/3 at 0
10    N                                           exactly one sign change
====  ==========================================  ==========================

Terminal values at ``kappa -> 1`` are approached only logarithmically
(through ``1/K``), so they are checked by extrapolating samples at
``kappa = 1 - 10^-j`` to ``1/K = 0`` rather than by a single evaluation.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import indices as ix
from .elliptic import complete_elliptic
from .waves import Model, format_number

FIGURE_IDS = tuple(range(1, 11))

TERMINAL_RTOL = 1e-2
INFIMUM_RTOL = 1e-6


def _fig1(k):
    m = ix.index_M(k)
    return math.sqrt(m / (4.0 + m))


def _fig3(k):
    f = ix.index_Ftilde(k)
    return math.sqrt(f / (4.0 + f))


def _fig5(k, c1_form="derivative"):
    return 1.0 / math.sqrt(1.0 + 4.0 * ix.index_N(k, c1_form))


FIGURE_FUNCTIONS: dict[int, tuple[str, Callable[[float], float]]] = {
    1: ("sqrt(M/(4+M))", _fig1),
    2: ("K sqrt(2-k^2) sqrt(4+M)", lambda k: ix.threshold_period_map(Model.BOUSSINESQ3, k)),
    3: ("sqrt(Ft/(4+Ft))", _fig3),
    4: ("2K (1-k^2+k^4)^(1/4) sqrt(4+Ft)", lambda k: ix.threshold_period_map(Model.BOUSSINESQ2, k)),
    5: ("1/sqrt(1+4N)", _fig5),
    6: ("4K sqrt(2-k^2) sqrt(N)/sqrt(1+4N)", lambda k: ix.threshold_period_map(Model.KGZ, k)),
    7: ("1 - 16 sqrt(1-k^2+k^4) K^2 F' G", ix.ftilde_bracket),
    8: ("B1/((k^2-2-2s)B3) + B2/((k^2-2+2s)B4)", ix.fig8_function),
    9: ("2 d[KE]/dk / d[(2-k^2)K^2]/dk", ix.fig9_ratio),
    10: ("N", ix.index_N),
}

_TERMINAL = {1: math.sqrt(0.5), 3: 0.5, 5: math.sqrt(0.5)}
_INFIMUM = {2: math.sqrt(2.0) * math.pi, 4: 2.0 * math.pi, 6: 0.0}


@dataclass(frozen=True)
class ClaimVerdict:
    """Outcome of one qualitative claim."""

    figure: int
    claim: str
    holds: bool
    worst_kappa: float
    worst_value: float

    def as_dict(self) -> dict:
        return {
            "figure": self.figure,
            "claim": self.claim,
            "holds": self.holds,
            "worst_kappa": self.worst_kappa,
            "worst_value": self.worst_value,
        }


@dataclass(frozen=True)
class FigureScan:
    figure: int
    label: str
    kappas: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    claims: tuple[ClaimVerdict, ...]

    @property
    def holds(self) -> bool:
        return all(c.holds for c in self.claims)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("kappa,value\n")
        for k, v in zip(self.kappas, self.values):
            buf.write(f"{format_number(k)},{format_number(v)}\n")
        return buf.getvalue()


def default_kappa_grid(figure_id: int) -> np.ndarray:
    """50 points on [0.05, 0.95] for figures 7 and 8, else on [0.05, 0.995]."""
    if figure_id in (7, 8):
        return np.linspace(0.05, 0.95, 50)
    if figure_id == 10:
        return np.linspace(0.05, 0.995, 400)
    return np.linspace(0.05, 0.995, 50)


def terminal_extrapolation(func: Callable[[float], float], exponents=None) -> float:
    """Limit of ``func`` at ``kappa -> 1`` by quadratic extrapolation in ``1/K``.

    Samples sit at ``kappa = 1 - 10^-j`` for ``j`` in [6, 9], where the
    ``kappa'^2 K^2`` corrections to a smooth function of ``1/K`` are below 1e-4.
    """
    if exponents is None:
        exponents = np.linspace(6.0, 9.0, 13)
    ks = [1.0 - 10.0 ** (-j) for j in exponents]
    u = np.array([1.0 / complete_elliptic(k).bigK for k in ks])
    v = np.array([func(k) for k in ks])
    return float(np.polyval(np.polyfit(u, v, 2), 0.0))


def _positive(fid, ks, vals) -> ClaimVerdict:
    i = int(np.argmin(vals))
    return ClaimVerdict(fid, "positive", bool(vals[i] > 0.0), float(ks[i]), float(vals[i]))


def _terminal(fid, func) -> ClaimVerdict:
    target = _TERMINAL[fid]
    lim = terminal_extrapolation(func)
    ok = abs(lim - target) <= TERMINAL_RTOL * abs(target)
    return ClaimVerdict(fid, f"terminal value {target:.17g} at kappa -> 1", ok, 1.0, lim)


def _increasing(fid, ks, vals) -> ClaimVerdict:
    d = np.diff(vals)
    i = int(np.argmin(d))
    return ClaimVerdict(fid, "strictly increasing", bool(d[i] > 0.0), float(ks[i + 1]), float(d[i]))


def _infimum(fid, func) -> ClaimVerdict:
    target = _INFIMUM[fid]
    k_lo = ix.KAPPA_LO
    lo = func(k_lo)
    ok = lo >= target and abs(lo - target) <= INFIMUM_RTOL * max(1.0, abs(target))
    return ClaimVerdict(fid, f"range infimum {target:.17g} as kappa -> 0", ok, k_lo, lo)


def figure_scan(figure_id: int, kappa_grid=None) -> FigureScan:
    """Tabulate figure ``figure_id`` and evaluate its claims.

    Claim failures are reported in the result, never raised.
    """
    fid = int(figure_id)
    if fid not in FIGURE_FUNCTIONS:
        raise ValueError(f"figure id must be one of 1..10, got {figure_id!r}")
    label, func = FIGURE_FUNCTIONS[fid]
    ks = default_kappa_grid(fid) if kappa_grid is None else np.asarray(kappa_grid, dtype=float)
    vals = np.array([func(float(k)) for k in ks])

    claims: list[ClaimVerdict] = []
    if fid in (1, 3, 5):
        claims += [_positive(fid, ks, vals), _terminal(fid, func)]
    elif fid in (2, 4, 6):
        claims += [_increasing(fid, ks, vals), _infimum(fid, func)]
    elif fid in (7, 8):
        claims.append(_positive(fid, ks, vals))
    elif fid == 9:
        i = int(np.argmax(vals))
        claims.append(
            ClaimVerdict(fid, "at most 1/3", bool(vals[i] <= 1.0 / 3.0), float(ks[i]), float(vals[i]))
        )
        v0 = func(1e-3)
        claims.append(
            ClaimVerdict(fid, "within 1e-3 of 1/3 at kappa = 1e-3", abs(v0 - 1.0 / 3.0) <= 1e-3, 1e-3, v0)
        )
    else:
        signs = np.sign(vals)
        flips = np.nonzero(signs[:-1] != signs[1:])[0]
        if flips.size:
            i = int(flips[0])
            wk, wv = float(ks[i]), float(vals[i])
        else:
            i = int(np.argmin(np.abs(vals)))
            wk, wv = float(ks[i]), float(vals[i])
        claims.append(ClaimVerdict(fid, "exactly one sign change", flips.size == 1, wk, wv))
    return FigureScan(fid, label, ks, vals, tuple(claims))
