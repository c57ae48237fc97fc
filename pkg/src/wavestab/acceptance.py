"""Acceptance criteria shared by ``wavestab validate`` and the test suite.

Each ``criterion_*`` function runs one criterion end to end and returns a
:class:`CriterionResult`. A failing criterion is reported, never raised.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import indices as ix
from .elliptic import complete_elliptic
from .errors import NoSignChangeError, WaveStabError
from .figures import FIGURE_IDS, figure_scan, terminal_extrapolation
from .pencil import classify_stability, default_c_grid, stability_scan
from .spectral import (
    LameFamily,
    build_bundle,
    index_numeric,
    lame_operator,
    lame_reference,
    linv_checks,
    verify_kernel,
)
from .waves import (
    Model,
    build_wave,
    kappa_from_period,
    measured_period,
    ode_residual,
    period_of,
    sample_profile,
)

KAPPA0_STATED = 0.937095


@dataclass(frozen=True)
class CriterionResult:
    """Outcome of one acceptance criterion."""

    number: int
    name: str
    passed: bool
    detail: str
    runtime: float

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.number}. {self.name} ({self.runtime:.2f} s): {self.detail}"

    def as_dict(self) -> dict:
        return {
            "number": self.number,
            "name": self.name,
            "passed": self.passed,
            "detail": self.detail,
            "runtime": self.runtime,
        }


RUNTIME_BUDGET = {1: 2.0, 2: 20.0, 3: 1.0, 4: 1.0, 5: 5.0, 6: 10.0, 7: 60.0, 8: 5.0}
"""Wall-clock budget in seconds per criterion."""


def _timed(number: int, name: str, body: Callable[[], tuple[bool, str]]) -> CriterionResult:
    t0 = time.perf_counter()
    try:
        passed, detail = body()
    except WaveStabError as exc:
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    runtime = time.perf_counter() - t0
    budget = RUNTIME_BUDGET[number]
    if runtime > budget:
        passed = False
        detail += f"; runtime {runtime:.2f} s exceeds {budget:g} s"
    return CriterionResult(number, name, bool(passed), detail, runtime)


# --------------------------------------------------------------------------
# 1. Lame spectra
# --------------------------------------------------------------------------


def _lame_errors(family: LameFamily, kappa: float, n: int) -> list[float]:
    ref = lame_reference(family, kappa)
    op, _ = lame_operator(family, kappa, n)
    vals = np.linalg.eigvalsh(0.5 * (op + op.T))
    want = np.sort(ref.values)
    got = vals[: want.size]
    # relative error, with an absolute floor for the zero eigenvalue
    return [abs(g - r) / max(1.0, abs(r)) for g, r in zip(got, want)]


def criterion_lame(kappa: float = 0.7, n: int = 256) -> CriterionResult:
    def body():
        e6 = _lame_errors(LameFamily.SIX_SN, kappa, n)
        e12 = _lame_errors(LameFamily.TWELVE_SN, kappa, n)
        worst = max(e6 + e12)
        return worst <= 1e-8, (
            f"max rel err 6k^2sn^2 = {max(e6):.2e}, 12k^2sn^2 = {max(e12):.2e} (tol 1e-8)"
        )

    return _timed(1, "Lame spectrum reproduction", body)


# --------------------------------------------------------------------------
# 2. Closed-form vs numerical index
# --------------------------------------------------------------------------

INDEX_CASES = (
    (Model.BOUSSINESQ3, 0.3),
    (Model.BOUSSINESQ3, 0.6),
    (Model.BOUSSINESQ2, 0.5),
    (Model.BOUSSINESQ2, 0.8),
    (Model.KGZ, 0.96),
    (Model.KGZ, 0.99),
)


def index_relative_errors(n: int = 512, w: float = 1.0) -> list[tuple[Model, float, float]]:
    out = []
    for model, kappa in INDEX_CASES:
        params = build_wave(model, kappa, w)
        num = index_numeric(model, params, n)
        closed = ix.index_closed(model, kappa, w)
        out.append((model, kappa, abs(closed - num) / abs(num)))
    return out


def criterion_index_oracle(n: int = 512) -> CriterionResult:
    def body():
        errs = index_relative_errors(n)
        worst = max(e for _, _, e in errs)
        parts = ", ".join(f"{m}@{k}: {e:.1e}" for m, k, e in errs)
        return worst <= 1e-4, f"rel err {parts} (tol 1e-4)"

    return _timed(2, "Index oracle equivalence", body)


# --------------------------------------------------------------------------
# 3. Root of N
# --------------------------------------------------------------------------


def criterion_kappa0() -> CriterionResult:
    def body():
        try:
            root = ix.kappa0_root("derivative")
        except NoSignChangeError as exc:
            reduced = ix.kappa0_root("reduced")
            return False, (
                f"{exc}; the reduced c1 expression gives a root at {reduced:.12f}"
            )
        return abs(root - KAPPA0_STATED) <= 2e-6, f"root = {root:.12f} vs {KAPPA0_STATED}"

    return _timed(3, "kappa0 reproduction", body)


# --------------------------------------------------------------------------
# 4. Limits at kappa = 1 - 1e-6
# --------------------------------------------------------------------------


def _limit_functions() -> list[tuple[str, Callable[[float], float], float]]:
    return [
        ("M", ix.index_M, 4.0),
        ("sqrt(Ft/(4+Ft))", lambda k: math.sqrt(ix.index_Ftilde(k) / (4.0 + ix.index_Ftilde(k))), 0.5),
        ("1/sqrt(1+4N)", lambda k: 1.0 / math.sqrt(1.0 + 4.0 * ix.index_N(k)), math.sqrt(0.5)),
    ]


def criterion_limits(kappa: float = 1.0 - 1e-6) -> CriterionResult:
    def body():
        ok = True
        parts = []
        for name, f, target in _limit_functions():
            v = f(kappa)
            rel = abs(v - target) / target
            ok &= rel <= 1e-2
            lim = terminal_extrapolation(f)
            parts.append(f"{name} = {v:.6g} (rel {rel:.1e}, 1/K->0 limit {lim:.5g})")
        K = complete_elliptic(kappa).bigK
        return ok, "; ".join(parts) + f"; tol 1e-2 at K = {K:.4g}"

    return _timed(4, "Limit claims", body)


# --------------------------------------------------------------------------
# 5. Figure claims
# --------------------------------------------------------------------------


def criterion_figures() -> CriterionResult:
    def body():
        failed = []
        for fid in FIGURE_IDS:
            for claim in figure_scan(fid).claims:
                if not claim.holds:
                    failed.append(
                        f"fig {fid} '{claim.claim}' (value {claim.worst_value:.6g} "
                        f"at kappa {claim.worst_kappa:.6g})"
                    )
        if failed:
            return False, "failed: " + "; ".join(failed)
        return True, "all claims of figures 1-10 hold"

    return _timed(5, "Figure-claim suite", body)


# --------------------------------------------------------------------------
# 6. Kernel and negative count
# --------------------------------------------------------------------------


def kernel_cases() -> list[tuple[Model, float]]:
    cases = [(m, k) for m in Model for k in (0.3, 0.6, 0.9)]
    cases.append((Model.KGZ, 0.96))
    return cases


def criterion_kernel(n: int = 256, w: float = 1.0) -> CriterionResult:
    def body():
        bad = []
        worst = 0.0
        for model, kappa in kernel_cases():
            rep = verify_kernel(model, build_wave(model, kappa, w), n)
            worst = max(worst, rep.kernel_residual_rel)
            if not (rep.n_negative == 1 and rep.n_zero == 1 and rep.kernel_residual_rel <= 1e-8):
                bad.append(
                    f"{model}@{kappa}: neg={rep.n_negative}, zero={rep.n_zero}, "
                    f"res={rep.kernel_residual_rel:.1e}"
                )
        detail = (
            f"{len(kernel_cases())} cases with one negative and one zero eigenvalue, "
            f"max kernel residual / ||H|| = {worst:.1e}"
        ) if not bad else f"max kernel residual / ||H|| = {worst:.1e}"
        return not bad, detail + ("; " + "; ".join(bad) if bad else "")

    return _timed(6, "Kernel and negative count", body)


# --------------------------------------------------------------------------
# 7. Pencil vs threshold
# --------------------------------------------------------------------------

BOUSSINESQ_SCANS = ((Model.BOUSSINESQ3, 10.0), (Model.BOUSSINESQ2, 8.0))
KGZ_PERIODS = (4.0, 6.0)


def kgz_low_modulus_verdicts(n: int = 128, kappa0: float = KAPPA0_STATED):
    """Pencil verdicts at sampled KGZ speeds whose wave has ``kappa < kappa0``."""
    out = []
    for T in KGZ_PERIODS:
        for c in default_c_grid(Model.KGZ, T):
            v = classify_stability(Model.KGZ, T, float(c), n)
            if v.kappa < kappa0:
                out.append(v)
    return out


def criterion_pencil(n: int = 128) -> CriterionResult:
    def body():
        ok = True
        parts = []
        for model, T in BOUSSINESQ_SCANS:
            scan = stability_scan(model, T, n=n)
            c_T = scan.c_T_closed
            below = classify_stability(model, T, c_T - 0.05, n, c_T=c_T)
            above = classify_stability(model, T, c_T + 0.05, n, c_T=c_T)
            good = (
                scan.monotone
                and scan.abs_diff is not None
                and scan.abs_diff <= scan.grid_step
                and below.max_growth > 1e-3
                and above.stable
            )
            ok &= good
            diff = "none" if scan.abs_diff is None else f"{scan.abs_diff:.4f}"
            parts.append(
                f"{model} T={T:g}: c_T={c_T:.5f}, |boundary-c_T|={diff} "
                f"(step {scan.grid_step:.4f}), growth {below.max_growth:.3g} / {above.max_growth:.1e}"
            )
        kgz = kgz_low_modulus_verdicts(n)
        stable = [v for v in kgz if v.stable]
        ok &= bool(kgz) and not stable
        msg = f"KGZ kappa<{KAPPA0_STATED}: {len(kgz)} samples, {len(stable)} stable"
        if stable:
            msg += " (e.g. T={:g}, c={:.4f}, kappa={:.4f}, growth {:.1e})".format(
                stable[0].T, stable[0].c, stable[0].kappa, stable[0].max_growth
            )
        parts.append(msg)
        return ok, "; ".join(parts)

    return _timed(7, "Pencil/threshold agreement", body)


# --------------------------------------------------------------------------
# 8. Construction fidelity
# --------------------------------------------------------------------------


def criterion_construction(n: int = 256) -> CriterionResult:
    def body():
        worst_res = worst_trip = worst_meas = 0.0
        for model in Model:
            for kappa in (0.3, 0.6, 0.9):
                for w in (0.36, 1.0):
                    p = build_wave(model, kappa, w)
                    worst_res = max(worst_res, ode_residual(sample_profile(p, n)))
                    k_back = kappa_from_period(model, p.T, w)
                    T_back = period_of(model, k_back, w)
                    worst_trip = max(worst_trip, abs(T_back - p.T) / p.T, abs(k_back - kappa))
                    worst_meas = max(worst_meas, abs(measured_period(p) - p.T) / p.T)
        fact_ok = True
        fact = []
        for kappa in (0.3, 0.6, 0.9):
            p = build_wave(Model.KGZ, kappa, 1.0)
            _, num = linv_checks(Model.KGZ, p, n, bundle=build_bundle(Model.KGZ, p, n))
            closed = ix.linv_phi_kgz_closed(kappa, p.w, p.T)
            bound = -p.w * p.T / 3.0
            fact_ok &= num >= bound and closed >= bound
            fact.append(f"{kappa}: {num:.4f}/{closed:.4f} >= {bound:.4f}")
        ok = worst_res <= 1e-8 and worst_trip <= 1e-10 and worst_meas <= 1e-10 and fact_ok
        return ok, (
            f"ODE residual {worst_res:.1e}, round trip {worst_trip:.1e}, "
            f"measured period {worst_meas:.1e}; <L^-1 phi, phi> numeric/closed "
            + ", ".join(fact)
        )

    return _timed(8, "Construction fidelity", body)


CRITERIA: tuple[Callable[[], CriterionResult], ...] = (
    criterion_lame,
    criterion_index_oracle,
    criterion_kappa0,
    criterion_limits,
    criterion_figures,
    criterion_kernel,
    criterion_pencil,
    criterion_construction,
)


def run_all() -> list[CriterionResult]:
    """Run every criterion in order."""
    return [crit() for crit in CRITERIA]
