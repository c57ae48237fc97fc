"""Fourier-spectral discretization of the linearized operators.

Boussinesq families use

    L = -d^2/dx^2 + w - f'(phi),      H = -D L D   on mean-zero functions,

with ``f'(phi) = phi`` (p = 2) or ``3 phi^2`` (p = 3). For KGZ the operator
is the 2x2 block

    H = [[H1, A], [A*, H2]],   H1 = -w d^2 + 1 - phi^2/(2w),   H2 = -w d^2,
    A z = phi z',  A* z = -(phi z)',

acting on pairs whose second component has mean zero. Differentiation
uses dense Fourier collocation matrices on the endpoint-exclusive grid.
Mean-zero spaces are represented by an orthonormal real Fourier basis
``Q`` (cos/sin pairs), so restricted operators stay symmetric.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg as sla

from .elliptic import complete_elliptic, jacobi_scd
from .errors import EigenConvergenceError, GridSizeError, SingularSolveError
from .indices import (
    index_closed,
    linv_one_b3_closed,
    linv_one_closed,
    linv_phi_kgz_closed,
)
from .waves import Model, WaveParams, build_wave, parse_model, sample_profile

_EPS = np.finfo(float).eps


# --------------------------------------------------------------------------
# Fourier building blocks
# --------------------------------------------------------------------------


def wavenumbers(n: int, period: float) -> np.ndarray:
    """Angular wavenumbers ``2 pi k / period`` in FFT order."""
    return 2.0 * np.pi / period * np.fft.fftfreq(n, d=1.0 / n)


def fourier_diff_matrices(n: int, period: float) -> tuple[np.ndarray, np.ndarray]:
    """First and second periodic differentiation matrices.

    The first-derivative symbol is zeroed at the Nyquist mode so that the
    matrix is real and skew-symmetric; the second-derivative symbol keeps
    ``-k^2`` there.
    """
    k = wavenumbers(n, period)
    k1 = k.copy()
    k1[n // 2] = 0.0
    eye_hat = np.fft.fft(np.eye(n), axis=0)
    D1 = np.real(np.fft.ifft(1j * k1[:, None] * eye_hat, axis=0))
    D2 = np.real(np.fft.ifft(-(k * k)[:, None] * eye_hat, axis=0))
    # enforce exact structure lost to FFT rounding
    D1 = 0.5 * (D1 - D1.T)
    D2 = 0.5 * (D2 + D2.T)
    return D1, D2


def meanzero_basis(n: int, *, keep_nyquist: bool) -> np.ndarray:
    """Orthonormal real basis of mean-zero grid functions.

    Columns are ``cos(k x)``, ``sin(k x)`` for ``k = 1 .. n/2 - 1`` and,
    optionally, the Nyquist mode ``cos(n x / 2)``.
    """
    x = 2.0 * np.pi * np.arange(n) / n
    cols = []
    for k in range(1, n // 2):
        cols.append(np.cos(k * x))
        cols.append(np.sin(k * x))
    if keep_nyquist:
        cols.append(np.cos(0.5 * n * x))
    Q = np.array(cols).T
    return Q / np.linalg.norm(Q, axis=0)


def _check_n(n: int, minimum: int = 32) -> int:
    if isinstance(n, bool) or int(n) != n or int(n) < minimum or int(n) % 2:
        raise GridSizeError(f"grid size must be even and >= {minimum}, got {n!r}")
    return int(n)


# --------------------------------------------------------------------------
# Operator bundle
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralOperatorBundle:
    """Discretized operators for one wave.

    Attributes
    ----------
    diff1, diff2 : ndarray
        Periodic differentiation matrices on the ``n``-point grid.
    opL : ndarray
        The second-order operator ``L`` on the full grid space.
    opH : ndarray
        ``H`` in restricted coordinates (``basis.T @ H @ basis`` for
        Boussinesq, block coordinates for KGZ).
    opH_full : ndarray
        Boussinesq: ``-D L D`` on the full grid space. KGZ: the
        unrestricted ``2n x 2n`` block.
    basis : ndarray
        Map from restricted coordinates to grid values.
    meanzero_mask : str
        Which modes were removed.
    """

    model: Model
    params: WaveParams
    n: int
    xs: np.ndarray = field(repr=False)
    phi: np.ndarray = field(repr=False)
    diff1: np.ndarray = field(repr=False)
    diff2: np.ndarray = field(repr=False)
    opL: np.ndarray = field(repr=False)
    opH: np.ndarray = field(repr=False)
    opH_full: np.ndarray = field(repr=False)
    basis: np.ndarray = field(repr=False)
    meanzero_mask: str = ""

    @property
    def weight(self) -> float:
        """Uniform quadrature weight ``T / n``."""
        return self.params.T / self.n

    @property
    def op_norm(self) -> float:
        """Spectral norm of the restricted ``H``."""
        return float(np.linalg.norm(self.opH, 2))

    def restricted_diff1(self) -> np.ndarray:
        """``D`` expressed in the restricted coordinates."""
        if self.model is Model.KGZ:
            n = self.n
            Qz = self.basis[n:, n:]
            return sla.block_diag(self.diff1, Qz.T @ self.diff1 @ Qz)
        Q = self.basis
        return Q.T @ self.diff1 @ Q

    def to_restricted(self, values: np.ndarray) -> np.ndarray:
        """Coordinates of grid values in the restricted basis."""
        return self.basis.T @ values

    def kgz_adjoint_pair(self) -> tuple[np.ndarray, np.ndarray]:
        """Discrete ``A = phi D`` and ``A* = -D phi`` (KGZ only)."""
        A = self.phi[:, None] * self.diff1
        A_star = -self.diff1 * self.phi[None, :]
        return A, A_star


def build_bundle(model: Model | str, params: WaveParams, n: int) -> SpectralOperatorBundle:
    """Assemble ``L`` and ``H`` for the wave ``params`` on ``n`` points.

    Raises
    ------
    GridSizeError
        For odd ``n`` or ``n < 32``.
    ValueError
        If ``model`` differs from ``params.model``.
    """
    model = parse_model(model)
    if model is not params.model:
        raise ValueError(f"model {model} does not match wave parameters ({params.model})")
    n = _check_n(n)
    prof = sample_profile(params, n)
    phi = prof.phi
    w = params.w
    D1, D2 = fourier_diff_matrices(n, params.T)

    if model is Model.KGZ:
        L = -w * D2 + np.diag(1.0 - 1.5 * phi**2 / w)
        H1 = -w * D2 + np.diag(1.0 - 0.5 * phi**2 / w)
        H2 = -w * D2
        A = phi[:, None] * D1
        A_star = A.T
        Qz = meanzero_basis(n, keep_nyquist=True)
        H_full = np.block([[H1, A], [A_star, H2]])
        basis = sla.block_diag(np.eye(n), Qz)
        H = basis.T @ H_full @ basis
        mask = "second component: zero mode removed"
    else:
        fprime = phi if model is Model.BOUSSINESQ2 else 3.0 * phi**2
        L = -D2 + np.diag(w - fprime)
        H_full = -D1 @ L @ D1
        # D annihilates the Nyquist mode as well, so it is removed with the mean
        basis = meanzero_basis(n, keep_nyquist=False)
        H = basis.T @ H_full @ basis
        mask = "zero and Nyquist modes removed"

    L = 0.5 * (L + L.T)
    H = 0.5 * (H + H.T)
    return SpectralOperatorBundle(
        model=model,
        params=params,
        n=n,
        xs=prof.xs,
        phi=phi,
        diff1=D1,
        diff2=D2,
        opL=L,
        opH=H,
        opH_full=H_full,
        basis=basis,
        meanzero_mask=mask,
    )


def symmetry_defect(op: np.ndarray) -> float:
    """``max|A - A^T| / max|A|``."""
    scale = float(np.max(np.abs(op)))
    return float(np.max(np.abs(op - op.T))) / scale if scale else 0.0


# --------------------------------------------------------------------------
# Eigen solver
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class EigenPairs:
    """Ascending eigenvalues with orthonormal eigenvectors (columns)."""

    values: np.ndarray
    vectors: np.ndarray = field(repr=False)
    max_residual: float = 0.0


def eig_sym(op: np.ndarray, *, rtol: float = 1e-10) -> EigenPairs:
    """Dense symmetric eigendecomposition with a residual check.

    Raises
    ------
    EigenConvergenceError
        If LAPACK fails or some pair has ``||A v - lam v|| > rtol ||A||``.
    """
    op = np.asarray(op, dtype=float)
    try:
        vals, vecs = np.linalg.eigh(op)
    except np.linalg.LinAlgError as exc:
        raise EigenConvergenceError(f"eigh failed: {exc}") from exc
    norm = max(float(np.max(np.abs(vals))), 1e-300)
    res = np.linalg.norm(op @ vecs - vecs * vals, axis=0)
    worst = float(res.max()) if res.size else 0.0
    if worst > rtol * norm:
        i = int(np.argmax(res))
        raise EigenConvergenceError(
            f"eigenpair {i} residual {worst:.3e} exceeds {rtol:g} * ||A|| = {rtol * norm:.3e}"
        )
    return EigenPairs(values=vals, vectors=vecs, max_residual=worst)


# --------------------------------------------------------------------------
# Lame reference spectra
# --------------------------------------------------------------------------


class LameFamily(enum.Enum):
    """``TwelveSn``: -d^2 - 4(1+k^2) + 12 k^2 sn^2 on [0, 2K].
    ``SixSn``: -d^2 + 6 k^2 sn^2 on [0, 4K]."""

    TWELVE_SN = "twelve_sn"
    SIX_SN = "six_sn"


@dataclass(frozen=True)
class LameEntry:
    value: float
    eigenfunction: Callable[[np.ndarray], np.ndarray] = field(repr=False)


@dataclass(frozen=True)
class LameSpectrumRef:
    family: LameFamily
    kappa: float
    period: float
    entries: tuple[LameEntry, ...]

    @property
    def values(self) -> np.ndarray:
        return np.array([e.value for e in self.entries])


def lame_reference(family: LameFamily | str, kappa: float) -> LameSpectrumRef:
    """Closed-form low eigenvalues and eigenfunctions of the Lame operators."""
    family = LameFamily(family)
    kappa = float(kappa)
    K = complete_elliptic(kappa).bigK
    k2 = kappa * kappa

    if family is LameFamily.TWELVE_SN:
        r = math.sqrt(1.0 - k2 + 4.0 * k2 * k2)

        def make(a: float):
            def f(y):
                sn, cn, dn = jacobi_scd(y, kappa)
                return dn * (1.0 - a * sn * sn)
            return f

        def f1(y):
            sn, cn, dn = jacobi_scd(y, kappa)
            return dn * sn * cn

        entries = (
            LameEntry(k2 - 2.0 - 2.0 * r, make(1.0 + 2.0 * k2 - r)),
            LameEntry(0.0, f1),
            LameEntry(k2 - 2.0 + 2.0 * r, make(1.0 + 2.0 * k2 + r)),
        )
        return LameSpectrumRef(family, kappa, 2.0 * K, entries)

    s = math.sqrt(1.0 - k2 + k2 * k2)

    def poly(a: float):
        def f(y):
            sn, _, _ = jacobi_scd(y, kappa)
            return 1.0 - a * sn * sn
        return f

    def prod(i: int, j: int):
        def f(y):
            vals = jacobi_scd(y, kappa)
            return vals[i] * vals[j]
        return f

    entries = (
        LameEntry(2.0 + 2.0 * k2 - 2.0 * s, poly(1.0 + k2 - s)),
        LameEntry(1.0 + k2, prod(1, 2)),
        LameEntry(1.0 + 4.0 * k2, prod(0, 2)),
        LameEntry(4.0 + k2, prod(0, 1)),
        LameEntry(2.0 + 2.0 * k2 + 2.0 * s, poly(1.0 + k2 + s)),
    )
    return LameSpectrumRef(family, kappa, 4.0 * K, entries)


def lame_operator(family: LameFamily | str, kappa: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Discretized Lame operator and its grid on one reference period."""
    ref = lame_reference(family, kappa)
    n = _check_n(n)
    y = ref.period * np.arange(n) / n
    _, D2 = fourier_diff_matrices(n, ref.period)
    sn, _, _ = jacobi_scd(y, kappa)
    k2 = kappa * kappa
    if ref.family is LameFamily.TWELVE_SN:
        pot = -4.0 * (1.0 + k2) + 12.0 * k2 * sn * sn
    else:
        pot = 6.0 * k2 * sn * sn
    return -D2 + np.diag(pot), y


# --------------------------------------------------------------------------
# Kernel and index
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralReport:
    """Eigenstructure of ``H`` near zero.

    ``kernel_residual`` is ``||H psi0||_2`` for the predicted kernel vector
    with unit discrete norm; ``kernel_residual_rel`` divides it by ``||H||``.
    """

    model: Model
    n: int
    lowest_eigenvalue: float
    kernel_residual: float
    kernel_residual_rel: float
    spectral_gap_sigma: float
    n_negative: int
    n_zero: int
    op_norm: float
    zero_tol: float

    @property
    def verified(self) -> bool:
        return self.n_negative == 1 and self.n_zero == 1 and self.kernel_residual_rel <= 1e-8


def predicted_kernel(bundle: SpectralOperatorBundle) -> np.ndarray:
    """Predicted kernel vector of ``H`` in restricted coordinates.

    Boussinesq: ``phi - mean(phi)``. KGZ: ``(phi', -(phi^2 - mean(phi^2)) / (2w))``.
    """
    phi = bundle.phi
    if bundle.model is Model.KGZ:
        w = bundle.params.w
        u = bundle.diff1 @ phi
        g = -(phi**2 - np.mean(phi**2)) / (2.0 * w)
        return bundle.to_restricted(np.concatenate([u, g]))
    return bundle.to_restricted(phi - np.mean(phi))


def _zero_tol(norm: float) -> float:
    # observed kernel eigenvalues stay below eps * ||H||
    return 20.0 * _EPS * norm


def verify_kernel(
    model: Model | str,
    params: WaveParams,
    n: int,
    *,
    bundle: SpectralOperatorBundle | None = None,
    operator: np.ndarray | None = None,
) -> SpectralReport:
    """Count negative and zero eigenvalues of ``H`` and test the predicted kernel.

    ``operator`` replaces the restricted ``H`` (used to probe the detector
    with perturbed matrices).
    """
    model = parse_model(model)
    bundle = bundle or build_bundle(model, params, n)
    H = bundle.opH if operator is None else operator
    vals = np.linalg.eigvalsh(H)
    norm = float(np.max(np.abs(vals)))
    tol = _zero_tol(norm)
    v = predicted_kernel(bundle)
    v = v / np.linalg.norm(v)
    res = float(np.linalg.norm(H @ v))
    positive = vals[vals > tol]
    return SpectralReport(
        model=model,
        n=bundle.n,
        lowest_eigenvalue=float(vals[0]),
        kernel_residual=res,
        kernel_residual_rel=res / norm,
        spectral_gap_sigma=float(positive[0]) if positive.size else math.nan,
        n_negative=int(np.sum(vals < -tol)),
        n_zero=int(np.sum(np.abs(vals) <= tol)),
        op_norm=norm,
        zero_tol=tol,
    )


def _pinv_quadratic(op: np.ndarray, rhs: np.ndarray, kernel_dim: int = 1) -> float:
    """``rhs . op^+ rhs`` with the ``kernel_dim`` eigenvalues nearest zero dropped."""
    vals, vecs = np.linalg.eigh(op)
    drop = np.argsort(np.abs(vals))[:kernel_dim]
    keep = np.ones(vals.size, dtype=bool)
    keep[drop] = False
    coef = vecs.T @ rhs
    return float(np.sum(coef[keep] ** 2 / vals[keep]))


def index_numeric(
    model: Model | str,
    params: WaveParams,
    n: int,
    *,
    method: str = "auto",
    bundle: SpectralOperatorBundle | None = None,
) -> float:
    """Numerical ``<H^{-1} psi0', psi0'>`` with ``||psi0|| = 1``.

    Parameters
    ----------
    method : {"auto", "factorized", "direct"}
        ``"factorized"`` (Boussinesq only) uses ``H = -D L D``: with
        ``g = D f`` the equation ``H f = psi0'`` reduces to
        ``P L g = -psi0`` on mean-zero functions and the index becomes
        ``<(P L P)^+ psi0, psi0>``. This avoids the conditioning of the
        fourth-order matrix. ``"direct"`` inverts restricted ``H`` on the
        complement of its converged kernel vector. ``"auto"`` picks
        factorized for Boussinesq and direct for KGZ.
    """
    model = parse_model(model)
    bundle = bundle or build_bundle(model, params, n)
    if method == "auto":
        method = "direct" if model is Model.KGZ else "factorized"
    wq = bundle.weight
    psi0 = predicted_kernel(bundle)
    psi0 = psi0 / math.sqrt(wq * float(psi0 @ psi0))

    if method == "factorized":
        if model is Model.KGZ:
            raise ValueError("factorized index is only available for Boussinesq models")
        Q = bundle.basis
        L0 = Q.T @ bundle.opL @ Q
        L0 = 0.5 * (L0 + L0.T)
        return wq * _pinv_quadratic(L0, psi0)
    if method != "direct":
        raise ValueError(f"unknown method {method!r}")
    rhs = bundle.restricted_diff1() @ psi0
    return wq * _pinv_quadratic(bundle.opH, rhs)


def linv_checks(
    model: Model | str,
    params: WaveParams,
    n: int,
    *,
    bundle: SpectralOperatorBundle | None = None,
    ortho_tol: float = 1e-8,
) -> tuple[float, float]:
    """Numerical ``<L^{-1} 1, 1>`` and ``<L^{-1} phi, phi>`` over one period.

    Raises
    ------
    SingularSolveError
        If ``1`` or ``phi`` has a component along ``ker L`` above
        ``ortho_tol`` (relative).
    """
    model = parse_model(model)
    bundle = bundle or build_bundle(model, params, n)
    L = bundle.opL
    vals, vecs = np.linalg.eigh(L)
    i0 = int(np.argmin(np.abs(vals)))
    keep = np.arange(vals.size) != i0
    wq = bundle.weight
    out = []
    for rhs in (np.ones(bundle.n), bundle.phi):
        coef = vecs.T @ rhs
        if abs(coef[i0]) > ortho_tol * np.linalg.norm(rhs):
            raise SingularSolveError(
                f"right-hand side overlaps ker L: {abs(coef[i0]):.3e}"
            )
        out.append(wq * float(np.sum(coef[keep] ** 2 / vals[keep])))
    return out[0], out[1]


def linv_closed_pair(model: Model | str, params: WaveParams) -> tuple[float | None, float | None]:
    """Closed-form counterparts of :func:`linv_checks` where available."""
    model = parse_model(model)
    k, w, T = params.kappa, params.w, params.T
    if model is Model.BOUSSINESQ2:
        return linv_one_closed(k, w, T), None
    if model is Model.BOUSSINESQ3:
        return linv_one_b3_closed(k, w), None
    return None, linv_phi_kgz_closed(k, w, T)


def default_grid_n(kappa: float) -> int:
    """256 points, raised to 1024 for ``kappa > 0.95``."""
    return 1024 if kappa > 0.95 else 256


def validation_report(
    model: Model | str, kappa: float, w: float, n: int | None = None
) -> dict:
    """Kernel check and closed-vs-numeric index at one ``(model, kappa, w)``."""
    model = parse_model(model)
    n = default_grid_n(kappa) if n is None else n
    params = build_wave(model, kappa, w)
    bundle = build_bundle(model, params, n)
    rep = verify_kernel(model, params, n, bundle=bundle)
    num = index_numeric(model, params, n, bundle=bundle)
    closed = index_closed(model, kappa, w)
    return {
        "model": str(model),
        "kappa": float(kappa),
        "w": float(w),
        "n": n,
        "n_negative": rep.n_negative,
        "lowest_eig": rep.lowest_eigenvalue,
        "kernel_residual": rep.kernel_residual,
        "gap": rep.spectral_gap_sigma,
        "index_numeric": num,
        "index_closed": closed,
        "rel_err": abs(closed - num) / abs(num),
    }
