"""Orbital stability of periodic traveling waves for Boussinesq and KGZ models.

The package constructs explicit cnoidal and dnoidal waves, evaluates
closed-form stability indices and threshold speeds, and checks them against
Fourier-spectral discretizations of the linearized operators and of the
quadratic eigenvalue pencil.
"""

from .elliptic import EllipticPair, complete_elliptic, d_complete_elliptic, jacobi_scd
from .errors import (
    DegenerateFormulaError,
    DomainError,
    EigenConvergenceError,
    GridSizeError,
    NoSignChangeError,
    NoThresholdError,
    OutOfRangeError,
    SingularSolveError,
    WaveStabError,
)
from .figures import ClaimVerdict, FigureScan, figure_scan
from .indices import (
    IndexReport,
    c1_kgz,
    index_closed,
    index_Ftilde,
    index_M,
    index_N,
    index_report,
    kappa0_root,
    kappa_star_for_period,
    mu_star,
    threshold_period_map,
    threshold_speed,
)
from .pencil import (
    PencilSpectrum,
    ScanResult,
    StabilityVerdict,
    classify_stability,
    pencil_spectrum,
    stability_scan,
)
from .spectral import (
    LameFamily,
    SpectralOperatorBundle,
    SpectralReport,
    build_bundle,
    index_numeric,
    lame_operator,
    lame_reference,
    verify_kernel,
)
from .waves import (
    Model,
    WaveParams,
    WaveProfile,
    build_wave,
    build_wave_from_period,
    kappa_from_period,
    ode_residual,
    period_of,
    sample_profile,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
