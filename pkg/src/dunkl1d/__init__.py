"""Rank-one Dunkl harmonic analysis at desk scale.

Weighted measure and grids, Bessel-based Dunkl kernels, the Dunkl transform,
heat and Schrodinger semigroups, the generalized Hermite oscillator with its
Mehler kernel, and a sectorial H-infinity functional calculus with an
empirical weak-type (1,1) harness.
"""

__version__ = "0.1.0"

from ._backend import backend_name
from .errors import ConvergenceError, LossOfOrthogonalityError
from .measure import (
    MultiplicityParam,
    QuadratureGrid,
    SampledFunction,
    ball_measure,
    doubling_constant_scan,
    dunkl_norm,
    gauss_legendre_grid,
    uniform_grid,
    weight,
    weighted_inner,
)
from .bessel import (
    BesselOrder,
    dunkl_kernel,
    dunkl_kernel_scaled,
    fourier_kernel,
    modified_bessel_scaled,
    normalized_bessel,
)
from .operators import (
    OperatorMatrix,
    apply_laplacian,
    apply_T,
    discretize_operator,
    t_matrix,
)
from .transform import (
    TransformPlan,
    convolve,
    forward,
    inverse,
    radial_transform,
    translate,
)
from .heat import (
    HeatKernelEval,
    heat_apply,
    heat_apply_kernel,
    heat_kernel_K,
    heat_kernel_matrix,
    maximal_function,
    tail_mass,
)
from .oscillator import (
    HermiteBasis,
    SectorPoint,
    build_hermite_basis,
    coth_sandwich_scan,
    hermite_semigroup_apply,
    kernel_domination_scan,
    mehler_kernel,
    mehler_kernel_series,
)
from .schrodinger import (
    Potential,
    SchrodingerOperator,
    potential_well,
    potential_x2,
    potential_x4,
    schrodinger_kernel,
    trotter_evolve,
)
from .calculus import (
    CZDecomposition,
    Sector,
    SectorSymbol,
    cz_decompose,
    hinfty_extend,
    imaginary_power_symbol,
    psi_contour_calculus,
    psi_symbol,
    resolvent_apply,
    spectral_calculus,
    weak_type_harness,
)
from .reports import CheckResult, VerificationReport
