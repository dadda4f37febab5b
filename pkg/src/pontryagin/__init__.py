"""Random block matrices selfadjoint in an indefinite inner product.

The package builds the block model X = [[a, -b*], [b, C]] (selfadjoint
for H = diag(-1, I)), classifies its unique eigenvalue of nonpositive
type, locates the matching generalized zero of the function
a - z + s2 * m(z) by an independent analytic route, and runs seeded
Monte Carlo experiments reproducing the limit behavior of both spectra.
"""

__version__ = "0.1.0"

from .dense_spectra import (
    EigenSolveError,
    GeneralEigenResult,
    HermitianEigenResult,
    eig_residual,
    general_eig,
    hermitian_eig,
)
from .indefinite_core import (
    AmbiguousClassificationError,
    BlockHSelfAdjoint,
    CanonicalCase,
    RealSpectrum,
    SignatureMatrix,
    assemble,
    classify_canonical_case,
    h_inner,
    is_h_selfadjoint,
    nonpositive_type_eigenvalue,
    real_spectrum,
    scalar_resolvent,
)
from .nevanlinna import (
    CustomDensityMeasure,
    DiscreteMeasure,
    Gznt,
    GzntSearchError,
    N1Function,
    PolyCubicMeasure,
    SemicircleMeasure,
    esd,
    gznt_discrete,
    gznt_newton,
    measure_from_json,
    measure_to_json,
    negative_squares,
    q_deriv,
    q_eval,
    real_gznt_limit,
    spectral_measure_of_pair,
    stieltjes,
    stieltjes_derivative,
)
from .ensembles import (
    EnsembleSpec,
    EntryDistribution,
    build_generic,
    draw_block,
    sample_column,
    sample_diagonal_poly,
    sample_signed_wigner,
    sample_wigner_hermitian,
    spec_from_json,
    spec_to_json,
)
from .experiments import (
    ConvergenceReport,
    InterlaceReport,
    KSReport,
    TrialRecord,
    aggregate_interlacing,
    continuity_probe,
    convergence_in_probability,
    interlacing_check,
    ks_distance,
    resolvent_concentration,
    run_trials,
)
