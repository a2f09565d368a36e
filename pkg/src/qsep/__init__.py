"""Full-separability tests and certificates for n-qubit density matrices."""

__version__ = "0.1.0"

from .bases import (
    CoefficientTable,
    adjusted_from_density,
    adjusted_from_spin,
    basis_element,
    density_from_adjusted,
    density_from_spin,
    fwht,
    hermitian_spin_coefficients,
    spin_from_adjusted,
    spin_from_density,
    spin_norm1,
)
from .bits import BitIndex
from .criteria import (
    CriterionResult,
    PlanarAngleProfile,
    angle_trace,
    antidiagonal_necessary,
    cauchy_schwarz_bipartite,
    diagonal_family_necessary,
    mu_bound,
    mu_sufficient,
    peres_battery,
    peres_test,
    random_neighborhood_check,
    sharpness_decision,
    spin_norm_sufficient,
)
from .decompose import (
    SeparableDecomposition,
    VerificationResult,
    mu_decomposition,
    product_decomposition,
    spin_norm_decomposition,
    verify_decomposition,
    werner_decomposition,
)
from .errors import (
    ArgumentError,
    ContractError,
    NotCertifiableError,
    ParseError,
    QsepError,
    ReconstructionError,
    SizeError,
    ValidationError,
)
from .families import (
    DiagonalFamilySpec,
    ProductSpec,
    SharpnessSpec,
    WernerSpec,
    diagonal_family,
    ghz_projector,
    mu_state,
    product_density,
    sharpness_state,
    werner,
    werner_as_diagonal,
    werner_threshold,
)
from .linalg import DensityMatrix, hermitian_eigenvalues, jacobi_eigenvalues, kron, maximally_mixed, partial_transpose
from .report import AnalysisReport, FamilyDeclaration, analyze
