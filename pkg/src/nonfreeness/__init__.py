"""Nonfreeness: an entropy-based correlation measure for finite fermion states."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CapacityError,
    NonfreenessError,
    NumberSymmetryViolation,
    NumericalError,
    ValidationError,
)
from .fock import Bipartition, split_occupation  # noqa: E402
from .measures import (  # noqa: E402
    NonfreenessReport,
    build_free_state,
    corr_fidelity,
    free_state_entropy,
    nonfreeness,
    nonfreeness_pure,
    nonfreeness_rank2,
)
from .spectra import (  # noqa: E402
    matrix_sqrt,
    natural_spectrum,
    one_pdm,
    relative_entropy,
    von_neumann_entropy,
)
from .states import (  # noqa: E402
    DensityOperator,
    PureState,
    density_from_ensemble,
    density_from_pure,
    expected_particle_number,
    restrict,
    tensor_product,
)

__all__ = [
    "Bipartition", "CapacityError", "DensityOperator", "NonfreenessError", "NonfreenessReport",
    "NumberSymmetryViolation", "NumericalError", "PureState", "ValidationError",
    "build_free_state", "corr_fidelity", "density_from_ensemble", "density_from_pure",
    "expected_particle_number", "free_state_entropy", "matrix_sqrt", "natural_spectrum",
    "nonfreeness", "nonfreeness_pure", "nonfreeness_rank2", "one_pdm", "relative_entropy",
    "restrict", "split_occupation", "tensor_product", "von_neumann_entropy",
]
