"""Band structure of a zigzag nanoribbon tight-binding model.

The ribbon Hamiltonian reduces, one quasimomentum at a time, to a
one-parameter family of tridiagonal Jacobi matrices; this package computes
the resulting bands, the exactly flat central band, and the weak-field,
band-edge, and strong-field asymptotics, each cross-checked against an
independent dense oracle.
"""

from .asymptotics import (
    OrderEstimate,
    StrongFieldEstimate,
    WeakFieldPrediction,
    constant_field,
    constant_field_potential,
    first_order_lower_edge,
    first_order_upper_edge,
    order_check,
    strong_field,
    weak_field_center,
    weak_field_center_telescoped,
    weak_field_edges,
)
from .bands import (
    BandTable,
    SpectrumReport,
    band_function,
    band_interval,
    band_table,
    default_grid,
    flat_band_criterion,
    spectrum_report,
    unperturbed_spectrum,
)
from .errors import (
    BoundaryClashError,
    ConfigError,
    CriterionViolation,
    NumericalError,
)
from .jacobi import (
    JacobiMatrix,
    Monodromy,
    a_of_t,
    char_poly,
    cos_node,
    decoupled_eigenvalues,
    eigenvalues,
    eigenvalues_batch,
    fundamental_solutions,
    jacobi_matrix,
    monodromy,
    offdiag_pattern,
    sin_node,
    sturm_count,
    transfer_matrix,
    unperturbed_eigenvalue,
)
from .lattice import (
    OPEN,
    PERIODIC,
    FlatBandVector,
    RibbonParams,
    RibbonState,
    apply_hamiltonian,
    build_ribbon,
    expand_in_flat_basis,
    flat_band_vector,
    flat_basis_combination,
    verify_flat_eigen,
)
from .oracle import (
    MultisetReport,
    bloch_union_spectrum,
    compare_multisets,
    dense_symmetric_eig,
    periodic_ribbon_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "BandTable",
    "BoundaryClashError",
    "ConfigError",
    "CriterionViolation",
    "FlatBandVector",
    "JacobiMatrix",
    "Monodromy",
    "MultisetReport",
    "NumericalError",
    "OPEN",
    "OrderEstimate",
    "PERIODIC",
    "RibbonParams",
    "RibbonState",
    "SpectrumReport",
    "StrongFieldEstimate",
    "WeakFieldPrediction",
    "a_of_t",
    "apply_hamiltonian",
    "band_function",
    "band_interval",
    "band_table",
    "bloch_union_spectrum",
    "build_ribbon",
    "char_poly",
    "compare_multisets",
    "constant_field",
    "constant_field_potential",
    "cos_node",
    "decoupled_eigenvalues",
    "default_grid",
    "dense_symmetric_eig",
    "eigenvalues",
    "eigenvalues_batch",
    "expand_in_flat_basis",
    "first_order_lower_edge",
    "first_order_upper_edge",
    "flat_band_criterion",
    "flat_band_vector",
    "flat_basis_combination",
    "fundamental_solutions",
    "jacobi_matrix",
    "monodromy",
    "offdiag_pattern",
    "order_check",
    "periodic_ribbon_spectrum",
    "sin_node",
    "spectrum_report",
    "strong_field",
    "sturm_count",
    "transfer_matrix",
    "unperturbed_eigenvalue",
    "unperturbed_spectrum",
    "verify_flat_eigen",
    "weak_field_center",
    "weak_field_center_telescoped",
    "weak_field_edges",
    "__version__",
]
