"""Concentration bounds for few-body operators on finite spin systems,
certified against exact diagonalization."""

from .operators import (
    Lattice,
    LocalTerm,
    FewBodyOperator,
    ProductState,
    Profile,
    analyze_profile,
    center,
    check_spatial_range,
    heisenberg_chain,
    nearest_neighbor_chain,
    random_instance,
    random_product_state,
)
from .spectral import (
    StateVector,
    SpectralDistribution,
    commutator_norm_exact,
    eigensystem,
    embed,
    excitation_norm,
    mgf_exact,
    moment_exact,
    spectral_distribution,
    tail_exact,
)
from .decomposition import Layering, decompose, layering_from_layers, localization_width
from .bounds import BoundCertificate

__version__ = "0.1.0"
