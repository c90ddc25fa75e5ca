"""Nested and weakly nested canalizing multivalued functions: recognition,
generation, spectral analysis and exact average-sensitivity bounds."""

from .funcspace import Hyperplane, MvFunction, ProductDomain, parse_mvfn, serialize_mvfn
from .canalization import (
    NcDecomposition,
    PeelStep,
    Segment,
    WncCertificate,
    classify,
    nc_to_wnc,
    recognize_nc,
    recognize_wnc,
    verify_nc_decomposition,
    verify_wnc_certificate,
)
from .sensitivity import average_sensitivity, check_theorem, influence_exact

__version__ = "0.1.0"
