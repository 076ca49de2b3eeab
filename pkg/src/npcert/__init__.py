"""Exact cohomology, positivity and N_p certificates for cyclic covers of P^2 and F_e."""

from .lattice import BaseClass, Hirzebruch, ProjectivePlane, canonical_class, intersect
from .positivity import Inapplicable, SlopeBound, Verdict
from .covers import CoverError, CyclicCover, PullbackClass
from .cohomology import CohomologyDims, cohomology_base, cohomology_cover, euler_char, surface_invariants
from .engine import (
    Certificate,
    InternalInconsistency,
    NotCertified,
    SurfaceContext,
    certify,
    certify_N0,
    certify_N1,
    certify_Np,
    min_r_for_Np,
)

__version__ = "0.1.0"
