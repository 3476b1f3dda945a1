"""Exact-arithmetic mirror symmetry toolkit for smooth projective toric fans.

Computes mirror transformations, correction terms and Landau-Ginzburg
potentials of Lagrangian torus fibres, open Gromov-Witten invariants, and
Batyrev / Seidel elements with their relative lifts, then mechanically
verifies the defining identities at a chosen truncation order.
"""

from .fan import (BUILTIN_NAMES, ConePair, DivisorBasis, Fan, FanError, FanGateError,
                  MomentPolytope, OpenClosedPoint, ToricVariety, builtin,
                  divisor_basis, moment_polytope, opcl_decompose, product, validate,
                  wall_curves)
from .mirror import (CorrectionTerms, IAsymptotics, MirrorMap, OutOfModelError,
                     Potential, correction_terms, g0_series, ifunction_asymptotics,
                     jacobi_matrix, mirror_map, open_gw, potential)
from .seidel import (CheckResult, VerificationReport, batyrev_elements, frks,
                     reduce_mod_relations, run_verification, seidel_elements,
                     seidel_lifts_closed, seidel_lifts_jacobi)
from .series import (RingDescriptor, SeriesError, SeriesMatrix, TruncatedSeries,
                     series_from_obj, series_to_obj)

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_NAMES", "CheckResult", "ConePair", "CorrectionTerms", "DivisorBasis",
    "Fan", "FanError", "FanGateError", "IAsymptotics", "MirrorMap", "MomentPolytope",
    "OpenClosedPoint", "OutOfModelError", "Potential", "RingDescriptor",
    "SeriesError", "SeriesMatrix", "ToricVariety", "TruncatedSeries",
    "VerificationReport", "batyrev_elements", "builtin", "correction_terms",
    "divisor_basis", "frks", "g0_series", "ifunction_asymptotics", "jacobi_matrix",
    "mirror_map", "moment_polytope", "opcl_decompose", "open_gw", "potential",
    "product", "reduce_mod_relations", "run_verification", "seidel_elements",
    "seidel_lifts_closed", "seidel_lifts_jacobi", "series_from_obj", "series_to_obj",
    "validate", "wall_curves",
]
