"""Exact tools for recovering sparse integer signals from linear measurements."""
from .errors import (CertificateError, DimensionError, PreconditionError, RankError,
                     ResourceCapError)
from .exact import ExactMatrix, det_exact, gram_det, right_inverse
from .forge import GenSpec, SensingMatrix, gen_verified, verify_plucker
from .algebraic import NumberFieldSpec, build_algebraic_matrix, verify_norm_lower_bound
from .decoder import SparseIntSignal, brute_force_decode, reconstruct_cvp
from .bounds import find_sparse_witness, sparse_minkowski_bound

__version__ = "0.1.0"

__all__ = [
    "CertificateError", "DimensionError", "PreconditionError", "RankError", "ResourceCapError",
    "ExactMatrix", "det_exact", "gram_det", "right_inverse",
    "GenSpec", "SensingMatrix", "gen_verified", "verify_plucker",
    "NumberFieldSpec", "build_algebraic_matrix", "verify_norm_lower_bound",
    "SparseIntSignal", "brute_force_decode", "reconstruct_cvp",
    "find_sparse_witness", "sparse_minkowski_bound",
]
