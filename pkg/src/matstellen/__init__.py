"""Exact toolkit for positivity of symmetric matrix polynomials."""

from .polyring import Poly, parse_poly, format_poly
from .matpoly import MatPoly, SymMatPoly, congruence, det, charpoly, principal_minor, embed_upper_left
from .reduction import single_step, reduce_matrix, full_reduce, pd_reduce, step_certificate, ReductionTree
from .certificates import (
    GeneratorSet,
    ScalarFactor,
    CertTerm,
    Certificate,
    IdealTerm,
    VerifyReport,
    cert_eval,
    scalar_identity_cert,
    verify_pd_cert,
    verify_psd_cert,
    verify_null_cert,
    verify_real_null_cert,
    membership_witness_minusI,
)
from .semidef import RatMat, SampleSpec, eval_mat, is_psd, is_pd, sturm_negative_count, point_in_K, regions_agree

__all__ = [name for name in dir() if not name.startswith("_")]
