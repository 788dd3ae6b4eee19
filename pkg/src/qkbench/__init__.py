"""Exact quantum Kolmogorov complexity over finite prefix-free machine tables."""
from __future__ import annotations

from .complexity import (
    QKValue,
    compress_classical_machine,
    counting_check,
    qk_eps,
    standard_basis_machine,
    tracial_bound_check,
)
from .linalg import (
    DensityMatrix,
    ExactProjection,
    OrthoSet,
    QVector,
    heavy_basis_vectors,
    overlap,
    partial_trace,
    projection_from_span,
    tau_measure,
)
from .machines import MachineTable, build_table, encode_natural, k_of, kraft_sum
from .qtests import (
    QMLTestPrefix,
    QSigma1Prefix,
    StrongSolovayTestPrefix,
    evaluate_qsigma,
    fails_at,
    fiber_partition,
    machine_to_test,
    schnorr_test_to_machine,
)
from .report import Claim
from .scalar import ExtScalar, format_scalar, parse_scalar
from .states import (
    DensityPrefix,
    SystemB,
    classical_prefix,
    mixture_prefix,
    product_prefix,
    tracial_prefix,
)

__all__ = [
    "QKValue",
    "compress_classical_machine",
    "counting_check",
    "qk_eps",
    "standard_basis_machine",
    "tracial_bound_check",
    "DensityMatrix",
    "ExactProjection",
    "OrthoSet",
    "QVector",
    "heavy_basis_vectors",
    "overlap",
    "partial_trace",
    "projection_from_span",
    "tau_measure",
    "MachineTable",
    "build_table",
    "encode_natural",
    "k_of",
    "kraft_sum",
    "QMLTestPrefix",
    "QSigma1Prefix",
    "StrongSolovayTestPrefix",
    "evaluate_qsigma",
    "fails_at",
    "fiber_partition",
    "machine_to_test",
    "schnorr_test_to_machine",
    "Claim",
    "ExtScalar",
    "format_scalar",
    "parse_scalar",
    "DensityPrefix",
    "SystemB",
    "classical_prefix",
    "mixture_prefix",
    "product_prefix",
    "tracial_prefix",
]

__version__ = "0.1.0"
