"""Multi-view subspace clustering via constrained bilinear factorization."""

from .data import (
    DatasetFormatError,
    MultiViewDataset,
    SynthParams,
    load_dataset,
    normalize_view,
    synth_multiview,
    write_dataset,
)
from .metrics import MetricsReport, acc, aggregate, avgent, nmi, pairwise_scores, score_labels
from .proxops import DegenerateMatrixError, procrustes, prox_l21, soft_threshold, svt, trace_norm
from .solver import LrrResult, SolverConfig, SolverResult, lrr_solve, solve
from .spectral import build_affinity, kmeans, spectral_cluster

__all__ = [
    "DatasetFormatError",
    "DegenerateMatrixError",
    "LrrResult",
    "MetricsReport",
    "MultiViewDataset",
    "SolverConfig",
    "SolverResult",
    "SynthParams",
    "acc",
    "aggregate",
    "avgent",
    "build_affinity",
    "kmeans",
    "load_dataset",
    "lrr_solve",
    "nmi",
    "normalize_view",
    "pairwise_scores",
    "procrustes",
    "prox_l21",
    "score_labels",
    "soft_threshold",
    "solve",
    "spectral_cluster",
    "svt",
    "synth_multiview",
    "trace_norm",
    "write_dataset",
]

__version__ = "0.1.0"
