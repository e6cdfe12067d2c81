"""Closed-form single-step solvers shared by all ALM subproblems.

Every function here is pure: no state, no RNG, safe to call concurrently.
Inputs must be finite; NaN/Inf is rejected up front rather than propagated.
"""

import numpy as np


class DegenerateMatrixError(ValueError):
    """Raised when an input matrix is degenerate (e.g. identically zero)."""


def _as_finite_array(A, name="matrix"):
    A = np.asarray(A, dtype=float)
    if A.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{name} contains non-finite entries")
    return A


def soft_threshold(x, eps):
    """Scalar shrinkage: move x toward zero by eps, clipping at zero.

    Accepts scalars or arrays (applied elementwise).
    """
    if eps < 0:
        raise ValueError("threshold must be nonnegative")
    return np.sign(x) * np.maximum(np.abs(x) - eps, 0.0)


def prox_l21(T, tau):
    """Proximal operator of the column-wise l2,1 norm.

    Solves argmin_E  tau * ||E||_{2,1} + 1/2 * ||E - T||_F^2.
    Column j is scaled by (1 - tau/||t_j||) when ||t_j|| > tau and
    zeroed otherwise; a zero column stays zero (the formula's limit).

    Parameters
    ----------
    T : (d, n) array_like
    tau : float
        Positive shrinkage threshold.

    Returns
    -------
    (d, n) ndarray
    """
    if tau <= 0:
        raise ValueError("tau must be positive")
    T = _as_finite_array(T, "T")
    norms = np.linalg.norm(T, axis=0)
    scale = np.zeros_like(norms)
    active = norms > tau
    scale[active] = 1.0 - tau / norms[active]
    return T * scale


def svt(A, tau):
    """Singular value thresholding: proximal operator of the trace norm.

    Solves argmin_L  tau * ||L||_* + 1/2 * ||L - A||_F^2 by soft-thresholding
    the singular values of A.

    Parameters
    ----------
    A : (m, n) array_like
    tau : float
        Nonnegative threshold applied to every singular value.

    Returns
    -------
    (m, n) ndarray
    """
    if tau < 0:
        raise ValueError("tau must be nonnegative")
    A = _as_finite_array(A, "A")
    U, s, Vt = np.linalg.svd(A, full_matrices=False)
    s = np.maximum(s - tau, 0.0)
    return (U * s) @ Vt


def procrustes(M):
    """Polar factor of M: the orthonormal-column maximizer of trace(U^T M).

    For the thin SVD M = P diag(s) Q^T the solution is U = P Q^T, which also
    minimizes ||A - U B||_F over U^T U = I whenever M = A B^T.

    Parameters
    ----------
    M : (n, k) array_like with n >= k, not identically zero.

    Returns
    -------
    (n, k) ndarray with orthonormal columns.

    Raises
    ------
    DegenerateMatrixError
        If M is all-zero; an arbitrary orthonormal factor would silently
        corrupt downstream iterations, so the caller must recover explicitly.
    """
    M = _as_finite_array(M, "M")
    n, k = M.shape
    if n < k:
        raise ValueError(f"need at least as many rows as columns, got {n}x{k}")
    if not np.any(M):
        raise DegenerateMatrixError("procrustes argument is identically zero")
    P, _, Qt = np.linalg.svd(M, full_matrices=False)
    return P @ Qt


def trace_norm(A):
    """Sum of singular values of A (the trace/nuclear norm)."""
    A = _as_finite_array(A, "A")
    return float(np.linalg.svd(A, compute_uv=False).sum())
