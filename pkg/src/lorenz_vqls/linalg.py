"""Dense linear algebra for small real/complex systems.

Everything here is dense and sized for matrices of dimension ~16 and below;
robustness is preferred over asymptotic speed.
"""
from __future__ import annotations

import warnings

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve

from .errors import DimensionMismatch, NotPowerOfTwo, RankDeficient, SingularMatrix

# Pivot / rank cutoffs, relative to the matrix scale.  Appropriate for the
# well-conditioned double-precision systems this package builds.
PIVOT_RTOL = 1e-14
RANK_RTOL = 1e-14


def _square(a) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains non-finite entries")
    return a


def _vector(b, length=None) -> np.ndarray:
    b = np.asarray(b)
    if b.ndim != 1:
        raise DimensionMismatch(f"expected a vector, got shape {b.shape}")
    if length is not None and b.shape[0] != length:
        raise DimensionMismatch(f"expected length {length}, got {b.shape[0]}")
    if not np.all(np.isfinite(b)):
        raise ValueError("vector contains non-finite entries")
    return b


def solve_dense(a, b) -> np.ndarray:
    """Solve ``a @ w = b`` by LU factorization with partial pivoting."""
    a = _square(a)
    b = _vector(b, a.shape[0])
    with warnings.catch_warnings():
        # our own pivot check below supersedes scipy's exact-zero warning
        warnings.simplefilter("ignore", LinAlgWarning)
        lu, piv = lu_factor(a, check_finite=False)
    tol = PIVOT_RTOL * np.linalg.norm(a)
    if np.abs(np.diag(lu)).min() <= tol:
        raise SingularMatrix(f"pivot at or below {tol:.3e}")
    return lu_solve((lu, piv), b, check_finite=False)


def condition_number(m) -> float:
    """2-norm condition number: ratio of extreme singular values."""
    m = _square(m)
    s = np.linalg.svd(m, compute_uv=False)
    if s[0] == 0.0 or s[-1] < RANK_RTOL * s[0]:
        raise RankDeficient("smallest singular value is negligible")
    return float(s[0] / s[-1])


def hermitian_dilation(a) -> np.ndarray:
    """Embed ``a`` into the Hermitian block matrix [[0, a], [a^H, 0]]."""
    a = _square(a)
    n = a.shape[0]
    zero = np.zeros((n, n), dtype=a.dtype)
    return np.block([[zero, a], [a.conj().T, zero]])


def num_qubits(dim: int) -> int:
    """log2 of a power-of-two dimension; raises NotPowerOfTwo otherwise."""
    if dim < 1 or dim & (dim - 1):
        raise NotPowerOfTwo(f"dimension {dim} is not a power of two")
    return dim.bit_length() - 1


def pad_to_power_of_two(a, b) -> tuple[np.ndarray, np.ndarray]:
    """Grow ``(a, b)`` to the next power-of-two dimension.

    Appended rows/columns extend the identity, and the right-hand side is
    extended with zeros, so the padded solution matches the original one in
    its leading block.
    """
    a = _square(a)
    b = _vector(b, a.shape[0])
    n = a.shape[0]
    m = 1
    while m < n:
        m *= 2
    if m == n:
        return a.copy(), b.copy()
    out_a = np.eye(m, dtype=np.result_type(a.dtype, float))
    out_a[:n, :n] = a
    out_b = np.zeros(m, dtype=np.result_type(b.dtype, float))
    out_b[:n] = b
    return out_a, out_b
