"""Dense linear-algebra kernels for stacks of small complex matrices.

Everything here is dtype-generic so the monodromy propagation can run in
extended precision (complex256 where the platform has it).  The plain
float64 pipeline loses two to three digits per decade of the spectral
growth exponent, which is not enough for the determinant and symplectic
residual targets at the far end of the scan window; 80-bit arithmetic
restores a comfortable margin at roughly twice the cost.
"""

from __future__ import annotations

import numpy as np

# Extended-precision complex dtype; falls back to complex128 on platforms
# without an extended long double (residual tolerances then degrade).
EXTENDED: np.dtype = np.dtype(getattr(np, "complex256", np.complex128))

_TAYLOR_RADIUS = 0.25
_MAX_TAYLOR_TERMS = 48


def expm_stack(A: np.ndarray, dtype: np.dtype | type = EXTENDED) -> np.ndarray:
    """Matrix exponential of a stack (..., n, n) via scaling + Taylor + squaring.

    The whole stack shares one scaling exponent (the cells of one spectral
    point all have nearly equal norms), so every step is a batched matmul.
    With the scaled norm at most 0.25 the Taylor tail is far below even the
    extended-precision epsilon after ~20 terms.
    """
    A = np.asarray(A, dtype=dtype)
    n = A.shape[-1]
    norm = float(np.abs(A).sum(axis=-1).max()) if A.size else 0.0
    squarings = 0
    if norm > _TAYLOR_RADIUS:
        squarings = int(np.ceil(np.log2(norm / _TAYLOR_RADIUS)))
    As = A / np.asarray(2.0**squarings, dtype=dtype)

    eye = np.broadcast_to(np.eye(n, dtype=dtype), A.shape)
    total = eye.copy()
    term = eye.copy()
    for m in range(1, _MAX_TAYLOR_TERMS + 1):
        term = (term @ As) / m
        total += term
        if np.abs(term).max() <= 1e-24 * max(1.0, float(np.abs(total).max())):
            break
    for _ in range(squarings):
        total = total @ total
    return total


def det3(M: np.ndarray) -> complex:
    """Cofactor determinant of one 3x3 matrix, evaluated in M's own dtype."""
    return (
        M[0, 0] * (M[1, 1] * M[2, 2] - M[1, 2] * M[2, 1])
        - M[0, 1] * (M[1, 0] * M[2, 2] - M[1, 2] * M[2, 0])
        + M[0, 2] * (M[1, 0] * M[2, 1] - M[1, 1] * M[2, 0])
    )


def spectral_norm(M: np.ndarray) -> float:
    """Largest singular value (the norm used by all growth estimates)."""
    return float(np.linalg.norm(np.asarray(M, dtype=np.complex128), 2))


def ordered_product(factors: np.ndarray) -> np.ndarray:
    """Product factors[N-1] @ ... @ factors[0] of a stack of matrices.

    This is the time ordering of a transfer-matrix sweep: index 0 acts first.
    """
    M = factors[0]
    for i in range(1, factors.shape[0]):
        M = factors[i] @ M
    return M
