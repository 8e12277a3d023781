"""Dense linear algebra with an explicit rank policy.

Every rank decision in the package goes through :func:`rank_threshold`: a
singular value counts as zero when it is at most
``max(relative * sigma_max, absolute)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ImageNotInKernel, NonFiniteInput


@dataclass(frozen=True)
class Tolerance:
    relative: float = 1e-9
    absolute: float = 1e-12

    def __post_init__(self):
        if not (self.relative > 0 and self.absolute > 0):
            raise ValueError("tolerances must be strictly positive")

    def threshold(self, sigma_max: float) -> float:
        return max(self.relative * sigma_max, self.absolute)


DEFAULT_TOL = Tolerance()


def _as_matrix(M) -> np.ndarray:
    M = np.asarray(M, dtype=float)
    if M.ndim == 1:
        M = M.reshape(-1, 1)
    if not np.all(np.isfinite(M)):
        raise NonFiniteInput("matrix contains NaN or infinite entries")
    return M


def _canonical_signs(B: np.ndarray) -> np.ndarray:
    # deterministic column signs: first entry of non-negligible size is positive
    B = B.copy()
    for j in range(B.shape[1]):
        col = B[:, j]
        big = np.flatnonzero(np.abs(col) > 1e-10 * max(np.abs(col).max(), 1e-300))
        if big.size and col[big[0]] < 0:
            B[:, j] = -col
    return B


def rank_threshold(M, tol: Tolerance = DEFAULT_TOL) -> float:
    M = _as_matrix(M)
    if M.size == 0:
        return tol.absolute
    return tol.threshold(np.linalg.norm(M, 2))


def rank(M, tol: Tolerance = DEFAULT_TOL) -> int:
    M = _as_matrix(M)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > tol.threshold(s[0])))


def kernel_basis(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the null space of ``M``."""
    M = _as_matrix(M)
    m, n = M.shape
    if n == 0:
        return np.zeros((0, 0))
    if m == 0:
        return np.eye(n)
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    r = int(np.sum(s > tol.threshold(s[0])))
    return _canonical_signs(vh[r:].T.copy())


def image_basis(M, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis (as columns) of the column space of ``M``."""
    M = _as_matrix(M)
    m, n = M.shape
    if m == 0 or n == 0:
        return np.zeros((m, 0))
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    r = int(np.sum(s > tol.threshold(s[0])))
    return _canonical_signs(u[:, :r].copy())


def orthogonal_complement(B, ambient: int, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of the complement of span(B) inside R^ambient."""
    B = np.asarray(B, dtype=float).reshape(ambient, -1)
    if B.shape[1] == 0:
        return np.eye(ambient)
    return kernel_basis(B.T, tol)


def _inclusion_gate(scale: float, tol: Tolerance) -> float:
    return max(1e3 * tol.relative * max(scale, 1.0), tol.absolute)


def quotient_basis(kernel, image_generators, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of span(kernel) minus span(image_generators).

    The columns of ``kernel`` must be orthonormal. The result spans the
    orthogonal complement of the image inside the kernel, which gives one
    canonical (harmonic) representative per quotient class.
    """
    K = np.asarray(kernel, dtype=float)
    n = K.shape[0]
    G = np.asarray(image_generators, dtype=float).reshape(n, -1)
    if not np.all(np.isfinite(G)) or not np.all(np.isfinite(K)):
        raise NonFiniteInput("non-finite input to quotient_basis")
    if K.shape[1] == 0:
        return np.zeros((n, 0))
    if G.shape[1] == 0 or not np.any(G):
        return K.copy()
    coords = K.T @ G
    resid = np.linalg.norm(G - K @ coords)
    gate = _inclusion_gate(np.linalg.norm(G), tol)
    if resid > gate:
        raise ImageNotInKernel(f"image leaves the kernel: residual {resid:.3e} > {gate:.3e}")
    U = image_basis(coords, tol)
    if U.shape[1] == 0:
        return K.copy()
    W = kernel_basis(U.T, tol)
    if W.shape[1] == 0:
        return np.zeros((n, 0))
    return K @ W


def least_squares_solve(M, b, tol: Tolerance = DEFAULT_TOL):
    """Minimum-norm least-squares solution; returns ``(x, residual_norm)``."""
    M = _as_matrix(M)
    b = np.asarray(b, dtype=float).reshape(-1)
    if not np.all(np.isfinite(b)):
        raise NonFiniteInput("right-hand side contains NaN or infinite entries")
    if M.shape[0] != b.shape[0]:
        raise ValueError(f"shape mismatch: M is {M.shape}, b has {b.shape[0]} rows")
    if M.shape[1] == 0:
        return np.zeros(0), float(np.linalg.norm(b))
    if M.shape[0] == 0:
        return np.zeros(M.shape[1]), 0.0
    x, *_ = np.linalg.lstsq(M, b, rcond=tol.relative)
    return x, float(np.linalg.norm(M @ x - b))
