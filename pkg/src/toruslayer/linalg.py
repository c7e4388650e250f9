"""Dense linear algebra for the variational problem.

The production route is weighted modified Gram-Schmidt followed by a
cyclic Jacobi diagonalization of the projected Hamiltonian. The
generalized-eigenproblem oracle takes an independent route through LAPACK
and exists to cross-check it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from toruslayer.basis import BasisFunction
from toruslayer.errors import (
    ConvergenceError,
    IllConditionedError,
    LinearDependenceError,
)
from toruslayer.quadrature import ProductGrid

PIVOT_TOL = 1e-12
MAX_CONDITION = 1e12
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
SYMMETRY_TOL = 1e-8


class EigenPairs(NamedTuple):
    """Ascending eigenvalues and matching orthonormal eigenvectors (columns)."""

    values: np.ndarray
    vectors: np.ndarray


@dataclass(frozen=True)
class OrthoBasis:
    """Row r of ``C`` expands orthonormal state r over the raw basis.

    C is lower triangular and C S C^T = I.
    """

    C: np.ndarray
    gram_condition: float


def sample_basis(basis: list[BasisFunction], grid: ProductGrid) -> np.ndarray:
    """Values of every basis function on the grid, shape (n_basis, *grid.shape)."""
    return np.array([f(grid.theta, grid.q) for f in basis])


def overlap_from_samples(samples: np.ndarray, grid: ProductGrid) -> np.ndarray:
    w = grid.weights
    n = len(samples)
    S = np.empty((n, n))
    for r in range(n):
        for s in range(r, n):
            S[r, s] = S[s, r] = np.sum(w * (samples[r] * samples[s]))
    return S


def overlap_matrix(basis: list[BasisFunction], grid: ProductGrid) -> np.ndarray:
    """S[r, s] = <Phi_r, Phi_s> under the M-weighted inner product."""
    if not basis:
        raise ValueError("empty basis")
    return overlap_from_samples(sample_basis(basis, grid), grid)


def _check_symmetric(A, what="matrix"):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"{what} must be square, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError(f"{what} has non-finite entries")
    scale = np.linalg.norm(A)
    if scale > 0 and np.linalg.norm(A - A.T) > SYMMETRY_TOL * scale:
        raise ValueError(f"{what} is not symmetric")
    return A


def symmetric_eigen(A) -> EigenPairs:
    """Cyclic Jacobi eigendecomposition of a real symmetric matrix.

    Sweeps over all (p, q) pairs with Rutishauser's rotation until the
    off-diagonal Frobenius norm drops below 1e-13 ||A||_F. Eigenvalues are
    returned ascending; ties keep their original diagonal order.
    """
    A = _check_symmetric(A).copy()
    n = A.shape[0]
    V = np.eye(n)
    scale = np.linalg.norm(A)
    if n > 1 and scale > 0:
        target = JACOBI_TOL * scale
        # entries this small cannot move any eigenvalue at double precision
        tiny = 1e-3 * np.finfo(float).eps * scale / n
        for _sweep in range(JACOBI_MAX_SWEEPS):
            off = np.linalg.norm(A - np.diag(np.diag(A)))
            if off < target:
                break
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = A[p, q]
                    if abs(apq) <= tiny:
                        A[p, q] = A[q, p] = 0.0
                        continue
                    tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                    t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau)) if tau != 0 else 1.0
                    c = 1.0 / np.sqrt(1.0 + t * t)
                    s = t * c
                    # A <- J^T A J with J the (p, q) rotation
                    ap = A[:, p].copy()
                    aq = A[:, q].copy()
                    A[:, p] = c * ap - s * aq
                    A[:, q] = s * ap + c * aq
                    ap = A[p, :].copy()
                    aq = A[q, :].copy()
                    A[p, :] = c * ap - s * aq
                    A[q, :] = s * ap + c * aq
                    A[p, q] = A[q, p] = 0.0
                    vp = V[:, p].copy()
                    vq = V[:, q].copy()
                    V[:, p] = c * vp - s * vq
                    V[:, q] = s * vp + c * vq
        else:
            raise ConvergenceError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
    w = np.diag(A).copy()
    order = np.argsort(w, kind="stable")
    return EigenPairs(w[order], V[:, order])


def gram_condition(S) -> float:
    """Ratio of extreme eigenvalues of the overlap matrix."""
    w = symmetric_eigen(S).values
    if w[0] <= 0:
        return np.inf
    return float(w[-1] / w[0])


def orthonormalize(S) -> OrthoBasis:
    """Modified Gram-Schmidt in coefficient space under <x, y> = x^T S y.

    Each raw vector is projected against the accepted ones twice (one full
    reorthogonalization pass) before normalization.
    """
    S = _check_symmetric(S, "overlap matrix")
    n = S.shape[0]
    cond = gram_condition(S)
    if cond > MAX_CONDITION:
        raise IllConditionedError(f"overlap condition number {cond:.3e} exceeds {MAX_CONDITION:.0e}")
    C = np.zeros((n, n))
    for r in range(n):
        v = np.zeros(n)
        v[r] = 1.0
        initial = np.sqrt(S[r, r]) if S[r, r] > 0 else 0.0
        for _pass in range(2):
            for k in range(r):
                v = v - (C[k] @ S @ v) * C[k]
        norm2 = v @ S @ v
        norm = np.sqrt(norm2) if norm2 > 0 else 0.0
        if initial == 0.0 or norm < PIVOT_TOL * initial:
            raise LinearDependenceError(f"basis function {r} is linearly dependent on earlier ones")
        C[r] = v / norm
    return OrthoBasis(C, cond)


def gram_schmidt(basis: list[BasisFunction], grid: ProductGrid) -> OrthoBasis:
    """Orthonormalize ``basis`` over the grid's weighted inner product."""
    return orthonormalize(overlap_matrix(basis, grid))


def generalized_eigen_oracle(H, S) -> np.ndarray:
    """Eigenvalues of H c = lambda S c via explicit S^{-1/2} congruence (LAPACK)."""
    H = _check_symmetric(H, "H")
    S = _check_symmetric(S, "S")
    if H.shape != S.shape:
        raise ValueError(f"H {H.shape} and S {S.shape} differ in shape")
    s, U = np.linalg.eigh(S)
    if s[0] <= 0:
        raise ValueError("S is not positive definite")
    S_inv_half = (U / np.sqrt(s)) @ U.T
    A = S_inv_half @ H @ S_inv_half
    return np.linalg.eigvalsh(0.5 * (A + A.T))
