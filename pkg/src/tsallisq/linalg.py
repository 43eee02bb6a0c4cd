"""Dense complex linear algebra for few-qubit Hilbert spaces.

Basis convention used everywhere in this package: qubit 0 is the most
significant bit, so the basis index of |q_0 q_1 ... q_{n-1}> is
b = sum_i q_i * 2**(n-1-i).  All matrices are dense complex ndarrays.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    DuplicateIndexError,
    IndexOutOfRangeError,
    NegativeEigenvalueError,
    NoConvergenceError,
    NotHermitianError,
)

# Largest matrix dimension kron() will produce (12 qubits); anything bigger
# is almost certainly a bug in the caller, not a real request.
MAX_KRON_DIM = 4096

HERMITICITY_TOL = 1e-10
PSD_CLAMP = -1e-10


class EigenDecomposition(NamedTuple):
    """Eigenvalues ascending; ``eigenvectors[:, i]`` pairs with ``eigenvalues[i]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_complex_matrix(a) -> np.ndarray:
    """Coerce to a finite, square, 2-D complex ndarray.

    Raises
    ------
    ValueError
        If the input is not square 2-D or contains non-finite entries.
    """
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise ValueError("matrix contains non-finite entries")
    return m


def kron(a, b) -> np.ndarray:
    """Kronecker product with a size guard.

    Raises
    ------
    ValueError
        If the product dimension would exceed ``MAX_KRON_DIM``.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    out_dim = a.shape[0] * b.shape[0]
    if out_dim > MAX_KRON_DIM:
        raise ValueError(
            f"kron result dimension {out_dim} exceeds the cap {MAX_KRON_DIM}"
        )
    return np.kron(a, b)


def hermiticity_defect(h) -> float:
    """Largest entrywise deviation of h from its conjugate transpose."""
    m = np.asarray(h, dtype=complex)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def hermitian_eig(h, tol: float = 1e-12) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix.

    Backed by LAPACK (``numpy.linalg.eigh``) on the symmetrized input.
    ``tol`` is the convergence contract: the largest off-diagonal entry of
    V†HV, relative to the largest entry of H, must not exceed it.

    Parameters
    ----------
    h : array_like
        Hermitian matrix (defect at most 1e-10).
    tol : float
        Relative off-diagonal residual allowed in the diagonalization.

    Returns
    -------
    EigenDecomposition
        Eigenvalues ascending, orthonormal eigenvector columns.

    Raises
    ------
    NotHermitianError
        If the Hermiticity defect exceeds 1e-10.
    NoConvergenceError
        If LAPACK fails or the residual check misses ``tol``.
    """
    m = as_complex_matrix(h)
    if hermiticity_defect(m) > HERMITICITY_TOL:
        raise NotHermitianError(
            f"hermiticity defect {hermiticity_defect(m):.3e} exceeds {HERMITICITY_TOL}"
        )
    sym = (m + m.conj().T) / 2
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise NoConvergenceError(f"eigensolver failed: {exc}") from exc
    diag = eigenvectors.conj().T @ sym @ eigenvectors
    off = diag - np.diag(np.diagonal(diag))
    scale = max(1.0, float(np.max(np.abs(sym)))) if sym.size else 1.0
    residual = float(np.max(np.abs(off))) if off.size else 0.0
    if residual > tol * scale:
        raise NoConvergenceError(
            f"off-diagonal residual {residual:.3e} exceeds tol {tol:.3e} (scale {scale:.3e})"
        )
    return EigenDecomposition(eigenvalues.astype(float), eigenvectors)


def sqrt_psd(h) -> np.ndarray:
    """Hermitian square root S of a PSD matrix h, with ``S @ S ~= h``.

    Eigenvalues in [-1e-10, 0) are clamped to zero; anything lower raises.

    Raises
    ------
    NegativeEigenvalueError
        If an eigenvalue lies below -1e-10.
    NotHermitianError
        Propagated from the eigendecomposition.
    """
    dec = hermitian_eig(h)
    low = float(dec.eigenvalues.min()) if dec.eigenvalues.size else 0.0
    if low < PSD_CLAMP:
        raise NegativeEigenvalueError(
            f"eigenvalue {low:.3e} below the PSD clamp {PSD_CLAMP}"
        )
    w = np.clip(dec.eigenvalues, 0.0, None)
    v = dec.eigenvectors
    return (v * np.sqrt(w)) @ v.conj().T


def partial_trace(rho, n_qubits: int, keep: Sequence[int]) -> np.ndarray:
    """Trace out all qubits not listed in ``keep``.

    Parameters
    ----------
    rho : array_like
        Density matrix of dimension 2**n_qubits.
    n_qubits : int
        Total qubit count.
    keep : sequence of int
        Qubit indices to keep; the output tensor factors follow this order,
        so ``keep=[1, 0]`` returns the swapped two-qubit marginal.

    Raises
    ------
    IndexOutOfRangeError
        If an index is outside [0, n_qubits) or ``keep`` is empty.
    DuplicateIndexError
        If an index repeats.
    """
    m = as_complex_matrix(rho)
    dim = 2**n_qubits
    if m.shape[0] != dim:
        raise ValueError(f"matrix dimension {m.shape[0]} != 2**{n_qubits}")
    keep = list(keep)
    if not keep:
        raise IndexOutOfRangeError("keep list must name at least one qubit")
    for idx in keep:
        if not 0 <= idx < n_qubits:
            raise IndexOutOfRangeError(f"qubit index {idx} outside [0, {n_qubits})")
    if len(set(keep)) != len(keep):
        raise DuplicateIndexError(f"duplicate qubit index in keep list {keep}")

    t = m.reshape([2] * (2 * n_qubits))
    # Trace highest-index qubits first so lower row-axis positions stay put.
    for ax in sorted(set(range(n_qubits)) - set(keep), reverse=True):
        half = t.ndim // 2
        t = np.trace(t, axis1=ax, axis2=ax + half)
    k = len(keep)
    ascending = sorted(keep)
    if keep != ascending:
        perm = [ascending.index(i) for i in keep]
        t = t.transpose(perm + [p + k for p in perm])
    return t.reshape(2**k, 2**k)
