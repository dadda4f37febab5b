"""Dense eigendecompositions with residual verification.

Every spectral computation in the package goes through the two solvers
here: `hermitian_eig` for Hermitian matrices and `general_eig` for
arbitrary square matrices.  Both verify a residual bound on their output
and raise instead of returning silent garbage.  For real input,
`general_eig` post-processes the spectrum so that it is closed under
complex conjugation *exactly*, which downstream classification relies on
(the real/nonreal dichotomy must be decided, not left to rounding noise).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "EigenSolveError",
    "HermitianEigenResult",
    "GeneralEigenResult",
    "hermitian_eig",
    "general_eig",
    "eig_residual",
    "enforce_conjugate_pairing",
]

# |Im lambda| below IMAG_SNAP_TOL * (1 + max|X|) is rounding noise, not a
# genuinely nonreal eigenvalue.
IMAG_SNAP_TOL = 1e-10
HERMITICITY_TOL = 1e-12
RESIDUAL_TOL = 1e-8
RECONSTRUCTION_TOL = 1e-9
UNITARITY_TOL = 1e-10


class EigenSolveError(RuntimeError):
    """Eigensolver failed to converge or produced out-of-tolerance output."""


@dataclass(frozen=True)
class HermitianEigenResult:
    """Spectral factorization C = U* diag(eigenvalues) U with unitary U.

    `eigenvalues` is real and sorted ascending; `basis` holds U, i.e. the
    matrix whose *rows* are eigenvectors, so that U C U* is diagonal.
    """

    eigenvalues: np.ndarray
    basis: np.ndarray


@dataclass(frozen=True)
class GeneralEigenResult:
    """Eigenpairs of a general square matrix.

    Column k of `eigenvectors` is a unit-norm eigenvector for
    `eigenvalues[k]`.  For real input the eigenvalue multiset is closed
    under conjugation exactly (see `enforce_conjugate_pairing`).
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def _max_abs(a):
    return float(np.max(np.abs(a))) if a.size else 0.0


def _check_square(X, name="matrix"):
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"{name} must be square, got shape {X.shape}")
    return X


def hermitian_eig(C) -> HermitianEigenResult:
    """Diagonalize a Hermitian matrix.

    Parameters
    ----------
    C : (n, n) array_like
        Hermitian within ``1e-12 * max|C|``.

    Returns
    -------
    HermitianEigenResult
        Eigenvalues ascending; basis U with U C U* diagonal, verified to
        satisfy the unitarity and reconstruction residual bounds.

    Raises
    ------
    ValueError
        Non-square or non-Hermitian input.
    EigenSolveError
        LAPACK failure or residual bound violation.
    """
    C = _check_square(np.asarray(C), "C")
    scale = _max_abs(C)
    if C.size and _max_abs(C - C.conj().T) > HERMITICITY_TOL * max(scale, 1e-300):
        raise ValueError("input is not Hermitian within tolerance")
    if C.shape[0] == 0:
        return HermitianEigenResult(np.zeros(0), np.zeros((0, 0)))
    try:
        w, V = np.linalg.eigh(C)
    except np.linalg.LinAlgError as exc:
        raise EigenSolveError(f"hermitian eigensolve failed: {exc}") from exc
    U = V.conj().T
    gram = U @ U.conj().T
    if _max_abs(gram - np.eye(len(w))) > UNITARITY_TOL:
        raise EigenSolveError("eigenbasis lost unitarity")
    recon = (V * w) @ U
    if _max_abs(recon - C) > RECONSTRUCTION_TOL * (1.0 + scale):
        raise EigenSolveError("spectral reconstruction residual out of tolerance")
    return HermitianEigenResult(w, U)


def general_eig(X) -> GeneralEigenResult:
    """Eigenpairs of a general square matrix.

    Eigenvectors are unit Euclidean norm with the first significant
    component made real nonnegative; eigenpairs are sorted by
    (Re, Im) of the eigenvalue.  For real X the spectrum is symmetrized
    into exact conjugate pairs.

    Raises
    ------
    EigenSolveError
        QR iteration failure or per-pair residual above
        ``1e-8 * (1 + max|X|)``.
    """
    X = _check_square(np.asarray(X), "X")
    n = X.shape[0]
    if n == 0:
        return GeneralEigenResult(np.zeros(0, dtype=complex), np.zeros((0, 0), dtype=complex))
    scale = _max_abs(X)
    try:
        w, V = np.linalg.eig(X)
    except np.linalg.LinAlgError as exc:
        raise EigenSolveError(f"general eigensolve failed: {exc}") from exc
    w = w.astype(complex)
    V = V.astype(complex)
    if np.isrealobj(X):
        w, V = enforce_conjugate_pairing(w, V, scale)
    w, V = _canonicalize(w, V)
    resid = _max_abs_columns(X @ V - V * w)
    tol = RESIDUAL_TOL * (1.0 + scale)
    if np.any(resid > tol):
        raise EigenSolveError(
            f"eigenpair residual {resid.max():.3e} exceeds tolerance {tol:.3e}"
        )
    return GeneralEigenResult(w, V)


def eig_residual(X, lam, v) -> float:
    """Relative residual ||X v - lam v|| / ||v|| of a claimed eigenpair."""
    X = _check_square(np.asarray(X), "X")
    v = np.asarray(v, dtype=complex).ravel()
    nrm = np.linalg.norm(v)
    if nrm == 0.0:
        raise ValueError("eigenvector must be nonzero")
    return float(np.linalg.norm(X @ v - lam * v) / nrm)


def enforce_conjugate_pairing(w, V, scale):
    """Snap near-real eigenvalues to the real axis and pair the rest.

    Eigenvalues with ``|Im| <= 1e-10 * (1 + scale)`` become exactly real.
    The remaining ones are matched into conjugate pairs (nearest match)
    and each pair is replaced by exact conjugates.  Raises
    EigenSolveError when the nonreal eigenvalues cannot be paired, which
    for a matrix with real characteristic polynomial indicates a solver
    breakdown.
    """
    w = np.array(w, dtype=complex)
    V = np.array(V, dtype=complex)
    snap = IMAG_SNAP_TOL * (1.0 + scale)
    near_real = np.abs(w.imag) <= snap
    w[near_real] = w[near_real].real
    up = [k for k in range(len(w)) if w[k].imag > 0]
    down = [k for k in range(len(w)) if w[k].imag < 0]
    if len(up) != len(down):
        raise EigenSolveError("nonreal eigenvalues do not split into conjugate pairs")
    remaining = list(down)
    for i in up:
        target = np.conj(w[i])
        j = min(remaining, key=lambda k: abs(w[k] - target))
        remaining.remove(j)
        mean = 0.5 * (w[i] + np.conj(w[j]))
        w[i] = mean
        w[j] = np.conj(mean)
    return w, V


def _canonicalize(w, V):
    """Sort eigenpairs by (Re, Im); normalize column phase and length."""
    order = np.lexsort((w.imag, w.real))
    w = w[order]
    V = V[:, order]
    norms = np.linalg.norm(V, axis=0)
    if np.any(norms == 0.0):
        raise EigenSolveError("eigensolver returned a zero eigenvector")
    V = V / norms
    for k in range(V.shape[1]):
        col = V[:, k]
        big = np.abs(col) > 1e-12
        idx = int(np.argmax(big)) if big.any() else int(np.argmax(np.abs(col)))
        pivot = col[idx]
        if pivot != 0.0:
            V[:, k] = col * (np.conj(pivot) / abs(pivot))
    return w, V


def _max_abs_columns(A):
    return np.sqrt(np.sum(np.abs(A) ** 2, axis=0))
