"""Block matrices selfadjoint in an indefinite inner product.

The signature matrix H = diag(-1, I_n) turns C^(n+1) into a Pontryagin
space with one negative square.  A matrix X is H-selfadjoint when
X* H = H X, which forces the block shape

    X = [[a, -b*],
         [b,  C ]]            a real, b in C^n, C Hermitian.

Such an X has exactly one eigenvalue ``beta`` in the closed upper half
plane whose eigenspace contains a vector of nonpositive H-norm.  Up to
H-unitary similarity the pair (X, H) falls into four canonical cases:
beta nonreal (Case 1), or beta real with a Jordan chain of length 1, 2
or 3 (Cases 2, 3, 4).  This module extracts ``beta``, decides the case,
and splits off the remaining (real) spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dense_spectra import enforce_conjugate_pairing, general_eig

__all__ = [
    "SignatureMatrix",
    "BlockHSelfAdjoint",
    "CanonicalCase",
    "RealSpectrum",
    "AmbiguousClassificationError",
    "h_inner",
    "assemble",
    "is_h_selfadjoint",
    "nonpositive_type_eigenvalue",
    "classify_canonical_case",
    "classify_with_spectrum",
    "scalar_resolvent",
    "real_spectrum",
]

# One-sided acceptance threshold for [v,v]_H <= TAU_NEG: neutral
# eigenvectors (Cases 1, 3, 4) have H-norm exactly zero in exact
# arithmetic, so the test cannot be two-sided.
TAU_NEG = 1e-8

# Eigenvalues of X within the cluster radius of beta count toward its
# algebraic multiplicity.  A Jordan chain of length 3 is split by the QR
# iteration into a ring of radius ~ eps**(1/3) * |X| (about 3e-6 for
# unit-scale fixtures), so the floor must sit safely above that.
CLUSTER_RADIUS_FLOOR = 5e-5

EXCLUDED_BY_CASE = {"Case1": 2, "Case2": 1, "Case3": 2, "Case4": 3}


class AmbiguousClassificationError(RuntimeError):
    """Zero or several nonpositive-type candidates survived the tolerance test."""

    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = list(candidates)


@dataclass(frozen=True)
class SignatureMatrix:
    """H = diag(-1, I_n), the Gram matrix of the indefinite inner product."""

    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")

    @property
    def dim(self) -> int:
        return self.n + 1

    def signs(self) -> np.ndarray:
        return np.concatenate(([-1.0], np.ones(self.n)))

    def as_matrix(self) -> np.ndarray:
        return np.diag(self.signs())


@dataclass(frozen=True)
class BlockHSelfAdjoint:
    """The triple (a, b, C) encoding an H-selfadjoint block matrix.

    ``a`` is real, ``b`` a length-n vector, ``C`` an n x n Hermitian
    matrix.  ``n = 0`` (empty b and C) is legal and means X = [a].
    """

    a: float
    b: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        b = np.atleast_1d(np.asarray(self.b))
        C = np.asarray(self.C)
        if C.size == 0:
            C = C.reshape(0, 0)
        if b.ndim != 1:
            raise ValueError("b must be a vector")
        if C.ndim != 2 or C.shape[0] != C.shape[1]:
            raise ValueError("C must be square")
        if C.shape[0] != b.shape[0]:
            raise ValueError(f"dimension mismatch: b has {b.shape[0]} entries, C is {C.shape}")
        if C.size:
            cmax = max(float(np.max(np.abs(C))), 1e-300)
            if float(np.max(np.abs(C - C.conj().T))) > 1e-12 * (1.0 + cmax):
                raise ValueError("C is not Hermitian within tolerance")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "C", C)

    @property
    def n(self) -> int:
        return self.b.shape[0]

    def signature(self) -> SignatureMatrix:
        return SignatureMatrix(self.n)


@dataclass(frozen=True)
class CanonicalCase:
    """The nonpositive-type eigenvalue with its canonical case label.

    Case1: beta nonreal (reported in the open upper half plane),
    multiplicity 1.  Case2/3/4: beta real with algebraic multiplicity
    1/2/3.
    """

    label: str
    beta: complex
    multiplicity: int

    def __post_init__(self):
        expected = {"Case1": 1, "Case2": 1, "Case3": 2, "Case4": 3}
        if self.label not in expected:
            raise ValueError(f"unknown case label {self.label!r}")
        if self.multiplicity != expected[self.label]:
            raise ValueError(f"{self.label} requires multiplicity {expected[self.label]}")
        if self.label == "Case1":
            if self.beta.imag <= 0:
                raise ValueError("Case1 requires Im beta > 0")
        elif self.beta.imag != 0:
            raise ValueError(f"{self.label} requires real beta")


@dataclass(frozen=True)
class RealSpectrum:
    """Sorted real eigenvalues of X, beta's Jordan chain excluded."""

    zeta: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self):
        z = np.sort(np.asarray(self.zeta, dtype=float).ravel())
        object.__setattr__(self, "zeta", z)

    def __len__(self):
        return self.zeta.shape[0]


def h_inner(x, y, H: SignatureMatrix) -> complex:
    """Indefinite inner product [x, y]_H = y* H x."""
    x = np.asarray(x).ravel()
    y = np.asarray(y).ravel()
    if x.shape[0] != H.dim or y.shape[0] != H.dim:
        raise ValueError(f"vectors must have length {H.dim}")
    return complex(np.vdot(y, H.signs() * x))


def assemble(m: BlockHSelfAdjoint) -> np.ndarray:
    """Build the full (n+1) x (n+1) matrix [[a, -b*], [b, C]]."""
    n = m.n
    dtype = np.result_type(m.b, m.C, float)
    X = np.zeros((n + 1, n + 1), dtype=dtype)
    X[0, 0] = m.a
    X[0, 1:] = -np.conj(m.b)
    X[1:, 0] = m.b
    X[1:, 1:] = m.C
    return X


def is_h_selfadjoint(X, H: SignatureMatrix, tol: float = 1e-12) -> bool:
    """True iff ||X* H - H X||_max <= tol * (1 + max|X|)."""
    X = np.asarray(X)
    if X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError("X must be square")
    if X.shape[0] != H.dim:
        raise ValueError(f"X must be {H.dim} x {H.dim} to match H")
    s = H.signs()
    defect = X.conj().T * s[np.newaxis, :] - s[:, np.newaxis] * X
    bound = tol * (1.0 + (float(np.max(np.abs(X))) if X.size else 0.0))
    return float(np.max(np.abs(defect))) <= bound


def _cluster_radius(scale: float) -> float:
    return max(CLUSTER_RADIUS_FLOOR, 1e-8 * scale)


def classify_with_spectrum(m: BlockHSelfAdjoint):
    """Classify the nonpositive-type eigenvalue and split off the rest.

    Returns ``(CanonicalCase, RealSpectrum)``.  The engine:

    1. solve for all eigenpairs of X (conjugate-paired),
    2. keep eigenvalues in the closed upper half plane whose unit
       eigenvector v has [v, v]_H <= TAU_NEG,
    3. demand the survivors form a single cluster within the cluster
       radius; its eigenvalue count is beta's algebraic multiplicity.

    Raises AmbiguousClassificationError when step 3 finds zero or
    several clusters, or a multiplicity above 3, or when some eigenvalue
    outside beta's chain fails to be real.
    """
    X = assemble(m)
    H = m.signature()
    scale = float(np.max(np.abs(X))) if X.size else 0.0
    r_cl = _cluster_radius(scale)
    eig = general_eig(X)
    w, V = eig.eigenvalues, eig.eigenvectors
    if not np.isrealobj(X):
        # the spectrum of an H-selfadjoint matrix is conjugate-symmetric
        # even for complex entries; general_eig only pairs real input
        w, V = enforce_conjugate_pairing(w, V, scale)
    signs = H.signs()

    candidates = []
    for k in range(len(w)):
        if w[k].imag < 0:
            continue
        v = V[:, k]
        hval = float(np.real(np.vdot(v, signs * v)))
        if hval <= TAU_NEG:
            candidates.append((w[k], hval))
    if not candidates:
        raise AmbiguousClassificationError(
            "no eigenvalue in the closed upper half plane has a "
            f"nonpositive-type eigenvector (threshold {TAU_NEG:g})",
        )

    groups = _single_linkage([z for z, _ in candidates], r_cl)
    if len(groups) > 1:
        raise AmbiguousClassificationError(
            f"{len(groups)} well-separated nonpositive-type candidates; "
            "expected exactly one",
            candidates=[z for z, _ in candidates],
        )

    centroid = np.mean(groups[0])
    chain = np.where(np.abs(w - centroid) <= r_cl)[0]
    mult = len(chain)
    chain_values = w[chain]

    if mult == 1:
        beta = complex(chain_values[0])
        if beta.imag > 0:
            case = CanonicalCase("Case1", beta, 1)
        else:
            case = CanonicalCase("Case2", complex(beta.real), 1)
    elif mult == 2:
        case = CanonicalCase("Case3", complex(np.mean(chain_values).real), 2)
    elif mult == 3:
        case = CanonicalCase("Case4", complex(np.mean(chain_values).real), 3)
    else:
        raise AmbiguousClassificationError(
            f"eigenvalue cluster of size {mult} at {centroid:.6g}; a space with "
            "one negative square admits chains of length at most 3",
            candidates=[z for z, _ in candidates],
        )

    exclude = set(chain.tolist())
    if case.label == "Case1":
        # drop the conjugate partner as well
        partner = np.argmin(np.abs(w - np.conj(case.beta)))
        exclude.add(int(partner))
    rest = [w[k] for k in range(len(w)) if k not in exclude]
    nonreal_rest = [z for z in rest if z.imag != 0]
    if nonreal_rest:
        raise AmbiguousClassificationError(
            f"{len(nonreal_rest)} nonreal eigenvalues outside beta's chain "
            "(one negative square allows at most one nonreal pair)",
            candidates=nonreal_rest,
        )
    zeta = RealSpectrum(np.array([z.real for z in rest], dtype=float))
    expected_len = (m.n + 1) - EXCLUDED_BY_CASE[case.label]
    if len(zeta) != expected_len:
        raise AmbiguousClassificationError(
            f"real spectrum has {len(zeta)} points, expected {expected_len} for {case.label}"
        )
    return case, zeta


def nonpositive_type_eigenvalue(m: BlockHSelfAdjoint) -> CanonicalCase:
    """The unique eigenvalue of X in C+ u R with a nonpositive-type eigenvector."""
    case, _ = classify_with_spectrum(m)
    return case


def classify_canonical_case(m: BlockHSelfAdjoint) -> CanonicalCase:
    """Alias of `nonpositive_type_eigenvalue`; same engine, same output."""
    return nonpositive_type_eigenvalue(m)


def real_spectrum(m: BlockHSelfAdjoint) -> RealSpectrum:
    """Sorted real eigenvalues of X with beta's Jordan chain removed.

    Case1 removes the nonreal pair; Cases 2-4 remove 1, 2, 3 copies at
    beta.  The remaining count is n-1, n, n-1, n-2 respectively.
    """
    _, zeta = classify_with_spectrum(m)
    return zeta


def scalar_resolvent(m: BlockHSelfAdjoint, z: complex) -> complex:
    """The scalar e1* H (X - z)^{-1} e1.

    By the Schur complement of the (1,1) block this equals -1/Q(z) with
    Q(z) = a - z + b*(C - z)^{-1} b, which cross-checks the transform
    route.  Rejects z closer to the spectrum of X than 1e-12 * |X|.
    """
    X = assemble(m)
    z = complex(z)
    scale = max(float(np.max(np.abs(X))), 1.0)
    gap = np.min(np.abs(np.linalg.eigvals(X) - z)) if X.size else np.inf
    if gap <= 1e-12 * scale:
        raise ValueError(f"z = {z} is within {gap:.3e} of the spectrum of X")
    dim = X.shape[0]
    e1 = np.zeros(dim, dtype=complex)
    e1[0] = 1.0
    sol = np.linalg.solve(X - z * np.eye(dim), e1)
    return complex(-sol[0])


def _single_linkage(points, radius):
    """Group complex points into clusters with link distance <= radius."""
    points = list(points)
    unused = set(range(len(points)))
    groups = []
    while unused:
        seed = unused.pop()
        group = [seed]
        frontier = [seed]
        while frontier:
            i = frontier.pop()
            near = [j for j in unused if abs(points[i] - points[j]) <= radius]
            for j in near:
                unused.remove(j)
                group.append(j)
                frontier.append(j)
        groups.append([points[i] for i in group])
    return groups
