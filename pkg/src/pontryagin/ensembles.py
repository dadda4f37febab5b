"""Seeded random generators for the matrix models.

Reproducibility contract: every draw is a pure function of
``(master seed, trial index, block role)``.  Each such triple keys its
own counter-based Philox stream, so trial results are independent of
execution order and thread count, and the block roles a, b, C are
independent by construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from .indefinite_core import BlockHSelfAdjoint

__all__ = [
    "EntryDistribution",
    "EnsembleSpec",
    "stream",
    "sample_signed_wigner",
    "sample_column",
    "sample_wigner_hermitian",
    "sample_diagonal_poly",
    "build_generic",
    "draw_block",
    "limit_n1_function",
    "spec_to_json",
    "spec_from_json",
    "with_size",
]

ROLE_A, ROLE_B, ROLE_C, ROLE_FULL = 0, 1, 2, 3

MODELS = ("signed_wigner", "generic", "diagonal_poly")
FIELDS = ("real", "complex")


def stream(seed: int, trial: int, role: int) -> np.random.Generator:
    """Independent Philox stream keyed by (seed, trial, role)."""
    seed = int(seed)
    trial = int(trial)
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    if not 0 <= trial < 2**62:
        raise ValueError("trial index out of range")
    if not 0 <= role <= ROLE_FULL:
        raise ValueError("unknown block role")
    key = (seed << 64) | (trial << 2) | role
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class EntryDistribution:
    """Mean-zero unit-variance entry law; variance s^2 enters by scaling.

    ``rademacher`` is discrete (continuous=False); experiments that
    need continuously distributed entries must refuse it.
    """

    kind: str

    KINDS = ("gaussian", "rademacher", "uniform_sym")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown entry distribution {self.kind!r}")

    @property
    def continuous(self) -> bool:
        return self.kind != "rademacher"

    def draw(self, rng: np.random.Generator, size) -> np.ndarray:
        if self.kind == "gaussian":
            return rng.standard_normal(size)
        if self.kind == "rademacher":
            return rng.integers(0, 2, size).astype(float) * 2.0 - 1.0
        half = np.sqrt(3.0)  # Var(U(-sqrt 3, sqrt 3)) = 1
        return rng.uniform(-half, half, size)


@dataclass(frozen=True)
class EnsembleSpec:
    """Complete recipe for a seeded draw; equal specs give bit-identical
    matrices."""

    model: str
    N: int
    s: float
    dist: EntryDistribution
    field: str = "real"
    seed: int = 0

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")
        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "s", float(self.s))
        object.__setattr__(self, "seed", int(self.seed))
        if self.N < 1:
            raise ValueError("N must be at least 1")
        if not self.s > 0:
            raise ValueError("s must be positive")
        if isinstance(self.dist, str):
            object.__setattr__(self, "dist", EntryDistribution(self.dist))
        if self.field not in FIELDS:
            raise ValueError(f"field must be one of {FIELDS}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


def _column(rng, N, s, dist, field):
    if field == "complex":
        re = dist.draw(rng, N)
        im = dist.draw(rng, N)
        x = (re + 1j * im) / np.sqrt(2.0)
    else:
        x = dist.draw(rng, N)
    return s * x / np.sqrt(N)


def sample_column(N: int, s: float, dist: EntryDistribution, seed, field: str = "real"):
    """The border vector: i.i.d. entries of variance s^2 scaled by 1/sqrt(N),
    so E||b||^2 = s^2.  ``seed`` is an integer (trial 0, role b) or a
    ready Generator."""
    if N < 1:
        raise ValueError("N must be at least 1")
    rng = seed if isinstance(seed, np.random.Generator) else stream(seed, 0, ROLE_B)
    return _column(rng, N, s, dist, field)


def sample_wigner_hermitian(N: int, s: float, dist: EntryDistribution, seed, field: str = "real"):
    """Symmetric (or Hermitian) Wigner matrix, entries of variance s^2/N.

    Real case: i.i.d. upper triangle including the diagonal, mirrored
    exactly.  Complex case: off-diagonal entries have independent real
    and imaginary parts of variance s^2/2 each; the diagonal is real
    with variance s^2.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    rng = seed if isinstance(seed, np.random.Generator) else stream(seed, 0, ROLE_C)
    scale = s / np.sqrt(N)
    if field == "complex":
        re = dist.draw(rng, (N, N))
        im = dist.draw(rng, (N, N))
        upper = np.triu((re + 1j * im) / np.sqrt(2.0), k=1)
        diag = np.diag(dist.draw(rng, N))
        M = upper + upper.conj().T + diag
    else:
        raw = dist.draw(rng, (N, N))
        upper = np.triu(raw)
        M = upper + np.triu(raw, k=1).T
    return scale * M


def sample_diagonal_poly(N: int, seed) -> np.ndarray:
    """Diagonal matrix of i.i.d. entries with density 3 t^2 / 2 on [-1, 1].

    Inverse-CDF sampling: the CDF is (1 + t^3)/2, so cbrt of a uniform
    variable on [-1, 1] has the right law.
    """
    if N < 1:
        raise ValueError("N must be at least 1")
    rng = seed if isinstance(seed, np.random.Generator) else stream(seed, 0, ROLE_C)
    u = rng.uniform(-1.0, 1.0, N)
    return np.diag(np.cbrt(u))


def sample_signed_wigner(spec: EnsembleSpec, trial: int = 0) -> BlockHSelfAdjoint:
    """One draw of the sign-flipped Wigner model.

    A symmetric i.i.d. matrix [x_ij] (i, j = 0..N) is scaled by
    1/sqrt(N) and its row 0 negated, which is exactly the H-selfadjoint
    block with a = -x_00/sqrt(N), b = [x_j0]/sqrt(N) and C the lower
    Wigner block.  The sign convention for a is recorded in run
    manifests; entry laws here are symmetric, so results do not depend
    on it.
    """
    if spec.model != "signed_wigner":
        raise ValueError(f"spec has model {spec.model!r}, expected 'signed_wigner'")
    N, s, dist = spec.N, spec.s, spec.dist
    x00 = float(dist.draw(stream(spec.seed, trial, ROLE_A), 1)[0])
    a = -s * x00 / np.sqrt(N)
    b = _column(stream(spec.seed, trial, ROLE_B), N, s, dist, spec.field)
    C = sample_wigner_hermitian(N, s, dist, stream(spec.seed, trial, ROLE_C), spec.field)
    return BlockHSelfAdjoint(a, b, C)


def build_generic(a_sampler, b_spec, C_sampler, *, seed: int, trial: int = 0) -> BlockHSelfAdjoint:
    """Assemble a block from independent per-role streams.

    ``a_sampler``: callable rng -> float (or a constant).
    ``b_spec``: explicit vector, or tuple (N, s, dist[, field]) for an
    i.i.d. column, or callable rng -> vector.
    ``C_sampler``: callable rng -> Hermitian matrix (or a constant
    matrix).
    """
    a = a_sampler(stream(seed, trial, ROLE_A)) if callable(a_sampler) else float(a_sampler)
    if callable(b_spec):
        b = b_spec(stream(seed, trial, ROLE_B))
    elif isinstance(b_spec, tuple):
        N, s, dist = b_spec[0], b_spec[1], b_spec[2]
        field = b_spec[3] if len(b_spec) > 3 else "real"
        b = _column(stream(seed, trial, ROLE_B), N, s, dist, field)
    else:
        b = np.asarray(b_spec)
    C = C_sampler(stream(seed, trial, ROLE_C)) if callable(C_sampler) else np.asarray(C_sampler)
    return BlockHSelfAdjoint(a, b, C)


def draw_block(spec: EnsembleSpec, trial: int = 0) -> BlockHSelfAdjoint:
    """Draw the trial-th block of the spec's model."""
    if spec.model == "signed_wigner":
        return sample_signed_wigner(spec, trial)
    if spec.model == "diagonal_poly":
        return build_generic(
            0.0,
            (spec.N, spec.s, spec.dist, spec.field),
            lambda rng: sample_diagonal_poly(spec.N, rng),
            seed=spec.seed,
            trial=trial,
        )
    # generic: same limits as signed_wigner but with the three blocks on
    # disjoint streams; a = dist/sqrt(N) vanishes in probability
    return build_generic(
        lambda rng: float(spec.s * spec.dist.draw(rng, 1)[0] / np.sqrt(spec.N)),
        (spec.N, spec.s, spec.dist, spec.field),
        lambda rng: sample_wigner_hermitian(spec.N, spec.s, spec.dist, rng, spec.field),
        seed=spec.seed,
        trial=trial,
    )


def limit_n1_function(spec: EnsembleSpec):
    """The deterministic limit function -z + s^2 m0(z) of the model."""
    from .nevanlinna import N1Function, PolyCubicMeasure, SemicircleMeasure

    s2 = spec.s * spec.s
    if spec.model in ("signed_wigner", "generic"):
        return N1Function(0.0, s2, SemicircleMeasure(spec.s))
    return N1Function(0.0, s2, PolyCubicMeasure())


def spec_to_json(spec: EnsembleSpec) -> str:
    return json.dumps(
        {
            "model": spec.model,
            "N": spec.N,
            "s": spec.s,
            "dist": spec.dist.kind,
            "field": spec.field,
            "seed": int(spec.seed),
        }
    )


def spec_from_json(text) -> EnsembleSpec:
    """Parse an EnsembleSpec from JSON text or a parsed dict; unknown
    fields are an error."""
    doc = json.loads(text) if isinstance(text, str) else dict(text)
    if not isinstance(doc, dict):
        raise ValueError("ensemble spec must be a JSON object")
    allowed = {"model", "N", "s", "dist", "field", "seed"}
    extra = set(doc) - allowed
    if extra:
        raise ValueError(f"unknown ensemble spec fields: {sorted(extra)}")
    missing = {"model", "N", "s", "dist", "seed"} - set(doc)
    if missing:
        raise ValueError(f"ensemble spec missing fields: {sorted(missing)}")
    return EnsembleSpec(
        model=doc["model"],
        N=int(doc["N"]),
        s=float(doc["s"]),
        dist=EntryDistribution(doc["dist"]),
        field=doc.get("field", "real"),
        seed=int(doc["seed"]),
    )


def with_size(spec: EnsembleSpec, N: int) -> EnsembleSpec:
    """Same recipe at a different matrix size."""
    return replace(spec, N=N)
