"""Seeded Monte Carlo experiments over the matrix models.

Each experiment draws trials through the per-trial streams of
`ensembles`, so a report is a deterministic function of (spec, trial
count, master seed) no matter how many worker threads execute it.
Wall-clock timings are kept out of report payloads for the same reason;
they belong to run manifests.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import ensembles
from .dense_spectra import hermitian_eig
from .indefinite_core import (
    AmbiguousClassificationError,
    assemble,
    classify_with_spectrum,
)
from .nevanlinna import (
    DiscreteMeasure,
    GzntSearchError,
    N1Function,
    gznt_newton,
    stieltjes,
)

__all__ = [
    "ExperimentError",
    "TrialRecord",
    "ConvergenceReport",
    "KSReport",
    "InterlaceReport",
    "BQReport",
    "ContinuityReport",
    "run_trials",
    "convergence_in_probability",
    "interlacing_check",
    "aggregate_interlacing",
    "ks_distance",
    "resolvent_concentration",
    "continuity_probe",
    "semicircle_cdf",
    "poly_cubic_cdf",
    "limit_cdf",
]

# a continuous entry law makes classification ambiguity a numerical bug,
# not bad luck; more than this fraction of ambiguous trials fails a batch
AMBIGUOUS_TRIAL_BUDGET = 0.02


class ExperimentError(RuntimeError):
    """Batch-level failure of an experiment run."""


@dataclass(frozen=True)
class TrialRecord:
    """Raw outcome of one draw: the nonpositive-type eigenvalue, the real
    spectrum of X, and the spectrum of the lower block C."""

    spec: ensembles.EnsembleSpec
    trial: int
    beta: complex | None
    case: str | None
    multiplicity: int | None
    zeta: np.ndarray | None
    lam: np.ndarray | None
    scale: float
    elapsed: float
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass(frozen=True)
class ConvergenceReport:
    """Per-size fraction of trials with |beta_N - beta0| < eps."""

    sizes: tuple
    eps: float
    fraction_within: tuple
    beta0: complex
    trials: int
    failed: tuple = ()

    def to_dict(self):
        return {
            "kind": "convergence",
            "sizes": list(self.sizes),
            "eps": self.eps,
            "fraction_within": list(self.fraction_within),
            "beta0": [self.beta0.real, self.beta0.imag],
            "trials": self.trials,
            "failed": list(self.failed),
        }


@dataclass(frozen=True)
class KSReport:
    """Kolmogorov-Smirnov distance against a target distribution."""

    n_samples: int
    distance: float
    target: str

    def to_dict(self):
        return {
            "kind": "ks",
            "n_samples": self.n_samples,
            "distance": self.distance,
            "target": self.target,
        }


@dataclass(frozen=True)
class InterlaceReport:
    trials: int
    case1_count: int
    interlaced_count: int

    def __post_init__(self):
        if not self.interlaced_count <= self.case1_count <= self.trials:
            raise ValueError("interlaced_count <= case1_count <= trials violated")

    def to_dict(self):
        return {
            "kind": "interlace",
            "trials": self.trials,
            "case1_count": self.case1_count,
            "interlaced_count": self.interlaced_count,
        }


@dataclass(frozen=True)
class BQReport:
    """Concentration of the border form b*(C - z)^{-1} b around its limit."""

    z: complex
    target: complex
    sizes: tuple
    mean: tuple
    mean_abs_dev: tuple
    trials: int

    def to_dict(self):
        return {
            "kind": "bq",
            "z": [self.z.real, self.z.imag],
            "target": [self.target.real, self.target.imag],
            "sizes": list(self.sizes),
            "mean": [[m.real, m.imag] for m in self.mean],
            "mean_abs_dev": list(self.mean_abs_dev),
            "trials": self.trials,
        }


@dataclass(frozen=True)
class ContinuityReport:
    perturbation_scale: float
    trials: int
    base_point: complex
    max_displacement: float
    mean_displacement: float
    displacements: tuple = field(repr=False, default=())

    def to_dict(self):
        return {
            "kind": "continuity",
            "perturbation_scale": self.perturbation_scale,
            "trials": self.trials,
            "base_point": [self.base_point.real, self.base_point.imag],
            "max_displacement": self.max_displacement,
            "mean_displacement": self.mean_displacement,
        }


def _run_single(spec, trial) -> TrialRecord:
    t0 = time.perf_counter()
    m = ensembles.draw_block(spec, trial)
    lam = hermitian_eig(m.C).eigenvalues
    X = assemble(m)
    scale = float(np.max(np.abs(X)))
    try:
        case, zeta = classify_with_spectrum(m)
    except (AmbiguousClassificationError, GzntSearchError) as exc:
        return TrialRecord(
            spec, trial, None, None, None, None, lam, scale,
            time.perf_counter() - t0, error=str(exc),
        )
    excluded = 2 if case.label == "Case1" else case.multiplicity
    if excluded + len(zeta) != spec.N + 1 or lam.shape[0] != spec.N:
        raise ExperimentError(
            f"trial {trial}: spectrum bookkeeping broken "
            f"({excluded} + {len(zeta)} != {spec.N + 1})"
        )
    return TrialRecord(
        spec, trial, case.beta, case.label, case.multiplicity,
        zeta.zeta, lam, scale, time.perf_counter() - t0,
    )


def run_trials(spec, trials: int, threads: int = 1):
    """One TrialRecord per trial index, in trial order.

    Classification failures become per-record error markers instead of
    aborting the batch, but a batch with more than 2% ambiguous trials
    raises ExperimentError.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    indices = range(trials)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(lambda t: _run_single(spec, t), indices))
    else:
        records = [_run_single(spec, t) for t in indices]
    failed = sum(not r.ok for r in records)
    if failed > AMBIGUOUS_TRIAL_BUDGET * trials:
        raise ExperimentError(
            f"{failed}/{trials} trials failed classification; first error: "
            f"{next(r.error for r in records if not r.ok)}"
        )
    return records


def convergence_in_probability(spec, sizes, eps: float, trials: int, threads: int = 1):
    """Estimate P(|beta_N - beta0| < eps) over a ladder of sizes.

    beta0 is located by `gznt_newton` on the model's limit function.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    q0 = ensembles.limit_n1_function(spec)
    beta0 = gznt_newton(q0).point
    fractions = []
    failures = []
    for N in sizes:
        records = run_trials(ensembles.with_size(spec, N), trials, threads)
        ok = [r for r in records if r.ok]
        hits = sum(abs(r.beta - beta0) < eps for r in ok)
        fractions.append(hits / trials)
        failures.append(trials - len(ok))
    return ConvergenceReport(
        tuple(int(N) for N in sizes), float(eps), tuple(fractions),
        complex(beta0), trials, tuple(failures),
    )


def interlacing_check(record: TrialRecord) -> bool:
    """Strict interlacing lam_1 < zeta_2 < lam_2 < ... < zeta_N < lam_N.

    Only meaningful for Case 1 records (N - 1 real eigenvalues against
    the N eigenvalues of C); raises on anything else.  Strictness margin
    is 1e-12 times the block scale.
    """
    if record.case != "Case1":
        raise ValueError("interlacing is defined for Case1 records")
    lam, zeta = record.lam, record.zeta
    if zeta.shape[0] != lam.shape[0] - 1:
        raise ValueError(
            f"structural mismatch: {zeta.shape[0]} real eigenvalues "
            f"against {lam.shape[0]} block eigenvalues"
        )
    margin = 1e-12 * record.scale
    left_ok = np.all(zeta - lam[:-1] > margin)
    right_ok = np.all(lam[1:] - zeta > margin)
    return bool(left_ok and right_ok)


def aggregate_interlacing(records) -> InterlaceReport:
    """Count Case-1 records and how many of them interlace strictly."""
    case1 = [r for r in records if r.ok and r.case == "Case1"]
    interlaced = sum(interlacing_check(r) for r in case1)
    return InterlaceReport(len(records), len(case1), int(interlaced))


def ks_distance(samples, target_cdf, grid=None) -> float:
    """Two-sided sup distance between the empirical CDF and a target CDF.

    Evaluated at the sample points (both one-sided limits) and, when
    given, at an auxiliary grid.
    """
    samples = np.sort(np.asarray(samples, dtype=float).ravel())
    n = samples.shape[0]
    if n == 0:
        raise ValueError("need at least one sample")
    fvals = np.asarray(target_cdf(samples), dtype=float)
    upper = np.arange(1, n + 1) / n
    lower = np.arange(0, n) / n
    dist = float(max(np.max(np.abs(fvals - upper)), np.max(np.abs(fvals - lower))))
    if grid is not None:
        grid = np.asarray(grid, dtype=float).ravel()
        emp = np.searchsorted(samples, grid, side="right") / n
        dist = max(dist, float(np.max(np.abs(emp - np.asarray(target_cdf(grid), dtype=float)))))
    return dist


def resolvent_concentration(spec, z: complex, sizes, trials: int, threads: int = 1):
    """Mean and mean absolute deviation of b*(C - z)^{-1} b around its
    deterministic limit, per size; the deviation must shrink with N."""
    z = complex(z)
    if not z.imag > 0:
        raise ValueError("z must lie in the open upper half plane")
    q0 = ensembles.limit_n1_function(spec)
    target = complex(q0.s2 * stieltjes(q0.measure, z))

    def one(spec_n, t):
        m = ensembles.draw_block(spec_n, t)
        rhs = m.b.astype(complex)
        val = np.vdot(m.b, np.linalg.solve(m.C - z * np.eye(m.n), rhs))
        return complex(val)

    means, mads = [], []
    for N in sizes:
        spec_n = ensembles.with_size(spec, N)
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                vals = list(pool.map(lambda t: one(spec_n, t), range(trials)))
        else:
            vals = [one(spec_n, t) for t in range(trials)]
        vals = np.asarray(vals)
        means.append(complex(np.mean(vals)))
        mads.append(float(np.mean(np.abs(vals - target))))
    return BQReport(
        z, target, tuple(int(N) for N in sizes), tuple(means), tuple(mads), trials
    )


def continuity_probe(mu: DiscreteMeasure, a: float, perturbation_scale: float,
                     trials: int = 100, seed: int = 0) -> ContinuityReport:
    """Displacement of the generalized zero under small perturbations of
    (weights, a), total l1 size bounded by perturbation_scale."""
    if perturbation_scale < 0:
        raise ValueError("perturbation_scale must be nonnegative")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    base = gznt_newton(N1Function(a, 1.0, mu)).point
    n = mu.weights.shape[0]
    displacements = []
    for k in range(trials):
        rng = ensembles.stream(seed, k, ensembles.ROLE_FULL)
        raw = rng.uniform(-1.0, 1.0, n + 1)
        l1 = float(np.sum(np.abs(raw)))
        delta = raw * (perturbation_scale / l1) if l1 > 0 else raw * 0.0
        # keep weights strictly positive; shrinking a component only
        # reduces the l1 size of the perturbation
        w = np.maximum(mu.weights + delta[:n], 0.5 * mu.weights)
        moved = gznt_newton(N1Function(a + delta[n], 1.0, DiscreteMeasure(mu.atoms, w)))
        displacements.append(abs(moved.point - base))
    displacements = np.asarray(displacements)
    return ContinuityReport(
        float(perturbation_scale),
        trials,
        complex(base),
        float(np.max(displacements)),
        float(np.mean(displacements)),
        tuple(float(d) for d in displacements),
    )


# ---------------------------------------------------------------------------
# limit distribution functions


def semicircle_cdf(s: float = 1.0):
    """CDF of the semicircle law on [-2s, 2s]."""

    def cdf(x):
        x = np.asarray(x, dtype=float)
        t = np.clip(x / (2.0 * s), -1.0, 1.0)
        return 0.5 + (t * np.sqrt(1.0 - t * t) + np.arcsin(t)) / np.pi

    return cdf


def poly_cubic_cdf():
    """CDF (1 + t^3)/2 of the density 3 t^2 / 2 on [-1, 1]."""

    def cdf(x):
        t = np.clip(np.asarray(x, dtype=float), -1.0, 1.0)
        return 0.5 * (1.0 + t**3)

    return cdf


def limit_cdf(spec):
    """The limit CDF of the block spectrum for the given model."""
    if spec.model in ("signed_wigner", "generic"):
        return semicircle_cdf(spec.s), f"semicircle(s={spec.s})"
    return poly_cubic_cdf(), "poly_cubic"
