"""Measures, Stieltjes transforms, and functions with one negative square.

The central object is Q(z) = a - z + s2 * m(z) where m is the Stieltjes
transform of a finite positive measure.  Such a Q is holomorphic on the
open upper half plane, its Nevanlinna kernel has exactly one negative
square, and it possesses a unique *generalized zero of nonpositive type*
(GZNT): either an interior zero in C+, or a real point x0 where the
nontangential limit of Q(z)/(z - x0) lies in (-inf, 0].

Two independent locators are provided: `gznt_newton` works analytically
on any measure kind (Newton ladder, then gap bisection, then a boundary
scan), while `gznt_discrete` routes a discrete measure through the
companion block matrix and the spectral classifier.  Their agreement is
a standing cross-check of the whole package.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .dense_spectra import hermitian_eig
from .indefinite_core import BlockHSelfAdjoint, nonpositive_type_eigenvalue

__all__ = [
    "DiscreteMeasure",
    "SemicircleMeasure",
    "PolyCubicMeasure",
    "CustomDensityMeasure",
    "AbsContMeasure",
    "Measure",
    "N1Function",
    "Gznt",
    "GzntSearchError",
    "stieltjes",
    "stieltjes_derivative",
    "q_eval",
    "q_deriv",
    "q_scale",
    "spectral_measure_of_pair",
    "esd",
    "gznt_discrete",
    "gznt_newton",
    "real_gznt_limit",
    "negative_squares",
    "measure_to_json",
    "measure_from_json",
]

TAU_IM = 1e-8      # minimum Im z0 to call a zero interior
TAU_NEG = 1e-8     # nonpositivity threshold for real GZNT limits
WEIGHT_DROP = 1e-14
DEFAULT_QUAD_ORDER = 256


class GzntSearchError(RuntimeError):
    """All search phases failed to locate the generalized zero."""


# ---------------------------------------------------------------------------
# measures


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite sum of point masses: positive weights at real atoms."""

    atoms: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        atoms = np.asarray(self.atoms, dtype=float).ravel()
        weights = np.asarray(self.weights, dtype=float).ravel()
        if atoms.shape != weights.shape:
            raise ValueError("atoms and weights must have the same length")
        if not np.all(np.isfinite(atoms)):
            raise ValueError("atoms must be finite")
        if atoms.size and not np.all(weights > 0):
            raise ValueError("weights must be strictly positive")
        order = np.argsort(atoms, kind="stable")
        object.__setattr__(self, "atoms", atoms[order])
        object.__setattr__(self, "weights", weights[order])

    @property
    def mass(self) -> float:
        return float(np.sum(self.weights))

    @property
    def support_radius(self) -> float:
        return float(np.max(np.abs(self.atoms))) if self.atoms.size else 0.0

    def _reject_on_support(self, z: complex):
        if self.atoms.size == 0:
            return
        tol = 1e-13 * (1.0 + self.support_radius + abs(z))
        if np.min(np.abs(self.atoms - z)) <= tol:
            raise ValueError(f"z = {z} coincides with an atom of the measure")

    def transform(self, z: complex) -> complex:
        self._reject_on_support(z)
        if self.atoms.size == 0:
            return 0j
        return complex(np.sum(self.weights / (self.atoms - z)))

    def transform_derivative(self, z: complex) -> complex:
        self._reject_on_support(z)
        if self.atoms.size == 0:
            return 0j
        return complex(np.sum(self.weights / (self.atoms - z) ** 2))


@dataclass(frozen=True)
class SemicircleMeasure:
    """Semicircle law of scale s: density sqrt(4 s^2 - t^2) / (2 pi s^2)."""

    s: float

    def __post_init__(self):
        if not self.s > 0:
            raise ValueError("semicircle scale s must be positive")
        object.__setattr__(self, "s", float(self.s))

    mass = property(lambda self: 1.0)

    @property
    def support_radius(self) -> float:
        return 2.0 * self.s

    @property
    def interval(self):
        return (-2.0 * self.s, 2.0 * self.s)

    def _reject_on_support(self, z: complex):
        _reject_real_in_interval(z, self.interval)

    def transform(self, z: complex) -> complex:
        # sqrt(z - 2s) * sqrt(z + 2s) with principal roots stays Herglotz
        # on C+ and makes the transform ~ -1/z at infinity; sqrt(z*z - 4s*s)
        # would pick the wrong sheet on half the plane.
        self._reject_on_support(z)
        z = complex(z)
        s = self.s
        root = np.sqrt(z - 2 * s) * np.sqrt(z + 2 * s)
        return (-z + root) / (2 * s * s)

    def transform_derivative(self, z: complex) -> complex:
        self._reject_on_support(z)
        z = complex(z)
        s = self.s
        root = np.sqrt(z - 2 * s) * np.sqrt(z + 2 * s)
        return (-1.0 + z / root) / (2 * s * s)


@dataclass(frozen=True)
class PolyCubicMeasure:
    """The density 3 t^2 / 2 on [-1, 1]; vanishes quadratically at 0."""

    mass = property(lambda self: 1.0)
    support_radius = property(lambda self: 1.0)
    interval = property(lambda self: (-1.0, 1.0))

    def _reject_on_support(self, z: complex):
        _reject_real_in_interval(z, self.interval)

    def transform(self, z: complex) -> complex:
        # closed form of int 1.5 t^2 / (t - z) dt over [-1, 1]; the Moebius
        # map (z-1)/(z+1) keeps C+ in C+, so the principal log is safe
        self._reject_on_support(z)
        z = complex(z)
        return 3.0 * z + 1.5 * z * z * np.log((z - 1.0) / (z + 1.0))

    def transform_derivative(self, z: complex) -> complex:
        self._reject_on_support(z)
        z = complex(z)
        return 3.0 + 3.0 * z * np.log((z - 1.0) / (z + 1.0)) + 3.0 * z * z / (z * z - 1.0)


@dataclass(frozen=True)
class CustomDensityMeasure:
    """Arbitrary nonnegative density on a compact interval, integrated by
    Gauss-Legendre quadrature (panel-adaptive near the support)."""

    density: Callable[[np.ndarray], np.ndarray]
    support: tuple
    quadrature_order: int = DEFAULT_QUAD_ORDER

    def __post_init__(self):
        lo, hi = float(self.support[0]), float(self.support[1])
        if not lo < hi:
            raise ValueError("support must be a nondegenerate interval (lo, hi)")
        object.__setattr__(self, "support", (lo, hi))
        if self.quadrature_order < 2:
            raise ValueError("quadrature order must be at least 2")

    @functools.cached_property
    def mass(self) -> float:
        lo, hi = self.support
        return float(np.real(_gl_panel(lambda t: self.density(t) + 0j, lo, hi, self.quadrature_order)))

    @property
    def support_radius(self) -> float:
        lo, hi = self.support
        return max(abs(lo), abs(hi))

    @property
    def interval(self):
        return self.support

    def _reject_on_support(self, z: complex):
        _reject_real_in_interval(z, self.support)

    def _integrate(self, f) -> complex:
        lo, hi = self.support
        return _gl_adaptive(f, lo, hi, self.quadrature_order)

    def transform(self, z: complex) -> complex:
        self._reject_on_support(z)
        z = complex(z)
        if _interval_distance(z, self.support) >= 0.1:
            lo, hi = self.support
            return _gl_panel(lambda t: self.density(t) / (t - z), lo, hi, self.quadrature_order)
        return self._integrate(lambda t: self.density(t) / (t - z))

    def transform_derivative(self, z: complex) -> complex:
        self._reject_on_support(z)
        z = complex(z)
        if _interval_distance(z, self.support) >= 0.1:
            lo, hi = self.support
            return _gl_panel(lambda t: self.density(t) / (t - z) ** 2, lo, hi, self.quadrature_order)
        return self._integrate(lambda t: self.density(t) / (t - z) ** 2)


AbsContMeasure = Union[SemicircleMeasure, PolyCubicMeasure, CustomDensityMeasure]
Measure = Union[DiscreteMeasure, AbsContMeasure]


def _reject_real_in_interval(z, interval):
    z = complex(z)
    lo, hi = interval
    if z.imag == 0.0 and lo <= z.real <= hi:
        raise ValueError(f"z = {z.real} lies on the support [{lo}, {hi}]")


def _interval_distance(z, interval):
    z = complex(z)
    lo, hi = interval
    dx = max(lo - z.real, 0.0, z.real - hi)
    return float(np.hypot(dx, z.imag))


@functools.lru_cache(maxsize=32)
def _leggauss(order):
    return np.polynomial.legendre.leggauss(order)


def _gl_panel(f, lo, hi, order) -> complex:
    x, w = _leggauss(order)
    t = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
    return complex(0.5 * (hi - lo) * np.sum(w * f(t)))


def _gl_adaptive(f, lo, hi, order, rtol=1e-12, depth=14) -> complex:
    whole = _gl_panel(f, lo, hi, order)
    return _gl_refine(f, lo, hi, order, whole, rtol, depth)


def _gl_refine(f, lo, hi, order, whole, rtol, depth) -> complex:
    mid = 0.5 * (lo + hi)
    left = _gl_panel(f, lo, mid, order)
    right = _gl_panel(f, mid, hi, order)
    if depth <= 0 or abs(left + right - whole) <= rtol * (1.0 + abs(left + right)):
        return left + right
    return _gl_refine(f, lo, mid, order, left, rtol, depth - 1) + _gl_refine(
        f, mid, hi, order, right, rtol, depth - 1
    )


# ---------------------------------------------------------------------------
# transforms and the function Q


def stieltjes(measure: Measure, z: complex) -> complex:
    """Stieltjes transform int (t - z)^{-1} dmu(t).

    Exact sum for discrete measures, closed forms for the semicircle and
    cubic-polynomial laws, quadrature otherwise.  Maps C+ into the closed
    upper half plane.  Rejects z on the support.
    """
    return measure.transform(z)


def stieltjes_derivative(measure: Measure, z: complex) -> complex:
    """d/dz of the Stieltjes transform: int (t - z)^{-2} dmu(t)."""
    return measure.transform_derivative(z)


@dataclass(frozen=True)
class N1Function:
    """Q(z) = a - z + s2 * m(z) for a finite positive measure.

    ``s2`` is a positive prefactor on the transform; matrix-derived Q
    uses s2 = 1 with the weights carrying the data, while limit functions
    keep the variance explicit.
    """

    a: float
    s2: float
    measure: Measure

    def __post_init__(self):
        if not self.s2 > 0:
            raise ValueError("s2 must be positive")
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "s2", float(self.s2))


def q_eval(Q: N1Function, z: complex) -> complex:
    """Evaluate Q(z) = a - z + s2 * m(z)."""
    return Q.a - complex(z) + Q.s2 * stieltjes(Q.measure, z)


def q_deriv(Q: N1Function, z: complex) -> complex:
    """Evaluate Q'(z) = -1 + s2 * m'(z)."""
    return -1.0 + Q.s2 * stieltjes_derivative(Q.measure, z)


def q_scale(Q: N1Function) -> float:
    """Characteristic magnitude 1 + |a| + mass + support radius."""
    return 1.0 + abs(Q.a) + Q.s2 * Q.measure.mass + Q.measure.support_radius


# ---------------------------------------------------------------------------
# measures from matrices


def spectral_measure_of_pair(b, C) -> DiscreteMeasure:
    """Measure with atoms at the eigenvalues of C and weights |(U b)_j|^2.

    Its transform equals b*(C - z)^{-1} b.  Weights below
    1e-14 * ||b||^2 are dropped.
    """
    b = np.atleast_1d(np.asarray(b))
    C = np.asarray(C)
    if C.size == 0:
        C = C.reshape(0, 0)
    if b.ndim != 1 or C.shape[0] != b.shape[0]:
        raise ValueError("b must be a vector matching the order of C")
    res = hermitian_eig(C)
    d = res.basis @ b
    weights = np.abs(d) ** 2
    floor = WEIGHT_DROP * float(np.sum(np.abs(b) ** 2))
    keep = weights > floor
    return DiscreteMeasure(res.eigenvalues[keep], weights[keep])


def esd(C) -> DiscreteMeasure:
    """Empirical spectral distribution: weight 1/N at each eigenvalue of C."""
    C = np.asarray(C)
    if C.size == 0:
        return DiscreteMeasure(np.zeros(0), np.zeros(0))
    res = hermitian_eig(C)
    n = res.eigenvalues.shape[0]
    return DiscreteMeasure(res.eigenvalues, np.full(n, 1.0 / n))


# ---------------------------------------------------------------------------
# the generalized zero of nonpositive type


@dataclass(frozen=True)
class Gznt:
    """Location of the generalized zero: interior point of C+ or a real
    point with the (nonpositive) nontangential limit of Q(z)/(z - x0)."""

    point: complex
    kind: str
    limit_value: float | None = None

    def __post_init__(self):
        if self.kind not in ("interior", "real"):
            raise ValueError(f"unknown GZNT kind {self.kind!r}")
        point = complex(self.point)
        if self.kind == "interior" and not point.imag > 0:
            raise ValueError("interior GZNT must have positive imaginary part")
        if self.kind == "real":
            if point.imag != 0:
                raise ValueError("real GZNT must lie on the real axis")
            if self.limit_value is None:
                raise ValueError("real GZNT carries its nontangential limit value")
        object.__setattr__(self, "point", point)


def gznt_discrete(Q: N1Function) -> Gznt:
    """Locate the GZNT of a discrete-measure Q through its companion matrix.

    The block (a, b, C) with C = diag(atoms) and b_j = sqrt(s2 * w_j) has
    Q as its characteristic transform, so the nonpositive-type eigenvalue
    of the block *is* the GZNT.  Independent of `gznt_newton`.
    """
    mu = Q.measure
    if not isinstance(mu, DiscreteMeasure):
        raise TypeError("gznt_discrete requires a DiscreteMeasure")
    m = BlockHSelfAdjoint(Q.a, np.sqrt(Q.s2 * mu.weights), np.diag(mu.atoms))
    case = nonpositive_type_eigenvalue(m)
    if case.label == "Case1":
        return Gznt(case.beta, "interior", None)
    x0 = case.beta.real
    near_atom = mu.atoms.size and np.min(np.abs(mu.atoms - x0)) <= 1e-7 * q_scale(Q)
    if near_atom:
        limit = real_gznt_limit(Q, x0)
    else:
        limit = float(np.real(q_deriv(Q, x0)))
    return Gznt(x0, "real", limit)


def real_gznt_limit(Q: N1Function, x0: float) -> float:
    """Nontangential limit of Q(z)/(z - x0) approached along x0 + i eta.

    Richardson-extrapolates the ratio over eta = 1e-2 ... 1e-6 and
    returns the real part.  Raises when the extrapolants do not settle
    (relative spread over 10%, with an absolute floor proportional to
    the scale of Q), which is the signature of x0 not being a zero.
    """
    x0 = float(x0)
    etas = [1e-2, 1e-3, 1e-4, 1e-5, 1e-6]
    ratios = [q_eval(Q, complex(x0, eta)) / complex(0.0, eta) for eta in etas]
    # ratio(eta) = L + c*eta + O(eta^2); successive etas shrink tenfold
    extrap = [(10.0 * ratios[k + 1] - ratios[k]) / 9.0 for k in range(len(ratios) - 1)]
    tail = extrap[-3:]
    spread = max(abs(u - v) for u in tail for v in tail)
    floor = 1e-3 * q_scale(Q)
    if spread > max(0.1 * abs(tail[-1]), floor):
        raise GzntSearchError(
            f"limit did not stabilize at x0 = {x0}: extrapolants {tail}"
        )
    return float(np.real(tail[-1]))


def gznt_newton(Q: N1Function) -> Gznt:
    """Locate the GZNT analytically, without any matrix companion.

    Phases, in order: (1) Newton iteration from a ladder of purely
    imaginary starts, accepting an interior zero; (2) validation of real
    Newton limits via Q' (off support) or the nontangential limit (on
    support); (3) bisection for sign changes of Q on every open interval
    off the support, accepting a zero with Q' <= 0; (4) a boundary scan
    of |Q(x + i eta)| over the support, refined around the minimizer and
    finished with the nontangential limit.
    """
    scale = q_scale(Q)
    tau_root = 1e-10 * (1.0 + scale)
    diagnostics = []

    roots = _newton_ladder(Q, scale, tau_root)
    interior = [z for z in roots if z.imag >= TAU_IM]
    if interior:
        best = min(interior, key=lambda z: abs(q_eval(Q, z)))
        return Gznt(best, "interior", None)

    for z in roots:
        x0 = z.real
        gz = _validate_real_candidate(Q, x0, scale, diagnostics)
        if gz is not None:
            return gz

    for x0 in _gap_zeros(Q, scale, tau_root):
        slope = float(np.real(q_deriv(Q, x0)))
        if slope <= TAU_NEG:
            return Gznt(x0, "real", slope)
        diagnostics.append(f"gap zero at {x0:.12g} has Q' = {slope:.3e} > 0")

    gz = _support_scan(Q, scale, diagnostics)
    if gz is not None:
        return gz

    raise GzntSearchError(
        "no generalized zero found; phases reported: " + "; ".join(diagnostics or ["nothing"])
    )


def _newton_ladder(Q, scale, tau_root):
    """Newton iteration z <- z - Q/Q' from starts i * 2^k * scale."""
    converged = []
    for k in range(-3, 4):
        z = complex(0.0, scale * 2.0**k)
        for _ in range(80):
            try:
                fz = q_eval(Q, z)
                dz = q_deriv(Q, z)
            except ValueError:
                break
            if dz == 0:
                break
            step = fz / dz
            z = z - step
            if abs(step) <= 1e-15 * (1.0 + abs(z)):
                break
        # multiple zeros converge only linearly and may exhaust the
        # budget while still honing in; acceptance below decides
        try:
            ok = abs(q_eval(Q, z)) <= tau_root
        except ValueError:
            # landed on the support: the boundary value decides
            z_probe = complex(z.real, max(z.imag, 1e-9 * scale))
            try:
                ok = abs(q_eval(Q, z_probe)) <= max(tau_root, 1e-8 * scale)
            except ValueError:
                ok = False
        if not ok:
            continue
        if z.imag < 0:
            z = np.conj(z)
        if not any(abs(z - r) <= 1e-8 * scale for r in converged):
            converged.append(complex(z))
    return converged


def _validate_real_candidate(Q, x0, scale, diagnostics):
    mu = Q.measure
    if isinstance(mu, DiscreteMeasure):
        off = mu.atoms.size == 0 or np.min(np.abs(mu.atoms - x0)) > 1e-7 * scale
    else:
        off = _interval_distance(complex(x0), mu.interval) > 1e-7 * scale
    if off:
        slope = float(np.real(q_deriv(Q, x0)))
        if slope <= TAU_NEG:
            return Gznt(x0, "real", slope)
        diagnostics.append(f"newton limit {x0:.12g} rejected: Q' = {slope:.3e}")
        return None
    try:
        limit = real_gznt_limit(Q, x0)
    except GzntSearchError as exc:
        diagnostics.append(str(exc))
        return None
    if limit <= TAU_NEG:
        return Gznt(x0, "real", limit)
    diagnostics.append(f"newton limit {x0:.12g} rejected: boundary limit {limit:.3e}")
    return None


def _gap_zeros(Q, scale, tau_root):
    """All real zeros of Q on open intervals off the support, by bisection."""
    zeros = []
    for lo, hi in _support_gaps(Q.measure, scale):
        xs = _graded_grid(lo, hi)
        vals = []
        for x in xs:
            try:
                vals.append(float(np.real(q_eval(Q, x))))
            except ValueError:
                vals.append(np.nan)
        for i in range(len(xs) - 1):
            u, fu, v, fv = xs[i], vals[i], xs[i + 1], vals[i + 1]
            if np.isnan(fu) or np.isnan(fv) or (fu == 0.0 and fv == 0.0):
                continue
            if fu == 0.0:
                zeros.append(u)
                continue
            if fu * fv < 0.0:
                zeros.append(_bisect(lambda x: float(np.real(q_eval(Q, x))), u, v))
    deduped = []
    for x in sorted(zeros):
        if not deduped or x - deduped[-1] > 1e-10 * scale:
            deduped.append(x)
    return deduped


def _support_gaps(measure, scale):
    """Maximal open real intervals off the support, outer ones truncated
    at 2 * scale (any zero of Q lies within |a| + mass of the support)."""
    pad = 2.0 * scale
    if isinstance(measure, DiscreteMeasure):
        atoms = measure.atoms
        if atoms.size == 0:
            return [(-pad, pad)]
        gaps = [(atoms[0] - pad, atoms[0])]
        for i in range(atoms.size - 1):
            if atoms[i + 1] - atoms[i] > 1e-12 * (1.0 + scale):
                gaps.append((atoms[i], atoms[i + 1]))
        gaps.append((atoms[-1], atoms[-1] + pad))
        return gaps
    lo, hi = measure.interval
    return [(lo - pad, lo), (hi, hi + pad)]


def _graded_grid(lo, hi, interior=120):
    """Sample points dense near both endpoints, where Q blows up."""
    width = hi - lo
    offsets = np.geomspace(1e-12, 0.5, 40) * width
    xs = np.concatenate(
        [lo + offsets, hi - offsets, np.linspace(lo, hi, interior + 2)[1:-1]]
    )
    return np.unique(xs[(xs > lo) & (xs < hi)])


def _bisect(f, lo, hi, max_iter=200):
    flo = f(lo)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= 1e-15 * (1.0 + abs(mid)):
            return mid
        fmid = f(mid)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0.0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def _support_scan(Q, scale, diagnostics):
    """Grid scan of |Q(x + i eta)| over a continuous support, refined
    around the minimizer, finished by the nontangential limit test."""
    mu = Q.measure
    if isinstance(mu, DiscreteMeasure):
        return None  # atoms are poles, never zeros
    lo, hi = mu.interval
    eta = 1e-3
    window = (lo, hi)
    x_best = 0.5 * (lo + hi)
    for _ in range(4):
        xs = np.linspace(window[0], window[1], 161)
        vals = [abs(q_eval(Q, complex(x, eta))) for x in xs]
        k = int(np.argmin(vals))
        x_best = xs[k]
        half = (window[1] - window[0]) / 40.0
        window = (max(lo, x_best - half), min(hi, x_best + half))
    try:
        limit = real_gznt_limit(Q, x_best)
    except GzntSearchError as exc:
        diagnostics.append(str(exc))
        return None
    if limit <= TAU_NEG:
        return Gznt(x_best, "real", limit)
    diagnostics.append(f"support scan minimizer {x_best:.12g}: limit {limit:.3e} > 0")
    return None


# ---------------------------------------------------------------------------
# negative squares of the Nevanlinna kernel


def negative_squares(Q, points, tol: float = -1e-8) -> int:
    """Count negative eigenvalues of the kernel (Q(zi) - conj(Q(zj))) / (zi - conj(zj)).

    ``Q`` is an N1Function or any callable z -> Q(z) (the callable form
    admits diagnostic inputs such as a bare transform).  Eigenvalues
    below ``tol * max|N|`` are counted; the default slightly negative
    threshold keeps rounding-level and rank-deficiency zeros of a
    positive-semidefinite kernel out of the count.
    """
    pts = np.asarray([complex(z) for z in points])
    if pts.size == 0:
        raise ValueError("need at least one evaluation point")
    if np.any(pts.imag <= 0):
        raise ValueError("all kernel points must lie in the open upper half plane")
    if pts.size > 1:
        diffs = np.abs(pts[:, None] - pts[None, :])
        np.fill_diagonal(diffs, np.inf)
        if diffs.min() <= 1e-12 * (1.0 + np.max(np.abs(pts))):
            raise ValueError("kernel points must be pairwise distinct")
    fn = (lambda z: q_eval(Q, z)) if isinstance(Q, N1Function) else Q
    qv = np.asarray([fn(z) for z in pts])
    K = (qv[:, None] - np.conj(qv)[None, :]) / (pts[:, None] - np.conj(pts)[None, :])
    K = 0.5 * (K + K.conj().T)
    eigs = np.linalg.eigvalsh(K)
    bound = tol * float(np.max(np.abs(K))) if K.size else 0.0
    return int(np.sum(eigs <= bound))


# ---------------------------------------------------------------------------
# JSON round trip


def measure_to_json(measure: Measure) -> str:
    """Serialize a measure to its JSON document."""
    if isinstance(measure, DiscreteMeasure):
        doc = {
            "kind": "discrete",
            "atoms": measure.atoms.tolist(),
            "weights": measure.weights.tolist(),
        }
    elif isinstance(measure, SemicircleMeasure):
        doc = {"kind": "semicircle", "s": measure.s}
    elif isinstance(measure, PolyCubicMeasure):
        doc = {"kind": "poly_cubic"}
    else:
        raise TypeError(f"measure of type {type(measure).__name__} is not serializable")
    return json.dumps(doc)


def measure_from_json(text: str) -> Measure:
    """Parse a measure from its JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"invalid measure JSON: {exc}") from exc
    if not isinstance(doc, dict) or "kind" not in doc:
        raise ValueError("measure JSON must be an object with a 'kind' field")
    kind = doc["kind"]
    known = {
        "discrete": {"kind", "atoms", "weights"},
        "semicircle": {"kind", "s"},
        "poly_cubic": {"kind"},
    }
    if kind not in known:
        raise ValueError(f"unknown measure kind {kind!r}")
    extra = set(doc) - known[kind]
    if extra:
        raise ValueError(f"unknown fields for {kind!r} measure: {sorted(extra)}")
    if kind == "discrete":
        if "atoms" not in doc or "weights" not in doc:
            raise ValueError("discrete measure requires 'atoms' and 'weights'")
        return DiscreteMeasure(np.asarray(doc["atoms"]), np.asarray(doc["weights"]))
    if kind == "semicircle":
        if "s" not in doc:
            raise ValueError("semicircle measure requires 's'")
        return SemicircleMeasure(float(doc["s"]))
    return PolyCubicMeasure()
