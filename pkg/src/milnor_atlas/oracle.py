"""Finite-difference oracles for cross-checking the symbolic criteria.

Everything here works from polynomial *values* only: derivatives of the
phase maps are estimated by central differences of arg along curves on the
sphere, and the restricted phase Hessian is estimated on numerically
corrected fiber points.  No Wirtinger derivatives and none of the
criteria-module machinery enter these computations, so agreement between
the two routes is meaningful evidence.

Charts:

* ``SphereChart``  - orthonormal tangent frame at p on the sphere, with a
  projective retraction; phase-map Jacobians are estimated in this chart.
* ``FiberChart``   - chart of {q on the sphere : arg f(q) = arg f(p)} near
  p, built by a Newton corrector on the two constraints (radius, phase).

Rank decisions use ``rank_with_gap``.  The rank tolerance matches the
symbolic dependence tolerance (1e-8): central differences at step 1e-5
put the noise floor near 1e-10 relative, two orders below the cut, and
aligning the two decision boundaries is what makes verdict agreement a
well-posed property (with mismatched cuts the verdicts differ whenever
the true smallest singular value lands between them, even at zero
measurement error).  Verdicts near the threshold are flagged by a small
spectral gap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import CorrectorError, DependentFrameError, InputError, KZeroError, StencilError
from .mixedpoly import MixedPolynomial, evaluate
from .randgen import poly_scale

FD_STEP = 1e-5
HESS_STEP = 1e-4
FD_RANK_TOL = 1e-8  # matches the symbolic dependence tolerance; noise floor ~1e-10
STENCIL_VALUE_REL = 1e-10
CORRECTOR_TARGET = 1e-13
CORRECTOR_ACCEPT = 1e-10
GAP_SUSPECT = 10.0
GRAD_ZERO_TOL = 1e-7


def _realify(v: np.ndarray) -> np.ndarray:
    out = np.empty(2 * len(v))
    out[0::2] = v.real
    out[1::2] = v.imag
    return out


def _unrealify(x: np.ndarray) -> np.ndarray:
    return x[0::2] + 1j * x[1::2]


def _checked_value(f: MixedPolynomial, q: np.ndarray, scale: float) -> complex:
    val = evaluate(f, q)
    if abs(val) <= STENCIL_VALUE_REL * scale:
        raise StencilError(
            f"stencil point too close to a zero set (|value| = {abs(val):.3g})"
        )
    return val


@dataclass(frozen=True, eq=False)
class SphereChart:
    """Orthonormal frame for the tangent space of the sphere at p."""

    p: np.ndarray
    radius: float
    frame: np.ndarray  # (2n, 2n-1), columns orthonormal, orthogonal to p

    @classmethod
    def at(cls, p, radius: float | None = None, rng: np.random.Generator | None = None) -> "SphereChart":
        p = np.asarray(p, dtype=complex)
        norm = float(np.linalg.norm(p))
        if norm == 0.0:
            raise InputError("chart base point must be nonzero")
        if radius is None:
            radius = norm
        p = p * (radius / norm)
        pr = _realify(p) / radius
        u, _, _ = np.linalg.svd(pr.reshape(-1, 1), full_matrices=True)
        frame = u[:, 1:]
        # svd orients the first left-singular vector along +-pr; fix the sign
        if np.dot(u[:, 0], pr) < 0:
            frame = -frame
        if rng is not None:
            q, r = np.linalg.qr(rng.standard_normal((frame.shape[1], frame.shape[1])))
            frame = frame @ (q * np.sign(np.diag(r)))
        frame.setflags(write=False)
        p.setflags(write=False)
        return cls(p, float(radius), frame)

    @property
    def dim(self) -> int:
        return self.frame.shape[1]

    def embed(self, x: Sequence[float]) -> np.ndarray:
        """Map chart coordinates to the sphere: retract p + sum x_i u_i."""
        x = np.asarray(x, dtype=float)
        q = self.p + _unrealify(self.frame @ x)
        return q * (self.radius / np.linalg.norm(q))


def jacobian_fd(
    polys: Sequence[MixedPolynomial],
    p,
    step: float = FD_STEP,
    chart: SphereChart | None = None,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Jacobian of (arg h for h in polys) in a sphere chart at p, by central
    differences: one row per polynomial, 2n-1 columns."""
    if chart is None:
        chart = SphereChart.at(p, rng=rng)
    scales = [poly_scale(h, chart.radius) for h in polys]
    jac = np.empty((len(polys), chart.dim))
    for i in range(chart.dim):
        e = np.zeros(chart.dim)
        e[i] = step
        qp = chart.embed(e)
        qm = chart.embed(-e)
        for k, (h, sc) in enumerate(zip(polys, scales)):
            ratio = _checked_value(h, qp, sc) / _checked_value(h, qm, sc)
            jac[k, i] = float(np.angle(ratio)) / (2 * step)
    return jac


@dataclass(frozen=True)
class RankReport:
    """Numerical rank with the spectral gap that justifies it."""

    rank: int
    gap: float
    sigma: tuple[float, ...]
    tol_used: float

    @property
    def ill_conditioned(self) -> bool:
        return self.gap < GAP_SUSPECT

    def as_dict(self) -> dict:
        return {
            "rank": self.rank,
            "gap": self.gap if np.isfinite(self.gap) else None,
            "sigma": list(self.sigma),
            "tol_used": self.tol_used,
            "ill_conditioned": self.ill_conditioned,
        }


def rank_with_gap(matrix: np.ndarray, tol: float = FD_RANK_TOL) -> RankReport:
    matrix = np.asarray(matrix, dtype=float)
    if matrix.size == 0:
        return RankReport(0, float("inf"), (), tol)
    sigma = np.linalg.svd(matrix, compute_uv=False)
    threshold = tol * max(float(sigma[0]), 1.0)
    rank = int(np.sum(sigma > threshold))
    if rank < len(sigma):
        denom = float(sigma[rank])
        gap = float(sigma[rank - 1]) / denom if rank > 0 and denom > 0 else float("inf")
    else:
        gap = float("inf")
    return RankReport(rank, gap, tuple(float(s) for s in sigma), tol)


def singular_for_pair_fd(
    f: MixedPolynomial,
    g: MixedPolynomial,
    p,
    step: float = FD_STEP,
    tol: float = FD_RANK_TOL,
) -> RankReport:
    """FD verdict: p is singular for (f/|f|, g/|g|) iff the returned rank <= 1."""
    return rank_with_gap(jacobian_fd([f, g], p, step=step), tol=tol)


def singular_for_phase_fd(
    f: MixedPolynomial, p, step: float = FD_STEP, tol: float = FD_RANK_TOL
) -> RankReport:
    """FD verdict: p is singular for f/|f| iff the returned rank == 0."""
    return rank_with_gap(jacobian_fd([f], p, step=step), tol=tol)


# ------------------------------------------------------------ fiber -------

class FiberChart:
    """Chart of the phase fiber {q on S : arg f(q) = arg f(p0)} near p0.

    Coordinates live in the orthogonal complement of the radial direction
    and the finite-difference gradient of arg f at p0 (2n - 2 dimensions).
    ``point`` maps coordinates to an actual fiber point by Newton
    correction of the phase constraint along the measured gradient, with
    step halving (factor 0.5, at most 4 halvings) when a full step fails
    to reduce the residual.
    """

    def __init__(
        self,
        f: MixedPolynomial,
        g: MixedPolynomial,
        s: float,
        p0,
        rng: np.random.Generator | None = None,
        grad_step: float = 1e-6,
    ):
        p0 = np.asarray(p0, dtype=complex)
        if p0.shape != (f.n,) or g.n != f.n:
            raise InputError("point and polynomials must agree on the variable count")
        self.f = f
        self.g = g
        self.s = float(s)
        self.radius = float(np.linalg.norm(p0))
        self.p0 = p0 * 1.0
        self.grad_step = grad_step
        self.scale_f = poly_scale(f, self.radius)
        self.scale_g = poly_scale(g, self.radius)
        self.f0 = evaluate(f, p0)
        self.g0 = evaluate(g, p0)
        if abs(self.f0) <= 1e-12 * self.scale_f or abs(self.g0) <= 1e-12 * self.scale_g:
            raise KZeroError("fiber chart base point lies on a zero set")
        pr = _realify(p0) / self.radius
        grad = self._arg_grad(p0)
        gnorm = float(np.linalg.norm(grad))
        # FD noise on the arg gradient is ~1e-9 absolute; anything below this
        # floor is indistinguishable from a vanishing gradient
        if gnorm <= GRAD_ZERO_TOL:
            raise DependentFrameError("arg f has no measurable gradient at the base point")
        cols = np.column_stack([pr, grad / gnorm])
        u, sig, _ = np.linalg.svd(cols, full_matrices=True)
        if sig[1] <= 1e-8 * max(sig[0], 1.0):
            raise DependentFrameError(
                "radial direction and the gradient of arg f are dependent at the base point"
            )
        frame = u[:, 2:]
        if rng is not None:
            q, r = np.linalg.qr(rng.standard_normal((frame.shape[1], frame.shape[1])))
            frame = frame @ (q * np.sign(np.diag(r)))
        self.frame = frame

    @property
    def dim(self) -> int:
        return self.frame.shape[1]

    def _retract(self, q: np.ndarray) -> np.ndarray:
        return q * (self.radius / np.linalg.norm(q))

    def _arg_grad(self, q: np.ndarray) -> np.ndarray:
        """FD gradient of arg f in ambient real coordinates."""
        h = self.grad_step
        qr = _realify(q)
        out = np.empty(len(qr))
        for i in range(len(qr)):
            e = np.zeros(len(qr))
            e[i] = h
            vp = _checked_value(self.f, _unrealify(qr + e), self.scale_f)
            vm = _checked_value(self.f, _unrealify(qr - e), self.scale_f)
            out[i] = float(np.angle(vp / vm)) / (2 * h)
        return out

    def _phase_residual(self, q: np.ndarray) -> float:
        return float(np.angle(_checked_value(self.f, q, self.scale_f) / self.f0))

    def point(self, x: Sequence[float]) -> np.ndarray:
        """Fiber point with the given chart coordinates."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise InputError(f"coordinates must have shape ({self.dim},)")
        q = self._retract(self.p0 + _unrealify(self.frame @ x))
        resid = self._phase_residual(q)
        for _ in range(10):
            if abs(resid) <= CORRECTOR_TARGET:
                break
            grad = self._arg_grad(q)
            qr = _realify(q) / self.radius
            grad = grad - np.dot(grad, qr) * qr
            gnorm2 = float(np.dot(grad, grad))
            if gnorm2 <= GRAD_ZERO_TOL**2:
                raise CorrectorError("phase gradient vanished during correction")
            full = -resid / gnorm2 * grad
            scale = 1.0
            for _ in range(5):
                trial = self._retract(q + _unrealify(scale * full))
                trial_resid = self._phase_residual(trial)
                if abs(trial_resid) < abs(resid) or abs(trial_resid) <= CORRECTOR_TARGET:
                    break
                scale *= 0.5
            q, resid = trial, trial_resid
        if abs(resid) > CORRECTOR_ACCEPT:
            raise CorrectorError(
                f"fiber correction stalled at residual {abs(resid):.3g}"
            )
        return q

    def value(self, x: Sequence[float]) -> float:
        """arg g - s * arg f at the fiber point for x, relative to the base point."""
        q = self.point(x)
        dg = float(np.angle(_checked_value(self.g, q, self.scale_g) / self.g0))
        df = float(np.angle(_checked_value(self.f, q, self.scale_f) / self.f0))
        return dg - self.s * df


def central_hessian(fn, m: int, step: float) -> np.ndarray:
    """Symmetric central-difference Hessian of fn: R^m -> R at the origin."""
    hess = np.empty((m, m))
    f0 = fn(np.zeros(m))
    for i in range(m):
        ei = np.zeros(m)
        ei[i] = step
        hess[i, i] = (fn(ei) - 2 * f0 + fn(-ei)) / step**2
        for j in range(i + 1, m):
            ej = np.zeros(m)
            ej[j] = step
            val = (fn(ei + ej) - fn(ei - ej) - fn(-ei + ej) + fn(-ei - ej)) / (
                4 * step**2
            )
            hess[i, j] = val
            hess[j, i] = val
    return 0.5 * (hess + hess.T)


def restricted_arg_hessian_fd(
    f: MixedPolynomial,
    g: MixedPolynomial,
    s: float,
    p,
    step: float = HESS_STEP,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Hessian of arg g - s * arg f restricted to the phase fiber of f at p,
    estimated by central differences in a FiberChart.  (2n-2) x (2n-2)."""
    chart = FiberChart(f, g, s, p, rng=rng)
    return central_hessian(chart.value, chart.dim, step)
