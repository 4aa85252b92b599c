"""Singularity criteria for sphere maps of mixed polynomial pairs.

For a mixed polynomial h with h(p) != 0 the log-derivative field

    v_h(p)_j = i * ( conj( (dh/dzj)(p) / h(p) ) - (dh/d~zj)(p) / h(p) )

controls the phase map p -> h(p)/|h(p)|: the derivative of arg h along a
sphere curve through p with velocity v is Re<v, v_h(p)>, with the Hermitian
pairing <a, b> = sum_j a_j * conj(b_j).

The criteria implemented here:

* ``phi_f_singular``   - p is singular for f/|f| iff {p, v_f(p)} is
  R-linearly dependent.
* ``mfpm_singular_general`` - p is singular for (f/|f|, g/|g|) iff
  {p, v_f(p), v_g(p)} is R-linearly dependent.
* ``mfpm_singular_polar`` - for a proportional polar-homogeneous pair the
  same condition reduces to C-linear dependence of {v_f(p), v_g(p)}; at
  singular points v_g(p) = s * v_f(p) with the exact rational ratio s.

Dependence is decided by singular values of the (realified) column matrix
with normalized columns, so verdicts are scale-free; each report carries
the singular values, the tolerance used, and a near-threshold flag.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import HypothesisError, InputError, KZeroError, NotProportionalError
from .mixedpoly import (
    MixedPolynomial,
    WeightKind,
    WeightType,
    evaluate,
    wirtinger,
)
from ._exactlin import kernel_basis, primitive
from .randgen import poly_scale

RANK_TOL = 1e-8
# |h(p)| must clear 1e-12 times an upper bound for |h| on the sphere.
K_VALUE_REL = 1e-12
# Norm ratio below which a computed field is treated as exactly zero
# (pure cancellation); relative to the magnitudes entering the difference.
CANCEL_REL = 1e-13
SPHERE_PROJECT_REL = 1e-6
SPHERE_NORM_REL = 1e-12


@dataclass(frozen=True, eq=False)
class SpherePoint:
    """A point constrained to the sphere of the given radius."""

    p: np.ndarray
    radius: float

    def __post_init__(self) -> None:
        p = np.asarray(self.p, dtype=complex)
        if p.ndim != 1 or len(p) < 1:
            raise InputError("point must be a nonempty complex vector")
        if not self.radius > 0:
            raise InputError("radius must be positive")
        norm = float(np.linalg.norm(p))
        if abs(norm - self.radius) > SPHERE_PROJECT_REL * self.radius:
            raise InputError(
                f"point norm {norm:.6g} is too far from radius {self.radius:.6g} to project"
            )
        p = p * (self.radius / norm)
        p.setflags(write=False)
        object.__setattr__(self, "p", p)

    @property
    def n(self) -> int:
        return len(self.p)

    def as_dict(self) -> dict:
        return {"point": [[z.real, z.imag] for z in self.p], "radius": self.radius}


def _as_array(p) -> np.ndarray:
    if isinstance(p, SpherePoint):
        return p.p
    return np.asarray(p, dtype=complex)


def realify(v: Sequence[complex]) -> np.ndarray:
    """Interleave (Re v1, Im v1, Re v2, ...); dot of realifications is Re<u, v>."""
    v = np.asarray(v, dtype=complex)
    out = np.empty(2 * len(v))
    out[0::2] = v.real
    out[1::2] = v.imag
    return out


def unrealify(x: Sequence[float]) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x[0::2] + 1j * x[1::2]


@functools.lru_cache(maxsize=1024)
def _derivative_rows(h: MixedPolynomial) -> tuple[tuple[MixedPolynomial, ...], tuple[MixedPolynomial, ...]]:
    dz = tuple(wirtinger(h, j + 1, False) for j in range(h.n))
    dbz = tuple(wirtinger(h, j + 1, True) for j in range(h.n))
    return dz, dbz


def _v_field_with_ref(h: MixedPolynomial, p) -> tuple[np.ndarray, float]:
    """v_h(p) together with the magnitude of the terms entering the difference."""
    p = _as_array(p)
    if p.shape != (h.n,):
        raise InputError(f"point has shape {p.shape}, expected ({h.n},)")
    hv = evaluate(h, p)
    scale = poly_scale(h, float(np.linalg.norm(p)))
    if abs(hv) <= K_VALUE_REL * scale:
        raise KZeroError(f"|h(p)| = {abs(hv):.3g} is within {K_VALUE_REL:g} * {scale:.3g} of the zero set")
    dz, dbz = _derivative_rows(h)
    a = np.array([evaluate(d, p) for d in dz]) / hv
    b = np.array([evaluate(d, p) for d in dbz]) / hv
    v = 1j * (np.conj(a) - b)
    ref = float(np.sum(np.abs(a)) + np.sum(np.abs(b)))
    return v, ref


def v_field(h: MixedPolynomial, p) -> np.ndarray:
    """The field v_h at p. Raises KZeroError when p is numerically on h = 0."""
    return _v_field_with_ref(h, p)[0]


@dataclass(frozen=True)
class DependenceReport:
    """Outcome of a numerical linear-dependence test.

    ``dependent`` holds iff the smallest singular value is at most
    ``tol_used * max(sigma_1, 1)``.  ``indeterminate`` flags results within
    a factor 10 of that threshold, where the verdict deserves suspicion.
    ``vg_minus_svf`` is the residual ||v_g - s v_f|| for the polar test.
    """

    sigma: tuple[float, ...]
    dependent: bool
    tol_used: float
    indeterminate: bool
    vg_minus_svf: float | None = None

    def as_dict(self) -> dict:
        out = {
            "sigma": list(self.sigma),
            "dependent": self.dependent,
            "tol_used": self.tol_used,
            "indeterminate": self.indeterminate,
        }
        if self.vg_minus_svf is not None:
            out["vg_minus_svf"] = self.vg_minus_svf
        return out


def _normalized_column(v: np.ndarray, ref: float) -> np.ndarray:
    """Unit column, or the zero column when the vector is pure cancellation noise."""
    norm = float(np.linalg.norm(v))
    if norm <= CANCEL_REL * max(ref, 1e-300):
        return np.zeros_like(v)
    return v / norm

def _dependence(columns: list[np.ndarray], tol: float, residual: float | None = None) -> DependenceReport:
    matrix = np.column_stack(columns)
    sigma = list(np.linalg.svd(matrix, compute_uv=False))
    # more columns than ambient dimensions: dependence is automatic
    sigma += [0.0] * (len(columns) - len(sigma))
    s1 = float(sigma[0])
    last = float(sigma[-1])
    threshold = tol * max(s1, 1.0)
    ratio = last / max(s1, 1.0)
    return DependenceReport(
        sigma=tuple(float(s) for s in sigma),
        dependent=last <= threshold,
        tol_used=tol,
        indeterminate=tol / 10.0 <= ratio <= tol * 10.0,
        vg_minus_svf=residual,
    )


def phi_f_singular(f: MixedPolynomial, p, tol: float = RANK_TOL) -> DependenceReport:
    """Is p a singular point of the phase map f/|f| on its sphere?"""
    p_arr = _as_array(p)
    v, ref = _v_field_with_ref(f, p_arr)
    cols = [
        realify(p_arr) / float(np.linalg.norm(p_arr)),
        _normalized_column(realify(v), ref),
    ]
    return _dependence(cols, tol)


# ------------------------------------------------------------------ pairs --

@dataclass(frozen=True)
class MfpmPair:
    """A pair (f, g) with optional proportional polar weight data.

    When weights are present: both are polar types with nonzero degrees,
    w_f is strictly positive or strictly negative, and the proportionality
    d_g * w_f = s * d_f * w_g holds exactly for the rational s stored here.
    """

    f: MixedPolynomial
    g: MixedPolynomial
    wf: WeightType | None = None
    wg: WeightType | None = None
    s: Fraction | None = None

    def __post_init__(self) -> None:
        if self.f.n != self.g.n:
            raise InputError("f and g must share the variable count")
        present = (self.wf is not None, self.wg is not None, self.s is not None)
        if any(present) and not all(present):
            raise InputError("wf, wg, s must be given together")
        if self.wf is not None:
            if compute_s(self.wf, self.wg) != self.s:
                raise NotProportionalError("stored s does not match the weight data")

    @property
    def n(self) -> int:
        return self.f.n

    @property
    def has_polar(self) -> bool:
        return self.s is not None

    @classmethod
    def build(cls, f: MixedPolynomial, g: MixedPolynomial, wf: WeightType | None = None, wg: WeightType | None = None) -> "MfpmPair":
        if (wf is None) != (wg is None):
            raise InputError("give both weight types or neither")
        if wf is None:
            return cls(f, g)
        return cls(f, g, wf, wg, compute_s(wf, wg))

    @classmethod
    def detect(cls, f: MixedPolynomial, g: MixedPolynomial) -> "MfpmPair":
        """Build the pair, attaching a common polar weight vector when one exists."""
        found = detect_common_polar(f, g)
        if found is None:
            return cls(f, g)
        wf, wg, _ = found
        return cls.build(f, g, wf, wg)


def compute_s(wf: WeightType, wg: WeightType) -> Fraction:
    """Exact rational s with d_g * w_f = s * d_f * w_g componentwise.

    Requires polar kinds, nonzero degrees, and strictly signed w_f.
    """
    if wf.kind is not WeightKind.POLAR or wg.kind is not WeightKind.POLAR:
        raise InputError("compute_s needs polar weight types")
    if len(wf.w) != len(wg.w):
        raise InputError("weight lengths differ")
    if wf.d == 0 or wg.d == 0:
        raise HypothesisError("zero-degree", "polar degrees must be nonzero")
    if not wf.strictly_signed:
        raise HypothesisError("weight-sign-mixed", "w_f must be strictly positive or strictly negative")
    s: Fraction | None = None
    for a, b in zip(wf.w, wg.w):
        if b == 0:
            if wg.d * a != 0:
                raise NotProportionalError("w_g vanishes where w_f does not")
            continue
        cand = Fraction(wg.d * a, wf.d * b)
        if s is None:
            s = cand
        elif s != cand:
            raise NotProportionalError(f"component ratios differ: {s} vs {cand}")
    if s is None:
        raise NotProportionalError("w_g is the zero vector")
    return s


def detect_common_polar(
    f: MixedPolynomial, g: MixedPolynomial
) -> tuple[WeightType, WeightType, Fraction] | None:
    """Find one strictly signed integer w making both f and g polar homogeneous
    with nonzero degrees.  Deterministic; None when no such weight exists in
    the searched combination range."""
    if f.is_zero or g.is_zero:
        return None
    n = f.n
    rows = []
    for poly in (f, g):
        exps = [tuple(a - b for a, b in zip(t.nu, t.mu)) for t in poly.terms]
        base = exps[0]
        rows.extend(tuple(e[j] - base[j] for j in range(n)) for e in exps[1:])
    rows = [r for r in rows if any(r)]
    gens = kernel_basis(rows, n)
    if not gens:
        return None

    f_base = tuple(a - b for a, b in zip(f.terms[0].nu, f.terms[0].mu))
    g_base = tuple(a - b for a, b in zip(g.terms[0].nu, g.terms[0].mu))

    best: tuple | None = None
    coeff_range = range(-3, 4)
    import itertools

    for combo in itertools.product(coeff_range, repeat=len(gens)):
        if all(c == 0 for c in combo):
            continue
        w = tuple(sum(c * gen[j] for c, gen in zip(combo, gens)) for j in range(n))
        if all(x > 0 for x in w):
            pass
        elif all(x < 0 for x in w):
            w = tuple(-x for x in w)
        else:
            continue
        w = primitive(w)
        df = sum(wj * ej for wj, ej in zip(w, f_base))
        dg = sum(wj * ej for wj, ej in zip(w, g_base))
        if df == 0 or dg == 0:
            continue
        key = (max(w), w)
        if best is None or key < best[0]:
            best = (key, w, df, dg)
    if best is None:
        return None
    _, w, df, dg = best
    wf = WeightType(w, df, WeightKind.POLAR)
    wg = WeightType(w, dg, WeightKind.POLAR)
    return wf, wg, compute_s(wf, wg)


def mfpm_singular_general(pair: MfpmPair, p, tol: float = RANK_TOL) -> DependenceReport:
    """R-dependence test for {p, v_f(p), v_g(p)}: singular iff dependent."""
    p_arr = _as_array(p)
    vf, rf = _v_field_with_ref(pair.f, p_arr)
    vg, rg = _v_field_with_ref(pair.g, p_arr)
    cols = [
        realify(p_arr) / float(np.linalg.norm(p_arr)),
        _normalized_column(realify(vf), rf),
        _normalized_column(realify(vg), rg),
    ]
    return _dependence(cols, tol)


def mfpm_singular_polar(pair: MfpmPair, p, tol: float = RANK_TOL) -> DependenceReport:
    """C-dependence test for {v_f(p), v_g(p)} (valid for proportional polar pairs).

    Also reports ||v_g(p) - s * v_f(p)||, which vanishes at singular points.
    """
    if not pair.has_polar:
        raise HypothesisError("missing-polar-weights", "pair carries no polar weight data")
    p_arr = _as_array(p)
    vf, rf = _v_field_with_ref(pair.f, p_arr)
    vg, rg = _v_field_with_ref(pair.g, p_arr)
    residual = float(np.linalg.norm(vg - float(pair.s) * vf))
    cols = [_normalized_column(vf, rf), _normalized_column(vg, rg)]
    return _dependence(cols, tol, residual=residual)


def torus_flow(wt: WeightType, t: float, p) -> np.ndarray:
    """Circle-action flow z_j -> z_j * exp(i * w_j * t / d) for the polar type."""
    if wt.kind is not WeightKind.POLAR:
        raise InputError("torus_flow needs a polar weight type")
    if wt.d == 0:
        raise HypothesisError("zero-degree", "torus flow undefined for degree 0")
    p_arr = _as_array(p)
    if len(p_arr) != len(wt.w):
        raise InputError("weight length does not match the point")
    return p_arr * np.exp(1j * np.array(wt.w, dtype=float) * (t / wt.d))


def flow_velocity(wt: WeightType, p) -> np.ndarray:
    """d/dt of torus_flow at t = 0: (i w_j / d) * p_j."""
    p_arr = _as_array(p)
    return 1j * np.array(wt.w, dtype=float) / wt.d * p_arr
