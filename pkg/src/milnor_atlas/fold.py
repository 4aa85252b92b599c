"""Fold classification at singular points of the pair phase map.

At a point p that is singular for (f/|f|, g/|g|), the function

    theta = Re( -i (log g - s log f) ) = arg g - s arg f

has a critical point on the fiber F = {arg f = arg f(p)} inside the
sphere.  Its Hessian there, expressed in a real basis V of the tangent
space {v : Re<v, p> = Re<v, v_f(p)> = 0}, is the real symmetric matrix

    M = Re(tV Hzz V) + Re(tV Hzb conj(V)) + Re(t(conj V) Hbz V)
      + Re(t(conj V) Hbb conj(V))

built from the four Wirtinger Hessian blocks of -i (log g - s log f).
p is a fold point exactly when M is nonsingular.  Only derivatives of
log enter (quotients F'/F), so no branch of log is ever chosen.

The verdict is cross-checkable against ``oracle.restricted_arg_hessian_fd``,
which estimates the same Hessian from polynomial values alone; rank and
eigenvalues (for orthonormal V, up to the FD noise floor) must agree.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .criteria import (
    DependenceReport,
    MfpmPair,
    SpherePoint,
    mfpm_singular_polar,
    phi_f_singular,
    realify,
    unrealify,
    v_field,
)
from .errors import DependentFrameError, HypothesisError, InputError, KZeroError
from .mixedpoly import MixedPolynomial, evaluate, wirtinger
from .randgen import poly_scale, random_sphere_point, rng_for

EIG_REL_TOL = 1e-6
FRAME_TOL = 1e-8
# FD fiber Hessians carry corrector noise amplified by 1/step^2 (~1e-4
# absolute), so the oracle-side verdict uses a much coarser band.
ORACLE_EIG_REL_TOL = 1e-3


class FoldVerdict(enum.Enum):
    FOLD = "Fold"
    DEGENERATE_SINGULAR = "DegenerateSingular"
    NOT_SINGULAR = "NotSingular"


@dataclass(frozen=True, eq=False)
class TangentBasis:
    """Orthonormal real basis of {v : Re<v,p> = Re<v,vf> = 0} as complex columns."""

    columns: np.ndarray  # (n, 2n-2) complex; combine with REAL coefficients
    anchor: np.ndarray
    vf: np.ndarray

    @property
    def dim(self) -> int:
        return self.columns.shape[1]


def tangent_basis(p, vf, rng: np.random.Generator | None = None) -> TangentBasis:
    """Build the fiber tangent basis at p.

    Raises DependentFrameError when realify(p) and realify(vf) fail to span
    a 2-plane, i.e. when p is singular for the single phase map f/|f|.
    """
    p = np.asarray(getattr(p, "p", p), dtype=complex)
    vf = np.asarray(vf, dtype=complex)
    if p.shape != vf.shape or p.ndim != 1:
        raise InputError("p and vf must be complex vectors of equal length")
    pn = float(np.linalg.norm(p))
    vn = float(np.linalg.norm(vf))
    if pn == 0.0 or vn == 0.0:
        raise DependentFrameError("p or v_f vanishes; no fiber tangent frame exists")
    cols = np.column_stack([realify(p) / pn, realify(vf) / vn])
    u, sig, _ = np.linalg.svd(cols, full_matrices=True)
    if sig[1] <= FRAME_TOL * max(float(sig[0]), 1.0):
        raise DependentFrameError(
            "realifications of p and v_f are numerically dependent"
        )
    frame = u[:, 2:]
    if rng is not None and frame.shape[1] > 0:
        q, r = np.linalg.qr(rng.standard_normal((frame.shape[1], frame.shape[1])))
        frame = frame @ (q * np.sign(np.diag(r)))
    columns = np.zeros((len(p), frame.shape[1]), dtype=complex)
    for k in range(frame.shape[1]):
        columns[:, k] = unrealify(frame[:, k])
    columns.setflags(write=False)
    return TangentBasis(columns, p, vf)


def log_hessian_blocks(
    F: MixedPolynomial, p
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """The four n x n Wirtinger Hessian blocks of log F at p:
    (zz, z zbar, zbar z, zbar zbar), each entry (F F_jk - F_j F_k) / F^2."""
    p = np.asarray(getattr(p, "p", p), dtype=complex)
    n = F.n
    val = evaluate(F, p)
    if abs(val) <= 1e-12 * poly_scale(F, float(np.linalg.norm(p))):
        raise KZeroError("log-Hessian requested on the zero set")
    first = {
        (j, bar): evaluate(wirtinger(F, j + 1, bar), p) / val
        for j in range(n)
        for bar in (False, True)
    }
    blocks = []
    for bar_a in (False, True):
        for bar_b in (False, True):
            block = np.empty((n, n), dtype=complex)
            for j in range(n):
                dj = wirtinger(F, j + 1, bar_a)
                for k in range(n):
                    second = evaluate(wirtinger(dj, k + 1, bar_b), p) / val
                    block[j, k] = second - first[(j, bar_a)] * first[(k, bar_b)]
            blocks.append(block)
    return tuple(blocks)


def hessian_blocks(
    pair: MfpmPair, p
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Wirtinger Hessian blocks of -i (log g - s log f) at p."""
    if not pair.has_polar:
        raise HypothesisError("missing-polar-weights", "hessian_blocks needs the ratio s")
    s = float(pair.s)
    lf = log_hessian_blocks(pair.f, p)
    lg = log_hessian_blocks(pair.g, p)
    return tuple(-1j * (bg - s * bf) for bg, bf in zip(lg, lf))


def assemble_M(blocks, V) -> tuple[np.ndarray, float]:
    """The real matrix M for basis V, symmetrized; returns (M, asymmetry).

    V may be a TangentBasis or a raw complex (n, m) array; real-linear in V
    on both sides, so M(V A) = tA M(V) A for real A.
    """
    cols = V.columns if isinstance(V, TangentBasis) else np.asarray(V, dtype=complex)
    hzz, hzb, hbz, hbb = blocks
    if hzz.shape != (cols.shape[0], cols.shape[0]):
        raise InputError("block dimensions do not match the basis")
    cb = np.conj(cols)
    raw = (
        (cols.T @ hzz @ cols).real
        + (cols.T @ hzb @ cb).real
        + (cb.T @ hbz @ cols).real
        + (cb.T @ hbb @ cb).real
    )
    norm = float(np.linalg.norm(raw))
    asym = float(np.linalg.norm(raw - raw.T)) / max(norm, 1.0)
    return 0.5 * (raw + raw.T), asym


@dataclass(frozen=True, eq=False)
class FoldReport:
    """Classification of one point for the pair phase map."""

    verdict: FoldVerdict
    singular: DependenceReport
    M: np.ndarray | None
    eigenvalues: tuple[float, ...]
    min_abs_eigenvalue: float | None
    threshold: float | None
    asymmetry: float | None
    goodness: str
    notes: tuple[str, ...]
    oracle_agreement: bool | None = None
    oracle_detail: dict | None = None

    def as_dict(self) -> dict:
        out = {
            "verdict": self.verdict.value,
            "singular_test": self.singular.as_dict(),
            "eigenvalues": list(self.eigenvalues),
            "min_abs_eigenvalue": self.min_abs_eigenvalue,
            "threshold": self.threshold,
            "asymmetry": self.asymmetry,
            "goodness": self.goodness,
            "notes": list(self.notes),
        }
        if self.M is not None:
            out["M"] = [[float(x) for x in row] for row in self.M]
        if self.oracle_agreement is not None:
            out["oracle_agreement"] = self.oracle_agreement
        if self.oracle_detail is not None:
            out["oracle_detail"] = self.oracle_detail
        return out


def _fd_hessian_verdict(pair: MfpmPair, p) -> tuple[FoldVerdict, dict]:
    from .oracle import restricted_arg_hessian_fd

    hess = restricted_arg_hessian_fd(pair.f, pair.g, float(pair.s), p)
    if hess.shape[0] == 0:
        return FoldVerdict.FOLD, {"eigenvalues": [], "threshold": None}
    eig = np.sort(np.linalg.eigvalsh(hess))
    threshold = ORACLE_EIG_REL_TOL * max(1.0, float(np.max(np.abs(eig))))
    verdict = (
        FoldVerdict.FOLD
        if float(np.min(np.abs(eig))) > threshold
        else FoldVerdict.DEGENERATE_SINGULAR
    )
    return verdict, {
        "eigenvalues": [float(e) for e in eig],
        "threshold": threshold,
        "verdict": verdict.value,
    }


def classify_fold(
    pair: MfpmPair,
    p,
    tol: float = EIG_REL_TOL,
    rank_tol: float = 1e-8,
    oracle: bool = False,
    goodness: str = "unverified",
    rng: np.random.Generator | None = None,
) -> FoldReport:
    """Classify p as Fold / DegenerateSingular / NotSingular for the pair map.

    Hypothesis failures (missing weights, p on a zero set, p singular for
    f/|f|) raise HypothesisError subclasses; they are never encoded as
    verdicts.  `goodness` is a caller-provided flag stamped into the report
    ("unverified" or "witnessed-regular"); this function does not sample.
    """
    singular = mfpm_singular_polar(pair, p, tol=rank_tol)
    notes: list[str] = []
    if singular.indeterminate:
        notes.append("singularity verdict is near its threshold")

    if not singular.dependent:
        report = FoldReport(
            FoldVerdict.NOT_SINGULAR, singular, None, (), None, None, None,
            goodness, tuple(notes),
        )
        if oracle:
            from .oracle import singular_for_pair_fd

            fd = singular_for_pair_fd(pair.f, pair.g, p)
            agree = fd.rank == 2
            report = FoldReport(
                FoldVerdict.NOT_SINGULAR, singular, None, (), None, None, None,
                goodness, tuple(notes), agree, fd.as_dict(),
            )
        return report

    basis = tangent_basis(p, v_field(pair.f, p), rng=rng)
    M, asym = assemble_M(hessian_blocks(pair, p), basis)
    if basis.dim == 0:
        notes.append("one-variable case: the fiber is zero-dimensional and M is 0x0, vacuously regular")
        verdict = FoldVerdict.FOLD
        eig: tuple[float, ...] = ()
        min_abs = None
        threshold = None
    else:
        eigvals = np.sort(np.linalg.eigvalsh(M))
        eig = tuple(float(e) for e in eigvals)
        threshold = tol * max(1.0, float(np.max(np.abs(eigvals))))
        min_abs = float(np.min(np.abs(eigvals)))
        verdict = FoldVerdict.FOLD if min_abs > threshold else FoldVerdict.DEGENERATE_SINGULAR
        if min_abs != 0.0 and threshold / 10 <= min_abs <= threshold * 10:
            notes.append("fold verdict is near its eigenvalue threshold")

    agree = None
    detail = None
    if oracle:
        try:
            fd_verdict, detail = _fd_hessian_verdict(pair, p)
            agree = fd_verdict == verdict
        except Exception as exc:  # oracle failure is reported, not raised
            detail = {"error": f"{type(exc).__name__}: {exc}"}
            agree = None
    return FoldReport(
        verdict, singular, M, eig, min_abs, threshold, asym,
        goodness, tuple(notes), agree, detail,
    )


def goodness_witness(
    f: MixedPolynomial,
    seed: int = 0,
    radii: tuple[float, ...] = (1.0, 0.5, 0.25),
    per_radius: int = 24,
) -> np.ndarray | None:
    """Sample for a singular point of f/|f| (off the zero set) at several radii.

    Returns a witness point if one is found (f is then NOT good), else None
    (inconclusive: report goodness as "witnessed-regular", never "proven").
    """
    scale_rel = 1e-6
    for ri, radius in enumerate(radii):
        rng = rng_for(seed, 4201, ri)
        found = 0
        while found < per_radius:
            p = random_sphere_point(rng, f.n, radius)
            if abs(evaluate(f, p)) <= scale_rel * poly_scale(f, radius):
                continue
            found += 1
            try:
                rep = phi_f_singular(f, p)
            except KZeroError:
                continue
            if rep.dependent and not rep.indeterminate:
                return p
    return None
