"""Multi-start search for singular points of the pair phase map on a sphere.

The search descends the smallest singular value of the dependence matrix
(the quantity whose vanishing characterizes singularity) with a simplex
method over sphere charts, re-centering the chart as the iterate moves.
For proportional polar pairs the cheaper two-column complex objective
drives the descent and the general three-column objective gates
acceptance, exploiting the proven equivalence of the two criteria.

Accepted minima are re-verified twice before being reported: by the
symbolic dependence test and by the finite-difference Jacobian rank
oracle.  For polar pairs the points are then rotated to a canonical
position on their torus orbit (largest-modulus coordinate made real
positive) and merged within the dedup distance, so a whole singular
circle collapses to one reported representative.

Starts are independent work units on per-start random streams derived
from (seed, index); results are merged in index order, so the output is
identical no matter how many worker threads run (MILNOR_ATLAS_THREADS
caps the pool).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .criteria import (
    DependenceReport,
    MfpmPair,
    mfpm_singular_general,
    mfpm_singular_polar,
    torus_flow,
)
from .errors import HypothesisError, InputError, KZeroError, NumericalError
from .fold import FoldReport, classify_fold
from .mixedpoly import evaluate
from .optimize import nelder_mead
from .oracle import RankReport, SphereChart, singular_for_pair_fd
from .randgen import poly_scale, random_sphere_point, rng_for

BARRIER_REL = 1e-6
VERIFY_SIGMA_TOL = 1e-8
SCALE_SCHEDULE = (0.4, 0.03, 3e-3, 1e-4, 1e-6, 1e-8, 1e-10)


@dataclass(frozen=True)
class SearchConfig:
    starts: int = 32
    max_iters: int = 200
    tol_singular: float = 1e-10
    dedup_distance: float = 1e-4
    seed: int = 0

    def __post_init__(self) -> None:
        if self.starts < 1 or self.max_iters < 1:
            raise InputError("starts and max_iters must be positive")
        if not 0 < self.tol_singular < self.dedup_distance:
            raise InputError("need 0 < tol_singular < dedup_distance")

    def as_dict(self) -> dict:
        return {
            "starts": self.starts,
            "max_iters": self.max_iters,
            "tol_singular": self.tol_singular,
            "dedup_distance": self.dedup_distance,
            "seed": self.seed,
        }


def _barrier_clear(pair: MfpmPair, p: np.ndarray, radius: float) -> bool:
    return abs(evaluate(pair.f, p)) > BARRIER_REL * poly_scale(pair.f, radius) and abs(
        evaluate(pair.g, p)
    ) > BARRIER_REL * poly_scale(pair.g, radius)


def objective_general(pair: MfpmPair, p) -> float:
    """Smallest singular value of the realified [p | v_f | v_g] matrix;
    zero exactly on the singular set, +inf inside the zero-set barrier."""
    p = np.asarray(p, dtype=complex)
    if not _barrier_clear(pair, p, float(np.linalg.norm(p))):
        return float("inf")
    try:
        return mfpm_singular_general(pair, p).sigma[-1]
    except KZeroError:
        return float("inf")


def _objective_polar(pair: MfpmPair, p) -> float:
    p = np.asarray(p, dtype=complex)
    if not _barrier_clear(pair, p, float(np.linalg.norm(p))):
        return float("inf")
    try:
        return mfpm_singular_polar(pair, p).sigma[-1]
    except KZeroError:
        return float("inf")


def orbit_representative(pair: MfpmPair, p: np.ndarray) -> np.ndarray:
    """Canonical point on the torus orbit of p (identity for non-polar pairs):
    flow until the largest-modulus coordinate is real positive."""
    if not pair.has_polar:
        return p
    j = int(np.argmax(np.abs(p)))  # ties resolve to the lowest index
    phase = float(np.angle(p[j]))
    t = -phase * pair.wf.d / pair.wf.w[j]
    rep = torus_flow(pair.wf, t, p)
    rep[j] = abs(rep[j])  # remove residual phase noise
    return rep


def _descend_one(
    pair: MfpmPair, radius: float, config: SearchConfig, start_index: int
) -> tuple[str, tuple[np.ndarray, float] | None]:
    """One start: returns ("no-start" | "miss" | "hit", payload)."""
    rng = rng_for(config.seed, 23, start_index)
    descent = _objective_polar if pair.has_polar else objective_general

    p = None
    for _ in range(60):
        cand = random_sphere_point(rng, pair.n, radius)
        if _barrier_clear(pair, cand, radius):
            p = cand
            break
    if p is None:
        return "no-start", None

    obj = descent(pair, p)
    if not np.isfinite(obj):
        return "no-start", None
    stalled = 0
    for scale in SCALE_SCHEDULE:
        chart = SphereChart.at(p, radius=radius)
        res = nelder_mead(
            lambda x: descent(pair, chart.embed(x)),
            np.zeros(chart.dim),
            scale=scale,
            max_iter=config.max_iters,
        )
        improved = res.fx < 0.9 * obj
        if res.fx < obj:
            p, obj = chart.embed(res.x), res.fx
        if obj <= config.tol_singular * 1e-2:
            break
        stalled = 0 if improved else stalled + 1
        if stalled >= 2 and obj > 1e3 * config.tol_singular:
            return "miss", None
    final = objective_general(pair, p)
    if final <= config.tol_singular:
        return "hit", (p, final)
    return "miss", None


@dataclass(frozen=True, eq=False)
class FoundPoint:
    """One reported singular-locus representative (one torus orbit for polar pairs)."""

    point: np.ndarray
    objective: float
    orbit: int
    members: int
    general: DependenceReport
    fd_rank: RankReport
    verdict: FoldReport | None

    def as_dict(self) -> dict:
        out = {
            "point": [[z.real, z.imag] for z in self.point],
            "objective": self.objective,
            "orbit": self.orbit,
            "members": self.members,
            "general_test": self.general.as_dict(),
            "fd_jacobian": self.fd_rank.as_dict(),
        }
        if self.verdict is not None:
            out["fold"] = self.verdict.as_dict()
        return out


@dataclass(frozen=True, eq=False)
class SingularLocusSample:
    radius: float
    config: SearchConfig
    points: tuple[FoundPoint, ...]
    attempted: int
    accepted_raw: int
    notes: tuple[str, ...]

    def as_dict(self) -> dict:
        return {
            "radius": self.radius,
            "config": self.config.as_dict(),
            "points": [fp.as_dict() for fp in self.points],
            "attempted_starts": self.attempted,
            "accepted_raw": self.accepted_raw,
            "notes": list(self.notes),
        }


def _worker_count(config: SearchConfig) -> int:
    env = os.environ.get("MILNOR_ATLAS_THREADS", "").strip()
    if env:
        return max(1, int(env))
    return max(1, min(8, config.starts, os.cpu_count() or 1))


def find_singular_points(
    pair: MfpmPair, radius: float = 1.0, config: SearchConfig | None = None
) -> SingularLocusSample:
    """Sample the singular locus of the pair map on the sphere of the given radius."""
    if config is None:
        config = SearchConfig()
    if not radius > 0:
        raise InputError("radius must be positive")

    with ThreadPoolExecutor(max_workers=_worker_count(config)) as pool:
        raw = list(
            pool.map(lambda k: _descend_one(pair, radius, config, k), range(config.starts))
        )
    attempted = sum(1 for status, _ in raw if status != "no-start")
    hits = [payload for status, payload in raw if status == "hit"]
    notes: list[str] = []
    if attempted == 0:
        notes.append("every sampled start lies near the zero sets; nothing searched")

    # merge in start order: first matching cluster wins, ties never reorder
    clusters: list[dict] = []
    for p, obj in hits:
        rep = orbit_representative(pair, p)
        for cl in clusters:
            if np.linalg.norm(rep - cl["rep"]) <= config.dedup_distance:
                cl["members"] += 1
                if obj < cl["obj"]:
                    cl["obj"] = obj
                    cl["best"] = rep
                break
        else:
            clusters.append({"rep": rep, "best": rep, "obj": obj, "members": 1})

    found: list[FoundPoint] = []
    dropped = 0
    for cl in clusters:
        point = cl["best"]
        try:
            general = mfpm_singular_general(pair, point, tol=VERIFY_SIGMA_TOL)
            fd = singular_for_pair_fd(pair.f, pair.g, point)
        except (HypothesisError, NumericalError):
            dropped += 1
            continue
        if not general.dependent or fd.rank > 1:
            dropped += 1
            continue
        orbit_id = len(found)
        verdict: FoldReport | None = None
        if pair.has_polar:
            try:
                verdict = classify_fold(pair, point, oracle=True)
            except (HypothesisError, NumericalError) as exc:
                notes.append(f"orbit {orbit_id}: fold classification unavailable ({exc})")
        found.append(
            FoundPoint(point, cl["obj"], orbit_id, cl["members"], general, fd, verdict)
        )
    if dropped:
        notes.append(f"{dropped} cluster(s) failed re-verification and were dropped")
    return SingularLocusSample(
        radius, config, tuple(found), attempted, len(hits), tuple(notes)
    )
