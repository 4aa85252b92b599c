"""Newton polygon of a mixed polynomial and face-function degeneracy search.

The polygon lives in exponent space: each term contributes the lattice
point nu + mu, and the polygon is the convex hull of the union of the
shifted positive orthants over those points.  Compact faces are the faces
picked out by strictly positive linear functionals; the face of weight w
carries the face function (the sub-polynomial of terms attaining the
minimal weighted degree d(w; f)).

Everything combinatorial is exact integer/rational arithmetic.  The face
enumeration builds candidate normals from kernels of (n-1)-subsets of the
support-difference directions plus coordinate axes; that family provably
contains every facet normal, which makes the enumeration complete whenever
the subset budget is not exceeded (always, for n <= 3 and modest supports).
The degeneracy search is a randomized multi-start minimization and its
empty answer is inconclusive, never a proof of non-degeneracy.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb
from typing import Sequence

import numpy as np

from ._exactlin import kernel_basis, primitive, rational_rank
from .errors import InputError, ZeroPolynomialError
from .mixedpoly import MixedPolynomial, WeightKind, check_weighted, evaluate, from_terms, wirtinger
from .optimize import polish
from .randgen import rng_for

SUBSET_BUDGET = 60000

# A witness must push the second singular value of the real Jacobian below
# this; reported residuals are exactly that singular value.
WITNESS_RESIDUAL_TOL = 1e-8

Point = tuple[int, ...]


@dataclass(frozen=True)
class Face:
    """Compact face: its support points, one strictly positive witness weight, dimension."""

    points: tuple[Point, ...]
    weight: tuple[int, ...]
    dim: int

    def as_dict(self) -> dict:
        return {"points": [list(p) for p in self.points], "weight": list(self.weight), "dim": self.dim}


@dataclass(frozen=True)
class NewtonData:
    n: int
    support: tuple[Point, ...]
    vertices: tuple[Point, ...]
    compact_faces: tuple[Face, ...]
    complete: bool

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "support": [list(p) for p in self.support],
            "vertices": [list(p) for p in self.vertices],
            "compact_faces": [f.as_dict() for f in self.compact_faces],
            "complete": self.complete,
        }


def support_points(f: MixedPolynomial) -> tuple[Point, ...]:
    if f.is_zero:
        raise ZeroPolynomialError("the zero polynomial has no Newton polygon")
    pts = {tuple(a + b for a, b in zip(t.nu, t.mu)) for t in f.terms}
    return tuple(sorted(pts))


def _weighted_min(support: Sequence[Point], w: Sequence[int]) -> tuple[int, tuple[Point, ...]]:
    values = [sum(wj * xj for wj, xj in zip(w, p)) for p in support]
    d = min(values)
    return d, tuple(p for p, v in zip(support, values) if v == d)


def _affine_dim(points: Sequence[Point]) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    rows = [tuple(x - b for x, b in zip(p, base)) for p in points[1:]]
    return rational_rank(rows, len(base))


def _candidate_normals(support: Sequence[Point], n: int) -> tuple[list[tuple[int, ...]], bool]:
    """Sign-definite primitive kernels of (n-1)-subsets of difference/axis vectors."""
    directions: set[tuple[int, ...]] = set()
    for u, v in itertools.combinations(support, 2):
        d = primitive(tuple(a - b for a, b in zip(u, v)))
        lead = next(x for x in d if x != 0)
        if lead < 0:
            d = tuple(-x for x in d)
        directions.add(d)
    for i in range(n):
        directions.add(tuple(1 if j == i else 0 for j in range(n)))
    dirs = sorted(directions)

    complete = True
    total = comb(len(dirs), n - 1)
    cands: set[tuple[int, ...]] = set()
    count = 0
    for subset in itertools.combinations(dirs, n - 1):
        count += 1
        if count > SUBSET_BUDGET:
            complete = False
            break
        if rational_rank(subset, n) != n - 1:
            continue
        for k in kernel_basis(subset, n):
            if all(x >= 0 for x in k) or all(x <= 0 for x in k):
                w = tuple(abs(x) for x in k)
                if any(w):
                    cands.add(primitive(w))
    if total > SUBSET_BUDGET:
        complete = False
    return sorted(cands), complete


def newton_data(f: MixedPolynomial, extra_weights: Sequence[Sequence[int]] = ()) -> NewtonData:
    """Support, vertices, and compact faces of the Newton polygon of f.

    ``extra_weights`` (strictly positive) force the faces they expose into
    the result; useful for n > 3 where the automatic candidate family may
    be budget-capped (then ``complete`` is False).
    """
    support = support_points(f)
    n = f.n
    cands, complete = _candidate_normals(support, n)

    argmin: dict[tuple[int, ...], tuple[Point, ...]] = {}
    for w in cands:
        argmin[w] = _weighted_min(support, w)[1]

    faces: dict[frozenset, Face] = {}

    def add_face(w: Sequence[int]) -> tuple[Point, ...]:
        w = primitive(tuple(int(x) for x in w))
        _, pts = _weighted_min(support, w)
        key = frozenset(pts)
        if key not in faces:
            faces[key] = Face(tuple(sorted(pts)), w, _affine_dim(pts))
        return pts

    for w in cands:
        if all(x > 0 for x in w):
            add_face(w)

    vertices = []
    for v in support:
        ws = [w for w in cands if v in argmin[w]]
        if not ws:
            continue
        wv = tuple(sum(col) for col in zip(*ws))
        if all(x > 0 for x in wv) and add_face(wv) == (v,):
            vertices.append(v)

    for u, v in itertools.combinations(support, 2):
        ws = [w for w in cands if u in argmin[w] and v in argmin[w]]
        if ws:
            wuv = tuple(sum(col) for col in zip(*ws))
            if all(x > 0 for x in wuv):
                add_face(wuv)

    for w in extra_weights:
        if len(w) != n or any(int(x) <= 0 for x in w):
            raise InputError("extra weights must be strictly positive vectors of length n")
        add_face(w)

    ordered = sorted(faces.values(), key=lambda face: (face.dim, face.points))
    return NewtonData(n, support, tuple(sorted(vertices)), tuple(ordered), complete)


def face_and_degree(f: MixedPolynomial, w: Sequence[int]) -> tuple[Face, int]:
    """Face picked out by the strictly positive weight w, and d(w; f)."""
    if len(w) != f.n:
        raise InputError("weight length does not match polynomial arity")
    if any(int(x) <= 0 for x in w):
        raise InputError("face weights must be strictly positive")
    support = support_points(f)
    w = tuple(int(x) for x in w)
    d, pts = _weighted_min(support, w)
    return Face(tuple(sorted(pts)), w, _affine_dim(pts)), d


def face_function(f: MixedPolynomial, w: Sequence[int]) -> MixedPolynomial:
    """Sub-polynomial of terms whose exponent sum lies on the face of weight w."""
    face, _ = face_and_degree(f, w)
    on_face = set(face.points)
    items = [
        (t.nu, t.mu, t.coeff)
        for t in f.terms
        if tuple(a + b for a, b in zip(t.nu, t.mu)) in on_face
    ]
    return from_terms(f.n, items)


# --------------------------------------------------- degeneracy witnesses --

@dataclass(frozen=True)
class Witness:
    """A near-critical point of the face function on the open torus."""

    point: tuple[complex, ...]
    residual: float          # second singular value of the real Jacobian there
    face_value: float        # |f_w| at the point
    strong: bool

    def as_dict(self) -> dict:
        return {
            "point": [[z.real, z.imag] for z in self.point],
            "residual": self.residual,
            "face_value": self.face_value,
            "strong": self.strong,
        }


def _real_jacobian_sv(fw: MixedPolynomial, dz, dbz, z: np.ndarray) -> float:
    """Second singular value of the 2 x 2n real Jacobian of fw at z."""
    n = fw.n
    cols = np.empty((2, 2 * n))
    for j in range(n):
        a = evaluate(dz[j], z)
        b = evaluate(dbz[j], z)
        ddx = a + b
        ddy = 1j * (a - b)
        cols[:, 2 * j] = (ddx.real, ddx.imag)
        cols[:, 2 * j + 1] = (ddy.real, ddy.imag)
    sv = np.linalg.svd(cols, compute_uv=False)
    return float(sv[1])


def degeneracy_witness(
    f: MixedPolynomial,
    w: Sequence[int],
    budget: int = 24,
    strong: bool = False,
    seed: int = 0,
    max_iters: int = 500,
) -> Witness | None:
    """Search the open torus for a critical point of the face function f_w.

    With ``strong=True`` any critical point of f_w : (C*)^n -> C counts;
    otherwise the search is steered to (and a witness accepted only near)
    the zero set of f_w.  Moduli are confined to |log|zj|| <= 3.  Returns the
    first start's witness whose Jacobian residual passes the tolerance, or
    None.  None is inconclusive: this is a refuter, not a prover.
    """
    fw = face_function(f, w)
    if fw.is_zero:
        raise ZeroPolynomialError("face function vanished; no degeneracy search possible")
    n = fw.n
    dz = [wirtinger(fw, j + 1, False) for j in range(n)]
    dbz = [wirtinger(fw, j + 1, True) for j in range(n)]

    def to_point(params: np.ndarray) -> np.ndarray:
        rho = np.clip(params[:n], -3.0, 3.0)
        theta = params[n:]
        return np.exp(rho + 1j * theta)

    def rel_value(z: np.ndarray) -> float:
        bound = sum(
            abs(t.coeff) * float(np.prod(np.abs(z) ** np.array(t.nu)) * np.prod(np.abs(z) ** np.array(t.mu)))
            for t in fw.terms
        )
        return abs(evaluate(fw, z)) / max(bound, 1e-300)

    def objective(params: np.ndarray) -> float:
        z = to_point(params)
        val = _real_jacobian_sv(fw, dz, dbz, z)
        if not strong:
            val += rel_value(z)
        overshoot = np.maximum(np.abs(params[:n]) - 3.0, 0.0)
        return val + 10.0 * float(np.dot(overshoot, overshoot))

    for k in range(budget):
        rng = rng_for(seed, 7001, k)
        x0 = np.concatenate([rng.uniform(-1.5, 1.5, size=n), rng.uniform(0.0, 2 * np.pi, size=n)])
        res = polish(objective, x0, max_iter=max_iters)
        z = to_point(res.x)
        residual = _real_jacobian_sv(fw, dz, dbz, z)
        if residual < WITNESS_RESIDUAL_TOL and (strong or rel_value(z) < WITNESS_RESIDUAL_TOL):
            return Witness(tuple(complex(c) for c in z), residual, abs(evaluate(fw, z)), strong)
    return None
