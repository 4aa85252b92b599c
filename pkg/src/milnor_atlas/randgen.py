"""Seeded random fixture generators.

Used by the ``verify`` CLI suites and by the test-suite: random mixed
polynomials, weighted-homogeneous polynomials with known weight data,
proportional polar pairs, and sphere points kept away from zero sets.
All draws flow through a caller-provided ``numpy.random.Generator`` so
every consumer is reproducible from a single integer seed.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

from .mixedpoly import MixedPolynomial, WeightKind, WeightType, from_terms

Key = tuple[tuple[int, ...], tuple[int, ...]]


def rng_for(seed: int, *key: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), *map(int, key)])


def random_coeff(rng: np.random.Generator, lo: float = 0.2, hi: float = 2.0) -> complex:
    r = rng.uniform(lo, hi)
    phi = rng.uniform(0.0, 2.0 * np.pi)
    return complex(r * np.cos(phi), r * np.sin(phi))


def random_sphere_point(rng: np.random.Generator, n: int, radius: float = 1.0) -> np.ndarray:
    v = rng.normal(size=2 * n)
    v /= np.linalg.norm(v)
    return radius * (v[0::2] + 1j * v[1::2])


def random_mixed_poly(
    rng: np.random.Generator,
    n: int,
    max_terms: int = 4,
    max_exp: int = 3,
    conjugates: bool = True,
) -> MixedPolynomial:
    """Random nonzero mixed polynomial with moderate coefficients and exponents."""
    while True:
        count = int(rng.integers(1, max_terms + 1))
        items = []
        for _ in range(count):
            nu = tuple(int(e) for e in rng.integers(0, max_exp + 1, size=n))
            mu = tuple(int(e) for e in rng.integers(0, max_exp + 1, size=n)) if conjugates else (0,) * n
            items.append((nu, mu, random_coeff(rng)))
        f = from_terms(n, items)
        if not f.is_zero:
            return f


def random_weight_vector(rng: np.random.Generator, n: int, max_w: int = 4) -> tuple[int, ...]:
    """Strictly positive integer weights with gcd 1."""
    while True:
        w = [int(x) for x in rng.integers(1, max_w + 1, size=n)]
        g = 0
        for x in w:
            g = gcd(g, x)
        w = [x // g for x in w]
        if any(x >= 1 for x in w):
            return tuple(w)


def monomial_keys_with_degree(
    w: Sequence[int], d: int, kind: WeightKind, max_exp: int, holomorphic: bool = False
) -> list[Key]:
    """All (nu, mu) with entries in [0, max_exp] whose weighted degree under w is d."""
    n = len(w)
    ranges = [range(max_exp + 1)] * n
    keys: list[Key] = []
    for nu in itertools.product(*ranges):
        mus = [(0,) * n] if holomorphic else itertools.product(*ranges)
        for mu in mus:
            if kind is WeightKind.POLAR:
                deg = sum(wj * (a - b) for wj, a, b in zip(w, nu, mu))
            else:
                deg = sum(wj * (a + b) for wj, a, b in zip(w, nu, mu))
            if deg == d:
                keys.append((tuple(nu), tuple(mu)))
    return keys


def random_holomorphic_weighted(
    rng: np.random.Generator, n: int, max_w: int = 3, max_exp: int = 5, max_terms: int = 4
) -> tuple[MixedPolynomial, tuple[int, ...], int]:
    """Random holomorphic weighted-homogeneous f, its weight vector, and degree d > 0."""
    while True:
        w = random_weight_vector(rng, n, max_w)
        base = [int(e) for e in rng.integers(0, 3, size=n)]
        d = sum(wj * e for wj, e in zip(w, base))
        if d <= 0:
            continue
        keys = monomial_keys_with_degree(w, d, WeightKind.RADIAL, max_exp, holomorphic=True)
        if not keys:
            continue
        count = min(len(keys), int(rng.integers(1, max_terms + 1)))
        chosen = rng.choice(len(keys), size=count, replace=False)
        f = from_terms(n, [(keys[i][0], keys[i][1], random_coeff(rng)) for i in chosen])
        if not f.is_zero:
            return f, w, d


def random_polar_homogeneous(
    rng: np.random.Generator,
    n: int,
    w: Sequence[int],
    d: int,
    max_exp: int = 2,
    max_terms: int = 3,
    holomorphic: bool = False,
) -> MixedPolynomial | None:
    keys = monomial_keys_with_degree(w, d, WeightKind.POLAR, max_exp, holomorphic=holomorphic)
    if not keys:
        return None
    count = min(len(keys), int(rng.integers(1, max_terms + 1)))
    chosen = rng.choice(len(keys), size=count, replace=False)
    f = from_terms(n, [(keys[i][0], keys[i][1], random_coeff(rng)) for i in chosen])
    return None if f.is_zero else f


def random_polar_pair(
    rng: np.random.Generator, n: int = 2, max_exp: int = 2, holomorphic: bool = False
) -> tuple[MixedPolynomial, MixedPolynomial, WeightType, WeightType, Fraction]:
    """Random (f, g, wf, wg, s): both polar weighted homogeneous for one strictly
    positive weight vector, with nonzero degrees, so the proportionality
    d_g * w_f = s * d_f * w_g holds exactly with s = d_g / d_f."""
    while True:
        w = random_weight_vector(rng, n, max_w=3)
        dmax = sum(w) * max_exp
        degrees = [d for d in range(-dmax, dmax + 1) if d != 0]
        df = int(degrees[rng.integers(0, len(degrees))])
        dg = int(degrees[rng.integers(0, len(degrees))])
        f = random_polar_homogeneous(rng, n, w, df, max_exp, holomorphic=holomorphic)
        g = random_polar_homogeneous(rng, n, w, dg, max_exp, holomorphic=holomorphic)
        if f is None or g is None:
            continue
        wf = WeightType(w, df, WeightKind.POLAR)
        wg = WeightType(w, dg, WeightKind.POLAR)
        return f, g, wf, wg, Fraction(dg, df)


def poly_scale(f: MixedPolynomial, radius: float) -> float:
    """Upper bound for |f| on the sphere of the given radius."""
    return float(sum(abs(t.coeff) * radius**t.total_degree for t in f.terms)) or 1.0


def random_point_off_zeros(
    rng: np.random.Generator,
    polys: Sequence[MixedPolynomial],
    n: int,
    radius: float = 1.0,
    rel: float = 1e-2,
    tries: int = 500,
) -> np.ndarray | None:
    """Sphere point where every given polynomial has |value| > rel * its sphere
    scale, or None when sampling keeps landing near the zero sets."""
    for _ in range(tries):
        p = random_sphere_point(rng, n, radius)
        if all(abs(f.evaluate(p)) > rel * poly_scale(f, radius) for f in polys):
            return p
    return None
