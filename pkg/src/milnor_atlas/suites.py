"""Self-check suites: randomized property checks runnable from the CLI.

Each suite draws its cases from a seeded generator, compares an analytic
route against an independent numerical one, and reports case counts with
the worst residual seen.  A suite passes when every case lands inside its
stated tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .criteria import (
    MfpmPair,
    mfpm_singular_general,
    mfpm_singular_polar,
    v_field,
)
from .errors import InputError
from .mixedpoly import (
    MixedPolynomial,
    WeightKind,
    WeightType,
    check_weighted,
    euler_residual,
    evaluate,
    from_terms,
    parse,
    verify_polar_action,
    wirtinger,
)
from .newton import face_and_degree, face_function, newton_data
from .oracle import singular_for_pair_fd
from .randgen import (
    poly_scale,
    random_holomorphic_weighted,
    random_mixed_poly,
    random_point_off_zeros,
    random_polar_homogeneous,
    random_polar_pair,
    random_sphere_point,
    random_weight_vector,
    rng_for,
)

FD_STEP = 1e-5


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    cases: int
    failures: int
    worst: float
    tolerance: float
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def as_dict(self) -> dict:
        return {
            "suite": self.suite,
            "cases": self.cases,
            "failures": self.failures,
            "worst": float(self.worst),
            "tolerance": self.tolerance,
            "passed": self.passed,
            "notes": list(self.notes),
        }


def _fd_wirtinger(f: MixedPolynomial, p: np.ndarray, j: int, bar: bool) -> complex:
    """Central-difference Wirtinger derivative, step FD_STEP along both real axes."""
    h = FD_STEP
    ej = np.zeros(len(p), dtype=complex)
    ej[j] = 1.0
    dx = (evaluate(f, p + h * ej) - evaluate(f, p - h * ej)) / (2 * h)
    dy = (evaluate(f, p + 1j * h * ej) - evaluate(f, p - 1j * h * ej)) / (2 * h)
    return 0.5 * (dx + 1j * dy) if bar else 0.5 * (dx - 1j * dy)


def suite_wirtinger(cases: int, seed: int) -> SuiteResult:
    """Symbolic derivatives against finite differences on random mixed polynomials."""
    tol = 1e-6
    rng = rng_for(seed, 101)
    worst = 0.0
    failures = 0
    for k in range(cases):
        n = int(rng.integers(1, 4))
        f = random_mixed_poly(rng, n)
        p = random_sphere_point(rng, n)
        j = int(rng.integers(1, n + 1))
        bar = bool(rng.integers(0, 2))
        exact = evaluate(wirtinger(f, j, bar), p)
        approx = _fd_wirtinger(f, p, j - 1, bar)
        err = abs(exact - approx) / max(1.0, poly_scale(f, 1.0))
        worst = max(worst, err)
        if err > tol:
            failures += 1
    return SuiteResult("wirtinger", cases, failures, worst, tol)


def suite_euler(cases: int, seed: int) -> SuiteResult:
    """Weighted Euler identities on random homogeneous fixtures, both kinds."""
    tol = 1e-10
    rng = rng_for(seed, 102)
    worst = 0.0
    failures = 0
    done = 0
    while done < cases:
        n = int(rng.integers(1, 4))
        if done % 2 == 0:
            f, w, d = random_holomorphic_weighted(rng, n)
            wt = WeightType(w, d, WeightKind.RADIAL)
        else:
            w = random_weight_vector(rng, n, max_w=3)
            d = int(rng.integers(1, sum(w) + 1))
            g = random_polar_homogeneous(rng, n, w, d)
            if g is None:
                continue
            f, wt = g, WeightType(w, d, WeightKind.POLAR)
        p = random_sphere_point(rng, n)
        err = euler_residual(f, wt, p)
        worst = max(worst, err)
        if err > tol:
            failures += 1
        done += 1
    return SuiteResult("euler", cases, failures, worst, tol)


def suite_polar_action(cases: int, seed: int) -> SuiteResult:
    """Covariance of polar homogeneous polynomials under the weighted circle action."""
    tol = 1e-10
    rng = rng_for(seed, 103)
    worst = 0.0
    failures = 0
    done = 0
    while done < cases:
        n = int(rng.integers(1, 4))
        w = random_weight_vector(rng, n, max_w=3)
        d = int(rng.integers(1, sum(w) + 1))
        f = random_polar_homogeneous(rng, n, w, d)
        if f is None:
            continue
        wt = WeightType(w, d, WeightKind.POLAR)
        p = random_sphere_point(rng, n)
        t = float(rng.uniform(-6.0, 6.0))
        err = verify_polar_action(f, wt, p, t)
        worst = max(worst, err)
        if err > tol:
            failures += 1
        done += 1
    return SuiteResult("polar-action", cases, failures, worst, tol)


_FIXTURE_PAIRS = (
    ("z1", "z2"),
    ("z1", "~z1"),
    ("z1^2 + z2^2", "z1^2 - z2^2"),
)


def _fixture_pairs() -> list[MfpmPair]:
    return [MfpmPair.detect(parse(ftxt, 2), parse(gtxt, 2)) for ftxt, gtxt in _FIXTURE_PAIRS]


def suite_pair_equivalence(cases: int, seed: int) -> SuiteResult:
    """Algebraic singularity test against the finite-difference Jacobian rank.

    cases = points per pair.  Hard disagreements count as failures; points in
    the indeterminate band are skipped and reported (their fraction must stay
    under 1%).
    """
    rng = rng_for(seed, 104)
    pairs = _fixture_pairs()
    for k in range(6):
        f, g, wf, wg, _ = random_polar_pair(rng_for(seed, 104, k), n=2)
        pairs.append(MfpmPair.build(f, g, wf, wg))

    failures = 0
    band = 0
    total = 0
    worst = 0.0
    for pair in pairs:
        for _ in range(cases):
            p = random_point_off_zeros(rng, [pair.f, pair.g], pair.f.n)
            if p is None:
                continue
            total += 1
            report = mfpm_singular_general(pair, p)
            if report.indeterminate:
                band += 1
                continue
            fd = singular_for_pair_fd(pair.f, pair.g, p)
            if report.dependent != (fd.rank <= 1):
                failures += 1
                worst = max(worst, report.sigma[-1])
    frac = band / total if total else 0.0
    notes = (f"{band} of {total} points fell in the indeterminate band",)
    if frac >= 0.01:
        failures += 1
        notes += (f"indeterminate fraction {frac:.4f} exceeds 1%",)
    return SuiteResult("pair-equivalence", total, failures, worst, 0.0, notes)


def suite_field_proportionality(cases: int, seed: int) -> SuiteResult:
    """For polar pairs: the two-field shortcut test must match the general test,
    and at singular points the fields must be proportional with the exact ratio."""
    res_tol = 1e-8
    rng = rng_for(seed, 105)
    pairs = [p for p in _fixture_pairs() if p.has_polar]
    for k in range(6):
        f, g, wf, wg, _ = random_polar_pair(rng_for(seed, 105, k), n=2)
        pairs.append(MfpmPair.build(f, g, wf, wg))

    failures = 0
    total = 0
    worst = 0.0
    for pair in pairs:
        for _ in range(cases):
            p = random_point_off_zeros(rng, [pair.f, pair.g], pair.f.n)
            if p is None:
                continue
            gen = mfpm_singular_general(pair, p)
            pol = mfpm_singular_polar(pair, p)
            if gen.indeterminate or pol.indeterminate:
                continue
            total += 1
            if gen.dependent != pol.dependent:
                failures += 1
                continue
            if pol.dependent:
                vf = v_field(pair.f, p)
                resid = pol.vg_minus_svf / max(np.linalg.norm(vf), 1e-300)
                worst = max(worst, resid)
                if resid > res_tol:
                    failures += 1
    # singular fixtures supply the proportionality half of the check
    quadric = MfpmPair.detect(parse("z1^2 + z2^2", 2), parse("z1^2 - z2^2", 2))
    conj = MfpmPair.detect(parse("z1", 2), parse("~z1", 2))
    for pair, mk in ((quadric, lambda t: [0.0, np.exp(1j * t)]), (conj, None)):
        for k in range(max(4, cases // 10)):
            if mk is not None:
                p = np.asarray(mk(0.3 + 0.7 * k), dtype=complex)
            else:
                q = random_point_off_zeros(rng, [pair.f, pair.g], 2)
                if q is None:
                    continue
                p = q
            pol = mfpm_singular_polar(pair, p)
            total += 1
            if not pol.dependent:
                failures += 1
                continue
            vf = v_field(pair.f, p)
            resid = pol.vg_minus_svf / max(np.linalg.norm(vf), 1e-300)
            worst = max(worst, resid)
            if resid > res_tol:
                failures += 1
    return SuiteResult("field-proportionality", total, failures, worst, res_tol)


def _staircase_vertices(points: list[tuple[int, int]]) -> set[tuple[int, int]]:
    """Vertices of conv(points + positive orthant) by brute direction sampling.

    A support point is a vertex exactly when some strictly positive direction
    picks it as the unique minimizer.  Adjacent normal cones here have rational
    boundary slopes with entries bounded by the coordinate spread, so scanning
    every coprime direction up to twice that bound hits the interior of every
    cone.
    """
    pts = sorted(set(points))
    if len(pts) == 1:
        return set(pts)
    spread = max(max(abs(a - c), abs(b - d)) for a, b in pts for c, d in pts)
    bound = 2 * max(spread, 1) + 1
    vertices: set[tuple[int, int]] = set()
    for a in range(1, bound + 1):
        for b in range(1, bound + 1):
            if gcd(a, b) != 1:
                continue
            vals = [a * x + b * y for x, y in pts]
            m = min(vals)
            if vals.count(m) == 1:
                vertices.add(pts[vals.index(m)])
    return vertices


def suite_newton_hull(cases: int, seed: int) -> SuiteResult:
    """Two-variable Newton polygon vertices against a monotone-chain hull,
    plus homogeneity of every compact-face restriction."""
    rng = rng_for(seed, 106)
    failures = 0
    worst = 0.0
    notes: list[str] = []
    for k in range(cases):
        count = int(rng.integers(1, 13))
        keys = set()
        while len(keys) < count:
            nu = (int(rng.integers(0, 7)), int(rng.integers(0, 7)))
            mu = (int(rng.integers(0, 4)), int(rng.integers(0, 4)))
            keys.add((nu, mu))
        f = from_terms(2, [(nu, mu, 1.0 + 0.1 * i) for i, (nu, mu) in enumerate(keys)])
        if f.is_zero:
            continue
        data = newton_data(f)
        support = [tuple(p) for p in data.support]
        expect = _staircase_vertices(support)
        got = set(tuple(p) for p in data.vertices)
        if expect != got:
            failures += 1
            if len(notes) < 5:
                notes.append(f"case {k}: vertex sets differ ({sorted(expect)} vs {sorted(got)})")
            continue
        for face in data.compact_faces:
            fw = face_function(f, face.weight)
            _, d = face_and_degree(f, face.weight)
            if check_weighted(fw, face.weight, WeightKind.RADIAL) != d:
                failures += 1
                if len(notes) < 5:
                    notes.append(f"case {k}: face function not homogeneous for w={face.weight}")
                break
    return SuiteResult("newton-hull", cases, failures, worst, 0.0, tuple(notes))


SUITES = {
    "wirtinger": (suite_wirtinger, 200),
    "euler": (suite_euler, 100),
    "polar-action": (suite_polar_action, 100),
    "pair-equivalence": (suite_pair_equivalence, 60),
    "field-proportionality": (suite_field_proportionality, 60),
    "newton-hull": (suite_newton_hull, 60),
}

# alternate spellings accepted by the CLI
ALIASES = {
    "prop2-equivalence": "pair-equivalence",
    "prop3-agreement": "field-proportionality",
}


def suite_names() -> list[str]:
    return sorted(SUITES)


def run_suite(name: str, cases: int | None = None, seed: int = 0) -> SuiteResult:
    key = ALIASES.get(name, name)
    if key not in SUITES:
        known = ", ".join(suite_names())
        raise InputError(f"unknown suite {name!r} (known: {known})")
    fn, default_cases = SUITES[key]
    n = default_cases if cases is None else cases
    if n <= 0:
        raise InputError("cases must be positive")
    return fn(n, seed)
