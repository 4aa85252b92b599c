"""Tests for the finite-difference oracles.

Ground truths:

* For f = z1 on the circle of radius r, arg moves at rate 1/r along the
  unit-speed tangent, so the 1x1 phase Jacobian has magnitude 1/r.
* For the pair (z1^2 + z2^2, z1^2 - z2^2) at p = (0, 1) the restricted
  phase Hessian was computed by hand in an explicit fiber parametrization:
  theta = -2 Im(w^2) in the natural coordinate w, Hessian [[0,-4],[-4,0]],
  eigenvalues -4 and 4 in any orthonormal chart.
* For the pair (z1, z1*z2*~z2) the restricted function arg g - arg f is
  identically zero, so the Hessian vanishes and every off-axis point is
  singular for the pair map.
"""

import numpy as np
import pytest

from milnor_atlas.criteria import realify, v_field
from milnor_atlas.errors import DependentFrameError, InputError, KZeroError, StencilError
from milnor_atlas.mixedpoly import parse
from milnor_atlas.oracle import (
    FiberChart,
    RankReport,
    SphereChart,
    central_hessian,
    jacobian_fd,
    rank_with_gap,
    restricted_arg_hessian_fd,
    singular_for_pair_fd,
    singular_for_phase_fd,
)
from milnor_atlas.randgen import random_point_off_zeros, random_polar_pair, rng_for

QUADRIC_F = parse("z1^2 + z2^2", 2)
QUADRIC_G = parse("z1^2 - z2^2", 2)


# ------------------------------------------------------- SphereChart -----

def test_sphere_chart_frame_properties():
    rng = rng_for(7, 1)
    for _ in range(5):
        p = (rng.standard_normal(3) + 1j * rng.standard_normal(3)) * 0.9
        chart = SphereChart.at(p, radius=2.0)
        assert chart.dim == 5
        gram = chart.frame.T @ chart.frame
        assert np.allclose(gram, np.eye(5), atol=1e-12)
        pr = realify(chart.p) / 2.0
        assert np.allclose(chart.frame.T @ pr, 0, atol=1e-12)
        assert np.allclose(chart.embed(np.zeros(5)), chart.p)
        q = chart.embed(rng.standard_normal(5) * 0.3)
        assert abs(np.linalg.norm(q) - 2.0) <= 1e-12


def test_sphere_chart_rotation_spans_same_space():
    p = np.array([0.5 + 0.1j, -0.3 + 0.8j])
    plain = SphereChart.at(p)
    mixed = SphereChart.at(p, rng=rng_for(7, 2))
    proj_a = plain.frame @ plain.frame.T
    proj_b = mixed.frame @ mixed.frame.T
    assert np.allclose(proj_a, proj_b, atol=1e-12)
    assert not np.allclose(plain.frame, mixed.frame)


def test_sphere_chart_rejects_zero():
    with pytest.raises(InputError):
        SphereChart.at(np.zeros(2, dtype=complex))


# ------------------------------------------------------- jacobian_fd -----

def test_phase_jacobian_circle_rate():
    f = parse("z1", 1)
    for r in (0.5, 1.0, 2.0):
        p = np.array([r * np.exp(0.4j)])
        jac = jacobian_fd([f], p)
        assert jac.shape == (1, 1)
        assert abs(jac[0, 0]) == pytest.approx(1.0 / r, abs=1e-6)


def test_jacobian_matches_symbolic_field():
    # dual route: FD chart Jacobian entries vs Re<u_i, v_h(p)>
    rng = rng_for(7, 3)
    checked = 0
    while checked < 25:
        f, g, *_ = random_polar_pair(rng_for(7, 3, checked), n=2)
        p = random_point_off_zeros(rng, [f, g], 2, 1.0)
        if p is None:
            checked += 1
            continue
        chart = SphereChart.at(p)
        jac = jacobian_fd([f, g], p)
        for k, h in enumerate((f, g)):
            v = v_field(h, p)
            expected = chart.frame.T @ realify(v)
            assert np.allclose(jac[k], expected, atol=1e-5 * (1 + np.linalg.norm(expected)))
        checked += 1


def test_jacobian_stencil_guard():
    f = parse("z1", 2)
    p = np.array([1e-11 + 0j, 1.0])
    with pytest.raises(StencilError):
        jacobian_fd([f], p)


# ------------------------------------------------------ rank_with_gap ----

def test_rank_with_gap_cases():
    rep = rank_with_gap(np.diag([1.0, 1e-3]))
    assert rep.rank == 2 and rep.gap == float("inf") and not rep.ill_conditioned

    rep = rank_with_gap(np.diag([1.0, 1e-9]))
    assert rep.rank == 1 and rep.gap == pytest.approx(1e9, rel=1e-6)
    assert not rep.ill_conditioned

    rep = rank_with_gap(np.diag([1.0, 3e-8, 5e-9]))
    assert rep.rank == 2
    assert rep.gap == pytest.approx(6.0, rel=1e-6)
    assert rep.ill_conditioned

    rep = rank_with_gap(np.zeros((2, 3)))
    assert rep.rank == 0 and rep.gap == float("inf")

    rep = rank_with_gap(np.zeros((0, 2)))
    assert rep.rank == 0 and rep.sigma == ()

    d = rank_with_gap(np.diag([1.0, 1e-9])).as_dict()
    assert d["rank"] == 1 and d["ill_conditioned"] is False


# ------------------------------------------------- pair map FD verdicts --

def test_pair_fd_verdicts_on_fixtures():
    f1, g1 = parse("z1", 2), parse("z2", 2)
    rep = singular_for_pair_fd(f1, g1, np.array([0.6 + 0j, 0.8j]))
    assert rep.rank == 2

    rep = singular_for_pair_fd(QUADRIC_F, QUADRIC_G, np.array([0.0 + 0j, 1.0]))
    assert rep.rank <= 1

    rep = singular_for_pair_fd(QUADRIC_F, QUADRIC_G, np.array([0.6 + 0j, 0.8]))
    assert rep.rank == 2

    # the 2x1 Jacobian of a 1-variable pair can never reach rank 2
    rep = singular_for_pair_fd(parse("z1", 1), parse("~z1", 1), np.array([np.exp(0.3j)]))
    assert rep.rank <= 1


def test_phase_fd_verdicts():
    rep = singular_for_phase_fd(parse("z1", 2), np.array([0.8 + 0j, 0.6]))
    assert rep.rank == 1
    rep = singular_for_phase_fd(parse("z1*~z1 + 2*z2*~z2", 2), np.array([0.8 + 0j, 0.6]))
    assert rep.rank == 0


def test_fd_agrees_with_symbolic_criterion():
    from milnor_atlas.criteria import MfpmPair, mfpm_singular_general

    rng = rng_for(7, 4)
    agreements = 0
    for k in range(10):
        f, g, wf, wg, s = random_polar_pair(rng_for(7, 4, k), n=2)
        pair = MfpmPair.build(f, g, wf, wg)
        for _ in range(12):
            p = random_point_off_zeros(rng, [f, g], 2, 1.0)
            if p is None:
                continue
            sym = mfpm_singular_general(pair, p)
            if sym.indeterminate:
                continue
            try:
                fd = singular_for_pair_fd(f, g, p)
            except StencilError:
                continue
            if fd.ill_conditioned:
                continue
            assert sym.dependent == (fd.rank <= 1)
            agreements += 1
    assert agreements >= 80


# -------------------------------------------------------- FiberChart -----

def test_fiber_chart_constraints_hold():
    chart = FiberChart(QUADRIC_F, QUADRIC_G, 1.0, np.array([0.6 + 0j, 0.8]))
    assert chart.dim == 2
    assert np.allclose(chart.point(np.zeros(2)), chart.p0, atol=1e-12)
    assert chart.value(np.zeros(2)) == pytest.approx(0.0, abs=1e-12)
    rng = rng_for(7, 5)
    from milnor_atlas.mixedpoly import evaluate

    for _ in range(8):
        x = rng.standard_normal(2) * 1e-2
        q = chart.point(x)
        assert abs(np.linalg.norm(q) - chart.radius) <= 1e-12
        phase = np.angle(evaluate(QUADRIC_F, q) / chart.f0)
        assert abs(phase) <= 1e-10


def test_fiber_chart_grad_matches_symbolic():
    chart = FiberChart(QUADRIC_F, QUADRIC_G, 1.0, np.array([0.6 + 0j, 0.8]))
    grad = chart._arg_grad(chart.p0)
    assert np.allclose(grad, realify(v_field(QUADRIC_F, chart.p0)), atol=1e-6)


def test_fiber_chart_errors():
    with pytest.raises(DependentFrameError):
        FiberChart(parse("z1*~z1", 2), parse("z2", 2), 1.0, np.array([0.6 + 0j, 0.8]))
    with pytest.raises(KZeroError):
        FiberChart(QUADRIC_F, QUADRIC_G, 1.0, np.array([1.0 + 0j, 1.0]) / np.sqrt(2))


def test_fiber_chart_zero_dim_for_one_variable():
    chart = FiberChart(parse("z1", 1), parse("~z1", 1), -1.0, np.array([np.exp(0.2j)]))
    assert chart.dim == 0
    assert chart.value(np.zeros(0)) == 0.0


# -------------------------------------------------- restricted Hessian ---

def test_central_hessian_on_quadratic():
    fn = lambda x: x[0] ** 2 - 3 * x[0] * x[1] + 2 * x[1] ** 2
    hess = central_hessian(fn, 2, 1e-4)
    assert np.allclose(hess, [[2, -3], [-3, 4]], atol=1e-8)
    assert central_hessian(lambda x: 0.0, 0, 1e-4).shape == (0, 0)


def test_restricted_hessian_quadric_eigenvalues():
    hess = restricted_arg_hessian_fd(QUADRIC_F, QUADRIC_G, 1.0, np.array([0.0 + 0j, 1.0]))
    assert hess.shape == (2, 2)
    assert np.allclose(hess, hess.T)
    eig = np.sort(np.linalg.eigvalsh(hess))
    assert eig == pytest.approx([-4.0, 4.0], abs=1e-2)


def test_restricted_hessian_chart_invariant_spectrum():
    p = np.array([0.0 + 0j, 1.0])
    a = restricted_arg_hessian_fd(QUADRIC_F, QUADRIC_G, 1.0, p)
    b = restricted_arg_hessian_fd(QUADRIC_F, QUADRIC_G, 1.0, p, rng=rng_for(7, 6))
    assert np.sort(np.linalg.eigvalsh(a)) == pytest.approx(
        np.sort(np.linalg.eigvalsh(b)), abs=1e-3
    )


def test_restricted_hessian_degenerate_pair():
    # arg g - arg f vanishes identically for g = f * (real positive factor)
    f = parse("z1", 2)
    g = parse("z1*z2*~z2", 2)
    p = np.array([0.6 + 0j, 0.8])
    hess = restricted_arg_hessian_fd(f, g, 1.0, p)
    assert hess.shape == (2, 2)
    assert np.max(np.abs(hess)) <= 1e-4
    # and the pair map is singular there by the FD route as well
    assert singular_for_pair_fd(f, g, p).rank <= 1
