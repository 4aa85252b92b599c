"""Tests for the fold classification.

Ground truths:

* log-Hessian entries for one-variable polynomials are classical calculus
  (d^2/dz^2 log z = -1/z^2; the mixed log-Hessian of z1*~z1 vanishes).
* The hand value M = [[0, -4], [-4, 0]] for (z1^2 + z2^2, z1^2 - z2^2) at
  p = (0, 1) in the explicit basis {(1,0), (i,0)} was derived on paper by
  expanding theta on a fiber parametrization, and independently matches
  the finite-difference fiber Hessian frozen in test_oracle.py.
* For g = f * (real positive factor), theta is constant, so M must vanish
  at every singular point.
* All Hessian blocks are compared against nested central differences of
  -i (log g - s log f) with the branch pinned by dividing out base values.
"""

import numpy as np
import pytest

from fdoracles import fd_second_wirtinger
from milnor_atlas.criteria import MfpmPair, realify, v_field
from milnor_atlas.errors import (
    DependentFrameError,
    HypothesisError,
    InputError,
    KZeroError,
)
from milnor_atlas.fold import (
    FoldVerdict,
    TangentBasis,
    assemble_M,
    classify_fold,
    goodness_witness,
    hessian_blocks,
    log_hessian_blocks,
    tangent_basis,
)
from milnor_atlas.mixedpoly import evaluate, parse
from milnor_atlas.randgen import (
    random_point_off_zeros,
    random_polar_pair,
    random_sphere_point,
    rng_for,
)

QUADRIC_PAIR = MfpmPair.detect(parse("z1^2 + z2^2", 2), parse("z1^2 - z2^2", 2))
# arg g - arg f is identically zero for this one: g = f * |z2|^2
FLAT_PAIR = MfpmPair.detect(parse("z1", 2), parse("z1*z2*~z2", 2))
P_SING = np.array([0.0 + 0j, 1.0])
P_REG = np.array([0.6 + 0j, 0.8])


# ------------------------------------------------------ tangent_basis ----

def test_tangent_basis_known_span():
    basis = tangent_basis(np.array([1.0 + 0j, 0.0]), np.array([1j, 0.0]))
    assert basis.dim == 2
    real_cols = np.column_stack([realify(basis.columns[:, k]) for k in range(2)])
    proj = real_cols @ real_cols.T
    expected = np.zeros((4, 4))
    expected[2, 2] = expected[3, 3] = 1.0
    assert np.allclose(proj, expected, atol=1e-12)


def test_tangent_basis_one_variable_is_empty():
    basis = tangent_basis(np.array([1.0 + 0j]), np.array([1j]))
    assert basis.dim == 0
    assert basis.columns.shape == (1, 0)


def test_tangent_basis_random_invariants():
    rng = rng_for(11, 1)
    for _ in range(10):
        n = int(rng.integers(2, 5))
        p = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        vf = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        basis = tangent_basis(p, vf)
        assert basis.dim == 2 * n - 2
        for k in range(basis.dim):
            col = basis.columns[:, k]
            assert abs(np.sum(col * np.conj(p)).real) <= 1e-12 * np.linalg.norm(p)
            assert abs(np.sum(col * np.conj(vf)).real) <= 1e-12 * np.linalg.norm(vf)
        real_cols = np.column_stack([realify(basis.columns[:, k]) for k in range(basis.dim)])
        assert np.allclose(real_cols.T @ real_cols, np.eye(basis.dim), atol=1e-12)


def test_tangent_basis_rejects_dependent_inputs():
    p = np.array([0.3 + 0.4j, -0.2 + 0j])
    with pytest.raises(DependentFrameError):
        tangent_basis(p, 2.5 * p)
    with pytest.raises(DependentFrameError):
        tangent_basis(p, np.zeros(2, dtype=complex))
    with pytest.raises(InputError):
        tangent_basis(p, np.zeros(3, dtype=complex))


def test_tangent_basis_rotation_spans_same_space():
    p = np.array([0.3 + 0.4j, -0.2 + 0.1j])
    vf = np.array([1j, 0.5 + 0j])
    a = tangent_basis(p, vf)
    b = tangent_basis(p, vf, rng=rng_for(11, 2))
    ra = np.column_stack([realify(a.columns[:, k]) for k in range(a.dim)])
    rb = np.column_stack([realify(b.columns[:, k]) for k in range(b.dim)])
    assert np.allclose(ra @ ra.T, rb @ rb.T, atol=1e-12)


# -------------------------------------------------- log_hessian_blocks ---

def test_log_hessian_one_variable_calculus():
    lzz, lzb, lbz, lbb = log_hessian_blocks(parse("z1", 1), np.array([1.0 + 0j]))
    assert lzz[0, 0] == pytest.approx(-1.0)
    assert lzb[0, 0] == 0 and lbz[0, 0] == 0 and lbb[0, 0] == 0

    # at a general point the value is -1/z^2
    z = 0.4 - 0.7j
    lzz, *_ = log_hessian_blocks(parse("z1", 1), np.array([z]))
    assert lzz[0, 0] == pytest.approx(-1.0 / z**2)


def test_log_hessian_mixed_block_of_modulus_squared():
    lzz, lzb, lbz, lbb = log_hessian_blocks(parse("z1*~z1", 1), np.array([1.0 + 0j]))
    assert lzb[0, 0] == pytest.approx(0.0, abs=1e-15)
    assert lbz[0, 0] == pytest.approx(0.0, abs=1e-15)
    assert lzz[0, 0] == pytest.approx(-1.0)
    assert lbb[0, 0] == pytest.approx(-1.0)


def test_log_hessian_rejects_zero_set():
    with pytest.raises(KZeroError):
        log_hessian_blocks(parse("z1", 2), np.array([0.0 + 0j, 1.0]))


def _fd_pair_blocks(pair, p, step=1e-4):
    f0 = evaluate(pair.f, p)
    g0 = evaluate(pair.g, p)
    s = float(pair.s)

    def fn(z):
        return -1j * (np.log(evaluate(pair.g, z) / g0) - s * np.log(evaluate(pair.f, z) / f0))

    n = pair.n
    blocks = []
    for bar_a in (False, True):
        for bar_b in (False, True):
            block = np.empty((n, n), dtype=complex)
            for j in range(n):
                for k in range(n):
                    block[j, k] = fd_second_wirtinger(fn, p, j + 1, bar_a, k + 1, bar_b, step=step)
            blocks.append(block)
    return blocks


def test_hessian_blocks_match_fd():
    sym = hessian_blocks(QUADRIC_PAIR, P_REG)
    fd = _fd_pair_blocks(QUADRIC_PAIR, P_REG)
    for a, b in zip(sym, fd):
        assert np.allclose(a, b, atol=1e-5)

    rng = rng_for(11, 3)
    done = 0
    k = 0
    while done < 4:
        f, g, wf, wg, s = random_polar_pair(rng_for(11, 3, k), n=2)
        k += 1
        pair = MfpmPair.build(f, g, wf, wg)
        p = random_point_off_zeros(rng, [f, g], 2, 1.0, rel=5e-2)
        if p is None:
            continue
        sym = hessian_blocks(pair, p)
        fd = _fd_pair_blocks(pair, p)
        scale = max(1.0, max(np.max(np.abs(b)) for b in sym))
        for a, b in zip(sym, fd):
            assert np.allclose(a, b, atol=1e-4 * scale)
        done += 1


def test_hessian_blocks_need_weights():
    pair = MfpmPair(parse("z1 + z2", 2), parse("z1 + z2^3", 2))
    with pytest.raises(HypothesisError):
        hessian_blocks(pair, P_REG)


# --------------------------------------------------------- assemble_M ----

def test_assemble_hand_value_quadric():
    blocks = hessian_blocks(QUADRIC_PAIR, P_SING)
    explicit = np.array([[1.0 + 0j, 1j], [0.0, 0.0]])
    M, asym = assemble_M(blocks, explicit)
    assert np.allclose(M, [[0.0, -4.0], [-4.0, 0.0]], atol=1e-12)
    assert asym <= 1e-12


def test_assemble_flat_pair_vanishes():
    blocks = hessian_blocks(FLAT_PAIR, P_REG)
    basis = tangent_basis(P_REG, v_field(FLAT_PAIR.f, P_REG))
    M, _ = assemble_M(blocks, basis)
    assert np.max(np.abs(M)) <= 1e-10


def test_assemble_congruence_law():
    blocks = hessian_blocks(QUADRIC_PAIR, P_SING)
    basis = tangent_basis(P_SING, v_field(QUADRIC_PAIR.f, P_SING))
    M, _ = assemble_M(blocks, basis)
    rng = rng_for(11, 4)
    for _ in range(10):
        A = rng.standard_normal((2, 2))
        MA, _ = assemble_M(blocks, basis.columns @ A)
        assert np.allclose(MA, A.T @ M @ A, atol=1e-10)


def test_assemble_basis_independence():
    blocks = hessian_blocks(QUADRIC_PAIR, P_SING)
    base = assemble_M(blocks, tangent_basis(P_SING, v_field(QUADRIC_PAIR.f, P_SING)))[0]
    ref = np.sort(np.linalg.eigvalsh(base))
    for k in range(20):
        basis = tangent_basis(P_SING, v_field(QUADRIC_PAIR.f, P_SING), rng=rng_for(11, 5, k))
        M, asym = assemble_M(blocks, basis)
        assert asym <= 1e-8
        # orthonormal bases of the same space: congruence by an orthogonal
        # matrix, so the whole spectrum is invariant
        assert np.allclose(np.sort(np.linalg.eigvalsh(M)), ref, atol=1e-10)
    assert ref == pytest.approx([-4.0, 4.0], abs=1e-10)


def test_assemble_conjugate_block_identity():
    blocks = hessian_blocks(QUADRIC_PAIR, P_SING)
    hbb = blocks[3]
    cols = tangent_basis(P_SING, v_field(QUADRIC_PAIR.f, P_SING)).columns
    lhs = (np.conj(cols).T @ hbb @ np.conj(cols)).real
    rhs = np.conj(cols.T @ np.conj(hbb) @ cols).real
    assert np.allclose(lhs, rhs, atol=1e-13)


def test_assemble_dimension_mismatch():
    blocks = hessian_blocks(QUADRIC_PAIR, P_SING)
    with pytest.raises(InputError):
        assemble_M(blocks, np.zeros((3, 4), dtype=complex))


# ------------------------------------------------------- classify_fold ---

def test_classify_quadric_fold_point():
    rep = classify_fold(QUADRIC_PAIR, P_SING, oracle=True)
    assert rep.verdict is FoldVerdict.FOLD
    assert rep.singular.dependent
    assert rep.eigenvalues == pytest.approx([-4.0, 4.0], abs=1e-10)
    assert rep.min_abs_eigenvalue == pytest.approx(4.0, abs=1e-10)
    assert rep.asymmetry <= 1e-8
    assert rep.oracle_agreement is True
    assert rep.goodness == "unverified"
    d = rep.as_dict()
    assert d["verdict"] == "Fold" and len(d["M"]) == 2


def test_classify_quadric_regular_point():
    rep = classify_fold(QUADRIC_PAIR, P_REG, oracle=True)
    assert rep.verdict is FoldVerdict.NOT_SINGULAR
    assert rep.M is None and rep.eigenvalues == ()
    assert rep.oracle_agreement is True


def test_classify_flat_pair_degenerate():
    rep = classify_fold(FLAT_PAIR, P_REG, oracle=True)
    assert rep.verdict is FoldVerdict.DEGENERATE_SINGULAR
    assert np.max(np.abs(rep.M)) <= 1e-10
    assert rep.oracle_agreement is True


def test_classify_one_variable_vacuous_fold():
    pair = MfpmPair.detect(parse("z1", 1), parse("~z1", 1))
    rep = classify_fold(pair, np.array([np.exp(0.3j)]), oracle=True)
    assert rep.verdict is FoldVerdict.FOLD
    assert rep.M is not None and rep.M.shape == (0, 0)
    assert any("zero-dimensional" in note for note in rep.notes)
    assert rep.oracle_agreement is True


def test_classify_requires_weights_and_off_zero_points():
    pair = MfpmPair(parse("z1 + z2", 2), parse("z1 + z2^3", 2))
    with pytest.raises(HypothesisError):
        classify_fold(pair, P_REG)
    with pytest.raises(KZeroError):
        classify_fold(QUADRIC_PAIR, np.array([1.0 + 0j, 1.0]) / np.sqrt(2))


def test_classify_goodness_passthrough():
    rep = classify_fold(QUADRIC_PAIR, P_SING, goodness="witnessed-regular")
    assert rep.goodness == "witnessed-regular"
    assert rep.as_dict()["goodness"] == "witnessed-regular"


def test_classify_verdict_stable_across_singular_circle():
    rng = rng_for(11, 6)
    for _ in range(8):
        phase = float(rng.uniform(0, 2 * np.pi))
        p = np.array([0.0 + 0j, np.exp(1j * phase)])
        rep = classify_fold(QUADRIC_PAIR, p)
        assert rep.verdict is FoldVerdict.FOLD
        assert rep.eigenvalues == pytest.approx([-4.0, 4.0], abs=1e-9)


# ---------------------------------------------------- goodness witness ---

def test_goodness_witness_none_for_good_polynomials():
    assert goodness_witness(parse("z1", 2), seed=3, per_radius=10) is None
    assert goodness_witness(parse("z1^2 + z2^2", 2), seed=3, per_radius=10) is None


def test_goodness_witness_finds_constant_phase():
    w = goodness_witness(parse("z1*~z1 + 2*z2*~z2", 2), seed=3, per_radius=10)
    assert w is not None
    w2 = goodness_witness(parse("z1*~z1 + 2*z2*~z2", 2), seed=3, per_radius=10)
    assert np.array_equal(w, w2)
