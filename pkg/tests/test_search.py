"""Tests for unitary parametrization and the frame optimizer."""

import numpy as np
import pytest

from entwit.qstate import BipartiteDims, PureState, haar_random_unitary
from entwit.search import (
    ProductStateReport,
    SearchConfig,
    ViolationReport,
    constructive_pure_violation,
    max_violation,
    param_to_unitary,
    unitary_to_params,
)
from entwit.witness import evaluate_witness
from entwit.zoo import (
    isotropic_state,
    max_entangled,
    random_product_pure,
    random_pure,
    random_separable,
)

FAST = SearchConfig(restarts=6, max_iters=300, tol=1e-9, seed=0)


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(restarts=0)
    with pytest.raises(ValueError):
        SearchConfig(max_iters=0)
    with pytest.raises(ValueError):
        SearchConfig(tol=0.0)


def test_zero_params_give_identity():
    for d in (2, 3, 4):
        u = param_to_unitary(np.zeros(d * d), d)
        assert np.allclose(u, np.eye(d), atol=1e-14)


def test_param_to_unitary_is_unitary():
    rng = np.random.default_rng(1)
    for d in (2, 3, 5):
        p = rng.normal(size=d * d)
        u = param_to_unitary(p, d)
        assert np.max(np.abs(u @ u.conj().T - np.eye(d))) < 1e-12


def test_param_scaling_is_generator_scaling():
    # Doubling the parameters squares the unitary: both exponentiate
    # the same generator.
    rng = np.random.default_rng(2)
    p = rng.normal(size=9) * 0.3
    u1 = param_to_unitary(p, 3)
    u2 = param_to_unitary(2.0 * p, 3)
    assert np.allclose(u2, u1 @ u1, atol=1e-12)


def test_param_round_trip():
    rng = np.random.default_rng(3)
    for d in (2, 3, 4):
        for _ in range(10):
            u = haar_random_unitary(d, rng)
            p = unitary_to_params(u, d)
            u2 = param_to_unitary(p, d)
            # The two may differ by a global phase only.
            phase = u2[0, :] @ u[0, :].conj()
            phase /= abs(phase)
            assert np.max(np.abs(u2 - phase * u)) < 1e-10


def test_constructive_bell():
    u, v, ev = constructive_pure_violation(max_entangled(2))
    assert np.max(np.abs(u @ u.conj().T - np.eye(2))) < 1e-12
    assert np.max(np.abs(v @ v.conj().T - np.eye(2))) < 1e-12
    assert abs(ev.w_val + 1.0 / 64.0) < 1e-12
    assert ev.violated


def test_constructive_matches_schmidt_weights():
    # At the Schmidt frames w = -(c0 c1)^2 / 16 for any dims.
    rng = np.random.default_rng(4)
    for m, n in ((2, 2), (2, 3), (3, 3), (4, 3)):
        for _ in range(25):
            psi = random_pure(BipartiteDims(m, n), rng)
            u, v, ev = constructive_pure_violation(psi)
            from entwit.qstate import schmidt_decompose

            c = schmidt_decompose(psi).coefficients
            assert abs(ev.h_val) < 1e-10
            assert abs(ev.p_val) < 1e-10
            assert abs(ev.w_val + (c[0] * c[1]) ** 2 / 16.0) < 1e-10
            assert ev.w_val < -1e-12


def test_constructive_product_reports_rank_one():
    rng = np.random.default_rng(5)
    psi = random_product_pure(BipartiteDims(3, 3), rng)
    out = constructive_pure_violation(psi)
    assert isinstance(out, ProductStateReport)
    assert out.schmidt.rank == 1


def test_max_violation_bell():
    rep = max_violation(max_entangled(2).density(), FAST)
    assert isinstance(rep, ViolationReport)
    assert rep.f_value >= 1.0 / 64.0 - 1e-8
    assert rep.best_eval.violated
    assert rep.restarts_run == FAST.restarts


def test_max_violation_pure_uses_constructive_start():
    # Restart 1 is seeded at the Schmidt frames, so even a tiny budget
    # attains the constructive value on entangled pure states.
    rng = np.random.default_rng(6)
    psi = random_pure(BipartiteDims(3, 4), rng)
    cfg = SearchConfig(restarts=2, max_iters=50, tol=1e-9, seed=0)
    rep = max_violation(psi.density(), cfg)
    _, _, ev = constructive_pure_violation(psi)
    assert rep.f_value >= -ev.w_val - 1e-9


def test_max_violation_separable_floor():
    rng = np.random.default_rng(7)
    for _ in range(5):
        rho = random_separable(BipartiteDims(2, 2), 3, rng)
        rep = max_violation(rho, FAST)
        assert rep.f_value <= 1e-10
        assert not rep.best_eval.violated


def test_max_violation_ppt_isotropic_zero():
    rho = isotropic_state(2, 0.4)
    rep = max_violation(rho, FAST)
    assert rep.f_value <= 1e-10


def test_soundness_of_reported_frames():
    # The reported value must reproduce from the reported frames.
    rng = np.random.default_rng(8)
    rho = random_pure(BipartiteDims(2, 3), rng).density()
    rep = max_violation(rho, FAST)
    ev = evaluate_witness(rho, rep.best_u, rep.best_v)
    assert abs(-ev.w_val - rep.f_value) < 1e-12


def test_restart_monotonicity():
    rng = np.random.default_rng(9)
    rho = random_pure(BipartiteDims(2, 2), rng).density()
    f_small = max_violation(
        rho, SearchConfig(restarts=3, max_iters=200, tol=1e-9, seed=5)).f_value
    f_large = max_violation(
        rho, SearchConfig(restarts=8, max_iters=200, tol=1e-9, seed=5)).f_value
    assert f_large >= f_small - 1e-12


def test_determinism():
    rng = np.random.default_rng(10)
    rho = random_pure(BipartiteDims(2, 3), rng).density()
    rep1 = max_violation(rho, FAST)
    rep2 = max_violation(rho, FAST)
    assert rep1.f_value == rep2.f_value
    assert np.array_equal(rep1.best_u, rep2.best_u)
    assert np.array_equal(rep1.best_v, rep2.best_v)
    assert rep1.evaluations == rep2.evaluations
    assert rep1.best_restart == rep2.best_restart


def test_local_unitary_near_invariance():
    # The optimum is invariant under local rotations of the state; a finite
    # restart budget only needs to get close.
    rng = np.random.default_rng(11)
    psi = random_pure(BipartiteDims(2, 2), rng)
    rho = psi.density()
    big = np.kron(haar_random_unitary(2, rng), haar_random_unitary(2, rng))
    rotated = rho.matrix.copy()
    rotated = big @ rotated @ big.conj().T
    from entwit.qstate import DensityMatrix

    rho_rot = DensityMatrix(BipartiteDims(2, 2), rotated)
    f1 = max_violation(rho, FAST).f_value
    f2 = max_violation(rho_rot, FAST).f_value
    assert abs(f1 - f2) <= 0.05 * max(f1, f2)


def test_report_arrays_read_only():
    rep = max_violation(max_entangled(2).density(), FAST)
    with pytest.raises(ValueError):
        rep.best_u[0, 0] = 0.0
