"""Tests for copies, local filtering, and the distillability probe."""

import numpy as np
import pytest

from entwit.distill import (
    CapExceededError,
    FilterAnnihilatesError,
    FilterPair,
    apply_filter,
    distill_search,
    example4_check,
    example4_frame,
    n_fold_copy,
)
from entwit.qstate import BipartiteDims, DensityMatrix, validate_density
from entwit.search import SearchConfig
from entwit.zoo import isotropic_state, max_entangled, random_separable

FAST = SearchConfig(restarts=4, max_iters=200, tol=1e-9, seed=0)


def test_single_copy_is_identity():
    rho = max_entangled(2).density()
    out = n_fold_copy(rho, 1)
    assert out.dims == rho.dims
    assert np.allclose(out.matrix, rho.matrix, atol=1e-15)


def test_two_copies_regroup_product_state():
    # For rho = rho_A x rho_B two regrouped copies equal
    # (rho_A x rho_A) x (rho_B x rho_B) in the (m^2, n^2) split.
    rng = np.random.default_rng(13)
    ga = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    gb = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    rho_a = ga @ ga.conj().T
    rho_a /= np.trace(rho_a).real
    rho_b = gb @ gb.conj().T
    rho_b /= np.trace(rho_b).real
    rho = DensityMatrix(BipartiteDims(2, 3), np.kron(rho_a, rho_b))
    out = n_fold_copy(rho, 2)
    assert out.dims == BipartiteDims(4, 9)
    expected = np.kron(np.kron(rho_a, rho_a), np.kron(rho_b, rho_b))
    assert np.allclose(out.matrix, expected, atol=1e-12)


def test_two_copies_preserve_purity():
    rho = max_entangled(2).density()
    out = n_fold_copy(rho, 2)
    assert abs(np.trace(out.matrix) - 1.0) < 1e-12
    purity = np.trace(out.matrix @ out.matrix).real
    assert abs(purity - 1.0) < 1e-12


def test_copy_caps():
    rho = max_entangled(2).density()
    with pytest.raises(CapExceededError, match="CAP_EXCEEDED"):
        n_fold_copy(rho, 3)
    big = DensityMatrix(BipartiteDims(5, 5), np.eye(25) / 25.0)
    with pytest.raises(CapExceededError, match="CAP_EXCEEDED"):
        n_fold_copy(big, 2)


def test_filter_pair_validation():
    with pytest.raises(ValueError):
        FilterPair(np.zeros((2, 3)), np.eye(3))  # zero block
    with pytest.raises(ValueError):
        FilterPair(np.eye(1), np.eye(3))  # target side < 2
    f = FilterPair(np.eye(2), np.eye(3))
    assert f.out_dims == BipartiteDims(2, 3)


def test_identity_filter_is_identity():
    rho = max_entangled(3).density()
    f = FilterPair(np.eye(3), np.eye(3))
    out = apply_filter(rho, f, rho.dims)
    assert np.allclose(out.matrix, rho.matrix, atol=1e-13)


def test_truncation_filter_projects_max_entangled():
    # Keeping levels {0, 1} on both sides of the 3x3 max-entangled state
    # yields the 2x2 Bell state after renormalization.
    rho = max_entangled(3).density()
    keep = np.eye(2, 3)
    f = FilterPair(keep, keep)
    out = apply_filter(rho, f, BipartiteDims(2, 2))
    assert np.allclose(out.matrix, max_entangled(2).density().matrix, atol=1e-12)


def test_filter_output_validates_for_valid_input():
    rng = np.random.default_rng(14)
    for _ in range(10):
        rho = random_separable(BipartiteDims(3, 3), 3, rng)
        a = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
        b = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
        out = apply_filter(rho, FilterPair(a, b), BipartiteDims(2, 2))
        validate_density(out.matrix, out.dims)


def test_filter_shape_mismatch_raises():
    rho = max_entangled(2).density()
    f = FilterPair(np.eye(2, 3), np.eye(2))
    with pytest.raises(ValueError):
        apply_filter(rho, f, BipartiteDims(2, 2))


def test_filter_annihilation_raises():
    # |00><00| filtered onto levels {1, ...} has zero weight.
    amp = np.zeros(9, dtype=complex)
    amp[0] = 1.0
    from entwit.qstate import PureState

    rho = PureState(BipartiteDims(3, 3), amp).density()
    keep_high = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    f = FilterPair(keep_high, keep_high)
    with pytest.raises(FilterAnnihilatesError, match="FILTER_ANNIHILATES"):
        apply_filter(rho, f, BipartiteDims(2, 2))


def test_example4_frame_is_unitary():
    u, v = example4_frame()
    assert np.allclose(u, np.eye(2), atol=1e-15)
    assert np.max(np.abs(v @ v.conj().T - np.eye(3))) < 1e-12


@pytest.mark.filterwarnings("ignore::UserWarning")
def test_example4_check_frozen_values():
    rep = example4_check(0.5)
    ev = rep.eval
    assert abs(ev.h_val - 1.0 / 6.0) < 1e-12
    assert abs(ev.p_val - 1.0 / 72.0) < 1e-12
    assert abs(ev.q_val - 1.0 / 24.0) < 1e-12
    assert abs(ev.w_val - 134.0 / 5184.0) < 1e-12
    assert not ev.violated
    assert not rep.distillable_evidence
    assert rep.projected_state.dims == BipartiteDims(2, 3)
    assert rep.projected_ppt.is_npt
    assert abs(rep.projected_ppt.min_eigenvalue + 0.3953802205448357) < 1e-12


@pytest.mark.filterwarnings("ignore::UserWarning")
def test_example4_check_grid_is_p_independent():
    reports = example4_check(0.0, grid=[0.1 * k for k in range(1, 11)])
    assert len(reports) == 10
    w0 = reports[0].eval.w_val
    for rep in reports[1:]:
        assert abs(rep.eval.w_val - w0) < 1e-12
        assert rep.projected_ppt.is_npt


def test_distill_search_bell():
    rep = distill_search(max_entangled(2).density(), 1, FAST)
    assert rep.distillable_evidence
    assert rep.projected_ppt.is_npt
    assert rep.eval.f_value >= 1.0 / 64.0 - 1e-8


def test_distill_search_separable_negative():
    rng = np.random.default_rng(15)
    rho = random_separable(BipartiteDims(2, 2), 3, rng)
    rep = distill_search(rho, 1, FAST)
    assert not rep.distillable_evidence


def test_distill_search_truncation_helps_isotropic():
    # The 3x3 isotropic state at f = 0.9 projects onto a 2x2 isotropic
    # state of higher fidelity, where the witness search succeeds.
    rep = distill_search(isotropic_state(3, 0.9), 1, FAST)
    assert rep.distillable_evidence
    assert rep.projected_ppt.is_npt


def test_distill_evidence_implies_npt():
    rng = np.random.default_rng(16)
    from entwit.zoo import random_mixture

    hits = 0
    for _ in range(10):
        rho = random_mixture(BipartiteDims(2, 2), 2, rng)
        rep = distill_search(rho, 1, FAST)
        if rep.distillable_evidence:
            hits += 1
            assert rep.projected_ppt.is_npt
    assert hits >= 1


def test_distill_search_copy_cap():
    with pytest.raises(CapExceededError):
        distill_search(max_entangled(2).density(), 3, FAST)
