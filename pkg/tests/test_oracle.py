import numpy as np
import pytest

from qca1d import (
    DimensionCapExceeded,
    RuleTable,
    apply_global,
    basis_state,
    config_index,
    defect_estimate,
    evolve,
    global_matrix,
    index_config,
    is_permutation_matrix,
    make_family,
    patt_rule,
    probabilities,
    random_state,
    unitarity_defect,
)
from qca1d.oracle import neighborhood_offsets


def test_identity_map_global_matrix(ident):
    # delta(i, i2) shifts left; its parity twin delta(i, i1) is the identity map
    from qca1d import parity_transform

    copy_first = parity_transform(ident)
    np.testing.assert_array_equal(global_matrix(copy_first, 2), np.eye(4))
    swap = np.eye(4)[:, [0, 2, 1, 3]]
    np.testing.assert_array_equal(global_matrix(ident, 2), swap)


def test_deterministic_columns(ident):
    patt = patt_rule()
    f = global_matrix(patt, 5)
    ones = np.abs(f - 1) <= 1e-12
    zeros = np.abs(f) <= 1e-12
    assert np.all(ones.sum(axis=0) == 1)
    assert np.all((ones | zeros).all(axis=0))
    assert is_permutation_matrix(f)


def test_f21_defect_tiny(f21):
    assert unitarity_defect(global_matrix(f21, 3)) <= 1e-12


def test_scaled_identity_defect(ident):
    amps = ident.amplitudes.copy()
    amps[0] = [0.5, 0.0]
    rule = RuleTable(2, 2, amps)
    f = global_matrix(rule, 2)
    gram = f.conj().T @ f
    assert gram[0, 0] == pytest.approx(0.0625)
    assert unitarity_defect(f) >= 0.5


def test_f21_00_periodic_defect_matches_mismatch_cycle(f21_00):
    # the all-0 / all-1 off-diagonal entry is w_{03}^N, so the two-frame
    # infinite family genuinely fails on rings
    defect = unitarity_defect(global_matrix(f21_00, 4))
    w03 = abs(np.vdot(f21_00.vector("00"), f21_00.vector("11")))
    assert defect == pytest.approx(w03**4)
    assert defect == pytest.approx(np.sin(np.pi / 3) ** 4)


def test_evolve_identity_map(ident):
    from qca1d import parity_transform

    rng = np.random.default_rng(0)
    state = random_state(2, 4, rng)
    np.testing.assert_allclose(evolve(parity_transform(ident), 4, state, 5), state, atol=1e-12)


def test_deterministic_shift():
    rule = make_family("f21", {})  # copies the right neighbor: a left shift
    n = 5
    cfg = (0, 1, 1, 0, 1)
    out = evolve(rule, n, basis_state(2, n, cfg), 1)
    shifted = cfg[1:] + cfg[:1]
    expect = basis_state(2, n, shifted)
    np.testing.assert_allclose(out, expect, atol=1e-12)


def test_evolve_preserves_norm(f21):
    rng = np.random.default_rng(1)
    state = random_state(2, 6, rng)
    out = evolve(f21, 6, state, 10)
    assert np.linalg.norm(out) == pytest.approx(1.0, abs=1e-9)


def test_translation_covariance(f21):
    n = 4
    f = global_matrix(f21, n)
    shift = np.zeros((16, 16))
    for s in range(16):
        cfg = index_config(s, 2, n)
        shift[config_index(cfg[1:] + cfg[:1], 2), s] = 1
    assert np.max(np.abs(shift @ f - f @ shift)) <= 1e-12


@pytest.mark.parametrize("family,params,k", [
    ("f21", {"theta": 0.5, "rho": 1.2}, 2),
    ("f31", {"r1": 1.1, "r2": 0.8, "r6": 1.3, "theta": 0.9}, 3),
    ("patt", {}, 4),
])
def test_matrix_free_matches_dense(family, params, k):
    rule = make_family(family, params)
    rng = np.random.default_rng(2)
    for n in (k, k + 1, 6):
        state = random_state(2, n, rng)
        for offsets in (None, tuple(range(1, k + 1)), tuple(range(-1, k - 1))):
            f = global_matrix(rule, n, offsets=offsets)
            np.testing.assert_allclose(
                apply_global(rule, n, state, offsets=offsets), f @ state, atol=1e-12)
            np.testing.assert_allclose(
                apply_global(rule, n, state, adjoint=True, offsets=offsets),
                f.conj().T @ state, atol=1e-12)


def test_matrix_free_wrap_case():
    rule = make_family("f31", {"r1": 1.1, "r2": 0.8, "r6": 1.3})
    rng = np.random.default_rng(3)
    state = random_state(2, 2, rng)
    f = global_matrix(rule, 2)
    np.testing.assert_allclose(apply_global(rule, 2, state), f @ state, atol=1e-12)


def test_evolve_matrix_free_path(f21):
    rng = np.random.default_rng(4)
    state = random_state(2, 5, rng)
    dense = evolve(f21, 5, state, 3)
    free = evolve(f21, 5, state, 3, max_dense_dim=1)
    np.testing.assert_allclose(free, dense, atol=1e-12)


def test_defect_estimate(f21, f21_00):
    rng = np.random.default_rng(5)
    assert defect_estimate(f21, 13, samples=2, rng=rng) <= 1e-10
    assert defect_estimate(f21_00, 13, samples=4, rng=rng) > 1e-4


def test_probabilities(ident):
    probs = probabilities(basis_state(2, 3, "010"))
    assert probs[config_index((0, 1, 0), 2)] == 1.0 and probs.sum() == 1.0
    superposition = np.zeros(8, dtype=complex)
    superposition[:4] = 0.5
    np.testing.assert_allclose(probabilities(superposition)[:4], 0.25)
    with pytest.raises(ValueError, match="not normalized"):
        probabilities(superposition * 1.1)


def test_probabilities_after_evolution(f21):
    rng = np.random.default_rng(6)
    out = evolve(f21, 8, random_state(2, 8, rng), 10)
    assert probabilities(out).sum() == pytest.approx(1.0, abs=1e-9)


def test_dimension_cap():
    rule = make_family("f21", {})
    with pytest.raises(DimensionCapExceeded):
        global_matrix(rule, 13)
    global_matrix(rule, 5, max_dim=32)


def test_offset_validation():
    assert neighborhood_offsets(None, 3) == (0, 1, 2)
    with pytest.raises(ValueError):
        neighborhood_offsets((0, 2, 3), 3)
    with pytest.raises(ValueError):
        neighborhood_offsets((0, 1), 3)


def test_site_count_validation(f21):
    with pytest.raises(ValueError):
        global_matrix(f21, 0)
