import numpy as np
import pytest

from dtcsim.collective import (
    CollectiveBasis,
    build_jplus,
    build_jx,
    build_jz,
    down_counts,
    embed_full,
    expi_hermitian,
    hermiticity_defect,
    product_rotation,
    product_site_sz_diag,
    product_sz_total_diag,
    rotation,
    unitarity_defect,
)
from dtcsim.errors import CapacityError


def test_basis_shape_and_labels():
    basis = CollectiveBasis(4)
    assert basis.dim == 5
    assert basis.total_spin == 2.0
    np.testing.assert_allclose(basis.m_labels, [2.0, 1.0, 0.0, -1.0, -2.0])


def test_basis_rejects_nonpositive():
    with pytest.raises(ValueError):
        CollectiveBasis(0)


def test_level_state_is_unit_vector():
    basis = CollectiveBasis(3)
    state = basis.level_state(0.5)
    assert state[basis.m_index(0.5)] == 1.0
    assert np.sum(np.abs(state)) == 1.0


def test_m_index_rejects_unknown_level():
    with pytest.raises(ValueError):
        CollectiveBasis(3).m_index(0.0)  # half-integer ladder only


@pytest.mark.parametrize("n_spins", [1, 2, 5])
def test_angular_momentum_algebra(n_spins):
    basis = CollectiveBasis(n_spins)
    jz = build_jz(basis)
    jp = build_jplus(basis)
    jm = jp.conj().T
    # [Jz, J+] = J+ and [J+, J-] = 2 Jz fix the normalization
    np.testing.assert_allclose(jz @ jp - jp @ jz, jp, atol=1e-12)
    np.testing.assert_allclose(jp @ jm - jm @ jp, 2 * jz, atol=1e-12)


def test_casimir_is_scalar():
    basis = CollectiveBasis(4)
    jx = build_jx(basis)
    jz = build_jz(basis)
    jy = (build_jplus(basis) - build_jplus(basis).T) / 2j
    total = jx @ jx + jy @ jy + jz @ jz
    j = basis.total_spin
    np.testing.assert_allclose(total, j * (j + 1) * np.eye(basis.dim), atol=1e-12)


def test_expi_hermitian_unitary_and_inverse():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    h = (a + a.conj().T) / 2
    u = expi_hermitian(h, -0.7)
    assert unitarity_defect(u) < 1e-12
    np.testing.assert_allclose(u @ expi_hermitian(h, 0.7), np.eye(6), atol=1e-12)


def test_rotation_pi_flips_poles():
    basis = CollectiveBasis(5)
    top = basis.level_state(basis.total_spin)
    flipped = rotation(basis, np.pi) @ top
    assert abs(flipped[basis.m_index(-basis.total_spin)]) == pytest.approx(1.0)


def test_rotation_composition():
    basis = CollectiveBasis(3)
    r = rotation(basis, 0.4) @ rotation(basis, 0.9)
    np.testing.assert_allclose(r, rotation(basis, 1.3), atol=1e-12)


def test_down_counts_matches_popcount():
    counts = down_counts(6)
    assert counts.shape == (64,)
    assert counts[0] == 0 and counts[63] == 6
    assert counts[0b100101] == 3


def test_product_sz_total_consistent_with_sites():
    n = 4
    total = sum(product_site_sz_diag(n, k) for k in range(n))
    np.testing.assert_allclose(total, product_sz_total_diag(n))


def test_product_rotation_matches_collective_on_symmetric_states():
    # the embedded top state lives in the symmetric sector, where the two
    # independently built rotations must agree
    n = 3
    basis = CollectiveBasis(n)
    theta = 0.77
    top_full = embed_full(basis, basis.level_state(basis.total_spin))
    rotated_full = product_rotation(n, theta) @ top_full
    rotated_coll = rotation(basis, theta) @ basis.level_state(basis.total_spin)
    np.testing.assert_allclose(
        rotated_full, embed_full(basis, rotated_coll), atol=1e-12
    )


def test_embed_full_preserves_norm_and_magnetization():
    n = 5
    basis = CollectiveBasis(n)
    rng = np.random.default_rng(11)
    coeffs = rng.normal(size=basis.dim) + 1j * rng.normal(size=basis.dim)
    coeffs /= np.linalg.norm(coeffs)
    full = embed_full(basis, coeffs)
    assert np.linalg.norm(full) == pytest.approx(1.0)
    mz_coll = float(np.sum(np.abs(coeffs) ** 2 * basis.m_labels))
    mz_full = float(np.sum(np.abs(full) ** 2 * product_sz_total_diag(n)))
    assert mz_full == pytest.approx(mz_coll)


def test_embed_full_capacity_limit():
    basis = CollectiveBasis(20)
    with pytest.raises(CapacityError):
        embed_full(basis, basis.level_state(10.0))


def test_hermiticity_defect():
    h = np.array([[1.0, 2.0], [2.0, -1.0]])
    assert hermiticity_defect(h) == 0.0
    assert hermiticity_defect(h + 1j * np.eye(2) * 0) == 0.0
    h[0, 1] = 3.0
    assert hermiticity_defect(h) == 1.0
