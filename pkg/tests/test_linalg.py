import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from entfid.errors import ConvergenceFailure, DimensionMismatch, NotDensityMatrix, NotHermitian, NotNormalized
from entfid.linalg import (
    BipartiteKet,
    binary_entropy,
    check_density,
    fidelity,
    frobenius_norm,
    hermitian_eig,
    partial_trace,
    psd_sqrt,
    spectral_norm,
    tensor,
    trace_norm,
    von_neumann_entropy,
)
from entfid.sampling import random_density, random_hermitian, random_ket, random_pure_density, random_unitary

from .conftest import seeds

sizes = st.integers(min_value=1, max_value=9)


def test_eig_of_diagonal_is_sorted_descending():
    e = hermitian_eig(np.diag([1.0, 3.0, 2.0]))
    assert np.allclose(e.eigenvalues, [3.0, 2.0, 1.0])
    assert np.allclose(np.abs(e.eigenvectors), np.eye(3)[:, [1, 2, 0]])


def test_eig_pauli_y():
    y = np.array([[0, -1j], [1j, 0]])
    e = hermitian_eig(y)
    assert np.allclose(e.eigenvalues, [1.0, -1.0], atol=1e-14)
    assert np.allclose(e.reconstruct(), y, atol=1e-14)


def test_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eig(np.array([[0, 1], [0, 0]]))


def test_eig_rejects_non_square():
    with pytest.raises(DimensionMismatch):
        hermitian_eig(np.zeros((2, 3)))


def test_eig_reports_nonconvergence():
    with pytest.raises(ConvergenceFailure):
        hermitian_eig(random_hermitian(np.random.default_rng(0), 6), max_sweeps=1)


@given(seeds, sizes)
def test_eig_reconstructs_and_matches_reference(seed, n):
    h = random_hermitian(np.random.default_rng(seed), n)
    e = hermitian_eig(h)
    v = e.eigenvectors
    assert np.max(np.abs(v.conj().T @ v - np.eye(n))) <= 1e-10
    assert np.max(np.abs(e.reconstruct() - h)) <= 1e-10
    # independent LAPACK route, used only as a test oracle
    assert np.allclose(e.eigenvalues, np.linalg.eigvalsh(h)[::-1], atol=1e-10)
    assert np.all(np.diff(e.eigenvalues) <= 0)


@given(seeds, sizes)
def test_eig_phase_convention_is_deterministic(seed, n):
    h = random_hermitian(np.random.default_rng(seed), n)
    e1, e2 = hermitian_eig(h), hermitian_eig(h.copy())
    assert np.array_equal(e1.eigenvectors, e2.eigenvectors)
    for k in range(n):
        col = e1.eigenvectors[:, k]
        first = col[np.flatnonzero(np.abs(col) > 1e-12)[0]]
        assert abs(first.imag) <= 1e-14 and first.real > 0


def test_degenerate_eigenvalues():
    u = random_unitary(np.random.default_rng(3), 4)
    h = u @ np.diag([2.0, 2.0, 1.0, 0.0]) @ u.conj().T
    assert np.allclose(hermitian_eig(h).eigenvalues, [2, 2, 1, 0], atol=1e-12)


@given(seeds, st.integers(1, 4), st.integers(1, 4))
def test_norms_against_svd(seed, r, c):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(r, c)) + 1j * rng.normal(size=(r, c))
    s = np.linalg.svd(m, compute_uv=False)
    assert spectral_norm(m) == pytest.approx(s[0], abs=1e-10)
    assert trace_norm(m) == pytest.approx(s.sum(), abs=1e-10)
    assert frobenius_norm(m) == pytest.approx(np.sqrt((s**2).sum()), abs=1e-10)


def test_norms_of_zero():
    assert spectral_norm(np.zeros((2, 2))) == 0.0
    assert trace_norm(np.zeros((3, 2))) == 0.0


@given(seeds, st.sampled_from([2, 3, 4]))
def test_fidelity_properties(seed, d):
    rng = np.random.default_rng(seed)
    r, s = random_density(rng, d), random_density(rng, d)
    f = fidelity(r, s)
    assert -1e-12 <= f <= 1 + 1e-9
    assert f == pytest.approx(fidelity(s, r), abs=1e-8)
    assert fidelity(r, r) == pytest.approx(1.0, abs=1e-9)
    u = random_unitary(rng, d)
    assert fidelity(u @ r @ u.conj().T, u @ s @ u.conj().T) == pytest.approx(f, abs=1e-8)


@given(seeds)
def test_fidelity_pure_pure_is_overlap_modulus(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=3) + 1j * rng.normal(size=3)
    b = rng.normal(size=3) + 1j * rng.normal(size=3)
    a /= np.linalg.norm(a)
    b /= np.linalg.norm(b)
    f = fidelity(np.outer(a, a.conj()), np.outer(b, b.conj()))
    assert f == pytest.approx(abs(np.vdot(a, b)), abs=1e-8)


def test_fidelity_orthogonal_pure_states():
    assert fidelity(np.diag([1.0, 0.0]), np.diag([0.0, 1.0])) == pytest.approx(0.0, abs=1e-12)


def test_fidelity_mixed_against_pure():
    assert fidelity(np.eye(2) / 2, np.diag([1.0, 0.0])) == pytest.approx(2**-0.5, abs=1e-12)


def test_psd_sqrt_squares_back(rng):
    r = random_density(rng, 3)
    s = psd_sqrt(r)
    assert np.allclose(s @ s, r, atol=1e-12)


def test_check_density_rejections():
    with pytest.raises(NotDensityMatrix):
        check_density(np.diag([0.5, 0.6]))
    with pytest.raises(NotDensityMatrix):
        check_density(np.diag([1.5, -0.5]))
    with pytest.raises(NotDensityMatrix):
        check_density(np.array([[0.5, 0.5], [0.0, 0.5]]))


@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_partial_trace_of_product(seed, da, db):
    rng = np.random.default_rng(seed)
    a, b = random_density(rng, da), random_density(rng, db)
    ab = tensor(a, b)
    assert np.allclose(partial_trace(ab, (da, db), "A"), a, atol=1e-12)
    assert np.allclose(partial_trace(ab, (da, db), "B"), b, atol=1e-12)


def test_partial_trace_bad_dims():
    with pytest.raises(DimensionMismatch):
        partial_trace(np.eye(4), (2, 3))
    with pytest.raises(ValueError):
        partial_trace(np.eye(4), (2, 2), keep="C")


def test_entropies():
    assert von_neumann_entropy(np.eye(4) / 4) == pytest.approx(2.0)
    assert von_neumann_entropy(np.diag([1.0, 0.0])) == 0.0
    assert binary_entropy(0.5) == pytest.approx(1.0)
    assert binary_entropy(0.0) == 0.0 and binary_entropy(1.0) == 0.0
    assert binary_entropy(0.25) == pytest.approx(0.8112781244591328, abs=1e-15)
    with pytest.raises(ValueError):
        binary_entropy(1.5)


@given(seeds, st.sampled_from([2, 3]))
def test_entropy_bounds(seed, d):
    r = random_density(np.random.default_rng(seed), d)
    assert -1e-12 <= von_neumann_entropy(r) <= np.log2(d) + 1e-9


@given(seeds)
def test_pure_state_has_zero_entropy(seed):
    assert von_neumann_entropy(random_pure_density(np.random.default_rng(seed), 3)) <= 1e-9


def test_bipartite_ket_layout_and_product():
    k = BipartiteKet.product([1, 0], [0, 1, 0])
    assert k.amplitudes[1] == 1  # |0>|1> at index 0 * 3 + 1
    assert k.is_product()
    assert np.allclose(k.coefficient_matrix(), [[0, 1, 0], [0, 0, 0]])
    bell = BipartiteKet(2, 2, np.array([1, 0, 0, 1]) / np.sqrt(2))
    assert not bell.is_product()
    assert np.allclose(bell.schmidt_coefficients(), [2**-0.5, 2**-0.5])


def test_bipartite_ket_validation():
    with pytest.raises(DimensionMismatch):
        BipartiteKet(2, 2, np.ones(3))
    with pytest.raises(NotNormalized):
        BipartiteKet(2, 2, np.zeros(4)).normalized()
    k = BipartiteKet(2, 2, np.ones(4))
    with pytest.raises(ValueError):
        k.amplitudes[0] = 2


@given(seeds)
def test_random_ket_is_normalized(seed):
    k = random_ket(np.random.default_rng(seed), 2, 3)
    assert k.norm == pytest.approx(1.0)
