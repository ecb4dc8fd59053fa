import numpy as np
import pytest
from scipy.linalg import expm

from bwmlab.algebra import (AlgebraError, ChainOperator, Tolerance, eig_hermitian, embed_pair,
                            kron, matexp, residual)
from bwmlab.wigner import little_d_matrix, spin_matrices

from conftest import random_complex


def test_kron_identity():
    assert np.array_equal(kron(np.eye(2), np.eye(3)), np.eye(6))


def test_kron_diagonal():
    assert np.array_equal(kron(np.diag([1, 2]), np.eye(2)), np.diag([1, 1, 2, 2]))


def test_kron_mixed_product(rng):
    a, b, c, d = (random_complex(rng, 2, 2) for _ in range(4))
    assert residual(kron(a, b) @ kron(c, d), kron(a @ c, b @ d)) < 1e-14


def test_kron_associative(rng):
    a, b, c = (random_complex(rng, 2, 2) for _ in range(3))
    assert residual(kron(kron(a, b), c), kron(a, kron(b, c))) < 1e-14


def test_embed_identity():
    assert np.allclose(embed_pair(np.eye(9), 1, 2, 2).matrix, np.eye(9))


def test_embed_adjacent_is_kron(rng):
    op = random_complex(rng, 9, 9)
    assert residual(embed_pair(op, 1, 2, 3).matrix, kron(op, np.eye(3))) < 1e-15
    assert residual(embed_pair(op, 2, 3, 3).matrix, kron(np.eye(3), op)) < 1e-15


def test_embed_trace_multiplicative(rng):
    op = random_complex(rng, 9, 9)
    assert abs(np.trace(embed_pair(op, 1, 3, 4).matrix) - 9 * np.trace(op)) < 1e-10


def test_embed_nonadjacent_matches_product_state(rng):
    a, b = random_complex(rng, 3, 3), random_complex(rng, 3, 3)
    got = embed_pair(kron(a, b), 1, 3, 3).matrix
    assert residual(got, kron(kron(a, np.eye(3)), b)) < 1e-14
    got = embed_pair(kron(a, b), 2, 4, 4).matrix
    want = kron(kron(kron(np.eye(3), a), np.eye(3)), b)
    assert residual(got, want) < 1e-14


def test_embed_disjoint_pairs_commute(rng):
    x = embed_pair(random_complex(rng, 9, 9), 1, 3, 4).matrix
    y = embed_pair(random_complex(rng, 9, 9), 2, 4, 4).matrix
    assert residual(x @ y, y @ x) < 1e-12


@pytest.mark.parametrize("k,l,n", [(0, 1, 2), (2, 1, 3), (1, 5, 4), (2, 2, 3)])
def test_embed_index_errors(k, l, n):
    with pytest.raises(AlgebraError):
        embed_pair(np.eye(9), k, l, n)


def test_chain_operator_dimension_checked():
    with pytest.raises(AlgebraError):
        ChainOperator(2, np.eye(8))


def test_eig_diagonal_exact():
    vals, _ = eig_hermitian(np.diag([3.0, 1.0, 2.0]))
    assert list(vals) == [1.0, 2.0, 3.0]


def test_eig_pauli_x():
    vals, _ = eig_hermitian([[0, 1], [1, 0]])
    assert np.allclose(vals, [-1, 1], atol=1e-15)


def test_eig_random_reconstruction(rng):
    a = random_complex(rng, 9, 9)
    a = a + a.conj().T
    vals, vecs = eig_hermitian(a)
    assert residual(vecs @ np.diag(vals) @ vecs.conj().T, a) < 1e-12
    assert residual(vecs.conj().T @ vecs, np.eye(9)) < 1e-12
    assert np.all(np.diff(vals) >= 0)


def test_eig_phase_convention(rng):
    a = random_complex(rng, 5, 5)
    _, vecs = eig_hermitian(a + a.conj().T)
    for col in vecs.T:
        i = np.argmax(np.abs(col))
        assert abs(col[i].imag) < 1e-12 and col[i].real > 0


def test_eig_rejects_non_hermitian():
    with pytest.raises(AlgebraError):
        eig_hermitian([[0, 1], [0, 0]])


def test_residual_examples():
    a = np.arange(9.0).reshape(3, 3)
    assert residual(a, a) == 0
    assert residual(np.zeros((3, 3)), np.eye(3)) == pytest.approx(1.0)
    assert residual(np.eye(3), 2 * np.eye(3)) == pytest.approx(0.5)


def test_residual_shape_mismatch():
    with pytest.raises(AlgebraError):
        residual(np.eye(2), np.eye(3))


def test_tolerance_validation():
    with pytest.raises(AlgebraError):
        Tolerance(0, 0)
    assert Tolerance().accepts(1e-11)
    assert not Tolerance().accepts(1e-8)


def test_matexp_zero_and_diag():
    assert np.allclose(matexp(np.zeros((3, 3))), np.eye(3))
    assert np.allclose(matexp(np.diag([1j * np.pi, 0])), np.diag([-1, 1]), atol=1e-15)


def test_matexp_spin1_rotation():
    # exp(-i theta J_y) is the rotation whose matrix elements are d^1(theta)
    jp, jm, _ = spin_matrices(1)
    jy = (jp - jm) / 2j
    got = matexp(-1j * (np.pi / 2) * jy)
    assert residual(got, little_d_matrix(1, np.pi / 2)) < 1e-14


def test_matexp_against_scipy(rng):
    for n in (2, 4, 8):
        a = 3 * random_complex(rng, n, n)
        assert residual(matexp(a), expm(a)) < 1e-10


def test_matexp_derivative_check(rng):
    a = random_complex(rng, 4, 4)
    h = 1e-6
    num = (matexp((1 + h) * a) - matexp((1 - h) * a)) / (2 * h)
    assert residual(num, a @ matexp(a)) < 1e-8


def test_matexp_dimension_limit():
    with pytest.raises(AlgebraError):
        matexp(np.eye(9))
