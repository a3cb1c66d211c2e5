import numpy as np
import pytest
from numpy.testing import assert_allclose

from gatereach import su4
from gatereach.errors import NonHermitianInput, ValidationError
from conftest import random_hermitian, random_local


def test_pauli_decompose_basis_elements():
    c = su4.pauli_decompose(np.kron(su4.SX, su4.SX))
    assert_allclose(c.a, 0, atol=1e-14)
    assert_allclose(c.b, 0, atol=1e-14)
    assert_allclose(c.M, np.diag([1.0, 0.0, 0.0]), atol=1e-14)


def test_pauli_decompose_local_term():
    # sigma_z on the first qubit lands in b per the tensor convention
    c = su4.pauli_decompose(np.kron(su4.SZ, su4.I2))
    assert_allclose(c.a, 0, atol=1e-14)
    assert_allclose(c.b, [0, 0, 1], atol=1e-14)
    assert_allclose(c.M, 0, atol=1e-14)


def test_pauli_decompose_dipolar_shape():
    H = su4.coupling_hamiltonian([1, 1, -2])
    c = su4.pauli_decompose(H)
    assert_allclose(c.M, np.diag([1.0, 1.0, -2.0]), atol=1e-14)
    assert_allclose(c.a, 0, atol=1e-14)
    assert_allclose(c.b, 0, atol=1e-14)


def test_pauli_decompose_rejects_non_hermitian():
    with pytest.raises(NonHermitianInput):
        su4.pauli_decompose(np.eye(4) + 1j * np.eye(4) * 1e-3
                            + np.diag([0, 1, 0, 0]) @ np.diag([1, 0, 0, 0]))


def test_trace_component_recorded():
    H = su4.coupling_hamiltonian([1, 0, 0]) + 0.7 * np.eye(4)
    with pytest.warns(UserWarning):
        c = su4.pauli_decompose(H)
    assert_allclose(c.identity_coeff, 0.7, atol=1e-12)
    assert_allclose(su4.pauli_compose(c), su4.coupling_hamiltonian([1, 0, 0]),
                    atol=1e-12)


def test_pauli_compose_examples():
    c = su4.PauliCoefficients(a=np.zeros(3), b=np.zeros(3), M=np.eye(3))
    assert_allclose(su4.pauli_compose(c), su4.coupling_hamiltonian([1, 1, 1]),
                    atol=1e-14)
    c = su4.PauliCoefficients(a=np.array([1.0, 0, 0]), b=np.zeros(3),
                              M=np.zeros((3, 3)))
    assert_allclose(su4.pauli_compose(c), np.kron(su4.I2, su4.SX), atol=1e-14)


def test_magic_diagonal_of_coupling_tensor():
    # oracle: conjugate by Q numerically and read the diagonal
    H = su4.pauli_compose(su4.PauliCoefficients(
        a=np.zeros(3), b=np.zeros(3), M=np.diag([2.0, 1.0, -1.0])))
    Hm = su4.to_magic(H)
    assert np.abs(Hm - np.diag(np.diagonal(Hm))).max() < 1e-12
    d = np.real(np.diagonal(Hm))
    assert_allclose(np.sort(d)[::-1], [4, 0, -2, -2], atol=1e-12)
    # fixed pairing of positions: (phi2, phi1, phi4, phi3)
    assert_allclose(d, np.array([4, 0, -2, -2])[[1, 0, 3, 2]], atol=1e-12)


def test_roundtrip_random_hermitian(rng):
    for _ in range(1000):
        H = random_hermitian(rng)
        H0 = H - np.trace(H) / 4 * np.eye(4)
        c = su4.pauli_decompose(H0)
        assert np.linalg.norm(su4.pauli_compose(c) - H0) < 1e-10


def test_nonlocal_part_strips_locals(rng):
    c = su4.PauliCoefficients(a=rng.standard_normal(3),
                              b=rng.standard_normal(3),
                              M=rng.standard_normal((3, 3)))
    H = su4.pauli_compose(c)
    stripped = su4.pauli_compose(su4.nonlocal_part(su4.pauli_decompose(H)))
    c2 = su4.pauli_decompose(stripped)
    assert_allclose(c2.a, 0, atol=1e-12)
    assert_allclose(c2.b, 0, atol=1e-12)
    assert_allclose(c2.M, c.M, atol=1e-12)


def test_magic_roundtrip_and_identity():
    assert_allclose(su4.to_magic(np.eye(4)), np.eye(4), atol=1e-15)
    X = np.arange(16).reshape(4, 4) + 1j
    assert_allclose(su4.from_magic(su4.to_magic(X)), X, atol=1e-12)


def test_locals_become_real_orthogonal(rng):
    # the SU(2)xSU(2) <-> SO(4) isomorphism in the magic frame
    for _ in range(1000):
        m = su4.to_magic(random_local(rng))
        assert np.abs(m.imag).max() < 1e-9
        r = m.real
        assert np.linalg.norm(r @ r.T - np.eye(4)) < 1e-9
        assert abs(np.linalg.det(r) - 1) < 1e-9


def test_su2_tensor_factor(rng):
    for _ in range(200):
        A = su4.random_su2(rng)
        B = su4.random_su2(rng)
        A2, B2 = su4.su2_tensor_factor(np.kron(A, B))
        assert np.linalg.norm(np.kron(A2, B2) - np.kron(A, B)) < 1e-12
        assert abs(np.linalg.det(A2) - 1) < 1e-12
        assert abs(np.linalg.det(B2) - 1) < 1e-12


def test_predicates():
    assert su4.is_unitary(np.eye(4))
    assert not su4.is_unitary(1.001 * np.eye(4))
    assert su4.is_hermitian(su4.coupling_hamiltonian([1, 2, 3]))
    assert su4.is_special(np.eye(4))
    assert not su4.is_special(np.exp(0.2j) * np.eye(4))
    assert su4.is_unitary(1.001 * np.eye(4), tol=0.1)


def test_matrix_json_roundtrip(rng):
    m = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    back = su4.matrix_from_json(su4.matrix_to_json(m))
    assert_allclose(back, m, atol=0)


@pytest.mark.parametrize("bad", [
    {"re": [[0] * 4] * 4},
    {"re": [[0] * 3] * 3, "im": [[0] * 3] * 3},
    {"re": [[0] * 4] * 4, "im": [[float("nan")] * 4] * 4},
    [1, 2, 3],
])
def test_matrix_json_validation(bad):
    with pytest.raises(ValidationError):
        su4.matrix_from_json(bad)
