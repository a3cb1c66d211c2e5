import numpy as np
import pytest

from gatereach import su4


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_local(rng):
    return np.kron(su4.random_su2(rng), su4.random_su2(rng))


def random_hermitian(rng, scale=1.0):
    z = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    h = (z + z.conj().T) / 2
    return scale * h


def random_nonlocal_hamiltonian(rng, scale=1.0):
    coeffs = su4.PauliCoefficients(a=np.zeros(3), b=np.zeros(3),
                                   M=scale * rng.standard_normal((3, 3)))
    return su4.pauli_compose(coeffs)
