"""Pauli tensor algebra and the magic-frame change of basis for 4x4 matrices.

Conventions: Pauli ordering is (x, y, z); in tensor products the first
factor acts on qubit 1.  A two-qubit Hamiltonian is parameterized as

    H = I (x) (a.sigma) + (b.sigma) (x) I + sum_ij M_ij sigma_i (x) sigma_j

so `a` multiplies operators on the second qubit and `b` on the first.
"""
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NonHermitianInput, ValidationError

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)
PAULIS = (SX, SY, SZ)

# Fixed 4x4 matrix whose columns are the entangled (magic) basis states.
MAGIC_Q = (1.0 / np.sqrt(2.0)) * np.array(
    [[1, 0, 0, 1j],
     [0, 1j, 1, 0],
     [0, 1j, -1, 0],
     [1, 0, 0, -1j]], dtype=complex)

DEFAULT_UNITARY_TOL = 1e-10
DEFAULT_HERMITIAN_TOL = 1e-10
DEFAULT_SPECIAL_TOL = 1e-8


def is_unitary(m, tol=DEFAULT_UNITARY_TOL):
    m = np.asarray(m, dtype=complex)
    return bool(np.linalg.norm(m.conj().T @ m - np.eye(m.shape[0])) <= tol)


def is_hermitian(m, tol=DEFAULT_HERMITIAN_TOL):
    m = np.asarray(m, dtype=complex)
    return bool(np.linalg.norm(m - m.conj().T) <= tol)


def is_special(m, tol=DEFAULT_SPECIAL_TOL):
    return bool(abs(np.linalg.det(np.asarray(m, dtype=complex)) - 1.0) <= tol)


@dataclass(frozen=True)
class PauliCoefficients:
    """Pauli tensor coefficients of a two-qubit Hamiltonian.

    `a` couples through I(x)sigma (second qubit), `b` through sigma(x)I
    (first qubit), and `M[i, j]` through sigma_i (x) sigma_j.
    `identity_coeff` records the discarded trace component tr(H)/4.
    """
    a: np.ndarray
    b: np.ndarray
    M: np.ndarray
    identity_coeff: float = 0.0


def pauli_decompose(H, tol=1e-8):
    """Project a Hermitian 4x4 matrix onto the Pauli tensor basis.

    The trace component is removed silently; its coefficient is kept on
    the result for diagnostics and a warning is emitted when it exceeds
    1e-10.  Raises NonHermitianInput when ||H - H^dag|| > tol.
    """
    H = np.asarray(H, dtype=complex)
    if H.shape != (4, 4):
        raise ValidationError("expected a 4x4 matrix, got shape %r" % (H.shape,))
    if np.linalg.norm(H - H.conj().T) > tol:
        raise NonHermitianInput("matrix is not Hermitian within %g" % tol)
    trace_coeff = np.trace(H).real / 4.0
    if abs(np.trace(H)) > 1e-10:
        warnings.warn("discarding trace component %.3e of input Hamiltonian"
                      % trace_coeff, stacklevel=2)
    a = np.array([np.trace(np.kron(I2, s) @ H).real / 4.0 for s in PAULIS])
    b = np.array([np.trace(np.kron(s, I2) @ H).real / 4.0 for s in PAULIS])
    M = np.array([[np.trace(np.kron(si, sj) @ H).real / 4.0 for sj in PAULIS]
                  for si in PAULIS])
    return PauliCoefficients(a=a, b=b, M=M, identity_coeff=trace_coeff)


def pauli_compose(coeffs):
    """Inverse of pauli_decompose (trace component always zero)."""
    a = np.asarray(coeffs.a, dtype=float)
    b = np.asarray(coeffs.b, dtype=float)
    M = np.asarray(coeffs.M, dtype=float)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))
            and np.all(np.isfinite(M))):
        raise ValidationError("non-finite Pauli coefficients")
    H = np.zeros((4, 4), dtype=complex)
    for k, s in enumerate(PAULIS):
        H += a[k] * np.kron(I2, s) + b[k] * np.kron(s, I2)
    for i, si in enumerate(PAULIS):
        for j, sj in enumerate(PAULIS):
            H += M[i, j] * np.kron(si, sj)
    return H


def nonlocal_part(coeffs):
    """Drop the local (single-qubit) terms, keep the coupling tensor."""
    return PauliCoefficients(a=np.zeros(3), b=np.zeros(3),
                             M=np.array(coeffs.M, dtype=float, copy=True))


def coupling_hamiltonian(theta):
    """Canonical Hamiltonian theta1*XX + theta2*YY + theta3*ZZ."""
    t = np.asarray(theta, dtype=float)
    return (t[0] * np.kron(SX, SX) + t[1] * np.kron(SY, SY)
            + t[2] * np.kron(SZ, SZ))


def to_magic(X):
    """Conjugate into the magic frame: Q^-1 X Q."""
    return MAGIC_Q.conj().T @ np.asarray(X, dtype=complex) @ MAGIC_Q


def from_magic(X):
    """Inverse of to_magic."""
    return MAGIC_Q @ np.asarray(X, dtype=complex) @ MAGIC_Q.conj().T


def expm_hermitian(H, scale=-1j):
    """exp(scale * H) for Hermitian H via eigendecomposition."""
    w, v = np.linalg.eigh(np.asarray(H, dtype=complex))
    return (v * np.exp(scale * w)) @ v.conj().T


def su2_tensor_factor(U, tol=1e-6):
    """Split U = A (x) B with A, B in SU(2).

    U must be a (numerically exact) tensor product of single-qubit
    unitaries with unit determinant; the nearest-product realignment is
    rank one in that case.  Raises ValidationError if the residual after
    factoring exceeds tol.
    """
    U = np.asarray(U, dtype=complex)
    R = U.reshape(2, 2, 2, 2).transpose(0, 2, 1, 3).reshape(4, 4)
    u, s, vh = np.linalg.svd(R)
    A = u[:, 0].reshape(2, 2) * np.sqrt(s[0])
    B = vh[0, :].reshape(2, 2) * np.sqrt(s[0])
    dA = np.linalg.det(A)
    dB = np.linalg.det(B)
    if abs(dA) < 1e-12 or abs(dB) < 1e-12:
        raise ValidationError("degenerate factor while splitting tensor product")
    A = A / np.sqrt(dA)
    B = B / np.sqrt(dB)
    if np.linalg.norm(np.kron(A, B) - U) > np.linalg.norm(np.kron(A, B) + U):
        A = -A
    resid = np.linalg.norm(np.kron(A, B) - U)
    if resid > tol:
        raise ValidationError("matrix is not a tensor product of special "
                              "unitaries (residual %.3e)" % resid)
    return A, B


def random_su2(rng):
    """Haar-random SU(2) element."""
    z = (rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))
    q, r = np.linalg.qr(z)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return q / np.sqrt(np.linalg.det(q) + 0j)


def random_unitary4(rng):
    """Haar-random U(4) element."""
    z = (rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4)))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def matrix_to_json(m):
    """JSON object with row-major "re"/"im" arrays."""
    m = np.asarray(m, dtype=complex)
    return {"re": [[float(x) for x in row] for row in m.real],
            "im": [[float(x) for x in row] for row in m.imag]}


def matrix_from_json(obj, size=4):
    """Read a matrix from {"re": [[...]], "im": [[...]]}, validating shape
    and finiteness."""
    if not isinstance(obj, dict) or "re" not in obj or "im" not in obj:
        raise ValidationError('matrix JSON must carry "re" and "im" arrays')
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    if re.shape != (size, size) or im.shape != (size, size):
        raise ValidationError("matrix JSON must be %dx%d, got %r / %r"
                              % (size, size, re.shape, im.shape))
    if not (np.all(np.isfinite(re)) and np.all(np.isfinite(im))):
        raise ValidationError("matrix JSON contains non-finite entries")
    return re + 1j * im
