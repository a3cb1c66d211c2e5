"""Canonical (Cartan) decomposition of two-qubit Hamiltonians and gates.

The canonical form of a Hamiltonian is theta1*XX + theta2*YY + theta3*ZZ
with theta s-ordered (theta1 >= theta2 >= |theta3|); for gates the
exponent additionally satisfies pi/4 >= theta1 (the gate cell).  In the
magic frame canonical operators are diagonal; the diagonal entries are a
fixed pairing of the linear images

    phi1 = t1 + t2 - t3,  phi2 = t1 - t2 + t3,
    phi3 = -t1 + t2 + t3, phi4 = -t1 - t2 - t3.

With the magic matrix used here the diagonal appears in position order
(phi2, phi1, phi4, phi3); MAGIC_DIAG_ORDER records that pairing.
"""
from dataclasses import dataclass
from itertools import product

import numpy as np

from . import su4
from .errors import (NonHermitianInput, NonNegligibleLocalPart, NonUnitaryInput,
                     NonZeroSum)

# Position k of a canonical operator's magic diagonal holds
# phi[MAGIC_DIAG_ORDER[k]].
MAGIC_DIAG_ORDER = np.array([1, 0, 3, 2])

GATE_CELL_TOL = 1e-12


def theta_to_phi(theta):
    """Map canonical 3-vector to its zero-sum magic 4-vector."""
    t1, t2, t3 = np.asarray(theta, dtype=float)
    return np.array([t1 + t2 - t3, t1 - t2 + t3, -t1 + t2 + t3, -t1 - t2 - t3])


def phi_to_theta(phi, tol=1e-8):
    """Inverse of theta_to_phi; requires sum(phi) = 0 within tol."""
    phi = np.asarray(phi, dtype=float)
    if abs(phi.sum()) > tol:
        raise NonZeroSum("phi sums to %.3e, expected 0" % phi.sum())
    return 0.5 * np.array([phi[0] + phi[1], phi[0] + phi[2], phi[1] + phi[2]])


def s_reorder(x):
    """Sign-normalized descending reorder: absolute values sorted
    descending, the sign of the product carried by the last entry."""
    x = np.asarray(x, dtype=float)
    mags = np.sort(np.abs(x))[::-1]
    sign = np.sign(np.prod(x))
    return np.array([mags[0], mags[1], (sign if sign != 0 else 1.0) * mags[2]])


def in_gate_cell(theta, tol=GATE_CELL_TOL):
    t1, t2, t3 = theta
    return (np.pi / 4 + tol >= t1 >= t2 - tol and t2 >= abs(t3) - tol)


_SEARCH_SHIFTS = np.array(list(product(range(-2, 3), repeat=3)), dtype=int)


def _shift_candidates(theta, parity=None):
    """s_reorder(theta + pi/2 n) for every n in the search window,
    optionally restricted to a parity of sum(n).  Vectorized."""
    shifts = _SEARCH_SHIFTS
    if parity is not None:
        shifts = shifts[(shifts.sum(axis=1) % 2) == parity]
    cands = np.asarray(theta)[None, :] + (np.pi / 2) * shifts
    mags = np.sort(np.abs(cands), axis=1)[:, ::-1]
    signs = np.sign(np.prod(cands, axis=1))
    signs[signs == 0] = 1.0
    rows = np.column_stack([mags[:, 0], mags[:, 1], signs * mags[:, 2]])
    return rows, shifts


def _in_cell_rows(rows, tol=GATE_CELL_TOL):
    return ((rows[:, 0] <= np.pi / 4 + tol)
            & (rows[:, 0] >= rows[:, 1] - tol)
            & (rows[:, 1] >= np.abs(rows[:, 2]) - tol))


def _cell_key(theta):
    # minimal theta1, then theta2, then prefer the larger theta3
    return (round(theta[0], 12), round(theta[1], 12), round(-theta[2], 12))


def weyl_reduce(theta):
    """Reduce an arbitrary canonical 3-vector into the gate cell.

    Returns (theta_cell, n) where theta_cell = s_reorder(theta + pi/2 n)
    up to the s-reordering move.  Inputs already in the cell are fixed
    points (n = 0).
    """
    theta = np.asarray(theta, dtype=float)
    base = s_reorder(theta)
    if in_gate_cell(base):
        return base, np.zeros(3, dtype=int)
    # pre-fold each component to [0, pi) so the small search window suffices
    folds = -2 * np.floor(theta / np.pi).astype(int)
    folded = theta + (np.pi / 2) * folds
    rows, shifts = _shift_candidates(folded)
    mask = _in_cell_rows(rows)
    best = None
    for cand, n in zip(rows[mask], shifts[mask]):
        total_n = folds + n
        key = _cell_key(cand) + (int(np.abs(total_n).sum()),) + tuple(total_n)
        if best is None or key < best[0]:
            best = (key, cand, total_n)
    if best is None:  # unreachable for finite input, kept as a guard
        raise RuntimeError("Weyl reduction failed for %r" % (theta,))
    return best[1], best[2]


def equivalent_gate_vectors(theta):
    """The two s-ordered shift candidates representing the same gate:
    theta itself and s_reorder(theta + pi/2*(-1,0,0))."""
    theta = np.asarray(theta, dtype=float)
    shifted = theta + (np.pi / 2) * np.array([-1.0, 0.0, 0.0])
    return [s_reorder(theta), s_reorder(shifted)]


@dataclass(frozen=True)
class HamiltonianCanonicalForm:
    theta: np.ndarray
    localA: np.ndarray
    localB: np.ndarray


@dataclass(frozen=True)
class UnitaryCanonicalForm:
    theta: np.ndarray
    localA1: np.ndarray
    localB1: np.ndarray
    localA2: np.ndarray
    localB2: np.ndarray
    globalPhase: complex


def position_ordered_frame(H_magic):
    """Orthogonal frame K with H_magic = K^T diag(d) K and d equal to the
    descending eigenvalues placed in magic position order.

    The frame maps conjugation by from_magic(K) onto the sorting of the
    magic diagonal; det K is fixed to +1 by flipping one eigenvector.
    """
    sym = np.real(H_magic)
    sym = (sym + sym.T) / 2
    w, v = np.linalg.eigh(sym)
    order = np.argsort(w)[::-1][MAGIC_DIAG_ORDER]
    v = v[:, order]
    if np.linalg.det(v) < 0:
        v = v.copy()
        v[:, -1] = -v[:, -1]
    return v.T, w[order]


def canon_hamiltonian(H, local_tol=1e-8, hermit_tol=1e-8):
    """Canonical decomposition H = (A (x) B)^dag H_theta (A (x) B).

    H must be Hermitian with negligible single-qubit part (strip it with
    nonlocal_part first).  theta comes from the descending eigenvalues of
    the real symmetric magic-frame matrix via phi_to_theta.
    """
    H = np.asarray(H, dtype=complex)
    if np.linalg.norm(H - H.conj().T) > hermit_tol:
        raise NonHermitianInput("Hamiltonian is not Hermitian within %g"
                                % hermit_tol)
    H = H - (np.trace(H) / 4.0) * np.eye(4)
    coeffs = su4.pauli_decompose(H, tol=hermit_tol)
    local_norm = np.linalg.norm(coeffs.a) + np.linalg.norm(coeffs.b)
    if local_norm > local_tol:
        raise NonNegligibleLocalPart(
            "local part has norm %.3e > %g; strip it first" % (local_norm, local_tol))
    Hm = su4.to_magic(H)
    K, diag_pos = position_ordered_frame(Hm)
    phi = np.sort(diag_pos)[::-1]
    theta = 0.5 * np.array([phi[0] + phi[1], phi[0] + phi[2], phi[1] + phi[2]])
    A, B = su4.su2_tensor_factor(su4.from_magic(K))
    return HamiltonianCanonicalForm(theta=theta, localA=A, localB=B)


def _real_orthogonal_eigenbasis(m, cluster_tol=1e-7):
    """Real orthonormal eigenbasis of a complex symmetric unitary matrix.

    Real and imaginary parts commute, so eigenspaces of the real part are
    refined by diagonalizing the imaginary part inside each degenerate
    cluster.
    """
    x = (np.real(m) + np.real(m).T) / 2
    y = (np.imag(m) + np.imag(m).T) / 2
    wx, P = np.linalg.eigh(x)
    P = P.copy()
    start = 0
    n = len(wx)
    while start < n:
        stop = start + 1
        while stop < n and wx[stop] - wx[stop - 1] < cluster_tol:
            stop += 1
        if stop - start > 1:
            sub = P[:, start:stop]
            yb = sub.T @ y @ sub
            _, vy = np.linalg.eigh((yb + yb.T) / 2)
            P[:, start:stop] = sub @ vy
        start = stop
    return P


def _match_columns(values, targets, tol=1e-6):
    """Assign eigenvector columns (eigenvalues `values`) to positions with
    prescribed `targets`, greedily by closeness on the unit circle."""
    pairs = sorted((abs(values[j] - targets[k]), j, k)
                   for j in range(len(values)) for k in range(len(targets)))
    col_for_pos = [None] * len(targets)
    used = set()
    filled = set()
    for dist, j, k in pairs:
        if j in used or k in filled:
            continue
        col_for_pos[k] = j
        used.add(j)
        filled.add(k)
    worst = max(abs(values[col_for_pos[k]] - targets[k])
                for k in range(len(targets)))
    return col_for_pos, worst


def _branch_theta_candidates(u):
    """Gate-cell candidates reachable for one SU(4) branch.

    Eigenphases of u^T u fix phi mod pi; representatives are folded to a
    zero-sum vector (descending sort, then pi subtracted from the leading
    entries) and reduced by in-branch moves: s-reordering plus pi/2
    shifts with even total weight.
    """
    m = u.T @ u
    P = _real_orthogonal_eigenbasis(m)
    vals = np.diagonal(P.T @ m @ P)
    phi0 = np.sort(-np.angle(vals) / 2.0)[::-1]
    s = int(round(phi0.sum() / np.pi))
    phi = phi0.copy()
    if s > 0:
        phi[:s] -= np.pi
    elif s < 0:
        phi[s:] += np.pi
    phi = np.sort(phi)[::-1]
    phi -= phi.sum() / 4.0  # remove numerical residue
    theta_raw = phi_to_theta(phi, tol=1e-6)
    folds = -2 * np.floor(theta_raw / np.pi).astype(int)
    folded = theta_raw + (np.pi / 2) * folds
    rows, _ = _shift_candidates(folded, parity=int(folds.sum()) % 2)
    return list(rows[_in_cell_rows(rows)]), P, vals


def canon_unitary(U, tol=1e-8):
    """Canonical decomposition of a two-qubit gate.

    Returns UnitaryCanonicalForm with theta in the gate cell
    (pi/4 >= theta1 >= theta2 >= |theta3|) and

        U = globalPhase * (A1 (x) B1) U_theta (A2 (x) B2).

    The input is normalized into SU(4) by a fourth root of det U; all
    four roots are tried and the branch whose reduced theta is smallest
    in the cell ordering is kept.
    """
    U = np.asarray(U, dtype=complex)
    if U.shape != (4, 4) or not su4.is_unitary(U, tol=tol):
        raise NonUnitaryInput("input is not a 4x4 unitary within %g" % tol)
    det = np.linalg.det(U)
    root0 = abs(det) ** 0.25 * np.exp(1j * np.angle(det) / 4)
    options = []
    branch_data = {}
    for k in range(4):
        phase = root0 * (1j ** k)
        u = su4.to_magic(U / phase)
        cands, P, vals = _branch_theta_candidates(u)
        branch_data[k] = (u, P, vals, phase)
        for cand in cands:
            options.append((_cell_key(cand), k, cand))
    options.sort(key=lambda item: item[0])

    last_err = None
    for _, k, theta in options:
        u, P, vals, phase = branch_data[k]
        try:
            form = _assemble_form(U, u, P, vals, phase, theta)
        except (ValueError, np.linalg.LinAlgError) as exc:  # pragma: no cover
            last_err = exc
            continue
        resid = _reconstruction_residual(U, form)
        if resid < max(10 * tol, 1e-9):
            return form
        last_err = RuntimeError("residual %.3e" % resid)
    raise RuntimeError("canonical decomposition failed: %r" % last_err)


def _assemble_form(U, u, P, vals, phase, theta):
    Utheta = su4.expm_hermitian(su4.coupling_hamiltonian(theta))
    d = np.diagonal(su4.to_magic(Utheta))
    col_for_pos, _ = _match_columns(vals, d ** 2)
    S = P[:, col_for_pos].T.copy()
    if np.linalg.det(S) < 0:
        S[0, :] = -S[0, :]
    R = u @ S.T @ np.diag(np.conj(d))
    R = np.real(R)
    A1, B1 = su4.su2_tensor_factor(su4.from_magic(R))
    A2, B2 = su4.su2_tensor_factor(su4.from_magic(S))
    return UnitaryCanonicalForm(theta=theta, localA1=A1, localB1=B1,
                                localA2=A2, localB2=B2,
                                globalPhase=complex(phase))


def _reconstruction_residual(U, form):
    Utheta = su4.expm_hermitian(su4.coupling_hamiltonian(form.theta))
    rebuilt = (form.globalPhase
               * np.kron(form.localA1, form.localB1)
               @ Utheta
               @ np.kron(form.localA2, form.localB2))
    return np.linalg.norm(rebuilt - U)


def reconstruct_unitary(form):
    """Rebuild the gate from its canonical data."""
    Utheta = su4.expm_hermitian(su4.coupling_hamiltonian(form.theta))
    return (form.globalPhase * np.kron(form.localA1, form.localB1)
            @ Utheta @ np.kron(form.localA2, form.localB2))


def reconstruct_hamiltonian(form):
    local = np.kron(form.localA, form.localB)
    return local.conj().T @ su4.coupling_hamiltonian(form.theta) @ local
