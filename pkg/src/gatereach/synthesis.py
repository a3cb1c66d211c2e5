"""Constructive schedule synthesis for reachable two-qubit gates.

Given a target canonical vector, a coupling profile and a feasible time T,
the constructive route is: pick the feasible shift candidate beta, move to
the magic 4-vector picture (phi_beta must be majorized by the accumulated
gamma(T)), build a doubly stochastic transfer matrix, decompose it into
permutation blocks (Birkhoff), and allocate each block a fraction of the
running coupling integral.  Each wall segment conjugates the drift by a
local gate that permutes the magic diagonal, so the time-ordered product
collapses to exp(-i diag(phi_beta)) in the magic frame; prefix/suffix
locals and a shift-correction gate map that onto the requested gate.
"""
from dataclasses import dataclass

import numpy as np

from . import su4
from .canonical import MAGIC_DIAG_ORDER, s_reorder, theta_to_phi
from .errors import NotReachable, ValidationError
from .majorization import birkhoff, s_major_margins, transfer_matrix
from .profiles import _bisect_root
from .reachability import SHIFTS

_OMEGA = MAGIC_DIAG_ORDER  # self-inverse pairing of magic positions


@dataclass(frozen=True)
class Segment:
    """One conjugated-evolution interval.

    `permutation` acts on the descending canonical 4-vector phi(t);
    localA/localB realize it (composed with the stream frame) as a
    conjugation of the drift.  effectiveTheta records the Pauli diagonal
    of the effective Hamiltonian at the segment midpoint.
    """
    t0: float
    t1: float
    permutation: tuple
    localA: np.ndarray
    localB: np.ndarray
    effectiveTheta: np.ndarray


@dataclass(frozen=True)
class PulseSchedule:
    T: float
    segments: tuple
    prefixA: np.ndarray
    prefixB: np.ndarray
    suffixA: np.ndarray
    suffixB: np.ndarray
    shift: tuple = (0, 0, 0)
    shiftCorrection: np.ndarray = None  # 4x4, product of -i sigma_j sigma_j
    targetTheta: np.ndarray = None
    beta: np.ndarray = None


def validate_schedule(schedule, tol=1e-12):
    """Check the segment list tiles [0, T] without gaps or overlaps."""
    t = 0.0
    for seg in schedule.segments:
        if seg.t0 < t - tol or seg.t0 > t + tol:
            raise ValidationError("segment starting at %g leaves a gap/overlap "
                                  "at %g" % (seg.t0, t))
        if seg.t1 < seg.t0:
            raise ValidationError("segment with negative duration")
        t = seg.t1
    if abs(t - schedule.T) > tol:
        raise ValidationError("segments end at %g, schedule T is %g"
                              % (t, schedule.T))


def _perm_apply(sigma, x):
    return np.asarray(x)[list(sigma)]


def _signed_perm_matrix(sigma):
    """The matrix M with M^T diag(d) M = diag(d applied through sigma),
    det fixed to +1 by negating the last column if needed."""
    n = len(sigma)
    M = np.zeros((n, n))
    for i in range(n):
        M[sigma[i], i] = 1.0
    if np.linalg.det(M) < 0:
        M[:, -1] = -M[:, -1]
    return M


def permutation_to_local(sigma):
    """Local gate (A, B) whose conjugation permutes the magic diagonal.

    For any Hamiltonian diagonal in the magic frame with diagonal d,
    (A (x) B)^dag H (A (x) B) has magic diagonal d[sigma[k]] at slot k.
    All 24 permutations are realizable.
    """
    M = _signed_perm_matrix(sigma)
    return su4.su2_tensor_factor(su4.from_magic(M))


def _value_match_perm(source, target, tol=1e-8):
    """Permutation q with source[q[i]] = target[i], matching by value."""
    used = [False] * len(source)
    q = []
    for tv in target:
        best = None
        for j, sv in enumerate(source):
            if used[j]:
                continue
            d = abs(sv - tv)
            if best is None or d < best[0]:
                best = (d, j)
        if best is None or best[0] > tol:
            raise ValidationError("vectors are not permutations of each other")
        used[best[1]] = True
        q.append(best[1])
    return tuple(q)


def _segment_local(K_stream, sigma):
    """Conjugation local realizing `sigma` (on sorted phi) on a stream
    whose magic frame is K_stream."""
    r = tuple(_OMEGA[sigma[_OMEGA[i]]] for i in range(4))
    M = np.zeros((4, 4))
    for i in range(4):
        M[r[i], i] = 1.0
    ML = K_stream.T @ M
    if np.linalg.det(ML) < 0:
        ML = ML.copy()
        ML[:, -1] = -ML[:, -1]
    return su4.su2_tensor_factor(su4.from_magic(ML))


def _shift_correction(shift):
    """exp(i pi/2 sum_j n_j sigma_j sigma_j); None for the zero shift."""
    if not any(shift):
        return None
    C = np.eye(4, dtype=complex)
    for nj, s in zip(shift, su4.PAULIS):
        if nj:
            ss = np.kron(s, s)
            C = C @ su4.expm_hermitian(ss, scale=1j * (np.pi / 2) * nj)
    return C


def _choose_shift(theta_U, Theta, eps):
    best = None
    for n in SHIFTS:
        beta = s_reorder(np.asarray(theta_U) + (np.pi / 2) * n)
        margins = s_major_margins(Theta, beta)
        if np.all(margins >= -eps):
            slack = margins.min()
            if best is None or slack > best[0]:
                best = (slack, tuple(int(v) for v in n), beta)
    if best is None:
        raise NotReachable("target is not reachable at this time")
    return best[1], best[2]


def synthesize(theta_U, profile, T, eps=1e-9, quad_tol=1e-12):
    """Build a pulse schedule realizing the gate class theta_U at time T.

    Requires reachable(theta_U, profile, T).  The returned schedule
    propagates exactly to the canonical representative U_thetaU: the core
    segments realize U_beta for the chosen shift candidate, and the
    prefix/suffix locals plus the shift correction undo the s-reordering
    and the pi/2 shift.
    """
    theta_U = np.asarray(theta_U, dtype=float)
    T = float(T)
    if T < 0:
        raise ValidationError("T must be nonnegative")
    I2 = np.eye(2, dtype=complex)
    if T == 0:
        if np.linalg.norm(theta_U) > 1e-12:
            raise NotReachable("only the identity class is reachable at T = 0")
        return PulseSchedule(T=0.0, segments=(), prefixA=I2, prefixB=I2,
                             suffixA=I2, suffixB=I2, shift=(0, 0, 0),
                             shiftCorrection=None, targetTheta=theta_U,
                             beta=np.zeros(3))

    Theta = profile.integrate_theta(T, tol=quad_tol).Theta
    shift, beta = _choose_shift(theta_U, Theta, eps)
    phi_beta = theta_to_phi(beta)
    gamma = theta_to_phi(Theta)

    B = transfer_matrix(phi_beta, gamma, eps=max(eps, 1e-9))
    dec = birkhoff(B)

    intervals = profile.frame_intervals(T)
    stream_ids = sorted({sid for _, _, sid in intervals})
    stream_dirs = {sid: theta_to_phi(profile.stream_frame(sid)[1])
                   for sid in stream_ids}
    blocks = _merge_blocks(dec, stream_dirs)

    segments = _allocate_segments(profile, intervals, stream_ids, blocks)
    segs = []
    frames = {sid: profile.stream_frame(sid)[0] for sid in stream_ids}
    for (a, b, sid, sigma) in segments:
        if sigma is None:
            A, Bl = I2, I2
            sigma = (0, 1, 2, 3)
        else:
            A, Bl = _segment_local(frames[sid], sigma)
        mid = 0.5 * (a + b)
        Heff = (np.kron(A, Bl).conj().T @ profile.hamiltonian_at(mid)
                @ np.kron(A, Bl))
        eff = np.real(np.diagonal(su4.pauli_decompose(Heff).M))
        segs.append(Segment(t0=a, t1=b, permutation=tuple(sigma),
                            localA=A, localB=Bl, effectiveTheta=eff))

    # locals mapping the realized U_beta onto U_thetaU
    theta_shift = theta_U + (np.pi / 2) * np.asarray(shift, dtype=float)
    pos_beta = _perm_apply(_OMEGA, phi_beta)
    pos_shift = _perm_apply(_OMEGA, theta_to_phi(theta_shift))
    q = _value_match_perm(pos_beta, pos_shift)
    W = su4.from_magic(_signed_perm_matrix(q))
    C = _shift_correction(shift)
    suffix = W.conj().T
    prefix = W if C is None else C.conj().T @ W @ C
    pA, pB = su4.su2_tensor_factor(prefix)
    sA, sB = su4.su2_tensor_factor(suffix)
    schedule = PulseSchedule(T=T, segments=tuple(segs), prefixA=pA, prefixB=pB,
                             suffixA=sA, suffixB=sB, shift=shift,
                             shiftCorrection=C, targetTheta=theta_U.copy(),
                             beta=beta)
    validate_schedule(schedule)
    return schedule


def _merge_blocks(dec, stream_dirs):
    """Group Birkhoff terms acting identically on every stream direction;
    blocks come out largest weight first."""
    groups = {}
    for w, sigma in zip(dec.weights, dec.perms):
        key = tuple(tuple(np.round(_perm_apply(sigma, stream_dirs[sid]), 10))
                    for sid in sorted(stream_dirs))
        if key in groups:
            w0, sig0 = groups[key]
            groups[key] = (w0 + w, min(sig0, sigma))
        else:
            groups[key] = (w, sigma)
    blocks = sorted(groups.values(), key=lambda item: (-item[0], item[1]))
    blocks = [(w, sigma) for w, sigma in blocks if w > 1e-12]
    total = sum(w for w, _ in blocks)
    return [(w / total, sigma) for w, sigma in blocks]


def _allocate_segments(profile, intervals, stream_ids, blocks):
    """Partition the wall intervals so each block receives exactly its
    weight fraction of every stream's accumulated theta1 integral."""
    out = []
    fractions = np.cumsum([w for w, _ in blocks])[:-1]
    for sid in stream_ids:
        ivs = [(a, b) for a, b, s in intervals if s == sid]
        total = float(sum(profile.integral_between(a, b)[0] for a, b in ivs))
        if total <= 0:
            out.extend((a, b, sid, None) for a, b in ivs)
            continue
        cuts = list(fractions * total)
        block = 0
        acc = 0.0  # stream mass accumulated before the current position
        for a, b in ivs:
            t_cur = a
            while cuts:
                remaining = profile.integral_between(t_cur, b)[0]
                need = cuts[0] - acc
                if need > remaining - 1e-13 * max(total, 1.0):
                    break  # next cut lies beyond this interval
                if need <= 1e-13 * max(total, 1.0):
                    cut_t = t_cur
                else:
                    cut_t = _bisect_root(
                        lambda t: profile.integral_between(t_cur, t)[0] - need,
                        t_cur, b, rel_tol=1e-14)
                if cut_t > t_cur:
                    out.append((t_cur, cut_t, sid, blocks[block][1]))
                acc = cuts.pop(0)
                block += 1
                t_cur = cut_t
            if t_cur < b:
                out.append((t_cur, b, sid, blocks[block][1]))
                acc += profile.integral_between(t_cur, b)[0]
    out.sort(key=lambda s: s[0])
    segments = []
    for seg in out:
        if segments and abs(seg[0] - segments[-1][1]) > 1e-12:
            raise ValidationError("allocation produced a gap at t = %g" % seg[0])
        if seg[1] - seg[0] <= 0:
            continue
        segments.append(seg)
    return segments


def schedule_target_phi(schedule, profile, quad_tol=1e-12):
    """Accumulated permuted magic vector sum over segments of
    int sigma(phi(t)) dt; equals phi(beta) for synthesized schedules."""
    total = np.zeros(4)
    for seg in schedule.segments:
        contrib = theta_to_phi(profile.integral_between(seg.t0, seg.t1,
                                                        tol=quad_tol))
        total += _perm_apply(seg.permutation, contrib)
    return total
