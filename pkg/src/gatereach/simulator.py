"""Independent verification of pulse schedules by time-ordered propagation.

Constant-coupling segments are exponentiated exactly; time-varying ones
use fixed-step midpoint exponentials (second-order Magnus).  The final
gate is compared to targets through canonical parameters, so verification
never reuses the synthesis bookkeeping.
"""
from dataclasses import dataclass

import numpy as np

from . import su4
from .canonical import canon_unitary, equivalent_gate_vectors
from .errors import StepTooLarge
from .profiles import ConstantProfile, PiecewiseConstantProfile
from .synthesis import (PulseSchedule, Segment, permutation_to_local,
                        validate_schedule)


@dataclass(frozen=True)
class PropagationSettings:
    """max_step None picks period/256 for periodic profiles (refined until
    the error estimate meets `tolerance`); an explicit max_step that fails
    the estimate raises StepTooLarge instead."""
    max_step: float = None
    tolerance: float = 1e-6
    method: str = "auto"  # "auto" | "magnus2" | "exact"


@dataclass(frozen=True)
class PropagationResult:
    unitary: np.ndarray
    unitarity_defect: float
    steps: int


def _segment_generator(profile, segment):
    L = np.kron(segment.localA, segment.localB)

    def H_eff(t):
        return L.conj().T @ profile.hamiltonian_at(t) @ L

    return H_eff


def _evolve_constant(H, dt):
    return su4.expm_hermitian(H, scale=-1j * dt)


def _segment_breaks(profile, t0, t1):
    if isinstance(profile, PiecewiseConstantProfile):
        inner = [t for t in profile.edges if t0 < t < t1]
        return [t0] + inner + [t1]
    return [t0, t1]


def propagate(schedule, profile, settings=None):
    """Time-ordered propagation of a schedule under the profile.

    Returns suffix * shiftCorrection * (product of conjugated segment
    evolutions) * prefix, re-unitarized once by polar projection with the
    pre-projection defect reported.
    """
    settings = settings or PropagationSettings()
    validate_schedule(schedule)
    U = np.kron(schedule.prefixA, schedule.prefixB)
    steps = 0
    exact_kinds = (ConstantProfile, PiecewiseConstantProfile)
    for seg in schedule.segments:
        H_eff = _segment_generator(profile, seg)
        if isinstance(profile, exact_kinds) and settings.method in ("auto", "exact"):
            breaks = _segment_breaks(profile, seg.t0, seg.t1)
            for a, b in zip(breaks[:-1], breaks[1:]):
                U = _evolve_constant(H_eff(0.5 * (a + b)), b - a) @ U
                steps += 1
            continue
        U_seg, n = _propagate_varying(H_eff, seg.t0, seg.t1, profile, settings)
        U = U_seg @ U
        steps += n
    if schedule.shiftCorrection is not None:
        U = schedule.shiftCorrection @ U
    U = np.kron(schedule.suffixA, schedule.suffixB) @ U
    defect = np.linalg.norm(U.conj().T @ U - np.eye(4))
    uu, _, vv = np.linalg.svd(U)
    return PropagationResult(unitary=uu @ vv, unitarity_defect=float(defect),
                             steps=steps)


def _propagate_varying(H_eff, t0, t1, profile, settings):
    span = t1 - t0
    if span <= 0:
        return np.eye(4, dtype=complex), 0
    if settings.max_step is not None:
        dt0 = settings.max_step
        auto = False
    elif profile.period is not None:
        dt0 = profile.period / 256.0
        auto = True
    else:
        dt0 = span / 64.0
        auto = True
    n = max(1, int(np.ceil(span / dt0)))
    for _ in range(20):
        dt = span / n
        # Richardson probe on the first step: one midpoint step vs two halves
        one = _evolve_constant(H_eff(t0 + dt / 2), dt)
        two = (_evolve_constant(H_eff(t0 + 0.75 * dt), dt / 2)
               @ _evolve_constant(H_eff(t0 + 0.25 * dt), dt / 2))
        est = np.linalg.norm(one - two) * n
        if est <= settings.tolerance:
            break
        if not auto:
            raise StepTooLarge("estimated error %.3e exceeds tolerance %.3e; "
                               "reduce max_step" % (est, settings.tolerance))
        n *= 2
    else:
        raise StepTooLarge("could not meet tolerance %.3e by refining steps"
                           % settings.tolerance)
    dt = span / n
    U = np.eye(4, dtype=complex)
    for k in range(n):
        U = _evolve_constant(H_eff(t0 + (k + 0.5) * dt), dt) @ U
    return U, n


def local_equiv_distance(U, V, tol=1e-8):
    """Euclidean distance between canonical vectors, minimized over the
    pi/2-shift candidates of each gate; zero iff locally equivalent."""
    tu = canon_unitary(np.asarray(U, dtype=complex), tol=tol).theta
    tv = canon_unitary(np.asarray(V, dtype=complex), tol=tol).theta
    return float(min(np.linalg.norm(a - b)
                     for a in equivalent_gate_vectors(tu)
                     for b in equivalent_gate_vectors(tv)))


def random_schedule_sampler(profile, T, segments, rng, haar_locals=True):
    """Random bang-bang schedule: random magic-diagonal permutations held
    for random positive dwell times summing to T, optionally composed with
    Haar-random local conjugations.  No target bookkeeping."""
    I2 = np.eye(2, dtype=complex)
    if segments == 0:
        return PulseSchedule(T=float(T), segments=(), prefixA=I2, prefixB=I2,
                             suffixA=I2, suffixB=I2)
    durations = rng.dirichlet(np.ones(segments)) * T
    edges = np.concatenate([[0.0], np.cumsum(durations)])
    edges[-1] = T
    segs = []
    for k in range(segments):
        sigma = tuple(int(i) for i in rng.permutation(4))
        A, B = permutation_to_local(sigma)
        if haar_locals:
            A = A @ su4.random_su2(rng)
            B = B @ su4.random_su2(rng)
        mid = 0.5 * (edges[k] + edges[k + 1])
        L = np.kron(A, B)
        eff = np.real(np.diagonal(
            su4.pauli_decompose(L.conj().T @ profile.hamiltonian_at(mid) @ L).M))
        segs.append(Segment(t0=float(edges[k]), t1=float(edges[k + 1]),
                            permutation=sigma, localA=A, localB=B,
                            effectiveTheta=eff))
    return PulseSchedule(T=float(T), segments=tuple(segs), prefixA=I2,
                         prefixB=I2, suffixA=I2, suffixB=I2)
