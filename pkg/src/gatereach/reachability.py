"""Reachable-set membership and minimum-time computation.

A gate with canonical vector theta_U can be generated within time T iff
one of the two shift candidates beta_n = s_reorder(theta_U + pi/2 n),
n in {(0,0,0), (-1,0,0)}, is s-majorized by Theta(T) = int_0^T theta(t) dt.
Feasibility is monotone in T (the three accumulated quantities Theta1,
Theta1+Theta2+Theta3 and Theta1+Theta2-Theta3 are nondecreasing), so the
minimum time is found by doubling then bisection.
"""
import math
from dataclasses import dataclass

import numpy as np

from .canonical import equivalent_gate_vectors, in_gate_cell
from .errors import HorizonExceeded, ValidationError
from .majorization import s_major_margins, s_majorizes

SHIFTS = (np.array([0, 0, 0]), np.array([-1, 0, 0]))


@dataclass(frozen=True)
class MinTimeResult:
    """Outcome of a minimum-time solve.

    activeShift is the integer shift vector n whose candidate becomes
    feasible first; bindingInequality indexes (1..3) the s-majorization
    inequality that is tight at T_min.  periods/wholePeriodCount are set
    only for periodic profiles; flatFeasibility flags a vanishing
    coupling at T_min (non-unique boundary).
    """
    T_min: float
    activeShift: tuple
    bindingInequality: int
    Theta_at_Tmin: np.ndarray
    margins: np.ndarray
    periods: float = None
    wholePeriodCount: int = None
    flatFeasibility: bool = False


def _shift_candidates(theta_U):
    return list(zip(SHIFTS, equivalent_gate_vectors(theta_U)))


def reachable(theta_U, profile, T, eps=1e-9, quad_tol=1e-12):
    """True iff the gate class theta_U is reachable within time T."""
    theta_U = np.asarray(theta_U, dtype=float)
    if not in_gate_cell(theta_U, tol=1e-9):
        raise ValidationError("theta_U must lie in the gate cell")
    Theta = profile.integrate_theta(T, tol=quad_tol).Theta
    return any(s_majorizes(Theta, beta, eps=eps)
               for _, beta in _shift_candidates(theta_U))


def reachable_given_integral(theta_U, Theta, eps=1e-9):
    return any(s_majorizes(Theta, beta, eps=eps)
               for _, beta in _shift_candidates(theta_U))


def min_time(theta_U, profile, tol=1e-9, eps=1e-9, quad_tol=None,
             horizon=None):
    """Minimum time to generate the gate class theta_U under the profile.

    Bisection over the monotone feasibility predicate, bracketed by
    doubling from a probe-rate guess.  Raises HorizonExceeded when the
    profile cannot accumulate enough within the search horizon.
    """
    theta_U = np.asarray(theta_U, dtype=float)
    if not in_gate_cell(theta_U, tol=1e-9):
        raise ValidationError("theta_U must lie in the gate cell")
    if tol <= 0:
        raise ValidationError("tol must be positive")
    if quad_tol is None:
        quad_tol = min(1e-12, tol * 1e-3)

    candidates = _shift_candidates(theta_U)
    need = max(beta[0] for _, beta in candidates)

    def feasible(T):
        Theta = profile.integrate_theta(T, tol=quad_tol).Theta
        return any(s_majorizes(Theta, beta, eps=eps) for _, beta in candidates)

    if feasible(0.0):
        return _finish(theta_U, profile, 0.0, candidates, quad_tol)

    # probe the coupling rate to scale the initial bracket and horizon
    probe_T = profile.period if profile.period is not None else 1.0
    if profile.duration_limit is not None:
        probe_T = min(probe_T, profile.duration_limit)
    probe = profile.integrate_theta(probe_T, tol=quad_tol).Theta
    if probe[0] <= 0.0:
        raise HorizonExceeded("profile accumulates nothing over the probe "
                              "window [0, %g]" % probe_T)
    rate = probe[0] / probe_T
    if horizon is None:
        horizon = 1e6 * max(need, 1.0) / rate
    if profile.duration_limit is not None:
        horizon = min(horizon, profile.duration_limit)

    hi = min(max(need / rate, tol), horizon)
    while not feasible(hi):
        if hi >= horizon:
            raise HorizonExceeded(
                "gate unreachable within horizon %g (accumulated rate %g)"
                % (horizon, rate))
        hi = min(2.0 * hi, horizon)
    lo = 0.0
    for _ in range(200):  # 2^200 exceeds any float64 range / tol ratio
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return _finish(theta_U, profile, hi, candidates, quad_tol)


def _finish(theta_U, profile, T, candidates, quad_tol):
    Theta = profile.integrate_theta(T, tol=quad_tol).Theta
    best = None
    for n, beta in candidates:
        margins = s_major_margins(Theta, beta)
        if np.all(margins >= -1e-9):
            worst = margins.min()
            if best is None or worst > best[0]:
                best = (worst, n, margins)
    if best is None:  # numerical corner: pick least-violated candidate
        for n, beta in candidates:
            margins = s_major_margins(Theta, beta)
            worst = margins.min()
            if best is None or worst > best[0]:
                best = (worst, n, margins)
    _, n, margins = best
    binding = int(np.argmin(margins)) + 1
    flat = False
    if T > 0:
        # probe just past T: a vanishing coupling there means the minimum
        # sits on a flat feasibility boundary
        probe_t = T + max(1e-9 * max(T, 1.0), 1e-12)
        if profile.duration_limit is not None:
            probe_t = min(probe_t, profile.duration_limit)
        flat = bool(profile.theta_at(probe_t)[0] <= 1e-12)
    periods = None
    count = None
    if profile.period is not None:
        periods = T / profile.period
        count = int(math.ceil(periods - 1e-9)) if T > 0 else 0
    return MinTimeResult(T_min=float(T), activeShift=tuple(int(v) for v in n),
                         bindingInequality=binding, Theta_at_Tmin=Theta,
                         margins=margins, periods=periods,
                         wholePeriodCount=count, flatFeasibility=flat)


def condition_report(theta_U, profile, T, quad_tol=1e-12):
    """Margins of all six s-majorization inequalities (three per shift)
    at time T, plus the dipolar scalar when the profile exposes it.

    The scalar compares int (3|D| + D) dt against 3 pi / 4, the binding
    combination for the swap class under the (1, 1, -2) tensor shape.
    """
    theta_U = np.asarray(theta_U, dtype=float)
    Theta = profile.integrate_theta(T, tol=quad_tol).Theta
    report = {"T": float(T), "Theta": Theta,
              "shifts": []}
    for n, beta in _shift_candidates(theta_U):
        margins = s_major_margins(Theta, beta)
        report["shifts"].append({
            "n": tuple(int(v) for v in n),
            "beta": beta,
            "margins": margins,
            "feasible": bool(np.all(margins >= -1e-9)),
        })
    if hasattr(profile, "accumulated_drive"):
        accumulated = profile.accumulated_drive(T, tol=quad_tol)
        report["accumulated_drive"] = float(accumulated)
        report["drive_threshold"] = 3.0 * math.pi / 4.0
        report["drive_margin"] = float(accumulated - 3.0 * math.pi / 4.0)
    return report
