"""Time-dependent coupling profiles and their canonical-parameter integrals.

Four kinds are supported: constant, mas-dipolar (rotor-modulated dipolar
coupling), sampled (linear interpolation on a time grid) and
piecewise-constant.  Every profile yields the s-ordered canonical vector
theta(t) of its coupling Hamiltonian and the running integral
Theta(T) = int_0^T theta(t) dt.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import su4
from .canonical import canon_hamiltonian, s_reorder, position_ordered_frame
from .errors import (BadRange, OutOfRange, QuadratureFailure,
                     UnsupportedProfile, ValidationError)

MAGIC_ANGLE = math.atan(math.sqrt(2.0))

_UNIT_FACTORS = {"rad/s": 1.0, "Hz": 2.0 * math.pi}


@dataclass(frozen=True)
class ThetaIntegral:
    """Componentwise integral of theta(t) over [0, T] with an absolute
    quadrature error estimate."""
    Theta: np.ndarray
    T: float
    error: float


def _adaptive_simpson(f, a, b, tol, max_depth=48):
    """Vector-valued adaptive Simpson on [a, b].

    Returns (integral, error_estimate).  Raises QuadratureFailure if the
    per-component target cannot be met within the recursion cap.
    """
    fa, fm, fb = f(a), f((a + b) / 2), f(b)
    whole = (b - a) / 6.0 * (fa + 4 * fm + fb)

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = (a + b) / 2
        lm, rm = (a + m) / 2, (m + b) / 2
        flm, frm = f(lm), f(rm)
        left = (m - a) / 6.0 * (fa + 4 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4 * frm + fb)
        err = np.max(np.abs(left + right - whole))
        if err <= 15.0 * tol or b - a < 1e-15 * max(1.0, abs(b)):
            return left + right + (left + right - whole) / 15.0, err / 15.0
        if depth >= max_depth:
            raise QuadratureFailure("adaptive quadrature hit recursion cap "
                                    "with error %.3e > %.3e" % (err / 15.0, tol))
        il, el = recurse(a, m, fa, flm, fm, left, tol / 2, depth + 1)
        ir, er = recurse(m, b, fm, frm, fb, right, tol / 2, depth + 1)
        return il + ir, el + er

    if b <= a:
        return np.zeros_like(np.asarray(fa, dtype=float)), 0.0
    return recurse(a, b, fa, fm, fb, whole, tol, 0)


def _bisect_root(f, a, b, rel_tol=1e-12):
    """Root of a bracketing sign change by bisection."""
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0:
        raise ValueError("root not bracketed")
    scale = max(abs(a), abs(b), 1e-30)
    while b - a > rel_tol * scale:
        m = (a + b) / 2
        fm = f(m)
        if fm == 0.0:
            return m
        if fa * fm < 0:
            b, fb = m, fm
        else:
            a, fa = m, fm
    return (a + b) / 2


class CouplingProfile:
    """Base class; concrete kinds implement theta_at and the integrals."""

    kind = None
    period = None          # None if aperiodic
    duration_limit = None  # None if defined for all t >= 0

    def theta_at(self, t):
        raise NotImplementedError

    def hamiltonian_at(self, t):
        raise NotImplementedError

    def integral_between(self, t0, t1, tol=1e-10):
        raise NotImplementedError

    def integrate_theta(self, T, tol=1e-10):
        if T < 0:
            raise BadRange("T must be nonnegative")
        self._check_domain(T)
        Theta, err = self._integral_impl(T, tol)
        return ThetaIntegral(Theta=Theta, T=float(T), error=float(err))

    def _integral_impl(self, T, tol):
        val = self.integral_between(0.0, T, tol=tol)
        return val, 0.0

    def _check_domain(self, t):
        if self.duration_limit is not None and t > self.duration_limit * (1 + 1e-12):
            raise OutOfRange("t = %g beyond profile domain %g"
                             % (t, self.duration_limit))

    def frame_intervals(self, T):
        """Wall intervals [(t0, t1, stream_id)] on which the coupling keeps
        a fixed canonical frame; used by schedule synthesis."""
        raise UnsupportedProfile("synthesis is not supported for kind %r"
                                 % self.kind)

    def stream_frame(self, stream_id):
        """(K, theta_dir) for a stream: orthogonal magic frame K and the
        canonical direction such that theta(t) = w(t) * theta_dir with
        w(t) >= 0 on the stream."""
        raise UnsupportedProfile("synthesis is not supported for kind %r"
                                 % self.kind)


class ConstantProfile(CouplingProfile):
    """Fixed coupling Hamiltonian.  Constructed from an s-ordered canonical
    vector or from an explicit non-local Hermitian matrix."""

    kind = "constant"

    def __init__(self, theta=None, hamiltonian=None):
        if (theta is None) == (hamiltonian is None):
            raise ValidationError("give exactly one of theta or hamiltonian")
        if theta is not None:
            theta = np.asarray(theta, dtype=float)
            if not np.allclose(theta, s_reorder(theta), atol=1e-12):
                raise ValidationError("constant profile theta must be s-ordered")
            self.theta = theta
            self._H = su4.coupling_hamiltonian(theta)
            self._frame = np.eye(4)
        else:
            H = np.asarray(hamiltonian, dtype=complex)
            form = canon_hamiltonian(H)
            self.theta = form.theta
            self._H = H
            self._frame, _ = position_ordered_frame(su4.to_magic(H))

    def theta_at(self, t):
        return self.theta.copy()

    def hamiltonian_at(self, t):
        return self._H

    def integral_between(self, t0, t1, tol=1e-10):
        if t1 < t0:
            raise BadRange("t1 < t0")
        return (t1 - t0) * self.theta

    def frame_intervals(self, T):
        return [(0.0, float(T), 0)]

    def stream_frame(self, stream_id):
        return self._frame, self.theta.copy()


class MasDipolarProfile(CouplingProfile):
    """Dipolar coupling D(t) (XX + YY - 2ZZ) under sample rotation about
    the magic-angle axis.

    D(t) = D (3 cos^2 angle(t) - 1) / 2 with
    cos angle(t) = cos(beta) cos(aM) + sin(beta) cos(omega t + phase) sin(aM)
    and aM = arctan(sqrt(2)).  The canonical vector follows the branch
    table (2|D(t)|, |D(t)|, -D(t)).
    """

    kind = "mas-dipolar"

    _SHAPE = np.array([1.0, 1.0, -2.0])

    def __init__(self, D, omega, beta, phase=0.0):
        if omega <= 0:
            raise ValidationError("spinning frequency omega must be positive")
        self.D = float(D)
        self.omega = float(omega)
        self.beta = float(beta)
        self.phase = float(phase)
        self.period = 2.0 * math.pi / self.omega
        self._shape_matrix = su4.coupling_hamiltonian(self._SHAPE)
        self._roots = self._period_roots()
        self._period_integral, self._period_err = self._integrate_window(
            0.0, self.period, tol=1e-12 * max(1.0, abs(self.D) * self.period))
        Kp, _ = position_ordered_frame(su4.to_magic(self._shape_matrix))
        Km, _ = position_ordered_frame(su4.to_magic(-self._shape_matrix))
        self._frames = {+1: (Kp, s_reorder(self._SHAPE)),
                        -1: (Km, s_reorder(-self._SHAPE))}

    def coupling_at(self, t):
        """Instantaneous dipolar strength D(t).

        Cancellation noise of 3 cos^2 - 1 (relevant at the magic-angle
        null beta = 0) is clamped to exact zero.
        """
        c = (math.cos(self.beta) * math.cos(MAGIC_ANGLE)
             + math.sin(self.beta) * math.cos(self.omega * t + self.phase)
             * math.sin(MAGIC_ANGLE))
        d = self.D * (3.0 * c * c - 1.0) / 2.0
        if abs(d) < 1e-14 * abs(self.D):
            return 0.0
        return d

    def theta_at(self, t):
        d = self.coupling_at(t)
        return np.array([2.0 * abs(d), abs(d), -d])

    def hamiltonian_at(self, t):
        return self.coupling_at(t) * self._shape_matrix

    def _period_roots(self):
        """Sign-change times of D(t) within one period, by bracketing on a
        fine grid and bisection."""
        n = 4096
        ts = np.linspace(0.0, self.period, n + 1)
        vals = np.array([self.coupling_at(t) for t in ts])
        roots = []
        for i in range(n):
            if vals[i] == 0.0:
                roots.append(ts[i])
            elif vals[i] * vals[i + 1] < 0:
                roots.append(_bisect_root(self.coupling_at, ts[i], ts[i + 1]))
        return sorted(set(roots))

    def _window_edges(self, t0, t1):
        """Breakpoints of |D| inside [t0, t1] (sign changes of D)."""
        if not self._roots:
            return [t0, t1]
        k0 = math.floor(t0 / self.period)
        k1 = math.floor(t1 / self.period) + 1
        edges = [t0, t1]
        for k in range(int(k0), int(k1) + 1):
            for r in self._roots:
                t = r + k * self.period
                if t0 < t < t1:
                    edges.append(t)
        return sorted(edges)

    def _integrate_window(self, t0, t1, tol):
        if t1 <= t0:
            return np.zeros(3), 0.0
        edges = self._window_edges(t0, t1)
        total = np.zeros(3)
        err = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            val, e = _adaptive_simpson(self.theta_at, a, b,
                                       tol / max(1, len(edges) - 1))
            total += val
            err += e
        return total, err

    def integral_between(self, t0, t1, tol=1e-10):
        if t1 < t0:
            raise BadRange("t1 < t0")
        val, _ = self._integrate_window(t0, t1, tol)
        return val

    def _integral_impl(self, T, tol):
        """Whole periods use the precomputed per-period integral; only the
        fractional remainder is quadratured."""
        n_full = int(math.floor(T / self.period))
        frac0 = n_full * self.period
        part, err = self._integrate_window(frac0, T, tol)
        total = n_full * self._period_integral + part
        return total, err + n_full * self._period_err

    def period_areas(self, tol=1e-12):
        """(S1, S2): areas of the negative and positive parts of D(t) over
        one period, S1 = -int_{D<=0} D dt, S2 = int_{D>0} D dt."""
        edges = [0.0] + [r for r in self._roots if 0 < r < self.period] \
            + [self.period]
        s1 = 0.0
        s2 = 0.0
        scale = max(abs(self.D) * self.period, 1e-30)
        for a, b in zip(edges[:-1], edges[1:]):
            val, _ = _adaptive_simpson(
                lambda t: np.array([self.coupling_at(t)]), a, b, tol * scale)
            if val[0] > 0:
                s2 += val[0]
            else:
                s1 -= val[0]
        return s1, s2

    def accumulated_drive(self, T, tol=1e-10):
        """int_0^T (3|D| + D) dt, the scalar that decides swap reachability
        for this tensor shape (theta1 + theta2 - theta3)."""
        Theta = self.integrate_theta(T, tol=tol).Theta
        return Theta[0] + Theta[1] - Theta[2]

    def approx_min_period_count(self, threshold):
        """Rotor-period estimate ceil(threshold / (2 S1 + 4 S2)) valid for
        omega >> D; a diagnostic, never substituted for the exact solve."""
        s1, s2 = self.period_areas()
        per = 2.0 * s1 + 4.0 * s2
        if per <= 0:
            raise ValueError("profile accumulates nothing per period")
        return math.ceil(threshold / per)

    def frame_intervals(self, T):
        edges = self._window_edges(0.0, float(T))
        out = []
        for a, b in zip(edges[:-1], edges[1:]):
            if b - a < 1e-15:
                continue
            d = self.coupling_at((a + b) / 2)
            if d == 0.0:
                continue
            out.append((a, b, +1 if d > 0 else -1))
        return out

    def stream_frame(self, stream_id):
        K, direction = self._frames[stream_id]
        return K, direction.copy()


class SampledProfile(CouplingProfile):
    """Canonical parameters given on a time grid, linearly interpolated."""

    kind = "sampled"

    def __init__(self, times, thetas):
        times = np.asarray(times, dtype=float)
        thetas = np.asarray(thetas, dtype=float)
        if times.ndim != 1 or len(times) < 2 or thetas.shape != (len(times), 3):
            raise ValidationError("need matching time grid and Nx3 theta samples")
        if np.any(np.diff(times) <= 0):
            raise ValidationError("time grid must be strictly increasing")
        for row in thetas:
            if not np.allclose(row, s_reorder(row), atol=1e-10):
                raise ValidationError("theta samples must be s-ordered")
        self.times = times
        self.thetas = thetas
        self.duration_limit = float(times[-1])
        if times[0] > 0:
            raise ValidationError("time grid must start at 0")

    def theta_at(self, t):
        if t < self.times[0] - 1e-12 or t > self.duration_limit * (1 + 1e-12):
            raise OutOfRange("t = %g outside sampled grid" % t)
        return np.array([np.interp(t, self.times, self.thetas[:, k])
                         for k in range(3)])

    def hamiltonian_at(self, t):
        return su4.coupling_hamiltonian(self.theta_at(t))

    def integral_between(self, t0, t1, tol=1e-10):
        # exact for the piecewise-linear interpolant
        if t1 < t0:
            raise BadRange("t1 < t0")
        self._check_domain(t1)
        grid = [t0] + [t for t in self.times if t0 < t < t1] + [t1]
        total = np.zeros(3)
        for a, b in zip(grid[:-1], grid[1:]):
            total += 0.5 * (b - a) * (self.theta_at(a) + self.theta_at(b))
        return total


class PiecewiseConstantProfile(CouplingProfile):
    """A list of (duration, Hamiltonian) pieces played back to back."""

    kind = "piecewise-constant"

    def __init__(self, pieces):
        if not pieces:
            raise ValidationError("need at least one piece")
        self.durations = []
        self.hamiltonians = []
        self.piece_thetas = []
        self._piece_frames = []
        for dur, H in pieces:
            if dur <= 0:
                raise ValidationError("piece durations must be positive")
            H = np.asarray(H, dtype=complex)
            form = canon_hamiltonian(H)
            self.durations.append(float(dur))
            self.hamiltonians.append(H)
            self.piece_thetas.append(form.theta)
            self._piece_frames.append(
                position_ordered_frame(su4.to_magic(H))[0])
        self.edges = np.concatenate([[0.0], np.cumsum(self.durations)])
        self.duration_limit = float(self.edges[-1])

    def _piece_index(self, t):
        if t < -1e-12 or t > self.duration_limit * (1 + 1e-12):
            raise OutOfRange("t = %g outside piecewise domain" % t)
        i = int(np.searchsorted(self.edges, t, side="right")) - 1
        return min(max(i, 0), len(self.durations) - 1)

    def theta_at(self, t):
        return self.piece_thetas[self._piece_index(t)].copy()

    def hamiltonian_at(self, t):
        return self.hamiltonians[self._piece_index(t)]

    def integral_between(self, t0, t1, tol=1e-10):
        if t1 < t0:
            raise BadRange("t1 < t0")
        self._check_domain(t1)
        total = np.zeros(3)
        for i, (a, b) in enumerate(zip(self.edges[:-1], self.edges[1:])):
            lo, hi = max(a, t0), min(b, t1)
            if hi > lo:
                total += (hi - lo) * self.piece_thetas[i]
        return total

    def frame_intervals(self, T):
        self._check_domain(T)
        out = []
        for i, (a, b) in enumerate(zip(self.edges[:-1], self.edges[1:])):
            hi = min(b, float(T))
            if hi > a:
                out.append((float(a), hi, i))
        return out

    def stream_frame(self, stream_id):
        return self._piece_frames[stream_id], self.piece_thetas[stream_id].copy()


def emit_profile_csv(profile, t0, t1, samples):
    """CSV table of the profile over [t0, t1].

    mas-dipolar profiles emit columns t, D; other kinds emit
    t, theta1, theta2, theta3.  Values carry 12 significant digits.
    """
    if t1 <= t0:
        raise BadRange("t1 must exceed t0")
    if samples < 2:
        raise ValidationError("need at least 2 samples")
    ts = np.linspace(t0, t1, int(samples))
    lines = []
    if isinstance(profile, MasDipolarProfile):
        lines.append("t,D")
        for t in ts:
            lines.append("%.12g,%.12g" % (t, profile.coupling_at(t)))
    else:
        lines.append("t,theta1,theta2,theta3")
        for t in ts:
            th = profile.theta_at(t)
            lines.append("%.12g,%.12g,%.12g,%.12g" % (t, th[0], th[1], th[2]))
    return "\n".join(lines) + "\n"


def profile_from_json(obj):
    """Build a profile from its JSON description.

    Every description carries a "kind" tag and a mandatory "unit" field
    ("rad/s" or "Hz") scaling all frequency-valued entries; angles are
    radians.
    """
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ValidationError('profile JSON needs a "kind" tag')
    kind = obj["kind"]
    unit = obj.get("unit")
    if unit not in _UNIT_FACTORS:
        raise ValidationError('profile JSON needs "unit": "rad/s" or "Hz"')
    scale = _UNIT_FACTORS[unit]
    if kind == "constant":
        if "theta" in obj:
            return ConstantProfile(theta=scale * np.asarray(obj["theta"], dtype=float))
        if "hamiltonian" in obj:
            return ConstantProfile(
                hamiltonian=scale * su4.matrix_from_json(obj["hamiltonian"]))
        raise ValidationError('constant profile needs "theta" or "hamiltonian"')
    if kind == "mas-dipolar":
        try:
            return MasDipolarProfile(D=scale * float(obj["D"]),
                                     omega=scale * float(obj["omega"]),
                                     beta=float(obj["beta"]),
                                     phase=float(obj.get("phase", 0.0)))
        except KeyError as missing:
            raise ValidationError("mas-dipolar profile needs %s" % missing)
    if kind == "sampled":
        if "times" not in obj or "theta" not in obj:
            raise ValidationError('sampled profile needs "times" and "theta"')
        return SampledProfile(np.asarray(obj["times"], dtype=float),
                              scale * np.asarray(obj["theta"], dtype=float))
    if kind == "piecewise-constant":
        if "segments" not in obj:
            raise ValidationError('piecewise profile needs "segments"')
        pieces = []
        for seg in obj["segments"]:
            if "duration" not in seg or "hamiltonian" not in seg:
                raise ValidationError('each piece needs "duration" and "hamiltonian"')
            pieces.append((float(seg["duration"]),
                           scale * su4.matrix_from_json(seg["hamiltonian"])))
        return PiecewiseConstantProfile(pieces)
    raise ValidationError("unknown profile kind %r" % kind)


def profile_to_json(profile):
    """Inverse of profile_from_json (always rad/s units)."""
    if isinstance(profile, ConstantProfile):
        return {"kind": "constant", "unit": "rad/s",
                "hamiltonian": su4.matrix_to_json(profile.hamiltonian_at(0.0))}
    if isinstance(profile, MasDipolarProfile):
        return {"kind": "mas-dipolar", "unit": "rad/s", "D": profile.D,
                "omega": profile.omega, "beta": profile.beta,
                "phase": profile.phase}
    if isinstance(profile, SampledProfile):
        return {"kind": "sampled", "unit": "rad/s",
                "times": [float(t) for t in profile.times],
                "theta": [[float(x) for x in row] for row in profile.thetas]}
    if isinstance(profile, PiecewiseConstantProfile):
        return {"kind": "piecewise-constant", "unit": "rad/s",
                "segments": [{"duration": d,
                              "hamiltonian": su4.matrix_to_json(H)}
                             for d, H in zip(profile.durations,
                                             profile.hamiltonians)]}
    raise ValidationError("unknown profile type %r" % type(profile))
