"""Figure rendering for the CLI report paths (written next to CSV/JSON)."""
import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .profiles import MasDipolarProfile


def plot_profile(profile, t0, t1, samples, path):
    """Coupling-modulation curve: D(t) for the rotor-modulated dipolar
    profile, otherwise the three canonical components."""
    ts = np.linspace(t0, t1, int(samples))
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    if isinstance(profile, MasDipolarProfile):
        ax.plot(ts, [profile.coupling_at(t) for t in ts], lw=1.2)
        ax.axhline(0.0, color="0.6", lw=0.6)
        ax.set_ylabel(r"$D(t)$")
    else:
        vals = np.array([profile.theta_at(t) for t in ts])
        for k, lbl in enumerate((r"$\theta_1$", r"$\theta_2$", r"$\theta_3$")):
            ax.plot(ts, vals[:, k], lw=1.2, label=lbl)
        ax.legend(frameon=False, fontsize=8)
        ax.set_ylabel("canonical parameters")
    ax.set_xlabel("t")
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)
    return path


def plot_mintime(profile, theta_U, result, path, points=400):
    """Feasibility margins of both shift candidates against time, with the
    solved minimum time marked."""
    from .canonical import equivalent_gate_vectors
    from .majorization import s_major_margins

    T_hi = max(result.T_min * 1.25, result.T_min + 1e-12)
    if profile.duration_limit is not None:
        T_hi = min(T_hi, profile.duration_limit)
    ts = np.linspace(0.0, T_hi, int(points))
    betas = equivalent_gate_vectors(np.asarray(theta_U, dtype=float))
    curves = np.empty((len(ts), 2))
    for i, T in enumerate(ts):
        Theta = profile.integrate_theta(float(T), tol=1e-10).Theta
        for j, beta in enumerate(betas):
            curves[i, j] = s_major_margins(Theta, beta).min()
    fig, ax = plt.subplots(figsize=(6.0, 3.6))
    ax.plot(ts, curves[:, 0], lw=1.2, label="shift (0,0,0)")
    ax.plot(ts, curves[:, 1], lw=1.2, label="shift (-1,0,0)")
    ax.axhline(0.0, color="0.6", lw=0.6)
    ax.axvline(result.T_min, color="crimson", lw=0.8, ls="--",
               label="T_min = %.6g" % result.T_min)
    ax.set_xlabel("T")
    ax.set_ylabel("worst feasibility margin")
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=160)
    plt.close(fig)
    return path
