"""Majorization predicates and their constructive converses.

majorizes/s_majorizes decide the partial orders; schur_horn_rotation,
transfer_matrix and birkhoff realize them: an orthogonal frame with
prescribed diagonal, a doubly stochastic matrix carrying one vector onto
another, and a convex combination of permutations.
"""
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .canonical import s_reorder, theta_to_phi
from .errors import (LengthMismatch, NoMatchingFound, NotDoublyStochastic,
                     NotMajorized)

DEFAULT_EPS = 1e-9

_PERMS4 = [np.array(p) for p in permutations(range(4))]


def majorizes(y, x, eps=DEFAULT_EPS):
    """True iff x is majorized by y: every partial descending sum of x is
    at most that of y, with equality for the full sum (tolerance eps)."""
    y = np.asarray(y, dtype=float)
    x = np.asarray(x, dtype=float)
    if y.shape != x.shape or y.ndim != 1:
        raise LengthMismatch("vectors must share one length, got %r / %r"
                             % (x.shape, y.shape))
    cx = np.cumsum(np.sort(x)[::-1])
    cy = np.cumsum(np.sort(y)[::-1])
    if np.any(cx[:-1] > cy[:-1] + eps):
        return False
    return bool(abs(cx[-1] - cy[-1]) <= eps)


def s_majorizes(y, x, eps=DEFAULT_EPS):
    """True iff x is s-majorized by y.  Inputs are sign-normalized
    (s-reordered) internally; the three defining inequalities are

        x1 <= y1
        x1 + x2 + x3 <= y1 + y2 + y3
        x1 + x2 - x3 <= y1 + y2 - y3.
    """
    xs = s_reorder(x)
    ys = s_reorder(y)
    return bool(xs[0] <= ys[0] + eps
                and xs.sum() <= ys.sum() + eps
                and xs[0] + xs[1] - xs[2] <= ys[0] + ys[1] - ys[2] + eps)


def s_major_margins(y, x):
    """Slack of the three s-majorization inequalities (>= 0 means satisfied)."""
    xs = s_reorder(x)
    ys = s_reorder(y)
    return np.array([ys[0] - xs[0],
                     ys.sum() - xs.sum(),
                     (ys[0] + ys[1] - ys[2]) - (xs[0] + xs[1] - xs[2])])


def phi_major_equiv_check(alpha, beta, eps=DEFAULT_EPS):
    """Pair (s_majorizes(beta, alpha), majorizes(phi(beta), phi(alpha))).

    The two booleans agree for all inputs; exposed so property tests can
    exercise the equivalence between the 3-vector and 4-vector orders.
    """
    return (s_majorizes(beta, alpha, eps=eps),
            majorizes(theta_to_phi(beta), theta_to_phi(alpha), eps=eps))


def _givens(n, i, j, c, s):
    g = np.eye(n)
    g[i, i] = c
    g[j, j] = c
    g[i, j] = -s
    g[j, i] = s
    return g


def schur_horn_rotation(a, lam, eps=1e-8):
    """Rotation K in SO(n) with diag(K^T diag(lam) K) = a.

    Requires a to be majorized by lam (n in {2, 3, 4}).  Built from at
    most n-1 planar rotations: at each step the largest remaining target
    is bracketed by two current eigenvalue slots and fixed exactly by one
    Givens rotation; the two slots merge into lam_i + lam_j - a_k.
    """
    a = np.asarray(a, dtype=float)
    lam = np.asarray(lam, dtype=float)
    n = len(a)
    if len(lam) != n:
        raise LengthMismatch("diagonal target and spectrum lengths differ")
    if not majorizes(lam, a, eps=eps):
        raise NotMajorized("target diagonal is not majorized by the spectrum")

    order_a = np.argsort(a)[::-1]
    M = np.diag(lam).astype(float)
    K = np.eye(n)
    active = list(range(n))
    fixed = {}
    for t in order_a[:-1]:
        target = a[t]
        vals = [M[p, p] for p in active]
        hi = max(range(len(vals)), key=lambda q: vals[q])
        lo = min(range(len(vals)), key=lambda q: vals[q])
        if vals[hi] - vals[lo] < 1e-15:
            p = active.pop(hi)
            fixed[t] = p
            continue
        # pick an adjacent bracket around the target for stability
        by_val = sorted(range(len(vals)), key=lambda q: vals[q])
        k = 0
        while k + 1 < len(by_val) and vals[by_val[k + 1]] < target:
            k += 1
        lo_i = by_val[k]
        hi_i = by_val[min(k + 1, len(by_val) - 1)]
        if vals[hi_i] < target:
            hi_i = by_val[-1]
        if vals[lo_i] > target:
            lo_i = by_val[0]
        p, q = active[hi_i], active[lo_i]
        lp, lq = M[p, p], M[q, q]
        c2 = (target - lq) / (lp - lq)
        c2 = min(max(c2, 0.0), 1.0)
        c = np.sqrt(c2)
        s = np.sqrt(1.0 - c2)
        G = _givens(n, p, q, c, s)
        M = G.T @ M @ G
        K = K @ G
        fixed[t] = p
        active.remove(p)
    fixed[order_a[-1]] = active[0]
    # permute fixed slots into the requested positions
    P = np.zeros((n, n))
    for t, p in fixed.items():
        P[p, t] = 1.0
    K = K @ P
    if np.linalg.det(K) < 0:
        K = K.copy()
        K[:, 0] = -K[:, 0]
    return K


def transfer_matrix(beta, gamma, eps=1e-8):
    """Doubly stochastic B with B gamma = beta, for beta majorized by gamma.

    Built from a chain of at most len(gamma) - 1 pairwise averaging
    (T-transform) steps, each fixing one coordinate of the running vector.
    """
    beta = np.asarray(beta, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    n = len(gamma)
    if len(beta) != n:
        raise LengthMismatch("vectors must share one length")
    if not majorizes(gamma, beta, eps=eps):
        raise NotMajorized("target is not majorized by the source")
    # work in the descending-sorted frame; each step mixes the largest
    # still-high slot with the first low slot after it, which keeps the
    # running vector sorted and fixes one coordinate for good
    order_g = np.argsort(gamma)[::-1]
    order_b = np.argsort(beta)[::-1]
    y = gamma[order_g].astype(float)
    xs = beta[order_b].astype(float)
    tiny = max(eps, 1e-13)
    Bs = np.eye(n)
    for _ in range(n - 1):
        diff = y - xs
        high = np.where(diff > tiny)[0]
        if len(high) == 0:
            break
        j = int(high[-1])
        low = np.where(diff < -tiny)[0]
        low = low[low > j]
        if len(low) == 0:
            break
        k = int(low[0])
        delta = min(diff[j], -diff[k])
        lam = 1.0 - delta / (y[j] - y[k])
        T = np.eye(n)
        T[j, j] = T[k, k] = lam
        T[j, k] = T[k, j] = 1.0 - lam
        y = T @ y
        Bs = T @ Bs
    resid = np.linalg.norm(y - xs)
    if resid > max(10 * eps, 1e-10):
        raise NotMajorized("T-transform chain failed to converge (resid %.3e)"
                           % resid)
    # undo the sorting: B = P_b^T Bs P_g
    Pg = np.zeros((n, n))
    Pg[np.arange(n), order_g] = 1.0
    Pb = np.zeros((n, n))
    Pb[np.arange(n), order_b] = 1.0
    return Pb.T @ Bs @ Pg


@dataclass(frozen=True)
class BirkhoffDecomposition:
    """Convex combination of permutations: weights[i] and perms[i] with
    sum_i weights[i] P(perms[i]) equal to the source matrix.  perms are
    index tuples sigma with matrix P[k, sigma[k]] = 1."""
    weights: tuple
    perms: tuple

    def matrix(self):
        n = len(self.perms[0])
        B = np.zeros((n, n))
        for w, p in zip(self.weights, self.perms):
            for k in range(n):
                B[k, p[k]] += w
        return B


def birkhoff(B, eps=1e-7):
    """Greedy Birkhoff decomposition of a 4x4 doubly stochastic matrix.

    Repeatedly finds, by exhaustive search over the 24 permutations, the
    one supported on positive entries whose minimum entry is largest,
    then subtracts it.  Terminates within 10 terms.
    """
    B = np.asarray(B, dtype=float)
    if B.shape != (4, 4):
        raise NotDoublyStochastic("expected a 4x4 matrix")
    if np.any(B < -eps):
        raise NotDoublyStochastic("negative entries beyond tolerance")
    if (np.linalg.norm(B.sum(axis=0) - 1.0) > eps
            or np.linalg.norm(B.sum(axis=1) - 1.0) > eps):
        raise NotDoublyStochastic("row/column sums deviate from 1")
    work = np.clip(B, 0.0, None).copy()
    weights = []
    perms = []
    for _ in range(12):
        total = work.sum()
        if total < 4 * eps:
            break
        best = None
        for p in _PERMS4:
            m = min(work[k, p[k]] for k in range(4))
            if m > 1e-14 and (best is None or m > best[0]):
                best = (m, p)
        if best is None:
            raise NoMatchingFound("no permutation supported on positive "
                                  "entries; matrix is numerically broken")
        w, p = best
        weights.append(w)
        for k in range(4):
            work[k, p[k]] -= w
        work[work < 1e-14] = 0.0
        perms.append(tuple(int(i) for i in p))
    total = sum(weights)
    weights = [w / total for w in weights]
    return BirkhoffDecomposition(weights=tuple(weights), perms=tuple(perms))


def random_doubly_stochastic(rng, n=4, mixes=6):
    """Random doubly stochastic matrix as a convex mix of permutations."""
    w = rng.dirichlet(np.ones(mixes))
    B = np.zeros((n, n))
    for wi in w:
        p = rng.permutation(n)
        B[np.arange(n), p] += wi
    return B
