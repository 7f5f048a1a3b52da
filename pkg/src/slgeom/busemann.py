"""Busemann functions on the space of unit-volume scalar products.

The value is computed through the generalized Iwasawa decomposition: after
moving the pair (ideal point, basepoint) to (standard flag, identity), the
function reduces to weighted log-determinants of leading principal minors of
the transported Gram matrix.

Metric bookkeeping is centralized in :data:`METRIC_SCALE_FACTOR` and
:func:`projective_log_coefficient`; see the consistency tests.
"""

from __future__ import annotations

import numpy as np

from .flags import IdealPoint, direction_vector, gram_schmidt
from .symspace import SymPoint, SymTangent, geodesic, inner, tangent_norm

__all__ = [
    "busemann_value",
    "busemann_gradient",
    "busemann_hessian",
    "busemann_asymptotic_slope",
    "projective_log_coefficient",
    "metric_scale_factor",
    "iwasawa_factorization",
]


def metric_scale_factor(n: int) -> float:
    """The factor s in <u, v> = s * tr(u* v); Killing normalization."""
    return 2.0 * n


def projective_log_coefficient(n: int) -> float:
    """Coefficient c(n) in b_{[v],o}(x) = c(n) log q_x(v, v), q_o(v, v) = 1.

    Equals n / sqrt(2(n-1)) under the Killing metric 2n*tr; fixed by the
    unit-speed ray identity b(gamma(t)) = -t and verified against the limit
    definition in the tests.
    """
    return n / np.sqrt(2.0 * (n - 1.0))


def _blocks(weights: np.ndarray) -> list[int]:
    """Boundaries of the constant blocks of a descending weight vector."""
    n = len(weights)
    cuts = [0]
    for i in range(n - 1):
        if weights[i] - weights[i + 1] > 1e-12:
            cuts.append(i + 1)
    cuts.append(n)
    return cuts


def busemann_value(a: IdealPoint, o: SymPoint, x: SymPoint) -> float:
    """b_{a,o}(x) via the Iwasawa route.

    Moving (a, o) to (standard flag, q0) by g0 = B^-1 for the o-orthonormal
    flag-adapted basis B, the unipotent factor drops out and
    b = n * sum_blocks d_b * log det(M_b) with M_b the block pivots of the
    transported Gram matrix (ratios of leading principal minors).
    """
    n = x.n
    b = gram_schmidt(a.flag.basis, o.gram)
    qp = b.T @ x.gram @ b
    d = a.weights.array
    cuts = _blocks(d)
    val = 0.0
    prev_logdet = 0.0
    for j in range(1, len(cuts)):
        k = cuts[j]
        sign, logdet = np.linalg.slogdet(qp[:k, :k])
        if sign <= 0:
            raise ValueError("ill-conditioned Iwasawa factorization")
        val += d[cuts[j - 1]] * (logdet - prev_logdet)
        prev_logdet = logdet
    return float(n * val)


def iwasawa_factorization(a: IdealPoint, o: SymPoint, x: SymPoint):
    """Explicit factors (u, m, k): h = u @ m @ k in flag-adapted coordinates.

    h carries q0 to the transported x; u is block-upper unipotent adapted to
    the flag, m = exp(w) is block-diagonal symmetric positive definite with w
    in the centralizer of the direction vector, k is orthogonal.  Used by the
    tests to validate the leading-minor shortcut.
    """
    from .symspace import spd_inv_sqrt, spd_sqrt

    b = gram_schmidt(a.flag.basis, o.gram)
    qp = b.T @ x.gram @ b
    n = qp.shape[0]
    cuts = _blocks(a.weights.array)
    # block UDU^T-style factorization: qp = V^T M V, V block-upper unipotent
    v = np.eye(n)
    m = np.zeros_like(qp)
    rest = qp.copy()
    for j in range(1, len(cuts)):
        lo, hi = cuts[j - 1], cuts[j]
        pivot = rest[lo:hi, lo:hi]
        m[lo:hi, lo:hi] = pivot
        if hi < n:
            coupling = np.linalg.solve(pivot, rest[lo:hi, hi:])
            v[lo:hi, hi:] = coupling
            rest[hi:, hi:] -= rest[hi:, lo:hi] @ coupling
    # qp = V^T M V with V unipotent upper; h = u a k with u = V^-1 transposed
    # pieces: Gram of h.q0 is h^-T h^-1 = qp  =>  h = qp^(-1/2) (up to O(n))
    u = np.linalg.inv(v)
    mhalf = np.zeros_like(m)
    for j in range(1, len(cuts)):
        lo, hi = cuts[j - 1], cuts[j]
        mhalf[lo:hi, lo:hi] = spd_inv_sqrt(m[lo:hi, lo:hi])
    h = spd_inv_sqrt(qp)
    k = np.linalg.inv(u @ mhalf) @ h
    return u, mhalf, k


def busemann_gradient(a: IdealPoint, o: SymPoint, x: SymPoint) -> SymTangent:
    """grad b_{a,o} at x: the unit vector -v_{a,x}."""
    v = direction_vector(a, x)
    return SymTangent(x, -v.mat)


def busemann_hessian(a: IdealPoint, x: SymPoint, w: SymTangent) -> float:
    """Hess b_a at x applied to (w, w): <sqrt(ad_{v_a}^2) w, w>_x.

    Diagonalizing v_{a,x}, the operator multiplies the (i, j) matrix entry by
    |mu_i - mu_j|; the kernel is the centralizer of v_{a,x} in p_x.
    """
    n = x.n
    va = direction_vector(a, x)
    # move to an x-orthonormal frame where computations are plain-symmetric
    c = np.linalg.cholesky(x.gram)  # x.gram = c c^T; frame change by c^T
    v0 = c.T @ va.mat @ np.linalg.inv(c.T)
    w0 = c.T @ w.mat @ np.linalg.inv(c.T)
    v0 = (v0 + v0.T) / 2.0
    mu, u = np.linalg.eigh(v0)
    wt = u.T @ w0 @ u
    gaps = np.abs(mu[:, None] - mu[None, :])
    return float(metric_scale_factor(n) * np.sum(gaps * wt * wt))


def busemann_asymptotic_slope(a: IdealPoint, o: SymPoint, x: SymPoint,
                              v: SymTangent, t_lo: float = 10.0,
                              t_hi: float = 40.0, samples: int = 16) -> float:
    """Minus the fitted slope of t -> b_{a,o}(geodesic(x, v, t)).

    For unit v the output estimates cos of the Tits angle between a and the
    endpoint of the ray.  Values along the ray are accumulated through the
    cocycle with the flag recentered at each step, so arbitrarily large t
    stays well conditioned.
    """
    from scipy.linalg import expm
    from .flags import FlagPoint

    ts = np.linspace(t_lo, t_hi, samples)
    dt = t_hi / (8.0 * samples)
    step_g = expm(-dt * v.mat)
    basis = a.flag.basis.copy()
    total = busemann_value(a, o, x)   # b at gamma(0) relative to o
    t_cur = 0.0
    vals = []
    idx = 0
    xg = SymPoint(x.gram)
    target = geodesic(x, v, dt)
    while idx < len(ts):
        if t_cur + dt <= ts[idx] + 1e-12:
            ak = IdealPoint(FlagPoint(a.flag.type, _orthonormalize(basis)), a.weights)
            total += busemann_value(ak, xg, target)
            basis = step_g @ basis
            t_cur += dt
        else:
            rem = ts[idx] - t_cur
            ak = IdealPoint(FlagPoint(a.flag.type, _orthonormalize(basis)), a.weights)
            vals.append(total + busemann_value(ak, xg, geodesic(x, v, rem)))
            idx += 1
    slope = np.polyfit(ts, np.array(vals), 1)[0]
    return float(-slope)


def _orthonormalize(b: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(b)
    return q * np.sign(np.diag(r))
