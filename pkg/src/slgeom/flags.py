"""Flag manifolds, ideal points, direction vectors and Tits angles.

An ideal point of the visual boundary is a partial flag decorated with a unit
chamber vector whose facet type matches the flag type.  The unit tangent
pointing toward it from x is ``B diag(weights) B^-1`` for the x-orthonormal
basis B adapted to the flag.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rootsys import (ChamberVector, RootSystem, WeylElement, chamber_project,
                      theta_of, weyl_elements)
from .symspace import SymPoint, SymTangent

__all__ = [
    "FlagPoint",
    "IdealPoint",
    "AmbiguousPositionError",
    "gram_schmidt",
    "direction_vector",
    "relative_position",
    "tits_angle_flat",
    "tits_angle_numeric",
    "thickening_membership",
    "random_flag",
    "standard_flag",
    "weights_for_type",
    "flag_distance",
]


class AmbiguousPositionError(ValueError):
    """Raised when numerical ranks sit inside the undecidable threshold band."""


@dataclass
class FlagPoint:
    """A partial flag: nested subspaces spanned by leading basis columns."""

    type: tuple  # strictly increasing dimensions d1 < ... < dk < n
    basis: np.ndarray  # n x n orthonormal; first d_j columns span the j-th space

    def __post_init__(self):
        self.type = tuple(int(d) for d in self.type)
        b = np.asarray(self.basis, dtype=float)
        n = b.shape[0]
        if any(d <= 0 or d >= n for d in self.type) or list(self.type) != sorted(set(self.type)):
            raise ValueError(f"bad flag type {self.type} for n={n}")
        if np.abs(b.T @ b - np.eye(n)).max() > 1e-10:
            b, _ = np.linalg.qr(b)
        self.basis = b

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    def subspace(self, j: int) -> np.ndarray:
        return self.basis[:, : self.type[j]]


@dataclass
class IdealPoint:
    """A flag decorated with a unit weight vector of matching facet type."""

    flag: FlagPoint
    weights: ChamberVector

    def __post_init__(self):
        sys = self.weights.sys
        w = self.weights.array
        if abs(self.weights.norm() - 1.0) > 1e-8:
            raise ValueError("weights must be a unit vector")
        jumps = tuple(i + 1 for i in range(len(w) - 1) if w[i] - w[i + 1] > 1e-10)
        if jumps != self.flag.type:
            raise ValueError(
                f"weight jumps {jumps} do not match flag type {self.flag.type}")

    @property
    def n(self) -> int:
        return self.flag.n


def weights_for_type(n: int, type_dims, values=None) -> ChamberVector:
    """A unit chamber vector with the given jump pattern.

    With ``values`` omitted, uses the normalized coroot-style profile obtained
    by projecting the indicator profile of the flag type.
    """
    sys = RootSystem("A", n - 1)
    dims = (0,) + tuple(type_dims) + (n,)
    if values is None:
        k = len(type_dims) + 1
        values = list(range(k - 1, -1, -1))
    w = np.zeros(n)
    for j in range(len(dims) - 1):
        w[dims[j]: dims[j + 1]] = values[j]
    return ChamberVector.of(sys, w).unit()


def standard_flag(n: int, type_dims) -> FlagPoint:
    return FlagPoint(tuple(type_dims), np.eye(n))


def random_flag(n: int, type_dims, rng: np.random.Generator) -> FlagPoint:
    """Haar-uniform flag via orthonormal-frame randomization."""
    m = rng.normal(size=(n, n))
    q, r = np.linalg.qr(m)
    q = q * np.sign(np.diag(r))
    return FlagPoint(tuple(type_dims), q)


def gram_schmidt(columns: np.ndarray, gram: np.ndarray) -> np.ndarray:
    """Gram-Schmidt of the columns with respect to the scalar product gram."""
    b = np.asarray(columns, dtype=float).copy()
    for j in range(b.shape[1]):
        for k in range(j):
            b[:, j] -= (b[:, k] @ gram @ b[:, j]) * b[:, k]
        nrm = np.sqrt(b[:, j] @ gram @ b[:, j])
        if nrm < 1e-12:
            raise ValueError("degenerate flag basis")
        b[:, j] /= nrm
    return b


def direction_vector(a: IdealPoint, x: SymPoint) -> SymTangent:
    """The unit tangent v_{a,x} at x pointing toward the ideal point a."""
    b = gram_schmidt(a.flag.basis, x.gram)
    d = a.weights.array
    mat = (b * d) @ np.linalg.inv(b)
    return SymTangent(x, mat)


def relative_position(f1: FlagPoint, f2: FlagPoint,
                      zero_tol: float = 1e-8, nonzero_tol: float = 1e-6) -> WeylElement:
    """Bruhat relative position of two full flags as a permutation matrix.

    The permutation w satisfies dim(V_i ∩ W_j) = #{k <= i : w(k) <= j}.
    Singular values inside [zero_tol, nonzero_tol] raise
    AmbiguousPositionError.
    """
    n = f1.n
    if f1.type != tuple(range(1, n)) or f2.type != tuple(range(1, n)):
        raise ValueError("relative_position requires full flags")
    dims = np.zeros((n + 1, n + 1), dtype=int)
    for i in range(n + 1):
        for j in range(n + 1):
            if i == 0 or j == 0:
                dims[i, j] = 0
                continue
            stacked = np.hstack([f1.basis[:, :i], f2.basis[:, :j]])
            sv = np.linalg.svd(stacked, compute_uv=False)
            if np.any((sv > zero_tol) & (sv < nonzero_tol)):
                raise AmbiguousPositionError(
                    "singular value in the undecidable band; flags nearly degenerate")
            rank = int(np.sum(sv >= nonzero_tol))
            dims[i, j] = i + j - rank
    perm = np.zeros(n, dtype=int)
    for k in range(1, n + 1):
        row = dims[k] - dims[k - 1]
        perm[k - 1] = int(np.argmax(row == 1)) - 1  # first j with a jump
    # in a common flat, flag-2's weight tau_b[k] sits at coordinate slot s with
    # perm[s] = k, so v_b has diagonal (m @ tau_b) for this permutation matrix
    m = np.zeros((n, n))
    m[np.arange(n), perm] = 1.0
    return WeylElement.of(m)


def _stabilizer(sys: RootSystem, tau: np.ndarray) -> list[np.ndarray]:
    mats = [w.array for w in weyl_elements(sys)]
    return [m for m in mats if np.abs(m @ tau - tau).max() < 1e-9]


def _complete_flag(f: FlagPoint, rng: np.random.Generator) -> FlagPoint:
    """A random full flag refining f (identity on already-full flags)."""
    n = f.n
    if f.type == tuple(range(1, n)):
        return f
    dims = (0,) + f.type + (n,)
    cols = []
    for j in range(len(dims) - 1):
        block = f.basis[:, dims[j]: dims[j + 1]]
        k = block.shape[1]
        mix, r = np.linalg.qr(rng.normal(size=(k, k)))
        cols.append(block @ (mix * np.sign(np.diag(r))))
    return FlagPoint(tuple(range(1, n)), np.hstack(cols))


def tits_angle_flat(a: IdealPoint, b: IdealPoint,
                    rng: np.random.Generator | None = None) -> float:
    """Tits angle via the relative position in a common flat.

    cos = max over double-coset representatives w' of <tau_a, w'.tau_b>; the
    value is constant on the double coset, so any representative works.
    Partial flags are completed to random compatible full flags.
    """
    rng = rng or np.random.default_rng(0)
    fa, fb = _complete_flag(a.flag, rng), _complete_flag(b.flag, rng)
    w = relative_position(fa, fb)
    sys = a.weights.sys
    ta, tb = a.weights.array, b.weights.array
    stab_a = _stabilizer(sys, ta)
    stab_b = _stabilizer(sys, tb)
    best = -np.inf
    wm = w.array
    for u in stab_a:
        uw = u @ wm
        for v in stab_b:
            best = max(best, sys.metric_scale * float(ta @ (uw @ (v @ tb))))
    return float(np.arccos(np.clip(best, -1.0, 1.0)))


def _angle_between(u: SymTangent, v: SymTangent) -> float:
    from .symspace import inner, tangent_norm
    c = inner(u, v) / (tangent_norm(u) * tangent_norm(v))
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


def tits_angle_numeric(a: IdealPoint, b: IdealPoint, restarts: int = 8,
                       max_iter: int = 500, seed: int = 0) -> float:
    """Tits angle by optimizing the angle of the direction vectors over x.

    The Tits angle is the extremal comparison angle over basepoints, attained
    when x lies in a common flat with a and b (the infimum degenerates to 0 at
    infinity).  The cosine of the comparison angle is minimized over a chart
    x = exp(sum theta_i s_i) . q0 by quasi-Newton descent with multiple random
    starts; working at the transported identity keeps evaluations conditioned.
    """
    from scipy.linalg import expm
    from scipy.optimize import minimize
    from .symspace import inner

    rng = np.random.default_rng(seed)
    n = a.n
    q0 = SymPoint(np.eye(n))

    # scaled-orthonormal symmetric trace-free directions at the identity
    dirs = []
    for i in range(n):
        for j in range(i, n):
            s = np.zeros((n, n))
            if i == j:
                if i == n - 1:
                    continue
                s[i, i], s[n - 1, n - 1] = 1.0, -1.0
            else:
                s[i, j] = s[j, i] = 1.0
            dirs.append(s / np.sqrt(2.0 * n * np.trace(s @ s)))
    dirs = np.array(dirs)
    va_basis, vb_basis = a.flag.basis, b.flag.basis

    def phi(theta):
        # cosine of the comparison angle at x = exp(theta . dirs) . q0
        g = expm(np.tensordot(theta, dirs, axes=1))
        gi = np.linalg.inv(g)
        ia = IdealPoint(FlagPoint(a.flag.type, _plain_orthonormalize(gi @ va_basis)),
                        a.weights)
        ib = IdealPoint(FlagPoint(b.flag.type, _plain_orthonormalize(gi @ vb_basis)),
                        b.weights)
        return inner(direction_vector(ia, q0), direction_vector(ib, q0))

    best = np.inf
    converged = False
    for r in range(restarts):
        theta0 = rng.normal(size=len(dirs)) * (0.1 + 0.2 * r)
        res = minimize(phi, theta0, method="BFGS",
                       options={"maxiter": max_iter, "gtol": 1e-10})
        best = min(best, float(res.fun))
        converged = converged or res.success or np.linalg.norm(res.jac) < 1e-6
    if not converged:
        raise RuntimeError(f"tits_angle_numeric did not converge; best cos {best}")
    return float(np.arccos(np.clip(best, -1.0, 1.0)))


def _plain_orthonormalize(b: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(b)
    return q * np.sign(np.diag(r))


def _tangent_basis(x: SymPoint) -> list[SymTangent]:
    """A scaled-orthonormal basis of the tangent space at x."""
    from .symspace import inner

    n = x.n
    c = np.linalg.cholesky(np.linalg.inv(x.gram))  # maps q0-frame to x-frame
    out = []
    for i in range(n):
        for j in range(i, n):
            s = np.zeros((n, n))
            if i == j:
                if i == n - 1:
                    continue
                s[i, i], s[n - 1, n - 1] = 1.0, -1.0
            else:
                s[i, j] = s[j, i] = 1.0
            m = c @ s @ np.linalg.inv(c)
            t = SymTangent(x, m - np.trace(m) / n * np.eye(n))
            out.append(t)
    # Gram-Schmidt in the tangent metric
    ortho: list[SymTangent] = []
    for t in out:
        m = t.mat.copy()
        for u in ortho:
            m -= inner(SymTangent(x, m), u) * u.mat
        nrm = np.sqrt(max(inner(SymTangent(x, m), SymTangent(x, m)), 0.0))
        if nrm > 1e-10:
            ortho.append(SymTangent(x, m / nrm))
    return ortho


def thickening_membership(a: IdealPoint, f: IdealPoint,
                          tol: float = 1e-9,
                          rng: np.random.Generator | None = None) -> bool:
    """Whether a lies in the thickening K_f = {Tits angle <= pi/2}."""
    return tits_angle_flat(a, f, rng=rng) <= np.pi / 2 + tol


def flag_distance(f1: FlagPoint, f2: FlagPoint) -> float:
    """Projector-based distance between flags of equal type."""
    if f1.type != f2.type:
        raise ValueError("flags of different types")
    tot = 0.0
    for j in range(len(f1.type)):
        p1 = f1.subspace(j) @ f1.subspace(j).T
        p2 = f2.subspace(j) @ f2.subspace(j).T
        tot += float(np.sum((p1 - p2) ** 2))
    return float(np.sqrt(tot))
