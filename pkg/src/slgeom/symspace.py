"""The symmetric space of unit-volume scalar products on R^n.

A point is the Gram matrix Q of the scalar product in the standard basis
(symmetric positive definite, det 1).  The group acts by
``act(g, q) = inv(g).T @ Q @ inv(g)``.  A tangent vector at q is a q-symmetric
trace-free endomorphism w (``Q w = w.T Q``); the curve ``exp(t w) . q`` is the
unit-speed geodesic when ``|w| = 1`` for the metric ``<u, v>_q = 2n tr(u* v)``.
In Gram coordinates at the identity this curve reads ``expm(-2 t w)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh, expm

from .rootsys import ChamberVector, RootSystem, chamber_project

__all__ = [
    "SymPoint",
    "SymTangent",
    "GroupElement",
    "basepoint",
    "act",
    "push_tangent",
    "inner",
    "tangent_norm",
    "geodesic",
    "cartan_projection",
    "generalized_distance",
    "distance",
    "exp_point",
    "random_tangent",
    "spd_sqrt",
    "spd_inv_sqrt",
    "spd_log",
]


def _check_symmetric(m, tol, what):
    err = np.abs(m - m.T).max()
    if err > tol:
        raise ValueError(f"{what} asymmetric beyond tolerance ({err:.2e})")
    return (m + m.T) / 2.0


@dataclass
class SymPoint:
    """A unit-determinant scalar product, stored as its Gram matrix."""

    gram: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.gram, dtype=float)
        g = _check_symmetric(g, 1e-6, "Gram matrix")
        if np.linalg.eigvalsh(g)[0] <= 0:
            raise ValueError("Gram matrix must be positive definite")
        det = np.linalg.det(g)
        if abs(det - 1.0) > 1e-8:
            g = g / det ** (1.0 / g.shape[0])
        self.gram = g

    @property
    def n(self) -> int:
        return self.gram.shape[0]

    def value(self, v, w) -> float:
        """The scalar product q(v, w)."""
        return float(np.asarray(v) @ self.gram @ np.asarray(w))


@dataclass
class SymTangent:
    """A tangent vector: base-symmetric trace-free endomorphism at a point."""

    base: SymPoint
    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=float)
        q = self.base.gram
        scale = max(1.0, np.abs(q @ m).max())
        err = np.abs(q @ m - (q @ m).T).max()
        if err > 1e-6 * scale:
            raise ValueError(f"q*mat asymmetric beyond tolerance ({err:.2e})")
        s = (q @ m + (q @ m).T) / 2.0
        m = np.linalg.solve(q, s)
        tr = np.trace(m)
        if abs(tr) > 1e-6 * max(1.0, np.abs(m).max()):
            raise ValueError(f"tangent must be trace-free (trace {tr:.2e})")
        self.mat = m - (tr / m.shape[0]) * np.eye(m.shape[0])

    @property
    def n(self) -> int:
        return self.mat.shape[0]


@dataclass
class GroupElement:
    """An element of SL(n, R)."""

    mat: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.mat, dtype=float)
        det = np.linalg.det(m)
        if det <= 0:
            raise ValueError("group elements must have positive determinant")
        if abs(det - 1.0) > 1e-8:
            m = m / det ** (1.0 / m.shape[0])
        self.mat = m


def basepoint(n: int) -> SymPoint:
    return SymPoint(np.eye(n))


def act(g: GroupElement, x: SymPoint) -> SymPoint:
    """Pullback action on scalar products: (g.q)(v, w) = q(g^-1 v, g^-1 w)."""
    ginv = np.linalg.inv(g.mat)
    return SymPoint(ginv.T @ x.gram @ ginv)


def push_tangent(g: GroupElement, v: SymTangent) -> SymTangent:
    """Differential of the isometry g on tangents: w -> g w g^-1."""
    return SymTangent(act(g, v.base), g.mat @ v.mat @ np.linalg.inv(g.mat))


def inner(u: SymTangent, v: SymTangent) -> float:
    """<u, v>_q = 2n tr(u* v), u* the base-adjoint of u."""
    if np.abs(u.base.gram - v.base.gram).max() > 1e-9:
        raise ValueError("tangents have different basepoints")
    q = u.base.gram
    ustar = np.linalg.solve(q, u.mat.T @ q)
    return 2.0 * u.n * float(np.trace(ustar @ v.mat))


def tangent_norm(v: SymTangent) -> float:
    return float(np.sqrt(max(inner(v, v), 0.0)))


def exp_point(v: SymTangent) -> SymPoint:
    """The endpoint exp(v) . base of the geodesic with initial velocity v."""
    return act(GroupElement(expm(v.mat)), v.base)


def geodesic(x: SymPoint, v: SymTangent, t: float) -> SymPoint:
    """exp(t v) . x; unit speed iff |v| = 1."""
    return act(GroupElement(expm(t * v.mat)), x)


def _root_system(n: int) -> RootSystem:
    return RootSystem("A", n - 1)


def cartan_projection(v: SymTangent) -> ChamberVector:
    """Descending eigenvalues of the base-symmetric endomorphism."""
    q = v.base.gram
    s = (q @ v.mat + v.mat.T @ q) / 2.0
    lam = eigh(s, q, eigvals_only=True)
    return ChamberVector.of(_root_system(v.n), np.sort(lam)[::-1])


def generalized_distance(x: SymPoint, y: SymPoint) -> ChamberVector:
    """The chamber-valued distance d_a(x, y) based at x.

    It is the Cartan projection of the unique w in p_x with exp(w).x = y,
    computed from the relative eigenvalues of the Gram pair.
    """
    lam = eigh(y.gram, x.gram, eigvals_only=True)
    w = -0.5 * np.log(lam)
    return ChamberVector.of(_root_system(x.n), np.sort(w)[::-1])


def distance(x: SymPoint, y: SymPoint) -> float:
    return generalized_distance(x, y).norm()


def random_tangent(x: SymPoint, rng: np.random.Generator, scale: float = 1.0) -> SymTangent:
    """A random base-symmetric trace-free tangent at x."""
    n = x.n
    s = rng.normal(size=(n, n)) * scale
    s = (s + s.T) / 2.0
    m = np.linalg.solve(x.gram, s)
    m -= (np.trace(m) / n) * np.eye(n)
    return SymTangent(x, m)


def spd_sqrt(q: np.ndarray) -> np.ndarray:
    lam, u = np.linalg.eigh((q + q.T) / 2.0)
    return (u * np.sqrt(lam)) @ u.T


def spd_inv_sqrt(q: np.ndarray) -> np.ndarray:
    lam, u = np.linalg.eigh((q + q.T) / 2.0)
    return (u / np.sqrt(lam)) @ u.T


def spd_log(q: np.ndarray) -> np.ndarray:
    lam, u = np.linalg.eigh((q + q.T) / 2.0)
    return (u * np.log(lam)) @ u.T
