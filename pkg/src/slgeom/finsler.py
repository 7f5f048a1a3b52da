"""The chamber-anisotropic Finsler pseudo-norm and pseudo-distance.

``|v|_tau = max_w <w.tau, v>`` over the Weyl orbit of tau; the induced
pseudo-distance between points is the pseudo-norm of the chamber-valued
distance.  Nearest-point projection onto a surface is by descent in the
surface's hyperbolic coordinates (the distance is convex along the surface
for certified immersions).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .rootsys import ChamberVector, RootSystem, weyl_images
from .symspace import SymPoint, generalized_distance

__all__ = ["FinslerContext", "pseudo_norm", "finsler_distance",
           "nearest_point_projection", "busemann_sup_sampled"]


@dataclass
class FinslerContext:
    """Caches the Weyl images of tau for fast pseudo-norm evaluation."""

    sys: RootSystem
    tau: ChamberVector
    images: np.ndarray = field(init=False)

    def __post_init__(self):
        if abs(self.tau.norm() - 1.0) > 1e-8:
            raise ValueError("tau must be a unit vector")
        imgs = weyl_images(self.sys, self.tau.array)
        self.images = np.unique(np.round(imgs, 12), axis=0)


def pseudo_norm(ctx: FinslerContext, v) -> float:
    """|v|_tau = max over Weyl images of the scaled inner product."""
    v = ctx.sys.project(np.asarray(v, dtype=float))
    return float(ctx.sys.metric_scale * np.max(ctx.images @ v))


def finsler_distance(ctx: FinslerContext, x: SymPoint, y: SymPoint) -> float:
    """d^tau(x, y) = |d_a(x, y)|_tau."""
    return pseudo_norm(ctx, generalized_distance(x, y).array)


def busemann_sup_sampled(ctx: FinslerContext, x: SymPoint, y: SymPoint,
                         samples: int = 2000, refine_iters: int = 300,
                         seed: int = 0) -> float:
    """Sampled max over flags of b_{a,x}(y), with hill-climbing refinement.

    An independent oracle for the Busemann-sup characterization of the Finsler
    distance; it never evaluates the norm-of-chamber-distance formula.
    """
    from scipy.linalg import expm
    from .busemann import busemann_value
    from .flags import FlagPoint, IdealPoint, random_flag

    n = x.n
    sys = ctx.sys
    dims = tuple(i + 1 for i in range(n - 1)
                 if ctx.tau.array[i] - ctx.tau.array[i + 1] > 1e-10)
    rng = np.random.default_rng(seed)
    best_val, best_flag = -np.inf, None
    for _ in range(samples):
        f = random_flag(n, dims, rng)
        v = busemann_value(IdealPoint(f, ctx.tau), x, y)
        if v > best_val:
            best_val, best_flag = v, f
    scale = 0.2
    for _ in range(refine_iters):
        k = rng.standard_normal((n, n))
        k = (k - k.T) * (scale / 2.0)
        cand = FlagPoint(best_flag.type, expm(k) @ best_flag.basis)
        v = busemann_value(IdealPoint(cand, ctx.tau), x, y)
        if v > best_val:
            best_val, best_flag = v, cand
        else:
            scale = max(scale * 0.97, 1e-5)
    return float(best_val)


def nearest_point_projection(ctx: FinslerContext, surface, x: SymPoint,
                             start: complex | None = None, starts: int = 1,
                             seed: int = 0, max_iter: int = 400,
                             grad_tol: float = 1e-6):
    """The surface parameter minimizing y -> d^tau(x, u(y)).

    Gradient descent with Armijo backtracking in the surface's hyperbolic
    coordinates; finite-difference gradients (the pseudo-norm is piecewise
    smooth, and convexity along the surface makes descent globally
    convergent).  Returns (parameter, value).
    """
    rng = np.random.default_rng(seed)

    def f(z: complex) -> float:
        return finsler_distance(ctx, x, surface.point(z))

    best = None
    for trial in range(starts):
        if start is not None and trial == 0:
            z = complex(start)
        else:
            z = complex(rng.normal() * 0.8, np.exp(rng.normal() * 0.5))
        fz = f(z)
        step = 0.5
        h = 1e-5
        for _ in range(max_iter):
            g = np.array([
                (f(surface.shift(z, (1.0, 0.0), h)) - f(surface.shift(z, (-1.0, 0.0), h))) / (2 * h),
                (f(surface.shift(z, (0.0, 1.0), h)) - f(surface.shift(z, (0.0, 1.0), -h))) / (2 * h),
            ])
            gn = np.linalg.norm(g)
            if gn < grad_tol:
                break
            d = -g / gn
            improved = False
            while step > 1e-12:
                zn = surface.shift(z, (d[0], d[1]), step)
                fn = f(zn)
                if fn < fz - 1e-4 * step * gn:
                    z, fz = zn, fn
                    step = min(step * 1.5, 2.0)
                    improved = True
                    break
                step *= 0.5
            if not improved:
                break
        if best is None or fz < best[1]:
            best = (z, fz, gn)
    z, fz, gn = best
    if gn > grad_tol and fz > 1e-9:
        raise RuntimeError(
            f"projection did not reach first-order optimality (|grad|={gn:.2e})")
    return z, fz
