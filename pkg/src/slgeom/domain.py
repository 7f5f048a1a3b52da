"""Fibered domains in flag manifolds: membership by properness of Busemann
functions along a surface, the fibration projection, and comparison with
metric thickenings built from a sampled limit set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .busemann import busemann_hessian, busemann_value
from .flags import (FlagPoint, IdealPoint, direction_vector, flag_distance,
                    random_flag, weights_for_type)
from .immersions import SurfaceModel
from .rootsys import ChamberVector
from .symspace import SymPoint, SymTangent, inner

__all__ = [
    "Verdict",
    "DomainQuery",
    "domain_membership",
    "fibration_project",
    "FiberReport",
    "fiber_vs_pencil_base",
    "boundary_flags",
    "thickening_core_distance",
    "thickening_domain_membership",
    "compare_domains",
    "attracting_flag",
]


class Verdict(Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    AMBIGUOUS = "boundary-ambiguous"


@dataclass
class DomainQuery:
    verdict: Verdict
    minimizer: complex | None = None
    min_value: float | None = None
    hessian_eigs: tuple | None = None
    escape_direction: tuple | None = None
    escape_slope: float | None = None


def _surface_gradient(a: IdealPoint, o: SymPoint, surface: SurfaceModel,
                      z: complex) -> np.ndarray:
    """Gradient of b_{a,o} o u at z in the orthonormal surface frame."""
    x = surface.point(z)
    va = direction_vector(a, x)
    e1, e2 = surface.frame(z)
    return np.array([-inner(va, e1), -inner(va, e2)])


def _surface_hessian_eigs(a: IdealPoint, surface: SurfaceModel, z: complex,
                          fd_step: float = 1e-3, o: SymPoint | None = None):
    """Eigenvalues of the 2x2 Hessian of b o u at z (second differences)."""
    o = o or surface.point(z)
    h = np.zeros((2, 2))
    f0 = busemann_value(a, o, surface.point(z))

    def f(c, t):
        return busemann_value(a, o, surface.point(surface.shift(z, c, t)))

    dirs = [(1.0, 0.0), (0.0, 1.0)]
    for i, c in enumerate(dirs):
        h[i, i] = (f(c, fd_step) - 2 * f0 + f(c, -fd_step)) / fd_step ** 2
    mixed_pp = f((np.sqrt(0.5), np.sqrt(0.5)), fd_step)
    mixed_mm = f((np.sqrt(0.5), np.sqrt(0.5)), -fd_step)
    mixed = (mixed_pp - 2 * f0 + mixed_mm) / fd_step ** 2
    h[0, 1] = h[1, 0] = (mixed - h[0, 0] / 2 - h[1, 1] / 2)
    return tuple(np.linalg.eigvalsh(h))


def _verdict_at_critical_point(a, surface, z, fz, o, pos_tol, deg_tol):
    """Classify a critical point by its surface-Hessian eigenvalues.

    A clearly positive Hessian certifies a proper minimum (Inside).  An
    eigenvalue at zero means the function is minimal along a surface geodesic
    (totally geodesic case), so it is not proper: Outside.  The band between
    is Boundary-ambiguous.
    """
    eigs = _surface_hessian_eigs(a, surface, z, o=o)
    if eigs[0] > pos_tol:
        return DomainQuery(Verdict.INSIDE, minimizer=z, min_value=fz,
                           hessian_eigs=eigs)
    if eigs[0] < deg_tol:
        return DomainQuery(Verdict.OUTSIDE, minimizer=z, min_value=fz,
                           hessian_eigs=eigs)
    return DomainQuery(Verdict.AMBIGUOUS, minimizer=z, min_value=fz,
                       hessian_eigs=eigs)


def domain_membership(a: IdealPoint, surface: SurfaceModel, o: SymPoint,
                      start: complex = 1j, max_radius: float = 12.0,
                      escape_slope: float = 1e-3, grad_tol: float = 1e-6,
                      max_iter: int = 600, pos_tol: float = 1e-4,
                      deg_tol: float = 1e-6) -> DomainQuery:
    """Whether b_{a,o} o u is proper and bounded below, by descent on the surface.

    Inside: an interior critical point with positive-definite surface Hessian.
    Outside: either the value decreases linearly (slope <= -escape_slope per
    unit induced length) out to the maximal disk radius, or the critical point
    is degenerate (minimal along a geodesic, so not proper).  Otherwise
    Boundary-ambiguous.
    """
    z = start
    fz = busemann_value(a, o, surface.point(z))
    step = 0.5
    for _ in range(max_iter):
        g = _surface_gradient(a, o, surface, z)
        gn = float(np.linalg.norm(g))
        if gn < grad_tol:
            return _verdict_at_critical_point(a, surface, z, fz, o,
                                              pos_tol, deg_tol)
        d = (-g[0] / gn, -g[1] / gn)
        moved = False
        while step > 1e-12:
            zn = surface.shift(z, d, step)
            fn = busemann_value(a, o, surface.point(zn))
            if fn < fz - 1e-4 * step * gn:
                z, fz = zn, fn
                step = min(step * 1.6, 1.0)
                moved = True
                break
            step *= 0.5
        r = surface.surface_distance(start, z)
        if r > max_radius:
            # sustained linear decrease along the escape path
            slope = (fz - busemann_value(a, o, surface.point(start))) / max(r, 1e-9)
            if slope <= -escape_slope:
                return DomainQuery(Verdict.OUTSIDE, escape_direction=d,
                                   escape_slope=slope)
            return DomainQuery(Verdict.AMBIGUOUS, escape_slope=slope)
        if not moved:
            if gn < 10 * grad_tol:
                return _verdict_at_critical_point(a, surface, z, fz, o,
                                                  pos_tol, deg_tol)
            return DomainQuery(Verdict.AMBIGUOUS, minimizer=z, min_value=fz)
    return DomainQuery(Verdict.AMBIGUOUS, minimizer=z, min_value=fz)


def fibration_project(a: IdealPoint, surface: SurfaceModel, o: SymPoint,
                      start: complex = 1j) -> complex:
    """The unique minimizer of b_{a,o} o u (requires an Inside point)."""
    q = domain_membership(a, surface, o, start=start)
    if q.verdict is not Verdict.INSIDE:
        raise ValueError(f"not an interior domain point ({q.verdict.value})")
    return q.minimizer


@dataclass
class FiberReport:
    basepoint: complex
    fiber_pairs: np.ndarray      # refined flags as (x | y) rows
    base_pairs: np.ndarray       # pencil-base cloud in the same coordinates
    matching_distance: float
    fiber_components_hit: int


def newton_surface_minimizer(a: IdealPoint, surface: SurfaceModel, o: SymPoint,
                             start: complex = 1j, max_iter: int = 40,
                             grad_tol: float = 1e-9):
    """Fast local minimizer of b_{a,o} o u by Newton steps in surface coords.

    Returns (z, value, grad_norm); the caller decides whether the stationary
    point qualifies.  Armijo fallback keeps steps stable far from the minimum.
    """
    z = start
    fz = busemann_value(a, o, surface.point(z))
    h = 1e-4
    for _ in range(max_iter):
        g = _surface_gradient(a, o, surface, z)
        gn = float(np.linalg.norm(g))
        if gn < grad_tol:
            return z, fz, gn
        hess = np.zeros((2, 2))
        for i, c in enumerate(((1.0, 0.0), (0.0, 1.0))):
            gp = _surface_gradient(a, o, surface, surface.shift(z, c, h))
            gm = _surface_gradient(a, o, surface, surface.shift(z, c, -h))
            hess[:, i] = (gp - gm) / (2 * h)
        hess = (hess + hess.T) / 2.0
        lam = np.linalg.eigvalsh(hess)
        if lam[0] > 1e-10:
            step_vec = -np.linalg.solve(hess, g)
        else:
            step_vec = -g
        sn = float(np.linalg.norm(step_vec))
        if sn > 1.0:
            step_vec = step_vec / sn
            sn = 1.0
        t = 1.0
        improved = False
        while t > 1e-8:
            zn = surface.shift(z, (step_vec[0] / sn, step_vec[1] / sn), t * sn)
            fn = busemann_value(a, o, surface.point(zn))
            if fn < fz + 1e-14:
                z, fz = zn, fn
                improved = True
                break
            t *= 0.5
        if not improved:
            break
    return z, fz, float(np.linalg.norm(_surface_gradient(a, o, surface, z)))


def fiber_vs_pencil_base(surface: SurfaceModel, tau: ChamberVector, y: complex,
                         o: SymPoint | None = None, n_seeds: int = 120,
                         proj_tol: float = 1e-4, seed: int = 0) -> FiberReport:
    """Compare the fiber of the projection over y with the tangent pencil base.

    Flags are refined so that the Busemann minimizer over the surface sits
    over y (within proj_tol in induced distance); the refined set is then
    matched one-sidedly against the pencil-base cloud of the tangent pencil at
    u(y).  Implemented for n = 3 full flags.
    """
    from scipy.linalg import expm
    from scipy.optimize import minimize
    from .pencils import Pencil, base_flag_sl3
    from .symspace import basepoint

    n = surface.n
    if n != 3:
        raise ValueError("fiber comparison implemented for n = 3")
    o = o or basepoint(n)
    rng = np.random.default_rng(seed)
    dims = tuple(i + 1 for i in range(n - 1)
                 if tau.array[i] - tau.array[i + 1] > 1e-10)

    e1, e2 = surface.frame(y)
    pencil = Pencil(surface.point(y), [e1, e2])
    base_pts, base_report = base_flag_sl3(pencil, samples=1500, seed=seed)

    skews = []
    for i in range(n):
        for j in range(i + 1, n):
            k = np.zeros((n, n))
            k[i, j], k[j, i] = 1.0, -1.0
            skews.append(k)
    skews = np.array(skews)

    def offset(flag: FlagPoint) -> float:
        z, _, gn = newton_surface_minimizer(IdealPoint(flag, tau), surface, o,
                                            start=y)
        if gn > 1e-6:
            return 10.0
        return surface.surface_distance(z, y)

    def refine(flag: FlagPoint):
        def cost(theta):
            g = expm(np.tensordot(theta, skews, axes=1))
            return offset(FlagPoint(flag.type, _qr_fix(g @ flag.basis)))

        res = minimize(cost, np.zeros(len(skews)), method="Nelder-Mead",
                       options={"xatol": 1e-9, "fatol": 1e-12, "maxiter": 200})
        if res.fun < proj_tol:
            g = expm(np.tensordot(res.x, skews, axes=1))
            return FlagPoint(flag.type, _qr_fix(g @ flag.basis))
        return None

    # seeds: perturbed pencil-base representatives
    fiber = []
    k_base = min(n_seeds, len(base_pts))
    picks = rng.choice(len(base_pts), size=k_base, replace=False) if k_base else []
    for idx in picks:
        x, yv = base_pts[idx, :3], base_pts[idx, 3:]
        third = np.cross(x, yv)
        basis = np.column_stack([x, third / np.linalg.norm(third), yv])
        basis = basis + 0.02 * rng.standard_normal((3, 3))
        f = refine(FlagPoint(dims, _qr_fix(basis)))
        if f is not None:
            fiber.append(f)
    if not fiber:
        raise RuntimeError("empty fiber sample")

    from .pencils import _canonical_flag_pair, _flag_pair_distance
    pairs = []
    for f in fiber:
        x = f.basis[:, 0]
        yv = np.cross(f.basis[:, 0], f.basis[:, 1])
        yv /= np.linalg.norm(yv)
        pairs.append(_canonical_flag_pair(x, yv))
    pairs = np.array(pairs)

    # distance to the base variety: Newton-project each fiber point onto the
    # defining equations, seeded at itself; cloud labels give component hits
    quads = [g.mat for g in pencil.gens]

    def base_res(z):
        x, yv = z[:3], z[3:]
        return np.array([
            x @ quads[0] @ x - yv @ quads[0] @ yv,
            x @ quads[1] @ x - yv @ quads[1] @ yv,
            x @ yv, x @ x - 1.0, yv @ yv - 1.0])

    def base_jac(z):
        x, yv = z[:3], z[3:]
        return np.array([
            np.concatenate([2 * quads[0] @ x, -2 * quads[0] @ yv]),
            np.concatenate([2 * quads[1] @ x, -2 * quads[1] @ yv]),
            np.concatenate([yv, x]),
            np.concatenate([2 * x, np.zeros(3)]),
            np.concatenate([np.zeros(3), 2 * yv])])

    from .pencils import _newton_refine
    dists = np.empty(len(pairs))
    hit = set()
    for i, p in enumerate(pairs):
        ds = [_flag_pair_distance(p, b) for b in base_pts]
        j = int(np.argmin(ds))
        hit.add(int(base_report.labels[j]))
        proj = _newton_refine(base_res, base_jac, p)
        if proj is not None:
            dists[i] = min(ds[j], _flag_pair_distance(p, _canonical_flag_pair(
                proj[:3], proj[3:])))
        else:
            dists[i] = ds[j]
    return FiberReport(y, pairs, base_pts, float(dists.max()), len(hit))


def _qr_fix(b: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(b)
    return q * np.sign(np.diag(r))


# ---------------------------------------------------------------------------
# thickenings from a sampled limit set


def attracting_flag(mat: np.ndarray, tol: float = 1e-8) -> FlagPoint:
    """The attracting full flag of a matrix with real simple spectrum."""
    lam, vec = np.linalg.eig(mat)
    if np.abs(lam.imag).max() > tol:
        raise ValueError("matrix has non-real eigenvalues")
    order = np.argsort(-np.abs(lam.real))
    gaps = np.abs(np.diff(np.abs(lam.real[order])))
    if np.any(gaps < tol):
        raise ValueError("eigenvalue moduli are not separated")
    b = vec.real[:, order]
    q, r = np.linalg.qr(b)
    return FlagPoint(tuple(range(1, mat.shape[0])), q * np.sign(np.diag(r)))


def boundary_flags(emb, gens: list[np.ndarray], word_len: int,
                   max_count: int | None = None, seed: int = 0) -> list[FlagPoint]:
    """Attracting flags of all reduced words of the given length."""
    bases = boundary_flag_bases(emb, gens, word_len, max_count=max_count,
                                seed=seed)
    n = bases.shape[1]
    return [FlagPoint(tuple(range(1, n)), b) for b in bases]


def boundary_flag_bases(emb, gens: list[np.ndarray], word_len: int,
                        max_count: int | None = None, seed: int = 0,
                        gap_tol: float = 1e-8) -> np.ndarray:
    """Attracting full-flag bases of all reduced words, batched.

    Returns a stacked (N, n, n) array of orthonormal bases ordered by
    decreasing eigenvalue modulus; words with unseparated or non-real spectra
    are dropped.
    """
    from .immersions import reduced_word_tuples

    rng = np.random.default_rng(seed)
    words = reduced_word_tuples(len(gens), word_len)
    if max_count is not None and len(words) > max_count:
        idx = rng.choice(len(words), size=max_count, replace=False)
        words = [words[i] for i in idx]
    mats = [emb.group_map(g) for g in gens]
    mats += [np.linalg.inv(m) for m in mats]
    letters = np.array(mats)
    n = letters.shape[1]
    prods = np.empty((len(words), n, n))
    chunk = 100_000
    warr = np.array(words, dtype=np.int64)
    for lo in range(0, len(words), chunk):
        block = warr[lo: lo + chunk]
        m = letters[block[:, 0]]
        for col in range(1, block.shape[1]):
            m = np.einsum("pij,pjk->pik", m, letters[block[:, col]])
        prods[lo: lo + chunk] = m
    lam, vec = np.linalg.eig(prods)
    ok = np.abs(lam.imag).max(axis=1) < gap_tol
    mod = np.abs(lam.real)
    order = np.argsort(-mod, axis=1)
    sorted_mod = np.take_along_axis(mod, order, axis=1)
    gaps = sorted_mod[:, :-1] - sorted_mod[:, 1:]
    ok &= gaps.min(axis=1) > gap_tol
    basis = np.take_along_axis(vec.real, order[:, None, :], axis=2)
    basis = basis[ok]
    q, r = np.linalg.qr(basis)
    signs = np.sign(np.einsum("pii->pi", r))
    return q * signs[:, None, :]


def _cell_sign_table(tau: ChamberVector, tau0: ChamberVector):
    """Per-permutation sign of cos angle = <tau, w tau0> over the Weyl group."""
    from .rootsys import weyl_elements
    sys = tau.sys
    table = []
    for w in weyl_elements(sys):
        c = sys.metric_scale * float(tau.array @ w.apply(tau0.array))
        table.append((w, c))
    return table


def thickening_core_distance(a: FlagPoint, f: FlagPoint, tau: ChamberVector,
                             tau0: ChamberVector) -> float:
    """Distance from a to the thickening K_f (full flags, n = 3).

    K_f is the union of closed Bruhat cells w with <tau, w tau0> >= 0; the
    distance to a closed cell is measured by the subspace-incidence residuals
    the cell requires.
    """
    n = a.n
    if n != 3:
        raise ValueError("thickening core distance implemented for n = 3")
    sys = tau.sys
    la, ha = a.basis[:, :1], a.basis[:, :2]
    lf, hf = f.basis[:, :1], f.basis[:, :2]

    def line_dist(u, v):
        c = abs(float(u[:, 0] @ v[:, 0]))
        return float(np.sqrt(max(0.0, 1.0 - c * c)))

    def plane_dist(u, v):
        # distance between planes = distance between unit normals
        nu = np.cross(u[:, 0], u[:, 1])
        nv = np.cross(v[:, 0], v[:, 1])
        nu /= np.linalg.norm(nu)
        nv /= np.linalg.norm(nv)
        c = abs(float(nu @ nv))
        return float(np.sqrt(max(0.0, 1.0 - c * c)))

    # closed-cell residuals for the six S3 cells, keyed by the incidence they
    # require between (l_a, H_a) and (l_f, H_f)
    d_ll = line_dist(la, lf)
    d_hh = plane_dist(ha, hf)
    d_l_in_hf = _line_in_plane(la, hf)
    d_lf_in_ha = _line_in_plane(lf, ha)

    best = np.inf
    for w, cos in _cell_sign_table(tau, tau0):
        if cos < -1e-12:
            continue
        perm = np.argmax(w.array, axis=1)
        resid = _cell_residual(perm, d_ll, d_hh, d_l_in_hf, d_lf_in_ha)
        best = min(best, resid)
    return best


def _line_in_plane(line, plane):
    normal = np.cross(plane[:, 0], plane[:, 1])
    normal /= np.linalg.norm(normal)
    return abs(float(line[:, 0] @ normal))


def _cell_residual(perm, d_ll, d_hh, d_l_in_hf, d_lf_in_ha) -> float:
    """Distance proxy to the closed Bruhat cell of the permutation (n = 3)."""
    w1 = int(perm[0]) + 1   # f-level of a's line: l_a in F_{w1}, not F_{w1 - 1}
    w3 = int(perm[2]) + 1   # encodes incidence of H_a with f's flag
    resid = 0.0
    if w1 == 1:
        resid = max(resid, d_ll)
    elif w1 == 2:
        resid = max(resid, d_l_in_hf)
    if w3 == 3:
        resid = max(resid, d_hh)
    elif w3 == 2:
        resid = max(resid, d_lf_in_ha)
    return resid


def _cell_requirements(tau: ChamberVector, tau0: ChamberVector):
    """For each non-excluded cell, the incidence residuals it requires.

    Residual selectors index (d_ll, d_l_in_hf, d_hh, d_lf_in_ha); n = 3.
    """
    reqs = []
    for w, cos in _cell_sign_table(tau, tau0):
        if cos < -1e-12:
            continue
        perm = np.argmax(w.array, axis=1)
        w1, w3 = int(perm[0]) + 1, int(perm[2]) + 1
        sel = []
        if w1 == 1:
            sel.append(0)
        elif w1 == 2:
            sel.append(1)
        if w3 == 3:
            sel.append(2)
        elif w3 == 2:
            sel.append(3)
        reqs.append(tuple(sel))
    return sorted(set(reqs))


def thickening_core_distances_batch(a: FlagPoint, boundary_bases: np.ndarray,
                                    tau: ChamberVector, tau0: ChamberVector) -> np.ndarray:
    """Distances from a to the thickenings of a stack of boundary flags (n=3)."""
    la = a.basis[:, 0]
    na = np.cross(a.basis[:, 0], a.basis[:, 1])
    na /= np.linalg.norm(na)
    lf = boundary_bases[:, :, 0]
    nf = np.cross(boundary_bases[:, :, 0], boundary_bases[:, :, 1])
    nf /= np.linalg.norm(nf, axis=1)[:, None]
    c_ll = np.abs(lf @ la)
    d_ll = np.sqrt(np.clip(1.0 - c_ll ** 2, 0.0, None))
    c_hh = np.abs(nf @ na)
    d_hh = np.sqrt(np.clip(1.0 - c_hh ** 2, 0.0, None))
    d_l_in_hf = np.abs(nf @ la)
    d_lf_in_ha = np.abs(lf @ na)
    stack = np.stack([d_ll, d_l_in_hf, d_hh, d_lf_in_ha], axis=1)
    best = np.full(len(boundary_bases), np.inf)
    for sel in _cell_requirements(tau, tau0):
        if not sel:
            return np.zeros(len(boundary_bases))
        resid = stack[:, list(sel)].max(axis=1)
        best = np.minimum(best, resid)
    return best


def thickening_domain_membership(a: IdealPoint, boundary, tau0: ChamberVector,
                                 band: float = 0.0):
    """Membership in the thickening-complement domain.

    Exact semantics (band = 0): in the domain iff the Tits angle to every
    sampled boundary flag exceeds pi/2.  With a positive ``band`` the test is
    resolved at the sampling scale: a point within ``band`` of a sampled
    thickening core counts as excluded.  Returns (bool, min core distance).
    ``boundary`` is a list of FlagPoint or a stacked (N, n, n) basis array.
    """
    if isinstance(boundary, np.ndarray):
        if len(boundary) == 0:
            return True, np.inf
        d = thickening_core_distances_batch(a.flag, boundary, a.weights, tau0)
        dmin = float(d.min())
        return dmin > band, dmin
    if not boundary:
        return True, np.inf
    dmin = min(thickening_core_distance(a.flag, f, a.weights, tau0)
               for f in boundary)
    return dmin > band, dmin


def compare_domains(surface: SurfaceModel, tau: ChamberVector,
                    tau0: ChamberVector, boundary: list[FlagPoint],
                    samples: int = 500, band: float = 0.02, seed: int = 0,
                    o: SymPoint | None = None):
    """Classify random flags by properness and by thickening membership.

    Returns a list of records (flag, properness verdict, thickening verdict,
    core distance); agreement statistics are computed by the caller.
    """
    from .symspace import basepoint

    n = surface.n
    o = o or basepoint(n)
    rng = np.random.default_rng(seed)
    dims = tuple(i + 1 for i in range(n - 1)
                 if tau.array[i] - tau.array[i + 1] > 1e-10)
    records = []
    for _ in range(samples):
        flag = random_flag(n, dims, rng)
        a = IdealPoint(flag, tau)
        q = domain_membership(a, surface, o)
        member, dmin = thickening_domain_membership(a, boundary, tau0, band=band)
        records.append((flag, q.verdict, member, dmin))
    return records
