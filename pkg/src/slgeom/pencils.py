"""Pencils of tangent vectors / quadrics, their bases in flag manifolds,
regularity certification, and Segre symbols.

At the identity basepoint a tangent pencil is a span of symmetric trace-free
matrices, which are simultaneously the Gram matrices of the corresponding
pencil of quadrics.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .rootsys import ChamberVector, RootSystem, weyl_images
from .symspace import SymPoint, SymTangent, cartan_projection, inner, tangent_norm
from .flags import FlagPoint, IdealPoint, direction_vector

__all__ = [
    "Pencil",
    "QuadricPencil",
    "SegreSymbol",
    "PencilRegularityError",
    "pencil_irr_sl3",
    "pencil_red_sl3",
    "base_projective",
    "base_flag_sl3",
    "is_singular_base_point",
    "submersion_rank",
    "certify_tau_regular",
    "segre_symbol",
    "mobius_pencil_matrix",
    "fuchsian_pencil",
    "fuchsian_unipotent",
    "cluster_components",
    "ComponentReport",
]


class PencilRegularityError(ValueError):
    """Raised for pencils with a degenerate member where regularity is required."""


@dataclass
class Pencil:
    """A d-dimensional space of tangent vectors at a basepoint."""

    base: SymPoint
    gens: list  # SymTangent, orthonormalized in __post_init__

    def __post_init__(self):
        gens = list(self.gens)
        ortho: list[SymTangent] = []
        for g in gens:
            m = g.mat.copy()
            for u in ortho:
                m -= inner(SymTangent(self.base, m), u) * u.mat
            t = SymTangent(self.base, m)
            nrm = tangent_norm(t)
            if nrm < 1e-10:
                raise ValueError("pencil generators are linearly dependent")
            ortho.append(SymTangent(self.base, m / nrm))
        self.gens = ortho

    @property
    def dim(self) -> int:
        return len(self.gens)

    @property
    def n(self) -> int:
        return self.base.n

    def element(self, coeffs) -> SymTangent:
        m = sum(c * g.mat for c, g in zip(coeffs, self.gens))
        return SymTangent(self.base, m)


@dataclass
class QuadricPencil:
    """A linear space of quadrics, as a list of symmetric matrices.

    The empty pencil (d = 0) carries an explicit ambient dimension.
    """

    quads: list
    ambient: int | None = None

    def __post_init__(self):
        qs = [np.asarray(q) for q in self.quads]
        if not qs and self.ambient is None:
            raise ValueError("empty pencil needs an explicit ambient dimension")
        if qs:
            flat = np.array([q.flatten() for q in qs])
            if np.linalg.matrix_rank(flat) < len(qs):
                raise ValueError("quadric generators are linearly dependent")
        self.quads = qs

    @property
    def n(self) -> int:
        return self.quads[0].shape[0] if self.quads else int(self.ambient)

    @property
    def dim(self) -> int:
        return len(self.quads)


@dataclass
class SegreSymbol:
    """Characteristic values with multiplicities and Jordan partitions."""

    entries: list  # of (value: complex, multiplicity: int, partition: tuple)

    def __post_init__(self):
        n = sum(m for _, m, _ in self.entries)
        for _, m, p in self.entries:
            if sum(p) != m:
                raise ValueError("partition does not sum to its multiplicity")

    def structure(self) -> list:
        """Partitions sorted canonically, forgetting the values."""
        return sorted(tuple(sorted(p, reverse=True)) for _, _, p in self.entries)


def pencil_irr_sl3() -> Pencil:
    """The irreducible-embedding tangent pencil at the identity (n = 3)."""
    m1 = np.array([[0., 1., 0.], [1., 0., 1.], [0., 1., 0.]])
    m2 = np.array([[2., 0., 0.], [0., 0., 0.], [0., 0., -2.]])
    q0 = SymPoint(np.eye(3))
    return Pencil(q0, [SymTangent(q0, m1), SymTangent(q0, m2)])


def pencil_red_sl3() -> Pencil:
    """The reducible-embedding tangent pencil at the identity (n = 3)."""
    m1 = np.array([[0., 0., 1.], [0., 0., 0.], [1., 0., 0.]])
    m2 = np.array([[1., 0., 0.], [0., 0., 0.], [0., 0., -1.]])
    q0 = SymPoint(np.eye(3))
    return Pencil(q0, [SymTangent(q0, m1), SymTangent(q0, m2)])


# ---------------------------------------------------------------------------
# bases


@dataclass
class ComponentReport:
    points: np.ndarray            # representatives, one per row
    labels: np.ndarray            # component id per point
    mean_residuals: list          # per component
    local_dims: list              # per component (PCA estimate)
    dropped: int = 0

    @property
    def n_components(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0


def _newton_refine(f, jac, x0, max_iter=50, tol=1e-12):
    """Damped Gauss-Newton onto f(x) = 0; returns None on divergence."""
    x = np.asarray(x0, dtype=float).copy()
    for _ in range(max_iter):
        r = f(x)
        if np.max(np.abs(r)) < tol:
            return x
        j = jac(x)
        try:
            step, *_ = np.linalg.lstsq(j, -r, rcond=None)
        except np.linalg.LinAlgError:
            return None
        r2 = np.sum(r * r)
        t = 1.0
        while t > 1e-6:
            xn = x + t * step
            rn = f(xn)
            if np.sum(rn * rn) < r2:
                x = xn
                break
            t *= 0.5
        else:
            return None
    return x if np.max(np.abs(f(x))) < 1e-10 else None


def base_projective(pencil: QuadricPencil, samples: int = 4000, seed: int = 0,
                    residual_tol: float = 1e-10, radius: float = 0.05):
    """Point cloud on the projective base {[v] : v^T M v = 0 for all M}.

    Unit-sphere sampling with Gauss-Newton refinement, canonicalized
    representatives, and a proximity-graph component report.
    """
    n = pencil.n
    rng = np.random.default_rng(seed)
    quads = pencil.quads

    def f(v):
        return np.array([v @ m @ v for m in quads] + [v @ v - 1.0])

    def jac(v):
        rows = [2.0 * (m @ v) for m in quads] + [2.0 * v]
        return np.array(rows)

    pts, dropped = [], 0
    for _ in range(samples):
        v0 = rng.normal(size=n)
        v0 /= np.linalg.norm(v0)
        v = _newton_refine(f, jac, v0)
        if v is None:
            dropped += 1
            continue
        v /= np.linalg.norm(v)
        # canonical representative of the projective class
        k = np.argmax(np.abs(v))
        if v[k] < 0:
            v = -v
        if max((abs(v @ m @ v) for m in quads), default=0.0) < residual_tol:
            pts.append(v)
        else:
            dropped += 1
    pts = np.array(pts) if pts else np.zeros((0, n))
    report = cluster_components(pts, [_proj_residual(quads)], radius=radius,
                                dropped=dropped)
    return pts, report


def _proj_residual(quads):
    def r(v):
        return max((abs(v @ m @ v) for m in quads), default=0.0)
    return r


def base_projective_exact_sl3(pencil: QuadricPencil, tol: float = 1e-9):
    """Exact base decomposition for a 2-pencil of ternary quadrics.

    Splits a real degenerate member into lines and intersects them with the
    other generator.  Returns (isolated points, lines), where a line is given
    by a basis (2, 3) of its plane of representatives.
    """
    if pencil.n != 3 or pencil.dim != 2:
        raise ValueError("exact path requires n = 3, d = 2")
    m1, m2 = pencil.quads
    scale = max(np.abs(m1).max(), np.abs(m2).max()) ** 3
    # real roots of det(c*m1 + s*m2) on the circle
    thetas = np.linspace(0.0, np.pi, 720, endpoint=False)
    vals = np.array([np.linalg.det(np.cos(t) * m1 + np.sin(t) * m2) for t in thetas])
    if np.abs(vals).max() < 1e-10 * scale:
        # every member degenerate: two members suffice to cut out the base
        roots = [0.0, np.pi / 2.0]
    else:
        roots = []
        for i in range(len(thetas)):
            t0, t1 = thetas[i - 1], thetas[i]
            v0, v1 = vals[i - 1], vals[i]
            if abs(v0) < 1e-14 * scale:
                roots.append(t0)
            elif v0 * v1 < 0:
                a_, b_ = (t0, t1) if t0 < t1 else (t0 - np.pi, t1)
                fa = np.linalg.det(np.cos(a_) * m1 + np.sin(a_) * m2)
                for _ in range(80):
                    mid = (a_ + b_) / 2
                    fm = np.linalg.det(np.cos(mid) * m1 + np.sin(mid) * m2)
                    if fa * fm <= 0:
                        b_ = mid
                    else:
                        a_, fa = mid, fm
                roots.append((a_ + b_) / 2)
    points, lines = [], []
    line_normals = []
    seen = []
    for t in roots:
        d = np.cos(t) * m1 + np.sin(t) * m2
        other = -np.sin(t) * m1 + np.cos(t) * m2
        lam, u = np.linalg.eigh(d)
        small = np.abs(lam) < max(tol, 1e-12 * np.abs(lam).max())
        rank = 3 - int(small.sum())
        if rank == 3:
            continue
        if rank == 2:
            # pair of planes q = 0: d = sum lam_i u_i u_i^T with signature (1,1)
            pos = [i for i in range(3) if lam[i] > tol]
            neg = [i for i in range(3) if lam[i] < -tol]
            if len(pos) != 1 or len(neg) != 1:
                continue  # definite rank-2: only the kernel point solves
            p, q_ = u[:, pos[0]] * np.sqrt(lam[pos[0]]), u[:, neg[0]] * np.sqrt(-lam[neg[0]])
            plane_normals = [p + q_, p - q_]  # d(v,v) = <p,v>^2 - <q,v>^2
        else:
            # double plane
            big = np.argmax(np.abs(lam))
            plane_normals = [u[:, big]]
        for nrm_vec in plane_normals:
            # intersect the plane {<nrm, v> = 0} with the conic of `other`
            basis = np.linalg.svd(nrm_vec[None, :])[2][1:]  # 2 x 3, plane basis
            a2 = basis @ other @ basis.T
            # solutions x^T a2 x = 0 on the plane
            aa, bb, cc = a2[0, 0], 2 * a2[0, 1], a2[1, 1]
            if abs(aa) < tol and abs(bb) < tol and abs(cc) < tol:
                # the whole line is in the base (dedupe by plane normal)
                nn = nrm_vec / np.linalg.norm(nrm_vec)
                if not any(abs(nn @ m_) > 1 - 1e-9 for m_ in line_normals):
                    line_normals.append(nn)
                    lines.append(basis)
                continue
            disc = bb * bb - 4 * aa * cc
            sols = []
            if abs(aa) < tol:
                sols.append(np.array([1.0, 0.0]))
                if abs(bb) > tol:
                    sols.append(np.array([-cc / bb, 1.0]))
            elif disc >= -tol:
                disc = max(disc, 0.0)
                for s in (+1, -1):
                    sols.append(np.array([(-bb + s * np.sqrt(disc)) / (2 * aa), 1.0]))
            for s in sols:
                v = s @ basis
                v /= np.linalg.norm(v)
                if max(abs(v @ m1 @ v), abs(v @ m2 @ v)) < 1e-8:
                    k = np.argmax(np.abs(v))
                    if v[k] < 0:
                        v = -v
                    if not any(np.linalg.norm(v - w) < 1e-6 for w in seen):
                        seen.append(v)
                        points.append(v)
    # points lying on a stored line are not isolated
    isolated = []
    for v in points:
        on_line = any(np.linalg.norm(v - b.T @ np.linalg.lstsq(b.T, v, rcond=None)[0]) < 1e-8
                      for b in lines)
        if not on_line:
            isolated.append(v)
    return isolated, lines


def base_flag_sl3(pencil: Pencil, samples: int = 2500, seed: int = 0,
                  residual_tol: float = 1e-10, radius: float = 0.05):
    """Cloud on the full-flag base of a 2-pencil at the identity (n = 3).

    Flags (l, H) = ([x], [y]^perp) with |x| = |y| = 1, x.y = 0; the base
    equations are x^T M x = y^T M y for both generators.  Returns the refined
    (x, y) pairs stacked as rows (x | y) plus a component report.
    """
    if pencil.n != 3 or pencil.dim != 2:
        raise ValueError("base_flag_sl3 requires n = 3, d = 2")
    rng = np.random.default_rng(seed)
    quads = [g.mat for g in pencil.gens]

    def f(z):
        x, y = z[:3], z[3:]
        return np.array([
            x @ quads[0] @ x - y @ quads[0] @ y,
            x @ quads[1] @ x - y @ quads[1] @ y,
            x @ y,
            x @ x - 1.0,
            y @ y - 1.0,
        ])

    def jac(z):
        x, y = z[:3], z[3:]
        return np.array([
            np.concatenate([2 * quads[0] @ x, -2 * quads[0] @ y]),
            np.concatenate([2 * quads[1] @ x, -2 * quads[1] @ y]),
            np.concatenate([y, x]),
            np.concatenate([2 * x, np.zeros(3)]),
            np.concatenate([np.zeros(3), 2 * y]),
        ])

    pts, dropped = [], 0
    for _ in range(samples):
        x0 = rng.normal(size=3)
        x0 /= np.linalg.norm(x0)
        y0 = rng.normal(size=3)
        y0 -= (y0 @ x0) * x0
        y0 /= np.linalg.norm(y0)
        z = _newton_refine(f, jac, np.concatenate([x0, y0]))
        if z is None:
            dropped += 1
            continue
        x, y = z[:3], z[3:]
        if max(abs(v) for v in f(z)[:2]) >= residual_tol:
            dropped += 1
            continue
        pts.append(_canonical_flag_pair(x, y))
    pts = np.array(pts) if pts else np.zeros((0, 6))

    def resid(z):
        return float(np.max(np.abs(f(z)[:2])))

    report = cluster_components(pts, [resid], radius=radius, dropped=dropped,
                                metric=_flag_pair_distance)
    return pts, report


def _canonical_flag_pair(x, y):
    x = x / np.linalg.norm(x)
    y = y / np.linalg.norm(y)
    kx = np.argmax(np.abs(x))
    if x[kx] < 0:
        x = -x
    ky = np.argmax(np.abs(y))
    if y[ky] < 0:
        y = -y
    return np.concatenate([x, y])


def _flag_pair_distance(a, b):
    """Sign-invariant distance between (x|y) flag representatives."""
    xa, ya = a[:3], a[3:]
    xb, yb = b[:3], b[3:]
    dx = np.sqrt(max(0.0, 2.0 - 2.0 * abs(xa @ xb)))
    dy = np.sqrt(max(0.0, 2.0 - 2.0 * abs(ya @ yb)))
    return max(dx, dy)


def cluster_components(points: np.ndarray, residual_fns, radius: float = 0.05,
                       dropped: int = 0, metric=None) -> ComponentReport:
    """Union-find clustering on the radius proximity graph.

    All pairs within the cutoff are linked (a k-nearest cap would fragment
    nonuniformly sampled curves).
    """
    m = len(points)
    if m == 0:
        return ComponentReport(points, np.zeros(0, dtype=int), [], [], dropped)
    if metric is None:
        d2 = np.sum((points[:, None, :] - points[None, :, :]) ** 2, axis=2)
        dist = np.sqrt(np.maximum(d2, 0.0))
    else:
        dist = np.zeros((m, m))
        for i in range(m):
            for j in range(i + 1, m):
                dist[i, j] = dist[j, i] = metric(points[i], points[j])
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    links_i, links_j = np.nonzero(dist <= radius)
    for i, j in zip(links_i, links_j):
        if i < j:
            parent[find(int(i))] = find(int(j))
    labels = np.zeros(m, dtype=int)
    roots = {}
    for i in range(m):
        r = find(i)
        labels[i] = roots.setdefault(r, len(roots))
    mean_res, local_dims = [], []
    for c in range(len(roots)):
        mask = labels == c
        cluster = points[mask]
        cluster_dist = dist[np.ix_(mask, mask)]
        if residual_fns:
            res = [max(f(p) for f in residual_fns) for p in cluster]
            mean_res.append(float(np.mean(res)))
        else:
            mean_res.append(0.0)
        local_dims.append(_local_dim(cluster, cluster_dist))
    return ComponentReport(points, labels, mean_res, local_dims, dropped)


def _local_dim(cluster: np.ndarray, dist: np.ndarray, neighbors: int = 12,
               rel_tol: float = 0.2) -> int:
    """PCA dimension of small neighborhoods, median over a few anchors."""
    m = len(cluster)
    if m < neighbors + 1:
        return 0
    dims = []
    for anchor in list(range(0, m, max(1, m // 5)))[:5]:
        idx = np.argsort(dist[anchor])[: neighbors + 1]
        nb = cluster[idx]
        centered = nb - nb.mean(axis=0)
        sv = np.linalg.svd(centered, compute_uv=False)
        if sv[0] < 1e-9:
            dims.append(0)
        else:
            dims.append(int(np.sum(sv > rel_tol * sv[0])))
    return int(np.median(dims))


# ---------------------------------------------------------------------------
# singularity, submersion rank, regularity


def is_singular_base_point(pencil: Pencil, a: IdealPoint, tol: float = 1e-8) -> bool:
    """Whether some pencil element commutes with the direction vector of a."""
    va = direction_vector(a, pencil.base).mat
    rows = np.array([(g.mat @ va - va @ g.mat).flatten() for g in pencil.gens])
    sv = np.linalg.svd(rows, compute_uv=False)
    return bool(sv[-1] < tol)


def submersion_rank(pencil: Pencil, a: IdealPoint, tol: float = 1e-8) -> int:
    """Numerical rank of the differential of a -> <v_{a,x}, .>|_P along K_x."""
    x = pencil.base
    n = x.n
    va = direction_vector(a, x).mat
    c = np.linalg.cholesky(x.gram)
    # basis of k_x: antisymmetric matrices transported to x
    rows = []
    for i in range(n):
        for j in range(i + 1, n):
            k0 = np.zeros((n, n))
            k0[i, j], k0[j, i] = 1.0, -1.0
            k = np.linalg.inv(c.T) @ k0 @ c.T
            dv = k @ va - va @ k
            rows.append([inner(SymTangent(x, dv), g) for g in pencil.gens])
    sv = np.linalg.svd(np.array(rows), compute_uv=False)
    return int(np.sum(sv > tol * max(1.0, sv[0])))


def certify_tau_regular(pencil: Pencil, tau: ChamberVector,
                        grid_density: int = 2000):
    """Certified tau-regularity of a 2-pencil by a Lipschitz grid sweep.

    Sweeps the unit circle of the pencil; the margin min_w |<w.tau, Cartan(v)>|
    varies at most by the arc step (eigenvalues are 1-Lipschitz), so a grid
    minimum above half the step certifies positivity.  Returns
    (verdict, margin, witness) with verdict in {True, False, None} (None =
    inconclusive) and witness the offending circle angle if not certified.
    """
    if pencil.dim != 2:
        raise ValueError("certification requires d = 2")
    sys = tau.sys
    images = weyl_images(sys, tau.array)
    thetas = np.linspace(0.0, np.pi, grid_density, endpoint=False)
    margins = np.empty(len(thetas))
    for i, t in enumerate(thetas):
        v = pencil.element((np.cos(t), np.sin(t)))
        c = cartan_projection(v).array
        margins[i] = np.min(np.abs(sys.metric_scale * (images @ c)))
    h = np.pi / grid_density   # arc step; |margin(t) - margin(t')| <= |t - t'|
    m = float(margins.min())
    k = int(margins.argmin())
    if m - h / 2.0 > 0:
        return True, m - h / 2.0, None

    # refine around the minimizing grid point to exhibit a wall crossing
    def margin_at(t):
        c = cartan_projection(pencil.element((np.cos(t), np.sin(t)))).array
        return float(np.min(np.abs(sys.metric_scale * (images @ c))))

    t = float(thetas[k])
    lo, hi = t - h, t + h
    for _ in range(40):
        fine = np.linspace(lo, hi, 17)
        vals = [margin_at(s) for s in fine]
        j = int(np.argmin(vals))
        lo, hi = fine[max(j - 1, 0)], fine[min(j + 1, len(fine) - 1)]
        if vals[j] < 1e-9:
            break
    t_star = (lo + hi) / 2.0
    resid = margin_at(t_star)
    if resid < 1e-7:
        return False, resid, t_star
    return None, m, t


# ---------------------------------------------------------------------------
# Segre symbols


def _jordan_partition(a: np.ndarray, value: complex, tol: float) -> tuple:
    """Partition of Jordan block sizes of `a` at the given eigenvalue."""
    n = a.shape[0]
    m = a - value * np.eye(n)
    ranks = [n]
    power = np.eye(n, dtype=complex)
    for _ in range(n):
        power = power @ m
        sv = np.linalg.svd(power, compute_uv=False)
        ranks.append(int(np.sum(sv > tol * max(1.0, sv[0] if len(sv) else 1.0))))
        if ranks[-1] == ranks[-2]:
            break
    # number of blocks of size >= k is rank(m^{k-1}) - rank(m^k)
    sizes = []
    for k in range(1, len(ranks)):
        count_ge_k = ranks[k - 1] - ranks[k]
        sizes.append(count_ge_k)
    partition = []
    for k in range(len(sizes), 0, -1):
        count_exact = sizes[k - 1] - (sizes[k] if k < len(sizes) else 0)
        partition.extend([k] * count_exact)
    return tuple(sorted(partition, reverse=True))


def segre_symbol(q1: np.ndarray, q2: np.ndarray, tol: float = 1e-8,
                 require_regular: bool = False) -> SegreSymbol:
    """Segre symbol of the 2-pencil spanned by (q1, q2); q2 must be invertible.

    With ``require_regular`` every real member must be nondegenerate
    (det(a q1 + b q2) != 0 for real (a, b) != 0, checked through the real
    generalized eigenvalues); by default only the basis member q2 is checked,
    which is all the classical symbol needs.
    """
    from scipy.linalg import eig

    q1 = np.asarray(q1)
    q2 = np.asarray(q2)
    n = q1.shape[0]
    if abs(np.linalg.det(q2)) < tol:
        raise PencilRegularityError("q2 is degenerate")
    if require_regular:
        lam = eig(q1, q2, right=False)
        for v in lam:
            if abs(v.imag) < tol * max(1.0, abs(v)):
                member = q1 - v.real * q2
                raise PencilRegularityError(
                    f"degenerate real member q1 - ({v.real:.6g}) q2 (det ~ "
                    f"{np.linalg.det(member):.2e})")
    a = np.linalg.solve(q2, q1)
    vals = np.linalg.eigvals(a)
    # cluster eigenvalues; a size-m Jordan block splits its eigenvalue into a
    # numerical cluster of radius ~ (eps |A|)^(1/m), so the tolerance must be
    # that generous
    cluster_tol = max(1e-5, 4.0 * (1e-15 * max(1.0, np.abs(a).max())) ** (1.0 / n))
    clusters: list[list[complex]] = []
    for v in sorted(vals, key=lambda z: (z.real, z.imag)):
        for c in clusters:
            if abs(v - np.mean(c)) < cluster_tol * max(1.0, abs(v)):
                c.append(v)
                break
        else:
            clusters.append([v])
    entries = []
    for c in clusters:
        value = complex(np.mean(c))
        mult = len(c)
        part = _jordan_partition(a.astype(complex), value, tol)
        if sum(part) != mult:   # rank thresholds disagree with clustering
            part = tuple(sorted(part, reverse=True))
        entries.append((value, mult, part))
    return SegreSymbol(entries)


def mobius_pencil_matrix(a_mat: np.ndarray, abcd) -> np.ndarray:
    """Basis change on the pencil: (q1', q2') = (a q1 + b q2, c q1 + d q2)
    turns A into (aA + b)(cA + d)^-1."""
    a, b, c, d = abcd
    n = a_mat.shape[0]
    return (a * a_mat + b * np.eye(n)) @ np.linalg.inv(c * a_mat + d * np.eye(n))


def fuchsian_pencil(k: int):
    """The quadric pencil of the even irreducible model (size 2k).

    Returns (Q1, Q2): Q1 real symmetric tridiagonal with off-diagonal
    lambda_a = sqrt((a+1)(2k-1-a)); Q2 = i * (antisymmetric tridiagonal with
    the same magnitudes), a Hermitian matrix.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    n = 2 * k
    lam = np.array([np.sqrt((a + 1.0) * (2 * k - 1.0 - a)) for a in range(n - 1)])
    q1 = np.zeros((n, n))
    q2 = np.zeros((n, n), dtype=complex)
    for a in range(n - 1):
        q1[a, a + 1] = q1[a + 1, a] = lam[a]
        q2[a, a + 1] = -1j * lam[a]
        q2[a + 1, a] = 1j * lam[a]
    return q1, q2


def fuchsian_unipotent(k: int) -> np.ndarray:
    """The upper-triangular all-ones matrix T with (T - I) nilpotent of order k."""
    return np.triu(np.ones((k, k)))
