"""sl2 embeddings, equivariant surfaces, the nearly-geodesic criterion, and
limit-cone diagnostics for surface-group representations.

The irreducible embedding acts on homogeneous polynomials of degree n-1 in the
orthonormal basis e_a = X^a Y^(n-1-a) binom(n-1,a)^(1/2), twisted by the
involution m = [[1,1],[1,-1]]/sqrt2 so that the symmetric generator f maps to
the diagonal matrix with entries 2a-n+1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np
from scipy.linalg import expm

from .rootsys import ChamberVector, RootSystem, is_tau_regular, theta_of, weyl_images
from .symspace import (GroupElement, SymPoint, SymTangent, act, basepoint,
                       cartan_projection, generalized_distance, inner,
                       push_tangent, tangent_norm)
from .flags import FlagPoint, IdealPoint, direction_vector, random_flag, weights_for_type
from .busemann import busemann_hessian

__all__ = [
    "SL2_H", "SL2_F", "SL2_G",
    "Sl2Embedding",
    "SurfaceModel",
    "CriterionReport",
    "irr_embedding",
    "red_embedding",
    "totally_geodesic_surface",
    "compute_c_theta",
    "c_theta_certified",
    "nearly_geodesic_check",
    "sufficient_condition_check",
    "fuchsian_generators",
    "reduced_word_tuples",
    "perturbed_surface",
    "limit_cone_sample",
    "LimitConeReport",
    "mobius_to_point",
    "point_to_mobius",
]

SL2_H = np.array([[1.0, 0.0], [0.0, -1.0]])
SL2_F = np.array([[0.0, 1.0], [1.0, 0.0]])
SL2_G = np.array([[0.0, 1.0], [-1.0, 0.0]])
_M_TWIST = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)


@dataclass
class Sl2Embedding:
    """An sl2 triple in sl(n) with a group-level homomorphism."""

    n: int
    image_h: np.ndarray
    image_f: np.ndarray
    image_g: np.ndarray
    group_map: object  # callable SL(2) matrix -> SL(n) matrix

    def algebra(self, a: np.ndarray) -> np.ndarray:
        """Image of a = x*h + y*f + z*g under the differential."""
        x = a[0, 0]
        y = (a[0, 1] + a[1, 0]) / 2.0
        z = (a[0, 1] - a[1, 0]) / 2.0
        return x * self.image_h + y * self.image_f + z * self.image_g


def _poly_rep_matrix(g: np.ndarray, n: int) -> np.ndarray:
    """Matrix of P -> P o g^T on the weighted monomial basis (a homomorphism)."""
    a_, b_ = g.T[0, 0], g.T[0, 1]
    c_, d_ = g.T[1, 0], g.T[1, 1]
    cb = np.sqrt([float(comb(n - 1, k)) for k in range(n)])
    m = np.zeros((n, n))
    for b in range(n):
        p1 = np.array([comb(b, k) * a_ ** k * b_ ** (b - k) for k in range(b + 1)])
        p2 = np.array([comb(n - 1 - b, k) * c_ ** k * d_ ** (n - 1 - b - k)
                       for k in range(n - b)])
        m[:, b] = cb[b] * np.convolve(p1, p2) / cb
    return m


def _poly_alg_matrix(a: np.ndarray, n: int) -> np.ndarray:
    """Differential of the polynomial representation (exact entries)."""
    # d/dt P o exp(t a)^T: X -> a11 X + a21 Y, Y -> a12 X + a22 Y on gradients
    at = a.T
    cb = np.sqrt([float(comb(n - 1, k)) for k in range(n)])
    m = np.zeros((n, n))
    for b in range(n):
        # P = X^b Y^(n-1-b): dP = b X^(b-1) Y^(n-1-b) (at[0,0] X + at[0,1] Y)
        #                        + (n-1-b) X^b Y^(n-2-b) (at[1,0] X + at[1,1] Y)
        m[b, b] += b * at[0, 0] + (n - 1 - b) * at[1, 1]
        if b >= 1:
            m[b - 1, b] += b * at[0, 1] * cb[b] / cb[b - 1]
        if b + 1 < n:
            m[b + 1, b] += (n - 1 - b) * at[1, 0] * cb[b] / cb[b + 1]
    return m


def irr_embedding(n: int) -> Sl2Embedding:
    """The irreducible sl2 in sl(n): image_f = diag(2a - n + 1)."""
    if n < 2:
        raise ValueError("n must be >= 2")

    def group_map(g):
        return _poly_rep_matrix(_M_TWIST @ g @ _M_TWIST, n)

    return Sl2Embedding(
        n,
        image_h=_poly_alg_matrix(_M_TWIST @ SL2_H @ _M_TWIST, n),
        image_f=_poly_alg_matrix(_M_TWIST @ SL2_F @ _M_TWIST, n),
        image_g=_poly_alg_matrix(_M_TWIST @ SL2_G @ _M_TWIST, n),
        group_map=group_map,
    )


def red_embedding(n: int) -> Sl2Embedding:
    """The reducible sl2: standard 2-blocks on coordinate pairs (i, n-1-i).

    floor(n/2) copies of the standard representation (twisted as in the
    irreducible model so image_f is diagonal descending) plus trivial middle
    coordinates when n is odd.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    k = n // 2
    pairs = [(i, n - 1 - i) for i in range(k)]

    def embed(mat2):
        out = np.eye(n)
        for (i, j) in pairs:
            out[np.ix_([i, j], [i, j])] = mat2
        return out

    def embed_alg(mat2):
        out = np.zeros((n, n))
        for (i, j) in pairs:
            out[np.ix_([i, j], [i, j])] = mat2
        return out

    def group_map(g):
        return embed(_M_TWIST @ g @ _M_TWIST)

    return Sl2Embedding(
        n,
        image_h=embed_alg(_M_TWIST @ SL2_H @ _M_TWIST),
        image_f=embed_alg(_M_TWIST @ SL2_F @ _M_TWIST),
        image_g=embed_alg(_M_TWIST @ SL2_G @ _M_TWIST),
        group_map=group_map,
    )


# ---------------------------------------------------------------------------
# surfaces


def preserved_symmetric_form(emb: Sl2Embedding, positive_at=None) -> np.ndarray:
    """The symmetric bilinear form preserved by the embedded group, if any.

    Solves g^T Q g = Q over a spanning set of group elements; the solution is
    normalized to unit spectral norm and, when ``positive_at`` is given, signed
    so that the form is positive on that vector.  Raises if the invariant form
    is not one-dimensional.
    """
    n = emb.n
    gens = [expm(0.4 * SL2_F), expm(0.3 * SL2_H), expm(0.5 * SL2_G)]
    idx = [(i, j) for i in range(n) for j in range(i, n)]
    rows = []
    for g2 in gens:
        r = emb.group_map(g2)
        m = np.zeros((n * n, len(idx)))
        for k, (i, j) in enumerate(idx):
            e = np.zeros((n, n))
            e[i, j] = e[j, i] = 1.0
            m[:, k] = (r.T @ e @ r - e).flatten()
        rows.append(m)
    c = np.vstack(rows)
    _, sv, vt = np.linalg.svd(c)
    null_dim = int(np.sum(sv < 1e-9 * sv[0]))
    if null_dim != 1:
        raise ValueError(f"invariant form space has dimension {null_dim}")
    q = np.zeros((n, n))
    for k, (i, j) in enumerate(idx):
        q[i, j] = q[j, i] = vt[-1][k]
    q = q / np.abs(np.linalg.eigvalsh(q)).max()
    if positive_at is not None:
        v = np.asarray(positive_at, dtype=float)
        if v @ q @ v < 0:
            q = -q
    return q


def mobius_to_point(z: complex) -> np.ndarray:
    """An SL(2,R) element carrying i to z in the upper half-plane."""
    x, y = z.real, z.imag
    if y <= 0:
        raise ValueError("point must be in the upper half-plane")
    s = np.sqrt(y)
    return np.array([[s, x / s], [0.0, 1.0 / s]])


def point_to_mobius(g: np.ndarray) -> complex:
    """g . i under the Moebius action."""
    num = g[0, 0] * 1j + g[0, 1]
    den = g[1, 0] * 1j + g[1, 1]
    return complex(num / den)


def _hyp_distance(z1: complex, z2: complex) -> float:
    """Curvature -1 distance on the upper half-plane."""
    d = abs(z1 - z2) ** 2 / (2.0 * z1.imag * z2.imag)
    return float(np.arccosh(1.0 + d))


@dataclass
class SurfaceModel:
    """An equivariant surface u: H^2 -> X with frames and second fundamental form.

    The built-in surfaces are orbits of sl2 embeddings; a perturbation field
    ``ii_coeffs`` (3 normal tangents at the basepoint: the values II(E1,E1),
    II(E1,E2), II(E2,E2) transported equivariantly) turns the totally geodesic
    model into a synthetic curved surface for criterion experiments.
    """

    embedding: Sl2Embedding
    ii_coeffs: list | None = None   # [N11, N12, N22] as matrices at q0, or None
    frame_scale: float = field(init=False)

    def __post_init__(self):
        e = self.embedding
        self.frame_scale = float(np.sqrt(2.0 * e.n * np.trace(e.image_h @ e.image_h)))
        # directions spanning du at the basepoint, scaled to unit norm
        self._e1 = e.image_h / self.frame_scale
        self._e2 = e.image_f / self.frame_scale

    @property
    def n(self) -> int:
        return self.embedding.n

    @property
    def totally_geodesic(self) -> bool:
        return self.ii_coeffs is None

    def group_at(self, z: complex) -> np.ndarray:
        return self.embedding.group_map(mobius_to_point(z))

    def point(self, z: complex) -> SymPoint:
        return act(GroupElement(self.group_at(z)), basepoint(self.n))

    def frame(self, z: complex) -> tuple[SymTangent, SymTangent]:
        """Scaled-orthonormal tangent frame of the surface at u(z)."""
        g = self.group_at(z)
        gi = np.linalg.inv(g)
        x = self.point(z)
        return (SymTangent(x, g @ self._e1 @ gi), SymTangent(x, g @ self._e2 @ gi))

    def du(self, z: complex, c: tuple) -> SymTangent:
        e1, e2 = self.frame(z)
        return SymTangent(e1.base, c[0] * e1.mat + c[1] * e2.mat)

    def second_fundamental(self, z: complex, c: tuple) -> SymTangent:
        """II(v, v) for v = c1 E1 + c2 E2 (normal-valued; zero when geodesic)."""
        x = self.point(z)
        if self.ii_coeffs is None:
            return SymTangent(x, np.zeros((self.n, self.n)))
        g = self.group_at(z)
        gi = np.linalg.inv(g)
        n11, n12, n22 = self.ii_coeffs
        mat = c[0] * c[0] * n11 + 2.0 * c[0] * c[1] * n12 + c[1] * c[1] * n22
        return SymTangent(x, g @ mat @ gi)

    def shift(self, z: complex, c: tuple, t: float) -> complex:
        """Surface geodesic: move from z in frame direction c by arclength t.

        Induced-metric arclength; the path is the sl2 one-parameter subgroup
        g_z exp(t (c1 h + c2 f) / frame_scale).
        """
        s = (c[0] * SL2_H + c[1] * SL2_F) * (t / self.frame_scale)
        g = mobius_to_point(z) @ expm(s)
        return point_to_mobius(g)

    def surface_distance(self, z1: complex, z2: complex) -> float:
        """Distance for the induced metric (a scaled hyperbolic metric)."""
        return self.frame_scale / 2.0 * _hyp_distance(z1, z2)

    def geodesic_curve(self, z: complex, c: tuple):
        def gamma(t: float) -> complex:
            return self.shift(z, c, t)
        return gamma


def totally_geodesic_surface(emb: Sl2Embedding) -> SurfaceModel:
    return SurfaceModel(emb, None)


def perturbed_surface(emb: Sl2Embedding, ii_coeffs) -> SurfaceModel:
    """A synthetic surface with prescribed second fundamental form at q0."""
    normals = []
    e1 = emb.image_h
    e2 = emb.image_f
    x0 = basepoint(emb.n)
    tangent_plane = [SymTangent(x0, e1), SymTangent(x0, e2)]
    for m in ii_coeffs:
        t = SymTangent(x0, m)
        # project away the tangential part so II is normal-valued
        mm = m.copy()
        for e in tangent_plane:
            mm -= inner(SymTangent(x0, mm), e) / inner(e, e) * e.mat
        normals.append(mm)
    return SurfaceModel(emb, normals)


# ---------------------------------------------------------------------------
# c_Theta and the nearly-geodesic criterion


def _tau_theta(sys: RootSystem, orbit) -> ChamberVector:
    from .rootsys import normalized_coroot
    return normalized_coroot(sys, orbit)


def compute_c_theta(sys: RootSystem, orbit) -> float:
    """The published curvature-bound constant: 1 / min |beta(tau_Theta)|.

    The minimum runs over roots beta not vanishing on tau_Theta.  For sl(n)
    this gives sqrt(2) when n = 2 and 2 sqrt(n) for n >= 3.
    """
    from .rootsys import all_roots
    tau = _tau_theta(sys, orbit).array
    vals = [abs(r @ tau) for r in all_roots(sys)]
    nonzero = [v for v in vals if v > 1e-12]
    return 1.0 / min(nonzero)


def c_theta_certified(sys: RootSystem, orbit) -> float:
    """The proof-grade constant min |beta(tau_Theta)| / |alpha|^2.

    |alpha| is the operator norm of a root in the orbit; this constant makes
    the sufficient condition imply the nearly-geodesic criterion.
    """
    from .rootsys import all_roots, root_operator_norm, simple_roots
    tau = _tau_theta(sys, orbit).array
    vals = [abs(r @ tau) for r in all_roots(sys)]
    nonzero = [v for v in vals if v > 1e-12]
    alpha = simple_roots(sys)[sorted(orbit)[0]]
    return min(nonzero) / root_operator_norm(sys, alpha) ** 2


@dataclass
class CriterionReport:
    tau: ChamberVector
    margin: float                 # Lipschitz-extrapolated (certification) margin
    raw_margin: float             # infimum over the sampled critical pairs
    lipschitz: float              # empirical sweep Lipschitz constant
    convexity_scale: float        # lambda of the exponential-convexity lemma
    samples: int
    worst_pair: tuple             # (tangent coeffs, flag basis) achieving the margin

    @property
    def certified(self) -> bool:
        return self.margin > 0.0


def _critical_flags_for(v: SymTangent, x: SymPoint, weights: ChamberVector,
                        count: int, rng: np.random.Generator):
    """Ideal points a of the given weight type with <v_{a,x}, v> = 0.

    Starts from Haar-random frames and zeroes the pairing by rotating in a
    random 2-plane of the frame orbit (the pairing is continuous and changes
    sign along such circles).
    """
    n = x.n
    sys = weights.sys
    dims = tuple(i + 1 for i in range(n - 1)
                 if weights.array[i] - weights.array[i + 1] > 1e-10)
    c = np.linalg.cholesky(x.gram)
    found = []
    attempts = 0
    while len(found) < count and attempts < 40 * count:
        attempts += 1
        f0 = random_flag(n, dims, rng)
        # frames adapted to x: columns x-orthonormal
        base = np.linalg.inv(c.T) @ f0.basis

        def pairing(theta, plane):
            rot = _frame_rotation(n, plane, theta)
            b = base @ rot
            a = IdealPoint(FlagPoint(dims, _x_orthonormalize(b, x.gram)), weights)
            return inner(direction_vector(a, x), v), a

        plane = tuple(rng.choice(n, size=2, replace=False))
        v0, a0 = pairing(0.0, plane)
        v1, a1 = pairing(np.pi / 2, plane)
        if v0 == 0.0:
            found.append(a0)
            continue
        if v0 * v1 > 0:
            v1, a1 = pairing(np.pi, plane)
            if v0 * v1 > 0:
                continue
            lo, hi = np.pi / 2, np.pi
            vlo, _ = pairing(lo, plane)
            if v0 * vlo < 0:
                lo, hi = 0.0, np.pi / 2 + 1e-12
        else:
            lo, hi = 0.0, np.pi / 2
        flo, _ = pairing(lo, plane)
        for _ in range(60):
            mid = (lo + hi) / 2
            fm, am = pairing(mid, plane)
            if flo * fm <= 0:
                hi = mid
            else:
                lo, flo = mid, fm
        val, a = pairing((lo + hi) / 2, plane)
        if abs(val) < 1e-9:
            found.append(a)
    return found


def _frame_rotation(n, plane, theta):
    r = np.eye(n)
    i, j = plane
    r[i, i] = r[j, j] = np.cos(theta)
    r[i, j] = -np.sin(theta)
    r[j, i] = np.sin(theta)
    return r


def _x_orthonormalize(b, gram):
    from .flags import gram_schmidt as gs
    # flags only need the subspace data; re-orthonormalize in the plain metric
    q, r = np.linalg.qr(b)
    return q * np.sign(np.diag(r))


def nearly_geodesic_check(surface: SurfaceModel, z: complex, tau: ChamberVector,
                          tangent_samples: int = 24, flags_per_tangent: int = 12,
                          seed: int = 0) -> CriterionReport:
    """Sampled nearly-geodesic margin at a surface point.

    Samples unit tangents v of the surface and ideal points a (of type tau and
    of type iota(tau)) with v_{a,u(z)} orthogonal to v, and records the
    infimum of Hess b_a(v, v) + <II(v,v), v_{a,u(z)}>.  The certified margin
    extrapolates the sampled infimum to the full tangent circle using the
    sweep's empirical Lipschitz constant, so a wall direction between samples
    cannot fake a positive verdict.
    """
    from .rootsys import iota

    rng = np.random.default_rng(seed)
    x = surface.point(z)
    sys = tau.sys
    weight_list = [tau]
    it = iota(sys, tau)
    if np.abs(it.array - tau.array).max() > 1e-10:
        weight_list.append(it.unit())

    worst = None
    total = 0
    ratios = []
    per_tangent = np.full(tangent_samples, np.inf)
    for k in range(tangent_samples):
        theta = np.pi * k / tangent_samples
        cvec = (np.cos(theta), np.sin(theta))
        v = surface.du(z, cvec)
        ii = surface.second_fundamental(z, cvec)
        for w in weight_list:
            for a in _critical_flags_for(v, x, w, flags_per_tangent, rng):
                va = direction_vector(a, x)
                val = busemann_hessian(a, x, v) + inner(ii, va)
                total += 1
                pair2 = inner(va, v) ** 2
                if pair2 > 1e-12:
                    ratios.append(val / pair2)
                if val < per_tangent[k]:
                    per_tangent[k] = val
                    if val == per_tangent.min():
                        worst = (cvec, a.flag.basis.copy())
    if total == 0 or not np.all(np.isfinite(per_tangent)):
        raise RuntimeError("no critical samples found; sampling too coarse")
    raw = float(per_tangent.min())
    h = np.pi / tangent_samples
    diffs = np.abs(np.diff(np.concatenate([per_tangent, per_tangent[:1]])))
    lipschitz = max(float(diffs.max()) / h, 0.5)
    margin = raw - 0.75 * lipschitz * h
    c_est = min(ratios) if ratios else 0.0
    lam = max(1.0 - c_est, 0.0) + 0.1
    return CriterionReport(tau, float(margin), float(raw), float(lipschitz),
                           float(lam), total, worst)


def sufficient_condition_check(surface: SurfaceModel, z: complex, orbit,
                               tangent_samples: int = 64) -> bool:
    """Whether |II(v,v)|_tau < c_Theta alpha(Cartan(du v))^2 holds on a sweep.

    Uses the proof-grade constant, so a True verdict implies the
    nearly-geodesic criterion on the same samples.
    """
    from .finsler import FinslerContext, pseudo_norm
    from .rootsys import simple_roots

    n = surface.n
    sys = RootSystem("A", n - 1)
    tau = _tau_theta(sys, orbit)
    c = c_theta_certified(sys, orbit)
    ctx = FinslerContext(sys, tau)
    roots = [simple_roots(sys)[i] for i in orbit]
    for k in range(tangent_samples):
        theta = np.pi * k / tangent_samples
        cvec = (np.cos(theta), np.sin(theta))
        v = surface.du(z, cvec)
        ii = surface.second_fundamental(z, cvec)
        lhs = pseudo_norm(ctx, cartan_projection(ii).array) if tangent_norm(ii) > 0 \
            else 0.0
        cart = cartan_projection(v).array
        for r in roots:
            if lhs >= c * float(r @ cart) ** 2:
                return False
    return True


# ---------------------------------------------------------------------------
# Fuchsian groups and limit cones


def fuchsian_generators(genus: int = 2) -> list[np.ndarray]:
    """Regular-octagon side-pairing generators of a genus-2 surface group.

    X_k = R(k pi/4) T R(-k pi/4) with T the translation of length
    2 arccosh(1 + sqrt 2) through i; they satisfy the octagon relation
    X0 X1^-1 X2 X3^-1 X0^-1 X1 X2^-1 X3 = identity in PSL(2, R).
    """
    if genus != 2:
        raise ValueError("only genus 2 is built in")
    ell = 2.0 * np.arccosh(1.0 + np.sqrt(2.0))
    t = np.diag([np.exp(ell / 2.0), np.exp(-ell / 2.0)])
    out = []
    for k in range(4):
        th = k * np.pi / 4.0
        r = np.array([[np.cos(th / 2), np.sin(th / 2)],
                      [-np.sin(th / 2), np.cos(th / 2)]])
        out.append(r @ t @ r.T)
    return out


def _relator_letters() -> list[int]:
    # letters 0..3 are generators, 4..7 their inverses
    return [0, 1 + 4, 2, 3 + 4, 0 + 4, 1, 2 + 4, 3]


def _forbidden_suffixes(half: int = 5) -> set[tuple]:
    """Cyclic subwords of the octagon relator (and inverse) longer than half."""
    rel = _relator_letters()
    inv = [(l + 4) % 8 for l in reversed(rel)]
    bad = set()
    for word in (rel, inv):
        doubled = word + word
        for i in range(len(word)):
            bad.add(tuple(doubled[i:i + half]))
    return bad


def _suffix_tables(num_gens: int, dehn_filter: bool):
    """Packed-suffix transition tables for vectorized word extension.

    A word state is its last four letters packed base-(2g+1) with sentinel 2g
    for short words.  Returns (allowed, next_state) of shapes (S, 2g).
    """
    g2 = 2 * num_gens
    base = g2 + 1
    size = base ** 4
    bad = _forbidden_suffixes() if (dehn_filter and num_gens == 4) else set()

    def unpack(s):
        out = []
        for _ in range(4):
            out.append(s % base)
            s //= base
        return out[::-1]   # oldest first

    allowed = np.zeros((size, g2), dtype=bool)
    nxt = np.zeros((size, g2), dtype=np.int32)
    for s in range(size):
        letters = unpack(s)
        last = letters[-1]
        for l in range(g2):
            ok = not (last != g2 and (l + num_gens) % g2 == last)
            if ok and bad and g2 not in letters:
                if tuple(letters) + (l,) in bad:
                    ok = False
            allowed[s, l] = ok
            nxt[s, l] = ((s * base) + l) % size
    return allowed, nxt


def reduced_word_tuples(num_gens: int, length: int) -> list[tuple]:
    """All reduced words of exactly the given length, as letter tuples."""
    g2 = 2 * num_gens
    level = [(l,) for l in range(g2)]
    for _ in range(length - 1):
        level = [w + (l,) for w in level for l in range(g2)
                 if (l + num_gens) % g2 != w[-1]]
    return level


@dataclass
class LimitConeReport:
    directions: np.ndarray          # unit Cartan directions, rows (float32)
    lengths: np.ndarray             # word lengths
    wall_distances: np.ndarray      # angular distance to the nearest tau-wall
    alphas: np.ndarray              # alpha_j(d_a) per word, columns by root
    slopes: dict                    # root index -> (b, c, violation fraction)
    word_count: int = 0


def limit_cone_sample(emb: Sl2Embedding, gens: list[np.ndarray], max_len: int,
                      tau: ChamberVector, dehn_filter: bool = True,
                      chunk: int = 150_000) -> LimitConeReport:
    """Cartan directions of all reduced words up to max_len, with diagnostics.

    Words are reduced in the free group; with ``dehn_filter`` (genus 2 only)
    long cyclic subwords of the octagon relator are pruned so every element
    keeps a representative at its geodesic length.  Reports per-word angular
    distance to the walls (w tau)^perp and, per simple root, a linear fit
    alpha(d_a) ~ b|w| - c (least-squares slope, intercept widened by three
    residual sigmas) with the violation fraction at the fitted line.
    """
    if max_len > 10:
        raise ValueError("word length capped at 10")
    n = emb.n
    sys = tau.sys
    images = weyl_images(sys, tau.array)
    images = images / np.sqrt(np.sum(images * images, axis=1))[:, None]
    from .rootsys import simple_roots
    roots = np.array(simple_roots(sys))

    analytic = isinstance(emb, Sl2Embedding)
    if analytic:
        # the representation factors through SL(2): work with 2x2 word
        # products (well conditioned at any length) and map the singular
        # exponent through the weight spectrum of the embedding
        letters = np.array(list(gens) + [np.linalg.inv(g) for g in gens])
        spectrum = np.sort(np.linalg.eigvalsh((emb.image_f + emb.image_f.T) / 2))[::-1]
    else:
        mats = [emb.group_map(g) for g in gens]
        mats += [np.linalg.inv(m) for m in mats]
        letters = np.array(mats)
    num = len(gens)
    g2 = 2 * num
    allowed, nxt = _suffix_tables(num, dehn_filter)
    base = g2 + 1
    init_state = ((g2 * base + g2) * base + g2) * base + g2  # four sentinels

    out_dirs, out_lens, out_wall, out_alpha = [], [], [], []

    def process(prods: np.ndarray, length: int):
        if analytic:
            # closed-form top singular exponent of 2x2 unimodular matrices:
            # sigma_max^2 = (F + sqrt(F^2 - 4)) / 2 with F the Frobenius square
            fro = np.einsum("pij,pij->p", prods, prods)
            fro = np.maximum(fro, 2.0)
            t = 0.5 * np.log((fro + np.sqrt(fro * fro - 4.0)) / 2.0)
            cart = t[:, None] * spectrum[None, :]
            keep = t > 1e-12
            cart = cart[keep]
        else:
            cart = np.log(np.linalg.svd(prods, compute_uv=False))
            keep = np.sqrt(np.sum(cart * cart, axis=1)) > 1e-12
            cart = cart[keep]
        unit = cart / np.sqrt(np.sum(cart * cart, axis=1))[:, None]
        cosines = np.abs(unit @ images.T)
        wall = np.arcsin(np.clip(cosines.min(axis=1), 0.0, 1.0))
        out_dirs.append(unit.astype(np.float32))
        out_lens.append(np.full(len(unit), length, dtype=np.int16))
        out_wall.append(wall.astype(np.float32))
        out_alpha.append((cart @ roots.T).astype(np.float32))

    # level-by-level extension; the last level is streamed in chunks
    prods = letters.copy()
    states = nxt[init_state, np.arange(g2)]
    process(prods, 1)
    for length in range(2, max_len + 1):
        parents, pstates = prods, states
        new_prods, new_states = [], []
        for lo in range(0, len(parents), chunk):
            p = parents[lo: lo + chunk]
            s = pstates[lo: lo + chunk]
            mask = allowed[s]                       # (m, g2)
            idx_parent, idx_letter = np.nonzero(mask)
            child = np.einsum("pij,pjk->pik", p[idx_parent], letters[idx_letter])
            process(child, length)
            if length < max_len:
                new_prods.append(child)
                new_states.append(nxt[s[idx_parent], idx_letter])
        if length < max_len:
            prods = np.concatenate(new_prods)
            states = np.concatenate(new_states)

    dirs = np.vstack(out_dirs)
    lens = np.concatenate(out_lens).astype(np.float64)
    wall = np.concatenate(out_wall)
    alphas = np.vstack(out_alpha)

    slopes = {}
    design = np.vstack([lens, -np.ones_like(lens)]).T
    for j in range(len(roots)):
        coef, *_ = np.linalg.lstsq(design, alphas[:, j].astype(np.float64),
                                   rcond=None)
        b, c0 = float(coef[0]), float(coef[1])
        resid = alphas[:, j] - (b * lens - c0)
        c = c0 + 3.0 * float(np.std(resid))
        viol = float(np.mean(alphas[:, j] < b * lens - c - 1e-9))
        slopes[j] = (b, c, viol)
    return LimitConeReport(dirs, lens, wall, alphas, slopes, word_count=len(lens))
