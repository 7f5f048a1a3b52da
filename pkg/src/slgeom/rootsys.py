"""Restricted root systems of the classical families, Weyl groups and chamber
combinatorics.

Coordinates: the Cartan subspace is stored in "diagonal entry" coordinates.
For family A (sl(n)) these are the n diagonal entries with zero sum; for
families B/C/D they are the sigma-coordinates (sigma_1, ..., sigma_rank) of
the block-diagonal model.  The inner product is ``metric_scale * sum(u_i v_i)``,
which for family A with ambient n equals the Killing metric 2n*tr.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "RootSystem",
    "ChamberVector",
    "WeylElement",
    "simple_roots",
    "positive_roots",
    "all_roots",
    "weyl_elements",
    "weyl_order",
    "chamber_project",
    "weyl_orbits_of_simple_roots",
    "normalized_coroot",
    "theta_of",
    "is_tau_regular",
    "longest_element",
    "iota",
    "component_roots",
    "root_operator_norm",
    "weyl_images",
    "WallSeedError",
]

MAX_ENUM_RANK = 6


class WallSeedError(ValueError):
    """Raised when a seed for the wall-component search lies on a wall."""


@dataclass(frozen=True)
class RootSystem:
    """A classical reduced root system in diagonal-entry coordinates."""

    family: str
    rank: int

    def __post_init__(self):
        if self.family not in ("A", "B", "C", "D"):
            raise ValueError(f"unknown family {self.family!r}")
        if self.rank < 1:
            raise ValueError("rank must be positive")
        if self.family == "D" and self.rank < 3:
            raise ValueError("family D supported for rank >= 3 (D2 is reducible)")
        if self.rank > MAX_ENUM_RANK:
            raise ValueError(
                f"rank {self.rank} exceeds the enumeration limit {MAX_ENUM_RANK}"
            )

    @property
    def ambient_dim(self) -> int:
        # family A lives on trace-zero vectors of length rank+1
        return self.rank + 1 if self.family == "A" else self.rank

    @property
    def metric_scale(self) -> float:
        # A_{n-1} in sl(n): Killing metric 2n*tr.  For B/C/D in sigma
        # coordinates we use 4n, which normalizes the C-family coroots as in
        # the symplectic model (tau_{alpha_n} = e_1/(2 sqrt n)).
        if self.family == "A":
            return 2.0 * self.ambient_dim
        return 4.0 * self.rank

    def inner(self, u, v) -> float:
        return self.metric_scale * float(np.dot(u, v))

    def norm(self, v) -> float:
        return float(np.sqrt(self.metric_scale * np.dot(v, v)))

    def project(self, v) -> np.ndarray:
        """Project onto the Cartan subspace (removes the trace for family A)."""
        v = np.asarray(v, dtype=float)
        if v.shape != (self.ambient_dim,):
            raise ValueError(f"expected vector of length {self.ambient_dim}")
        if self.family == "A":
            return v - v.mean()
        return v.copy()


@dataclass(frozen=True)
class ChamberVector:
    """A vector of the model Cartan subspace, in diagonal-entry coordinates."""

    sys: RootSystem
    coords: tuple

    @staticmethod
    def of(sys: RootSystem, coords) -> "ChamberVector":
        return ChamberVector(sys, tuple(float(x) for x in sys.project(coords)))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=float)

    def norm(self) -> float:
        return self.sys.norm(self.array)

    def unit(self) -> "ChamberVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return ChamberVector(self.sys, tuple(c / n for c in self.coords))

    def in_chamber(self, tol: float = 1e-10) -> bool:
        v = self.array
        return all(r @ v >= -tol for r in simple_roots(self.sys))


@dataclass(frozen=True)
class WeylElement:
    """An element of the Weyl group, acting on diagonal-entry coordinates."""

    matrix: tuple  # rows as tuples; orthogonal signed-permutation matrix

    @staticmethod
    def of(mat) -> "WeylElement":
        return WeylElement(tuple(tuple(float(x) for x in row) for row in mat))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=float)

    def apply(self, v) -> np.ndarray:
        return self.array @ np.asarray(v, dtype=float)

    def inverse(self) -> "WeylElement":
        return WeylElement.of(self.array.T)

    def compose(self, other: "WeylElement") -> "WeylElement":
        return WeylElement.of(self.array @ other.array)


def simple_roots(sys: RootSystem) -> list[np.ndarray]:
    """Simple roots as coefficient vectors; alpha(v) = row @ v."""
    d = sys.ambient_dim
    rows = []
    for i in range(sys.rank - 1):
        r = np.zeros(d)
        r[i], r[i + 1] = 1.0, -1.0
        rows.append(r)
    last = np.zeros(d)
    if sys.family == "A":
        last[sys.rank - 1], last[sys.rank] = 1.0, -1.0
    elif sys.family == "B":
        last[sys.rank - 1] = 1.0
    elif sys.family == "C":
        last[sys.rank - 1] = 2.0
    else:  # D
        last[sys.rank - 2], last[sys.rank - 1] = 1.0, 1.0
    rows.append(last)
    return rows


def positive_roots(sys: RootSystem) -> list[np.ndarray]:
    d = sys.ambient_dim
    out = []

    def e(i, j=None, si=1.0, sj=-1.0):
        r = np.zeros(d)
        r[i] = si
        if j is not None:
            r[j] = sj
        return r

    if sys.family == "A":
        for i in range(d):
            for j in range(i + 1, d):
                out.append(e(i, j))
        return out
    for i in range(sys.rank):
        for j in range(i + 1, sys.rank):
            out.append(e(i, j, 1.0, -1.0))
            out.append(e(i, j, 1.0, 1.0))
    if sys.family == "B":
        out.extend(e(i) for i in range(sys.rank))
    elif sys.family == "C":
        out.extend(e(i, si=2.0) for i in range(sys.rank))
    return out


def all_roots(sys: RootSystem) -> list[np.ndarray]:
    pos = positive_roots(sys)
    return pos + [-r for r in pos]


@lru_cache(maxsize=None)
def _weyl_matrices(family: str, rank: int) -> np.ndarray:
    """All Weyl elements as a stacked (N, d, d) array of matrices."""
    sys = RootSystem(family, rank)
    d = sys.ambient_dim
    mats = []
    if family == "A":
        for perm in itertools.permutations(range(d)):
            m = np.zeros((d, d))
            m[np.arange(d), list(perm)] = 1.0
            mats.append(m)
    else:
        half = family == "D"
        for perm in itertools.permutations(range(d)):
            for signs in itertools.product((1.0, -1.0), repeat=d):
                if half and np.prod(signs) < 0:
                    continue
                m = np.zeros((d, d))
                m[np.arange(d), list(perm)] = signs
                mats.append(m)
    return np.array(mats)


def weyl_elements(sys: RootSystem) -> list[WeylElement]:
    return [WeylElement.of(m) for m in _weyl_matrices(sys.family, sys.rank)]


def weyl_order(sys: RootSystem) -> int:
    return _weyl_matrices(sys.family, sys.rank).shape[0]


def weyl_images(sys: RootSystem, v) -> np.ndarray:
    """The full orbit W.v as a (|W|, d) array (with repetitions)."""
    v = sys.project(v)
    return _weyl_matrices(sys.family, sys.rank) @ v


def chamber_project(sys: RootSystem, v) -> tuple[ChamberVector, WeylElement]:
    """The unique chamber representative of v and a Weyl element realizing it."""
    v = sys.project(v)
    d = sys.ambient_dim
    m = np.zeros((d, d))
    if sys.family == "A":
        order = np.argsort(-v, kind="stable")
        m[np.arange(d), order] = 1.0
    elif sys.family in ("B", "C"):
        order = np.argsort(-np.abs(v), kind="stable")
        m[np.arange(d), order] = np.where(v[order] < 0, -1.0, 1.0)
    else:  # D: descending absolute values, even number of sign flips
        order = np.argsort(-np.abs(v), kind="stable")
        signs = np.where(v[order] < 0, -1.0, 1.0)
        if np.prod(signs) < 0:
            signs[-1] *= -1.0  # flip the smallest entry back
        m[np.arange(d), order] = signs
    w = WeylElement.of(m)
    return ChamberVector.of(sys, w.apply(v)), w


def _dynkin_single_edges(sys: RootSystem) -> list[tuple[int, int]]:
    """Edges of the Dynkin diagram after removing double/triple edges.

    Two reflections s_a, s_b have order 3 product exactly when the roots make
    a 120-degree angle; only those edges survive.
    """
    edges = []
    roots = simple_roots(sys)
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            a, b = roots[i], roots[j]
            c = np.dot(a, b) / np.sqrt(np.dot(a, a) * np.dot(b, b))
            if abs(c + 0.5) < 1e-9:  # single edge
                edges.append((i, j))
    return edges


def weyl_orbits_of_simple_roots(sys: RootSystem) -> list[list[int]]:
    """Partition of the simple roots into Weyl orbits (indices into simple_roots).

    Connected components of the Dynkin diagram with double/triple edges
    removed; orbits are returned sorted by smallest member.
    """
    k = sys.rank
    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in _dynkin_single_edges(sys):
        parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(k):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=min)


def normalized_coroot(sys: RootSystem, orbit) -> ChamberVector:
    """The unit chamber vector orthogonal, up to Weyl moves, to Ker(alpha) for
    alpha in the given Weyl orbit of simple roots."""
    orbits = weyl_orbits_of_simple_roots(sys)
    orbit = sorted(orbit)
    if orbit not in [sorted(o) for o in orbits]:
        raise ValueError(f"{orbit} is not a Weyl orbit of simple roots of {sys}")
    alpha = simple_roots(sys)[orbit[0]]
    # the metric dual of alpha is parallel to its coefficient vector
    direction = sys.project(alpha)
    tau, _ = chamber_project(sys, direction)
    return tau.unit()


def theta_of(sys: RootSystem, tau, tol: float = 1e-10) -> list[int]:
    """Indices of simple roots positive on tau (the facet type of tau)."""
    v = sys.project(tau.array if isinstance(tau, ChamberVector) else tau)
    return [i for i, r in enumerate(simple_roots(sys)) if r @ v > tol]


def is_tau_regular(sys: RootSystem, v, tau, margin: float = 1e-9):
    """Whether min over W of |<w.tau, v>| exceeds margin * |v|.

    Returns (flag, witness) where witness = (minimizing Weyl element, the
    scaled inner product).
    """
    v = sys.project(v)
    tau_arr = sys.project(tau.array if isinstance(tau, ChamberVector) else tau)
    images = weyl_images(sys, tau_arr)
    vals = sys.metric_scale * (images @ v)
    k = int(np.argmin(np.abs(vals)))
    witness = (WeylElement.of(_weyl_matrices(sys.family, sys.rank)[k]), float(vals[k]))
    nv = sys.norm(v)
    return bool(np.abs(vals[k]) > margin * nv), witness


def longest_element(sys: RootSystem) -> WeylElement:
    """The element w0 with w0 . chamber = -chamber."""
    d = sys.ambient_dim
    if sys.family == "A":
        m = np.fliplr(np.eye(d))  # reversal; descending vectors become ascending
    elif sys.family in ("B", "C"):
        m = -np.eye(d)
    else:  # D: -1 if rank even, else -1 composed with last sign flip
        m = -np.eye(d)
        if sys.rank % 2 == 1:
            m[-1, -1] = 1.0
    return WeylElement.of(m)


def iota(sys: RootSystem, tau: ChamberVector) -> ChamberVector:
    """The chamber involution tau -> -w0 . tau."""
    w0 = longest_element(sys)
    return ChamberVector.of(sys, -w0.apply(tau.array))


def root_operator_norm(sys: RootSystem, root) -> float:
    """max |alpha(v)| over unit v; equals the scaled norm of the metric dual."""
    r = sys.project(np.asarray(root, dtype=float))
    # dual vector h with scale*<h, .> = alpha: h = r / scale
    return float(np.sqrt(np.dot(r, r) / sys.metric_scale))


def _chamber_extreme_rays(sys: RootSystem) -> np.ndarray:
    """Unit generators of the chamber cone (fundamental coweight directions)."""
    roots = np.array(simple_roots(sys))
    d = sys.ambient_dim
    rays = []
    for i in range(sys.rank):
        # solve alpha_j(v) = delta_ij on the Cartan subspace
        a = [roots[j] for j in range(sys.rank)]
        b = [1.0 if j == i else 0.0 for j in range(sys.rank)]
        if sys.family == "A":
            a = a + [np.ones(d)]
            b = b + [0.0]
        v, *_ = np.linalg.lstsq(np.array(a), np.array(b), rcond=None)
        rays.append(v / sys.norm(v))
    return np.array(rays)


def component_roots(sys: RootSystem, tau: ChamberVector, seed,
                    subdivisions: int = 200, wall_tol: float = 1e-9) -> list[int]:
    """Simple roots whose kernel misses the wall component of the seed.

    Flood-fills a barycentric grid on the spherical chamber simplex minus the
    walls (w.tau)^perp and reports the simple roots alpha with
    Ker(alpha) disjoint from the seed's component.  Rank <= 3 only.
    """
    if sys.rank > 3:
        raise ValueError("component_roots supports rank <= 3")
    seed = sys.project(np.asarray(seed, dtype=float))
    images = weyl_images(sys, tau.array)
    if np.min(np.abs(sys.metric_scale * (images @ seed))) <= wall_tol * sys.norm(seed):
        raise WallSeedError("seed lies on a wall of tau")
    rays = _chamber_extreme_rays(sys)
    k = sys.rank

    # barycentric lattice on the (k-1)-simplex
    if k == 1:
        return [0]
    if k == 2:
        grid = [(i, subdivisions - i) for i in range(subdivisions + 1)]
    else:
        grid = [(i, j, subdivisions - i - j)
                for i in range(subdivisions + 1)
                for j in range(subdivisions + 1 - i)]
    coords = np.array(grid, dtype=float) / subdivisions
    pts = coords @ rays
    norms = np.sqrt(sys.metric_scale * np.sum(pts * pts, axis=1))
    pts = pts / norms[:, None]
    # walls are thickened to the grid resolution so the fill cannot hop across
    diam = max(sys.norm(rays[i] - rays[j])
               for i in range(k) for j in range(i + 1, k)) if k > 1 else 1.0
    wall_width = max(wall_tol, 1.5 * diam / subdivisions)
    off_wall = np.min(np.abs(sys.metric_scale * (pts @ images.T)), axis=1) > wall_width

    index = {g: i for i, g in enumerate(grid)}
    # lattice adjacency on the simplex grid
    if k == 2:
        moves = [(1, -1), (-1, 1)]
    else:
        moves = [(1, -1, 0), (-1, 1, 0), (1, 0, -1), (-1, 0, 1), (0, 1, -1), (0, -1, 1)]

    # component of the grid point nearest to the seed
    seed_unit = seed / sys.norm(seed)
    start = int(np.argmin(np.sum((pts - seed_unit) ** 2, axis=1)))
    if not off_wall[start]:
        raise WallSeedError("seed's nearest grid point touches a wall")
    visited = np.zeros(len(grid), dtype=bool)
    stack = [start]
    visited[start] = True
    while stack:
        cur = stack.pop()
        g = grid[cur]
        for mv in moves:
            nb = tuple(g[t] + mv[t] for t in range(k))
            j = index.get(nb)
            if j is not None and off_wall[j] and not visited[j]:
                visited[j] = True
                stack.append(j)

    # Ker(alpha_i) meets the chamber in the facet spanned by the rays j != i,
    # i.e. where the i-th barycentric coordinate vanishes; the component meets
    # the kernel iff it contains such a lattice point.
    comp_coords = coords[visited]
    return [i for i in range(sys.rank) if not np.any(comp_coords[:, i] == 0.0)]
