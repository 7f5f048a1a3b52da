import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from slgeom.rootsys import chamber_project, RootSystem, iota
from slgeom.symspace import (GroupElement, SymPoint, SymTangent, act, basepoint,
                             cartan_projection, distance, exp_point,
                             generalized_distance, geodesic, inner,
                             push_tangent, random_tangent, tangent_norm)


def rand_group(rng, n, scale=0.5):
    m = np.eye(n) + scale * rng.normal(size=(n, n))
    if np.linalg.det(m) < 0:
        m[:, 0] *= -1
    return GroupElement(m)


def test_act_identity_and_example():
    q = basepoint(2)
    g = GroupElement(np.eye(2))
    assert np.allclose(act(g, q).gram, np.eye(2))
    e = np.exp(1.0)
    g = GroupElement(np.diag([e, 1 / e]))
    assert np.allclose(act(g, q).gram, np.diag([e ** -2, e ** 2]))


@given(st.integers(0, 2 ** 30))
@settings(max_examples=25, deadline=None)
def test_act_is_group_action(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 5))
    x = exp_point(random_tangent(basepoint(n), rng, 0.4))
    g1, g2 = rand_group(rng, n), rand_group(rng, n)
    lhs = act(g1, act(g2, x)).gram
    rhs = act(GroupElement(g1.mat @ g2.mat), x).gram
    assert np.allclose(lhs, rhs, atol=1e-10)


def test_inner_examples():
    q = basepoint(2)
    s = 0.37
    v = SymTangent(q, np.diag([s, -s]))
    assert abs(inner(v, v) - 8 * s ** 2) < 1e-12
    off = SymTangent(q, np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert abs(inner(v, off)) < 1e-12
    # unit tau_Delta for n = 3
    q3 = basepoint(3)
    tau = SymTangent(q3, np.diag([1.0, 0.0, -1.0]) / (2 * np.sqrt(3)))
    assert abs(inner(tau, tau) - 1.0) < 1e-12


def test_inner_requires_same_basepoint():
    rng = np.random.default_rng(0)
    q = basepoint(3)
    x = exp_point(random_tangent(q, rng, 0.5))
    with pytest.raises(ValueError):
        inner(random_tangent(q, rng), random_tangent(x, rng))


def test_geodesic_unit_speed():
    rng = np.random.default_rng(1)
    for n in (2, 3, 4):
        x = exp_point(random_tangent(basepoint(n), rng, 0.4))
        v = random_tangent(x, rng)
        v = SymTangent(x, v.mat / tangent_norm(v))
        assert np.allclose(geodesic(x, v, 0.0).gram, x.gram)
        for t in (0.3, 1.7, -2.2):
            assert abs(distance(x, geodesic(x, v, t)) - abs(t)) < 1e-9


def test_geodesic_one_parameter_law():
    rng = np.random.default_rng(2)
    x = exp_point(random_tangent(basepoint(3), rng, 0.3))
    v = random_tangent(x, rng)
    s, t = 0.6, 0.9
    y = geodesic(x, v, s)
    g = GroupElement(expm(s * v.mat))
    v_trans = push_tangent(g, v)
    lhs = geodesic(y, v_trans, t).gram
    rhs = geodesic(x, v, s + t).gram
    assert np.allclose(lhs, rhs, atol=1e-9)


def test_cartan_projection_examples():
    q = basepoint(3)
    v = SymTangent(q, np.diag([1.0, 0.0, -1.0]))
    assert np.allclose(cartan_projection(v).array, [1, 0, -1])
    assert np.allclose(cartan_projection(SymTangent(q, 3.0 * v.mat)).array,
                       [3, 0, -3])
    # principal tangent of the irreducible embedding
    from slgeom.immersions import irr_embedding
    emb = irr_embedding(3)
    f = SymTangent(q, emb.image_f)
    assert np.allclose(cartan_projection(f).array, [2, 0, -2], atol=1e-12)


def test_cartan_projection_isotropy_invariance():
    rng = np.random.default_rng(3)
    q = basepoint(4)
    v = random_tangent(q, rng)
    k, _ = np.linalg.qr(rng.normal(size=(4, 4)))
    w = SymTangent(q, k @ v.mat @ k.T)
    assert np.allclose(cartan_projection(v).array, cartan_projection(w).array,
                       atol=1e-10)


def test_generalized_distance_identities():
    rng = np.random.default_rng(4)
    n = 3
    sys = RootSystem("A", n - 1)
    x = exp_point(random_tangent(basepoint(n), rng, 0.5))
    y = exp_point(random_tangent(basepoint(n), rng, 0.5))
    assert generalized_distance(x, x).norm() < 1e-9
    # d(y, x) = iota(d(x, y))
    dxy = generalized_distance(x, y)
    dyx = generalized_distance(y, x)
    assert np.allclose(dyx.array, iota(sys, dxy).array, atol=1e-9)
    # sign convention: d(q0, exp(w) q0) = chamber(eigenvalues of w)
    w = random_tangent(basepoint(n), rng)
    target, _ = chamber_project(sys, np.linalg.eigvalsh(w.mat))
    got = generalized_distance(basepoint(n), exp_point(w))
    assert np.allclose(got.array, target.array, atol=1e-9)


def test_generalized_distance_g_invariance():
    rng = np.random.default_rng(5)
    n = 4
    x = exp_point(random_tangent(basepoint(n), rng, 0.4))
    y = exp_point(random_tangent(basepoint(n), rng, 0.4))
    g = rand_group(rng, n, 0.3)
    d1 = generalized_distance(x, y).array
    d2 = generalized_distance(act(g, x), act(g, y)).array
    assert np.allclose(d1, d2, atol=1e-8)


@given(st.integers(0, 2 ** 30))
@settings(max_examples=40, deadline=None)
def test_generalized_distance_lipschitz(seed):
    # |d_a(x, z) - d_a(x, y)| <= d(y, z)
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 5))
    x = exp_point(random_tangent(basepoint(n), rng, 0.6))
    y = exp_point(random_tangent(basepoint(n), rng, 0.6))
    z = exp_point(random_tangent(basepoint(n), rng, 0.6))
    dxz = generalized_distance(x, z).array
    dxy = generalized_distance(x, y).array
    sys = RootSystem("A", n - 1)
    gap = sys.norm(dxz - dxy)
    assert gap <= distance(y, z) + 1e-8


def test_tangent_positivity():
    rng = np.random.default_rng(6)
    for _ in range(20):
        n = int(rng.integers(2, 6))
        x = exp_point(random_tangent(basepoint(n), rng, 0.5))
        v = random_tangent(x, rng)
        if tangent_norm(v) > 1e-9:
            assert inner(v, v) > 0


def test_sympoint_validation():
    with pytest.raises(ValueError):
        SymPoint(np.array([[1.0, 2.0], [0.0, 1.0]]))  # asymmetric
    with pytest.raises(ValueError):
        SymPoint(np.diag([1.0, -1.0]))  # not positive definite
    # determinant renormalization
    p = SymPoint(np.diag([2.0, 2.0]))
    assert abs(np.linalg.det(p.gram) - 1.0) < 1e-12
