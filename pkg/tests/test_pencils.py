import numpy as np
import pytest

from slgeom.flags import FlagPoint, IdealPoint, standard_flag, weights_for_type
from slgeom.pencils import (Pencil, PencilRegularityError, QuadricPencil,
                            base_flag_sl3, base_projective,
                            base_projective_exact_sl3, certify_tau_regular,
                            cluster_components, fuchsian_pencil,
                            fuchsian_unipotent, is_singular_base_point,
                            mobius_pencil_matrix, pencil_irr_sl3,
                            pencil_red_sl3, segre_symbol, submersion_rank)
from slgeom.rootsys import ChamberVector, RootSystem, normalized_coroot
from slgeom.symspace import SymPoint, SymTangent, basepoint

A2 = RootSystem("A", 2)
TAU_D = normalized_coroot(A2, [0, 1])
TAU_1 = ChamberVector.of(A2, [2.0, -1.0, -1.0]).unit()


def quadrics_of(pencil: Pencil) -> QuadricPencil:
    return QuadricPencil([g.mat for g in pencil.gens])


def line_ideal(vec) -> IdealPoint:
    v = np.asarray(vec, dtype=float)
    v = v / np.linalg.norm(v)
    basis = np.linalg.qr(np.column_stack([v, np.eye(3)[:, :2] if abs(v[0]) > 0.5
                                          else np.eye(3)[:, 1:]]))[0]
    if basis[:, 0] @ v < 0:
        basis[:, 0] *= -1
    return IdealPoint(FlagPoint((1,), basis), weights_for_type(3, (1,)))


def test_red_projective_base_single_point():
    pts, lines = base_projective_exact_sl3(quadrics_of(pencil_red_sl3()))
    assert len(lines) == 0
    assert len(pts) == 1
    assert np.allclose(np.abs(pts[0]), [0, 1, 0], atol=1e-8)
    # sampling path agrees: all refined points cluster at [0:1:0]
    cloud, report = base_projective(quadrics_of(pencil_red_sl3()), samples=300)
    assert report.n_components == 1
    assert np.max(np.abs(np.abs(cloud) - np.array([0, 1, 0])[None, :])) < 1e-6


def test_irr_projective_base_point_and_line():
    pts, lines = base_projective_exact_sl3(quadrics_of(pencil_irr_sl3()))
    assert len(lines) == 1
    assert len(pts) == 1
    assert np.allclose(pts[0], np.array([1, 0, 1]) / np.sqrt(2), atol=1e-8)
    # the line is {x1 = -x3}: its plane normal is (1, 0, 1)
    normal = np.cross(lines[0][0], lines[0][1])
    normal /= np.linalg.norm(normal)
    assert np.allclose(np.abs(normal), np.array([1, 0, 1]) / np.sqrt(2), atol=1e-8)


def test_empty_pencil_base_is_everything():
    # d = 0: the sampling path returns the ambient sphere unchanged
    cloud, report = base_projective(QuadricPencil([], ambient=3), samples=100)
    assert len(cloud) == 100


def test_singular_base_points():
    red = pencil_red_sl3()
    assert is_singular_base_point(red, line_ideal([0, 1, 0]))
    irr = pencil_irr_sl3()
    assert not is_singular_base_point(irr, line_ideal([1, 0, 1]))
    # points on the line component are singular
    assert is_singular_base_point(irr, line_ideal([1, 1, -1]))
    assert is_singular_base_point(irr, line_ideal([0, 1, 0]))


def test_submersion_rank():
    irr = pencil_irr_sl3()
    assert submersion_rank(irr, line_ideal([1, 0, 1])) == 2
    assert submersion_rank(irr, line_ideal([1, 1, -1])) < 2
    red = pencil_red_sl3()
    assert submersion_rank(red, line_ideal([0, 1, 0])) < 2
    # d = 1 pencil at a generic base point has rank 1
    q0 = basepoint(3)
    p1 = Pencil(q0, [SymTangent(q0, np.diag([1.0, 0.0, -1.0]))])
    a = line_ideal([1.0, 0.7, 1.0])   # in the base {v1^2 = v3^2}, generic
    assert submersion_rank(p1, a) == 1


def test_flag_base_red_tangency_circle():
    pts, report = base_flag_sl3(pencil_red_sl3(), samples=900, seed=1)
    assert len(pts) > 300
    assert report.n_components == 1
    # defining relations of the tangency family: x1 = y1, x2 = -y2, x3 = y3
    # (up to sign of y), and x1^2 + x3^2 = x2^2
    for row in pts[:100]:
        x, y = row[:3], row[3:]
        s1 = np.max(np.abs([x[0] - y[0], x[1] + y[1], x[2] - y[2]]))
        s2 = np.max(np.abs([x[0] + y[0], x[1] - y[1], x[2] + y[2]]))
        assert min(s1, s2) < 1e-7
        assert abs(x[0] ** 2 + x[2] ** 2 - x[1] ** 2) < 1e-7


def test_flag_base_irr_three_circles():
    pts, report = base_flag_sl3(pencil_irr_sl3(), samples=1500, seed=2)
    assert report.n_components == 3
    assert max(report.mean_residuals) < 1e-6
    # classify each point into one of the three described families; note
    # H0 = span{(1,0,-1),(0,1,0)} has unit normal parallel to l0 = (1,0,1)
    ell0 = np.array([1.0, 0, 1]) / np.sqrt(2)
    fam = {0: 0, 1: 0, 2: 0}
    for row in pts:
        x, y = row[:3], row[3:]
        on_l0 = abs(abs(x @ ell0) - 1.0) < 1e-6          # l = l0
        h_is_h0 = abs(abs(y @ ell0) - 1.0) < 1e-6        # H = H0
        incident = (abs(x @ ell0) < 1e-6) and (abs(y @ ell0) < 1e-6)
        labels = [on_l0, h_is_h0, incident]
        assert sum(labels) == 1, row
        fam[labels.index(True)] += 1
    assert min(fam.values()) > 50


def test_local_dimension_of_circles():
    pts, report = base_flag_sl3(pencil_irr_sl3(), samples=1200, seed=3)
    # curves: local PCA dimension 1 = dim F_tau (3) minus pencil dim (2)
    assert all(d == 1 for d in report.local_dims)


def test_certify_tau_regular_verdicts():
    for pencil in (pencil_irr_sl3(), pencil_red_sl3()):
        verdict, margin, witness = certify_tau_regular(pencil, TAU_D)
        assert verdict is True
        assert margin > 0
        verdict, margin, witness = certify_tau_regular(pencil, TAU_1)
        assert verdict is False
    # a pencil inside the diagonal flat is not tau-regular for any tau
    q0 = basepoint(3)
    flat = Pencil(q0, [SymTangent(q0, np.diag([1.0, -1.0, 0.0])),
                       SymTangent(q0, np.diag([1.0, 1.0, -2.0]))])
    for tau in (TAU_D, TAU_1):
        verdict, *_ = certify_tau_regular(flat, tau)
        assert verdict is False


def test_segre_symbol_diagonalizable():
    sym = segre_symbol(np.diag([1.0, 2.0, 3.0]), np.eye(3))
    assert sorted(v.real for v, _, _ in sym.entries) == [1.0, 2.0, 3.0]
    assert all(p == (1,) for _, _, p in sym.entries)


def test_segre_symbol_fuchsian_pencil():
    for k in (2, 3, 4):
        q1, q2 = fuchsian_pencil(k)
        sym = segre_symbol(q1, q2)
        vals = sorted((round(v.real, 6), round(v.imag, 6)) for v, _, _ in sym.entries)
        assert vals == [(0.0, -1.0), (0.0, 1.0)]
        for _, mult, part in sym.entries:
            assert mult == k
            assert part == (k,)


def test_fuchsian_pencil_lambda_values():
    q1, q2 = fuchsian_pencil(2)
    assert abs(q1[0, 1] - np.sqrt(3)) < 1e-12
    assert abs(q1[1, 2] - 2.0) < 1e-12
    assert abs(q1[2, 3] - np.sqrt(3)) < 1e-12


def test_fuchsian_unipotent_nilpotency():
    for k in range(2, 6):
        t = fuchsian_unipotent(k)
        nil = t - np.eye(k)
        power = np.linalg.matrix_power(nil, k - 1)
        assert np.abs(power).max() > 0
        assert np.abs(np.linalg.matrix_power(nil, k)).max() == 0


def test_fuchsian_pencil_rotation_invariant_determinant():
    for k in (2, 3):
        q1, q2 = fuchsian_pencil(k)
        dets = [np.linalg.det(np.cos(t) * q1 + np.sin(t) * q2)
                for t in np.linspace(0, np.pi, 17)]
        assert np.max(np.abs(np.diff([d.real for d in dets]))) < 1e-6 * max(
            1.0, abs(dets[0]))
        assert np.max(np.abs([d.imag for d in dets])) < 1e-8 * max(1.0, abs(dets[0]))


def test_segre_mobius_invariance():
    rng = np.random.default_rng(5)
    q1, q2 = fuchsian_pencil(2)
    a0 = np.linalg.solve(q2, q1)
    for _ in range(20):
        a, b, c, d = rng.normal(size=4)
        if abs(a * d - b * c) < 0.1:
            continue
        q1p = a * q1 + b * q2
        q2p = c * q1 + d * q2
        if abs(np.linalg.det(q2p)) < 1e-6:
            continue
        bmat = np.linalg.solve(q2p, q1p)
        pred = mobius_pencil_matrix(a0, (a, b, c, d))
        assert np.allclose(bmat, pred, atol=1e-8)
        # Jordan structure is preserved up to the Moebius map on values
        s0 = segre_symbol(q1, q2)
        s1 = segre_symbol(q1p, q2p)
        assert s0.structure() == s1.structure()


def test_segre_congruence_invariance():
    rng = np.random.default_rng(6)
    q1, q2 = fuchsian_pencil(2)
    g = np.eye(4) + 0.3 * rng.normal(size=(4, 4))
    s0 = segre_symbol(q1, q2)
    s1 = segre_symbol(g.T @ q1 @ g, g.T @ q2 @ g)
    assert s0.structure() == s1.structure()
    v0 = sorted((round(v.real, 8), round(v.imag, 8)) for v, _, _ in s0.entries)
    v1 = sorted((round(v.real, 8), round(v.imag, 8)) for v, _, _ in s1.entries)
    assert v0 == v1


def test_segre_irregular_pencil_raises():
    # degenerate q2 is always an error
    with pytest.raises(PencilRegularityError):
        segre_symbol(np.eye(3), np.diag([1.0, 1.0, 0.0]))
    # under the strict check, a degenerate real member is named
    qa = np.diag([1.0, 2.0, 3.0])
    with pytest.raises(PencilRegularityError, match="degenerate real member"):
        segre_symbol(qa, np.eye(3), require_regular=True)  # qa - 2 I degenerate
    # the Fuchsian pencil passes the strict check (all members nondegenerate)
    q1, q2 = fuchsian_pencil(2)
    segre_symbol(q1, q2, require_regular=True)


def test_cluster_components_empty():
    report = cluster_components(np.zeros((0, 3)), [])
    assert report.n_components == 0
