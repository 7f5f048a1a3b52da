"""Acceptance suite: one test per criterion, each printing a verdict line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines inline.  Tolerances are pinned here and nowhere else.
"""

import numpy as np
import pytest
from scipy.linalg import expm

from slgeom.busemann import (busemann_gradient, busemann_hessian,
                             busemann_value, projective_log_coefficient)
from slgeom.domain import (Verdict, boundary_flag_bases, compare_domains,
                           domain_membership, fiber_vs_pencil_base,
                           thickening_domain_membership)
from slgeom.finsler import (FinslerContext, busemann_sup_sampled,
                            finsler_distance, pseudo_norm)
from slgeom.flags import (FlagPoint, IdealPoint, direction_vector, random_flag,
                          standard_flag, thickening_membership,
                          tits_angle_flat, tits_angle_numeric, weights_for_type)
from slgeom.immersions import (Sl2Embedding, c_theta_certified, compute_c_theta,
                               fuchsian_generators, irr_embedding,
                               limit_cone_sample, nearly_geodesic_check,
                               perturbed_surface, preserved_symmetric_form,
                               red_embedding, sufficient_condition_check,
                               totally_geodesic_surface)
from slgeom.pencils import (Pencil, base_flag_sl3, base_projective_exact_sl3,
                            QuadricPencil, certify_tau_regular, fuchsian_pencil,
                            fuchsian_unipotent, mobius_pencil_matrix,
                            pencil_irr_sl3, pencil_red_sl3, segre_symbol)
from slgeom.rootsys import (ChamberVector, RootSystem, iota, is_tau_regular,
                            normalized_coroot)
from slgeom.symspace import (GroupElement, SymPoint, SymTangent, act, basepoint,
                             distance, exp_point, generalized_distance,
                             geodesic, inner, random_tangent, tangent_norm)

A2 = RootSystem("A", 2)
TAU_D = normalized_coroot(A2, [0, 1])
TAU_1 = ChamberVector.of(A2, [2.0, -1.0, -1.0]).unit()


def report(num, ok, text):
    print(f"[criterion {num:>2}] {'PASS' if ok else 'FAIL'}: {text}")
    assert ok, f"criterion {num}: {text}"


def full_weights(n):
    return ChamberVector.of(RootSystem("A", n - 1),
                            np.arange(n, 0, -1, dtype=float)).unit()


def rand_point(rng, n, scale=0.4):
    return exp_point(random_tangent(basepoint(n), rng, scale))


def rand_ideal(rng, n, dims=None, weights=None):
    if dims is None:
        dims = tuple(range(1, n))
        weights = weights or full_weights(n)
    elif weights is None:
        weights = weights_for_type(n, dims)
    return IdealPoint(random_flag(n, dims, rng), weights)


# ---------------------------------------------------------------------------


def test_criterion_01_c_theta_constants():
    errs = []
    for n in range(3, 7):
        sys_ = RootSystem("A", n - 1)
        errs.append(abs(compute_c_theta(sys_, list(range(n - 1))) - 2 * np.sqrt(n)))
    errs.append(abs(compute_c_theta(RootSystem("A", 1), [0]) - np.sqrt(2)))
    report(1, max(errs) < 1e-12,
           f"c_Theta = 2 sqrt(n) for n=3..6 and sqrt(2) for n=2 "
           f"(worst error {max(errs):.2e})")


def test_criterion_02_busemann_projective_closed_form():
    rng = np.random.default_rng(2026)
    worst = 0.0
    for n in (2, 3, 4, 5):
        coeff = projective_log_coefficient(n)
        for _ in range(25):
            o, x = rand_point(rng, n), rand_point(rng, n)
            vec = rng.normal(size=n)
            vec /= np.sqrt(o.value(vec, vec))
            basis = np.linalg.qr(
                np.column_stack([vec, rng.normal(size=(n, n - 1))]))[0]
            if basis[:, 0] @ vec < 0:
                basis[:, 0] *= -1
            a = IdealPoint(FlagPoint((1,), basis), weights_for_type(n, (1,)))
            lhs = busemann_value(a, o, x)
            worst = max(worst, abs(lhs - coeff * np.log(x.value(vec, vec))))
    report(2, worst < 1e-9,
           "QR-path value matches the projective closed form "
           f"c(n) log q_x(v,v) with c(n) = n/sqrt(2(n-1)) on 100 cases "
           f"(worst {worst:.2e}; the printed sqrt((n-1)/n) constant is a "
           "source defect, see the ledger and the xfail companion)")


@pytest.mark.xfail(strict=True,
                   reason="the published closed-form constant sqrt((n-1)/n) is "
                          "inconsistent with the pinned metric normalization "
                          "2n tr; the true coefficient is n/sqrt(2(n-1)) "
                          "(verified against the limit definition)")
def test_criterion_02_literal_published_constant():
    rng = np.random.default_rng(2026)
    n = 3
    o, x = rand_point(rng, n), rand_point(rng, n)
    vec = rng.normal(size=n)
    vec /= np.sqrt(o.value(vec, vec))
    basis = np.linalg.qr(np.column_stack([vec, rng.normal(size=(n, 2))]))[0]
    if basis[:, 0] @ vec < 0:
        basis[:, 0] *= -1
    a = IdealPoint(FlagPoint((1,), basis), weights_for_type(n, (1,)))
    lhs = busemann_value(a, o, x)
    rhs = np.sqrt((n - 1) / n) * np.log(x.value(vec, vec))
    assert abs(lhs - rhs) < 1e-9


def test_criterion_03_derivative_oracles():
    rng = np.random.default_rng(3)
    n = 3
    worst_g = worst_h = 0.0
    for _ in range(100):
        a = rand_ideal(rng, n)
        o, x = rand_point(rng, n), rand_point(rng, n)
        w = random_tangent(x, rng)
        w = SymTangent(x, w.mat / tangent_norm(w))
        h = 1e-4
        fd = (busemann_value(a, o, geodesic(x, w, h))
              - busemann_value(a, o, geodesic(x, w, -h))) / (2 * h)
        got = inner(busemann_gradient(a, o, x), w)
        worst_g = max(worst_g, abs(fd - got) / max(1.0, abs(fd)))
        h2 = 1e-3
        fd2 = (busemann_value(a, o, geodesic(x, w, h2))
               - 2 * busemann_value(a, o, x)
               + busemann_value(a, o, geodesic(x, w, -h2))) / h2 ** 2
        hess = busemann_hessian(a, x, w)
        worst_h = max(worst_h, abs(fd2 - hess) / max(1.0, abs(hess)))
    # Hessian kernel at the standard flat: commuting directions
    ker_val = busemann_hessian(
        IdealPoint(standard_flag(3, (1, 2)), TAU_D), basepoint(3),
        SymTangent(basepoint(3), np.diag([1.0, -2.0, 1.0])))
    report(3, worst_g < 1e-5 and worst_h < 1e-4 and abs(ker_val) < 1e-8,
           f"gradient FD rel err {worst_g:.2e} (<1e-5), Hessian FD rel err "
           f"{worst_h:.2e} (<1e-4), kernel residual {abs(ker_val):.2e} (<1e-8)")


def test_criterion_04_cocycle_and_equivariance():
    rng = np.random.default_rng(4)
    n = 3
    worst_c = worst_e = 0.0
    for _ in range(100):
        a = rand_ideal(rng, n)
        o, op, x = (rand_point(rng, n) for _ in range(3))
        lhs = busemann_value(a, op, x)
        rhs = busemann_value(a, o, x) + busemann_value(a, op, o)
        worst_c = max(worst_c, abs(lhs - rhs))
        gm = np.eye(n) + 0.4 * rng.normal(size=(n, n))
        if np.linalg.det(gm) < 0:
            gm[:, 0] *= -1
        g = GroupElement(gm)
        ga = IdealPoint(FlagPoint(a.flag.type, g.mat @ a.flag.basis), a.weights)
        worst_e = max(worst_e, abs(busemann_value(ga, act(g, o), act(g, x))
                                   - busemann_value(a, o, x)))
    report(4, worst_c < 1e-9 and worst_e < 1e-9,
           f"cocycle worst {worst_c:.2e}, equivariance worst {worst_e:.2e} "
           "(both < 1e-9 on 100 random triples)")


def test_criterion_05_finsler_sup_characterization():
    rng = np.random.default_rng(5)
    ctx = FinslerContext(A2, TAU_D)
    x, y = rand_point(rng, 3, 0.5), rand_point(rng, 3, 0.5)
    d = finsler_distance(ctx, x, y)
    best = busemann_sup_sampled(ctx, x, y, samples=10_000, refine_iters=400,
                                seed=5)
    gap = d - best
    report(5, best <= d + 1e-9 and gap < 1e-2,
           f"sampled Busemann sup within {gap:.2e} (< 1e-2) of the Finsler "
           f"distance over 10^4 flags with refinement")


def test_criterion_06_generalized_distance_lipschitz():
    rng = np.random.default_rng(6)
    worst = -np.inf
    for _ in range(1000):
        n = int(rng.integers(2, 5))
        x, y, z = (rand_point(rng, n, 0.6) for _ in range(3))
        sys_ = RootSystem("A", n - 1)
        gap = sys_.norm(generalized_distance(x, z).array
                        - generalized_distance(x, y).array)
        worst = max(worst, gap - distance(y, z))
    report(6, worst <= 1e-8,
           f"|d_a(x,z) - d_a(x,y)| <= d(y,z) with slack {worst:.2e} (<= 1e-8) "
           "on 10^3 random triples")


def test_criterion_07_pencil_bases():
    msgs = []
    ok = True

    red_pts, red_lines = base_projective_exact_sl3(
        QuadricPencil([g.mat for g in pencil_red_sl3().gens]))
    got = (len(red_pts) == 1 and not red_lines
           and np.allclose(np.abs(red_pts[0]), [0, 1, 0], atol=1e-8))
    ok &= got
    msgs.append(f"P_red tau1-base single point [0:1:0] ({got})")

    irr_pts, irr_lines = base_projective_exact_sl3(
        QuadricPencil([g.mat for g in pencil_irr_sl3().gens]))
    normal = np.cross(irr_lines[0][0], irr_lines[0][1]) if irr_lines else None
    got = (len(irr_pts) == 1 and len(irr_lines) == 1
           and np.allclose(irr_pts[0], np.array([1, 0, 1]) / np.sqrt(2), atol=1e-8)
           and np.allclose(np.abs(normal / np.linalg.norm(normal)),
                           np.array([1, 0, 1]) / np.sqrt(2), atol=1e-8))
    ok &= got
    msgs.append(f"P_irr tau1-base point [1:0:1] + line x1=-x3 ({got})")

    pts, rep = base_flag_sl3(pencil_red_sl3(), samples=2000, seed=7)
    got = rep.n_components == 1 and max(rep.mean_residuals) < 1e-6
    ok &= got
    msgs.append(f"P_red tau_Delta-base 1 component ({got})")

    pts, rep = base_flag_sl3(pencil_irr_sl3(), samples=2500, seed=7)
    got = rep.n_components == 3 and max(rep.mean_residuals) < 1e-6
    # verify the three described circle families are exactly the components
    ell0 = np.array([1.0, 0, 1]) / np.sqrt(2)
    fams = np.full(len(pts), -1)
    for i, row in enumerate(pts):
        x, yv = row[:3], row[3:]
        labels = [abs(abs(x @ ell0) - 1.0) < 1e-6,
                  abs(abs(yv @ ell0) - 1.0) < 1e-6,
                  abs(x @ ell0) < 1e-6 and abs(yv @ ell0) < 1e-6]
        fams[i] = labels.index(True) if sum(labels) == 1 else -1
    got &= np.all(fams >= 0)
    for c in range(rep.n_components):
        got &= len(set(fams[rep.labels == c])) == 1
    ok &= got
    msgs.append(f"P_irr tau_Delta-base exactly 3 circle components ({got})")
    report(7, ok, "; ".join(msgs))


def test_criterion_08_regularity_certificates():
    results = {}
    for name, pencil in (("P_irr", pencil_irr_sl3()), ("P_red", pencil_red_sl3())):
        v_d, m_d, _ = certify_tau_regular(pencil, TAU_D)
        v_1, m_1, _ = certify_tau_regular(pencil, TAU_1)
        results[name] = (v_d, m_d, v_1)
    ok = all(v_d is True and m_d > 0 and v_1 is False
             for v_d, m_d, v_1 in results.values())
    flat = Pencil(basepoint(3), [SymTangent(basepoint(3), np.diag([1., -1., 0.])),
                                 SymTangent(basepoint(3), np.diag([1., 1., -2.]))])
    flat_not_regular = all(certify_tau_regular(flat, tau)[0] is False
                           for tau in (TAU_D, TAU_1))
    ok &= flat_not_regular
    margins = {k: v[1] for k, v in results.items()}
    report(8, ok,
           f"tau_Delta-regular with positive margins {margins}, neither "
           f"tau_1-regular; flat pencil never regular ({flat_not_regular})")


def test_criterion_09_segre_fuchsian_and_mobius():
    ok = True
    details = []
    for k in range(2, 6):
        q1, q2 = fuchsian_pencil(k)
        sym = segre_symbol(q1, q2)
        vals = sorted((round(v.real, 8), round(v.imag, 8))
                      for v, _, _ in sym.entries)
        got = (vals == [(0.0, -1.0), (0.0, 1.0)]
               and all(m == k and p == (k,) for _, m, p in sym.entries))
        t = fuchsian_unipotent(k)
        nil = t - np.eye(k)
        got &= (np.abs(np.linalg.matrix_power(nil, k - 1)).max() > 0
                and np.abs(np.linalg.matrix_power(nil, k)).max() == 0)
        ok &= got
        details.append(f"k={k}:{got}")
    rng = np.random.default_rng(9)
    q1, q2 = fuchsian_pencil(2)
    a0 = np.linalg.solve(q2, q1)
    s0 = segre_symbol(q1, q2)
    checked = 0
    while checked < 50:
        a, b, c, d = rng.normal(size=4)
        if abs(a * d - b * c) < 0.1:
            continue
        q2p = c * q1 + d * q2
        if abs(np.linalg.det(q2p)) < 1e-6:
            continue
        q1p = a * q1 + b * q2
        bmat = np.linalg.solve(q2p, q1p)
        pred = mobius_pencil_matrix(a0, (a, b, c, d))
        ok &= np.allclose(bmat, pred, atol=1e-8)
        ok &= segre_symbol(q1p, q2p).structure() == s0.structure()
        checked += 1
    report(9, ok,
           f"model pencil eigenvalues {{i,-i}} with single size-k Jordan "
           f"blocks for k=2..5 ({', '.join(details)}); Moebius basis-change "
           f"law verified on 50 random coefficient quadruples")


def test_criterion_10_embedding_algebra():
    worst = 0.0
    ok = True
    for n in range(2, 9):
        emb = irr_embedding(n)
        f, h, g = emb.image_f, emb.image_h, emb.image_g
        worst = max(worst,
                    np.abs(f @ g - g @ f + 2 * h).max(),
                    np.abs(g @ h - h @ g + 2 * f).max(),
                    np.abs(h @ f - f @ h - 2 * g).max(),
                    np.abs(f - f.T).max(), np.abs(h - h.T).max(),
                    np.abs(g + g.T).max())
        ok &= np.allclose(f, np.diag([2 * a - n + 1 for a in range(n)]),
                          atol=1e-12)
    report(10, ok and worst < 1e-10,
           f"bracket relations and symmetry types hold to {worst:.2e} "
           "(< 1e-10) for n=2..8; image of f is diag(2a-n+1)")


def test_criterion_11_nearly_geodesic_criterion():
    surf = totally_geodesic_surface(irr_embedding(3))
    rep_d = nearly_geodesic_check(surf, 1j, TAU_D, tangent_samples=12,
                                  flags_per_tangent=6, seed=11)
    rep_1 = nearly_geodesic_check(surf, 1j, TAU_1, tangent_samples=24,
                                  flags_per_tangent=8, seed=11)
    ok = rep_d.margin > 0 and rep_1.margin < 1e-3
    rng = np.random.default_rng(11)
    emb = irr_embedding(3)
    implications = checked = 0
    for k in range(200):
        # scales straddle the sufficient bound so both verdicts occur
        mats = []
        for _ in range(3):
            m = rng.normal(size=(3, 3)) * rng.uniform(0.002, 0.03)
            m = (m + m.T) / 2
            m -= np.trace(m) / 3 * np.eye(3)
            mats.append(m)
        s = perturbed_surface(emb, mats)
        if sufficient_condition_check(s, 1j, [0, 1], tangent_samples=32):
            checked += 1
            r = nearly_geodesic_check(s, 1j, TAU_D, tangent_samples=6,
                                      flags_per_tangent=3, seed=k)
            implications += int(r.margin > 0)
    ok &= checked > 20 and implications == checked
    report(11, ok,
           f"totally geodesic: tau_Delta margin {rep_d.margin:.4f} > 0, tau_1 "
           f"margin {rep_1.margin:.2e} (fails); sufficient condition implied "
           f"the criterion on {implications}/{checked} of 200 perturbed "
           "surfaces")


def test_criterion_12_limit_cone():
    emb = irr_embedding(3)
    gens = fuchsian_generators(2)
    rep = limit_cone_sample(emb, gens, 8, TAU_D, dehn_filter=True)
    wall_ok = rep.wall_distances.min() >= 0.05
    slope_ok = all(b > 0 and viol < 0.01
                   for b, c, viol in rep.slopes.values())

    class _Diag:
        n = 3
        def group_map(self, g):
            return g
    zrep = limit_cone_sample(_Diag(), [np.diag([4.0, 0.5, 0.5])], 8, TAU_D,
                             dehn_filter=False)
    per_len = [zrep.wall_distances[zrep.lengths == k].min()
               for k in range(1, 9)]
    z_ok = all(np.diff(per_len) < 1e-12) and per_len[-1] < 0.02
    report(12, wall_ok and slope_ok and z_ok,
           f"{rep.word_count} words (<=8): min wall distance "
           f"{rep.wall_distances.min():.4f} >= 0.05; slopes "
           f"{ {f'a{j+1}': round(b, 3) for j, (b, c, v) in rep.slopes.items()} } "
           f"positive with violations "
           f"{ {f'a{j+1}': f'{100*v:.2f}%' for j, (b, c, v) in rep.slopes.items()} }"
           f" < 1%; diagonal Z example wall distance decreases to "
           f"{per_len[-1]:.4f}")


def test_criterion_13_domain_and_fibration():
    surf = totally_geodesic_surface(irr_embedding(3))
    o = basepoint(3)
    qform = preserved_symmetric_form(surf.embedding, positive_at=[1.0, 0, 1.0])
    rng = np.random.default_rng(13)

    # (a) 2000-point grid in RP^2 against the sign of the invariant form
    agree = total = 0
    for _ in range(2000):
        v = rng.normal(size=3)
        v /= np.linalg.norm(v)
        q = float(v @ qform @ v)
        if abs(q) < 0.02:
            continue
        basis = np.linalg.qr(np.column_stack([v, rng.normal(size=(3, 2))]))[0]
        if basis[:, 0] @ v < 0:
            basis[:, 0] *= -1
        a = IdealPoint(FlagPoint((1,), basis), weights_for_type(3, (1,)))
        res = domain_membership(a, surf, o)
        total += 1
        agree += int((res.verdict is Verdict.INSIDE) == (q > 0))
    grid_ok = agree / total >= 0.99

    # (b) fiber over the basepoint matches the three-circle pencil base
    fib = fiber_vs_pencil_base(surf, TAU_D, 1j, n_seeds=60, seed=13)
    fiber_ok = fib.matching_distance < 1e-3 and fib.fiber_components_hit == 3

    # (c) thickening vs properness classification agreement
    bases = boundary_flag_bases(surf.embedding, fuchsian_generators(2), 6)
    records = compare_domains(surf, TAU_D, TAU_D, bases, samples=2000,
                              band=0.02, seed=13)
    agree2 = total2 = 0
    for flag, verdict, member, dmin in records:
        if verdict is Verdict.AMBIGUOUS or abs(dmin - 0.02) < 0.015:
            continue
        total2 += 1
        agree2 += int((verdict is Verdict.INSIDE) == member)
    cmp_ok = total2 >= 1000 and agree2 / total2 >= 0.99
    report(13, grid_ok and fiber_ok and cmp_ok,
           f"RP2 grid agreement {100 * agree / total:.2f}% of {total} "
           f"(>=99%); fiber matching distance {fib.matching_distance:.2e} "
           f"(<1e-3) over {fib.fiber_components_hit} components; "
           f"thickening-vs-properness agreement {100 * agree2 / total2:.2f}% "
           f"of {total2} (>=99%)")


def test_criterion_14_tits_cross_validation():
    rng = np.random.default_rng(14)
    worst = 0.0
    for n in (3, 4):
        for _ in range(25):
            w = ChamberVector.of(RootSystem("A", n - 1),
                                 np.sort(rng.normal(size=n))[::-1]).unit()
            a = IdealPoint(random_flag(n, tuple(range(1, n)), rng), w)
            b = IdealPoint(random_flag(n, tuple(range(1, n)), rng), w)
            flat = tits_angle_flat(a, b)
            num = tits_angle_numeric(a, b, restarts=8, max_iter=500, seed=14)
            worst = max(worst, abs(flat - num))
    angles_ok = worst < 1e-3

    invariance_ok = True
    for trial in range(20):
        flag = random_flag(3, (1, 2), rng)
        w1 = ChamberVector.of(A2, [2.0 + 0.3 * trial, 0.1, -2.1 - 0.3 * trial]).unit()
        w2 = ChamberVector.of(A2, [1.9, -0.15, -1.75]).unit()
        b1, b2 = IdealPoint(flag, w1), IdealPoint(flag, w2)
        for _ in range(10):
            a = IdealPoint(random_flag(3, (1, 2), rng), TAU_D)
            invariance_ok &= (thickening_membership(a, b1)
                              == thickening_membership(a, b2))
    report(14, angles_ok and invariance_ok,
           f"numeric vs combinatorial Tits angles agree within {worst:.2e} "
           f"(<1e-3) on 50 generic full-flag pairs (n=3,4); thickening "
           f"invariance held on 20 facet pairs ({invariance_ok})")
