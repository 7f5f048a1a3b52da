"""Command-line front end: batch computations, reports and CSV/JSON artifacts.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 inconclusive (ambiguous-dominated run).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import serialize as ser
from .parallel import pmap

DEFAULT_SEED = 12345


class ConfigError(Exception):
    pass


def _tau_from_selector(sel: str, n: int):
    from .rootsys import ChamberVector, RootSystem, normalized_coroot
    sys_ = RootSystem("A", n - 1)
    if sel in ("delta", "Delta"):
        return normalized_coroot(sys_, list(range(n - 1)))
    if sel in ("tau1", "line"):
        w = np.full(n, -1.0)
        w[0] = n - 1.0
        return ChamberVector.of(sys_, w).unit()
    try:
        coords = [float(x) for x in sel.split(",")]
    except ValueError:
        raise ConfigError(f"bad tau selector {sel!r}")
    if len(coords) != n:
        raise ConfigError(f"tau needs {n} coordinates")
    return ChamberVector.of(sys_, coords).unit()


def _orbit_from_selector(sel: str, sys_):
    from .rootsys import weyl_orbits_of_simple_roots
    orbits = weyl_orbits_of_simple_roots(sys_)
    if sel in ("Delta", "delta"):
        if len(orbits) != 1:
            raise ConfigError("Delta is not a single orbit for this family")
        return orbits[0]
    if sel == "long":
        return orbits[0]
    if sel == "short":
        return orbits[-1]
    try:
        idx = sorted(int(x) for x in sel.split(","))
    except ValueError:
        raise ConfigError(f"bad orbit selector {sel!r}")
    return idx


def _outdir(args) -> Path:
    p = Path(args.out)
    p.mkdir(parents=True, exist_ok=True)
    return p


# ---------------------------------------------------------------------------
# commands


def cmd_roots(args) -> int:
    from .rootsys import (RootSystem, normalized_coroot, simple_roots,
                          weyl_orbits_of_simple_roots, weyl_order)
    sys_ = RootSystem(args.family, args.n)
    orbits = weyl_orbits_of_simple_roots(sys_)
    coroots = [normalized_coroot(sys_, o) for o in orbits]
    print(f"root system {args.family}{args.n}: |W| = {weyl_order(sys_)}, "
          f"{len(orbits)} Weyl orbit(s) of simple roots")
    for o, t in zip(orbits, coroots):
        names = ",".join(f"a{i+1}" for i in o)
        print(f"  orbit {{{names}}}: tau = ({', '.join(ser.fmt(c) for c in t.coords)})")
    out = _outdir(args)
    ser.dump_json(out / "roots.json", {
        "system": ser.rootsystem_to_json(sys_),
        "orbits": [[int(i) for i in o] for o in orbits],
        "coroots": [ser.chamber_to_json(t) for t in coroots],
        "simple_roots": [[float(v) for v in r] for r in simple_roots(sys_)],
    })
    ser.write_csv(out / "coroots.csv",
                  ["orbit"] + [f"c{i}" for i in range(sys_.ambient_dim)],
                  [[",".join(str(i) for i in o)] + list(t.coords)
                   for o, t in zip(orbits, coroots)])
    return 0


def cmd_c_theta(args) -> int:
    from .immersions import c_theta_certified, compute_c_theta
    from .rootsys import RootSystem
    family = args.family
    rank = args.n - 1 if family == "A" else args.n
    sys_ = RootSystem(family, rank)
    orbit = _orbit_from_selector(args.orbit, sys_)
    c = compute_c_theta(sys_, orbit)
    cc = c_theta_certified(sys_, orbit)
    print(f"c_Theta = {c:.12g}  (certified sufficient-condition constant "
          f"{cc:.12g})")
    out = _outdir(args)
    ser.dump_json(out / "c_theta.json",
                  {"family": family, "n": args.n, "orbit": list(orbit),
                   "c_theta": c, "c_theta_certified": cc})
    return 0


def cmd_busemann(args) -> int:
    from .busemann import busemann_gradient, busemann_value
    from .flags import IdealPoint, random_flag, weights_for_type
    from .symspace import (SymTangent, basepoint, exp_point, geodesic, inner,
                           random_tangent, tangent_norm)
    n = args.n
    rng = np.random.default_rng(args.seed)
    tau = _tau_from_selector(args.tau, n)
    dims = tuple(i + 1 for i in range(n - 1)
                 if tau.array[i] - tau.array[i + 1] > 1e-10)
    cases = []
    if args.cases:
        header, rows = ser.read_csv(args.cases)
        for row in rows:
            vals = [float(v) for v in row[: 3 * n * n]]
            basis = np.array(vals[:n * n]).reshape(n, n)
            og = np.array(vals[n * n: 2 * n * n]).reshape(n, n)
            xg = np.array(vals[2 * n * n: 3 * n * n]).reshape(n, n)
            from .flags import FlagPoint
            from .symspace import SymPoint
            cases.append((IdealPoint(FlagPoint(dims, basis), tau),
                          SymPoint(og), SymPoint(xg)))
    else:
        for _ in range(args.count):
            a = IdealPoint(random_flag(n, dims, rng), tau)
            o = exp_point(random_tangent(basepoint(n), rng, 0.4))
            x = exp_point(random_tangent(basepoint(n), rng, 0.4))
            cases.append((a, o, x))

    def evaluate(case):
        a, o, x = case
        val = busemann_value(a, o, x)
        g = busemann_gradient(a, o, x)
        fd_err = 0.0
        if args.fd_check:
            h = 1e-4
            w = random_tangent(x, np.random.default_rng(args.seed + 1), 1.0)
            w = SymTangent(x, w.mat / tangent_norm(w))
            fd = (busemann_value(a, o, geodesic(x, w, h))
                  - busemann_value(a, o, geodesic(x, w, -h))) / (2 * h)
            fd_err = abs(fd - inner(g, w)) / max(1.0, abs(fd))
        return val, tangent_norm(g), fd_err

    results = pmap(evaluate, cases, args.workers)
    out = _outdir(args)
    rows = []
    for (a, o, x), (val, gn, fd) in zip(cases, results):
        rows.append(list(a.flag.basis.flatten()) + list(o.gram.flatten())
                    + list(x.gram.flatten()) + [val, gn, fd])
    hdr = ([f"basis{i}" for i in range(n * n)] + [f"o{i}" for i in range(n * n)]
           + [f"x{i}" for i in range(n * n)] + ["value", "grad_norm", "fd_rel_err"])
    ser.write_csv(out / "busemann.csv", hdr, rows)
    vals = [r[0] for r in results]
    worst_fd = max(r[2] for r in results)
    print(f"busemann batch: {len(cases)} cases, value range "
          f"[{min(vals):.6g}, {max(vals):.6g}]"
          + (f", worst FD relative error {worst_fd:.2e}" if args.fd_check else ""))
    if args.fd_check and worst_fd > 1e-4:
        print("FD check failed", file=sys.stderr)
        return 3
    return 0


def cmd_finsler_dist(args) -> int:
    from .finsler import FinslerContext, finsler_distance
    from .rootsys import RootSystem
    from .symspace import basepoint, exp_point, random_tangent
    n = args.n
    rng = np.random.default_rng(args.seed)
    ctx = FinslerContext(RootSystem("A", n - 1), _tau_from_selector(args.tau, n))
    rows = []
    for _ in range(args.count):
        x = exp_point(random_tangent(basepoint(n), rng, 0.5))
        y = exp_point(random_tangent(basepoint(n), rng, 0.5))
        d = finsler_distance(ctx, x, y)
        rows.append(list(x.gram.flatten()) + list(y.gram.flatten()) + [d])
    out = _outdir(args)
    ser.write_csv(out / "finsler.csv",
                  [f"x{i}" for i in range(n * n)] + [f"y{i}" for i in range(n * n)]
                  + ["finsler_distance"], rows)
    print(f"finsler-dist: {args.count} pairs, mean distance "
          f"{np.mean([r[-1] for r in rows]):.6g}")
    return 0


def cmd_project(args) -> int:
    from .finsler import FinslerContext, nearest_point_projection
    from .immersions import irr_embedding, totally_geodesic_surface
    from .rootsys import RootSystem
    from .symspace import SymTangent, exp_point, random_tangent
    n = args.n
    rng = np.random.default_rng(args.seed)
    surf = totally_geodesic_surface(irr_embedding(n))
    ctx = FinslerContext(RootSystem("A", n - 1), _tau_from_selector(args.tau, n))
    rows = []
    for _ in range(args.count):
        z0 = complex(rng.normal(), np.exp(rng.normal() * 0.3))
        x0 = surf.point(z0)
        x = exp_point(SymTangent(x0, random_tangent(x0, rng, 0.2).mat))
        try:
            z, val = nearest_point_projection(ctx, surf, x, start=1j)
        except RuntimeError as e:
            print(f"projection failed: {e}", file=sys.stderr)
            return 3
        rows.append([z0.real, z0.imag, z.real, z.imag, val])
    out = _outdir(args)
    ser.write_csv(out / "projection.csv",
                  ["seed_re", "seed_im", "proj_re", "proj_im", "finsler_value"],
                  rows)
    print(f"project: {args.count} points projected onto the irreducible surface")
    return 0


def cmd_pencil_base(args) -> int:
    from .pencils import (QuadricPencil, base_flag_sl3, base_projective,
                          base_projective_exact_sl3, pencil_irr_sl3,
                          pencil_red_sl3)
    pencil = pencil_irr_sl3() if args.preset == "P_irr" else pencil_red_sl3()
    out = _outdir(args)
    if args.tau in ("tau1", "line"):
        quads = QuadricPencil([g.mat for g in pencil.gens])
        pts, lines = base_projective_exact_sl3(quads)
        cloud, report = base_projective(quads, samples=args.samples,
                                        seed=args.seed)
        kinds = [f"point {np.round(p, 6).tolist()}" for p in pts]
        kinds += ["line" for _ in lines]
        print(f"pencil-base {args.preset} (projective): components "
              f"{{{', '.join(kinds)}}}")
        ser.write_csv(out / "pencil_base.csv",
                      ["v0", "v1", "v2", "component"],
                      [list(p) + [int(c)] for p, c in zip(cloud, report.labels)])
        ser.dump_json(out / "pencil_base.json", {
            "preset": args.preset, "tau": args.tau,
            "isolated_points": [[float(v) for v in p] for p in pts],
            "lines": len(lines),
            "components": [
                {"component_id": c, "size": int(np.sum(report.labels == c)),
                 "mean_residual": report.mean_residuals[c],
                 "local_dim": report.local_dims[c]}
                for c in range(report.n_components)],
            "dropped": report.dropped,
        })
    else:
        pts, report = base_flag_sl3(pencil, samples=args.samples, seed=args.seed)
        print(f"pencil-base {args.preset} (full flags): "
              f"{report.n_components} component(s), "
              f"max residual {max(report.mean_residuals):.2e}")
        ser.write_csv(out / "pencil_base.csv",
                      ["x0", "x1", "x2", "y0", "y1", "y2", "component"],
                      [list(p) + [int(c)] for p, c in zip(pts, report.labels)])
        ser.dump_json(out / "pencil_base.json", {
            "preset": args.preset, "tau": args.tau,
            "components": [
                {"component_id": c, "size": int(np.sum(report.labels == c)),
                 "mean_residual": report.mean_residuals[c],
                 "local_dim": report.local_dims[c]}
                for c in range(report.n_components)],
            "dropped": report.dropped,
        })
    return 0


def cmd_segre(args) -> int:
    from .pencils import PencilRegularityError, fuchsian_pencil, segre_symbol
    q1, q2 = fuchsian_pencil(args.k)
    try:
        sym = segre_symbol(q1, q2)
    except PencilRegularityError as e:
        print(f"irregular pencil: {e}", file=sys.stderr)
        return 3
    print(f"segre symbol of the size-{2 * args.k} model pencil:")
    entries = []
    for v, m, p in sym.entries:
        print(f"  value {v:.6g}: multiplicity {m}, partition {list(p)}")
        entries.append({"value_re": float(v.real), "value_im": float(v.imag),
                        "multiplicity": int(m), "partition": [int(x) for x in p]})
    ser.dump_json(_outdir(args) / "segre.json", {"k": args.k, "entries": entries})
    return 0


def cmd_check_ng(args) -> int:
    from .immersions import (irr_embedding, nearly_geodesic_check,
                             totally_geodesic_surface)
    surf = totally_geodesic_surface(irr_embedding(args.n))
    tau = _tau_from_selector(args.tau, args.n)
    report = nearly_geodesic_check(surf, 1j, tau,
                                   tangent_samples=args.tangent_samples,
                                   flags_per_tangent=args.flags_per_tangent,
                                   seed=args.seed)
    verdict = "certified" if report.certified else "NOT certified"
    print(f"nearly-geodesic check (n={args.n}, tau={args.tau}): {verdict}, "
          f"margin {report.margin:.6g}, lambda {report.convexity_scale:.4g}, "
          f"{report.samples} critical samples")
    ser.dump_json(_outdir(args) / "check_ng.json", {
        "n": args.n, "tau": args.tau, "margin": report.margin,
        "certified": bool(report.certified),
        "convexity_scale": report.convexity_scale,
        "samples": report.samples,
    })
    return 0


def cmd_limit_cone(args) -> int:
    from .immersions import (fuchsian_generators, irr_embedding,
                             limit_cone_sample)
    from .rootsys import RootSystem
    tau = _tau_from_selector(args.tau, args.n)
    emb = irr_embedding(args.n)
    if args.z_example:
        class _Diag:
            n = args.n
            def group_map(self, g):
                return g
        gens = [np.diag([4.0, 0.5, 0.5])]
        emb = _Diag()
    else:
        gens = fuchsian_generators(2)
    report = limit_cone_sample(emb, gens, args.max_len, tau,
                               dehn_filter=not args.z_example)
    print(f"limit-cone: {report.word_count} words up to length {args.max_len}")
    print(f"  min wall distance: {report.wall_distances.min():.4f}")
    for j, (b, c, viol) in sorted(report.slopes.items()):
        print(f"  root a{j+1}: slope b = {b:.4f}, c = {c:.4f}, "
              f"violations {100 * viol:.3f}%")
    out = _outdir(args)
    stride = max(1, report.word_count // args.max_rows)
    ser.write_csv(out / "limit_cone.csv",
                  ["length", "wall_distance"]
                  + [f"dir{i}" for i in range(report.directions.shape[1])],
                  [[int(l), float(w)] + [float(v) for v in d]
                   for l, w, d in zip(report.lengths[::stride],
                                      report.wall_distances[::stride],
                                      report.directions[::stride])])
    ser.dump_json(out / "limit_cone.json", {
        "n": args.n, "max_len": args.max_len, "words": int(report.word_count),
        "min_wall_distance": float(report.wall_distances.min()),
        "slopes": {f"a{j+1}": {"b": b, "c": c, "violations": viol}
                   for j, (b, c, viol) in sorted(report.slopes.items())},
    })
    return 0


def cmd_domain_grid(args) -> int:
    from .domain import Verdict, domain_membership
    from .flags import IdealPoint, random_flag
    from .immersions import irr_embedding, totally_geodesic_surface
    from .symspace import basepoint
    n = args.n
    rng = np.random.default_rng(args.seed)
    surf = totally_geodesic_surface(irr_embedding(n))
    tau = _tau_from_selector(args.tau, n)
    dims = tuple(i + 1 for i in range(n - 1)
                 if tau.array[i] - tau.array[i + 1] > 1e-10)
    o = basepoint(n)
    flags = [random_flag(n, dims, rng) for _ in range(args.samples)]

    def classify(flag):
        q = domain_membership(IdealPoint(flag, tau), surf, o)
        detail = q.min_value if q.verdict is Verdict.INSIDE else q.escape_slope
        return q.verdict.value, detail if detail is not None else ""

    results = pmap(classify, flags, args.workers)
    out = _outdir(args)
    ser.write_csv(out / "domain_grid.csv",
                  [f"basis{i}" for i in range(n * n)] + ["classification",
                                                         "detail"],
                  [list(f.basis.flatten()) + [v, d]
                   for f, (v, d) in zip(flags, results)])
    counts = {}
    for v, _ in results:
        counts[v] = counts.get(v, 0) + 1
    print("domain-grid:", ", ".join(f"{k}: {v}" for k, v in sorted(counts.items())))
    if counts.get(Verdict.AMBIGUOUS.value, 0) > args.samples / 2:
        return 4
    return 0


def cmd_fiber(args) -> int:
    from .domain import fiber_vs_pencil_base
    from .immersions import irr_embedding, totally_geodesic_surface
    surf = totally_geodesic_surface(irr_embedding(args.n))
    tau = _tau_from_selector(args.tau, args.n)
    try:
        rep = fiber_vs_pencil_base(surf, tau, 1j, n_seeds=args.seeds,
                                   seed=args.seed)
    except RuntimeError as e:
        print(f"fiber sampling failed: {e}", file=sys.stderr)
        return 3
    print(f"fiber: {len(rep.fiber_pairs)} refined fiber flags, matching "
          f"distance {rep.matching_distance:.2e}, components hit "
          f"{rep.fiber_components_hit}")
    out = _outdir(args)
    ser.dump_json(out / "fiber.json", {
        "n": args.n, "matching_distance": rep.matching_distance,
        "fiber_size": int(len(rep.fiber_pairs)),
        "components_hit": int(rep.fiber_components_hit),
    })
    ser.write_csv(out / "fiber_cloud.csv",
                  ["x0", "x1", "x2", "y0", "y1", "y2"],
                  [list(p) for p in rep.fiber_pairs])
    ser.write_csv(out / "base_cloud.csv",
                  ["x0", "x1", "x2", "y0", "y1", "y2"],
                  [list(p) for p in rep.base_pairs])
    return 0


def cmd_compare_domains(args) -> int:
    from .domain import Verdict, boundary_flags, compare_domains
    from .immersions import fuchsian_generators, irr_embedding, totally_geodesic_surface
    surf = totally_geodesic_surface(irr_embedding(args.n))
    tau = _tau_from_selector(args.tau, args.n)
    tau0 = _tau_from_selector(args.tau0, args.n)
    gens = fuchsian_generators(2)
    boundary = boundary_flags(surf.embedding, gens, word_len=args.word_len)
    records = compare_domains(surf, tau, tau0, boundary, samples=args.samples,
                              band=args.band, seed=args.seed)
    agree = total = ambiguous = 0
    rows = []
    for flag, verdict, member, dmin in records:
        rows.append(list(flag.basis.flatten())
                    + [verdict.value, int(member), dmin])
        if verdict is Verdict.AMBIGUOUS:
            ambiguous += 1
            continue
        if abs(dmin - args.band) < args.band * 0.75:
            continue
        total += 1
        agree += int((verdict is Verdict.INSIDE) == member)
    out = _outdir(args)
    n = args.n
    ser.write_csv(out / "compare_domains.csv",
                  [f"basis{i}" for i in range(n * n)]
                  + ["properness", "thickening_member", "core_distance"], rows)
    frac = agree / total if total else 0.0
    print(f"compare-domains: {total} decisive samples, agreement "
          f"{100 * frac:.2f}%, {ambiguous} ambiguous")
    ser.dump_json(out / "compare_domains.json", {
        "samples": args.samples, "decisive": total, "agreement": frac,
        "ambiguous": ambiguous, "band": args.band,
    })
    if ambiguous > args.samples / 2:
        return 4
    return 0


# ---------------------------------------------------------------------------


def _apply_config_file(args, argv):
    """Config file provides values for flags not given explicitly."""
    if not getattr(args, "config", None):
        return args
    path = Path(args.config)
    if not path.exists():
        raise ConfigError(f"config file {path} not found")
    explicit = set(argv or [])
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"bad config line {line!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ConfigError(f"unknown config key {key!r}")
        if f"--{key.replace('_', '-')}" in explicit:
            continue  # command-line flags win
        cur = getattr(args, attr)
        typ = type(cur) if cur is not None else str
        setattr(args, attr, typ(val) if typ is not bool else val.lower() == "true")
    return args


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="slgeom",
                                description=__doc__.splitlines()[0])
    p.add_argument("--explain", action="store_true",
                   help="print resolved defaults and exit")
    sub = p.add_subparsers(dest="command")

    def common(sp, n_default=3):
        sp.add_argument("--n", type=int, default=n_default)
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--out", default="slgeom-out")
        sp.add_argument("--config", default=None)

    sp = sub.add_parser("roots", help="orbit and coroot tables")
    sp.add_argument("--family", choices="ABCD", required=True)
    sp.add_argument("--n", type=int, required=True, help="rank")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out", default="slgeom-out")
    sp.add_argument("--config", default=None)
    sp.set_defaults(fn=cmd_roots)

    sp = sub.add_parser("c-theta", help="curvature-bound constant")
    sp.add_argument("--family", choices="ABCD", default="A")
    sp.add_argument("--n", type=int, required=True,
                    help="matrix size for family A, rank otherwise")
    sp.add_argument("--orbit", default="Delta")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--out", default="slgeom-out")
    sp.add_argument("--config", default=None)
    sp.set_defaults(fn=cmd_c_theta)

    sp = sub.add_parser("busemann", help="batch values and FD checks")
    common(sp)
    sp.add_argument("--tau", default="delta")
    sp.add_argument("--count", type=int, default=50)
    sp.add_argument("--cases", default=None, help="CSV of serialized cases")
    sp.add_argument("--fd-check", action="store_true")
    sp.set_defaults(fn=cmd_busemann)

    sp = sub.add_parser("finsler-dist", help="Finsler pseudo-distances")
    common(sp)
    sp.add_argument("--tau", default="delta")
    sp.add_argument("--count", type=int, default=20)
    sp.set_defaults(fn=cmd_finsler_dist)

    sp = sub.add_parser("project", help="nearest-point projection")
    common(sp)
    sp.add_argument("--tau", default="delta")
    sp.add_argument("--count", type=int, default=5)
    sp.set_defaults(fn=cmd_project)

    sp = sub.add_parser("pencil-base", help="pencil bases and components")
    common(sp)
    sp.add_argument("--preset", choices=["P_irr", "P_red"], required=True)
    sp.add_argument("--tau", default="tau1")
    sp.add_argument("--samples", type=int, default=1500)
    sp.set_defaults(fn=cmd_pencil_base)

    sp = sub.add_parser("segre", help="Segre symbol of the model pencil")
    common(sp)
    sp.add_argument("--k", type=int, default=2)
    sp.set_defaults(fn=cmd_segre)

    sp = sub.add_parser("check-ng", help="nearly-geodesic criterion report")
    common(sp)
    sp.add_argument("--tau", default="delta")
    sp.add_argument("--tangent-samples", type=int, default=16)
    sp.add_argument("--flags-per-tangent", type=int, default=8)
    sp.set_defaults(fn=cmd_check_ng)

    sp = sub.add_parser("limit-cone", help="Cartan direction diagnostics")
    common(sp)
    sp.add_argument("--tau", default="delta")
    sp.add_argument("--max-len", type=int, default=6)
    sp.add_argument("--max-rows", type=int, default=5000)
    sp.add_argument("--z-example", action="store_true",
                    help="the non-Anosov diagonal Z example")
    sp.set_defaults(fn=cmd_limit_cone)

    sp = sub.add_parser("domain-grid", help="classify flags by properness")
    common(sp)
    sp.add_argument("--tau", default="tau1")
    sp.add_argument("--samples", type=int, default=200)
    sp.set_defaults(fn=cmd_domain_grid)

    sp = sub.add_parser("fiber", help="fiber vs pencil base report")
    common(sp)
    sp.add_argument("--tau", default="delta")
    sp.add_argument("--seeds", type=int, default=40)
    sp.set_defaults(fn=cmd_fiber)

    sp = sub.add_parser("compare-domains", help="properness vs thickenings")
    common(sp)
    sp.add_argument("--tau", default="delta")
    sp.add_argument("--tau0", default="delta")
    sp.add_argument("--word-len", type=int, default=4)
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--band", type=float, default=0.02)
    sp.set_defaults(fn=cmd_compare_domains)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.explain:
        for sp_name in ("roots", "c-theta", "busemann", "finsler-dist",
                        "project", "pencil-base", "segre", "check-ng",
                        "limit-cone", "domain-grid", "fiber", "compare-domains"):
            print(f"{sp_name}: see --help; seed default {DEFAULT_SEED}, "
                  f"workers default 1, out default slgeom-out")
        return 0
    if not getattr(args, "command", None):
        parser.print_help()
        return 2
    try:
        args = _apply_config_file(args, argv if argv is not None else sys.argv[1:])
        return args.fn(args)
    except ConfigError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2
    except (ValueError, RuntimeError, np.linalg.LinAlgError) as e:
        print(f"numerical failure ({args.command}): {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
