"""Acceptance gate: one test per contract criterion, each printing a
PASS/FAIL line with the measured numbers."""

import math
import time

import numpy as np
import pytest

from vartri import kernel, suites
from vartri.curvature import (CirclePacking, HexagonMetric, PolyhedralMetric,
                              hexagon_psi_curvature, k0_curvature, kh_curvature,
                              phi_curvature, psi_curvature)
from vartri.errors import InfeasibleTargetError, SolveError
from vartri.integrals import integrate_power
from vartri.solver import (SolveTarget, curvature_jacobian, feasibility_check,
                           solve_circle_packing, solve_hexagon_metric,
                           total_energy, total_energy_gradient)

H_GRID = (-2.0, -1.0, 0.0, 1.0, 2.0)


def _line(num, name, ok, detail):
    print("criterion %d (%s): %s — %s"
          % (num, name, "PASS" if ok else "FAIL", detail))
    assert ok, "criterion %d failed: %s" % (num, detail)


def _random_tetra_metric(rng, geometry, lo=0.6, hi=1.4):
    """Rejection-sample edge lengths keeping every triangle admissible."""
    from vartri.mesh import build_surface
    s = build_surface(4, [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    while True:
        lengths = {e.key: rng.uniform(lo, hi) for e in s.edges}
        try:
            m = PolyhedralMetric(geometry, lengths)
            for t in range(4):
                l = tuple(m.length(s.edges[s.edge_of_side(t, c)].key)
                          for c in range(3))
                kernel.angles_from_lengths(geometry, l)
            return s, m
        except Exception:
            continue


def test_criterion_1_law_identities():
    t0 = time.perf_counter()
    rep = suites.run_suite("laws", seed=0)
    elapsed = time.perf_counter() - t0
    ok = rep["pass"] and rep["max_residual"] < 1e-12 and elapsed < 5.0
    _line(1, "sine/tangent laws + quadratic identity", ok,
          "max residual %.3g on %d triangles per geometry / %d hexagons, %.2fs"
          % (rep["max_residual"], rep["samples"]["triangles"],
             rep["samples"]["hexagons"], elapsed))


def test_criterion_2_closedness():
    rep = suites.run_suite("closedness", seed=0)
    d = rep["details"]
    worst_fd = max(v for k, v in d.items() if k.startswith("fd_"))
    worst_path = max(v for k, v in d.items() if k.startswith("path_"))
    control = d["negative_control_min"]
    ok = (rep["pass"] and worst_fd < 1e-7 and worst_path < 1e-8
          and control >= 1e-4)
    _line(2, "closedness of the six energy forms", ok,
          "mixed partials %.3g (tol 1e-7), two-path %.3g (tol 1e-8), "
          "negative control %.3g (>= 1e-4)" % (worst_fd, worst_path, control))


def test_criterion_3_convexity_signs():
    rep = suites.run_suite("convexity", seed=0)
    d = rep["details"]
    violations = sum(v for k, v in d.items() if k.startswith("signature_violations_"))
    kernel_dev = max(v for k, v in d.items() if k.startswith("kernel_deviation_")
                     or k.startswith("uniform_kernel_h0_"))
    ok = rep["pass"] and violations == 0 and kernel_dev < 1e-6
    _line(3, "Hessian signatures + flat scaling kernel", ok,
          "%d signature violations over %d samples/family, kernel direction "
          "off by %.3g (tol 1e-6)" % (violations, rep["samples"], kernel_dev))


def test_criterion_4_gradient_matches_fd(tetra, octa, rng):
    worst = 0.0
    for s in (tetra, octa):
        for geometry in (kernel.EUCLIDEAN, kernel.HYPERBOLIC):
            ukind = "power" if geometry is kernel.EUCLIDEAN else "sinh"
            for h in (0.0, 1.0):
                for _ in range(5):
                    r = rng.uniform(0.6, 1.3, s.vertex_count)
                    tgt = SolveTarget("k", h, {"v%d" % v: 3.0
                                               for v in range(s.vertex_count)},
                                      geometry)
                    pk = CirclePacking(geometry, {"v%d" % v: r[v]
                                                  for v in range(s.vertex_count)})
                    g = total_energy_gradient(s, pk, tgt)
                    eps = 1e-5
                    for i in range(s.vertex_count):
                        hi, lo = r.copy(), r.copy()
                        hi[i] += eps
                        lo[i] -= eps
                        du = (integrate_power(ukind, h - 1, 1.0, hi[i])
                              - integrate_power(ukind, h - 1, 1.0, lo[i]))
                        fd = ((total_energy(s, CirclePacking(geometry,
                                  {"v%d" % v: hi[v] for v in range(s.vertex_count)}), tgt)
                               - total_energy(s, CirclePacking(geometry,
                                  {"v%d" % v: lo[v] for v in range(s.vertex_count)}), tgt))
                              / du)
                        worst = max(worst, abs(fd - g[i]) / max(1.0, abs(g[i])))
    ok = worst < 1e-5
    _line(4, "total-energy gradient vs finite differences", ok,
          "max relative deviation %.3g (tol 1e-5) on tetrahedron/octahedron, "
          "both geometries" % worst)


def test_criterion_5_newton_solves(tetra, pants, rng):
    checks = []

    t0 = time.perf_counter()
    res = solve_circle_packing(tetra, kernel.EUCLIDEAN,
                               {"v%d" % v: math.pi for v in range(4)})
    dt = time.perf_counter() - t0
    radii = list(res.values.values())
    checks.append(("flat tetra", res.final_residual < 1e-10
                   and res.iterations < 50 and dt < 1.0
                   and max(radii) - min(radii) < 1e-10,
                   "residual %.2g, %d iters, %.3fs"
                   % (res.final_residual, res.iterations, dt)))

    t0 = time.perf_counter()
    res = solve_circle_packing(tetra, kernel.HYPERBOLIC,
                               {"v%d" % v: 3.6 for v in range(4)})
    dt = time.perf_counter() - t0
    radii = list(res.values.values())
    checks.append(("hyperbolic tetra", res.final_residual < 1e-10
                   and res.iterations < 50 and dt < 1.0
                   and max(radii) - min(radii) < 1e-10,
                   "residual %.2g, %d iters, %.3fs"
                   % (res.final_residual, res.iterations, dt)))

    keys = [e.key for e in pants.surface.edges]
    lengths = {k: rng.uniform(1.2, 2.2) for k in keys}
    target = hexagon_psi_curvature(
        pants, HexagonMetric.from_edge_lengths(pants, lengths), 0.0)
    t0 = time.perf_counter()
    res = solve_hexagon_metric(pants, target)
    dt = time.perf_counter() - t0
    err = max(abs(res.values[k] - lengths[k]) for k in keys)
    checks.append(("hexagon round-trip", err < 1e-6 and dt < 1.0,
                   "recovered within %.2g, %d iters, %.3fs"
                   % (err, res.iterations, dt)))

    ok = all(c[1] for c in checks)
    _line(5, "prescribed-curvature solves", ok,
          "; ".join("%s: %s" % (c[0], c[2]) for c in checks))


def test_criterion_6_rigidity_roundtrips(tetra, octa, rng):
    worst_recover = 0.0
    min_h2_eig = math.inf
    worst_e2_null = 0.0
    worst_e2_kernel = 0.0
    for s in (tetra, octa):
        n = s.vertex_count
        for _ in range(50):
            r = rng.uniform(0.3, 1.2, n)
            radii = {"v%d" % v: r[v] for v in range(n)}
            p = CirclePacking(kernel.HYPERBOLIC, radii)
            res = solve_circle_packing(s, kernel.HYPERBOLIC, k0_curvature(s, p))
            worst_recover = max(worst_recover,
                                max(abs(res.values[k] - radii[k]) for k in radii))
            M = curvature_jacobian(s, p, "k", 0.0)
            min_h2_eig = min(min_h2_eig, float(np.linalg.eigvalsh(M)[0]))

            pe = CirclePacking(kernel.EUCLIDEAN, radii)
            Me = curvature_jacobian(s, pe, "k", 0.0)
            w, V = np.linalg.eigh(Me)
            scale = max(abs(w[0]), abs(w[-1]))
            worst_e2_null = max(worst_e2_null, abs(w[0]) / scale)
            assert w[1] > 1e-9 * scale   # rank exactly |V| - 1
            null = V[:, 0]
            ones = np.ones(n) / math.sqrt(n)
            worst_e2_kernel = max(worst_e2_kernel,
                                  min(np.linalg.norm(null - ones),
                                      np.linalg.norm(null + ones)))
    ok = (worst_recover < 1e-6 and min_h2_eig > 0
          and worst_e2_null < 1e-9 and worst_e2_kernel < 1e-6)
    _line(6, "measure-then-solve rigidity", ok,
          "100 round trips recover within %.2g (tol 1e-6); min hyperbolic "
          "eigenvalue %.3g; flat null residual %.2g, kernel direction off %.2g"
          % (worst_recover, min_h2_eig, worst_e2_null, worst_e2_kernel))


def test_criterion_7_feasibility_grid(tetra):
    disagreements = []
    witness_ok = False
    for j in range(21):
        c = (0.90 + 0.05 * j) * math.pi
        target = {"v%d" % v: c for v in range(4)}
        verdict = feasibility_check(tetra, kernel.HYPERBOLIC, target)
        assert verdict.exhaustive and verdict.subsets_checked == 15
        try:
            solve_circle_packing(tetra, kernel.HYPERBOLIC, target)
            converged = True
        except (InfeasibleTargetError, SolveError):
            converged = False
        if verdict.feasible != converged:
            disagreements.append(c / math.pi)
        if j == 2:   # c = pi exactly
            w = verdict.witness
            witness_ok = (not verdict.feasible and w["kind"] == "subset_bound"
                          and sorted(w["subset"]) == ["v0", "v1", "v2", "v3"])
    ok = not disagreements and witness_ok
    _line(7, "feasibility polytope vs solver", ok,
          "0 disagreements over 21 grid points; boundary witness is the full "
          "vertex set" if ok else "disagreements at c/pi=%s, witness_ok=%s"
          % (disagreements, witness_ok))


def test_criterion_8_curvature_family_coherence(rng):
    # k_h at h = 0 against k_0
    worst_kh = 0.0
    for _ in range(100):
        s, m = _random_tetra_metric(rng, kernel.HYPERBOLIC)
        k0 = k0_curvature(s, m)
        kh = kh_curvature(s, m, 0.0)
        worst_kh = max(worst_kh, max(abs(kh.values[k] - k0.values[k])
                                     for k in k0.values))

    # phi at h = -2 against the cotangent form
    worst_cot = 0.0
    for _ in range(100):
        s, m = _random_tetra_metric(rng, kernel.EUCLIDEAN)
        phi = phi_curvature(s, m, -2.0)
        from vartri.curvature import _all_angles
        angles = _all_angles(s, m)
        for e in s.edges:
            want = sum(1.0 / math.tan(angles[t][c]) for (t, c) in e.sides)
            worst_cot = max(worst_cot, abs(phi.values[e.key] - want))

    # sign equivalence of the phi/psi families with their h = 0 members
    sign_violations = 0
    saw = {1, -1}
    seen = set()
    for _ in range(1000):
        s, m = _random_tetra_metric(rng, kernel.HYPERBOLIC, lo=0.5, hi=1.6)
        base_phi = phi_curvature(s, m, 0.0).values
        base_psi = psi_curvature(s, m, 0.0).values
        for k, v in base_psi.items():
            if abs(v) > 1e-12:
                seen.add(1 if v > 0 else -1)
        for h in H_GRID:
            if h == 0:
                continue
            for fam, base in ((phi_curvature(s, m, h).values, base_phi),
                              (psi_curvature(s, m, h).values, base_psi)):
                for k, v in fam.items():
                    b = base[k]
                    if abs(v) > 1e-12 and abs(b) > 1e-12 and (v > 0) != (b > 0):
                        sign_violations += 1
    both_signs = seen == saw

    gb = suites.run_suite("gaussbonnet", seed=0)

    ok = (worst_kh < 1e-12 and worst_cot < 1e-12 and sign_violations == 0
          and both_signs and gb["pass"] and gb["max_residual"] < 1e-9)
    _line(8, "curvature family coherence", ok,
          "k_h|_{h=0} off by %.2g, cotangent form off by %.2g, %d sign "
          "violations on 1000 metrics (both signs seen: %s), total-curvature "
          "residual %.2g (tol 1e-9)"
          % (worst_kh, worst_cot, sign_violations, both_signs,
             gb["max_residual"]))


def test_criterion_9_degeneration_trends():
    # packing: corner angle against its own radius, other radii pinned at 1
    rs = [1e-8, 1e-6, 1e-4, 1e-2, 0.1, 1.0, 5.0, 10.0, 12.0, 15.0]
    ths = [kernel.circle_packing_angles(kernel.HYPERBOLIC, (r, 1.0, 1.0))[0]
           for r in rs]
    monotone = all(a >= b for a, b in zip(ths, ths[1:]))
    top = ths[0]            # r = 1e-8 < 1e-4
    small_tail = max(th for r, th in zip(rs, ths) if r > 10)
    pack_ok = (monotone and top > math.pi - 1e-3 and small_tail < 1e-3)

    # hexagon: uniform collapse sends every opposite arc past 10
    th_grid = [0.5, 0.1, 1e-2, 1e-3, 5e-4, 1e-4]
    arcs = [kernel.hexagon_lengths((t, t, t)) for t in th_grid]
    hex_monotone = all(min(b) >= min(a) for a, b in zip(arcs, arcs[1:]))
    hex_long = min(min(a) for t, a in zip(th_grid, arcs) if t <= 1e-3)
    hex_ok = hex_monotone and hex_long > 10.0

    ok = pack_ok and hex_ok
    _line(9, "degeneration trends", ok,
          "packing angle %.3g at r=1e-8 (> pi - 1e-3) and %.3g for r > 10 "
          "(< 1e-3), monotone; hexagon arcs reach %.4g > 10 once the datum "
          "drops below 1e-3" % (top, small_tail, hex_long))
