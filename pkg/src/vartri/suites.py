"""Randomized verification suites: trigonometric law residuals, closedness of
the energy 1-forms, Hessian definiteness, and Gauss-Bonnet totals.

Each suite returns a JSON-friendly report; `run_suites` fans out over a thread
pool capped by the VARTRI_THREADS environment variable.
"""

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import energy, kernel
from .errors import DomainError
from .integrals import antiderivative
from .solver import P

H_GRID = (-2.0, -1.0, 0.0, 1.0, 2.0)

SUITE_NAMES = ("laws", "closedness", "convexity", "gaussbonnet")

# standard small closed complexes used for the Gauss-Bonnet totals
TETRA_TRIANGLES = ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))
OCTA_TRIANGLES = ((0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 1),
                  (5, 2, 1), (5, 3, 2), (5, 4, 3), (5, 1, 4))


def _spread(R):
    return float(np.max(R.max(axis=-1) - R.min(axis=-1)))


def _sample_lengths(geometry, n, rng):
    """Valid length triples via the part decomposition l_i = x_j + x_k."""
    x = rng.uniform(0.1, 1.5, size=(n, 3))
    if geometry is kernel.SPHERICAL:
        scale = rng.uniform(0.3, 0.95 * math.pi, size=(n, 1)) / x.sum(axis=1, keepdims=True)
        x = x * scale
    return x @ energy.B


def _tangent_half_excess(TH):
    return (TH @ P) / 2


def laws_suite(seed=0, samples=None):
    """Sine/tangent law spreads and the spherical quadratic identity."""
    t0 = time.perf_counter()
    n_tri = int(samples or 10000)
    n_hex = max(n_tri // 10, 100)
    rng = np.random.default_rng(seed)
    details = {}

    for geometry in (kernel.EUCLIDEAN, kernel.HYPERBOLIC, kernel.SPHERICAL):
        L = _sample_lengths(geometry, n_tri, rng)
        TH = kernel.batch_angles(geometry, L)
        rho = _tangent_half_excess(TH)
        if geometry is kernel.EUCLIDEAN:
            sine = np.sin(TH) / L
            tangent = L / np.cos(rho)
        elif geometry is kernel.HYPERBOLIC:
            sine = np.sin(TH) / np.sinh(L)
            tangent = np.tanh(L / 2) / np.cos(rho)
        else:
            sine = np.sin(TH) / np.sin(L)
            tangent = np.tan(L / 2) / np.cos(rho)
        details["sine_%s" % geometry.name] = _spread(sine)
        details["tangent_%s" % geometry.name] = _spread(tangent)

    TH = np.random.default_rng(seed + 1).uniform(0.2, 2.5, size=(n_hex, 3))
    X = kernel.batch_hexagon(TH)
    rho = _tangent_half_excess(TH)
    details["sine_hexagon"] = _spread(np.sinh(X) / np.sinh(TH))
    details["tangent_hexagon"] = _spread((1 / np.tanh(X / 2)) / np.cosh(rho))
    details["hexagon_involution"] = float(np.max(np.abs(kernel.batch_hexagon(X) - TH)))

    L = _sample_lengths(kernel.SPHERICAL, n_tri, rng)
    TH = kernel.batch_angles(kernel.SPHERICAL, L)       # valid chart inputs
    Y = kernel.batch_lengths(kernel.SPHERICAL, TH)
    A = np.sin(Y[:, 0]) * np.sin(TH[:, 1]) * np.sin(TH[:, 2])
    c = np.cos(TH)
    rhs = 1 - (c ** 2).sum(axis=1) - 2 * c.prod(axis=1)
    details["area_identity"] = float(np.max(np.abs(A * A - rhs)))
    details["length_roundtrip"] = float(np.max(np.abs(Y - L)))

    A_oct, res_oct = kernel.area_quantity((math.pi / 2,) * 3)
    details["area_octant"] = max(abs(A_oct - 1.0), res_oct)

    worst = max(details.values())
    in_budget = time.perf_counter() - t0 < 5.0
    return {"suite": "laws", "seed": seed,
            "samples": {"triangles": n_tri, "hexagons": n_hex},
            "tolerance": 1e-12, "max_residual": worst,
            "within_runtime_budget": in_budget,
            "pass": worst < 1e-12 and in_budget, "details": details}


def _sample_variables(family, n, rng):
    """Random interior variable triples for one energy family."""
    if family == "euclidean_length":
        return _sample_lengths(kernel.EUCLIDEAN, n, rng)
    if family == "spherical_length":
        # keep clear of thin triangles and of the perimeter ceiling
        return rng.uniform(0.25, 0.6, size=(n, 3)) @ energy.B
    if family == "hyperbolic_angle":
        # angle triples with sum well below pi, mapped to half-excess variables
        th = rng.uniform(0.15, 0.8, size=(n, 3))
        th *= rng.uniform(0.5, 0.9, size=(n, 1)) * math.pi / th.sum(axis=1, keepdims=True)
        return (th @ P) / 2
    return rng.uniform(0.2, 1.5, size=(n, 3))


def _sample_path_triples(family, n, rng):
    """Base/end/mid variable triples whose componentwise hull stays in the
    chart domain, so straight u-segments between them are integrable."""
    def jitter(x):
        return x * rng.uniform(0.85, 1.15, size=x.shape)

    if family in ("euclidean_length", "spherical_length"):
        lo, hi = ((0.3, 0.55) if family == "spherical_length" else (0.5, 1.0))
        parts = rng.uniform(lo, hi, size=(n, 3))
        return (parts @ energy.B, jitter(parts) @ energy.B, jitter(parts) @ energy.B)
    if family == "hyperbolic_angle":
        th = rng.uniform(0.15, 0.8, size=(n, 3))
        th *= rng.uniform(0.5, 0.85, size=(n, 1)) * math.pi / th.sum(axis=1, keepdims=True)
        t0 = (th @ P) / 2
        shift = lambda: t0 + rng.uniform(-0.03, 0.03, size=t0.shape)
        return t0, shift(), shift()
    r = rng.uniform(0.3, 1.5, size=(n, 3))
    return r, jitter(r), jitter(r)


def _u_array(spec, T):
    fam = energy._FAM[spec.family]
    F = antiderivative(fam.g_kind, -spec.h - 1)
    if F is not None:
        return np.asarray(F(T)) - float(F(spec.g_base))
    return np.vectorize(lambda t: energy.u_of_variable(spec, t))(T)


def _gradient_of_variables(spec, T):
    """Form coefficients (f at the chart outputs) straight from variable triples."""
    fam = energy._FAM[spec.family]
    T = np.asarray(T, float)
    Ff = antiderivative(fam.f_kind, spec.h)
    if Ff is None:
        flat = T.reshape(-1, 3)
        out = np.array([energy.triangle_gradient(spec, energy.u_coordinates(spec, t))
                        for t in flat])
        return out.reshape(T.shape)
    X = T @ energy.B if fam.packing else T
    if spec.family == "hyperbolic_angle":
        Y = kernel.batch_lengths(kernel.HYPERBOLIC, X)
    elif spec.family == "hexagon":
        Y = kernel.batch_hexagon(X)
    else:
        Y = kernel.batch_angles(fam.geometry, X)
    return fam.f_sign * (Ff(Y) - Ff(spec.f_base))


def _fd_asymmetry(spec, T, step=1e-5):
    """Max |dW_i/du_j - dW_j/du_i| over a batch of points.

    Central differences taken in the underlying variable, paired with the
    matching u-secant, so chart compression never inflates the step error.
    """
    cols = []
    for j in range(3):
        e = np.zeros(3)
        e[j] = step
        Gp = _gradient_of_variables(spec, T + e)
        Gm = _gradient_of_variables(spec, T - e)
        dU = _u_array(spec, T[:, j] + step) - _u_array(spec, T[:, j] - step)
        cols.append((Gp - Gm) / dU[:, None])
    J = np.stack(cols, axis=-1)            # (..., i, j)
    return float(np.max(np.abs(J - np.swapaxes(J, -1, -2))))


def closedness_suite(seed=0, samples=None):
    """Mixed-partial symmetry and path independence for all six families."""
    n = int(samples or 100)
    rng = np.random.default_rng(seed)
    details = {}
    worst_fd = 0.0
    worst_path = 0.0
    control_min = math.inf

    for family in energy.FAMILIES:
        fam_fd = 0.0
        fam_path = 0.0
        for h in H_GRID:
            spec = energy.EnergySpec(family, h)
            T = _sample_variables(family, n, rng)
            fam_fd = max(fam_fd, _fd_asymmetry(spec, T))

            pairs = min(100, n)
            T0, T1, Tm = _sample_path_triples(family, pairs, rng)
            U0, U1, Um = _u_array(spec, T0), _u_array(spec, T1), _u_array(spec, Tm)
            for a, b, m in zip(U0, U1, Um):
                direct = energy.triangle_energy(spec, b, a)
                dogleg = (energy.triangle_energy(spec, m, a)
                          + energy.triangle_energy(spec, b, m))
                fam_path = max(fam_path, abs(direct - dogleg))
        spec0 = energy.EnergySpec(family, 0.0)
        T = _sample_variables(family, 3, rng)
        ctrl = max(energy.closedness_residual(spec0, _u_array(spec0, t), f_fn=math.cos)
                   for t in T)
        control_min = min(control_min, ctrl)
        details["fd_%s" % family] = fam_fd
        details["path_%s" % family] = fam_path
        worst_fd = max(worst_fd, fam_fd)
        worst_path = max(worst_path, fam_path)

    details["negative_control_min"] = control_min
    ok = worst_fd < 1e-7 and worst_path < 1e-8 and control_min >= 1e-4
    return {"suite": "closedness", "seed": seed, "samples": n,
            "tolerance": {"mixed_partials": 1e-7, "two_path": 1e-8,
                          "negative_control_min": 1e-4},
            "max_residual": max(worst_fd, worst_path), "pass": ok,
            "details": details}


def _definiteness_ok(kind, w, tol):
    """Eigenvalues sorted ascending against the declared signature."""
    if kind == "pd":
        return w[0] > tol
    if kind == "nd":
        return w[-1] < -tol
    if kind == "psd":
        return w[0] > -tol and abs(w[0]) <= tol and w[1] > tol
    return w[-1] < tol and abs(w[-1]) <= tol and w[-2] < -tol


def convexity_suite(seed=0, samples=None):
    """Hessian signature per family over the h grid, plus the flat-family
    scaling kernel (direction of the zero eigenvalue)."""
    n = int(samples or 1000)
    rng = np.random.default_rng(seed)
    details = {}
    ok = True
    worst_kernel = 0.0

    for family in energy.FAMILIES:
        kind = energy._FAM[family].definiteness
        bad = 0
        fam_kernel = 0.0
        for h in H_GRID:
            spec = energy.EnergySpec(family, h)
            T = _sample_variables(family, max(n // len(H_GRID), 50), rng)
            for t in T:
                u = _u_array(spec, t)
                H = energy.triangle_hessian(spec, u)
                if np.max(np.abs(H - H.T)) > 1e-10 * max(1.0, np.max(np.abs(H))):
                    bad += 1
                    continue
                w, V = np.linalg.eigh(H)
                scale = max(abs(w[0]), abs(w[-1]))
                if not _definiteness_ok(kind, w, 1e-9 * scale):
                    bad += 1
                    continue
                if kind in ("psd", "nsd"):
                    null = V[:, int(np.argmin(np.abs(w)))]
                    ref = t ** (-h)
                    ref = ref / np.linalg.norm(ref)
                    dev = np.linalg.norm(null - ref * np.sign(null @ ref))
                    fam_kernel = max(fam_kernel, float(dev))
        details["signature_violations_%s" % family] = bad
        if kind in ("psd", "nsd"):
            details["kernel_deviation_%s" % family] = fam_kernel
            worst_kernel = max(worst_kernel, fam_kernel)
        ok = ok and bad == 0

    # at h = 0 the scaling direction is literally (1,1,1)/sqrt(3)
    for family in ("euclidean_length", "euclidean_packing"):
        spec = energy.EnergySpec(family, 0.0)
        dev = 0.0
        for t in _sample_variables(family, 50, rng):
            H = energy.triangle_hessian(spec, _u_array(spec, t))
            w, V = np.linalg.eigh(H)
            null = V[:, int(np.argmin(np.abs(w)))]
            ones = np.ones(3) / math.sqrt(3.0)
            dev = max(dev, float(np.linalg.norm(null - ones * np.sign(null @ ones))))
        details["uniform_kernel_h0_%s" % family] = dev
        ok = ok and dev < 1e-6

    ok = bool(ok and worst_kernel < 1e-6)
    return {"suite": "convexity", "seed": seed, "samples": n,
            "tolerance": {"eigenvalue": "1e-9 * scale", "kernel_direction": 1e-6},
            "max_residual": worst_kernel, "pass": ok, "details": details}


def _gb_total(triangles, vertex_count, geometry, R):
    """Sum of vertex curvatures and total area over a batch of packings."""
    ns = R.shape[0]
    ksum = np.full(ns, 2 * math.pi * vertex_count)
    area = np.zeros(ns)
    for tri in triangles:
        r = R[:, tri]
        L = r @ energy.B
        TH = kernel.batch_angles(geometry, L)
        ksum -= TH.sum(axis=1)
        if geometry is kernel.HYPERBOLIC:
            area += math.pi - TH.sum(axis=1)
        elif geometry is kernel.SPHERICAL:
            area += TH.sum(axis=1) - math.pi
    return ksum, area


def gaussbonnet_suite(seed=0, samples=None):
    """Total curvature against 2*pi*chi (plus/minus area) on random packings."""
    n = int(samples or 200)
    rng = np.random.default_rng(seed)
    details = {}
    worst = 0.0
    for name, tris, nv in (("tetrahedron", TETRA_TRIANGLES, 4),
                           ("octahedron", OCTA_TRIANGLES, 6)):
        chi = nv - (3 * len(tris)) // 2 + len(tris)
        for geometry in (kernel.EUCLIDEAN, kernel.HYPERBOLIC, kernel.SPHERICAL):
            if geometry is kernel.SPHERICAL:
                R = rng.uniform(0.05, 0.35, size=(n, nv))
            else:
                R = rng.uniform(0.2, 1.5, size=(n, nv))
            ksum, area = _gb_total(tris, nv, geometry, R)
            expected = 2 * math.pi * chi
            if geometry is kernel.HYPERBOLIC:
                expected = expected + area
            elif geometry is kernel.SPHERICAL:
                expected = expected - area
            res = float(np.max(np.abs(ksum - expected)))
            details["%s_%s" % (name, geometry.name)] = res
            worst = max(worst, res)
    return {"suite": "gaussbonnet", "seed": seed, "samples": n,
            "tolerance": 1e-9, "max_residual": worst, "pass": worst < 1e-9,
            "details": details}


_SUITES = {"laws": laws_suite, "closedness": closedness_suite,
           "convexity": convexity_suite, "gaussbonnet": gaussbonnet_suite}


def run_suite(name, seed=0, samples=None):
    if name not in _SUITES:
        raise DomainError("unknown suite %r; expected one of %s"
                          % (name, ", ".join(SUITE_NAMES)))
    return _SUITES[name](seed=seed, samples=samples)


def _thread_cap():
    raw = os.environ.get("VARTRI_THREADS", "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return min(4, os.cpu_count() or 1)


def run_suites(names=None, seed=0, samples=None, threads=None):
    names = list(names or SUITE_NAMES)
    for name in names:
        if name not in _SUITES:
            raise DomainError("unknown suite %r; expected one of %s"
                              % (name, ", ".join(SUITE_NAMES)))
    cap = threads or _thread_cap()
    if cap <= 1 or len(names) == 1:
        results = [run_suite(n, seed=seed, samples=samples) for n in names]
    else:
        with ThreadPoolExecutor(max_workers=min(cap, len(names))) as pool:
            results = list(pool.map(
                lambda n: run_suite(n, seed=seed, samples=samples), names))
    return {"results": results, "pass": all(r["pass"] for r in results)}
