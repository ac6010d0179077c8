"""The six families of per-triangle convex/concave energies.

Each family is a closed 1-form sum(f(y_i) du_i) on a triangle or hexagon
chart: y is the output of the cosine-law map, u is the image of the underlying
variable (length, radius, or half-angle) under the g-integral.  The Hessian is
assembled analytically from the kernel derivative matrices.

The hyperbolic-angle family carries a -1 normalization relative to the literal
tanh-power integrand so that its Hessian comes out positive definite like the
other strictly definite families; the sign is recorded in the family table and
applied consistently to f, gradients, Hessians and energies.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernel
from .errors import DomainError
from .integrals import (antiderivative, integrand, integrate_power,
                        invert_integral, invert_integral_np, singular_exponent)

# x_i = r_j + r_k for the packing-style parametrizations
B = np.array([[0.0, 1.0, 1.0], [1.0, 0.0, 1.0], [1.0, 1.0, 0.0]])

HALF_PI = math.pi / 2


@dataclass(frozen=True)
class _Family:
    f_kind: str
    g_kind: str
    packing: bool          # variables enter the chart through x = B r
    f_sign: float
    geometry: object       # kernel Geometry, or None for the hexagon chart
    domain: tuple          # open interval of the underlying variable
    seed: tuple            # bracket seeds for inverting the u map
    g_base: float
    definiteness: str      # psd / pd / nsd / nd


_FAM = {
    "euclidean_length": _Family("sin", "power", False, 1.0, kernel.EUCLIDEAN,
                                (0.0, None), (0.5, 2.0), 1.0, "psd"),
    "spherical_length": _Family("sin", "sin", False, 1.0, kernel.SPHERICAL,
                                (0.0, math.pi), (1.0, 2.0), HALF_PI, "pd"),
    "euclidean_packing": _Family("cot_half", "power", True, 1.0, kernel.EUCLIDEAN,
                                 (0.0, None), (0.5, 2.0), 1.0, "nsd"),
    "hyperbolic_packing": _Family("cot_half", "sinh", True, 1.0, kernel.HYPERBOLIC,
                                  (0.0, None), (0.5, 2.0), 1.0, "nd"),
    "hyperbolic_angle": _Family("tanh_half", "cos", True, -1.0, kernel.HYPERBOLIC,
                                (-HALF_PI, HALF_PI), (0.3, 1.2), 1.0, "pd"),
    "hexagon": _Family("coth_half", "cosh", True, 1.0, None,
                       (None, None), (0.5, 2.0), 1.0, "nd"),
}

FAMILIES = tuple(_FAM)


def _default_f_base(f_kind, h):
    if f_kind == "sin":
        return HALF_PI, False
    # half-angle integrands start at 0 when the integral converges there
    alpha = singular_exponent(f_kind, h, 0.0)
    if alpha is None or alpha > -1:
        return 0.0, False
    return HALF_PI, True


@dataclass(frozen=True)
class EnergySpec:
    """One family plus its parameter h and the integral base points."""
    family: str
    h: float
    f_base: float = None
    g_base: float = None
    f_base_moved: bool = False

    def __post_init__(self):
        if self.family not in _FAM:
            raise DomainError("unknown energy family %r; expected one of %s"
                              % (self.family, ", ".join(FAMILIES)))
        fam = _FAM[self.family]
        if self.g_base is None:
            object.__setattr__(self, "g_base", fam.g_base)
        if self.f_base is None:
            base, moved = _default_f_base(fam.f_kind, self.h)
            object.__setattr__(self, "f_base", base)
            object.__setattr__(self, "f_base_moved", moved)
        else:
            alpha = singular_exponent(fam.f_kind, self.h, self.f_base)
            if alpha is not None and alpha <= -1:
                raise DomainError(
                    "f integral of %s^%g diverges at base %g"
                    % (fam.f_kind, self.h, self.f_base))

    @property
    def definiteness(self):
        return _FAM[self.family].definiteness

    @property
    def geometry(self):
        return _FAM[self.family].geometry


@dataclass(frozen=True)
class UCoordinates:
    values: tuple
    domain: tuple


def _uvals(u):
    return np.asarray(getattr(u, "values", u), float)


def _check_variable(spec, t):
    fam = _FAM[spec.family]
    lo, hi = fam.domain
    t = float(t)
    if not math.isfinite(t):
        raise DomainError("variable %r is not finite" % (t,))
    if (lo is not None and t <= lo) or (hi is not None and t >= hi):
        raise DomainError("variable %g outside the open domain (%s, %s) of family %s"
                          % (t, lo, hi, spec.family))
    return t


def u_of_variable(spec, t):
    """The u-coordinate of a length/radius/half-angle variable."""
    fam = _FAM[spec.family]
    t = _check_variable(spec, t)
    return integrate_power(fam.g_kind, -spec.h - 1, spec.g_base, t)


def variable_of_u(spec, u):
    """Inverse of u_of_variable."""
    fam = _FAM[spec.family]
    lo, hi = fam.domain
    return invert_integral(fam.g_kind, -spec.h - 1, spec.g_base, float(u),
                           fam.seed[0], fam.seed[1], lo_bound=lo, hi_bound=hi)


def f_value(spec, y):
    """The per-corner potential f at the chart output y (angle or length)."""
    fam = _FAM[spec.family]
    y = float(y)
    if fam.f_kind in ("sin", "cot_half"):
        if not (0 < y < math.pi):
            raise DomainError("angle argument %r outside (0, pi)" % (y,))
    elif y <= 0:
        raise DomainError("length argument %r is not positive" % (y,))
    return fam.f_sign * integrate_power(fam.f_kind, spec.h, spec.f_base, y)


def u_coordinates(spec, t):
    """Package a variable triple as UCoordinates."""
    fam = _FAM[spec.family]
    return UCoordinates(tuple(u_of_variable(spec, ti) for ti in t), fam.domain)


def triple_of_u(spec, u):
    return np.array([variable_of_u(spec, ui) for ui in _uvals(u)])


def _chart(spec, t):
    """Underlying triple t -> (x, y, dy/dt) for the family's cosine-law chart."""
    fam = _FAM[spec.family]
    t = np.asarray(t, float)
    x = B @ t if fam.packing else t
    name = spec.family
    if name == "hyperbolic_angle":
        y = kernel.lengths_from_angles(kernel.HYPERBOLIC, tuple(x))
        dY = kernel.length_jacobian(kernel.HYPERBOLIC, tuple(x))
    elif name == "hexagon":
        y = kernel.hexagon_lengths(tuple(x))
        dY = kernel.hexagon_jacobian(tuple(x))
    else:
        y = kernel.angles_from_lengths(fam.geometry, tuple(x))
        dY = kernel.angle_jacobian(fam.geometry, tuple(x))
    if fam.packing:
        dY = dY @ B
    return x, np.asarray(y), dY


def triangle_gradient(spec, u):
    """Gradient (f(y_1), f(y_2), f(y_3)) of the triangle energy in u."""
    t = triple_of_u(spec, u)
    _, y, _ = _chart(spec, t)
    return np.array([f_value(spec, yi) for yi in y])


def triangle_hessian(spec, u):
    """Analytic Hessian in u; symmetric, with the family's definiteness sign."""
    fam = _FAM[spec.family]
    t = triple_of_u(spec, u)
    _, y, dY = _chart(spec, t)
    fp = integrand(fam.f_kind, spec.h, y)
    gp = integrand(fam.g_kind, -spec.h - 1, t)
    return fam.f_sign * (dY * fp[:, None]) / gp[None, :]


@lru_cache(maxsize=None)
def _leggauss(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w      # mapped to [0, 1]


def gradient_batch(spec, U):
    """triangle_gradient over an array of u-triples, shape (..., 3).

    Vectorized when the family's integrals have closed forms (integer h);
    otherwise falls back to the scalar path.
    """
    fam = _FAM[spec.family]
    U = np.asarray(U, float)
    Ff = antiderivative(fam.f_kind, spec.h)
    Fg = antiderivative(fam.g_kind, -spec.h - 1)
    if Ff is None or Fg is None:
        flat = U.reshape(-1, 3)
        out = np.array([triangle_gradient(spec, u) for u in flat])
        return out.reshape(U.shape)
    lo, hi = fam.domain
    t = invert_integral_np(fam.g_kind, -spec.h - 1, spec.g_base, U,
                           fam.seed[0], fam.seed[1], lo_bound=lo, hi_bound=hi)
    x = t @ B if fam.packing else t
    name = spec.family
    if name == "hyperbolic_angle":
        y = kernel.batch_lengths(kernel.HYPERBOLIC, x)
    elif name == "hexagon":
        y = kernel.batch_hexagon(x)
    else:
        y = kernel.batch_angles(fam.geometry, x)
    return fam.f_sign * (Ff(y) - Ff(spec.f_base))


def _segment_energy(spec, u0, u1, fast):
    du = u1 - u0
    if fast:
        def gl(n):
            s, w = _leggauss(n)
            G = gradient_batch(spec, u0[None, :] + s[:, None] * du[None, :])
            return float(w @ (G @ du))
        coarse, fine = gl(48), gl(96)
        if abs(fine - coarse) < 1e-10 * max(1.0, abs(fine)):
            return fine
        mid = 0.5 * (u0 + u1)
        return _segment_energy(spec, u0, mid, fast) + _segment_energy(spec, mid, u1, fast)
    from scipy.integrate import quad
    val, _ = quad(lambda s: float(triangle_gradient(spec, u0 + s * du) @ du),
                  0.0, 1.0, epsabs=1e-10, epsrel=1e-10, limit=100)
    return val


def triangle_energy(spec, u, u_base):
    """Line integral of the 1-form along the straight u-segment from u_base to u."""
    fam = _FAM[spec.family]
    u0, u1 = _uvals(u_base), _uvals(u)
    fast = (antiderivative(fam.f_kind, spec.h) is not None
            and antiderivative(fam.g_kind, -spec.h - 1) is not None)
    return _segment_energy(spec, u0, u1, fast)


def _gradient_with_f(spec, u, f_fn):
    t = triple_of_u(spec, u)
    _, y, _ = _chart(spec, t)
    return np.array([f_fn(yi) for yi in y])


def closedness_residual(spec, u, f_fn=None, step=1e-5):
    """Max mixed-partial asymmetry of the 1-form at u, by central differences.

    f_fn deliberately replaces the potential (negative-control hook).
    """
    u = _uvals(u)
    grad = (lambda v: _gradient_with_f(spec, v, f_fn)) if f_fn else \
        (lambda v: triangle_gradient(spec, v))
    cols = []
    for j in range(3):
        e = np.zeros(3)
        e[j] = step
        cols.append((grad(u + e) - grad(u - e)) / (2 * step))
    J = np.column_stack(cols)
    return float(np.max(np.abs(J - J.T)))
