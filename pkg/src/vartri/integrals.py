"""Integrals of trigonometric/hyperbolic powers used everywhere else.

Closed-form antiderivatives cover the integer exponents that the curvature
and energy families actually hit; anything else goes through scipy quadrature
with an endpoint substitution when the integrand has an integrable
singularity.  All closed forms are numpy-evaluable so batch callers can pass
arrays.
"""

import math

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .errors import DomainError

# antiderivatives F with F' = integrand, per kind and integer exponent
_ANTI = {
    "power": {
        -3: lambda t: -0.5 * t ** -2.0,
        -2: lambda t: -1.0 / t,
        -1: np.log,
        0: lambda t: t,
        1: lambda t: t * t / 2,
        2: lambda t: t ** 3.0 / 3,
        3: lambda t: t ** 4.0 / 4,
    },
    "sin": {
        -3: lambda t: -np.cos(t) / (2 * np.sin(t) ** 2) + 0.5 * np.log(np.tan(t / 2)),
        -2: lambda t: -np.cos(t) / np.sin(t),
        -1: lambda t: np.log(np.tan(t / 2)),
        0: lambda t: t,
        1: lambda t: -np.cos(t),
        2: lambda t: (t - np.sin(t) * np.cos(t)) / 2,
        3: lambda t: np.cos(t) ** 3 / 3 - np.cos(t),
    },
    "cos": {
        -3: lambda t: np.sin(t) / (2 * np.cos(t) ** 2) + 0.5 * np.arcsinh(np.tan(t)),
        -2: np.tan,
        -1: lambda t: np.arcsinh(np.tan(t)),
        0: lambda t: t,
        1: np.sin,
        2: lambda t: (t + np.sin(t) * np.cos(t)) / 2,
        3: lambda t: np.sin(t) - np.sin(t) ** 3 / 3,
    },
    "tan_half": {
        -3: lambda t: -1 / np.tan(t / 2) ** 2 - 2 * np.log(np.sin(t / 2)),
        -2: lambda t: -2 / np.tan(t / 2) - t,
        -1: lambda t: 2 * np.log(np.sin(t / 2)),
        0: lambda t: t,
        1: lambda t: -2 * np.log(np.cos(t / 2)),
        2: lambda t: 2 * np.tan(t / 2) - t,
        3: lambda t: np.tan(t / 2) ** 2 + 2 * np.log(np.cos(t / 2)),
    },
    "sinh": {
        -3: lambda t: -np.cosh(t) / (2 * np.sinh(t) ** 2) - 0.5 * np.log(np.tanh(t / 2)),
        -2: lambda t: -np.cosh(t) / np.sinh(t),
        -1: lambda t: np.log(np.tanh(t / 2)),
        0: lambda t: t,
        1: np.cosh,
        2: lambda t: (np.sinh(t) * np.cosh(t) - t) / 2,
        3: lambda t: np.cosh(t) ** 3 / 3 - np.cosh(t),
    },
    "cosh": {
        -3: lambda t: np.sinh(t) / (2 * np.cosh(t) ** 2) + 0.5 * np.arctan(np.sinh(t)),
        -2: np.tanh,
        -1: lambda t: np.arctan(np.sinh(t)),
        0: lambda t: t,
        1: np.sinh,
        2: lambda t: (t + np.sinh(t) * np.cosh(t)) / 2,
        3: lambda t: np.sinh(t) + np.sinh(t) ** 3 / 3,
    },
    "tanh_half": {
        -3: lambda t: 2 * np.log(np.sinh(t / 2)) - 1 / np.tanh(t / 2) ** 2,
        -2: lambda t: t - 2 / np.tanh(t / 2),
        -1: lambda t: 2 * np.log(np.sinh(t / 2)),
        0: lambda t: t,
        1: lambda t: 2 * np.log(np.cosh(t / 2)),
        2: lambda t: t - 2 * np.tanh(t / 2),
        3: lambda t: 2 * np.log(np.cosh(t / 2)) - np.tanh(t / 2) ** 2,
    },
}
# reciprocal integrands are powers with the opposite exponent
_ANTI["cot_half"] = {k: _ANTI["tan_half"][-k] for k in _ANTI["tan_half"]}
_ANTI["coth_half"] = {k: _ANTI["tanh_half"][-k] for k in _ANTI["tanh_half"]}

KINDS = tuple(_ANTI)

_BASE_FN = {
    "power": lambda t: t,
    "sin": np.sin,
    "cos": np.cos,
    "tan_half": lambda t: np.tan(t / 2),
    "cot_half": lambda t: 1 / np.tan(t / 2),
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh_half": lambda t: np.tanh(t / 2),
    "coth_half": lambda t: 1 / np.tanh(t / 2),
}

# (point, sign) pairs: integrand ~ (t - point)^(sign*exponent) near the point
_SINGULAR = {
    "power": ((0.0, 1),),
    "sin": ((0.0, 1), (math.pi, 1)),
    "cos": ((-math.pi / 2, 1), (math.pi / 2, 1)),
    "tan_half": ((0.0, 1), (math.pi, -1)),
    "cot_half": ((0.0, -1), (math.pi, 1)),
    "sinh": ((0.0, 1),),
    "cosh": (),
    "tanh_half": ((0.0, 1),),
    "coth_half": ((0.0, -1),),
}


def integrand(kind, exponent, t):
    """Value of base(t)**exponent; works on scalars and arrays."""
    return _BASE_FN[kind](t) ** exponent


def singular_exponent(kind, exponent, point):
    """Local power-law exponent of the integrand at `point`, or None if regular."""
    for p, sign in _SINGULAR[kind]:
        if abs(point - p) < 1e-12:
            a = sign * exponent
            if a < 0:
                return a
            return None
    return None


def antiderivative(kind, exponent):
    """Closed-form antiderivative callable, or None when only quadrature works."""
    k = round(exponent)
    if abs(exponent - k) < 1e-12 and k in _ANTI[kind]:
        return _ANTI[kind][k]
    if kind == "power":
        p = exponent + 1
        if abs(p) < 1e-12:
            return np.log
        return lambda t: t ** p / p
    return None


def _check_divergence(kind, exponent, a, b):
    for point in (a, b):
        alpha = singular_exponent(kind, exponent, point)
        if alpha is not None and alpha <= -1:
            raise DomainError(
                "integral of %s^%g diverges at endpoint %g" % (kind, exponent, point),
                kind=kind, exponent=exponent, endpoint=point)


def _quad(kind, exponent, a, b):
    f = lambda t: integrand(kind, exponent, t)
    sing_a = singular_exponent(kind, exponent, a) is not None
    sing_b = singular_exponent(kind, exponent, b) is not None
    if sing_a and sing_b:
        mid = 0.5 * (a + b)
        return _quad(kind, exponent, a, mid) + _quad(kind, exponent, mid, b)
    if sing_a:
        # t = a + s^2 smooths an integrable power singularity at a
        smax = math.sqrt(b - a)
        val, _ = quad(lambda s: f(a + s * s) * 2 * s, 0.0, smax,
                      epsabs=1e-12, epsrel=1e-12, limit=200)
        return val
    if sing_b:
        smax = math.sqrt(b - a)
        val, _ = quad(lambda s: f(b - s * s) * 2 * s, 0.0, smax,
                      epsabs=1e-12, epsrel=1e-12, limit=200)
        return val
    val, _ = quad(f, a, b, epsabs=1e-12, epsrel=1e-12, limit=200)
    return val


def integrate_power(kind, exponent, lower, upper):
    """∫_lower^upper base(t)**exponent dt, exact where a closed form exists."""
    if kind not in _ANTI:
        raise DomainError("unknown integrand kind %r" % (kind,))
    if lower == upper:
        return 0.0
    _check_divergence(kind, exponent, lower, upper)
    F = antiderivative(kind, exponent)
    if F is not None:
        return float(F(upper) - F(lower))
    if lower <= upper:
        return _quad(kind, exponent, lower, upper)
    return -_quad(kind, exponent, upper, lower)


def invert_integral(kind, exponent, base, u, lo, hi, lo_bound=None, hi_bound=None):
    """Solve ∫_base^x = u for x; the integrand is positive so the map is increasing.

    lo/hi seed the bracket.  A finite bound marks an open domain end the
    bracket creeps toward geometrically; None means the domain is unbounded on
    that side and the bracket expands by doubling steps.
    """
    def g(x):
        return integrate_power(kind, exponent, base, x) - u

    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        step = max(hi - lo, 0.5)
        for _ in range(600):
            if g(lo) <= 0:
                break
            lo = lo - step if lo_bound is None else 0.5 * (lo + lo_bound)
            step *= 2
        else:
            raise DomainError("coordinate value %g below the image of the domain" % u)
        step = max(hi - lo, 0.5)
        for _ in range(600):
            if g(hi) >= 0:
                break
            hi = hi + step if hi_bound is None else 0.5 * (hi + hi_bound)
            step *= 2
        else:
            raise DomainError("coordinate value %g above the image of the domain" % u)
    if lo == hi:
        return lo
    return brentq(g, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=300)


def invert_integral_np(kind, exponent, base, u, lo, hi, lo_bound=None, hi_bound=None):
    """Vectorized inverse of the integral map; closed-form kinds only."""
    F = antiderivative(kind, exponent)
    if F is None:
        flat = np.ravel(u)
        out = np.array([invert_integral(kind, exponent, base, ui, lo, hi,
                                        lo_bound, hi_bound) for ui in flat])
        return out.reshape(np.shape(u))
    u = np.asarray(u, float)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        F0 = float(F(base))
        lo = np.full(u.shape, float(lo))
        hi = np.full(u.shape, float(hi))
        step = 0.5
        for _ in range(600):
            bad = F(lo) - F0 > u
            if not bad.any():
                break
            lo = np.where(bad, lo - step if lo_bound is None else 0.5 * (lo + lo_bound), lo)
            step *= 2
        else:
            raise DomainError("coordinate values below the image of the domain")
        step = 0.5
        for _ in range(600):
            bad = F(hi) - F0 < u
            if not bad.any():
                break
            hi = np.where(bad, hi + step if hi_bound is None else 0.5 * (hi + hi_bound), hi)
            step *= 2
        else:
            raise DomainError("coordinate values above the image of the domain")
        for _ in range(110):
            mid = 0.5 * (lo + hi)
            high = F(mid) - F0 > u
            hi = np.where(high, mid, hi)
            lo = np.where(high, lo, mid)
    return 0.5 * (lo + hi)
