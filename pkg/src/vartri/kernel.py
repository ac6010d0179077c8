"""Trigonometric core: length/angle maps for triangles in the three constant
curvature geometries, the right-angled hexagon law, sine/tangent laws, and the
analytic derivative matrices the energies are built from."""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

ACOS_GUARD = 1e-9     # |cos| may exceed 1 by at most this before erroring
ACOS_CLAMP = 1e-12    # arguments are pulled inside [-1+clamp, 1-clamp]
DEGENERATE_SIN = 1e-10


@dataclass(frozen=True)
class Geometry:
    name: str
    curvature: int

    @staticmethod
    def from_name(name):
        key = str(name).strip().lower()
        table = {"euclidean": EUCLIDEAN, "hyperbolic": HYPERBOLIC, "spherical": SPHERICAL}
        if key not in table:
            raise DomainError("unknown geometry %r" % (name,))
        return table[key]

    def __str__(self):
        return self.name


EUCLIDEAN = Geometry("euclidean", 0)
HYPERBOLIC = Geometry("hyperbolic", -1)
SPHERICAL = Geometry("spherical", 1)


def _safe_acos(c, what):
    if abs(c) > 1.0 + ACOS_GUARD:
        raise DomainError("cosine of %s out of range: %r" % (what, c), value=c)
    return math.acos(min(max(c, -1.0 + ACOS_CLAMP), 1.0 - ACOS_CLAMP))


def _check_triangle_lengths(geometry, l):
    if len(l) != 3:
        raise DomainError("expected three lengths, got %d" % len(l))
    for i, li in enumerate(l):
        if not (li > 0) or not math.isfinite(li):
            raise DomainError("edge length l%d = %r is not positive" % (i + 1, li))
    for i in range(3):
        li, lj, lk = l[i], l[(i + 1) % 3], l[(i + 2) % 3]
        if lj + lk - li <= 1e-12 * (li + lj + lk):
            raise DomainError(
                "degenerate triangle: l%d + l%d <= l%d for lengths %r"
                % ((i + 1) % 3 + 1, (i + 2) % 3 + 1, i + 1, tuple(l)))
    if geometry is SPHERICAL:
        for i, li in enumerate(l):
            if li >= math.pi:
                raise DomainError("spherical length l%d = %r is not < pi" % (i + 1, li))
        if sum(l) >= 2 * math.pi:
            raise DomainError("spherical perimeter %r is not < 2*pi" % (sum(l),))


def angles_from_lengths(geometry, l):
    """Inner angles (theta_i opposite l_i) of the triangle with the given side lengths."""
    _check_triangle_lengths(geometry, l)
    out = []
    for i in range(3):
        li, lj, lk = l[i], l[(i + 1) % 3], l[(i + 2) % 3]
        if geometry is EUCLIDEAN:
            c = (lj * lj + lk * lk - li * li) / (2 * lj * lk)
        elif geometry is HYPERBOLIC:
            c = (math.cosh(lj) * math.cosh(lk) - math.cosh(li)) / (
                math.sinh(lj) * math.sinh(lk))
        else:
            c = (math.cos(li) - math.cos(lj) * math.cos(lk)) / (
                math.sin(lj) * math.sin(lk))
        out.append(_safe_acos(c, "angle %d" % (i + 1)))
    return tuple(out)


def lengths_from_angles(geometry, theta):
    """Side lengths from the angle triple; defined for hyperbolic and spherical only."""
    if geometry is EUCLIDEAN:
        raise DomainError("euclidean angles determine lengths only up to scale")
    for i, t in enumerate(theta):
        if not (0 < t < math.pi):
            raise DomainError("angle theta%d = %r outside (0, pi)" % (i + 1, t))
    s = sum(theta)
    if geometry is HYPERBOLIC and s >= math.pi:
        raise DomainError("hyperbolic angle sum %r is not < pi" % (s,))
    if geometry is SPHERICAL:
        if s <= math.pi:
            raise DomainError("spherical angle sum %r is not > pi" % (s,))
        for i in range(3):
            ti, tj, tk = theta[i], theta[(i + 1) % 3], theta[(i + 2) % 3]
            if tj + tk - ti >= math.pi:
                raise DomainError(
                    "spherical polarity violated: theta%d + theta%d - theta%d >= pi"
                    % ((i + 1) % 3 + 1, (i + 2) % 3 + 1, i + 1))
    out = []
    for i in range(3):
        ti, tj, tk = theta[i], theta[(i + 1) % 3], theta[(i + 2) % 3]
        c = (math.cos(ti) + math.cos(tj) * math.cos(tk)) / (math.sin(tj) * math.sin(tk))
        if geometry is HYPERBOLIC:
            out.append(math.acosh(max(c, 1.0)))
        else:
            out.append(_safe_acos(c, "length %d" % (i + 1)))
    return tuple(out)


def hexagon_lengths(theta):
    """Alternating side lengths of the right-angled hexagon opposite the given triple.

    The map is an involution: applying it twice returns the input.
    """
    for i, t in enumerate(theta):
        if not (t > 0) or not math.isfinite(t):
            raise DomainError("hexagon side theta%d = %r is not positive" % (i + 1, t))
    out = []
    for i in range(3):
        ti, tj, tk = theta[i], theta[(i + 1) % 3], theta[(i + 2) % 3]
        c = (math.cosh(ti) + math.cosh(tj) * math.cosh(tk)) / (
            math.sinh(tj) * math.sinh(tk))
        # c > 1 in exact arithmetic; rounding can dip below at huge sides
        out.append(math.acosh(max(c, 1.0)))
    return tuple(out)


def circle_packing_angles(geometry, r):
    """Angles of the triangle with lengths l_i = r_j + r_k; angle i sits at the
    vertex carrying radius r_i and faces l_i."""
    for i, ri in enumerate(r):
        if not (ri > 0):
            raise DomainError("radius r%d = %r is not positive" % (i + 1, ri))
    l = (r[1] + r[2], r[0] + r[2], r[0] + r[1])
    return angles_from_lengths(geometry, l)


def _metric_sin(geometry, t):
    if geometry is EUCLIDEAN:
        return t
    if geometry is HYPERBOLIC:
        return math.sinh(t)
    return math.sin(t)


def angle_jacobian(geometry, l):
    """3x3 matrix of d(theta_i)/d(l_j) for the triangle with side lengths l."""
    theta = angles_from_lengths(geometry, l)
    for t in theta:
        if math.sin(t) < DEGENERATE_SIN:
            raise DomainError("triangle too close to degenerate for derivatives",
                              angles=theta)
    J = np.zeros((3, 3))
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        d = _metric_sin(geometry, l[i]) / (
            math.sin(theta[i]) * _metric_sin(geometry, l[j]) * _metric_sin(geometry, l[k]))
        J[i, i] = d
        J[i, j] = -d * math.cos(theta[k])
        J[i, k] = -d * math.cos(theta[j])
    return J


def length_jacobian(geometry, theta):
    """3x3 matrix of d(l_i)/d(theta_j); hyperbolic and spherical only."""
    l = lengths_from_angles(geometry, theta)
    K = np.zeros((3, 3))
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        if geometry is HYPERBOLIC:
            d = -math.sin(theta[i]) / (
                math.sinh(l[i]) * math.sin(theta[j]) * math.sin(theta[k]))
            K[i, j] = d * math.cosh(l[k])
            K[i, k] = d * math.cosh(l[j])
        else:
            d = math.sin(theta[i]) / (
                math.sin(l[i]) * math.sin(theta[j]) * math.sin(theta[k]))
            K[i, j] = d * math.cos(l[k])
            K[i, k] = d * math.cos(l[j])
        K[i, i] = d
    return K


def hexagon_jacobian(theta):
    """3x3 matrix of d(l_i)/d(theta_j) for the right-angled hexagon map."""
    l = hexagon_lengths(theta)
    if min(l) <= 0:
        raise DomainError("degenerate hexagon: an opposite side underflowed to 0 "
                          "for theta %r" % (tuple(theta),))
    J = np.zeros((3, 3))
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        d = math.sinh(theta[i]) / (
            math.sinh(l[i]) * math.sinh(theta[j]) * math.sinh(theta[k]))
        J[i, i] = d
        J[i, j] = -d * math.cosh(l[k])
        J[i, k] = -d * math.cosh(l[j])
    return J


def area_quantity(x):
    """Sine-law numerator A = sin(y_1)*sin(x_2)*sin(x_3) of the spherical
    cosine-law chart at the input triple x (the angle triple of a spherical
    triangle), with the residual of its quadratic identity
    A^2 = 1 - cos^2 x1 - cos^2 x2 - cos^2 x3 - 2 cos x1 cos x2 cos x3."""
    y = lengths_from_angles(SPHERICAL, x)
    A = math.sin(y[0]) * math.sin(x[1]) * math.sin(x[2])
    c1, c2, c3 = (math.cos(t) for t in x)
    rhs = 1 - c1 * c1 - c2 * c2 - c3 * c3 - 2 * c1 * c2 * c3
    return A, abs(A * A - rhs)


@dataclass(frozen=True)
class TriangleData:
    """A triangle: lengths with their opposite angles, optionally packing radii."""
    geometry: Geometry
    lengths: tuple
    angles: tuple
    radii: tuple = None

    @staticmethod
    def from_lengths(geometry, l):
        return TriangleData(geometry, tuple(l), angles_from_lengths(geometry, l))

    @staticmethod
    def from_radii(geometry, r):
        l = (r[1] + r[2], r[0] + r[2], r[0] + r[1])
        return TriangleData(geometry, l, angles_from_lengths(geometry, l), tuple(r))

    @staticmethod
    def from_angles(geometry, theta):
        return TriangleData(geometry, lengths_from_angles(geometry, theta), tuple(theta))


@dataclass(frozen=True)
class HexagonData:
    """Right-angled hexagon: alternating sides `theta` and the opposite triple."""
    theta: tuple
    lengths: tuple
    radii: tuple = None

    @staticmethod
    def from_sides(theta):
        return HexagonData(tuple(theta), hexagon_lengths(theta))


def sine_tangent_laws(data):
    """Spread (max-min) of the sine-law and tangent-law ratios; both are 0 in
    exact arithmetic."""
    if isinstance(data, HexagonData):
        th, l = data.theta, data.lengths
        rho = [(th[(i + 1) % 3] + th[(i + 2) % 3] - th[i]) / 2 for i in range(3)]
        sine = [math.sinh(l[i]) / math.sinh(th[i]) for i in range(3)]
        tangent = [(1 / math.tanh(l[i] / 2)) / math.cosh(rho[i]) for i in range(3)]
    else:
        l, th = data.lengths, data.angles
        rho = [(th[(i + 1) % 3] + th[(i + 2) % 3] - th[i]) / 2 for i in range(3)]
        if data.geometry is EUCLIDEAN:
            sine = [math.sin(th[i]) / l[i] for i in range(3)]
            tangent = [l[i] / math.cos(rho[i]) for i in range(3)]
        elif data.geometry is HYPERBOLIC:
            sine = [math.sin(th[i]) / math.sinh(l[i]) for i in range(3)]
            tangent = [math.tanh(l[i] / 2) / math.cos(rho[i]) for i in range(3)]
        else:
            sine = [math.sin(th[i]) / math.sin(l[i]) for i in range(3)]
            tangent = [math.tan(l[i] / 2) / math.cos(rho[i]) for i in range(3)]
    return {"sine": max(sine) - min(sine), "tangent": max(tangent) - min(tangent)}


# ---- batch forms (arrays shaped (..., 3)); no per-triangle error reporting ----

def _rolled(X):
    return X, np.roll(X, -1, axis=-1), np.roll(X, -2, axis=-1)


def batch_angles(geometry, L, check=True):
    li, lj, lk = _rolled(np.asarray(L, float))
    if geometry is EUCLIDEAN:
        c = (lj * lj + lk * lk - li * li) / (2 * lj * lk)
    elif geometry is HYPERBOLIC:
        c = (np.cosh(lj) * np.cosh(lk) - np.cosh(li)) / (np.sinh(lj) * np.sinh(lk))
    else:
        c = (np.cos(li) - np.cos(lj) * np.cos(lk)) / (np.sin(lj) * np.sin(lk))
    if check and np.any(np.abs(c) > 1.0 + ACOS_GUARD):
        raise DomainError("degenerate triangle in batch")
    return np.arccos(np.clip(c, -1.0 + ACOS_CLAMP, 1.0 - ACOS_CLAMP))


def batch_lengths(geometry, TH, check=True):
    ti, tj, tk = _rolled(np.asarray(TH, float))
    c = (np.cos(ti) + np.cos(tj) * np.cos(tk)) / (np.sin(tj) * np.sin(tk))
    if geometry is HYPERBOLIC:
        if check and np.any(c < 1.0 - ACOS_GUARD):
            raise DomainError("angle triple outside the hyperbolic domain in batch")
        return np.arccosh(np.maximum(c, 1.0))
    if check and np.any(np.abs(c) > 1.0 + ACOS_GUARD):
        raise DomainError("angle triple outside the spherical domain in batch")
    return np.arccos(np.clip(c, -1.0 + ACOS_CLAMP, 1.0 - ACOS_CLAMP))


def batch_hexagon(TH):
    ti, tj, tk = _rolled(np.asarray(TH, float))
    c = (np.cosh(ti) + np.cosh(tj) * np.cosh(tk)) / (np.sinh(tj) * np.sinh(tk))
    return np.arccosh(c)
