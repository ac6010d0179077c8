import math

import numpy as np
import pytest

from vartri import kernel
from vartri.errors import DomainError
from vartri.kernel import (EUCLIDEAN, HYPERBOLIC, SPHERICAL, HexagonData,
                           TriangleData, angle_jacobian, angles_from_lengths,
                           area_quantity, circle_packing_angles,
                           hexagon_jacobian, hexagon_lengths, length_jacobian,
                           lengths_from_angles, sine_tangent_laws)

HALF_PI = math.pi / 2


def test_euclidean_equilateral():
    th = angles_from_lengths(EUCLIDEAN, (1.0, 1.0, 1.0))
    assert th == pytest.approx((math.pi / 3,) * 3, abs=1e-15)


def test_euclidean_right_triangle():
    th = angles_from_lengths(EUCLIDEAN, (3.0, 4.0, 5.0))
    assert th[2] == pytest.approx(HALF_PI, abs=1e-15)
    assert sum(th) == pytest.approx(math.pi, abs=1e-14)


def test_octant_triangle():
    th = angles_from_lengths(SPHERICAL, (HALF_PI,) * 3)
    assert th == pytest.approx((HALF_PI,) * 3, abs=1e-15)
    assert lengths_from_angles(SPHERICAL, (HALF_PI,) * 3) == \
        pytest.approx((HALF_PI,) * 3, abs=1e-15)


def test_hyperbolic_angle_sum_to_pi_as_triangle_shrinks():
    prev = 0.0
    for t in (1.0, 0.3, 0.1, 0.03, 0.01):
        total = sum(angles_from_lengths(HYPERBOLIC, (t, t, t)))
        assert prev < total < math.pi
        prev = total
    assert math.pi - total < 1e-4


def test_degenerate_triangle_rejected():
    with pytest.raises(DomainError):
        angles_from_lengths(EUCLIDEAN, (1.0, 1.0, 2.0))
    with pytest.raises(DomainError):
        angles_from_lengths(SPHERICAL, (3.0, 3.0, 1.0))  # perimeter over 2*pi
    with pytest.raises(DomainError):
        angles_from_lengths(HYPERBOLIC, (1.0, -1.0, 1.0))


def test_hyperbolic_lengths_from_angles_roundtrip():
    th = (math.pi / 6,) * 3
    l = lengths_from_angles(HYPERBOLIC, th)
    assert l[0] == pytest.approx(l[1]) == pytest.approx(l[2])
    back = angles_from_lengths(HYPERBOLIC, l)
    assert back == pytest.approx(th, abs=1e-10)


def test_lengths_from_angles_domain():
    with pytest.raises(DomainError):
        lengths_from_angles(HYPERBOLIC, (HALF_PI, HALF_PI, HALF_PI))
    with pytest.raises(DomainError):
        lengths_from_angles(SPHERICAL, (0.2, 0.2, 0.2))  # angle sum below pi
    with pytest.raises(DomainError):
        lengths_from_angles(EUCLIDEAN, (0.5, 0.5, 0.5))


def test_hexagon_fixed_point():
    t = math.acosh(2.0)
    assert hexagon_lengths((t, t, t)) == pytest.approx((t, t, t), abs=1e-14)


def test_hexagon_involution(rng):
    for _ in range(20):
        th = tuple(rng.uniform(0.3, 2.5, 3))
        assert hexagon_lengths(hexagon_lengths(th)) == pytest.approx(th, rel=1e-12)


def test_hexagon_side_collapse_blows_up_opposites():
    base = hexagon_lengths((0.5, 0.8, 0.9))
    for eps in (1e-2, 1e-4, 1e-6):
        l = hexagon_lengths((eps, 0.8, 0.9))
        assert l[1] > base[1] and l[2] > base[2]
    assert min(l[1], l[2]) > 10


def test_hexagon_monotone_decreasing():
    l1 = hexagon_lengths((0.5, 0.6, 0.7))
    l2 = hexagon_lengths((1.0, 1.1, 1.2))
    assert all(b < a for a, b in zip(l1, l2))


def test_circle_packing_angles_equilateral_scale_free():
    for r in (0.1, 1.0, 17.0):
        assert circle_packing_angles(EUCLIDEAN, (r, r, r)) == \
            pytest.approx((math.pi / 3,) * 3, abs=1e-15)


def test_circle_packing_angle_faces_its_radius():
    a = circle_packing_angles(EUCLIDEAN, (2.0, 1.0, 1.0))
    l = (2.0, 3.0, 3.0)  # l_i = r_j + r_k
    assert a == pytest.approx(angles_from_lengths(EUCLIDEAN, l))
    assert a[0] < a[1] == pytest.approx(a[2])


def test_packing_angle_limits_hyperbolic():
    # big own radius starves the angle; tiny own radius opens it to pi
    assert circle_packing_angles(HYPERBOLIC, (40.0, 1.0, 1.0))[0] < 1e-5
    assert circle_packing_angles(HYPERBOLIC, (1e-8, 1.0, 1.0))[0] > math.pi - 1e-3


def _fd_jacobian(fn, x, step=1e-6):
    cols = []
    for j in range(3):
        e = np.zeros(3)
        e[j] = step
        cols.append((np.asarray(fn(tuple(x + e))) -
                     np.asarray(fn(tuple(x - e)))) / (2 * step))
    return np.column_stack(cols)


@pytest.mark.parametrize("geometry,l", [
    (EUCLIDEAN, (1.0, 1.1, 0.9)),
    (HYPERBOLIC, (0.7, 0.8, 0.6)),
    (SPHERICAL, (0.8, 0.9, 1.0)),
])
def test_angle_jacobian_matches_fd(geometry, l):
    J = angle_jacobian(geometry, l)
    F = _fd_jacobian(lambda x: angles_from_lengths(geometry, x), np.array(l))
    assert np.max(np.abs(J - F)) < 1e-6 * max(1.0, np.max(np.abs(J)))


def test_angle_jacobian_euclidean_scale_invariance():
    # angles are 0-homogeneous in the lengths: J @ l = 0; at the equilateral
    # point that is the plain row sum
    J = angle_jacobian(EUCLIDEAN, (1.0, 1.0, 1.0))
    assert np.max(np.abs(J.sum(axis=1))) < 1e-12
    l = np.array([1.0, 1.2, 0.8])
    assert np.max(np.abs(angle_jacobian(EUCLIDEAN, tuple(l)) @ l)) < 1e-12


def test_angle_jacobian_octant_is_identity():
    J = angle_jacobian(SPHERICAL, (HALF_PI,) * 3)
    assert np.max(np.abs(J - np.eye(3))) < 1e-14


@pytest.mark.parametrize("th", [(0.4, 0.5, 0.6), (0.3, 0.9, 1.4)])
def test_length_jacobian_matches_fd(th):
    J = length_jacobian(HYPERBOLIC, th)
    F = _fd_jacobian(lambda x: lengths_from_angles(HYPERBOLIC, x), np.array(th))
    assert np.max(np.abs(J - F)) < 1e-6 * max(1.0, np.max(np.abs(J)))


def test_hexagon_jacobian_matches_fd():
    th = (0.6, 0.9, 1.3)
    J = hexagon_jacobian(th)
    F = _fd_jacobian(hexagon_lengths, np.array(th))
    assert np.max(np.abs(J - F)) < 1e-6 * max(1.0, np.max(np.abs(J)))
    assert np.all(np.diag(J) > 0)
    assert np.all(J[~np.eye(3, dtype=bool)] < 0)


def test_area_quantity_octant():
    A, res = area_quantity((HALF_PI,) * 3)
    assert A == pytest.approx(1.0, abs=1e-15)
    assert res < 1e-15


def test_area_quantity_random_and_rotation(rng):
    for _ in range(50):
        p = rng.uniform(0.15, 0.45, 3)   # l_i = p_j + p_k keeps triangles fat
        l = (p[1] + p[2], p[0] + p[2], p[0] + p[1])
        x = angles_from_lengths(SPHERICAL, l)
        A, res = area_quantity(x)
        assert A > 0 and res < 1e-12
        A2, _ = area_quantity((x[1], x[2], x[0]))
        assert A2 == pytest.approx(A, rel=1e-12)


def test_sine_tangent_laws_exact():
    d = sine_tangent_laws(TriangleData.from_lengths(EUCLIDEAN, (3.0, 4.0, 5.0)))
    assert d["sine"] < 1e-15 and d["tangent"] < 1e-12
    d = sine_tangent_laws(TriangleData.from_lengths(SPHERICAL, (0.8, 0.9, 1.0)))
    assert max(d.values()) < 1e-12
    t = math.acosh(2.0)
    d = sine_tangent_laws(HexagonData.from_sides((t, t, t)))
    assert max(d.values()) < 1e-12


def test_batch_helpers_match_scalars(rng):
    L = rng.uniform(0.5, 1.0, (10, 3))
    L = L @ np.array([[0., 1., 1.], [1., 0., 1.], [1., 1., 0.]])
    TH = kernel.batch_angles(HYPERBOLIC, L)
    for row_l, row_t in zip(L, TH):
        assert tuple(row_t) == pytest.approx(
            angles_from_lengths(HYPERBOLIC, tuple(row_l)), rel=1e-14)
