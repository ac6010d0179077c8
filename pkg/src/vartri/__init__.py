"""vartri: variational triangle geometry on surfaces.

Cosine-law kernels in the three constant-curvature geometries, the six
families of convex triangle energies, discrete curvature families on closed
and bordered triangulated surfaces, and Newton solvers for prescribed
curvature with polytope feasibility tests.
"""

from .curvature import (CirclePacking, CurvatureVector, HexagonMetric,
                        PolyhedralMetric, hexagon_psi_curvature, is_delaunay,
                        k0_curvature, kh_curvature, phi_curvature,
                        psi_curvature, total_area)
from .energy import (FAMILIES, EnergySpec, UCoordinates, closedness_residual,
                     triangle_energy, triangle_gradient, triangle_hessian,
                     u_coordinates, u_of_variable, variable_of_u)
from .errors import (DomainError, InfeasibleTargetError, MeshError, SolveError,
                     VartriError)
from .kernel import (EUCLIDEAN, HYPERBOLIC, SPHERICAL, Geometry, HexagonData,
                     TriangleData, angle_jacobian, angles_from_lengths,
                     area_quantity, circle_packing_angles, hexagon_jacobian,
                     hexagon_lengths, length_jacobian, lengths_from_angles,
                     sine_tangent_laws)
from .mesh import (IdealSurface, TriangulatedSurface, build_surface, edge_sides,
                   euler_characteristic, vertex_star)
from .solver import (FeasibilityVerdict, SolveResult, SolverConfig, SolveTarget,
                     curvature_jacobian, feasibility_check,
                     solve_circle_packing, solve_hexagon_metric, total_energy,
                     total_energy_gradient)
from .suites import run_suite, run_suites

__version__ = "0.1.0"

__all__ = [
    "EUCLIDEAN", "HYPERBOLIC", "SPHERICAL", "FAMILIES",
    "Geometry", "TriangleData", "HexagonData",
    "TriangulatedSurface", "IdealSurface",
    "PolyhedralMetric", "CirclePacking", "HexagonMetric", "CurvatureVector",
    "EnergySpec", "UCoordinates",
    "SolveTarget", "SolverConfig", "SolveResult", "FeasibilityVerdict",
    "VartriError", "MeshError", "DomainError", "SolveError",
    "InfeasibleTargetError",
    "build_surface", "euler_characteristic", "vertex_star", "edge_sides",
    "angles_from_lengths", "lengths_from_angles", "hexagon_lengths",
    "circle_packing_angles", "angle_jacobian", "length_jacobian",
    "hexagon_jacobian", "area_quantity", "sine_tangent_laws",
    "u_of_variable", "variable_of_u", "u_coordinates", "triangle_gradient",
    "triangle_hessian", "triangle_energy", "closedness_residual",
    "k0_curvature", "kh_curvature", "phi_curvature", "psi_curvature",
    "is_delaunay", "hexagon_psi_curvature", "total_area",
    "total_energy", "total_energy_gradient", "solve_circle_packing",
    "solve_hexagon_metric", "feasibility_check", "curvature_jacobian",
    "run_suite", "run_suites",
]
