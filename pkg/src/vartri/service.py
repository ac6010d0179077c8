"""HTTP service exposing the library: one POST endpoint per operation.

Domain/mesh/solve errors map to 422, infeasibility verdicts from the solver
map to 409; both carry the machine-readable error payload.
"""

from typing import List, Optional

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import curvature as curvmod
from . import jsonio, suites
from .errors import InfeasibleTargetError, VartriError
from .mesh import IdealSurface
from .solver import (SolverConfig, feasibility_check, solve_circle_packing,
                     solve_hexagon_metric)


class CheckRequest(BaseModel):
    mesh: dict
    metric: Optional[dict] = None


class CurvatureRequest(BaseModel):
    mesh: dict
    metric: dict
    kind: str = "k"
    h: float = 0.0
    rivin_normalization: bool = False


class SolveOptions(BaseModel):
    max_iterations: int = 100
    gradient_tolerance: float = 1e-12
    initial: Optional[dict] = None
    trace: bool = False

    def to_config(self):
        return SolverConfig(max_iterations=self.max_iterations,
                            gradient_tolerance=self.gradient_tolerance,
                            initial=self.initial, trace=self.trace)


class PackRequest(BaseModel):
    mesh: dict
    geometry: str
    target: dict
    h: float = 0.0
    config: Optional[SolveOptions] = None


class TeichRequest(BaseModel):
    mesh: dict
    target: dict
    h: float = 0.0
    config: Optional[SolveOptions] = None


class FeasibleRequest(BaseModel):
    mesh: dict
    geometry: str = "hyperbolic"
    target: dict
    samples: Optional[int] = None
    seed: int = 0


class VerifyRequest(BaseModel):
    suites: Optional[List[str]] = None
    seed: int = 0
    samples: Optional[int] = None
    threads: Optional[int] = None


def _surface_report(s):
    return {"vertices": s.vertex_count, "edges": len(s.edges),
            "triangles": len(s.triangles), "mode": s.mode,
            "euler_characteristic": s.vertex_count - len(s.edges) + len(s.triangles),
            "boundary_edges": [e.key for e in s.boundary_edges()]}


def create_app():
    app = FastAPI(title="vartri", version="1.0.0")

    @app.exception_handler(InfeasibleTargetError)
    def _infeasible(request, exc):
        return JSONResponse(status_code=409, content=exc.payload())

    @app.exception_handler(VartriError)
    def _domain(request, exc):
        return JSONResponse(status_code=422, content=exc.payload())

    @app.post("/check")
    def check(req: CheckRequest):
        s = jsonio.mesh_from_json(req.mesh)
        report = {"mesh": _surface_report(s)}
        if req.metric is not None:
            hexagonal = not s.is_closed and "radii" not in req.metric
            m = jsonio.metric_from_json(s, req.metric, hexagon=hexagonal)
            if hexagonal:
                report["metric"] = {"kind": "hexagon",
                                    "edges": len(m.edge_lengths),
                                    "hexagons": len(m.arcs)}
            else:
                angles = curvmod._all_angles(s, m)
                report["metric"] = {
                    "kind": "radii" if isinstance(m, curvmod.CirclePacking)
                            else "edge_lengths",
                    "geometry": m.geometry.name,
                    "min_angle": min(min(a) for a in angles),
                    "max_angle": max(max(a) for a in angles)}
                if s.is_closed:
                    report["metric"]["delaunay"] = curvmod.is_delaunay(s, m)
        return report

    @app.post("/curvature")
    def curvature(req: CurvatureRequest):
        s = jsonio.mesh_from_json(req.mesh)
        hexagonal = not s.is_closed and "radii" not in req.metric
        m = jsonio.metric_from_json(s, req.metric, hexagon=hexagonal)
        if hexagonal:
            vec = curvmod.hexagon_psi_curvature(IdealSurface(s), m, req.h)
        elif req.kind == "k":
            vec = curvmod.kh_curvature(s, m, req.h)
        elif req.kind == "phi":
            vec = curvmod.phi_curvature(s, m, req.h,
                                        rivin_normalization=req.rivin_normalization)
        elif req.kind == "psi":
            vec = curvmod.psi_curvature(s, m, req.h)
        else:
            raise VartriError("unknown curvature kind %r" % req.kind)
        return vec.to_json()

    @app.post("/pack")
    def pack(req: PackRequest):
        s = jsonio.mesh_from_json(req.mesh)
        target = jsonio.target_from_json(req.target, kind="k", h=req.h)
        cfg = (req.config or SolveOptions()).to_config()
        result = solve_circle_packing(s, req.geometry, target, config=cfg)
        report = result.report()
        report["h"] = target.h
        report["geometry"] = req.geometry
        if result.trace is not None:
            report["trace"] = result.trace
        return report

    @app.post("/teich")
    def teich(req: TeichRequest):
        s = jsonio.mesh_from_json(req.mesh)
        ideal = IdealSurface(s)
        target = jsonio.target_from_json(req.target, kind="psi", h=req.h)
        cfg = (req.config or SolveOptions()).to_config()
        result = solve_hexagon_metric(ideal, target, config=cfg)
        report = result.report()
        report["h"] = target.h
        report["arcs"] = {str(t): list(b) for t, b in result.metric.arcs.items()}
        if result.trace is not None:
            report["trace"] = result.trace
        return report

    @app.post("/feasible")
    def feasible(req: FeasibleRequest):
        s = jsonio.mesh_from_json(req.mesh)
        target = jsonio.target_from_json(req.target, kind="k", h=0.0)
        verdict = feasibility_check(s, req.geometry, target,
                                    samples=req.samples, seed=req.seed)
        return verdict.to_json()

    @app.post("/verify")
    def verify(req: VerifyRequest):
        return suites.run_suites(req.suites, seed=req.seed,
                                 samples=req.samples, threads=req.threads)

    return app


app = create_app()
