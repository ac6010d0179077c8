"""Command-line front end.

All commands are thin clients of the HTTP service: by default the requests run
against an in-process app; --server points them at a remote instance instead.
Exit codes: 0 success, 1 error or failed verification, 2 infeasible target.
"""

import argparse
import asyncio
import sys

import httpx

from . import jsonio
from .errors import VartriError
from .suites import SUITE_NAMES


def _post(server, path, payload):
    async def go():
        if server:
            async with httpx.AsyncClient(base_url=server, timeout=600.0) as client:
                r = await client.post(path, json=payload)
                return r.status_code, r.json()
        from .service import create_app
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(transport=transport, timeout=600.0,
                                     base_url="http://vartri.internal") as client:
            r = await client.post(path, json=payload)
            return r.status_code, r.json()
    return asyncio.run(go())


def _emit(doc, output):
    text = jsonio.dumps(doc) + "\n"
    if output and output != "-":
        with open(output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _build_parser():
    ap = argparse.ArgumentParser(
        prog="vartri",
        description="discrete curvature toolkit: curvature reports, "
                    "prescribed-curvature solves, feasibility checks")
    ap.add_argument("--server", metavar="URL",
                    help="base URL of a running service (default: in-process)")
    ap.add_argument("-o", "--output", metavar="PATH",
                    help="write the JSON report to PATH instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a mesh and optionally a metric")
    p.add_argument("mesh")
    p.add_argument("metric", nargs="?")

    p = sub.add_parser("curvature", help="evaluate a curvature family")
    p.add_argument("--kind", default="k", choices=("k", "phi", "psi"))
    p.add_argument("--h", type=float, default=0.0)
    p.add_argument("--rivin-normalization", action="store_true",
                   help="report 2*pi - a - a' for phi at h = 0")
    p.add_argument("mesh")
    p.add_argument("metric")

    p = sub.add_parser("pack", help="solve for a circle packing with "
                                    "prescribed vertex curvature")
    p.add_argument("--geometry", required=True, choices=("euclidean", "hyperbolic"))
    p.add_argument("--h", type=float, default=0.0)
    p.add_argument("--target", required=True, metavar="PATH")
    p.add_argument("--max-iterations", type=int, default=100)
    p.add_argument("--tolerance", type=float, default=1e-12)
    p.add_argument("--trace", action="store_true")
    p.add_argument("mesh")

    p = sub.add_parser("teich", help="solve for a hexagon metric with "
                                     "prescribed edge curvature")
    p.add_argument("--h", type=float, default=0.0)
    p.add_argument("--target", required=True, metavar="PATH")
    p.add_argument("--max-iterations", type=int, default=100)
    p.add_argument("--tolerance", type=float, default=1e-12)
    p.add_argument("--trace", action="store_true")
    p.add_argument("mesh")

    p = sub.add_parser("feasible", help="test vertex-curvature targets against "
                                        "the packing inequalities")
    p.add_argument("--geometry", default="hyperbolic",
                   choices=("euclidean", "hyperbolic"))
    p.add_argument("--samples", type=int, default=None,
                   help="sample this many subsets instead of enumerating")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("mesh")
    p.add_argument("target")

    p = sub.add_parser("verify", help="run the randomized self-check suites")
    p.add_argument("suites", nargs="*", metavar="suite",
                   help="subset of: %s (default all)" % ", ".join(SUITE_NAMES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--threads", type=int, default=None)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return ap


def _request_for(args):
    if args.command == "check":
        payload = {"mesh": jsonio.load(args.mesh)}
        if args.metric:
            payload["metric"] = jsonio.load(args.metric)
        return "/check", payload
    if args.command == "curvature":
        return "/curvature", {"mesh": jsonio.load(args.mesh),
                              "metric": jsonio.load(args.metric),
                              "kind": args.kind, "h": args.h,
                              "rivin_normalization": args.rivin_normalization}
    if args.command == "pack":
        return "/pack", {"mesh": jsonio.load(args.mesh),
                         "geometry": args.geometry,
                         "target": jsonio.load(args.target), "h": args.h,
                         "config": {"max_iterations": args.max_iterations,
                                    "gradient_tolerance": args.tolerance,
                                    "trace": args.trace}}
    if args.command == "teich":
        return "/teich", {"mesh": jsonio.load(args.mesh),
                          "target": jsonio.load(args.target), "h": args.h,
                          "config": {"max_iterations": args.max_iterations,
                                     "gradient_tolerance": args.tolerance,
                                     "trace": args.trace}}
    if args.command == "feasible":
        return "/feasible", {"mesh": jsonio.load(args.mesh),
                             "geometry": args.geometry,
                             "target": jsonio.load(args.target),
                             "samples": args.samples, "seed": args.seed}
    return "/verify", {"suites": list(args.suites) or None, "seed": args.seed,
                       "samples": args.samples, "threads": args.threads}


def main(argv=None):
    args = _build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn
        uvicorn.run("vartri.service:app", host=args.host, port=args.port)
        return 0
    try:
        path, payload = _request_for(args)
    except VartriError as exc:
        _emit(exc.payload(), args.output)
        return 1
    except OSError as exc:
        _emit({"error": "io", "message": str(exc)}, args.output)
        return 1
    status, body = _post(args.server, path, payload)
    _emit(body, args.output)
    if status == 200:
        if args.command == "feasible" and not body.get("feasible", False):
            return 2
        if args.command == "verify" and not body.get("pass", False):
            return 1
        return 0
    return 2 if status == 409 else 1


if __name__ == "__main__":
    sys.exit(main())
