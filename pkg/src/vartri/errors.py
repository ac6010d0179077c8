"""Exception types shared across the library."""


class VartriError(Exception):
    """Base class; carries a machine-readable payload for the CLI/service."""

    kind = "error"

    def __init__(self, message, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def payload(self):
        out = {"error": self.kind, "message": self.message}
        if self.details:
            out["details"] = self.details
        return out


class MeshError(VartriError):
    """Invalid combinatorics: non-manifold edges, dangling vertices, bad indices."""

    kind = "mesh"


class DomainError(VartriError):
    """Geometric or analytic domain violation (degenerate triangle, bad h, ...)."""

    kind = "domain"


class SolveError(VartriError):
    """Newton failure that is not an infeasibility diagnosis."""

    kind = "solve"


class InfeasibleTargetError(VartriError):
    """Target outside the achievable set; carries the diagnosis/witness."""

    kind = "infeasible"

    def __init__(self, message, diagnosis=None, **details):
        super().__init__(message, **details)
        self.diagnosis = diagnosis or {}

    def payload(self):
        out = super().payload()
        out["diagnosis"] = self.diagnosis
        return out
