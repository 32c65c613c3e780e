from typing import Optional


class LabError(Exception):
    """Base class for every error the lab raises on purpose."""

    def to_dict(self) -> dict:
        return {"error": type(self).__name__, "message": str(self)}


class InvalidArgumentError(LabError, ValueError):
    pass


class UnsupportedParameterError(LabError, ValueError):
    pass


class OutOfDomainError(LabError, ValueError):
    pass


class ResourceLimitError(LabError, RuntimeError):
    pass


class ScenarioError(LabError, ValueError):
    """Invalid scenario file or inline flags. `field` is a dotted path such as `tuner.kappa`."""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message)
        self.field = field

    def to_dict(self) -> dict:
        data = super().to_dict()
        if self.field:
            data["field"] = self.field
        return data

    @classmethod
    def from_validation_error(cls, exc, prefix: str = "") -> "ScenarioError":
        """Build from a pydantic ValidationError, keeping the first failing location."""
        errors = exc.errors()
        if not errors:
            return cls(str(exc), prefix or None)
        first = errors[0]
        loc = ".".join(str(part) for part in first.get("loc", ()))
        field = ".".join(p for p in (prefix, loc) if p) or None
        return cls(first.get("msg", str(exc)), field)


class ReportWriteError(LabError, OSError):
    def __init__(self, path, cause: Exception):
        super().__init__(f"Could not write report to {path}: {cause}")
        self.path = str(path)
        self.cause = cause
