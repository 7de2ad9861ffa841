"""Domain errors. Each carries a JSON-friendly payload for the CLI."""


class BigonkitError(Exception):
    """Base class for domain errors (CLI exit code 1)."""

    kind = "Error"

    def __init__(self, message="", **payload):
        super().__init__(message or self.kind)
        self.message = message or self.kind
        self.payload = payload

    def to_json(self):
        out = {"error": self.kind, "message": self.message}
        out.update(self.payload)
        return out


class HypothesisViolated(BigonkitError):
    kind = "HypothesisViolated"


class NonTransverse(BigonkitError):
    kind = "NonTransverse"


class NotHomotopic(BigonkitError):
    kind = "NotHomotopic"


class NotFreelyHomotopic(BigonkitError):
    kind = "NotFreelyHomotopic"


class Inessential(BigonkitError):
    kind = "Inessential"


class ConstraintConflict(BigonkitError):
    kind = "ConstraintConflict"


class NonGenericProjection(BigonkitError):
    kind = "NonGenericProjection"


class Collision(BigonkitError):
    kind = "Collision"


class GeneralPositionError(BigonkitError):
    kind = "GeneralPosition"


class InputError(ValueError):
    """Malformed input (CLI exit code 2)."""
