"""Exception hierarchy shared across the package.

Every error carries a machine-readable ``kind`` so the service layer and the
CLI can map failures to stable error payloads and exit codes.
"""

from __future__ import annotations


class MetaplecticError(Exception):
    kind = "error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.message = message
        self.details = details

    def payload(self) -> dict:
        out = {"kind": self.kind, "message": self.message}
        if self.details:
            out["details"] = {k: repr(v) for k, v in self.details.items()}
        return out


class ParseError(MetaplecticError):
    kind = "parse"

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        details = {}
        if line is not None:
            details["line"] = line
        if field is not None:
            details["field"] = field
        super().__init__(message, **details)
        self.line = line
        self.field = field


class ValidationError(MetaplecticError):
    kind = "validation"


class ObstructionPresent(MetaplecticError):
    kind = "obstruction"


class PoleAt(MetaplecticError):
    kind = "pole"

    def __init__(self, s):
        super().__init__(f"expression has a pole at s={s}", s=s)
        self.s = s


class NotASublattice(ValidationError):
    pass


class InvalidCartan(ValidationError):
    pass


class AxiomViolation(ValidationError):
    pass


class NotWeylInvariant(ValidationError):
    pass


class NotSameQ(ValidationError):
    pass


class InvalidPsiData(ValidationError):
    pass


class NotCentral(ValidationError):
    pass


class NotInYQn(ValidationError):
    pass


class NotReduced(ValidationError):
    pass


class NonIntegralLevel(ValidationError):
    pass


class WrongHypothesis(ValidationError):
    pass
