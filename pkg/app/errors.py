"""
Exception hierarchy shared by every module
"""

from typing import Any, Dict, Optional


class LambdaRLMError(Exception):
    """Base class for all runtime errors raised by the package."""

    def __init__(self, message: str, detail: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.detail = detail or {}

    def to_dict(self) -> Dict[str, Any]:
        """Machine-readable error object written by the CLI and the server."""
        return {
            "error": self.message,
            "type": type(self).__name__,
            "detail": self.detail,
        }


# lambda_core


class ExprSyntaxError(LambdaRLMError, SyntaxError):
    """Malformed λ-term source."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}", {"position": position})
        self.position = position


class FuelExhausted(LambdaRLMError):
    """Normalization ran out of steps; carries the partial reduction trace."""

    def __init__(self, trace: Any):
        super().__init__(
            f"fuel exhausted after {trace.fuel_used} steps",
            {"fuel_used": trace.fuel_used},
        )
        self.trace = trace


# combinator runtime


class InvalidSplit(LambdaRLMError):
    pass


class OutOfBounds(LambdaRLMError):
    pass


class EmptyReduce(LambdaRLMError):
    pass


class PlanInvalid(LambdaRLMError):
    pass


class ParseFailure(LambdaRLMError):
    """A leaf output violated the label record format."""

    def __init__(self, message: str, line: str = ""):
        super().__init__(message, {"line": line})
        self.line = line


# oracle


class OracleError(LambdaRLMError):
    """Any backend failure, tagged with the index of the failing call."""

    def __init__(self, message: str, call_index: Optional[int] = None, **detail: Any):
        super().__init__(message, {"call_index": call_index, **detail})
        self.call_index = call_index


class ContextOverflow(OracleError):
    pass


class OracleTimeout(OracleError):
    pass


class OracleHttpError(OracleError):
    pass


class MalformedResponse(OracleError):
    pass


# planner


class UnrecognizedTask(LambdaRLMError):
    pass


class InfeasibleAccuracy(LambdaRLMError):
    pass


# cli


class ConfigError(LambdaRLMError):
    pass
