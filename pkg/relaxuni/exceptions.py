"""RelaxUni Exceptions Module.

每个异常携带稳定的退出码，CLI 在失败时把 `to_dict()` 打印为 JSON 并以该退出码退出。
Every exception carries a stable exit code; on failure the CLI prints `to_dict()` as JSON and exits with it.
"""

from typing import Any, ClassVar


class RelaxUniError(Exception):
    """
    Base exception of the package.

    Attributes:
        message: Error message
        detail: Longer human-readable explanation (optional)
        context: Machine-readable details (offending node, face, edges, ...)
        exit_code: Process exit code used by the CLI
    """

    exit_code: ClassVar[int] = 1

    def __init__(self, message: str, detail: str | None = None, **context: Any) -> None:
        self.message = message
        self.detail = detail
        self.context: dict[str, Any] = context
        super().__init__(message)

    def to_dict(self) -> dict[str, Any]:
        """
        转换为可 JSON 序列化的字典 | Convert to a JSON-serializable dict

        Returns:
            dict: {"error", "message", "detail", "exit_code", "context"}
        """
        return {
            "error": type(self).__name__,
            "message": self.message,
            "detail": self.detail,
            "exit_code": self.exit_code,
            "context": {k: _jsonable(v) for k, v in self.context.items()},
        }


def _jsonable(value: Any) -> Any:
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset)):
        return [_jsonable(v) for v in value]
    return repr(value)


class ConfigError(RelaxUniError):
    """Strict config parsing failed (unknown keys, invalid values)."""

    exit_code = 2


class MissingInputError(RelaxUniError, FileNotFoundError):
    """A referenced input file does not exist."""

    exit_code = 3


class FormatError(RelaxUniError):
    """Malformed OFF / OBJ / trajectory / checkpoint file."""

    exit_code = 4


class ArgumentError(RelaxUniError, ValueError):
    """An argument value is outside its admissible range."""

    exit_code = 10


class DimensionError(RelaxUniError, ValueError):
    """
    Shape mismatch.

    When raised by the autodiff tape, `context["node_id"]` names the offending node.
    """

    exit_code = 11


class ContractError(RelaxUniError):
    """An operation's contract was violated (e.g. backward from a non-scalar loss)."""

    exit_code = 12


class DegreeError(RelaxUniError):
    """A graph node is isolated; `context["node"]` names it."""

    exit_code = 13


class UndefinedQuotientError(RelaxUniError):
    """The Rayleigh quotient of an all-zero feature matrix is undefined."""

    exit_code = 14


class GeometryError(RelaxUniError):
    """Degenerate mesh geometry; `context["face"]` names the face."""

    exit_code = 15


class RewiringError(RelaxUniError):
    """An intrinsic edge flip is impossible (non-flippable quad)."""

    exit_code = 16


class NonterminationError(RelaxUniError):
    """The edge-flip loop exceeded its iteration cap."""

    exit_code = 17


class PreconditionError(RelaxUniError):
    """
    A modeling precondition does not hold.

    Raised for meshes violating the Delaunay criterion without rewiring, and for operators
    with negative off-diagonal weights; `context["edges"]` lists the offending edges.
    """

    exit_code = 18


class NumericalError(RelaxUniError):
    """Singular solve, NaN gradient or non-finite value; context names the source."""

    exit_code = 19


class StabilityError(RelaxUniError):
    """Explicit time step violates the CFL bound; `context["max_dt"]` is the admissible step."""

    exit_code = 20


class LayerConfigurationError(RelaxUniError):
    """A layer is configured inconsistently with its definition (e.g. a real-valued separable unitary layer)."""

    exit_code = 21


class SpecError(RelaxUniError):
    """A model specification is invalid (incompatible widths, unknown kind)."""

    exit_code = 22


class SamplingError(RelaxUniError):
    """Monte-Carlo sampling met a non-finite target value; `context["point"]` is the sample."""

    exit_code = 23
