"""Exception hierarchy shared by all layers of the engine."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Span:
    """Half-open character range ``[start, end)`` plus 1-based line/column of ``start``."""

    start: int
    end: int
    line: int = 1
    col: int = 1
    file: str | None = None

    def __str__(self) -> str:
        where = f"{self.file}:" if self.file else ""
        return f"{where}{self.line}:{self.col}"


class CGError(Exception):
    """Base class. ``span`` is attached when the error can be located in source."""

    def __init__(self, message: str, span: Span | None = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self) -> str:
        if self.span is not None:
            return f"{self.span}: {self.message}"
        return self.message


# -- syntax -----------------------------------------------------------------


class IllegalCharacter(CGError):
    pass


class ParseError(CGError):
    def __init__(self, message: str, span: Span | None = None, expected: tuple[str, ...] = ()):
        if expected:
            message = f"{message} (expected one of: {', '.join(expected)})"
        super().__init__(message, span)
        self.expected = expected


class DuplicateName(CGError):
    pass


# -- kernel -----------------------------------------------------------------


class KernelError(CGError):
    pass


class UnknownConstant(KernelError):
    def __init__(self, name: str, span: Span | None = None):
        super().__init__(f"unknown constant {name}", span)
        self.name = name


class AmbiguousName(KernelError):
    pass


class NotAFunction(KernelError):
    pass


class Unannotated(KernelError):
    pass


class TypeMismatch(KernelError):
    def __init__(self, actual, expected, span: Span | None = None, detail: str = ""):
        from .terms import show

        msg = f"type mismatch: got {show(actual)}, expected {show(expected)}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg, span)
        self.actual = actual
        self.expected = expected


class SortError(KernelError):
    """Raised when a type is demanded for ``type`` itself, or a non-type is used as a type."""


class CannotInfer(KernelError):
    def __init__(self, implicit: str, span: Span | None = None):
        super().__init__(f"cannot infer implicit argument {implicit}; supply it explicitly with @", span)
        self.implicit = implicit


class DepthExceeded(KernelError):
    pass


# -- theory graph -----------------------------------------------------------


class GraphError(CGError):
    pass


class IncludeCycle(GraphError):
    def __init__(self, path: list[str]):
        super().__init__("include cycle: " + " -> ".join(path))
        self.path = path


class UnknownTheory(GraphError):
    pass


class UnmappedConstant(GraphError):
    def __init__(self, qname: tuple[str, str], morphism: str = ""):
        where = f" by {morphism}" if morphism else ""
        super().__init__(f"constant {qname[0]}?{qname[1]} is not mapped{where}")
        self.qname = qname


class ObligationFailed(GraphError):
    def __init__(self, constant: str, expected, reason: str = ""):
        from .terms import show

        msg = f"obligation for {constant} failed: expected {show(expected)}"
        if reason:
            msg += f": {reason}"
        super().__init__(msg)
        self.constant = constant
        self.expected = expected


class EndpointMismatch(GraphError):
    pass


class NameClash(GraphError):
    pass


class NoMediator(GraphError):
    pass


# -- argumentation / analogy -------------------------------------------------


class SemanticsTooLarge(CGError):
    pass


class SearchBudgetExceeded(CGError):
    pass
