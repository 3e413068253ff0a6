"""Error hierarchy shared by every stage of the generator."""

from __future__ import annotations

from typing import Optional


class DScribeError(ValueError):
    """Base class for all recoverable generator errors.

    `location` names the file, template or invocation the error belongs to and
    `placeholder` the placeholder whose value failed a check, when known.
    """

    def __init__(self, message: str, location: Optional[str] = None, placeholder: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.location = location
        self.placeholder = placeholder

    @property
    def code(self) -> str:
        return type(self).__name__

    def __str__(self) -> str:
        text = self.message
        if self.placeholder:
            text = f"placeholder ${self.placeholder}$: {text}"
        if self.location:
            text = f"{self.location}: {text}"
        return text


class SourceSyntaxError(DScribeError):
    """Declaration structure or delimiters could not be recognized."""

    def __init__(self, message: str, line: int = 0, column: int = 0, location: Optional[str] = None):
        super().__init__(f"{message} (line {line}, column {column})", location=location)
        self.line = line
        self.column = column


# source model
class DuplicateType(DScribeError):
    pass


class CyclicHierarchy(DScribeError):
    pass


class UnresolvedType(DScribeError):
    pass


class UnknownHierarchy(DScribeError):
    pass


class FocalMethodNotFound(DScribeError):
    pass


class AmbiguousFocalMethod(DScribeError):
    pass


# template catalog
class MissingTypesAnnotation(DScribeError):
    pass


class MalformedAnnotation(DScribeError):
    pass


class DuplicateTemplateName(DScribeError):
    pass


class BadPlaceholderType(DScribeError):
    pass


class UnusedPlaceholder(DScribeError):
    pass


class MalformedDescription(DScribeError):
    pass


# invocations
class SchemaError(DScribeError):
    pass


class UnsupportedVersion(DScribeError):
    pass


class UnknownTemplate(DScribeError):
    pass


class MissingPlaceholderValue(DScribeError):
    pass


class ExtraPlaceholderValue(DScribeError):
    pass


# placeholder typing
class NotThrowable(DScribeError):
    pass


class BadIdentifier(DScribeError):
    pass


class ExprSyntaxError(DScribeError):
    def __init__(self, message: str, offset: int = 0, location: Optional[str] = None):
        super().__init__(f"{message} at offset {offset}", location=location)
        self.offset = offset


# generation
class ResyntaxError(DScribeError):
    pass


class GuardError(DScribeError):
    pass


class ConfigError(DScribeError):
    pass
