"""Machine-readable diagnostics collected during a run."""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Dict, Optional

from .errors import DScribeError

ERROR = "error"
WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    location: str
    code: str
    message: str

    @classmethod
    def from_error(cls, exc: DScribeError, location: Optional[str] = None, severity: str = ERROR) -> "Diagnostic":
        message = exc.message
        if exc.placeholder:
            message = f"placeholder ${exc.placeholder}$: {message}"
        return cls(
            severity=severity,
            location=location or exc.location or "",
            code=exc.code,
            message=message,
        )

    @classmethod
    def warning(cls, location: str, code: str, message: str) -> "Diagnostic":
        return cls(severity=WARNING, location=location, code=code, message=message)

    def to_dict(self) -> Dict[str, str]:
        return asdict(self)

    def format(self) -> str:
        where = f"{self.location}: " if self.location else ""
        return f"{self.severity}: {where}{self.code}: {self.message}"
