from __future__ import annotations


class MetacspError(Exception):
    """Base class for domain failures raised by this package."""


class SpecError(MetacspError, ValueError):
    def __init__(self, message: str, pair: tuple | None = None):
        super().__init__(message)
        self.pair = pair


class WordSyntaxError(MetacspError, ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class NotInBError(MetacspError, ValueError):
    def __init__(self, reason: str):
        super().__init__(f"vector is not in B ({reason})")
        self.reason = reason


class NotConjugateError(MetacspError, ValueError):
    pass


class SingularError(MetacspError, ValueError):
    pass
