"""
Exception hierarchy shared by every module.
InputError subclasses map to CLI exit status 2, CapExceededError to 3.
"""

from typing import Optional, Tuple


class GroupRepError(Exception):
    """Base class for all toolkit errors"""


# ============= INPUT ERRORS =============
class InputError(GroupRepError):
    """The caller handed us something malformed"""


class ParseError(InputError):
    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        where = ''
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class ValidationError(InputError):
    def __init__(self, message: str, witness: Optional[Tuple[int, ...]] = None):
        self.witness = witness
        super().__init__(message)


class DegreeMismatchError(InputError):
    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"degree mismatch: expected {expected}, got {got}")


class NotATreeError(InputError):
    pass


class NotAnOrbitError(InputError):
    pass


class NotSolvableError(InputError):
    pass


# ============= RESOURCE ERRORS =============
class CapExceededError(GroupRepError):
    def __init__(self, cap: str, limit: int, size: int):
        self.cap = cap
        self.limit = limit
        self.size = size
        super().__init__(f"{cap} exceeded: {size} > {limit}")


# ============= INTERNAL ERRORS =============
class RootingError(GroupRepError):
    """Neither a fixed vertex nor a fixed edge was found; contradicts the tree structure"""
