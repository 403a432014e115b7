"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class CBPVError(Exception):
    pass


class TypingError(CBPVError):
    """Base for typing failures; ``path`` locates the offending subterm."""

    def __init__(self, message: str, path: tuple[str, ...] = ()):
        self.path = tuple(path)
        where = "/".join(self.path) or "<root>"
        super().__init__(f"{message} (at {where})")


class UnboundVariable(TypingError):
    def __init__(self, name: str, path: tuple[str, ...] = ()):
        self.name = name
        super().__init__(f"unbound variable {name!r}", path)


class TypeMismatch(TypingError):
    pass


class DuplicateVariable(TypingError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"variable {name!r} appears twice in a typing context")


class EffectNotAllowed(TypingError):
    def __init__(self, sig, construct: str, path: tuple[str, ...] = ()):
        self.sig = sig
        self.construct = construct
        super().__init__(f"{construct!r} is not allowed under signature {sig.value}", path)


class IllTyped(CBPVError):
    """A precondition requiring a well-typed input was violated."""


class ParseError(CBPVError):
    pass


class SizeBudgetExceeded(CBPVError):
    def __init__(self, what: str, size: int | None, budget: int):
        self.what = what
        self.size = size
        self.budget = budget
        if size is None:
            super().__init__(f"{what}: carrier exceeds the budget of {budget} elements")
        else:
            super().__init__(f"{what}: carrier has {size} elements, budget is {budget}")


class EffectUnsupported(CBPVError):
    def __init__(self, model: str, construct: str):
        self.model = model
        self.construct = construct
        super().__init__(f"model {model!r} cannot interpret {construct!r}")
