"""Abstract syntax of call-by-push-value types and terms.

Values never reduce; computations may. The grammar includes the product
constructs (unit, value pairs, computation pairs) together with the
recursion (``Rec``) and nondeterminism (``Fail``, ``Or``) extensions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class Unit:
    def __str__(self) -> str:
        return "unit"


@dataclass(frozen=True)
class Bool:
    def __str__(self) -> str:
        return "bool"


@dataclass(frozen=True)
class Prod:
    left: ValueType
    right: ValueType

    def __str__(self) -> str:
        return f"(* {self.left} {self.right})"


@dataclass(frozen=True)
class U:
    """Thunk type: values that suspend a computation of type ``comp``."""

    comp: CompType

    def __str__(self) -> str:
        return f"(U {self.comp})"


@dataclass(frozen=True)
class F:
    """Returner type: computations that return a value of type ``value``."""

    value: ValueType

    def __str__(self) -> str:
        return f"(F {self.value})"


@dataclass(frozen=True)
class Arrow:
    arg: ValueType
    result: CompType

    def __str__(self) -> str:
        return f"(-> {self.arg} {self.result})"


@dataclass(frozen=True)
class CProd:
    left: CompType
    right: CompType

    def __str__(self) -> str:
        return f"(& {self.left} {self.right})"


ValueType = Union[Unit, Bool, Prod, U]
CompType = Union[F, Arrow, CProd]

UNIT = Unit()
BOOL = Bool()


# --------------------------------------------------------------- values


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class UnitVal:
    pass


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Pair:
    left: ValueTerm
    right: ValueTerm


@dataclass(frozen=True)
class Thunk:
    body: CompTerm


ValueTerm = Union[Var, UnitVal, BoolLit, Pair, Thunk]

TRUE = BoolLit(True)
FALSE = BoolLit(False)
UNIT_VAL = UnitVal()


# --------------------------------------------------------- computations


@dataclass(frozen=True)
class Lam:
    var: str
    ty: ValueType
    body: CompTerm


@dataclass(frozen=True)
class Push:
    """Application ``V ' M``: push the argument ``arg`` onto ``fn``."""

    arg: ValueTerm
    fn: CompTerm


@dataclass(frozen=True)
class Return:
    value: ValueTerm


@dataclass(frozen=True)
class To:
    """Sequencing ``M to x. N``."""

    first: CompTerm
    var: str
    then: CompTerm


@dataclass(frozen=True)
class If:
    cond: ValueTerm
    then: CompTerm
    orelse: CompTerm


@dataclass(frozen=True)
class Force:
    value: ValueTerm


@dataclass(frozen=True)
class CompPair:
    left: CompTerm
    right: CompTerm


@dataclass(frozen=True)
class Proj:
    index: int
    body: CompTerm

    def __post_init__(self) -> None:
        if self.index not in (1, 2):
            raise ValueError(f"projection index must be 1 or 2, got {self.index}")


@dataclass(frozen=True)
class MatchPair:
    value: ValueTerm
    left: str
    right: str
    body: CompTerm


@dataclass(frozen=True)
class Rec:
    """Fixed point: ``var`` is bound to a thunk of the whole computation."""

    var: str
    ty: CompType
    body: CompTerm


@dataclass(frozen=True)
class Fail:
    ty: CompType


@dataclass(frozen=True)
class Or:
    left: CompTerm
    right: CompTerm


CompTerm = Union[Lam, Push, Return, To, If, Force, CompPair, Proj, MatchPair, Rec, Fail, Or]
Term = Union[ValueTerm, CompTerm]

TERMINAL_TYPES = (Lam, Return, CompPair)


def is_terminal(m: CompTerm) -> bool:
    """Terminal computations carry an introduction form on the outside."""
    return isinstance(m, TERMINAL_TYPES)


def free_vars(t: Term) -> frozenset[str]:
    """Free variables, memoised on the (immutable) node."""
    try:
        return t.__dict__["_fv"]
    except KeyError:
        pass
    out = _free_vars(t)
    object.__setattr__(t, "_fv", out)
    return out


def _free_vars(t: Term) -> frozenset[str]:
    match t:
        case Var(name):
            return frozenset((name,))
        case UnitVal() | BoolLit() | Fail():
            return frozenset()
        case Pair(a, b) | CompPair(a, b) | Or(a, b) | Push(a, b):
            return free_vars(a) | free_vars(b)
        case Thunk(m) | Return(m) | Force(m) | Proj(_, m):
            return free_vars(m)
        case Lam(x, _, body) | Rec(x, _, body):
            return free_vars(body) - {x}
        case To(m, x, n):
            return free_vars(m) | (free_vars(n) - {x})
        case If(v, m1, m2):
            return free_vars(v) | free_vars(m1) | free_vars(m2)
        case MatchPair(v, x1, x2, body):
            return free_vars(v) | (free_vars(body) - {x1, x2})
    raise TypeError(f"not a CBPV term: {t!r}")


def size(t: Term) -> int:
    """Number of syntax nodes (types not counted)."""
    match t:
        case Var() | UnitVal() | BoolLit() | Fail():
            return 1
        case Pair(a, b) | CompPair(a, b) | Or(a, b) | Push(a, b) | To(a, _, b):
            return 1 + size(a) + size(b)
        case Thunk(m) | Return(m) | Force(m) | Proj(_, m) | Lam(_, _, m) | Rec(_, _, m):
            return 1 + size(m)
        case If(v, m1, m2):
            return 1 + size(v) + size(m1) + size(m2)
        case MatchPair(v, _, _, body):
            return 1 + size(v) + size(body)
    raise TypeError(f"not a CBPV term: {t!r}")


def uses_effects(m: Term) -> set[str]:
    """Names of the effect constructs ('rec', 'fail', 'or') occurring in ``m``."""
    found: set[str] = set()

    def walk(t: Term) -> None:
        match t:
            case Rec(_, _, body):
                found.add("rec")
                walk(body)
            case Fail():
                found.add("fail")
            case Or(a, b):
                found.add("or")
                walk(a)
                walk(b)
            case Var() | UnitVal() | BoolLit():
                pass
            case Pair(a, b) | CompPair(a, b) | Push(a, b) | To(a, _, b):
                walk(a)
                walk(b)
            case Thunk(x) | Return(x) | Force(x) | Proj(_, x) | Lam(_, _, x):
                walk(x)
            case If(v, m1, m2):
                walk(v)
                walk(m1)
                walk(m2)
            case MatchPair(v, _, _, body):
                walk(v)
                walk(body)

    walk(m)
    return found
