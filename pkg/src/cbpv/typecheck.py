"""Syntax-directed type checking for CBPV values and computations."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import DuplicateVariable, EffectNotAllowed, TypeMismatch, UnboundVariable
from .syntax import (
    BOOL, UNIT, Arrow, BoolLit, CompPair, CompTerm, CompType, CProd, F, Fail, Force, If,
    Lam, MatchPair, Or, Pair, Prod, Proj, Push, Rec, Return, Thunk, To, U, UnitVal,
    ValueTerm, ValueType, Var, uses_effects,
)


class EffectSignature(enum.Enum):
    """Which effect constructs a term may use."""

    PURE = "pure"
    DIV = "div"
    NONDET = "nondet"

    def allows(self, construct: str) -> bool:
        if construct == "rec":
            return self is EffectSignature.DIV
        if construct in ("fail", "or"):
            return self is EffectSignature.NONDET
        return True

    @classmethod
    def parse(cls, text: str) -> "EffectSignature":
        try:
            return cls(text.lower())
        except ValueError:
            raise ValueError(f"unknown effect signature {text!r}") from None


PURE = EffectSignature.PURE
DIV = EffectSignature.DIV
NONDET = EffectSignature.NONDET


@dataclass(frozen=True)
class TypingContext:
    """Ordered list of distinct variables with their value types."""

    entries: tuple[tuple[str, ValueType], ...] = ()

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for name, _ in self.entries:
            if name in seen:
                raise DuplicateVariable(name)
            seen.add(name)

    @classmethod
    def of(cls, pairs: Iterable[tuple[str, ValueType]]) -> "TypingContext":
        return cls(tuple(pairs))

    def lookup(self, name: str) -> ValueType | None:
        for n, ty in reversed(self.entries):
            if n == name:
                return ty
        return None

    def extend(self, name: str, ty: ValueType) -> "TypingContext":
        # A binder that reuses a name shadows the outer entry; the outer one is
        # dropped so the no-duplicates invariant survives.
        kept = tuple(e for e in self.entries if e[0] != name)
        return TypingContext(kept + ((name, ty),))

    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.entries)

    def __iter__(self) -> Iterator[tuple[str, ValueType]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        return "(" + " ".join(f"({n} {t})" for n, t in self.entries) + ")"


EMPTY = TypingContext()


def _ctx(ctx) -> TypingContext:
    if isinstance(ctx, TypingContext):
        return ctx
    return TypingContext.of(ctx)


def check_value(ctx, v: ValueTerm, sig: EffectSignature = PURE, path: tuple[str, ...] = ()) -> ValueType:
    """Return the type of ``v`` in ``ctx``; thunk bodies are checked under ``sig``."""
    ctx = _ctx(ctx)
    match v:
        case Var(name):
            ty = ctx.lookup(name)
            if ty is None:
                raise UnboundVariable(name, path)
            return ty
        case UnitVal():
            return UNIT
        case BoolLit():
            return BOOL
        case Pair(a, b):
            return Prod(check_value(ctx, a, sig, path + ("pair.1",)),
                        check_value(ctx, b, sig, path + ("pair.2",)))
        case Thunk(m):
            return U(check_comp(ctx, m, sig, path + ("thunk",)))
    raise TypeError(f"not a value term: {v!r}")


def check_comp(ctx, m: CompTerm, sig: EffectSignature = PURE, path: tuple[str, ...] = ()) -> CompType:
    """Return the unique computation type of ``m`` in ``ctx`` under ``sig``."""
    ctx = _ctx(ctx)
    match m:
        case Lam(x, ty, body):
            return Arrow(ty, check_comp(ctx.extend(x, ty), body, sig, path + ("lam",)))
        case Push(arg, fn):
            a = check_value(ctx, arg, sig, path + ("push.arg",))
            ft = check_comp(ctx, fn, sig, path + ("push.fn",))
            if not isinstance(ft, Arrow):
                raise TypeMismatch(f"pushing onto a computation of type {ft}", path)
            if ft.arg != a:
                raise TypeMismatch(f"argument has type {a}, function expects {ft.arg}", path)
            return ft.result
        case Return(v):
            return F(check_value(ctx, v, sig, path + ("return",)))
        case To(first, x, then):
            ft = check_comp(ctx, first, sig, path + ("to.1",))
            if not isinstance(ft, F):
                raise TypeMismatch(f"sequencing a computation of type {ft}", path)
            return check_comp(ctx.extend(x, ft.value), then, sig, path + ("to.2",))
        case If(cond, then, orelse):
            ct = check_value(ctx, cond, sig, path + ("if.cond",))
            if ct != BOOL:
                raise TypeMismatch(f"condition has type {ct}", path)
            t1 = check_comp(ctx, then, sig, path + ("if.then",))
            t2 = check_comp(ctx, orelse, sig, path + ("if.else",))
            if t1 != t2:
                raise TypeMismatch(f"branches have types {t1} and {t2}", path)
            return t1
        case Force(v):
            vt = check_value(ctx, v, sig, path + ("force",))
            if not isinstance(vt, U):
                raise TypeMismatch(f"forcing a value of type {vt}", path)
            return vt.comp
        case CompPair(a, b):
            return CProd(check_comp(ctx, a, sig, path + ("cpair.1",)),
                         check_comp(ctx, b, sig, path + ("cpair.2",)))
        case Proj(i, body):
            bt = check_comp(ctx, body, sig, path + (f"proj{i}",))
            if not isinstance(bt, CProd):
                raise TypeMismatch(f"projecting from a computation of type {bt}", path)
            return bt.left if i == 1 else bt.right
        case MatchPair(v, x1, x2, body):
            vt = check_value(ctx, v, sig, path + ("match.value",))
            if not isinstance(vt, Prod):
                raise TypeMismatch(f"matching a value of type {vt}", path)
            if x1 == x2:
                raise DuplicateVariable(x1)
            inner = ctx.extend(x1, vt.left).extend(x2, vt.right)
            return check_comp(inner, body, sig, path + ("match.body",))
        case Rec(x, ty, body):
            if not sig.allows("rec"):
                raise EffectNotAllowed(sig, "rec", path)
            bt = check_comp(ctx.extend(x, U(ty)), body, sig, path + ("rec",))
            if bt != ty:
                raise TypeMismatch(f"recursive body has type {bt}, annotation says {ty}", path)
            return ty
        case Fail(ty):
            if not sig.allows("fail"):
                raise EffectNotAllowed(sig, "fail", path)
            return ty
        case Or(a, b):
            if not sig.allows("or"):
                raise EffectNotAllowed(sig, "or", path)
            t1 = check_comp(ctx, a, sig, path + ("or.1",))
            t2 = check_comp(ctx, b, sig, path + ("or.2",))
            if t1 != t2:
                raise TypeMismatch(f"choices have types {t1} and {t2}", path)
            return t1
    raise TypeError(f"not a computation term: {m!r}")


def infer_sig(m) -> EffectSignature:
    """Smallest signature admitting the effect constructs used by ``m``."""
    used = uses_effects(m)
    if "rec" in used and used & {"fail", "or"}:
        raise ValueError("term mixes recursion with nondeterminism")
    if "rec" in used:
        return DIV
    if used:
        return NONDET
    return PURE
