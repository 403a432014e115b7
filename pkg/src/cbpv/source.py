"""Source lambda-language, its typing, and translations into CBPV.

Three translations are provided: call-by-value (pairs and applications
evaluate left to right), call-by-name, and a call-by-value variant that
evaluates pairs right to left. Auxiliary variables come from ``fresh``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import DuplicateVariable, EffectNotAllowed, TypeMismatch, UnboundVariable
from .subst import fresh
from .syntax import (
    BOOL, FALSE, TRUE, UNIT, UNIT_VAL, Arrow, CompPair, CompTerm, CompType, CProd, F,
    Fail, Force, If, Lam, MatchPair, Or, Pair, Prod, Proj, Push, Rec, Return, Thunk, To,
    U, ValueType, Var,
)
from .typecheck import DIV, NONDET, PURE, EffectSignature, TypingContext


# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class SUnit:
    def __str__(self) -> str:
        return "unit"


@dataclass(frozen=True)
class SBool:
    def __str__(self) -> str:
        return "bool"


@dataclass(frozen=True)
class SProd:
    left: SrcType
    right: SrcType

    def __str__(self) -> str:
        return f"(* {self.left} {self.right})"


@dataclass(frozen=True)
class SArrow:
    arg: SrcType
    result: SrcType

    def __str__(self) -> str:
        return f"(-> {self.arg} {self.result})"


SrcType = Union[SUnit, SBool, SProd, SArrow]

S_UNIT = SUnit()
S_BOOL = SBool()


def type_depth(t: SrcType) -> int:
    match t:
        case SUnit() | SBool():
            return 0
        case SProd(a, b) | SArrow(a, b):
            return 1 + max(type_depth(a), type_depth(b))
    raise TypeError(f"not a source type: {t!r}")


# ---------------------------------------------------------- expressions


@dataclass(frozen=True)
class SVar:
    name: str


@dataclass(frozen=True)
class SUnitVal:
    pass


@dataclass(frozen=True)
class SBoolLit:
    value: bool


@dataclass(frozen=True)
class SPair:
    left: SrcExpr
    right: SrcExpr


@dataclass(frozen=True)
class SFst:
    body: SrcExpr


@dataclass(frozen=True)
class SSnd:
    body: SrcExpr


@dataclass(frozen=True)
class SIf:
    cond: SrcExpr
    then: SrcExpr
    orelse: SrcExpr


@dataclass(frozen=True)
class SLam:
    var: str
    ty: SrcType
    body: SrcExpr


@dataclass(frozen=True)
class SApp:
    fn: SrcExpr
    arg: SrcExpr


@dataclass(frozen=True)
class SRecFun:
    """Recursive function ``rec f x. body`` of type ``arg -> result``."""

    fname: str
    arg: SrcType
    result: SrcType
    var: str
    body: SrcExpr


@dataclass(frozen=True)
class SFail:
    ty: SrcType


@dataclass(frozen=True)
class SOr:
    left: SrcExpr
    right: SrcExpr


SrcExpr = Union[SVar, SUnitVal, SBoolLit, SPair, SFst, SSnd, SIf, SLam, SApp, SRecFun, SFail, SOr]

STRUE = SBoolLit(True)
SFALSE = SBoolLit(False)
SUNIT = SUnitVal()


def omega(ty: SrcType) -> SrcExpr:
    """The diverging expression ``(rec f x. f x) false`` at type ``ty``."""
    return SApp(SRecFun("f", S_BOOL, ty, "x", SApp(SVar("f"), SVar("x"))), SFALSE)


def src_free_vars(e: SrcExpr) -> frozenset[str]:
    match e:
        case SVar(name):
            return frozenset((name,))
        case SUnitVal() | SBoolLit() | SFail():
            return frozenset()
        case SPair(a, b) | SApp(a, b) | SOr(a, b):
            return src_free_vars(a) | src_free_vars(b)
        case SFst(a) | SSnd(a):
            return src_free_vars(a)
        case SIf(c, a, b):
            return src_free_vars(c) | src_free_vars(a) | src_free_vars(b)
        case SLam(x, _, body):
            return src_free_vars(body) - {x}
        case SRecFun(f, _, _, x, body):
            return src_free_vars(body) - {f, x}
    raise TypeError(f"not a source expression: {e!r}")


def src_size(e: SrcExpr) -> int:
    match e:
        case SVar() | SUnitVal() | SBoolLit() | SFail():
            return 1
        case SPair(a, b) | SApp(a, b) | SOr(a, b):
            return 1 + src_size(a) + src_size(b)
        case SFst(a) | SSnd(a) | SLam(_, _, a) | SRecFun(_, _, _, _, a):
            return 1 + src_size(a)
        case SIf(c, a, b):
            return 1 + src_size(c) + src_size(a) + src_size(b)
    raise TypeError(f"not a source expression: {e!r}")


def src_effects(e: SrcExpr) -> set[str]:
    found: set[str] = set()

    def walk(t: SrcExpr) -> None:
        match t:
            case SRecFun(_, _, _, _, body):
                found.add("rec")
                walk(body)
            case SFail():
                found.add("fail")
            case SOr(a, b):
                found.add("or")
                walk(a)
                walk(b)
            case SPair(a, b) | SApp(a, b):
                walk(a)
                walk(b)
            case SFst(a) | SSnd(a) | SLam(_, _, a):
                walk(a)
            case SIf(c, a, b):
                walk(c)
                walk(a)
                walk(b)

    walk(e)
    return found


def src_sig(e: SrcExpr) -> EffectSignature:
    """Smallest signature admitting the effect constructs used by ``e``."""
    used = src_effects(e)
    if "rec" in used and used & {"fail", "or"}:
        raise ValueError("expression mixes recursion with nondeterminism")
    if "rec" in used:
        return DIV
    return NONDET if used else PURE


# --------------------------------------------------------------- typing


@dataclass(frozen=True)
class SrcContext:
    """Ordered source typing context without duplicate names."""

    entries: tuple[tuple[str, SrcType], ...] = ()

    def __post_init__(self) -> None:
        names = [n for n, _ in self.entries]
        for i, n in enumerate(names):
            if n in names[:i]:
                raise DuplicateVariable(n)

    @classmethod
    def of(cls, pairs) -> "SrcContext":
        return cls(tuple(pairs))

    def lookup(self, name: str) -> SrcType | None:
        for n, t in reversed(self.entries):
            if n == name:
                return t
        return None

    def extend(self, name: str, ty: SrcType) -> "SrcContext":
        kept = tuple(e for e in self.entries if e[0] != name)
        return SrcContext(kept + ((name, ty),))

    def __iter__(self):
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        return "(" + " ".join(f"({n} {t})" for n, t in self.entries) + ")"


def _sctx(ctx) -> SrcContext:
    return ctx if isinstance(ctx, SrcContext) else SrcContext.of(ctx)


def check_src(ctx, e: SrcExpr, sig: EffectSignature = PURE, path: tuple[str, ...] = ()) -> SrcType:
    """Type of ``e`` under the simply-typed rules plus the effect extensions."""
    ctx = _sctx(ctx)
    match e:
        case SVar(name):
            t = ctx.lookup(name)
            if t is None:
                raise UnboundVariable(name, path)
            return t
        case SUnitVal():
            return S_UNIT
        case SBoolLit():
            return S_BOOL
        case SPair(a, b):
            return SProd(check_src(ctx, a, sig, path + ("pair.1",)),
                         check_src(ctx, b, sig, path + ("pair.2",)))
        case SFst(a) | SSnd(a):
            which = "fst" if isinstance(e, SFst) else "snd"
            t = check_src(ctx, a, sig, path + (which,))
            if not isinstance(t, SProd):
                raise TypeMismatch(f"{which} of an expression of type {t}", path)
            return t.left if which == "fst" else t.right
        case SIf(c, a, b):
            ct = check_src(ctx, c, sig, path + ("if.cond",))
            if ct != S_BOOL:
                raise TypeMismatch(f"condition has type {ct}", path)
            t1 = check_src(ctx, a, sig, path + ("if.then",))
            t2 = check_src(ctx, b, sig, path + ("if.else",))
            if t1 != t2:
                raise TypeMismatch(f"branches have types {t1} and {t2}", path)
            return t1
        case SLam(x, ty, body):
            return SArrow(ty, check_src(ctx.extend(x, ty), body, sig, path + ("lam",)))
        case SApp(fn, arg):
            ft = check_src(ctx, fn, sig, path + ("app.fn",))
            at = check_src(ctx, arg, sig, path + ("app.arg",))
            if not isinstance(ft, SArrow):
                raise TypeMismatch(f"applying an expression of type {ft}", path)
            if ft.arg != at:
                raise TypeMismatch(f"argument has type {at}, function expects {ft.arg}", path)
            return ft.result
        case SRecFun(f, a, r, x, body):
            if not sig.allows("rec"):
                raise EffectNotAllowed(sig, "rec", path)
            if f == x:
                raise DuplicateVariable(f)
            inner = ctx.extend(f, SArrow(a, r)).extend(x, a)
            bt = check_src(inner, body, sig, path + ("rec",))
            if bt != r:
                raise TypeMismatch(f"recursive body has type {bt}, annotation says {r}", path)
            return SArrow(a, r)
        case SFail(ty):
            if not sig.allows("fail"):
                raise EffectNotAllowed(sig, "fail", path)
            return ty
        case SOr(a, b):
            if not sig.allows("or"):
                raise EffectNotAllowed(sig, "or", path)
            t1 = check_src(ctx, a, sig, path + ("or.1",))
            t2 = check_src(ctx, b, sig, path + ("or.2",))
            if t1 != t2:
                raise TypeMismatch(f"choices have types {t1} and {t2}", path)
            return t1
    raise TypeError(f"not a source expression: {e!r}")


# ----------------------------------------------------- type translations


def cbv_type(t: SrcType) -> ValueType:
    match t:
        case SUnit():
            return UNIT
        case SBool():
            return BOOL
        case SProd(a, b):
            return Prod(cbv_type(a), cbv_type(b))
        case SArrow(a, b):
            return U(Arrow(cbv_type(a), F(cbv_type(b))))
    raise TypeError(f"not a source type: {t!r}")


def cbn_type(t: SrcType) -> CompType:
    match t:
        case SUnit():
            return F(UNIT)
        case SBool():
            return F(BOOL)
        case SProd(a, b):
            return CProd(cbn_type(a), cbn_type(b))
        case SArrow(a, b):
            return Arrow(U(cbn_type(a)), cbn_type(b))
    raise TypeError(f"not a source type: {t!r}")


def cbv_ctx(ctx) -> TypingContext:
    return TypingContext.of((x, cbv_type(t)) for x, t in _sctx(ctx))


def cbn_ctx(ctx) -> TypingContext:
    return TypingContext.of((x, U(cbn_type(t))) for x, t in _sctx(ctx))


# ------------------------------------------------------ term translations


def cbv_translate(e: SrcExpr) -> CompTerm:
    """Call-by-value translation; pairs and applications run left to right."""
    return _by_value(e, right_to_left=False)


def rtl_translate(e: SrcExpr) -> CompTerm:
    """Call-by-value translation that evaluates pair components right to left."""
    return _by_value(e, right_to_left=True)


def _by_value(e: SrcExpr, right_to_left: bool) -> CompTerm:
    def go(t: SrcExpr) -> CompTerm:
        match t:
            case SVar(name):
                return Return(Var(name))
            case SUnitVal():
                return Return(UNIT_VAL)
            case SBoolLit(b):
                return Return(TRUE if b else FALSE)
            case SPair(a, b):
                z1, z2 = fresh("z"), fresh("z")
                pair = Return(Pair(Var(z1), Var(z2)))
                if right_to_left:
                    return To(go(b), z2, To(go(a), z1, pair))
                return To(go(a), z1, To(go(b), z2, pair))
            case SFst(a) | SSnd(a):
                z, z1, z2 = fresh("z"), fresh("z"), fresh("z")
                pick = z1 if isinstance(t, SFst) else z2
                return To(go(a), z, MatchPair(Var(z), z1, z2, Return(Var(pick))))
            case SIf(c, a, b):
                z = fresh("z")
                return To(go(c), z, If(Var(z), go(a), go(b)))
            case SLam(x, ty, body):
                return Return(Thunk(Lam(x, cbv_type(ty), go(body))))
            case SApp(fn, arg):
                y, z = fresh("y"), fresh("z")
                return To(go(fn), y, To(go(arg), z, Push(Var(z), Force(Var(y)))))
            case SRecFun(f, a, r, x, body):
                ty = Arrow(cbv_type(a), F(cbv_type(r)))
                return Return(Thunk(Rec(f, ty, Lam(x, cbv_type(a), go(body)))))
            case SFail(ty):
                return Fail(F(cbv_type(ty)))
            case SOr(a, b):
                return Or(go(a), go(b))
        raise TypeError(f"not a source expression: {t!r}")

    return go(e)


def cbn_translate(e: SrcExpr) -> CompTerm:
    """Call-by-name translation; variables force, arguments are thunked."""
    match e:
        case SVar(name):
            return Force(Var(name))
        case SUnitVal():
            return Return(UNIT_VAL)
        case SBoolLit(b):
            return Return(TRUE if b else FALSE)
        case SPair(a, b):
            return CompPair(cbn_translate(a), cbn_translate(b))
        case SFst(a):
            return Proj(1, cbn_translate(a))
        case SSnd(a):
            return Proj(2, cbn_translate(a))
        case SIf(c, a, b):
            z = fresh("z")
            return To(cbn_translate(c), z, If(Var(z), cbn_translate(a), cbn_translate(b)))
        case SLam(x, ty, body):
            return Lam(x, U(cbn_type(ty)), cbn_translate(body))
        case SApp(fn, arg):
            return Push(Thunk(cbn_translate(arg)), cbn_translate(fn))
        case SRecFun(f, a, r, x, body):
            ty = Arrow(U(cbn_type(a)), cbn_type(r))
            return Rec(f, ty, Lam(x, U(cbn_type(a)), cbn_translate(body)))
        case SFail(ty):
            return Fail(cbn_type(ty))
        case SOr(a, b):
            return Or(cbn_translate(a), cbn_translate(b))
    raise TypeError(f"not a source expression: {e!r}")


STRATEGIES = {"cbv": cbv_translate, "cbn": cbn_translate, "rtl": rtl_translate}
