"""Type-indexed term maps between the by-value and by-name translations.

``to_name`` turns a by-value computation of type ``F [t]v`` into a by-name
computation of type ``[t]n``; ``to_value`` goes the other way. They are
macros: they build syntax, with auxiliary variables from ``fresh``.
"""

from __future__ import annotations

import enum

from .errors import IllTyped, TypingError
from .source import (
    SArrow, SBool, SProd, SrcContext, SrcExpr, SrcType, SUnit, cbn_ctx, cbn_translate,
    cbn_type, cbv_ctx, cbv_type, check_src, src_sig,
)
from .subst import fresh, substitute
from .syntax import (
    F, CompPair, CompTerm, Force, Lam, MatchPair, Pair, Proj, Push, Return, Thunk, To, U,
    ValueTerm, Var,
)
from .typecheck import EffectSignature, check_comp, check_value, infer_sig


class MapDirection(enum.Enum):
    TO_NAME = "toname"
    TO_VALUE = "tovalue"


def to_name(ty: SrcType, m: CompTerm, ctx=None) -> CompTerm:
    """Run ``m`` and convert its result with ``to_name_hat``."""
    if ctx is not None:
        _expect_comp(ctx, m, F(cbv_type(ty)))
    x = fresh("x")
    return To(m, x, to_name_hat(ty, Var(x)))


def to_name_hat(ty: SrcType, v: ValueTerm, ctx=None) -> CompTerm:
    """Convert a by-value result ``v`` into a by-name computation."""
    if ctx is not None:
        _expect_value(ctx, v, cbv_type(ty))
    match ty:
        case SUnit() | SBool():
            return Return(v)
        case SProd(a, b):
            z1, z2 = fresh("z"), fresh("z")
            return MatchPair(v, z1, z2, CompPair(to_name_hat(a, Var(z1)), to_name_hat(b, Var(z2))))
        case SArrow(a, b):
            x, y, z = fresh("x"), fresh("y"), fresh("z")
            return Lam(x, U(cbn_type(a)),
                       To(to_value(a, Force(Var(x))), y,
                          To(Push(Var(y), Force(v)), z, to_name_hat(b, Var(z)))))
    raise TypeError(f"not a source type: {ty!r}")


def to_value(ty: SrcType, n: CompTerm, ctx=None) -> CompTerm:
    """Convert a by-name computation into a by-value computation."""
    if ctx is not None:
        _expect_comp(ctx, n, cbn_type(ty), by_name=True)
    match ty:
        case SUnit() | SBool():
            return n
        case SProd(a, b):
            z1, z2 = fresh("z"), fresh("z")
            return To(to_value(a, Proj(1, n)), z1,
                      To(to_value(b, Proj(2, n)), z2, Return(Pair(Var(z1), Var(z2)))))
        case SArrow(a, b):
            x = fresh("x")
            return Return(Thunk(Lam(x, cbv_type(a),
                                    to_value(b, Push(Thunk(to_name_hat(a, Var(x))), n)))))
    raise TypeError(f"not a source type: {ty!r}")


def ctx_thunk_subst(ctx) -> dict[str, ValueTerm]:
    """Substitution ``x ↦ thunk (to_name_hat t x)`` for each ``x : t`` in ``ctx``."""
    ctx = ctx if isinstance(ctx, SrcContext) else SrcContext.of(ctx)
    return {x: Thunk(to_name_hat(t, Var(x))) for x, t in ctx}


def rhs_term(ctx, e: SrcExpr, ty: SrcType | None = None, sig: EffectSignature | None = None) -> CompTerm:
    """The by-value-typed image of the by-name translation of ``e``.

    The result has the same typing as the by-value translation of ``e``.
    """
    ctx = ctx if isinstance(ctx, SrcContext) else SrcContext.of(ctx)
    try:
        found = check_src(ctx, e, sig if sig is not None else src_sig(e))
    except TypingError as exc:
        raise IllTyped(str(exc)) from exc
    if ty is not None and ty != found:
        raise IllTyped(f"expression has type {found}, not {ty}")
    return to_value(found, substitute(cbn_translate(e), ctx_thunk_subst(ctx)))


def _expect_comp(ctx, m: CompTerm, want, by_name: bool = False) -> None:
    ctx = _cbpv_ctx(ctx, by_name)
    try:
        got = check_comp(ctx, m, infer_sig(m))
    except (TypingError, ValueError) as exc:
        raise IllTyped(str(exc)) from exc
    if got != want:
        raise IllTyped(f"expected a computation of type {want}, got {got}")


def _expect_value(ctx, v: ValueTerm, want) -> None:
    ctx = _cbpv_ctx(ctx, by_name=False)
    try:
        got = check_value(ctx, v, infer_sig(v))
    except (TypingError, ValueError) as exc:
        raise IllTyped(str(exc)) from exc
    if got != want:
        raise IllTyped(f"expected a value of type {want}, got {got}")


def _cbpv_ctx(ctx, by_name: bool):
    if isinstance(ctx, SrcContext):
        return cbn_ctx(ctx) if by_name else cbv_ctx(ctx)
    return ctx
