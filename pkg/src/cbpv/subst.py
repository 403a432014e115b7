"""Fresh names and capture-avoiding simultaneous substitution."""

from __future__ import annotations

import itertools
import re
from collections.abc import Mapping

from .syntax import (
    BoolLit, CompPair, Fail, Force, If, Lam, MatchPair, Or, Pair, Proj, Push, Rec,
    Return, Term, Thunk, To, UnitVal, ValueTerm, Var, free_vars,
)

_counter = itertools.count(1)
_SUFFIX = re.compile(r"#\d+$")


def fresh(base: str = "v") -> str:
    """Return ``base#N`` for the next value of a process-wide counter.

    Hand-written names should avoid ``#``; the parser still accepts it so
    that printed terms read back. Any earlier ``#N`` suffix on ``base`` is
    dropped.
    """
    return f"{_SUFFIX.sub('', base) or 'v'}#{next(_counter)}"


def reset_fresh(start: int = 1) -> None:
    """Restart the fresh-name counter (golden tests pin generated names)."""
    global _counter
    _counter = itertools.count(start)


def substitute(t: Term, binding: Mapping[str, ValueTerm]) -> Term:
    """Simultaneously replace free variables of ``t`` according to ``binding``.

    Binders that would capture a free variable of a substituted value are
    renamed to fresh names.
    """
    if not binding:
        return t
    fv_cache: dict[int, frozenset[str]] = {}

    def fv_of(value: ValueTerm) -> frozenset[str]:
        key = id(value)
        if key not in fv_cache:
            fv_cache[key] = free_vars(value)
        return fv_cache[key]

    return _subst(t, dict(binding), fv_of)


def _enter(binders: tuple[str, ...], body: Term, sub: dict, fv_of) -> tuple[tuple[str, ...], dict]:
    """Adjust ``sub`` for descending under ``binders`` into ``body``."""
    inner = {k: v for k, v in sub.items() if k not in binders}
    if not inner:
        return binders, inner
    live = free_vars(body) & inner.keys()
    danger: set[str] = set()
    for name in live:
        danger |= fv_of(inner[name])
    renamed = []
    for b in binders:
        if b in danger:
            new = fresh(b)
            inner[b] = Var(new)
            renamed.append(new)
        else:
            renamed.append(b)
    return tuple(renamed), inner


def _subst(t: Term, sub: dict, fv_of) -> Term:
    if not sub or sub.keys().isdisjoint(free_vars(t)):
        return t
    match t:
        case Var(name):
            return sub.get(name, t)
        case UnitVal() | BoolLit() | Fail():
            return t
        case Pair(a, b):
            return Pair(_subst(a, sub, fv_of), _subst(b, sub, fv_of))
        case Thunk(m):
            return Thunk(_subst(m, sub, fv_of))
        case Return(v):
            return Return(_subst(v, sub, fv_of))
        case Force(v):
            return Force(_subst(v, sub, fv_of))
        case Push(v, m):
            return Push(_subst(v, sub, fv_of), _subst(m, sub, fv_of))
        case CompPair(a, b):
            return CompPair(_subst(a, sub, fv_of), _subst(b, sub, fv_of))
        case Or(a, b):
            return Or(_subst(a, sub, fv_of), _subst(b, sub, fv_of))
        case Proj(i, m):
            return Proj(i, _subst(m, sub, fv_of))
        case If(v, m1, m2):
            return If(_subst(v, sub, fv_of), _subst(m1, sub, fv_of), _subst(m2, sub, fv_of))
        case Lam(x, ty, body):
            (x2,), inner = _enter((x,), body, sub, fv_of)
            return Lam(x2, ty, _subst(body, inner, fv_of))
        case Rec(x, ty, body):
            (x2,), inner = _enter((x,), body, sub, fv_of)
            return Rec(x2, ty, _subst(body, inner, fv_of))
        case To(m, x, n):
            (x2,), inner = _enter((x,), n, sub, fv_of)
            return To(_subst(m, sub, fv_of), x2, _subst(n, inner, fv_of))
        case MatchPair(v, x1, x2, body):
            (y1, y2), inner = _enter((x1, x2), body, sub, fv_of)
            return MatchPair(_subst(v, sub, fv_of), y1, y2, _subst(body, inner, fv_of))
    raise TypeError(f"not a CBPV term: {t!r}")
