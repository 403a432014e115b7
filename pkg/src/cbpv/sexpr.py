"""S-expression reader and printer for types, CBPV terms and source terms.

CBPV grammar (``A``, ``C`` value and computation types)::

    A ::= unit | bool | (* A A) | (U C)
    C ::= (F A) | (-> A C) | (& C C)
    V ::= x | () | true | false | (pair V V) | (thunk M)
    M ::= (lam x A M) | (push V M) | (return V) | (to M x M) | (if V M M)
        | (force V) | (cpair M M) | (proj 1 M) | (proj 2 M) | (match V x x M)
        | (rec x C M) | (fail C) | (or M M)

Source grammar (keywords carry an ``s`` prefix)::

    t ::= unit | bool | (* t t) | (-> t t)
    e ::= x | sunit | strue | sfalse | (spair e e) | (sfst e) | (ssnd e)
        | (sif e e e) | (slam x t e) | (sapp e e) | (srec f t t x e)
        | (sfail t) | (sor e e)

Contexts are written ``((x bool) (f (-> bool bool)))``. ``;`` starts a
comment running to the end of the line.
"""

from __future__ import annotations

import re

from .errors import ParseError
from .source import (
    SFALSE, STRUE, SUNIT, SApp, SArrow, SBool, SBoolLit, SFail, SFst, SIf, SLam, SOr,
    SPair, SProd, SRecFun, SrcContext, SrcExpr, SrcType, SSnd, SUnit, SUnitVal, SVar,
)
from .syntax import (
    BOOL, FALSE, TRUE, UNIT, UNIT_VAL, Arrow, BoolLit, CompPair, CompTerm, CompType,
    CProd, F, Fail, Force, If, Lam, MatchPair, Or, Pair, Prod, Proj, Push, Rec, Return,
    Thunk, To, U, UnitVal, ValueTerm, ValueType, Var,
)
from .typecheck import TypingContext

_COMMENT = re.compile(r";[^\n]*")
_TOKEN = re.compile(r"\(\s*\)|\(|\)|[^\s()]+")

KEYWORDS = frozenset({
    "true", "false", "pair", "thunk", "lam", "push", "return", "to", "if", "force",
    "cpair", "proj", "match", "rec", "fail", "or",
    "sunit", "strue", "sfalse", "spair", "sfst", "ssnd", "sif", "slam", "sapp", "srec",
    "sfail", "sor", "unit", "bool", "U", "F", "->", "*", "&",
})


def read(text: str):
    """Parse exactly one s-expression into nested lists of atoms."""
    tokens = _tokenize(text)
    if not tokens:
        raise ParseError("empty input")
    pos, tree = _read(tokens, 0)
    if pos != len(tokens):
        raise ParseError(f"unexpected trailing input {tokens[pos]!r}")
    return tree


def _tokenize(text: str) -> list[str]:
    return _TOKEN.findall(_COMMENT.sub("", text))


def _read(tokens: list[str], pos: int):
    if pos >= len(tokens):
        raise ParseError("unexpected end of input")
    tok = tokens[pos]
    if tok.startswith("(") and tok.endswith(")"):
        return pos + 1, "()"
    if tok == ")":
        raise ParseError("unexpected ')'")
    if tok != "(":
        return pos + 1, tok
    items = []
    pos += 1
    while True:
        if pos >= len(tokens):
            raise ParseError("missing ')'")
        if tokens[pos] == ")":
            return pos + 1, items
        pos, item = _read(tokens, pos)
        items.append(item)


def _ident(tree) -> str:
    if not isinstance(tree, str) or tree in KEYWORDS or tree == "()":
        raise ParseError(f"expected an identifier, got {tree!r}")
    return tree


def _form(tree, head: str, arity: int) -> list:
    if len(tree) != arity + 1:
        raise ParseError(f"({head} ...) expects {arity} arguments, got {len(tree) - 1}")
    return tree[1:]


# ---------------------------------------------------------------- CBPV


def vtype_of(tree) -> ValueType:
    if tree == "unit":
        return UNIT
    if tree == "bool":
        return BOOL
    if isinstance(tree, list) and tree:
        head = tree[0]
        if head == "*":
            a, b = _form(tree, "*", 2)
            return Prod(vtype_of(a), vtype_of(b))
        if head == "U":
            (c,) = _form(tree, "U", 1)
            return U(ctype_of(c))
    raise ParseError(f"not a value type: {tree!r}")


def ctype_of(tree) -> CompType:
    if isinstance(tree, list) and tree:
        head = tree[0]
        if head == "F":
            (a,) = _form(tree, "F", 1)
            return F(vtype_of(a))
        if head == "->":
            a, c = _form(tree, "->", 2)
            return Arrow(vtype_of(a), ctype_of(c))
        if head == "&":
            c, d = _form(tree, "&", 2)
            return CProd(ctype_of(c), ctype_of(d))
    raise ParseError(f"not a computation type: {tree!r}")


def value_of(tree) -> ValueTerm:
    if tree == "()":
        return UNIT_VAL
    if tree == "true":
        return TRUE
    if tree == "false":
        return FALSE
    if isinstance(tree, str):
        return Var(_ident(tree))
    if tree and tree[0] == "pair":
        a, b = _form(tree, "pair", 2)
        return Pair(value_of(a), value_of(b))
    if tree and tree[0] == "thunk":
        (m,) = _form(tree, "thunk", 1)
        return Thunk(comp_of(m))
    raise ParseError(f"not a value: {tree!r}")


def comp_of(tree) -> CompTerm:
    if not isinstance(tree, list) or not tree:
        raise ParseError(f"not a computation: {tree!r}")
    head = tree[0]
    match head:
        case "lam":
            x, a, m = _form(tree, head, 3)
            return Lam(_ident(x), vtype_of(a), comp_of(m))
        case "push":
            v, m = _form(tree, head, 2)
            return Push(value_of(v), comp_of(m))
        case "return":
            (v,) = _form(tree, head, 1)
            return Return(value_of(v))
        case "to":
            m, x, n = _form(tree, head, 3)
            return To(comp_of(m), _ident(x), comp_of(n))
        case "if":
            v, m1, m2 = _form(tree, head, 3)
            return If(value_of(v), comp_of(m1), comp_of(m2))
        case "force":
            (v,) = _form(tree, head, 1)
            return Force(value_of(v))
        case "cpair":
            m1, m2 = _form(tree, head, 2)
            return CompPair(comp_of(m1), comp_of(m2))
        case "proj":
            i, m = _form(tree, head, 2)
            if i not in ("1", "2"):
                raise ParseError(f"projection index must be 1 or 2, got {i!r}")
            return Proj(int(i), comp_of(m))
        case "match":
            v, x1, x2, m = _form(tree, head, 4)
            return MatchPair(value_of(v), _ident(x1), _ident(x2), comp_of(m))
        case "rec":
            x, c, m = _form(tree, head, 3)
            return Rec(_ident(x), ctype_of(c), comp_of(m))
        case "fail":
            (c,) = _form(tree, head, 1)
            return Fail(ctype_of(c))
        case "or":
            m1, m2 = _form(tree, head, 2)
            return Or(comp_of(m1), comp_of(m2))
    raise ParseError(f"unknown computation form {head!r}")


def parse_vtype(text: str) -> ValueType:
    return vtype_of(read(text))


def parse_ctype(text: str) -> CompType:
    return ctype_of(read(text))


def parse_value(text: str) -> ValueTerm:
    return value_of(read(text))


def parse_comp(text: str) -> CompTerm:
    return comp_of(read(text))


def show_type(t) -> str:
    return str(t)


def show(t) -> str:
    """Print a CBPV value or computation; ``parse`` inverts this exactly."""
    match t:
        case Var(name):
            return name
        case UnitVal():
            return "()"
        case BoolLit(b):
            return "true" if b else "false"
        case Pair(a, b):
            return f"(pair {show(a)} {show(b)})"
        case Thunk(m):
            return f"(thunk {show(m)})"
        case Lam(x, a, m):
            return f"(lam {x} {a} {show(m)})"
        case Push(v, m):
            return f"(push {show(v)} {show(m)})"
        case Return(v):
            return f"(return {show(v)})"
        case To(m, x, n):
            return f"(to {show(m)} {x} {show(n)})"
        case If(v, m1, m2):
            return f"(if {show(v)} {show(m1)} {show(m2)})"
        case Force(v):
            return f"(force {show(v)})"
        case CompPair(a, b):
            return f"(cpair {show(a)} {show(b)})"
        case Proj(i, m):
            return f"(proj {i} {show(m)})"
        case MatchPair(v, x1, x2, m):
            return f"(match {show(v)} {x1} {x2} {show(m)})"
        case Rec(x, c, m):
            return f"(rec {x} {c} {show(m)})"
        case Fail(c):
            return f"(fail {c})"
        case Or(a, b):
            return f"(or {show(a)} {show(b)})"
    raise TypeError(f"not a CBPV term: {t!r}")


def ctx_of(tree) -> TypingContext:
    if tree == "()":
        return TypingContext()
    if not isinstance(tree, list):
        raise ParseError("a context is a list of (name type) entries")
    entries = []
    for item in tree:
        if not isinstance(item, list) or len(item) != 2:
            raise ParseError(f"bad context entry {item!r}")
        entries.append((_ident(item[0]), vtype_of(item[1])))
    return TypingContext.of(entries)


def parse_ctx(text: str) -> TypingContext:
    return ctx_of(read(text))


# -------------------------------------------------------------- source


def src_type_of(tree) -> SrcType:
    if tree == "unit":
        return SUnit()
    if tree == "bool":
        return SBool()
    if isinstance(tree, list) and tree:
        if tree[0] == "*":
            a, b = _form(tree, "*", 2)
            return SProd(src_type_of(a), src_type_of(b))
        if tree[0] == "->":
            a, b = _form(tree, "->", 2)
            return SArrow(src_type_of(a), src_type_of(b))
    raise ParseError(f"not a source type: {tree!r}")


def src_of(tree) -> SrcExpr:
    if tree == "sunit":
        return SUNIT
    if tree == "strue":
        return STRUE
    if tree == "sfalse":
        return SFALSE
    if isinstance(tree, str):
        return SVar(_ident(tree))
    if not tree:
        raise ParseError("empty form")
    head = tree[0]
    match head:
        case "spair":
            a, b = _form(tree, head, 2)
            return SPair(src_of(a), src_of(b))
        case "sfst":
            (a,) = _form(tree, head, 1)
            return SFst(src_of(a))
        case "ssnd":
            (a,) = _form(tree, head, 1)
            return SSnd(src_of(a))
        case "sif":
            c, a, b = _form(tree, head, 3)
            return SIf(src_of(c), src_of(a), src_of(b))
        case "slam":
            x, t, body = _form(tree, head, 3)
            return SLam(_ident(x), src_type_of(t), src_of(body))
        case "sapp":
            f, a = _form(tree, head, 2)
            return SApp(src_of(f), src_of(a))
        case "srec":
            f, t1, t2, x, body = _form(tree, head, 5)
            return SRecFun(_ident(f), src_type_of(t1), src_type_of(t2), _ident(x), src_of(body))
        case "sfail":
            (t,) = _form(tree, head, 1)
            return SFail(src_type_of(t))
        case "sor":
            a, b = _form(tree, head, 2)
            return SOr(src_of(a), src_of(b))
    raise ParseError(f"unknown source form {head!r}")


def parse_src(text: str) -> SrcExpr:
    return src_of(read(text))


def parse_src_type(text: str) -> SrcType:
    return src_type_of(read(text))


def src_ctx_of(tree) -> SrcContext:
    if tree == "()":
        return SrcContext()
    if not isinstance(tree, list):
        raise ParseError("a context is a list of (name type) entries")
    entries = []
    for item in tree:
        if not isinstance(item, list) or len(item) != 2:
            raise ParseError(f"bad context entry {item!r}")
        entries.append((_ident(item[0]), src_type_of(item[1])))
    return SrcContext.of(entries)


def parse_src_ctx(text: str) -> SrcContext:
    return src_ctx_of(read(text))


def show_src(e: SrcExpr) -> str:
    match e:
        case SVar(name):
            return name
        case SUnitVal():
            return "sunit"
        case SBoolLit(b):
            return "strue" if b else "sfalse"
        case SPair(a, b):
            return f"(spair {show_src(a)} {show_src(b)})"
        case SFst(a):
            return f"(sfst {show_src(a)})"
        case SSnd(a):
            return f"(ssnd {show_src(a)})"
        case SIf(c, a, b):
            return f"(sif {show_src(c)} {show_src(a)} {show_src(b)})"
        case SLam(x, t, body):
            return f"(slam {x} {t} {show_src(body)})"
        case SApp(f, a):
            return f"(sapp {show_src(f)} {show_src(a)})"
        case SRecFun(f, t1, t2, x, body):
            return f"(srec {f} {t1} {t2} {x} {show_src(body)})"
        case SFail(t):
            return f"(sfail {t})"
        case SOr(a, b):
            return f"(sor {show_src(a)} {show_src(b)})"
    raise TypeError(f"not a source expression: {e!r}")
