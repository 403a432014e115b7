import random

import pytest
from hypothesis import given, strategies as st

from cbpv.errors import EffectNotAllowed, ParseError, TypeMismatch, UnboundVariable
from cbpv.harness.gen import BASE, GALOIS_TYPES, GenConfig, gen_expr
from cbpv.sexpr import parse_comp, parse_ctype, parse_value, parse_vtype, show
from cbpv.source import S_BOOL, cbv_ctx, cbv_translate, cbv_type, omega
from cbpv.subst import fresh, substitute
from cbpv.syntax import (
    BOOL, FALSE, TRUE, UNIT, Arrow, CompPair, F, Fail, Force, If, Lam, Or, Pair, Proj, Push, Rec,
    Return, Thunk, To, U, Var, free_vars, is_terminal, size,
)
from cbpv.typecheck import DIV, NONDET, PURE, EffectSignature, TypingContext, check_comp, check_value

from oracles import db_subst, debruijn

X = Var("x")


def test_value_typing_examples():
    assert check_value([("x", BOOL)], X) == BOOL
    assert check_value([], TRUE) == BOOL
    assert check_value([], Thunk(Return(TRUE))) == U(F(BOOL))


def test_comp_typing_examples():
    assert check_comp([], Lam("x", BOOL, Return(X)), PURE) == Arrow(BOOL, F(BOOL))
    assert check_comp([], Rec("x", F(BOOL), Force(X)), DIV) == F(BOOL)
    with pytest.raises(EffectNotAllowed):
        check_comp([], Or(Return(TRUE), Return(FALSE)), PURE)


def test_signature_gates():
    rec = Rec("x", F(BOOL), Force(X))
    with pytest.raises(EffectNotAllowed):
        check_comp([], rec, NONDET)
    with pytest.raises(EffectNotAllowed):
        check_comp([], Fail(F(BOOL)), DIV)
    assert check_comp([], Fail(F(BOOL)), NONDET) == F(BOOL)
    assert EffectSignature.parse("Div") is DIV


def test_typing_errors():
    with pytest.raises(UnboundVariable):
        check_value([], X)
    with pytest.raises(TypeMismatch):
        check_comp([], If(Thunk(Return(TRUE)), Return(TRUE), Return(FALSE)))
    with pytest.raises(TypeMismatch):
        check_comp([], Push(TRUE, Return(TRUE)))


def test_projection_and_terminals():
    m = CompPair(Return(TRUE), Lam("x", UNIT, Return(X)))
    assert check_comp([], Proj(2, m)) == Arrow(UNIT, F(UNIT))
    assert is_terminal(m) and not is_terminal(Proj(1, m))


def test_substitution_examples():
    assert substitute(Return(X), {"x": TRUE}) == Return(TRUE)
    out = substitute(Lam("x", BOOL, Return(Var("y"))), {"y": X})
    assert isinstance(out, Lam) and out.var != "x"
    assert out.body == Return(X)
    m = To(Return(X), "x", Return(X))
    assert substitute(m, {"x": TRUE}) == To(Return(TRUE), "x", Return(X))


def test_substitution_matches_nameless_oracle():
    m = To(Return(X), "x", Return(X))
    assert debruijn(substitute(m, {"x": TRUE})) == db_subst(debruijn(m), "x", debruijn(TRUE))


def test_fresh_names_are_deterministic():
    assert fresh("x") == "x#1"
    assert fresh("x#1") == "x#2"


def test_free_vars_and_size():
    m = To(Return(X), "y", Push(Var("y"), Force(Var("f"))))
    assert free_vars(m) == {"x", "f"}
    assert size(Return(TRUE)) == 2


def test_sexpr_round_trip():
    text = "(to (return x) y (match (pair y y) a b (if a (return b) (fail (F bool)))))"
    m = parse_comp(text)
    assert show(m) == text
    assert parse_comp(show(m)) == m
    assert parse_vtype("(U (-> bool (F unit)))") == U(Arrow(BOOL, F(UNIT)))
    assert parse_ctype("(& (F bool) (F unit))").left == F(BOOL)
    assert parse_value("(pair true false)") == Pair(TRUE, FALSE)
    with pytest.raises(ParseError):
        parse_comp("(return")


# --------------------------------------------------------------- properties

def _instance(seed, sig=PURE):
    """A well-typed open CBPV computation: the by-value image of a source term."""
    cfg = GenConfig(seed=seed, sig=sig, max_depth=4)
    rng = random.Random(seed)
    ctx = [("x", BASE[seed % 2])]
    ty = GALOIS_TYPES[seed % len(GALOIS_TYPES)]
    e = gen_expr(cfg, ctx, ty, rng)
    return cbv_ctx(ctx), cbv_translate(e), F(cbv_type(ty))


seeds = st.integers(0, 10**6)
sigs = st.sampled_from([PURE, DIV, NONDET])


@given(seeds, sigs)
def test_translated_terms_typecheck(seed, sig):
    ctx, m, want = _instance(seed, sig)
    assert check_comp(ctx, m, sig) == want


@given(seeds)
def test_type_uniqueness(seed):
    ctx, m, _ = _instance(seed)
    first = check_comp(ctx, m)
    reparsed = parse_comp(show(m))
    assert check_comp(ctx, reparsed) == first


@given(seeds)
def test_weakening(seed):
    ctx, m, want = _instance(seed)
    wider = TypingContext(ctx.entries + (("w_fresh", U(F(UNIT))),))
    assert check_comp(wider, m) == want


@given(seeds)
def test_substitution_lemma(seed):
    ctx, m, want = _instance(seed)
    (x, a), = ctx.entries
    v = TRUE if a == BOOL else parse_value("()")
    out = substitute(m, {x: v})
    assert check_comp([], out) == want
    assert debruijn(out) == db_subst(debruijn(m), x, debruijn(v))


def test_omega_typechecks_under_div():
    assert check_comp([], cbv_translate(omega(S_BOOL)), DIV) == F(BOOL)


@given(seeds, st.sampled_from(["x", "y", "z"]))
def test_capture_avoidance_matches_nameless_oracle(seed, name):
    _, m, _ = _instance(seed)
    v = Pair(Var(name), Var("y"))
    assert debruijn(substitute(m, {"x": v})) == db_subst(debruijn(m), "x", debruijn(v))
