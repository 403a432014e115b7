import pytest
from hypothesis import given, strategies as st

from cbpv.errors import EffectNotAllowed, TypeMismatch
from cbpv.evaluate import results
from cbpv.harness.gen import GenConfig, corpus
from cbpv.sexpr import parse_src, show, show_src
from cbpv.source import (
    S_BOOL, S_UNIT, SApp, SArrow, SFALSE, SFst, SLam, SOr, SPair, SProd, SRecFun, STRUE, SVar,
    cbn_ctx, cbn_translate, cbn_type, cbv_ctx, cbv_translate, cbv_type, check_src, omega,
    rtl_translate, src_sig,
)
from cbpv.syntax import (
    BOOL, FALSE, TRUE, Arrow, CompPair, F, Force, Lam, Pair, Push, Return, Thunk, To, U, Var,
)
from cbpv.typecheck import DIV, NONDET, PURE, check_comp

BB = SArrow(S_BOOL, S_BOOL)


def test_source_typing_examples():
    assert check_src([], SLam("x", S_BOOL, SVar("x")), PURE) == BB
    rec = SRecFun("f", S_BOOL, S_BOOL, "x", SApp(SVar("f"), SVar("x")))
    assert check_src([], rec, DIV) == BB
    assert check_src([], SOr(STRUE, SFALSE), NONDET) == S_BOOL
    with pytest.raises(EffectNotAllowed):
        check_src([], SOr(STRUE, SFALSE), PURE)
    with pytest.raises(TypeMismatch):
        check_src([], SFst(STRUE))


def test_type_translations():
    assert cbv_type(S_BOOL) == BOOL
    assert cbn_type(S_BOOL) == F(BOOL)
    assert cbv_type(BB) == U(Arrow(BOOL, F(BOOL)))
    assert cbn_type(BB) == Arrow(U(F(BOOL)), F(BOOL))
    assert cbn_ctx([("x", S_BOOL)]).entries == (("x", U(F(BOOL))),)


def test_cbv_examples():
    assert cbv_translate(SVar("x")) == Return(Var("x"))
    e, e2 = SVar("f"), SVar("a")
    assert cbv_translate(SApp(e, e2)) == To(Return(Var("f")), "y#1", To(
        Return(Var("a")), "z#2", Push(Var("z#2"), Force(Var("y#1")))))
    assert cbv_translate(SLam("x", S_BOOL, SVar("x"))) == Return(Thunk(Lam("x", BOOL, Return(Var("x")))))


def test_cbn_examples():
    assert cbn_translate(SVar("x")) == Force(Var("x"))
    assert cbn_translate(SApp(SVar("f"), STRUE)) == Push(Thunk(Return(TRUE)), Force(Var("f")))
    assert cbn_translate(SPair(STRUE, SVar("x"))) == CompPair(Return(TRUE), Force(Var("x")))


def test_rtl_examples():
    assert rtl_translate(SPair(STRUE, SFALSE)) == To(
        Return(FALSE), "z#2", To(Return(TRUE), "z#1", Return(Pair(Var("z#1"), Var("z#2")))))
    assert rtl_translate(SVar("x")) == Return(Var("x"))


def test_rtl_and_cbv_results_agree_on_nondet_pair():
    e = SPair(SOr(STRUE, SFALSE), STRUE)
    assert results(rtl_translate(e), 100) == results(cbv_translate(e), 100)


def test_golden_translation_text():
    e = parse_src("(sif (sfst (spair strue sfalse)) (sapp (slam x bool x) sfalse) strue)")
    # names are allocated outside-in: the conditional takes z#1 before its condition is translated
    assert show(cbv_translate(e)) == (
        "(to (to (to (return true) z#5 (to (return false) z#6 (return (pair z#5 z#6)))) z#2 "
        "(match z#2 z#3 z#4 (return z#3))) z#1 (if z#1 (to (return (thunk (lam x bool "
        "(return x)))) y#7 (to (return false) z#8 (push z#8 (force y#7)))) (return true)))")


def test_signature_inference():
    assert src_sig(omega(S_BOOL)) is DIV
    assert src_sig(SOr(STRUE, SFALSE)) is NONDET
    assert src_sig(STRUE) is PURE
    with pytest.raises(ValueError):
        src_sig(SOr(omega(S_BOOL), STRUE))


def test_show_src_round_trip():
    e = SRecFun("f", S_UNIT, SProd(S_BOOL, S_BOOL), "x", SPair(STRUE, SFALSE))
    assert parse_src(show_src(e)) == e


@given(st.integers(0, 299), st.sampled_from([PURE, DIV, NONDET]))
def test_translations_preserve_typing(i, sig):
    inst = corpus(GenConfig(sig=sig, count=300))[i]
    assert check_src(inst.ctx, inst.expr, sig) == inst.ty
    assert check_comp(cbv_ctx(inst.ctx), cbv_translate(inst.expr), sig) == F(cbv_type(inst.ty))
    assert check_comp(cbv_ctx(inst.ctx), rtl_translate(inst.expr), sig) == F(cbv_type(inst.ty))
    assert check_comp(cbn_ctx(inst.ctx), cbn_translate(inst.expr), sig) == cbn_type(inst.ty)
