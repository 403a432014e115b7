import pytest
from hypothesis import given, strategies as st

from cbpv.errors import IllTyped
from cbpv.evaluate import ProgramRelation, eval_comp, relate_programs, results
from cbpv.harness.gen import GenConfig, corpus
from cbpv.source import S_BOOL, SApp, SLam, STRUE, cbn_translate, cbv_translate, omega
from cbpv.syntax import BOOL, FALSE, TRUE, F, Fail, Force, If, Or, Rec, Return, Thunk, To, Var
from cbpv.typecheck import DIV, NONDET, PURE, check_comp

EQ, IMPL = ProgramRelation.RESULT_EQ, ProgramRelation.RESULT_IMPL
LOOP = Rec("x", F(BOOL), Force(Var("x")))


def test_eval_examples():
    out = eval_comp(If(TRUE, Return(TRUE), Return(FALSE)), 10)
    assert out.terminals == {Return(TRUE)} and not out.exhausted
    out = eval_comp(Force(Thunk(Return(FALSE))), 10)
    assert out.terminals == {Return(FALSE)} and not out.exhausted


@pytest.mark.parametrize("fuel", [1, 10, 1000, 2000])
def test_divergence_exhausts_at_every_fuel(fuel):
    out = eval_comp(LOOP, fuel)
    assert out.terminals == frozenset() and out.exhausted


def test_results_examples():
    assert results(Or(Return(TRUE), Return(FALSE)), 10) == ({TRUE, FALSE}, False)
    assert results(To(Return(TRUE), "x", Return(Var("x"))), 10) == ({TRUE}, False)
    assert results(Fail(F(BOOL)), 10) == (frozenset(), False)


def test_results_rejects_open_or_ill_typed():
    with pytest.raises(IllTyped):
        results(Return(Var("x")), 10)
    with pytest.raises(ValueError):
        eval_comp(Return(TRUE), 0)


def test_relation_examples():
    assert relate_programs(Return(TRUE), Return(TRUE), EQ, 10).ok
    e = SApp(SLam("x", S_BOOL, STRUE), omega(S_BOOL))
    r = relate_programs(cbv_translate(e), cbn_translate(e), IMPL, 1000)
    assert r.ok and r.stats["left_exhausted"] and r.stats["right"] == ["true"]
    bad = relate_programs(Return(TRUE), Return(FALSE), IMPL, 10)
    assert bad.verdict == "fail" and bad.witness["value"] == "true"


def test_indiscrete_relation_accepts_everything():
    assert relate_programs(Return(TRUE), Return(FALSE), ProgramRelation.INDISCRETE, 10).ok


def test_exhausted_eq_is_inconclusive():
    r = relate_programs(LOOP, Return(TRUE), EQ, 50)
    assert r.verdict == "inconclusive"


@given(st.integers(0, 199), st.sampled_from([PURE, DIV, NONDET]))
def test_fuel_monotonicity_and_subject_reduction(i, sig):
    inst = corpus(GenConfig(sig=sig, count=200))[i]
    if not inst.closed:
        return
    m = cbv_translate(inst.expr)
    small, big = eval_comp(m, 200, sig), eval_comp(m, 400, sig)
    assert small.terminals <= big.terminals
    if not big.exhausted:
        assert small.exhausted or small.terminals == big.terminals
    ty = check_comp([], m, sig)
    for t in big.terminals:
        assert check_comp([], t, sig) == ty
