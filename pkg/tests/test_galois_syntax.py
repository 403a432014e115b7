import pytest
from hypothesis import given, strategies as st

from cbpv.errors import IllTyped
from cbpv.evaluate import results
from cbpv.galois_syntax import ctx_thunk_subst, rhs_term, to_name, to_name_hat, to_value
from cbpv.harness.gen import GALOIS_TYPES, GenConfig, corpus
from cbpv.source import (
    S_BOOL, S_UNIT, SApp, SArrow, SLam, SProd, STRUE, SrcContext, cbn_ctx, cbn_translate,
    cbn_type, cbv_ctx, cbv_translate, cbv_type, omega, type_depth,
)
from cbpv.syntax import (
    BOOL, FALSE, TRUE, Arrow, CompPair, F, Force, Lam, MatchPair, Or, Pair, Proj, Push, Return, Thunk,
    To, U, Var,
)
from cbpv.typecheck import DIV, NONDET, PURE, check_comp

from oracles import debruijn

BB = SArrow(S_BOOL, S_BOOL)
BB2 = SProd(S_BOOL, S_BOOL)


def test_to_name_examples():
    assert to_name(S_BOOL, Return(TRUE)) == To(Return(TRUE), "x#1", Return(Var("x#1")))
    m = Return(Thunk(Lam("x", BOOL, Return(Var("x")))))
    assert check_comp([], to_name(BB, m)) == Arrow(U(F(BOOL)), F(BOOL))
    assert results(to_name(S_BOOL, Or(Return(TRUE), Return(FALSE))), 100)[0] == {TRUE, FALSE}


def test_to_name_hat_examples():
    assert to_name_hat(S_BOOL, TRUE) == Return(TRUE)
    out = to_name_hat(BB2, Pair(TRUE, FALSE))
    assert out == MatchPair(Pair(TRUE, FALSE), "z#1", "z#2",
                            CompPair(Return(Var("z#1")), Return(Var("z#2"))))


def _nesting(m):
    """Depth of nested lambda or pair structure produced by the hat map."""
    match m:
        case Lam(_, _, body) | To(_, _, body) | MatchPair(_, _, _, body):
            inner = _nesting(body)
            return inner + 1 if isinstance(m, (Lam, MatchPair)) else inner
        case CompPair(a, b):
            return max(_nesting(a), _nesting(b))
    return 0


@pytest.mark.parametrize("ty", GALOIS_TYPES)
def test_hat_recursion_follows_type_depth(ty):
    assert _nesting(to_name_hat(ty, Var("v"))) == type_depth(ty)


def test_to_value_examples():
    n = Return(TRUE)
    assert to_value(S_BOOL, n) == n
    n2 = CompPair(Return(TRUE), Return(FALSE))
    assert to_value(BB2, n2) == To(Proj(1, n2), "z#1", To(Proj(2, n2), "z#2",
                                                         Return(Pair(Var("z#1"), Var("z#2")))))
    f = Lam("x", U(F(BOOL)), Force(Var("x")))
    assert check_comp([], to_value(BB, f)) == F(U(Arrow(BOOL, F(BOOL))))


def test_maps_check_their_input_type_when_given_a_context():
    with pytest.raises(IllTyped):
        to_name(S_BOOL, Return(Pair(TRUE, TRUE)), ctx=SrcContext())
    with pytest.raises(IllTyped):
        to_value(BB, Return(TRUE), ctx=SrcContext())


def test_ctx_thunk_subst_examples():
    assert ctx_thunk_subst([]) == {}
    assert ctx_thunk_subst([("x", S_BOOL)]) == {"x": Thunk(Return(Var("x")))}


def test_rhs_term_examples():
    e = SApp(SLam("x", S_BOOL, STRUE), omega(S_BOOL))
    assert rhs_term([], e) == cbn_translate(e)
    assert results(rhs_term([], e), 1000) == ({TRUE}, False)
    with pytest.raises(IllTyped):
        rhs_term([], e, ty=S_UNIT)


@pytest.mark.parametrize("ty", GALOIS_TYPES)
def test_maps_typing_contract(ty):
    ctx = [("v", cbv_type(ty))]
    assert check_comp(ctx, to_name(ty, Return(Var("v")))) == cbn_type(ty)
    assert check_comp(ctx, to_name_hat(ty, Var("v"))) == cbn_type(ty)
    nctx = [("n", U(cbn_type(ty)))]
    assert check_comp(nctx, to_value(ty, Force(Var("n")))) == F(cbv_type(ty))


@given(st.integers(0, 299), st.sampled_from([PURE, DIV, NONDET]))
def test_rhs_term_has_by_value_typing(i, sig):
    inst = corpus(GenConfig(sig=sig, count=300))[i]
    want = check_comp(cbv_ctx(inst.ctx), cbv_translate(inst.expr), sig)
    assert check_comp(cbv_ctx(inst.ctx), rhs_term(inst.ctx, inst.expr), sig) == want
    assert check_comp(cbn_ctx(inst.ctx), cbn_translate(inst.expr), sig) == cbn_type(inst.ty)


@given(st.integers(0, 299))
def test_closed_bool_rhs_is_the_by_name_translation(i):
    inst = corpus(GenConfig(count=300))[i]
    if inst.closed and inst.ty == S_BOOL:
        assert debruijn(rhs_term([], inst.expr)) == debruijn(cbn_translate(inst.expr))


FUNCS = [
    Return(Thunk(Lam("x", BOOL, Return(Var("x"))))),
    Return(Thunk(Lam("x", BOOL, Return(TRUE)))),
    Or(Return(Thunk(Lam("x", BOOL, Return(FALSE)))),
       Return(Thunk(Lam("x", BOOL, Or(Return(Var("x")), Return(TRUE)))))),
]


@pytest.mark.parametrize("m", FUNCS)
def test_round_trip_through_by_name_matches_eta_expansion(m):
    """ToValue (ToName M) behaves like return thunk (λx. M to z. x'(force z)) on every argument."""
    round_trip = to_value(BB, to_name(BB, m))
    expanded = Return(Thunk(Lam("x", BOOL, To(m, "z", Push(Var("x"), Force(Var("z")))))))
    for arg in (TRUE, FALSE):
        def applied(t):
            return To(t, "f", Push(arg, Force(Var("f"))))
        assert results(applied(round_trip), 1000) == results(applied(expanded), 1000)
