import dataclasses
import json

import pytest

from cbpv.denote import denote_closed, downset_model, identity_model, lift_model, writer_model
from cbpv.errors import SizeBudgetExceeded
from cbpv.evaluate import ProgramRelation
from cbpv.harness.checks import (
    as_program, check_converse_premise, check_corollary, check_cross_validation,
    check_four_equivalences, check_galois, check_lax_idempotent, check_ltr_rtl,
    check_main_theorem, check_maps_interpretation, converse_probes, repro,
)
from cbpv.harness.gen import GALOIS_TYPES, GenConfig, corpus, gen_expr, gen_instance
from cbpv.harness.suite import SuiteResult, determinism_suite, run_suite
from cbpv.posets import budget, two
from cbpv.report import CheckReport
from cbpv.source import (
    S_BOOL, S_UNIT, SApp, SArrow, SFALSE, SFst, SIf, SLam, SOr, SPair, SProd, STRUE, SUNIT, SVar,
    cbn_translate, cbv_translate, check_src, omega,
)
from cbpv.syntax import TRUE, Return, To
from cbpv.typecheck import DIV, NONDET, PURE

BB = SArrow(S_BOOL, S_BOOL)
OMEGA_APP = SApp(SLam("x", S_BOOL, STRUE), omega(S_BOOL))
NONDET_APP = SApp(SLam("x", S_BOOL, SIf(SVar("x"), SVar("x"), STRUE)), SOr(STRUE, SFALSE))
IMPL = ProgramRelation.RESULT_IMPL


# ---------------------------------------------------------------- generator

def test_depth_zero_bool_is_a_literal():
    for seed in range(20):
        e = gen_expr(GenConfig(seed=seed), [], S_BOOL, depth=0)
        assert e in (STRUE, SFALSE)


@pytest.mark.parametrize("sig", [PURE, DIV, NONDET])
def test_corpus_is_well_typed_and_deterministic(sig):
    cfg = GenConfig(sig=sig)
    items = corpus(cfg)
    assert len(items) == 500
    for inst in items:
        assert check_src(inst.ctx, inst.expr, sig) == inst.ty
    assert gen_instance(cfg, 17) == items[17]


TYPE_NAMES = {"SBool", "SUnit", "SProd", "SArrow"}


def _constructs(e, out):
    """Collect the constructor names used in a source expression."""
    out.add(type(e).__name__)
    for f in dataclasses.fields(e):
        v = getattr(e, f.name)
        if dataclasses.is_dataclass(v) and type(v).__name__ not in TYPE_NAMES:
            _constructs(v, out)
    return out


def test_corpus_distribution():
    seen = set()
    for sig in (PURE, DIV, NONDET):
        for inst in corpus(GenConfig(sig=sig)):
            _constructs(inst.expr, seen)
    assert {"SApp", "SIf", "SLam", "SPair", "SFst", "SSnd", "SRecFun", "SOr", "SFail"} <= seen


# ---------------------------------------------------------------- lax idempotence and galois

@pytest.mark.parametrize("model,ok", [(identity_model, True), (lift_model, True),
                                      (writer_model, False)])
def test_lax_idempotence_examples(model, ok):
    r = check_lax_idempotent(model().monad, two())
    assert r.ok is ok
    if not ok:
        assert "at" in r.witness


def test_galois_examples():
    assert check_galois(lift_model(), S_BOOL).ok
    r = check_galois(lift_model(), BB)
    assert r.ok and r.stats["T[[t]]v"] == 10 and r.stats["U[[t]]n"] == 11
    bad = check_galois(writer_model(), BB)
    assert bad.verdict == "fail"
    assert repro(bad.witness).verdict == "fail"


@pytest.mark.parametrize("model", [identity_model, lift_model, downset_model])
def test_generator_route_agrees_with_exhaustive(model):
    for ty in (BB, SArrow(S_UNIT, S_BOOL), SArrow(S_BOOL, S_UNIT)):
        assert check_galois(model(), ty, "exhaustive").ok
        assert check_galois(model(), ty, "generators").ok


def test_generator_route_needs_arrow_and_join_generated_monad():
    with pytest.raises(ValueError):
        check_galois(lift_model(), S_BOOL, "generators")
    with pytest.raises(ValueError):
        check_galois(writer_model(), BB, "generators")


def test_downset_galois_at_large_arrow_uses_generators():
    r = check_galois(downset_model(), SArrow(S_BOOL, SProd(S_BOOL, S_BOOL)))
    assert r.ok and r.stats["route"] == "generators"


def test_exhaustive_route_respects_budget():
    with budget(64), pytest.raises(SizeBudgetExceeded):
        check_galois(downset_model(), SArrow(S_BOOL, SProd(S_BOOL, S_BOOL)), "exhaustive")


# ---------------------------------------------------------------- main theorem

def test_main_theorem_closed_literal_is_equality():
    r = check_main_theorem(lift_model(), [], STRUE)
    assert r.ok and r.stats["strict_points"] == 0


def test_main_theorem_omega_is_strict():
    model = lift_model()
    r = check_main_theorem(model, [], OMEGA_APP)
    assert r.ok and r.stats["strict_points"] == 1
    assert denote_closed(cbv_translate(OMEGA_APP), model) == 0
    assert denote_closed(cbn_translate(OMEGA_APP), model) == 1


def test_main_theorem_nondeterminism_is_strict():
    model = downset_model()
    r = check_main_theorem(model, [], NONDET_APP)
    assert r.ok and r.stats["strict_points"] == 1
    t = model.monad.T(two())
    assert t.members(denote_closed(cbv_translate(NONDET_APP), model)) == [0]
    assert t.members(denote_closed(cbn_translate(NONDET_APP), model)) == [0, 1]


def test_main_theorem_failure_is_reproducible_under_writer():
    model = writer_model()
    for inst in corpus(GenConfig(count=200)):
        r = check_main_theorem(model, inst.ctx, inst.expr, inst.ty)
        if r.verdict == "fail":
            again = repro(json.loads(r.to_json())["witness"])
            assert again.verdict == "fail" and again.witness["at"] == r.witness["at"]
            return
    pytest.fail("writer model never violated the main theorem on 200 terms")


# ---------------------------------------------------------------- other checks

def test_four_equivalences_examples():
    assert check_four_equivalences(lift_model(), [], OMEGA_APP).ok
    r = check_four_equivalences(lift_model(), [], STRUE)
    assert r.ok and set(r.stats["holds"].values()) == {True}
    assert check_four_equivalences(writer_model(), [], STRUE).verdict == "skipped"


def test_four_equivalences_with_context():
    ctx = [("x", S_BOOL), ("f", BB)]
    e = SApp(SVar("f"), SIf(SVar("x"), SFALSE, STRUE))
    for model in (identity_model, lift_model):
        assert check_four_equivalences(model(), ctx, e).ok


def test_maps_interpretation_examples():
    for model in (identity_model, lift_model, downset_model, writer_model):
        eta_f = SLam("y", S_BOOL, SApp(SVar("f"), SVar("y")))
        assert check_maps_interpretation(model(), [("f", BB)], eta_f).ok
        assert check_maps_interpretation(model(), [], SPair(STRUE, SFALSE)).ok


def test_ltr_rtl_examples():
    e = SPair(SOr(STRUE, SFALSE), SFALSE)
    assert check_ltr_rtl(downset_model(), [], e).ok
    assert check_ltr_rtl(downset_model(), [], SFst(e)).ok


def test_corollary_examples():
    r = check_corollary(OMEGA_APP, rel=IMPL, fuel=1000)
    assert r.ok and r.stats["left_exhausted"]
    r = check_corollary(NONDET_APP, rel=IMPL)
    assert r.ok and r.stats["left"] == ["true"] and r.stats["right"] == ["false", "true"]
    with pytest.raises(ValueError):
        check_corollary(SPair(STRUE, STRUE))


def test_unit_programs_are_observed_through_a_boolean():
    m = cbv_translate(SUNIT)
    assert as_program(m, S_UNIT) == To(m, "_", Return(TRUE))
    assert check_corollary(SUNIT, rel=ProgramRelation.RESULT_EQ).ok


def test_cross_validation_examples():
    assert check_cross_validation(lift_model(), OMEGA_APP).ok
    assert check_cross_validation(downset_model(), NONDET_APP).ok


def test_converse_examples():
    assert len(converse_probes()) == 4
    assert check_converse_premise(lift_model()).ok
    assert check_converse_premise(downset_model()).ok
    assert check_converse_premise(identity_model()).ok
    r = check_converse_premise(writer_model())
    assert r.verdict == "skipped" and r.stats["reason"]


# ---------------------------------------------------------------- suites and reports

def test_report_requires_witness_on_failure():
    with pytest.raises(ValueError):
        CheckReport("x", "fail")
    with pytest.raises(ValueError):
        CheckReport("x", "maybe")
    r = CheckReport("x", "fail", {"message": "m"})
    assert json.loads(r.to_json())["verdict"] == "fail" and "m" in r.summary()


def test_determinism_suite_on_small_corpus():
    reports = determinism_suite(corpus(GenConfig(count=60)), PURE, 10_000)
    assert reports and all(r.ok for r in reports)


def test_run_suite_small_identity():
    res = run_suite("identity", count=40)
    assert isinstance(res, SuiteResult) and res.ok
    assert res.count("pass", "galois") == len(GALOIS_TYPES)
    assert "pass" in res.summary()


def test_repro_rejects_unknown_checks():
    with pytest.raises(ValueError):
        repro({"check": "nope"})
