"""Suites that run the checks over corpora and aggregate the reports."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from typing import Iterable

from ..denote import Model, make_model, monad_tag, vcarrier
from ..errors import SizeBudgetExceeded
from ..evaluate import ProgramRelation, eval_comp
from ..monads import (
    Algebra, DownsetMonad, ExpAlgebra, FreeAlgebra, IdentityMonad, LiftMonad, Monad, ProductAlgebra,
    WriterMonad, law_violations_algebra, law_violations_monad,
)
from ..posets import FinitePoset, MonotoneMap, all_monotone_maps, monotone_tables, product, terminal, two
from ..report import FAIL, INCONCLUSIVE, PASS, SKIPPED, CheckReport
from ..sexpr import show, show_src
from ..source import S_BOOL, S_UNIT, cbn_translate, cbv_translate
from ..typecheck import DIV, NONDET, PURE, EffectSignature, check_comp
from . import checks
from .gen import GALOIS_TYPES, GenConfig, Instance, corpus

MODEL_SIG = {"identity": PURE, "lift": DIV, "downset": NONDET, "writer": PURE}
SIG_MODEL = {PURE: "identity", DIV: "lift", NONDET: "downset"}


@dataclass
class SuiteResult:
    """Reports from one suite run, in deterministic order."""

    reports: list[CheckReport] = field(default_factory=list)
    inconclusive_quota: int = 0
    seconds: float = 0.0

    def add(self, report: CheckReport) -> CheckReport:
        self.reports.append(report)
        return report

    def extend(self, reports: Iterable[CheckReport]) -> None:
        self.reports.extend(reports)

    def count(self, verdict: str, prefix: str = "") -> int:
        return sum(1 for r in self.reports if r.verdict == verdict and r.name.startswith(prefix))

    def failures(self, prefix: str = "") -> list[CheckReport]:
        return [r for r in self.reports if r.verdict == FAIL and r.name.startswith(prefix)]

    @property
    def ok(self) -> bool:
        return not self.failures() and self.count(INCONCLUSIVE) <= self.inconclusive_quota

    def summary(self) -> str:
        names: dict[str, dict[str, int]] = {}
        for r in self.reports:
            key = r.name.split("[")[0]
            names.setdefault(key, {}).setdefault(r.verdict, 0)
            names[key][r.verdict] += 1
        lines = []
        for key in sorted(names):
            counts = ", ".join(f"{v} {k}" for k, v in sorted(names[key].items()))
            lines.append(f"{key:24s} {counts}")
        lines.append(f"{'total':24s} {len(self.reports)} reports in {self.seconds:.1f}s; "
                     f"{'ok' if self.ok else 'NOT ok'}")
        return "\n".join(lines)


def _guard(run, name: str) -> CheckReport:
    """Turn out-of-budget instances into ``skipped`` reports."""
    try:
        return run()
    except SizeBudgetExceeded as exc:
        return CheckReport(name, SKIPPED, stats={"reason": str(exc)})


# ------------------------------------------------------------ semantic suites


def galois_suite(model: Model, types=GALOIS_TYPES) -> list[CheckReport]:
    return [_guard(lambda: checks.check_galois(model, t), f"galois[{model.name}, {t}]") for t in types]


def lax_idempotence_suite(model: Model, types=GALOIS_TYPES) -> list[CheckReport]:
    out = []
    for t in types:
        name = f"lax_idempotent[{model.name}, {t}]"
        out.append(_guard(lambda: checks.check_lax_idempotent(model.monad, vcarrier(t, model), model.name),
                          name))
    return out


def instance_suite(check, model: Model, instances: Iterable[Instance]) -> list[CheckReport]:
    """Run an instance-level check, tagging reports with the corpus index."""
    out = []
    for inst in instances:
        name = f"{check.__name__.removeprefix('check_')}[{model.name}]"
        try:
            report = check(model, inst.ctx, inst.expr, inst.ty)
        except SizeBudgetExceeded as exc:
            report = CheckReport(name, SKIPPED, stats={"reason": str(exc)})
        report.stats["index"] = inst.index
        out.append(report)
    return out


def corollary_suite(instances: Iterable[Instance], rel: ProgramRelation, fuel: int,
                    right: str = "cbn") -> list[CheckReport]:
    out = []
    for inst in instances:
        if inst.closed and inst.ty in (S_UNIT, S_BOOL):
            report = checks.check_corollary(inst.expr, inst.ty, rel, fuel, right)
            report.stats["index"] = inst.index
            out.append(report)
    return out


def cross_validation_suite(model: Model, instances: Iterable[Instance], fuel: int) -> list[CheckReport]:
    """Semantic pass must never meet an operational fail on closed ground instances."""
    out = []
    for inst in instances:
        if not (inst.closed and inst.ty in (S_UNIT, S_BOOL)):
            continue
        semantic = _guard(lambda: checks.check_main_theorem(model, inst.ctx, inst.expr, inst.ty),
                          f"main_theorem[{model.name}]")
        operational = checks.check_cross_validation(model, inst.expr, inst.ty, fuel)
        name = f"cross_validation[{model.name}]"
        stats = {"index": inst.index, "semantic": semantic.verdict, "operational": operational.verdict}
        if semantic.ok and operational.verdict == FAIL:
            out.append(CheckReport(name, FAIL, {
                "message": "semantic check passes but the operational reading fails",
                "expr": show_src(inst.expr), "repro": operational.witness["repro"]}, stats))
        else:
            out.append(CheckReport(name, operational.verdict if semantic.ok else semantic.verdict,
                                   stats=stats))
    return out


def determinism_suite(instances: Iterable[Instance], sig: EffectSignature, fuel: int) -> list[CheckReport]:
    """Pure programs reach exactly one terminal, recursive ones at most one; terminals keep their type."""
    out = []
    limit = 1
    for inst in instances:
        if not inst.closed:
            continue
        m = cbv_translate(inst.expr) if inst.index % 2 == 0 else cbn_translate(inst.expr)
        name = f"determinism[{sig.value}]"
        ty = check_comp((), m, sig)
        outcome = eval_comp(m, fuel, sig)
        stats = {"index": inst.index, "terminals": len(outcome.terminals), "exhausted": outcome.exhausted}
        bad = None
        if len(outcome.terminals) > limit:
            bad = "more than one terminal"
        elif sig is PURE and (len(outcome.terminals) != 1 or outcome.exhausted):
            bad = "pure program did not reach exactly one terminal"
        else:
            for t in outcome.terminals:
                if check_comp((), t, sig) != ty:
                    bad = f"terminal {show(t)} changed type"
        if bad:
            out.append(CheckReport(name, FAIL, {"message": bad, "term": show(m),
                                                "repro": {"check": "relate_programs", "left_term": show(m),
                                                          "right_term": show(m), "relation": "impl",
                                                          "fuel": fuel}}, stats))
        else:
            out.append(CheckReport(name, PASS, stats=stats))
    return out


# ---------------------------------------------------------------- law suites


def law_monads() -> list[Monad]:
    return [IdentityMonad(), LiftMonad(), DownsetMonad(), WriterMonad()]


def sample_maps(dom: FinitePoset, cod: FinitePoset, rng: random.Random, k: int) -> list[MonotoneMap]:
    """All monotone maps when there are at most ``k``, otherwise ``k`` random ones."""
    try:
        tables = monotone_tables(dom, cod, limit=k)
        return [MonotoneMap(dom, cod, t, check=False) for t in tables]
    except SizeBudgetExceeded:
        pass
    if not dom.is_discrete:
        raise ValueError("random sampling needs a discrete domain")
    return [MonotoneMap(dom, cod, [rng.randrange(cod.size) for _ in range(dom.size)])
            for _ in range(k)]


def monad_law_suite(monad: Monad, seed: int = 0, k: int = 12) -> CheckReport:
    rng = random.Random(seed)
    w, x, y, z = two(), two(), terminal(), two()
    fs = sample_maps(product(w, x), monad.T(y), rng, k)
    gs = sample_maps(product(w, y), monad.T(z), rng, k)
    bad = law_violations_monad(monad, w, x, y, z, fs, gs)
    fs2 = sample_maps(product(w, x), monad.T(z), rng, k)
    gs2 = sample_maps(product(w, z), monad.T(z), rng, k)
    bad += law_violations_monad(monad, w, x, z, z, fs2, gs2)
    fs, gs = fs + fs2, gs + gs2
    name = f"monad_laws[{monad.name}]"
    if bad:
        return CheckReport(name, FAIL, {"message": bad[0], "violations": bad,
                                        "repro": {"check": "monad_laws", "model": monad_tag(monad)}})
    return CheckReport(name, PASS, stats={"maps": len(fs) + len(gs)})


def law_algebras(monad: Monad) -> list[Algebra]:
    free = FreeAlgebra(monad, two())
    return [free, ProductAlgebra(free, FreeAlgebra(monad, terminal())), ExpAlgebra(two(), free)]


def algebra_law_suite(monad: Monad, seed: int = 0, k: int = 8) -> list[CheckReport]:
    rng = random.Random(seed)
    out = []
    w, x, y = two(), two(), two()
    for alg in law_algebras(monad):
        fs = sample_maps(product(w, x), monad.T(y), rng, k)
        gs = sample_maps(product(w, y), alg.carrier, rng, k)
        bad = law_violations_algebra(alg, w, x, y, fs, gs)
        name = f"algebra_laws[{monad.name}, {alg.carrier.name}]"
        routes = all(alg.algextend(g) == alg.algextend_pointwise(g) for g in gs)
        if not routes:
            bad.append("morphism-level and pointwise extension differ")
        if bad:
            out.append(CheckReport(name, FAIL, {"message": bad[0], "violations": bad,
                                                "repro": {"check": "algebra_laws", "model": monad_tag(monad)}}))
        else:
            out.append(CheckReport(name, PASS, stats={"carrier": alg.carrier.size}))
    return out


def side_effect_suite(monad: Monad) -> tuple[list[CheckReport], dict[str, int]]:
    """All three axioms over every monotone map ``2 -> T2``; returns reports and pass counts."""
    maps = all_monotone_maps(two(), monad.T(two()))
    reports = [checks.check_side_effect_axioms(monad, f) for f in maps]
    counts = {"maps": len(maps)}
    for axiom in checks.AXIOMS:
        counts[axiom] = sum(1 for r in reports if r.ok or axiom not in r.witness["failing"])
    return reports, counts


def law_suite(monad: Monad, seed: int = 0) -> list[CheckReport]:
    out = [monad_law_suite(monad, seed)]
    out += algebra_law_suite(monad, seed)
    out.append(checks.check_commutativity(monad, two(), two()))
    out.append(checks.check_lax_idempotent(monad, two()))
    out += side_effect_suite(monad)[0]
    return out


# ---------------------------------------------------------------- full run


def run_suite(model_name: str, types=GALOIS_TYPES, seed: int | None = None, count: int = 500,
              fuel: int = checks.DEFAULT_FUEL, depth: int = 5) -> SuiteResult:
    """Every check that applies to one model, over its matching corpus."""
    t0 = time.perf_counter()
    model = make_model(model_name)
    base = model_name.partition(":")[0]
    sig = MODEL_SIG[base]
    cfg = GenConfig(sig=sig, count=count, max_depth=depth) if seed is None else \
        GenConfig(seed=seed, sig=sig, count=count, max_depth=depth)
    instances = corpus(cfg)
    res = SuiteResult()
    res.extend(law_suite(model.monad, cfg.seed))
    res.extend(galois_suite(model, types))
    res.extend(lax_idempotence_suite(model, types))
    res.add(checks.check_converse_premise(model))
    res.extend(instance_suite(checks.check_main_theorem, model, instances))
    res.extend(instance_suite(checks.check_maps_interpretation, model, instances))
    res.extend(instance_suite(checks.check_four_equivalences, model, instances))
    res.extend(instance_suite(checks.check_ltr_rtl, model, instances))
    rel = ProgramRelation.RESULT_EQ if sig is PURE else ProgramRelation.RESULT_IMPL
    res.extend(corollary_suite(instances, rel, fuel))
    if base != "writer":
        res.extend(cross_validation_suite(model, instances, fuel))
    res.extend(determinism_suite(instances, sig, fuel) if sig is not NONDET else [])
    res.seconds = time.perf_counter() - t0
    return res
