"""Property checks over the finite models, each producing a :class:`CheckReport`.

Inequalities between morphisms are decided pointwise on tabulated maps.
A failing report carries a ``repro`` record that :func:`repro` can rerun.
"""

from __future__ import annotations

import time
from typing import Callable

from ..denote import (
    Model, interp_comp, make_model, monad_tag, ncarrier, phi, psi, tonamehat, tonamehat_at,
    tonamehat_ctx, tovalue_ctx, vcarrier,
)
from ..errors import SizeBudgetExceeded
from ..evaluate import ProgramRelation, relate_programs, results
from ..monads import DownsetMonad, IdentityMonad, LiftMonad, Monad
from ..posets import (
    FinitePoset, MonotoneMap, all_monotone_maps, bang, compose, exp_map, identity, pair,
    parse_dump, terminal, two,
)
from ..report import FAIL, INCONCLUSIVE, PASS, SKIPPED, CheckReport
from ..sexpr import parse_src, parse_src_ctx, parse_src_type, show, show_src
from ..source import (
    S_BOOL, S_UNIT, SApp, SArrow, SrcContext, SrcExpr, SrcType, SUNIT, SUnit, SVar,
    cbn_ctx, cbn_translate, cbv_ctx, cbv_translate, check_src, rtl_translate, src_sig,
)
from ..syntax import TRUE, Return, To

DEFAULT_FUEL = 10_000


def _sctx(ctx) -> SrcContext:
    return ctx if isinstance(ctx, SrcContext) else SrcContext.of(ctx)


def _first_violation(f: MonotoneMap, g: MonotoneMap) -> int | None:
    return f.first_violation(g)


def _labelled(f: MonotoneMap, g: MonotoneMap, x: int) -> dict:
    return {"at": f.dom.label(x), "left": f.cod.label(f(x)), "right": g.cod.label(g(x))}


def _typed(ctx: SrcContext, e: SrcExpr, ty: SrcType | None) -> SrcType:
    found = check_src(ctx, e, src_sig(e))
    if ty is not None and ty != found:
        raise ValueError(f"expression has type {found}, not {ty}")
    return found


def _instance_repro(check: str, model: Model, ctx: SrcContext, e: SrcExpr, ty: SrcType) -> dict:
    return {"check": check, "model": model.name, "ctx": str(ctx), "expr": show_src(e),
            "type": str(ty)}


# ---------------------------------------------------------------- monads


def check_lax_idempotent(monad: Monad, x: FinitePoset, model_name: str | None = None) -> CheckReport:
    """``T η_X ⊑ η_{TX}`` pointwise on ``TX``."""
    t0 = time.perf_counter()
    left = monad.tmap(monad.unit(x))
    right = monad.unit(monad.T(x))
    bad = _first_violation(left, right)
    stats = {"TX": left.dom.size, "TTX": left.cod.size, "seconds": time.perf_counter() - t0}
    name = f"lax_idempotent[{monad.name}, {x.name}]"
    if bad is None:
        return CheckReport(name, PASS, stats=stats)
    witness = {"message": "T(eta) is not below eta at this element", **_labelled(left, right, bad),
               "repro": {"check": "lax_idempotent", "model": model_name or monad_tag(monad), "poset": x.dump()}}
    return CheckReport(name, FAIL, witness, stats)


def check_commutativity(monad: Monad, x1: FinitePoset, x2: FinitePoset,
                        model_name: str | None = None) -> CheckReport:
    """``seq = seqr`` pointwise on ``TX1 × TX2``."""
    left, right = monad.seq(x1, x2), monad.seqr(x1, x2)
    name = f"commutativity[{monad.name}, {x1.name}, {x2.name}]"
    diff = [k for k in range(left.dom.size) if left(k) != right(k)]
    stats = {"pairs": left.dom.size}
    if not diff:
        return CheckReport(name, PASS, stats=stats)
    k = diff[0]
    witness = {"message": "left-to-right and right-to-left sequencing differ",
               **_labelled(left, right, k), "differing": len(diff),
               "repro": {"check": "commutativity", "model": model_name or monad_tag(monad),
                         "x1": x1.dump(), "x2": x2.dump()}}
    return CheckReport(name, FAIL, witness, stats)


AXIOMS = ("discardable", "copyable", "thunkable")


def side_effect_axioms(monad: Monad, f: MonotoneMap) -> dict[str, int | None]:
    """First violating point of each lax side-effect axiom, ``None`` if it holds."""
    x, ty = f.dom, monad.base_of(f.cod)
    one = terminal()
    discard_l = compose(monad.tmap(bang(ty)), f)
    discard_r = compose(monad.unit(one), bang(x))
    copy_l = compose(monad.tmap(pair(identity(ty), identity(ty))), f)
    copy_r = compose(monad.seq(ty, ty), pair(f, f))
    thunk_l = compose(monad.tmap(monad.unit(ty)), f)
    thunk_r = compose(monad.unit(monad.T(ty)), f)
    return {
        "discardable": _first_violation(discard_l, discard_r),
        "copyable": _first_violation(copy_l, copy_r),
        "thunkable": _first_violation(thunk_l, thunk_r),
    }


def check_side_effect_axioms(monad: Monad, f: MonotoneMap, model_name: str | None = None) -> CheckReport:
    """Lax discardable, copyable and thunkable, each checked pointwise."""
    found = side_effect_axioms(monad, f)
    holds = {k: v is None for k, v in found.items()}
    name = f"side_effect_axioms[{monad.name}, {[int(v) for v in f.table]}]"
    if all(holds.values()):
        return CheckReport(name, PASS, stats=holds)
    failing = [k for k, v in holds.items() if not v]
    witness = {"message": f"not lax {', '.join(failing)}", "failing": failing,
               "at": {k: f.dom.label(found[k]) for k in failing},
               "repro": {"check": "side_effect_axioms", "model": model_name or monad_tag(monad),
                         "dom": f.dom.dump(), "cod_base": monad.base_of(f.cod).dump(),
                         "table": [int(v) for v in f.table]}}
    return CheckReport(name, FAIL, witness, holds)


# ---------------------------------------------------------------- galois


def check_galois(model: Model, ty: SrcType, route: str = "auto") -> CheckReport:
    """``φ_τ ∘ ψ_τ ⊑ id`` and ``id ⊑ ψ_τ ∘ φ_τ``, pointwise.

    ``route="exhaustive"`` tabulates both maps. ``route="generators"``
    avoids tabulating ``T[[τ]]v`` at arrow types: ψ_τ then lands in the
    image of η, and for monads whose elements are joins of unit images
    (identity, lift, downset) the second inequality only needs checking on
    those images, since ψ_τ ∘ φ_τ is monotone. ``auto`` picks the exhaustive
    route when it fits the size budget.
    """
    t0 = time.perf_counter()
    name = f"galois[{model.name}, {ty}]"
    repro = {"check": "galois", "model": model.name, "type": str(ty), "route": route}
    if route == "auto":
        try:
            model.monad.T(vcarrier(ty, model))
            route = "exhaustive"
        except SizeBudgetExceeded:
            if not (isinstance(ty, SArrow) and _join_generated(model.monad)):
                raise
            route = "generators"
    if route == "exhaustive":
        report = _galois_exhaustive(model, ty, name, repro)
    elif route == "generators":
        report = _galois_generators(model, ty, name, repro)
    else:
        raise ValueError(f"unknown route {route!r}")
    report.stats["route"] = route
    report.stats["seconds"] = time.perf_counter() - t0
    return report


def _join_generated(monad: Monad) -> bool:
    return isinstance(monad, (IdentityMonad, LiftMonad, DownsetMonad))


def _galois_exhaustive(model: Model, ty: SrcType, name: str, repro: dict) -> CheckReport:
    f, g = phi(ty, model), psi(ty, model)
    stats = {"T[[t]]v": f.dom.size, "U[[t]]n": g.dom.size}
    counit = compose(f, g)
    unit = compose(g, f)
    bad = _first_violation(counit, identity(g.dom))
    if bad is not None:
        witness = {"message": "phi . psi is not below the identity",
                   **_labelled(counit, identity(g.dom), bad), "repro": repro}
        return CheckReport(name, FAIL, witness, stats)
    bad = _first_violation(identity(f.dom), unit)
    if bad is not None:
        witness = {"message": "the identity is not below psi . phi",
                   **_labelled(identity(f.dom), unit, bad), "repro": repro}
        return CheckReport(name, FAIL, witness, stats)
    return CheckReport(name, PASS, stats=stats)


def _galois_generators(model: Model, ty: SArrow, name: str, repro: dict) -> CheckReport:
    if not isinstance(ty, SArrow) or not _join_generated(model.monad):
        raise ValueError("the generator route needs an arrow type and a join-generated monad")
    vty, nty = vcarrier(ty, model), ncarrier(ty, model)
    core = exp_map(tonamehat(ty.arg, model), psi(ty.result, model))
    stats = {"[[t]]v": vty.size, "U[[t]]n": nty.size}
    for n in range(nty.size):
        # φ(ψ n) = φ(η (core n)) = η̂ (core n) by the algebra unit law
        back = tonamehat_at(ty, model, core(n))
        if not nty.le(back, n):
            witness = {"message": "phi . psi is not below the identity", "at": nty.label(n),
                       "left": nty.label(back), "right": nty.label(n), "repro": repro}
            return CheckReport(name, FAIL, witness, stats)
    for x in range(vty.size):
        # ψ(φ(η x)) = η (core (η̂ x)); η is an order embedding for these monads
        round_trip = core(tonamehat_at(ty, model, x))
        if not vty.le(x, round_trip):
            witness = {"message": "the identity is not below psi . phi at a unit image",
                       "at": vty.label(x), "left": vty.label(x), "right": vty.label(round_trip),
                       "repro": repro}
            return CheckReport(name, FAIL, witness, stats)
    return CheckReport(name, PASS, stats=stats)


# ----------------------------------------------------------- main theorem


def _semantic_pair(model: Model, ctx: SrcContext, e: SrcExpr, translate=cbv_translate):
    v = interp_comp(cbv_ctx(ctx), translate(e), model)
    n = interp_comp(cbn_ctx(ctx), cbn_translate(e), model)
    return v, n


def check_main_theorem(model: Model, ctx, e: SrcExpr, ty: SrcType | None = None) -> CheckReport:
    """``[[e]]v ⊑ ψ_τ ∘ [[e]]n ∘ η̂_Γ`` pointwise over ``[[Γ]]v``."""
    ctx = _sctx(ctx)
    ty = _typed(ctx, e, ty)
    t0 = time.perf_counter()
    v, n = _semantic_pair(model, ctx, e)
    rhs = compose(psi(ty, model), n, tonamehat_ctx(ctx, model))
    bad = _first_violation(v, rhs)
    strict = sum(1 for k in range(v.dom.size) if v(k) != rhs(k))
    stats = {"envs": v.dom.size, "strict_points": strict, "seconds": time.perf_counter() - t0}
    name = f"main_theorem[{model.name}]"
    if bad is None:
        return CheckReport(name, PASS, stats=stats)
    witness = {"message": "by-value denotation is not below the by-name bound",
               **_labelled(v, rhs, bad),
               "repro": _instance_repro("main_theorem", model, ctx, e, ty)}
    return CheckReport(name, FAIL, witness, stats)


def check_maps_interpretation(model: Model, ctx, e: SrcExpr, ty: SrcType | None = None) -> CheckReport:
    """``[[ToName M]] = φ ∘ [[M]]`` and ``[[ToValue N]] = ψ ∘ [[N]]`` table-exactly.

    ``M`` and ``N`` are the by-value and by-name translations of ``e``.
    """
    from ..galois_syntax import to_name, to_value
    ctx = _sctx(ctx)
    ty = _typed(ctx, e, ty)
    name = f"maps_interpretation[{model.name}]"
    m, nterm = cbv_translate(e), cbn_translate(e)
    vctx, nctx = cbv_ctx(ctx), cbn_ctx(ctx)
    lhs_n = interp_comp(vctx, to_name(ty, m), model)
    rhs_n = compose(phi(ty, model), interp_comp(vctx, m, model))
    lhs_v = interp_comp(nctx, to_value(ty, nterm), model)
    rhs_v = compose(psi(ty, model), interp_comp(nctx, nterm, model))
    for label, lhs, rhs in (("to_name", lhs_n, rhs_n), ("to_value", lhs_v, rhs_v)):
        if lhs != rhs:
            k = next(k for k in range(lhs.dom.size) if lhs(k) != rhs(k))
            witness = {"message": f"{label} denotation differs from the semantic map",
                       **_labelled(lhs, rhs, k),
                       "repro": _instance_repro("maps_interpretation", model, ctx, e, ty)}
            return CheckReport(name, FAIL, witness, {"map": label})
    return CheckReport(name, PASS, stats={"envs_v": lhs_n.dom.size, "envs_n": lhs_v.dom.size})


def check_four_equivalences(model: Model, ctx, e: SrcExpr, ty: SrcType | None = None) -> CheckReport:
    """The four equivalent inequalities, each decided pointwise; all must hold and agree."""
    ctx = _sctx(ctx)
    name = f"four_equivalences[{model.name}]"
    gate = check_lax_idempotent(model.monad, two())
    if not gate.ok:
        return CheckReport(name, SKIPPED, stats={"reason": "model is not lax idempotent"})
    ty = _typed(ctx, e, ty)
    monad = model.monad
    f, g = _semantic_pair(model, ctx, e)
    hat, tv = tonamehat_ctx(ctx, model), tovalue_ctx(ctx, model)
    ph, ps = phi(ty, model), psi(ty, model)
    ext_f = monad.kleisli(f)
    sides = {
        "value_bound": (f, compose(ps, g, hat)),
        "name_bound": (compose(ph, f), compose(g, hat)),
        "name_extended": (compose(ph, ext_f, tv), g),
        "value_extended": (compose(ext_f, tv), compose(ps, g)),
    }
    found = {k: _first_violation(lhs, rhs) for k, (lhs, rhs) in sides.items()}
    holds = {k: v is None for k, v in found.items()}
    stats = {"holds": holds}
    if all(holds.values()):
        return CheckReport(name, PASS, stats=stats)
    key = next(k for k, v in holds.items() if not v)
    lhs, rhs = sides[key]
    agree = len(set(holds.values())) == 1
    witness = {"message": f"inequality {key} fails" + ("" if agree else " while others hold"),
               "holds": holds, **_labelled(lhs, rhs, found[key]),
               "repro": _instance_repro("four_equivalences", model, ctx, e, ty)}
    return CheckReport(name, FAIL, witness, stats)


def check_ltr_rtl(model: Model, ctx, e: SrcExpr, ty: SrcType | None = None,
                  fuel: int | None = DEFAULT_FUEL) -> CheckReport:
    """By-value and right-to-left denotations agree; closed boolean programs also agree operationally."""
    ctx = _sctx(ctx)
    ty = _typed(ctx, e, ty)
    name = f"ltr_rtl[{model.name}]"
    vctx = cbv_ctx(ctx)
    left = interp_comp(vctx, cbv_translate(e), model)
    right = interp_comp(vctx, rtl_translate(e), model)
    repro = _instance_repro("ltr_rtl", model, ctx, e, ty)
    if left != right:
        k = next(k for k in range(left.dom.size) if left(k) != right(k))
        witness = {"message": "evaluation order changes the denotation",
                   **_labelled(left, right, k), "repro": repro}
        return CheckReport(name, FAIL, witness)
    stats: dict = {"envs": left.dom.size}
    if fuel is not None and not len(ctx) and ty == S_BOOL:
        lv, lex = results(cbv_translate(e), fuel)
        rv, rex = results(rtl_translate(e), fuel)
        stats["operational"] = [sorted(map(show, lv)), sorted(map(show, rv))]
        if lv != rv:
            if lex or rex:
                return CheckReport(name, INCONCLUSIVE, stats=stats)
            witness = {"message": "evaluation order changes the result set",
                       "left": stats["operational"][0], "right": stats["operational"][1],
                       "repro": repro}
            return CheckReport(name, FAIL, witness, stats)
    return CheckReport(name, PASS, stats=stats)


# ------------------------------------------------------------ operational


def as_program(m, ty: SrcType):
    """Observe a unit-typed program through ``m to _. return true``."""
    if isinstance(ty, SUnit):
        return To(m, "_", Return(TRUE))
    return m


def check_corollary(e: SrcExpr, ty: SrcType | None = None,
                    rel: ProgramRelation = ProgramRelation.RESULT_IMPL,
                    fuel: int = DEFAULT_FUEL, right: str = "cbn") -> CheckReport:
    """Relate the by-value and by-name programs of a closed ground expression."""
    ty = _typed(SrcContext(), e, ty)
    if ty not in (S_UNIT, S_BOOL):
        raise ValueError(f"programs have ground type, got {ty}")
    other = {"cbn": cbn_translate, "rtl": rtl_translate}[right]
    return relate_programs(as_program(cbv_translate(e), ty), as_program(other(e), ty), rel, fuel,
                           name=f"corollary[{rel.value}, cbv vs {right}]")


def relation_for(model: Model) -> ProgramRelation:
    """Program relation that the model's order is adequate for."""
    return ProgramRelation.RESULT_EQ if model.name == "identity" else ProgramRelation.RESULT_IMPL


def check_cross_validation(model: Model, e: SrcExpr, ty: SrcType | None = None,
                           fuel: int = DEFAULT_FUEL) -> CheckReport:
    """Operational reading of the main theorem: ``cbv e ≾ ToValue (cbn e)``."""
    from ..galois_syntax import rhs_term
    ty = _typed(SrcContext(), e, ty)
    rhs = rhs_term((), e, ty)
    return relate_programs(as_program(cbv_translate(e), ty), as_program(rhs, ty), relation_for(model),
                           fuel, name=f"cross_validation[{model.name}]")


# --------------------------------------------------------------- converse


def converse_probes() -> list[tuple[SrcContext, SrcExpr, SrcType]]:
    """``x : unit -> τ ⊢ x () : τ`` for the ground types and the arrows out of unit."""
    probes = []
    for ty in (S_UNIT, S_BOOL, SArrow(S_UNIT, S_UNIT), SArrow(S_UNIT, S_BOOL)):
        ctx = SrcContext.of([("x", SArrow(S_UNIT, ty))])
        probes.append((ctx, SApp(SVar("x"), SUNIT), ty))
    return probes


def check_converse_premise(model: Model) -> CheckReport:
    """When the main theorem holds on the probes, lax idempotence and thunkability must follow.

    The conclusion checked is ``T η_X ⊑ η_{TX}`` for ``X`` in {1, 2}
    and lax thunkability of every monotone map ``2 -> TX``.
    """
    name = f"converse_premise[{model.name}]"
    for ctx, e, ty in converse_probes():
        premise = check_main_theorem(model, ctx, e, ty)
        if not premise.ok:
            return CheckReport(name, SKIPPED, stats={
                "reason": "main theorem fails on a probe", "probe": show_src(e),
                "probe_ctx": str(ctx), "premise": premise.witness})
    monad = model.monad
    checked = 0
    for x in (terminal(), two()):
        lax = check_lax_idempotent(monad, x, model.name)
        if not lax.ok:
            return CheckReport(name, FAIL, {**lax.witness, "message": "premise holds but "
                                            + lax.witness["message"],
                                            "repro": {"check": "converse_premise", "model": model.name}})
        for f in all_monotone_maps(two(), monad.T(x)):
            checked += 1
            if side_effect_axioms(monad, f)["thunkable"] is not None:
                return CheckReport(name, FAIL, {
                    "message": "premise holds but a map is not lax thunkable",
                    "table": [int(v) for v in f.table],
                    "repro": {"check": "converse_premise", "model": model.name}})
    return CheckReport(name, PASS, stats={"maps_checked": checked})


# ----------------------------------------------------------------- repro


def _model(w: dict) -> Model:
    return make_model(w["model"])


def _instance(w: dict):
    return _model(w), parse_src_ctx(w["ctx"]), parse_src(w["expr"]), parse_src_type(w["type"])


def _monad_of(w: dict) -> Monad:
    return _model(w).monad


def _repro_side_effects(w: dict) -> CheckReport:
    monad = _monad_of(w)
    dom, base = parse_dump(w["dom"]), parse_dump(w["cod_base"])
    return check_side_effect_axioms(monad, MonotoneMap(dom, monad.T(base), w["table"]), w["model"])


def _repro_relate(w: dict) -> CheckReport:
    from ..sexpr import parse_comp
    return relate_programs(parse_comp(w["left_term"]), parse_comp(w["right_term"]),
                           ProgramRelation.parse(w["relation"]), w["fuel"])


REPRO: dict[str, Callable[[dict], CheckReport]] = {
    "galois": lambda w: check_galois(_model(w), parse_src_type(w["type"]), w.get("route", "auto")),
    "main_theorem": lambda w: check_main_theorem(*_instance(w)),
    "maps_interpretation": lambda w: check_maps_interpretation(*_instance(w)),
    "four_equivalences": lambda w: check_four_equivalences(*_instance(w)),
    "ltr_rtl": lambda w: check_ltr_rtl(*_instance(w)),
    "lax_idempotent": lambda w: check_lax_idempotent(_monad_of(w), parse_dump(w["poset"]), w["model"]),
    "commutativity": lambda w: check_commutativity(
        _monad_of(w), parse_dump(w["x1"]), parse_dump(w["x2"]), w["model"]),
    "side_effect_axioms": _repro_side_effects,
    "converse_premise": lambda w: check_converse_premise(_model(w)),
    "relate_programs": _repro_relate,
}


def repro(witness: dict) -> CheckReport:
    """Rerun the single instance described by a witness (or its ``repro`` entry)."""
    record = witness.get("repro", witness)
    try:
        runner = REPRO[record["check"]]
    except KeyError:
        raise ValueError(f"no rerunnable check in witness: {record.get('check')!r}") from None
    return runner(record)
