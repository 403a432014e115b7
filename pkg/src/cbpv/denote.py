"""Denotational semantics of CBPV in a finite model, and the semantic maps.

Denotations are computed pointwise (one environment at a time, memoised)
and tabulated into :class:`MonotoneMap` objects over the interpreted
context. ``phi``, ``psi`` and ``tonamehat`` are assembled from the
categorical combinators, clause by clause.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

from .errors import EffectUnsupported
from .monads import (
    Algebra, DownsetMonad, ExpAlgebra, FreeAlgebra, IdentityMonad, LiftMonad, Monad,
    ProductAlgebra, WriterMonad, least_fixpoint,
)
from .posets import (
    ExpPoset, FinitePoset, MonotoneMap, ProductPoset, compose, curry, ev, exp_map,
    identity, pair, product, product_map, proj2, terminal,
)
from .source import SArrow, SBool, SProd, SrcContext, SrcType, SUnit, cbn_type, cbv_type
from .syntax import (
    Arrow, Bool, BoolLit, CompPair, CompTerm, CompType, CProd, F, Fail, Force, If, Lam,
    MatchPair, Or, Pair, Prod, Proj, Push, Rec, Return, Thunk, To, U, Unit, UnitVal,
    ValueTerm, ValueType, Var,
)
from .typecheck import DIV, NONDET, PURE, TypingContext, check_comp, check_value

JOIN_CHECK_LIMIT = 512


@dataclass(eq=False)
class Model:
    """A strong monad plus the effect structure its algebras must carry."""

    name: str
    monad: Monad
    supports_rec: bool = False
    supports_nondet: bool = False
    _vtypes: dict = field(default_factory=dict, repr=False)
    _ctypes: dict = field(default_factory=dict, repr=False)
    _maps: dict = field(default_factory=dict, repr=False)

    def __hash__(self) -> int:
        return id(self)

    @property
    def sig(self):
        if self.supports_rec:
            return DIV
        if self.supports_nondet:
            return NONDET
        return PURE

    def check_algebra(self, alg: Algebra) -> None:
        """Reject carriers lacking the bottom or joins the effects need."""
        c = alg.carrier
        if (self.supports_rec or self.supports_nondet) and c.bottom() is None:
            raise ValueError(f"{self.name}: carrier {c.name} has no least element")
        if self.supports_nondet and c.size <= JOIN_CHECK_LIMIT and not c.has_all_joins():
            raise ValueError(f"{self.name}: carrier {c.name} lacks binary joins")


def identity_model() -> Model:
    return Model("identity", IdentityMonad())


def lift_model() -> Model:
    return Model("lift", LiftMonad(), supports_rec=True)


def downset_model() -> Model:
    return Model("downset", DownsetMonad(), supports_nondet=True)


def writer_model(generators: int = 1, max_len: int = 1) -> Model:
    """Writer model; the default one-letter monoid keeps arrow carriers small."""
    name = "writer" if (generators, max_len) == (1, 1) else f"writer:{generators}:{max_len}"
    return Model(name, WriterMonad(generators, max_len))


MODELS = {
    "identity": identity_model,
    "id": identity_model,
    "lift": lift_model,
    "downset": downset_model,
    "writer": writer_model,
}


def make_model(name: str) -> Model:
    """Model by name; ``writer:G:L`` picks a writer monoid with G letters and words up to L."""
    base, _, params = name.partition(":")
    if base not in MODELS:
        raise ValueError(f"unknown model {name!r}")
    if params:
        if base != "writer":
            raise ValueError(f"model {base!r} takes no parameters")
        g, l = (int(p) for p in params.split(":"))
        return writer_model(g, l)
    return MODELS[base]()


def monad_tag(monad: Monad) -> str:
    """Name accepted by :func:`make_model` that rebuilds an equal monad."""
    if isinstance(monad, WriterMonad):
        return f"writer:{monad.monoid.generators}:{monad.monoid.max_len}"
    return monad.name


# ------------------------------------------------------------------ types


def interp_vtype(a: ValueType, model: Model) -> FinitePoset:
    if a in model._vtypes:
        return model._vtypes[a]
    match a:
        case Unit():
            out = terminal()
        case Bool():
            from .posets import two
            out = two()
        case Prod(l, r):
            out = product(interp_vtype(l, model), interp_vtype(r, model))
        case U(c):
            out = interp_ctype(c, model).carrier
        case _:
            raise TypeError(f"not a value type: {a!r}")
    model._vtypes[a] = out
    return out


def interp_ctype(c: CompType, model: Model) -> Algebra:
    if c in model._ctypes:
        return model._ctypes[c]
    match c:
        case F(a):
            out = FreeAlgebra(model.monad, interp_vtype(a, model))
        case Arrow(a, r):
            out = ExpAlgebra(interp_vtype(a, model), interp_ctype(r, model))
        case CProd(l, r):
            out = ProductAlgebra(interp_ctype(l, model), interp_ctype(r, model))
        case _:
            raise TypeError(f"not a computation type: {c!r}")
    model.check_algebra(out)
    model._ctypes[c] = out
    return out


def interp_ctx(ctx, model: Model) -> FinitePoset:
    """Left-nested product ``((1 × A1) × A2) × ...``."""
    out = terminal()
    for _, a in _tctx(ctx):
        out = product(out, interp_vtype(a, model))
    return out


def _tctx(ctx) -> TypingContext:
    return ctx if isinstance(ctx, TypingContext) else TypingContext.of(ctx)


def env_of(ctx, model: Model, k: int) -> tuple[int, ...]:
    """Split an element of the interpreted context into per-variable elements."""
    ctx = _tctx(ctx)
    out = []
    for _, a in reversed(ctx.entries):
        n = interp_vtype(a, model).size
        k, x = divmod(k, n)
        out.append(x)
    return tuple(reversed(out))


# ------------------------------------------------------------- terms


class _Interp:
    """Pointwise interpreter; memoises on (node, context, environment)."""

    def __init__(self, model: Model):
        self.model = model
        self.memo: dict = {}
        self.types: dict = {}
        self.keep: list = []

    def ctype(self, ctx: TypingContext, m: CompTerm) -> CompType:
        key = (id(m), ctx)
        if key not in self.types:
            self.types[key] = check_comp(ctx, m, _loose(m))
            self.keep.append(m)
        return self.types[key]

    def vtype(self, ctx: TypingContext, v: ValueTerm) -> ValueType:
        key = (id(v), ctx)
        if key not in self.types:
            self.types[key] = check_value(ctx, v, _loose(v))
            self.keep.append(v)
        return self.types[key]

    def value(self, ctx: TypingContext, env: tuple, v: ValueTerm) -> int:
        match v:
            case Var(name):
                return env[ctx.names().index(name)]
            case UnitVal():
                return 0
            case BoolLit(b):
                return 0 if b else 1
            case Pair(a, b):
                p = interp_vtype(self.vtype(ctx, v), self.model)
                return p.index(self.value(ctx, env, a), self.value(ctx, env, b))
            case Thunk(m):
                return self.comp(ctx, env, m)
        raise TypeError(f"not a value term: {v!r}")

    def comp(self, ctx: TypingContext, env: tuple, m: CompTerm) -> int:
        key = (id(m), ctx, env)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out = self._comp(ctx, env, m)
        self.memo[key] = out
        self.keep.append(m)
        return out

    def _comp(self, ctx: TypingContext, env: tuple, m: CompTerm) -> int:
        model = self.model
        match m:
            case Lam(x, a, body):
                arg = interp_vtype(a, model)
                alg: Algebra = interp_ctype(self.ctype(ctx, m), model)
                ctx2, envs = _extend(ctx, env, x, a, arg.size)
                table = [self.comp(ctx2, e, body) for e in envs]
                return alg.carrier.index(table)
            case Push(v, fn):
                f = self.comp(ctx, env, fn)
                e: ExpPoset = interp_ctype(self.ctype(ctx, fn), model).carrier
                return e.tables[f][self.value(ctx, env, v)]
            case Return(v):
                a = interp_vtype(self.vtype(ctx, v), model)
                return model.monad.eta_at(a, self.value(ctx, env, v))
            case To(first, x, then):
                ft = self.ctype(ctx, first)
                a = interp_vtype(ft.value, model)
                t = self.comp(ctx, env, first)
                alg = interp_ctype(self.ctype(ctx, m), model)
                ctx2, envs = _extend(ctx, env, x, ft.value, a.size)
                return alg.ext_at(a, t, lambda i: self.comp(ctx2, envs[i], then))
            case If(v, then, orelse):
                b = self.value(ctx, env, v)
                return self.comp(ctx, env, then if b == 0 else orelse)
            case Force(v):
                return self.value(ctx, env, v)
            case CompPair(l, r):
                p: ProductPoset = interp_ctype(self.ctype(ctx, m), model).carrier
                return p.index(self.comp(ctx, env, l), self.comp(ctx, env, r))
            case Proj(i, body):
                p = interp_ctype(self.ctype(ctx, body), model).carrier
                return p.split(self.comp(ctx, env, body))[i - 1]
            case MatchPair(v, x1, x2, body):
                vt = self.vtype(ctx, v)
                pv = interp_vtype(vt, model)
                a, b = pv.split(self.value(ctx, env, v))
                ctx1, env1 = _extend_one(ctx, env, x1, vt.left, a)
                ctx2, env2 = _extend_one(ctx1, env1, x2, vt.right, b)
                return self.comp(ctx2, env2, body)
            case Rec(x, c, body):
                if not model.supports_rec:
                    raise EffectUnsupported(model.name, "rec")
                alg = interp_ctype(c, model)
                return least_fixpoint(alg, lambda z: self.comp(*_extend_one(ctx, env, x, U(c), z), body))
            case Fail(c):
                if not model.supports_nondet:
                    raise EffectUnsupported(model.name, "fail")
                return interp_ctype(c, model).bottom()
            case Or(l, r):
                if not model.supports_nondet:
                    raise EffectUnsupported(model.name, "or")
                alg = interp_ctype(self.ctype(ctx, m), model)
                out = alg.join(self.comp(ctx, env, l), self.comp(ctx, env, r))
                if out is None:
                    raise ValueError(f"no join in {alg.carrier.name}")
                return out
        raise TypeError(f"not a computation term: {m!r}")


def _loose(t):
    from .syntax import uses_effects
    used = uses_effects(t)
    if "rec" in used:
        return DIV
    return NONDET if used else PURE


def _extend_one(ctx: TypingContext, env: tuple, x: str, a: ValueType, val: int):
    names = ctx.names()
    if x in names:
        i = names.index(x)
        env = env[:i] + env[i + 1:]
    return ctx.extend(x, a), env + (val,)


def _extend(ctx: TypingContext, env: tuple, x: str, a: ValueType, n: int):
    ctx2, _ = _extend_one(ctx, env, x, a, 0)
    names = ctx.names()
    base = env
    if x in names:
        i = names.index(x)
        base = env[:i] + env[i + 1:]
    return ctx2, [base + (k,) for k in range(n)]


def interp_value(ctx, v: ValueTerm, model: Model) -> MonotoneMap:
    """``[[Γ ⊢ V : A]] : [[Γ]] -> [[A]]``."""
    ctx = _tctx(ctx)
    run = _Interp(model)
    cod = interp_vtype(run.vtype(ctx, v), model)
    dom = interp_ctx(ctx, model)
    return MonotoneMap(dom, cod, [run.value(ctx, env_of(ctx, model, k), v) for k in range(dom.size)])


def interp_comp(ctx, m: CompTerm, model: Model) -> MonotoneMap:
    """``[[Γ ⊢ M : C]] : [[Γ]] -> U[[C]]``."""
    ctx = _tctx(ctx)
    run = _Interp(model)
    cod = interp_ctype(run.ctype(ctx, m), model).carrier
    dom = interp_ctx(ctx, model)
    return MonotoneMap(dom, cod, [run.comp(ctx, env_of(ctx, model, k), m) for k in range(dom.size)])


def denote_closed(m: CompTerm, model: Model) -> int:
    """Element of ``U[[C]]`` denoted by a closed computation."""
    return interp_comp((), m, model)(0)


# --------------------------------------------------------- semantic maps


def _cached(kind: str):
    def deco(fn):
        @functools.wraps(fn)
        def wrapper(ty, model: Model):
            key = (kind, ty)
            if key not in model._maps:
                model._maps[key] = fn(ty, model)
            return model._maps[key]
        return wrapper
    return deco


def vcarrier(ty: SrcType, model: Model) -> FinitePoset:
    """``[[τ]]v``."""
    return interp_vtype(cbv_type(ty), model)


def ncarrier(ty: SrcType, model: Model) -> FinitePoset:
    """``U[[τ]]n``."""
    return interp_ctype(cbn_type(ty), model).carrier


def _unary_algextend(alg: Algebra, f: MonotoneMap) -> MonotoneMap:
    """Extension of ``f : X -> Z`` to ``TX -> Z`` through the terminal object."""
    one = terminal()
    lifted = alg.algextend(compose(f, proj2(product(one, f.dom))))
    tx = alg.monad.T(f.dom)
    return compose(lifted, pair(MonotoneMap(tx, one, [0] * tx.size, check=False), identity(tx)))


@_cached("tonamehat")
def tonamehat(ty: SrcType, model: Model) -> MonotoneMap:
    """``η̂_τ : [[τ]]v -> U[[τ]]n``."""
    monad = model.monad
    match ty:
        case SUnit() | SBool():
            return monad.unit(vcarrier(ty, model))
        case SProd(a, b):
            return product_map(tonamehat(a, model), tonamehat(b, model))
        case SArrow(a, b):
            alg_b = interp_ctype(cbn_type(b), model)
            w = vcarrier(ty, model)
            evaluation = ev(vcarrier(a, model), monad.T(vcarrier(b, model)))
            ext = alg_b.algextend(compose(phi(b, model), evaluation))
            return curry(compose(ext, product_map(identity(w), psi(a, model))))
    raise TypeError(f"not a source type: {ty!r}")


@_cached("phi")
def phi(ty: SrcType, model: Model) -> MonotoneMap:
    """``φ_τ : T[[τ]]v -> U[[τ]]n``, the algebra extension of ``η̂_τ``."""
    return _unary_algextend(interp_ctype(cbn_type(ty), model), tonamehat(ty, model))


@_cached("psi")
def psi(ty: SrcType, model: Model) -> MonotoneMap:
    """``ψ_τ : U[[τ]]n -> T[[τ]]v``."""
    monad = model.monad
    match ty:
        case SUnit() | SBool():
            return identity(monad.T(vcarrier(ty, model)))
        case SProd(a, b):
            return compose(monad.seq(vcarrier(a, model), vcarrier(b, model)),
                           product_map(psi(a, model), psi(b, model)))
        case SArrow(a, b):
            inner = exp_map(tonamehat(a, model), psi(b, model))
            return compose(monad.unit(inner.cod), inner)
    raise TypeError(f"not a source type: {ty!r}")


def _sctx(ctx) -> SrcContext:
    return ctx if isinstance(ctx, SrcContext) else SrcContext.of(ctx)


def tonamehat_ctx(ctx, model: Model) -> MonotoneMap:
    """``η̂_Γ : [[Γ]]v -> [[Γ]]n``, one factor per variable."""
    out = identity(terminal())
    for _, t in _sctx(ctx):
        out = product_map(out, tonamehat(t, model))
    return out


def tovalue_ctx(ctx, model: Model) -> MonotoneMap:
    """``ψ_Γ : [[Γ]]n -> T[[Γ]]v``, sequencing the variables left to right."""
    monad = model.monad
    out = monad.unit(terminal())
    vctx = terminal()
    for _, t in _sctx(ctx):
        step = product_map(out, psi(t, model))
        out = compose(monad.seq(vctx, vcarrier(t, model)), step)
        vctx = product(vctx, vcarrier(t, model))
    return out


# -------------------------------------------------- pointwise semantic maps


def tonamehat_at(ty: SrcType, model: Model, v: int) -> int:
    """``η̂_τ(v)`` without tabulating the whole map."""
    monad = model.monad
    match ty:
        case SUnit() | SBool():
            return monad.eta_at(vcarrier(ty, model), v)
        case SProd(a, b):
            vl, vr = vcarrier(ty, model).split(v)
            return ncarrier(ty, model).index(tonamehat_at(a, model, vl), tonamehat_at(b, model, vr))
        case SArrow(a, b):
            fn: ExpPoset = vcarrier(ty, model)
            va = vcarrier(a, model)
            alg_b = interp_ctype(cbn_type(b), model)
            out: ExpPoset = ncarrier(ty, model)
            table = []
            for n in range(ncarrier(a, model).size):
                t = psi_at(a, model, n)
                table.append(alg_b.ext_at(va, t, lambda x: phi_at(b, model, fn.tables[v][x])))
            return out.index(table)
    raise TypeError(f"not a source type: {ty!r}")


def phi_at(ty: SrcType, model: Model, t: int) -> int:
    alg = interp_ctype(cbn_type(ty), model)
    return alg.ext_at(vcarrier(ty, model), t, lambda v: tonamehat_at(ty, model, v))


def psi_at(ty: SrcType, model: Model, n: int) -> int:
    monad = model.monad
    match ty:
        case SUnit() | SBool():
            return n
        case SProd(a, b):
            nl, nr = ncarrier(ty, model).split(n)
            return monad.seq_at(vcarrier(a, model), vcarrier(b, model),
                                psi_at(a, model, nl), psi_at(b, model, nr))
        case SArrow(a, b):
            fn: ExpPoset = ncarrier(ty, model)
            out: ExpPoset = vcarrier(ty, model)
            table = [psi_at(b, model, fn.tables[n][tonamehat_at(a, model, x)])
                     for x in range(vcarrier(a, model).size)]
            return monad.eta_at(out, out.index(table))
    raise TypeError(f"not a source type: {ty!r}")
