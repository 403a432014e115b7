"""Type-directed generation of well-typed source expressions."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..source import (
    S_BOOL, S_UNIT, SApp, SArrow, SBool, SFail, SFALSE, SFst, SIf, SLam, SOr, SPair, SProd,
    SRecFun, SrcContext, SrcExpr, SrcType, SSnd, STRUE, SUNIT, SUnit, SVar, omega,
)
from ..typecheck import DIV, NONDET, PURE, EffectSignature

DEFAULT_SEED = 0xCB0

BOOL_TO_BOOL = SArrow(S_BOOL, S_BOOL)
GALOIS_TYPES = (S_BOOL, S_UNIT, SProd(S_BOOL, S_BOOL), BOOL_TO_BOOL,
                SArrow(S_BOOL, SProd(S_BOOL, S_BOOL)))
DEFAULT_TYPE_WEIGHTS = {
    S_BOOL: 5,
    S_UNIT: 1,
    SProd(S_BOOL, S_BOOL): 2,
    BOOL_TO_BOOL: 2,
    SArrow(S_UNIT, S_BOOL): 1,
}
CONTEXTS = (
    SrcContext(),
    SrcContext.of([("x", S_BOOL)]),
    SrcContext.of([("f", BOOL_TO_BOOL)]),
)
BASE = (S_UNIT, S_BOOL)
NAMES = ("x", "y", "z")
FUNC_NAMES = ("f", "g")


@dataclass(frozen=True)
class GenConfig:
    """Generation parameters; the same config always yields the same corpus."""

    seed: int = DEFAULT_SEED
    max_depth: int = 5
    type_weights: dict = field(default_factory=lambda: dict(DEFAULT_TYPE_WEIGHTS), hash=False)
    sig: EffectSignature = PURE
    count: int = 500
    closed_ratio: float = 0.5
    leaf_bias: float = 0.25


@dataclass(frozen=True)
class Instance:
    """One generated judgement ``ctx ⊢ expr : ty``."""

    index: int
    ctx: SrcContext
    expr: SrcExpr
    ty: SrcType

    @property
    def closed(self) -> bool:
        return len(self.ctx) == 0


def instance_rng(cfg: GenConfig, index: int) -> random.Random:
    return random.Random(f"{cfg.seed}/{cfg.sig.value}/{index}")


def gen_instance(cfg: GenConfig, index: int) -> Instance:
    rng = instance_rng(cfg, index)
    types = list(cfg.type_weights)
    ty = rng.choices(types, weights=[cfg.type_weights[t] for t in types])[0]
    ctx = CONTEXTS[0] if rng.random() < cfg.closed_ratio else rng.choice(CONTEXTS[1:])
    return Instance(index, ctx, _Gen(cfg, rng).expr(ctx, ty, cfg.max_depth), ty)


def corpus(cfg: GenConfig) -> list[Instance]:
    return [gen_instance(cfg, i) for i in range(cfg.count)]


def gen_expr(cfg: GenConfig, ctx, ty: SrcType, rng: random.Random | None = None,
             depth: int | None = None) -> SrcExpr:
    """A random expression with ``ctx ⊢ e : ty`` under ``cfg.sig``."""
    ctx = ctx if isinstance(ctx, SrcContext) else SrcContext.of(ctx)
    rng = rng if rng is not None else random.Random(cfg.seed)
    return _Gen(cfg, rng).expr(ctx, ty, cfg.max_depth if depth is None else depth)


class _Gen:
    def __init__(self, cfg: GenConfig, rng: random.Random):
        self.cfg = cfg
        self.rng = rng

    def expr(self, ctx: SrcContext, ty: SrcType, depth: int) -> SrcExpr:
        rng = self.rng
        if depth <= 0 or rng.random() < self.cfg.leaf_bias:
            return self.leaf(ctx, ty, depth)
        options = self.options(ctx, ty, depth)
        weights = [w for w, _ in options]
        _, build = rng.choices(options, weights=weights)[0]
        return build()

    def variables(self, ctx: SrcContext, ty: SrcType) -> list[str]:
        return [x for x, t in ctx if t == ty]

    def leaf(self, ctx: SrcContext, ty: SrcType, depth: int = 0) -> SrcExpr:
        rng = self.rng
        names = self.variables(ctx, ty)
        if names and rng.random() < 0.6:
            return SVar(rng.choice(names))
        if self.cfg.sig is NONDET and rng.random() < 0.1:
            return SFail(ty)
        match ty:
            case SUnit():
                return SUNIT
            case SBool():
                return rng.choice((STRUE, SFALSE))
            case SProd(a, b):
                return SPair(self.leaf(ctx, a), self.leaf(ctx, b))
            case SArrow(a, b):
                x = rng.choice(NAMES)
                return SLam(x, a, self.leaf(ctx.extend(x, a), b))
        raise TypeError(f"not a source type: {ty!r}")

    def options(self, ctx: SrcContext, ty: SrcType, depth: int):
        rng, d = self.rng, depth - 1
        opts = []
        if self.variables(ctx, ty):
            opts.append((2, lambda: SVar(rng.choice(self.variables(ctx, ty)))))
        match ty:
            case SProd(a, b):
                opts.append((3, lambda: SPair(self.expr(ctx, a, d), self.expr(ctx, b, d))))
            case SArrow(a, b):
                def lam():
                    x = rng.choice(NAMES)
                    return SLam(x, a, self.expr(ctx.extend(x, a), b, d))
                opts.append((4, lam))
            case _:
                opts.append((1, lambda: self.leaf(ctx, ty)))
        opts.append((2, lambda: SIf(self.expr(ctx, S_BOOL, d), self.expr(ctx, ty, d),
                                    self.expr(ctx, ty, d))))
        if not isinstance(ty, SArrow):
            def app():
                # functions into products take unit, keeping their downset carriers small
                a = S_UNIT if isinstance(ty, SProd) else rng.choice(BASE)
                return SApp(self.expr(ctx, SArrow(a, ty), d), self.expr(ctx, a, d))
            opts.append((3, app))
        if isinstance(ty, (SUnit, SBool)):
            def proj():
                other = rng.choice(BASE)
                if rng.random() < 0.5:
                    return SFst(self.expr(ctx, SProd(ty, other), d))
                return SSnd(self.expr(ctx, SProd(other, ty), d))
            opts.append((1, proj))
            if self.cfg.sig is DIV:
                opts.append((1, lambda: self.recursive(ctx, ty, d)))
                opts.append((0.3, lambda: omega(ty)))
        if self.cfg.sig is NONDET:
            opts.append((2, lambda: SOr(self.expr(ctx, ty, d), self.expr(ctx, ty, d))))
            opts.append((0.5, lambda: SFail(ty)))
        return opts

    def recursive(self, ctx: SrcContext, ty: SrcType, depth: int) -> SrcExpr:
        """An applied recursive function ``(rec f x. body) arg``."""
        rng = self.rng
        a = rng.choice(BASE)
        f, x = rng.choice(FUNC_NAMES), rng.choice(NAMES)
        inner = ctx.extend(f, SArrow(a, ty)).extend(x, a)
        body = self.expr(inner, ty, depth)
        return SApp(SRecFun(f, a, ty, x, body), self.expr(ctx, a, depth))
