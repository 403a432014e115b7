"""Big-step evaluation with fuel, collecting every nondeterministic outcome."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import IllTyped, TypingError
from .sexpr import show
from .report import FAIL, INCONCLUSIVE, PASS, CheckReport
from .subst import substitute
from .syntax import (
    BOOL, CompTerm, F, Fail, Force, If, MatchPair, Or, Pair, Proj, Push, Rec,
    Return, Thunk, To, ValueTerm, BoolLit, is_terminal,
)
from .typecheck import EffectSignature, check_comp, infer_sig


@dataclass(frozen=True)
class EvalOutcome:
    """All terminals reached within fuel; ``exhausted`` marks a cut branch."""

    terminals: frozenset
    exhausted: bool


class _Budget:
    __slots__ = ("exhausted", "steps")

    def __init__(self) -> None:
        self.exhausted = False
        self.steps = 0


def eval_comp(m: CompTerm, fuel: int, sig: EffectSignature | None = None, check: bool = True) -> EvalOutcome:
    """Evaluate a closed computation, exploring every derivation.

    Every rule application costs one unit of fuel along its branch; a
    branch that runs dry contributes nothing and sets ``exhausted``.
    """
    if fuel < 1:
        raise ValueError("fuel must be positive")
    if check:
        _require_typed(m, sig)
    budget = _Budget()
    found = _run(m, fuel, budget)
    return EvalOutcome(frozenset(found), budget.exhausted)


def _require_typed(m: CompTerm, sig: EffectSignature | None):
    try:
        sig = infer_sig(m) if sig is None else sig
        return check_comp((), m, sig)
    except (TypingError, ValueError) as exc:
        raise IllTyped(f"evaluation needs a closed well-typed computation: {exc}") from exc


def _run(m: CompTerm, fuel: int, budget: _Budget) -> dict:
    """Map each reachable terminal to the most fuel left on reaching it."""
    out: dict = {}
    stack = [(m, fuel)]
    while stack:
        m, fuel = stack.pop()
        if fuel <= 0:
            budget.exhausted = True
            continue
        fuel -= 1
        budget.steps += 1
        if is_terminal(m):
            if out.get(m, -1) < fuel:
                out[m] = fuel
            continue
        match m:
            case Push(v, fn):
                for r, left in _run(fn, fuel, budget).items():
                    stack.append((substitute(r.body, {r.var: v}), left))
            case To(first, x, then):
                for r, left in _run(first, fuel, budget).items():
                    stack.append((substitute(then, {x: r.value}), left))
            case If(BoolLit(b), then, orelse):
                stack.append((then if b else orelse, fuel))
            case Force(Thunk(body)):
                stack.append((body, fuel))
            case Proj(i, body):
                for r, left in _run(body, fuel, budget).items():
                    stack.append((r.left if i == 1 else r.right, left))
            case MatchPair(Pair(a, b), x1, x2, body):
                stack.append((substitute(body, {x1: a, x2: b}), fuel))
            case Rec(x, _, body):
                stack.append((substitute(body, {x: Thunk(m)}), fuel))
            case Fail():
                pass
            case Or(a, b):
                stack.append((b, fuel))
                stack.append((a, fuel))
            case _:
                raise IllTyped(f"stuck computation {m!r}")
    return out


def results(m: CompTerm, fuel: int, sig: EffectSignature | None = None,
            check: bool = True) -> tuple[frozenset[ValueTerm], bool]:
    """Values ``V`` with ``m`` evaluating to ``return V``, plus the exhaustion flag."""
    if check:
        ty = _require_typed(m, sig)
        if not isinstance(ty, F):
            raise IllTyped(f"results needs a returner type, got {ty}")
    out = eval_comp(m, fuel, sig, check=False)
    return frozenset(r.value for r in out.terminals if isinstance(r, Return)), out.exhausted


class ProgramRelation(enum.Enum):
    """Preorders on closed programs of type ``F bool``."""

    RESULT_EQ = "eq"
    RESULT_IMPL = "impl"
    INDISCRETE = "indiscrete"

    @classmethod
    def parse(cls, text: str) -> "ProgramRelation":
        return cls(text.lower())


def relate_programs(m: CompTerm, m2: CompTerm, rel: ProgramRelation, fuel: int,
                    name: str = "relate_programs") -> CheckReport:
    """Decide ``m ≾ m2`` for the chosen relation from the collected results.

    ``inconclusive`` is reported whenever exhausted fuel leaves the answer
    open. For the implication relation an exhausted left side still
    passes when everything it produced is matched on the right; the
    ``left_exhausted`` stat records that case.
    """
    for side in (m, m2):
        ty = _require_typed(side, None)
        if ty != F(BOOL):
            raise IllTyped(f"programs have type (F bool), got {ty}")
    left, lex = results(m, fuel, check=False)
    right, rex = results(m2, fuel, check=False)
    stats = {
        "relation": rel.value,
        "fuel": fuel,
        "left": sorted(show(v) for v in left),
        "right": sorted(show(v) for v in right),
        "left_exhausted": lex,
        "right_exhausted": rex,
    }
    base = {"left_term": show(m), "right_term": show(m2), "relation": rel.value, "fuel": fuel}
    repro = {"check": "relate_programs", **base}

    if rel is ProgramRelation.INDISCRETE:
        return CheckReport(name, PASS, stats=stats)
    if rel is ProgramRelation.RESULT_EQ:
        common = left & right
        if common:
            return CheckReport(name, PASS, stats=stats)
        if lex or rex:
            return CheckReport(name, INCONCLUSIVE, stats=stats)
        return CheckReport(name, FAIL, {
            "message": "no result is shared by both programs", "repro": repro,
            "left": stats["left"], "right": stats["right"]}, stats)
    missing = left - right
    if not missing:
        return CheckReport(name, PASS, stats=stats)
    if rex:
        return CheckReport(name, INCONCLUSIVE, stats=stats)
    v = sorted(show(x) for x in missing)[0]
    return CheckReport(name, FAIL, {
        "message": f"left returns {v} but right never does", "value": v, "repro": repro}, stats)
