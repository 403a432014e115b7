"""Independent brute-force oracles used to freeze derived test values."""

from __future__ import annotations

import itertools

from cbpv.syntax import (
    BoolLit, CompPair, Fail, Force, If, Lam, MatchPair, Or, Pair, Proj, Push, Rec,
    Return, Thunk, To, UnitVal, Var,
)


def debruijn(t, scope=()):
    """Nameless form: bound variables become ``("bv", k)``, free ones stay named."""
    d = lambda u, *names: debruijn(u, tuple(reversed(names)) + scope)  # noqa: E731
    match t:
        case Var(x):
            return ("bv", scope.index(x)) if x in scope else ("fv", x)
        case UnitVal():
            return ("unit",)
        case BoolLit(b):
            return ("bool", b)
        case Pair(a, b):
            return ("pair", d(a), d(b))
        case Thunk(m):
            return ("thunk", d(m))
        case Lam(x, ty, m):
            return ("lam", ty, d(m, x))
        case Push(v, m):
            return ("push", d(v), d(m))
        case Return(v):
            return ("return", d(v))
        case To(m, x, n):
            return ("to", d(m), d(n, x))
        case If(v, m1, m2):
            return ("if", d(v), d(m1), d(m2))
        case Force(v):
            return ("force", d(v))
        case CompPair(m1, m2):
            return ("cpair", d(m1), d(m2))
        case Proj(i, m):
            return ("proj", i, d(m))
        case MatchPair(v, x1, x2, m):
            return ("match", d(v), d(m, x1, x2))
        case Rec(x, ty, m):
            return ("rec", ty, d(m, x))
        case Fail(ty):
            return ("fail", ty)
        case Or(m1, m2):
            return ("or", d(m1), d(m2))
    raise TypeError(t)


_BINDING = {"lam": {2: 1}, "to": {2: 1}, "match": {2: 2}, "rec": {2: 1}}


def _cut(node, i, cutoff):
    if i == 0 or not node or not isinstance(node[0], str):
        return cutoff
    return cutoff + _BINDING.get(node[0], {}).get(i, 0)


def db_subst(n, x, v, depth=0):
    """Replace free name ``x`` in nameless ``n`` by nameless value ``v``."""
    # the value's own free variables stay named, so no index shifting is needed
    if n == ("fv", x):
        return v
    if isinstance(n, tuple) and n and n[0] in ("bv", "fv"):
        return n
    if isinstance(n, tuple):
        return tuple(db_subst(c, x, v, _cut(n, i, depth)) if isinstance(c, tuple) else c
                     for i, c in enumerate(n))
    return n


def order_count(leq):
    return sum(1 for a, b in itertools.product(range(len(leq)), repeat=2) if leq[a][b])


def monotone_tables(leq_dom, leq_cod):
    """All order-preserving tables, by filtering every function."""
    n, m = len(leq_dom), len(leq_cod)
    return [t for t in itertools.product(range(m), repeat=n)
            if all(leq_cod[t[a]][t[b]] for a in range(n) for b in range(n) if leq_dom[a][b])]


def downsets(leq):
    n = len(leq)
    out = []
    for mask in range(1 << n):
        if all(not (mask >> b) & 1 or (mask >> a) & 1
               for a in range(n) for b in range(n) if leq[a][b]):
            out.append(mask)
    return out


# ---------------------------------------------------------------- monads on explicit elements
#
# Each entry gives: the elements of T over a finite set, its order, unit, functorial action,
# seq, and the unit of the doubled monad, all on plain Python values.


def _subsets(xs):
    xs = list(xs)
    return [frozenset(c) for r in range(len(xs) + 1) for c in itertools.combinations(xs, r)]


def _words(generators, max_len):
    letters = "abcdefghijklmnopqrstuvwxyz"[:generators]
    return [""] + ["".join(w) for n in range(1, max_len + 1)
                   for w in itertools.product(letters, repeat=n)]


class ExplicitMonad:
    def __init__(self, kind, generators=2, max_len=3):
        self.kind = kind
        self.words = _words(generators, max_len)
        self.max_len = max_len

    def elements(self, xs):
        match self.kind:
            case "identity":
                return list(xs)
            case "lift":
                return [None] + [("v", x) for x in xs]
            case "downset":
                return _subsets(xs)
            case "writer":
                return [(x, w) for x in xs for w in self.words]

    def le(self, a, b):
        match self.kind:
            case "lift":
                return a is None or a == b
            case "downset":
                return a <= b
        return a == b

    def unit(self, x):
        match self.kind:
            case "identity":
                return x
            case "lift":
                return ("v", x)
            case "downset":
                return frozenset([x])
            case "writer":
                return (x, "")

    def fmap(self, f, t):
        match self.kind:
            case "identity":
                return f(t)
            case "lift":
                return None if t is None else ("v", f(t[1]))
            case "downset":
                return frozenset(f(x) for x in t)
            case "writer":
                return (f(t[0]), t[1])

    def seq(self, t1, t2):
        match self.kind:
            case "identity":
                return (t1, t2)
            case "lift":
                return None if t1 is None or t2 is None else ("v", (t1[1], t2[1]))
            case "downset":
                return frozenset((a, b) for a in t1 for b in t2)
            case "writer":
                return ((t1[0], t2[0]), (t1[1] + t2[1])[:self.max_len])

    def le_nested(self, a, b):
        """Order on T(T Y) for the downset monad compares sets of downsets."""
        if self.kind == "downset":
            return _down(a) <= _down(b)
        if self.kind == "lift":
            return a is None or (b is not None and self.le(a[1], b[1]))
        return a == b


def _down(family):
    """Downward closure of a set of subsets, under inclusion."""
    return frozenset(s for t in family for s in _subsets(t))


def side_effect_counts(kind, ys=(0, 1), xs=(0, 1), **kw):
    """Count maps ``xs -> T ys`` (all maps: the domain is discrete) passing each axiom."""
    m = ExplicitMonad(kind, **kw)
    ty = m.elements(ys)
    counts = {"maps": 0, "discardable": 0, "copyable": 0, "thunkable": 0}
    for table in itertools.product(ty, repeat=len(xs)):
        counts["maps"] += 1
        pts = list(table)
        if all(m.le(m.fmap(lambda _: "*", t), m.unit("*")) for t in pts):
            counts["discardable"] += 1
        if all(m.le(m.fmap(lambda y: (y, y), t), m.seq(t, t)) for t in pts):
            counts["copyable"] += 1
        if all(m.le_nested(m.fmap(m.unit, t), m.unit(t)) for t in pts):
            counts["thunkable"] += 1
    return counts
