"""Strong monads on finite posets and their Eilenberg-Moore algebras.

A monad is given by its object map ``T``, its unit and a pointwise bind.
The strong Kleisli extension acts on maps out of products: for
``f : W × X -> TY`` it returns ``extend(f) : W × TX -> TY``. ``seq`` and
``seqr`` are assembled literally from ``extend`` and ``extendr``.
"""

from __future__ import annotations

import itertools
from typing import Callable, Sequence

import numpy as np

from .posets import (
    DownsetPoset, ExpPoset, FinitePoset, LiftPoset, MonotoneMap, ProductPoset, compose,
    curry, discrete, exponential, identity, pair, product, proj1, proj2, swap, terminal,
    uncurry,
)

Pointwise = Callable[[int], int]


def _as_fn(f) -> Pointwise:
    if callable(f):
        return f
    return lambda x: int(f[x])


class Monad:
    """Base class; subclasses provide ``_build``, ``eta_at`` and ``bind_at``."""

    name = "monad"

    def __init__(self) -> None:
        self._t: dict[FinitePoset, FinitePoset] = {}
        self._base: dict[int, FinitePoset] = {}

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"

    # -- object map
    def T(self, x: FinitePoset) -> FinitePoset:
        if x not in self._t:
            tx = self._build(x)
            self._t[x] = tx
            self._base[id(tx)] = x
        return self._t[x]

    def base_of(self, tx: FinitePoset) -> FinitePoset:
        """The ``X`` with ``T(X) is tx``."""
        try:
            return self._base[id(tx)]
        except KeyError:
            raise ValueError(f"{tx.name} is not an image of {self.name}") from None

    def _build(self, x: FinitePoset) -> FinitePoset:
        raise NotImplementedError

    def eta_at(self, x: FinitePoset, a: int) -> int:
        raise NotImplementedError

    def bind_at(self, x: FinitePoset, y: FinitePoset, t: int, f) -> int:
        """Kleisli extension at one point: ``t ∈ TX``, ``f : X -> TY``."""
        raise NotImplementedError

    # -- morphism level
    def unit(self, x: FinitePoset) -> MonotoneMap:
        return MonotoneMap(x, self.T(x), [self.eta_at(x, a) for a in range(x.size)], check=False)

    def extend(self, f: MonotoneMap) -> MonotoneMap:
        """Strong extension ``W × X -> TY`` to ``W × TX -> TY``."""
        src = f.dom
        if not isinstance(src, ProductPoset):
            raise ValueError("strong extension needs a map out of a product")
        w, x = src.left, src.right
        y = self.base_of(f.cod)
        tx = self.T(x)
        rows = f.table.reshape(w.size, x.size)
        dst = product(w, tx)
        table = [self.bind_at(x, y, t, rows[i]) for i in range(w.size) for t in range(tx.size)]
        return MonotoneMap(dst, f.cod, table, check=False)

    def extendr(self, f: MonotoneMap) -> MonotoneMap:
        """Right-handed extension ``X × W -> TY`` to ``TX × W -> TY``."""
        src = f.dom
        x, w = src.left, src.right
        return compose(self.extend(compose(f, swap(w, x))), swap(self.T(x), w))

    def kleisli(self, f: MonotoneMap) -> MonotoneMap:
        """Unary extension of ``f : X -> TY`` to ``TX -> TY``."""
        one = terminal()
        lifted = self.extend(compose(f, proj2(product(one, f.dom))))
        tx = self.T(f.dom)
        to_pair = pair(MonotoneMap(tx, one, np.zeros(tx.size, dtype=np.int64), check=False), identity(tx))
        return compose(lifted, to_pair)

    def tmap(self, f: MonotoneMap) -> MonotoneMap:
        """Functor action ``T f``."""
        return self.kleisli(compose(self.unit(f.cod), f))

    def seq(self, x1: FinitePoset, x2: FinitePoset) -> MonotoneMap:
        """Left-to-right sequencing ``TX1 × TX2 -> T(X1 × X2)``."""
        return self.extendr(self.extend(self.unit(product(x1, x2))))

    def seqr(self, x1: FinitePoset, x2: FinitePoset) -> MonotoneMap:
        """Right-to-left sequencing ``TX1 × TX2 -> T(X1 × X2)``."""
        return self.extend(self.extendr(self.unit(product(x1, x2))))

    def seq_at(self, x1: FinitePoset, x2: FinitePoset, t1: int, t2: int) -> int:
        """Pointwise form of ``seq``: run ``t1`` then ``t2``."""
        p = product(x1, x2)
        return self.bind_at(x1, p, t1, lambda a: self.bind_at(
            x2, p, t2, lambda b: self.eta_at(p, p.index(a, b))))


class IdentityMonad(Monad):
    name = "identity"

    def _build(self, x: FinitePoset) -> FinitePoset:
        return x

    def eta_at(self, x, a):
        return a

    def bind_at(self, x, y, t, f):
        return _as_fn(f)(t)


class LiftMonad(Monad):
    """Adds a least element ``⊥`` (index 0) modelling divergence."""

    name = "lift"

    def _build(self, x):
        return LiftPoset(x)

    def eta_at(self, x, a):
        return a + 1

    def bind_at(self, x, y, t, f):
        return 0 if t == 0 else _as_fn(f)(t - 1)


class DownsetMonad(Monad):
    """Finite-join completion: downsets ordered by inclusion."""

    name = "downset"

    def _build(self, x):
        return DownsetPoset(x)

    def eta_at(self, x, a):
        return self.T(x).principal(a)

    def bind_at(self, x, y, t, f):
        f = _as_fn(f)
        tx, ty = self.T(x), self.T(y)
        mask = 0
        src = tx.masks[t]
        b = 0
        while src:
            if src & 1:
                mask |= ty.masks[f(b)]
            src >>= 1
            b += 1
        return ty.index(mask)


class Monoid:
    """Free monoid on ``generators`` letters, words cut to their first ``max_len`` letters."""

    def __init__(self, generators: int = 2, max_len: int = 3):
        if generators < 1 or max_len < 1:
            raise ValueError("need at least one generator and length one")
        letters = "abcdefghijklmnopqrstuvwxyz"[:generators]
        words = [""]
        for n in range(1, max_len + 1):
            words += ["".join(w) for w in itertools.product(letters, repeat=n)]
        self.generators = generators
        self.max_len = max_len
        self.words = words
        self._index = {w: i for i, w in enumerate(words)}
        n = len(words)
        self.table = np.array([[self._index[(words[i] + words[j])[:max_len]] for j in range(n)]
                               for i in range(n)], dtype=np.int64)

    def __len__(self) -> int:
        return len(self.words)

    def mul(self, i: int, j: int) -> int:
        return int(self.table[i, j])

    def index(self, word: str) -> int:
        return self._index[word]

    def label(self, i: int) -> str:
        return self.words[i] or "ε"


class WriterMonad(Monad):
    """``TX = X × Σ`` with ``Σ`` discrete; effects concatenate left to right.

    Deliberately not lax idempotent: it is the negative control.
    """

    name = "writer"

    def __init__(self, generators: int = 2, max_len: int = 3):
        super().__init__()
        self.monoid = Monoid(generators, max_len)
        m = self.monoid
        self.sigma = discrete(len(m), [m.label(i) for i in range(len(m))], f"Σ{generators},{max_len}")

    def _build(self, x):
        return product(x, self.sigma)

    def eta_at(self, x, a):
        return a * len(self.monoid)

    def bind_at(self, x, y, t, f):
        k = len(self.monoid)
        a, s = divmod(t, k)
        b, u = divmod(_as_fn(f)(a), k)
        return b * k + self.monoid.mul(s, u)

    def tell(self, x: FinitePoset, a: int, word: str) -> int:
        """Element of ``TX`` returning ``a`` after emitting ``word``."""
        return a * len(self.monoid) + self.monoid.index(word)


def identity_monad() -> IdentityMonad:
    return IdentityMonad()


def lift_monad() -> LiftMonad:
    return LiftMonad()


def downset_monad() -> DownsetMonad:
    return DownsetMonad()


def writer_monad(generators: int = 2, max_len: int = 3) -> WriterMonad:
    return WriterMonad(generators, max_len)


# --------------------------------------------------------------- algebras


class Algebra:
    """Eilenberg-Moore algebra: a carrier with an extension operator."""

    def __init__(self, monad: Monad, carrier: FinitePoset):
        self.monad = monad
        self.carrier = carrier

    def ext_at(self, x: FinitePoset, t: int, f) -> int:
        """Pointwise extension: ``t ∈ TX`` and ``f : X -> carrier``."""
        raise NotImplementedError

    def algextend(self, f: MonotoneMap) -> MonotoneMap:
        """Morphism-level extension ``W × X -> Z`` to ``W × TX -> Z``."""
        raise NotImplementedError

    def algextend_pointwise(self, f: MonotoneMap) -> MonotoneMap:
        """The same map as :meth:`algextend`, computed through ``ext_at``."""
        src = f.dom
        w, x = src.left, src.right
        tx = self.monad.T(x)
        rows = f.table.reshape(w.size, x.size)
        dst = product(w, tx)
        table = [self.ext_at(x, t, rows[i]) for i in range(w.size) for t in range(tx.size)]
        return MonotoneMap(dst, self.carrier, table, check=False)

    def bottom(self) -> int | None:
        return self.carrier.bottom()

    def join(self, a: int, b: int) -> int | None:
        return self.carrier.join(a, b)


class FreeAlgebra(Algebra):
    def __init__(self, monad: Monad, x: FinitePoset):
        super().__init__(monad, monad.T(x))
        self.base = x

    def ext_at(self, x, t, f):
        return self.monad.bind_at(x, self.base, t, f)

    def algextend(self, f):
        return self.monad.extend(f)

    def __repr__(self) -> str:
        return f"<FreeAlgebra {self.carrier.name}>"


class ProductAlgebra(Algebra):
    def __init__(self, left: Algebra, right: Algebra):
        super().__init__(left.monad, product(left.carrier, right.carrier))
        self.left = left
        self.right = right

    def ext_at(self, x, t, f):
        f = _as_fn(f)
        k = self.right.carrier.size
        a = self.left.ext_at(x, t, lambda b: f(b) // k)
        c = self.right.ext_at(x, t, lambda b: f(b) % k)
        return a * k + c

    def algextend(self, f):
        return pair(self.left.algextend(compose(proj1(self.carrier), f)),
                    self.right.algextend(compose(proj2(self.carrier), f)))


def beta(x1: FinitePoset, x2: FinitePoset, x3: FinitePoset) -> MonotoneMap:
    """``(X1 × X2) × X3 -> (X1 × X3) × X2``."""
    inner = product(x1, x2)
    src = product(inner, x3)
    p1, p2 = proj1(src), proj2(src)
    return pair(pair(compose(proj1(inner), p1), p2), compose(proj2(inner), p1))


class ExpAlgebra(Algebra):
    """Algebra on monotone maps ``Y -> Z`` with pointwise structure."""

    def __init__(self, y: FinitePoset, z: Algebra):
        super().__init__(z.monad, exponential(y, z.carrier))
        self.dom = y
        self.body = z

    def ext_at(self, x, t, f):
        f = _as_fn(f)
        e: ExpPoset = self.carrier
        table = [self.body.ext_at(x, t, lambda b, yy=yy: e.tables[f(b)][yy]) for yy in range(self.dom.size)]
        return e.index(table)

    def algextend(self, f):
        src = f.dom
        w, x = src.left, src.right
        tx = self.monad.T(x)
        inner = self.body.algextend(compose(uncurry(f), beta(w, self.dom, x)))
        return curry(compose(inner, beta(w, tx, self.dom)))


def free_algebra(monad: Monad, x: FinitePoset) -> FreeAlgebra:
    return FreeAlgebra(monad, x)


def product_algebra(a: Algebra, b: Algebra) -> ProductAlgebra:
    return ProductAlgebra(a, b)


def exponential_algebra(y: FinitePoset, z: Algebra) -> ExpAlgebra:
    return ExpAlgebra(y, z)


def least_fixpoint(carrier, f) -> int:
    """Least fixed point of a monotone ``f`` on a carrier with a least element.

    ``carrier`` may be an :class:`Algebra` or a :class:`FinitePoset`; ``f``
    a :class:`MonotoneMap` or a callable on indices.
    """
    poset = carrier.carrier if isinstance(carrier, Algebra) else carrier
    bot = poset.bottom()
    if bot is None:
        raise ValueError(f"{poset.name} has no least element")
    fn = f if callable(f) and not isinstance(f, MonotoneMap) else (lambda i: f(i))
    x = bot
    for _ in range(poset.size + 1):
        nxt = fn(x)
        if nxt == x:
            return x
        x = nxt
    raise RuntimeError("iteration did not stabilise; is the map monotone?")


# ------------------------------------------------------------ law checks


def law_violations_monad(monad: Monad, w: FinitePoset, x: FinitePoset, y: FinitePoset,
                         z: FinitePoset, fs: Sequence[MonotoneMap], gs: Sequence[MonotoneMap]) -> list[str]:
    """Check the three strong-monad laws for the given test maps.

    ``fs`` are maps ``W × X -> TY``, ``gs`` maps ``W × Y -> TZ``.
    Returns a description of each violated instance.
    """
    bad = []
    wx = product(w, x)
    wtx = product(w, monad.T(x))
    w_eta = pair(proj1(wx), compose(monad.unit(x), proj2(wx)))
    for i, f in enumerate(fs):
        if compose(monad.extend(f), w_eta) != f:
            bad.append(f"unit law fails for f#{i}")
    if monad.extend(compose(monad.unit(x), proj2(wx))) != proj2(wtx):
        bad.append("extend(eta . pi2) differs from pi2")
    for i, f in enumerate(fs):
        ef = monad.extend(f)
        for j, g in enumerate(gs):
            eg = monad.extend(g)
            lhs = monad.extend(compose(eg, pair(proj1(wx), f)))
            rhs = compose(eg, pair(proj1(wtx), ef))
            if lhs != rhs:
                bad.append(f"associativity fails for f#{i}, g#{j}")
    return bad


def law_violations_algebra(alg: Algebra, w: FinitePoset, x: FinitePoset, y: FinitePoset,
                           fs: Sequence[MonotoneMap], gs: Sequence[MonotoneMap]) -> list[str]:
    """Algebra unit and associativity laws; ``fs : W × X -> TY``, ``gs : W × Y -> Z``."""
    monad = alg.monad
    bad = []
    wy = product(w, y)
    wx = product(w, x)
    wtx = product(w, monad.T(x))
    w_eta = pair(proj1(wy), compose(monad.unit(y), proj2(wy)))
    for j, g in enumerate(gs):
        if compose(alg.algextend(g), w_eta) != g:
            bad.append(f"unit law fails for g#{j}")
    for i, f in enumerate(fs):
        ef = monad.extend(f)
        for j, g in enumerate(gs):
            eg = alg.algextend(g)
            lhs = alg.algextend(compose(eg, pair(proj1(wx), f)))
            rhs = compose(eg, pair(proj1(wtx), ef))
            if lhs != rhs:
                bad.append(f"associativity fails for f#{i}, g#{j}")
    return bad
