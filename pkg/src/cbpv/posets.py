"""Finite posets and monotone maps, with cartesian closed structure.

Elements of a poset are the integers ``0 .. size-1``; the order is a boolean
matrix. Constructions fix their element order so reports are stable:
products are row-major, exponentials list monotone tables in
lexicographic order, downsets are bitmasks in numeric order.

Every carrier is checked against a size budget (4096 elements unless
changed with :func:`set_budget` or :func:`budget`); exceeding it raises
:class:`SizeBudgetExceeded` instead of truncating.
"""

from __future__ import annotations

import contextlib
import functools
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import SizeBudgetExceeded

DEFAULT_BUDGET = 4096
_budget = [DEFAULT_BUDGET]


def get_budget() -> int:
    return _budget[0]


def set_budget(n: int) -> None:
    if n < 1:
        raise ValueError("budget must be positive")
    _budget[0] = n


@contextlib.contextmanager
def budget(n: int) -> Iterator[None]:
    old = _budget[0]
    set_budget(n)
    try:
        yield
    finally:
        _budget[0] = old


def _within_budget(what: str, size: int) -> None:
    if size > _budget[0]:
        raise SizeBudgetExceeded(what, size, _budget[0])


# ----------------------------------------------------------------- posets


class FinitePoset:
    """A finite partial order on ``range(size)``.

    ``check=True`` verifies reflexivity, antisymmetry and transitivity.
    Derived constructions pass ``check=False``; their validity follows
    from the construction and is covered by tests on small cases.
    """

    def __init__(self, leq, labels: Sequence[str] | None = None, name: str = "poset",
                 check: bool = True):
        leq = np.array(leq, dtype=bool)
        if leq.ndim != 2 or leq.shape[0] != leq.shape[1]:
            raise ValueError("order matrix must be square")
        _within_budget(name, leq.shape[0])
        leq.setflags(write=False)
        self.leq = leq
        self.size = leq.shape[0]
        self.name = name
        self._labels = list(labels) if labels is not None else None
        self._join_cache: dict[tuple[int, int], int | None] = {}
        if check:
            self.validate()

    def validate(self) -> None:
        m = self.leq
        if not m.diagonal().all():
            raise ValueError(f"{self.name}: order is not reflexive")
        if (m & m.T & ~np.eye(self.size, dtype=bool)).any():
            raise ValueError(f"{self.name}: order is not antisymmetric")
        mi = m.astype(np.int32)
        if ((mi @ mi > 0) & ~m).any():
            raise ValueError(f"{self.name}: order is not transitive")

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name} size={self.size}>"

    def elements(self) -> range:
        return range(self.size)

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])

    def label(self, i: int) -> str:
        if self._labels is not None:
            return self._labels[i]
        return str(i)

    @property
    def is_discrete(self) -> bool:
        return bool((self.leq == np.eye(self.size, dtype=bool)).all())

    def bottom(self) -> int | None:
        """The least element, if there is one."""
        rows = np.flatnonzero(self.leq.all(axis=1))
        return int(rows[0]) if rows.size else None

    def top(self) -> int | None:
        cols = np.flatnonzero(self.leq.all(axis=0))
        return int(cols[0]) if cols.size else None

    def join(self, a: int, b: int) -> int | None:
        """Least upper bound of ``a`` and ``b``, or ``None`` if there is none."""
        key = (a, b) if a <= b else (b, a)
        if key not in self._join_cache:
            upper = np.flatnonzero(self.leq[a] & self.leq[b])
            found = None
            for u in upper:
                if self.leq[u, upper].all():
                    found = int(u)
                    break
            self._join_cache[key] = found
        return self._join_cache[key]

    def join_all(self, items: Sequence[int]) -> int | None:
        acc = self.bottom()
        for x in items:
            if acc is None:
                return None
            acc = self.join(acc, x)
        return acc

    def has_all_joins(self) -> bool:
        """Bottom exists and every pair has a join."""
        if self.bottom() is None:
            return False
        return all(self.join(a, b) is not None for a in range(self.size) for b in range(a, self.size))

    def dump(self) -> str:
        """Textual matrix form, readable back with :func:`parse_dump`."""
        lines = [f"poset {self.name} {self.size}"]
        lines.append("labels " + "\t".join(self.label(i) for i in range(self.size)))
        for row in self.leq:
            lines.append("".join("1" if x else "0" for x in row))
        return "\n".join(lines) + "\n"


def parse_dump(text: str) -> FinitePoset:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    if head[0] != "poset":
        raise ValueError("not a poset dump")
    n = int(head[-1])
    name = " ".join(head[1:-1]) or "poset"
    labels = lines[1][len("labels "):].split("\t") if n else []
    rows = [[c == "1" for c in ln.strip()] for ln in lines[2:2 + n]]
    return FinitePoset(np.array(rows, dtype=bool).reshape(n, n), labels, name)


def discrete(n: int, labels: Sequence[str] | None = None, name: str | None = None) -> FinitePoset:
    return FinitePoset(np.eye(n, dtype=bool), labels, name or f"discrete{n}")


def chain(n: int) -> FinitePoset:
    return FinitePoset(np.triu(np.ones((n, n), dtype=bool)), [str(i) for i in range(n)], f"chain{n}")


@functools.lru_cache(maxsize=None)
def terminal() -> FinitePoset:
    return FinitePoset(np.ones((1, 1), dtype=bool), ["*"], "1")


@functools.lru_cache(maxsize=None)
def two() -> FinitePoset:
    """Discrete two-element poset; index 0 is ``tt`` (inl), 1 is ``ff`` (inr)."""
    return FinitePoset(np.eye(2, dtype=bool), ["tt", "ff"], "2")


class ProductPoset(FinitePoset):
    """Componentwise order; element ``(i, j)`` has index ``i * |right| + j``."""

    def __init__(self, left: FinitePoset, right: FinitePoset):
        self.left = left
        self.right = right
        _within_budget(f"{left.name} x {right.name}", left.size * right.size)
        leq = np.kron(left.leq.astype(np.uint8), right.leq.astype(np.uint8)).astype(bool)
        super().__init__(leq, None, f"({left.name} x {right.name})", check=False)

    def index(self, i: int, j: int) -> int:
        return i * self.right.size + j

    def split(self, k: int) -> tuple[int, int]:
        return divmod(k, self.right.size)

    def label(self, k: int) -> str:
        i, j = self.split(k)
        return f"({self.left.label(i)}, {self.right.label(j)})"


class CoproductPoset(FinitePoset):
    """Disjoint union; side 0 elements come first."""

    def __init__(self, left: FinitePoset, right: FinitePoset):
        self.left = left
        self.right = right
        n = left.size + right.size
        _within_budget(f"{left.name} + {right.name}", n)
        leq = np.zeros((n, n), dtype=bool)
        leq[:left.size, :left.size] = left.leq
        leq[left.size:, left.size:] = right.leq
        super().__init__(leq, None, f"({left.name} + {right.name})", check=False)

    def label(self, k: int) -> str:
        if k < self.left.size:
            return f"inl {self.left.label(k)}"
        return f"inr {self.right.label(k - self.left.size)}"


def monotone_tables(dom: FinitePoset, cod: FinitePoset, limit: int | None = None) -> list[tuple[int, ...]]:
    """All monotone tables ``dom -> cod`` in lexicographic order.

    Raises :class:`SizeBudgetExceeded` once more than ``limit`` are found.
    """
    limit = get_budget() if limit is None else limit
    d, c = dom.size, cod.size
    below = [[q for q in range(p) if dom.leq[q, p]] for p in range(d)]
    above = [[q for q in range(p) if dom.leq[p, q]] for p in range(d)]
    cl = cod.leq
    out: list[tuple[int, ...]] = []
    table = [0] * d
    everything = np.ones(c, dtype=bool)

    def go(p: int) -> None:
        if p == d:
            out.append(tuple(table))
            if len(out) > limit:
                raise SizeBudgetExceeded(f"{cod.name}^{dom.name}", None, limit)
            return
        ok = everything
        for q in below[p]:
            ok = ok & cl[table[q]]
        for q in above[p]:
            ok = ok & cl[:, table[q]]
        for v in np.flatnonzero(ok):
            table[p] = int(v)
            go(p + 1)

    go(0)
    return out


class ExpPoset(FinitePoset):
    """Monotone maps ``dom -> cod`` ordered pointwise."""

    def __init__(self, dom: FinitePoset, cod: FinitePoset):
        self.dom = dom
        self.cod = cod
        self.tables = monotone_tables(dom, cod)
        self._index = {t: i for i, t in enumerate(self.tables)}
        arr = np.array(self.tables, dtype=np.int64).reshape(len(self.tables), dom.size)
        self.table_array = arr
        n = len(self.tables)
        leq = np.ones((n, n), dtype=bool)
        for p in range(dom.size):
            col = arr[:, p]
            leq &= cod.leq[np.ix_(col, col)]
        super().__init__(leq, None, f"({dom.name} -> {cod.name})", check=False)

    def index(self, table: Sequence[int]) -> int:
        return self._index[tuple(int(x) for x in table)]

    def apply(self, f: int, x: int) -> int:
        return self.tables[f][x]

    def label(self, k: int) -> str:
        return "[" + ", ".join(self.cod.label(v) for v in self.tables[k]) + "]"


class LiftPoset(FinitePoset):
    """``base`` with a fresh least element at index 0; ``x`` becomes ``x + 1``."""

    def __init__(self, base: FinitePoset):
        self.base = base
        n = base.size + 1
        _within_budget(f"lift {base.name}", n)
        leq = np.zeros((n, n), dtype=bool)
        leq[0, :] = True
        leq[1:, 1:] = base.leq
        super().__init__(leq, None, f"lift {base.name}", check=False)

    def label(self, k: int) -> str:
        return "⊥" if k == 0 else self.base.label(k - 1)


def downset_masks(base: FinitePoset, limit: int | None = None) -> list[int]:
    """Bitmasks of the downward-closed subsets of ``base``, numerically sorted."""
    limit = get_budget() if limit is None else limit
    n = base.size
    order = sorted(range(n), key=lambda x: int(base.leq[:, x].sum()))
    strict_below = [sum(1 << q for q in range(n) if q != x and base.leq[q, x]) for x in range(n)]
    out: list[int] = []

    def go(k: int, mask: int) -> None:
        if k == n:
            out.append(mask)
            if len(out) > limit:
                raise SizeBudgetExceeded(f"downsets of {base.name}", None, limit)
            return
        x = order[k]
        go(k + 1, mask)
        if strict_below[x] & mask == strict_below[x]:
            go(k + 1, mask | (1 << x))

    go(0, 0)
    out.sort()
    return out


class DownsetPoset(FinitePoset):
    """Downward-closed subsets of ``base`` ordered by inclusion."""

    def __init__(self, base: FinitePoset):
        self.base = base
        self.masks = downset_masks(base)
        self._index = {m: i for i, m in enumerate(self.masks)}
        n = len(self.masks)
        bits = np.array([[(m >> b) & 1 for b in range(base.size)] for m in self.masks],
                        dtype=np.int32).reshape(n, base.size)
        self.bits = bits.astype(bool)
        leq = (bits @ (1 - bits).T) == 0
        super().__init__(leq, None, f"down {base.name}", check=False)

    def index(self, mask: int) -> int:
        return self._index[mask]

    def members(self, k: int) -> list[int]:
        m = self.masks[k]
        return [b for b in range(self.base.size) if (m >> b) & 1]

    def principal(self, x: int) -> int:
        """Index of the downset generated by ``x``."""
        mask = 0
        for q in np.flatnonzero(self.base.leq[:, x]):
            mask |= 1 << int(q)
        return self._index[mask]

    def label(self, k: int) -> str:
        return "{" + ", ".join(self.base.label(b) for b in self.members(k)) + "}"


@functools.lru_cache(maxsize=None)
def _product(left: FinitePoset, right: FinitePoset) -> ProductPoset:
    return ProductPoset(left, right)


@functools.lru_cache(maxsize=None)
def _exponential(dom: FinitePoset, cod: FinitePoset) -> ExpPoset:
    return ExpPoset(dom, cod)


@functools.lru_cache(maxsize=None)
def _coproduct(left: FinitePoset, right: FinitePoset) -> CoproductPoset:
    return CoproductPoset(left, right)


def product(left: FinitePoset, right: FinitePoset) -> ProductPoset:
    p = _product(left, right)
    _within_budget(p.name, p.size)
    return p


def exponential(dom: FinitePoset, cod: FinitePoset) -> ExpPoset:
    p = _exponential(dom, cod)
    _within_budget(p.name, p.size)
    return p


def coproduct(left: FinitePoset, right: FinitePoset) -> CoproductPoset:
    return _coproduct(left, right)


# ------------------------------------------------------------ monotone maps


class MonotoneMap:
    """A monotone function given by its table of codomain indices."""

    __slots__ = ("dom", "cod", "table")

    def __init__(self, dom: FinitePoset, cod: FinitePoset, table, check: bool = True):
        t = np.asarray(table, dtype=np.int64).reshape(dom.size)
        if check:
            if dom.size and (t.min() < 0 or t.max() >= cod.size):
                raise ValueError("table entry outside the codomain")
            if not cod.leq[np.ix_(t, t)][dom.leq].all():
                bad = np.argwhere(dom.leq & ~cod.leq[np.ix_(t, t)])[0]
                raise ValueError(f"map is not monotone: {dom.label(bad[0])} <= {dom.label(bad[1])} "
                                 f"but images are unordered")
        t.setflags(write=False)
        self.dom = dom
        self.cod = cod
        self.table = t

    @classmethod
    def from_fn(cls, dom: FinitePoset, cod: FinitePoset, fn: Callable[[int], int],
                check: bool = True) -> "MonotoneMap":
        return cls(dom, cod, [fn(i) for i in range(dom.size)], check)

    def __call__(self, x: int) -> int:
        return int(self.table[x])

    def __repr__(self) -> str:
        return f"<MonotoneMap {self.dom.name} -> {self.cod.name}>"

    def __eq__(self, other) -> bool:
        return (isinstance(other, MonotoneMap) and self.dom is other.dom
                and self.cod is other.cod and bool((self.table == other.table).all()))

    def __hash__(self) -> int:
        return hash((id(self.dom), id(self.cod), self.table.tobytes()))

    def le(self, other: "MonotoneMap") -> bool:
        """Pointwise order."""
        _same_hom(self, other)
        return bool(self.cod.leq[self.table, other.table].all())

    def first_violation(self, other: "MonotoneMap") -> int | None:
        """Smallest ``x`` with ``self(x)`` not below ``other(x)``."""
        _same_hom(self, other)
        bad = np.flatnonzero(~self.cod.leq[self.table, other.table])
        return int(bad[0]) if bad.size else None

    def then(self, g: "MonotoneMap") -> "MonotoneMap":
        """``g`` after ``self``."""
        return compose(g, self)


def _same_hom(f: MonotoneMap, g: MonotoneMap) -> None:
    if f.dom is not g.dom or f.cod is not g.cod:
        raise ValueError(f"maps live in different hom-sets: {f} vs {g}")


def compose(*maps: MonotoneMap) -> MonotoneMap:
    """``compose(g, f)`` is ``g ∘ f``; more arguments compose right to left."""
    out = maps[-1]
    for g in reversed(maps[:-1]):
        if g.dom is not out.cod:
            raise ValueError(f"cannot compose {g} after {out}")
        out = MonotoneMap(out.dom, g.cod, g.table[out.table], check=False)
    return out


def identity(p: FinitePoset) -> MonotoneMap:
    return MonotoneMap(p, p, np.arange(p.size), check=False)


def const(dom: FinitePoset, cod: FinitePoset, y: int) -> MonotoneMap:
    return MonotoneMap(dom, cod, np.full(dom.size, y), check=False)


def bang(p: FinitePoset) -> MonotoneMap:
    return const(p, terminal(), 0)


def proj1(p: ProductPoset) -> MonotoneMap:
    return MonotoneMap(p, p.left, np.arange(p.size) // p.right.size, check=False)


def proj2(p: ProductPoset) -> MonotoneMap:
    return MonotoneMap(p, p.right, np.arange(p.size) % p.right.size, check=False)


def pair(f: MonotoneMap, g: MonotoneMap) -> MonotoneMap:
    if f.dom is not g.dom:
        raise ValueError("pairing needs a common domain")
    p = product(f.cod, g.cod)
    return MonotoneMap(f.dom, p, f.table * g.cod.size + g.table, check=False)


def product_map(f: MonotoneMap, g: MonotoneMap) -> MonotoneMap:
    """``f × g``."""
    src = product(f.dom, g.dom)
    return pair(compose(f, proj1(src)), compose(g, proj2(src)))


def swap(x: FinitePoset, y: FinitePoset) -> MonotoneMap:
    src = product(x, y)
    return pair(proj2(src), proj1(src))


def assoc(x: FinitePoset, y: FinitePoset, z: FinitePoset) -> MonotoneMap:
    """``(X × Y) × Z -> X × (Y × Z)``."""
    xy = product(x, y)
    src = product(xy, z)
    p1, p2 = proj1(src), proj2(src)
    return pair(compose(proj1(xy), p1), pair(compose(proj2(xy), p1), p2))


def assoc_inv(x: FinitePoset, y: FinitePoset, z: FinitePoset) -> MonotoneMap:
    """``X × (Y × Z) -> (X × Y) × Z``."""
    yz = product(y, z)
    src = product(x, yz)
    p1, p2 = proj1(src), proj2(src)
    return pair(pair(p1, compose(proj1(yz), p2)), compose(proj2(yz), p2))


def curry(f: MonotoneMap) -> MonotoneMap:
    """``A × B -> C`` becomes ``A -> (B -> C)``."""
    src = f.dom
    if not isinstance(src, ProductPoset):
        raise ValueError("curry needs a map out of a product")
    e = exponential(src.right, f.cod)
    rows = f.table.reshape(src.left.size, src.right.size)
    return MonotoneMap(src.left, e, [e.index(r) for r in rows], check=False)


def uncurry(g: MonotoneMap) -> MonotoneMap:
    """``A -> (B -> C)`` becomes ``A × B -> C``."""
    e = g.cod
    if not isinstance(e, ExpPoset):
        raise ValueError("uncurry needs a map into an exponential")
    src = product(g.dom, e.dom)
    return MonotoneMap(src, e.cod, e.table_array[g.table].reshape(-1), check=False)


def ev(dom: FinitePoset, cod: FinitePoset) -> MonotoneMap:
    """Evaluation ``(dom -> cod) × dom -> cod``."""
    e = exponential(dom, cod)
    return uncurry(identity(e))


def exp_map(f: MonotoneMap, g: MonotoneMap) -> MonotoneMap:
    """``f -> g : (B -> C) -> (A -> D)`` for ``f : A -> B`` and ``g : C -> D``."""
    src = exponential(f.cod, g.dom)
    dst = exponential(f.dom, g.cod)
    tables = g.table[src.table_array[:, f.table]]
    return MonotoneMap(src, dst, [dst.index(t) for t in tables], check=False)


def inl() -> MonotoneMap:
    return const(terminal(), two(), 0)


def inr() -> MonotoneMap:
    return const(terminal(), two(), 1)


def copair(f: MonotoneMap, g: MonotoneMap) -> MonotoneMap:
    """``[f, g] : X + Y -> Z``."""
    if f.cod is not g.cod:
        raise ValueError("copairing needs a common codomain")
    src = coproduct(f.dom, g.dom)
    return MonotoneMap(src, f.cod, np.concatenate([f.table, g.table]), check=False)


def dist(w: FinitePoset) -> MonotoneMap:
    """``W × 2 -> W + W``, sending ``(w, tt)`` left and ``(w, ff)`` right."""
    src = product(w, two())
    dst = coproduct(w, w)
    return MonotoneMap(src, dst, [b * w.size + x for x, b in (src.split(k) for k in range(src.size))])


def undist(w: FinitePoset) -> MonotoneMap:
    """The canonical ``[<id, inl ∘ !>, <id, inr ∘ !>] : W + W -> W × 2``."""
    i = identity(w)
    return copair(pair(i, compose(inl(), bang(w))), pair(i, compose(inr(), bang(w))))


def all_monotone_maps(dom: FinitePoset, cod: FinitePoset) -> list[MonotoneMap]:
    return [MonotoneMap(dom, cod, t, check=False) for t in monotone_tables(dom, cod)]
