"""Single-sorted finitary monads presented as varieties.

Three monads are provided:

* ``SET``: the identity monad, ``TX = X``.
* ``UNARY``: algebras with one unary operation ``u`` and no equations,
  ``TX = N x X`` with ``u(n, x) = (n + 1, x)``.  Elements ``(n, x)`` stand
  for the terms ``u^n(x)``.
* ``JSL``: join-semilattices with bottom, the finite powerset monad.

Elements of free algebras are kept in canonical form: a bare generator for
``SET``, a pair ``(n, x)`` for ``UNARY`` and a ``frozenset`` of generators for
``JSL``.  Any algebra of a variety is described by its structure map
``alpha: TA -> A`` (see :class:`Algebra`); joins, bottoms and ``u`` are
derived from it.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from functools import reduce
from typing import Any, Callable, Iterable, Mapping, Sequence

from .errors import InfiniteCarrierError, InvalidAlgebra, VarietyMismatch

#: refuse to materialise JSL free algebras on more generators than this
MAX_JSL_GENERATORS = 12


def sort_key(x: Any) -> tuple:
    # total order on heterogeneous generators, stable across runs
    return (type(x).__name__, repr(x))


class VarietyId(str, enum.Enum):
    SET = "SET"
    UNARY = "UNARY"
    JSL = "JSL"


class Variety:
    tag: VarietyId

    def eta(self, x):
        raise NotImplementedError

    def mu(self, tt):
        raise NotImplementedError

    def tmap(self, f: Callable, t):
        """Apply ``T f`` to an element of ``TX``."""
        raise NotImplementedError

    def support(self, t) -> tuple:
        """Generators occurring in ``t`` (sorted, without duplicates)."""
        raise NotImplementedError

    def free_elements(self, generators: Sequence, bound: int | None = None,
                      max_size: int | None = None) -> list:
        raise NotImplementedError

    def is_element(self, t, generators: frozenset) -> bool:
        raise NotImplementedError

    def __repr__(self):
        return self.tag.value

    def __reduce__(self):
        return (variety, (self.tag.value,))


class _SetVariety(Variety):
    tag = VarietyId.SET

    def eta(self, x):
        return x

    def mu(self, tt):
        return tt

    def tmap(self, f, t):
        return f(t)

    def support(self, t):
        return (t,)

    def free_elements(self, generators, bound=None, max_size=None):
        return list(generators)

    def is_element(self, t, generators):
        try:
            return t in generators
        except TypeError:
            return False


class _UnaryVariety(Variety):
    tag = VarietyId.UNARY

    def eta(self, x):
        return (0, x)

    def mu(self, tt):
        n, (m, x) = tt
        return (n + m, x)

    def tmap(self, f, t):
        n, x = t
        return (n, f(x))

    def support(self, t):
        return (t[1],)

    def free_elements(self, generators, bound=None, max_size=None):
        if not generators:
            return []
        if bound is None:
            raise InfiniteCarrierError(
                "UNARY free algebras are infinite; pass a counter bound")
        return [(n, x) for n in range(bound + 1) for x in generators]

    def is_element(self, t, generators):
        return (isinstance(t, tuple) and len(t) == 2 and isinstance(t[0], int)
                and not isinstance(t[0], bool) and t[0] >= 0 and t[1] in generators)


class _JslVariety(Variety):
    tag = VarietyId.JSL

    def eta(self, x):
        return frozenset((x,))

    def mu(self, tt):
        return frozenset().union(*tt)

    def tmap(self, f, t):
        return frozenset(f(x) for x in t)

    def support(self, t):
        return tuple(sorted(t, key=sort_key))

    def free_elements(self, generators, bound=None, max_size=None):
        gens = sorted(generators, key=sort_key)
        if max_size is None:
            if len(gens) > MAX_JSL_GENERATORS:
                raise InfiniteCarrierError(
                    f"refusing to enumerate 2^{len(gens)} subsets")
            max_size = len(gens)
        return [frozenset(c) for k in range(max_size + 1)
                for c in itertools.combinations(gens, k)]

    def is_element(self, t, generators):
        return isinstance(t, frozenset) and t <= generators


SET = _SetVariety()
UNARY = _UnaryVariety()
JSL = _JslVariety()

_BY_TAG = {v.tag: v for v in (SET, UNARY, JSL)}


def variety(tag: str | VarietyId | Variety) -> Variety:
    if isinstance(tag, Variety):
        return tag
    try:
        return _BY_TAG[VarietyId(str(tag).upper())]
    except ValueError:
        raise ValueError(f"unknown variety {tag!r}") from None


# ---------------------------------------------------------------------------
# algebras


class Algebra:
    """An algebra for one of the monads, given by ``alpha: TA -> A``."""

    variety: Variety
    finite: bool = False

    def alpha(self, t):
        raise NotImplementedError

    def elements(self, bound: int | None = None) -> list:
        raise InfiniteCarrierError(f"{self!r} cannot enumerate its carrier")

    def contains(self, a) -> bool:
        return True

    def bottom(self):
        return self.alpha(frozenset())

    def join(self, *xs):
        return self.alpha(frozenset(xs))

    def u(self, a, n: int = 1):
        return self.alpha((n, a))


@dataclass(frozen=True)
class FreeAlgebra(Algebra):
    """The free algebra ``TX`` on a finite set of generators."""

    variety: Variety
    generators: tuple
    _genset: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "_genset", frozenset(self.generators))
        if len(self._genset) != len(self.generators):
            raise ValueError("duplicate generators")

    @property
    def finite(self):
        return self.variety is not UNARY or not self.generators

    def alpha(self, t):
        return self.variety.mu(t)

    def eta(self, x):
        return self.variety.eta(x)

    def elements(self, bound=None):
        return self.variety.free_elements(self.generators, bound)

    def contains(self, a):
        return self.variety.is_element(a, self._genset)


def free(v: Variety | str, generators: Iterable = ()) -> FreeAlgebra:
    """Free algebra on ``generators`` in the variety ``v``."""
    return FreeAlgebra(variety(v), tuple(generators))


class FiniteAlgebra(Algebra):
    """Explicit finite carrier with operation tables.

    ``join`` (JSL) and ``u`` (UNARY) may be given as mappings or callables;
    they are tabulated and checked against the variety's equations.
    """

    finite = True

    def __init__(self, v, elements: Sequence, join=None, u=None, name: str = ""):
        self.variety = variety(v)
        self.element_list = list(elements)
        self._elements = frozenset(self.element_list)
        if len(self._elements) != len(self.element_list):
            raise InvalidAlgebra("duplicate elements")
        self.name = name
        self._join: dict = {}
        self._u: dict = {}
        self._bottom = None
        if self.variety is JSL:
            if join is None:
                raise InvalidAlgebra("a JSL carrier needs a join table")
            lookup = join.__getitem__ if isinstance(join, Mapping) else join
            for a in self.element_list:
                for b in self.element_list:
                    self._join[a, b] = lookup((a, b)) if isinstance(join, Mapping) else lookup(a, b)
            self._validate_jsl()
        elif self.variety is UNARY:
            if u is None:
                raise InvalidAlgebra("a UNARY carrier needs a table for u")
            for a in self.element_list:
                self._u[a] = u[a] if isinstance(u, Mapping) else u(a)
                if self._u[a] not in self._elements:
                    raise InvalidAlgebra(f"u({a!r}) = {self._u[a]!r} leaves the carrier")

    def _validate_jsl(self):
        els, j = self.element_list, self._join
        for a in els:
            if j[a, a] != a:
                raise InvalidAlgebra(f"join not idempotent at {a!r}")
            for b in els:
                if j[a, b] not in self._elements:
                    raise InvalidAlgebra(f"{a!r} v {b!r} leaves the carrier")
                if j[a, b] != j[b, a]:
                    raise InvalidAlgebra(f"join not commutative at {a!r}, {b!r}")
                for c in els:
                    if j[j[a, b], c] != j[a, j[b, c]]:
                        raise InvalidAlgebra(f"join not associative at {a!r}, {b!r}, {c!r}")
        units = [b for b in els if all(j[b, a] == a for a in els)]
        if not units:
            raise InvalidAlgebra("join has no unit (bottom)")
        self._bottom = units[0]

    def alpha(self, t):
        if self.variety is SET:
            return t
        if self.variety is UNARY:
            n, a = t
            for _ in range(n):
                a = self._u[a]
            return a
        return reduce(lambda x, y: self._join[x, y], t, self._bottom)

    def elements(self, bound=None):
        return list(self.element_list)

    def contains(self, a):
        try:
            return a in self._elements
        except TypeError:
            return False

    def leq(self, a, b) -> bool:
        """Semilattice order ``a <= b`` iff ``a v b = b`` (JSL only)."""
        return self._join[a, b] == b

    def __repr__(self):
        return self.name or f"FiniteAlgebra({self.variety!r}, {self.element_list!r})"


class OpaqueAlgebra(Algebra):
    """Algebra given by callbacks; carrier may be infinite."""

    def __init__(self, v, alpha: Callable, contains: Callable | None = None,
                 elements: Callable | None = None, name: str = ""):
        self.variety = variety(v)
        self._alpha = alpha
        self._contains = contains
        self._elements = elements
        self.finite = elements is not None
        self.name = name

    def alpha(self, t):
        return self._alpha(t)

    def contains(self, a):
        return True if self._contains is None else self._contains(a)

    def elements(self, bound=None):
        if self._elements is None:
            return super().elements(bound)
        return self._elements(bound)

    def __repr__(self):
        return self.name or "OpaqueAlgebra"


def terminal(v) -> FiniteAlgebra:
    """The one-element algebra."""
    v = variety(v)
    return FiniteAlgebra(v, [()], join=lambda a, b: (), u=lambda a: (), name="1")


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True, eq=False)
class Hom:
    source: Algebra
    target: Algebra
    fn: Callable

    def __call__(self, a):
        return self.fn(a)


def extend_hom(f: Mapping | Callable, target: Algebra,
               source: FreeAlgebra | None = None) -> Hom:
    """Unique homomorphism ``TX -> target`` extending ``f`` on generators.

    ``f*(t) = alpha_target(T f (t))``; for UNARY this is ``f*(n, x) = u^n f(x)``
    and for JSL ``f*(S) = join of f(x) over x in S``.
    """
    if isinstance(f, Mapping):
        gens = tuple(f)
        lookup = f.__getitem__
    else:
        gens = () if source is None else source.generators
        lookup = f
    if source is None:
        source = FreeAlgebra(target.variety, gens)
    elif source.variety is not target.variety:
        raise VarietyMismatch(f"{source.variety!r} vs {target.variety!r}")
    if isinstance(f, Mapping) and not set(source.generators) <= set(f):
        missing = set(source.generators) - set(f)
        raise ValueError(f"map undefined on generators {sorted(missing, key=sort_key)!r}")
    v, alpha = target.variety, target.alpha
    return Hom(source, target, lambda t: alpha(v.tmap(lookup, t)))


def is_hom(h: Callable, source: Algebra, target: Algebra, bound: int = 2):
    """Check that ``h`` commutes with the operations on enumerated elements.

    Returns ``(True, None)`` or ``(False, description)``.
    """
    if source.variety is not target.variety:
        raise VarietyMismatch(f"{source.variety!r} vs {target.variety!r}")
    v = source.variety
    if v is SET:
        return True, None
    els = source.elements(bound)
    if v is UNARY:
        for a in els:
            if h(source.u(a)) != target.u(h(a)):
                return False, f"h(u({a!r})) != u(h({a!r}))"
        return True, None
    if h(source.bottom()) != target.bottom():
        return False, "h(bottom) != bottom"
    for a, b in itertools.combinations_with_replacement(els, 2):
        if h(source.join(a, b)) != target.join(h(a), h(b)):
            return False, f"h({a!r} v {b!r}) != h({a!r}) v h({b!r})"
    return True, None


# ---------------------------------------------------------------------------
# coproducts
#
# SET and UNARY coproducts are disjoint unions (tagged Inl / Inr); u acts
# componentwise.  The JSL coproduct is the product carrier with componentwise
# join, inl(b) = (b, bottom) and inr(a) = (bottom, a).


@dataclass(frozen=True)
class Inl:
    value: Any

    def __repr__(self):
        return f"inl({self.value!r})"


@dataclass(frozen=True)
class Inr:
    value: Any

    def __repr__(self):
        return f"inr({self.value!r})"


@dataclass(frozen=True)
class Pair:
    left: Any
    right: Any

    def __repr__(self):
        return f"<{self.left!r} | {self.right!r}>"


def coprod_map(f: Callable, g: Callable, v):
    """Structural action of ``f + g`` on a coproduct element (any variety)."""
    if isinstance(v, Pair):
        return Pair(f(v.left), g(v.right))
    if isinstance(v, Inl):
        return Inl(f(v.value))
    if isinstance(v, Inr):
        return Inr(g(v.value))
    raise TypeError(f"not a coproduct element: {v!r}")


def left_parts(v) -> tuple:
    if isinstance(v, Pair):
        return (v.left,)
    return (v.value,) if isinstance(v, Inl) else ()


def right_parts(v) -> tuple:
    if isinstance(v, Pair):
        return (v.right,)
    return (v.value,) if isinstance(v, Inr) else ()


class CoproductAlgebra(Algebra):
    def __init__(self, left: Algebra, right: Algebra):
        if left.variety is not right.variety:
            raise VarietyMismatch(f"{left.variety!r} vs {right.variety!r}")
        self.variety = left.variety
        self.left = left
        self.right = right
        self.finite = left.finite and right.finite

    def alpha(self, t):
        v = self.variety
        if v is SET:
            return t
        if v is UNARY:
            n, x = t
            if isinstance(x, Inl):
                return Inl(self.left.alpha((n, x.value)))
            return Inr(self.right.alpha((n, x.value)))
        return Pair(self.left.alpha(frozenset(p.left for p in t)),
                    self.right.alpha(frozenset(p.right for p in t)))

    def elements(self, bound=None):
        ls, rs = self.left.elements(bound), self.right.elements(bound)
        if self.variety is JSL:
            return [Pair(b, a) for b in ls for a in rs]
        return [Inl(b) for b in ls] + [Inr(a) for a in rs]

    def contains(self, x):
        if self.variety is JSL:
            return isinstance(x, Pair) and self.left.contains(x.left) and self.right.contains(x.right)
        if isinstance(x, Inl):
            return self.left.contains(x.value)
        return isinstance(x, Inr) and self.right.contains(x.value)

    def __repr__(self):
        return f"({self.left!r} + {self.right!r})"


class Coproduct:
    """Coproduct ``B + A`` in the variety, with injections and copairing."""

    def __init__(self, left: Algebra, right: Algebra):
        self.algebra = CoproductAlgebra(left, right)
        self.variety = self.algebra.variety
        self.left = left
        self.right = right

    def inl(self, b):
        if self.variety is JSL:
            return Pair(b, self.right.bottom())
        return Inl(b)

    def inr(self, a):
        if self.variety is JSL:
            return Pair(self.left.bottom(), a)
        return Inr(a)

    def copair(self, f: Callable, g: Callable, target: Algebra) -> Callable:
        """``[f, g]``; for JSL ``[f, g](b, a) = f(b) v g(a)``."""
        if self.variety is JSL:
            return lambda p: target.join(f(p.left), g(p.right))
        return lambda x: f(x.value) if isinstance(x, Inl) else g(x.value)

    def map(self, f: Callable, g: Callable) -> Callable:
        return lambda x: coprod_map(f, g, x)


def coproduct(left: Algebra, right: Algebra) -> Coproduct:
    return Coproduct(left, right)


# ---------------------------------------------------------------------------
# JSON


def gen_to_json(x):
    if isinstance(x, tuple):
        return [gen_to_json(y) for y in x]
    return x


def gen_from_json(x):
    if isinstance(x, list):
        return tuple(gen_from_json(y) for y in x)
    return x


def elem_to_json(v: Variety, t) -> dict:
    v = variety(v)
    if v is SET:
        return {"gen": gen_to_json(t)}
    if v is UNARY:
        return {"n": t[0], "gen": gen_to_json(t[1])}
    return {"set": [gen_to_json(x) for x in sorted(t, key=sort_key)]}


def elem_from_json(v: Variety, d: Mapping):
    v = variety(v)
    if v is SET:
        return gen_from_json(d["gen"])
    if v is UNARY:
        return (int(d["n"]), gen_from_json(d["gen"]))
    return frozenset(gen_from_json(x) for x in d["set"])


def algebra_to_json(a: FiniteAlgebra) -> dict:
    if not isinstance(a, FiniteAlgebra):
        raise TypeError("only finite carriers serialise")
    idx = {x: i for i, x in enumerate(a.element_list)}
    out: dict = {"variety": a.variety.tag.value,
                 "elements": [gen_to_json(x) for x in a.element_list]}
    if a.variety is JSL:
        n = len(a.element_list)
        out["join"] = [[i, j, idx[a._join[a.element_list[i], a.element_list[j]]]]
                       for i in range(n) for j in range(i, n)]
    elif a.variety is UNARY:
        out["u"] = [[idx[x], idx[a._u[x]]] for x in a.element_list]
    return out


def algebra_from_json(d: Mapping) -> FiniteAlgebra:
    v = variety(d["variety"])
    els = [gen_from_json(x) for x in d["elements"]]
    if v is JSL:
        table = {}
        for i, j, k in d["join"]:
            table[els[i], els[j]] = table[els[j], els[i]] = els[k]
        return FiniteAlgebra(v, els, join=table)
    if v is UNARY:
        return FiniteAlgebra(v, els, u={els[i]: els[j] for i, j in d["u"]})
    return FiniteAlgebra(v, els)


__all__ = [
    "Algebra", "Coproduct", "CoproductAlgebra", "FiniteAlgebra", "FreeAlgebra", "Hom",
    "Inl", "Inr", "JSL", "OpaqueAlgebra", "Pair", "SET", "UNARY", "Variety", "VarietyId",
    "algebra_from_json", "algebra_to_json", "coprod_map", "coproduct", "elem_from_json",
    "elem_to_json", "extend_hom", "free", "is_hom", "left_parts", "right_parts", "sort_key",
    "terminal", "variety",
]
