"""Coalgebras carried by free finitely generated algebras.

An :class:`FfgCoalgebra` is given by its generator transition map
``X -> F(TX)``; the full structure ``TX -> F(TX)`` is the unique
homomorphic extension, which for JSL over Moore shapes is the subset
construction (:func:`determinize`).  Coalgebras on arbitrary finite
algebras are :class:`FiniteCoalgebra`; they appear as split quotients of
ffg-coalgebras.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Sequence

from .errors import InfiniteCarrierError, VarietyMismatch
from .functor import DistLaw, Lifting
from .variety import UNARY, Algebra, FreeAlgebra, extend_hom, is_hom, sort_key

#: cap on states explored by reachability, partition refinement and minimisation
MAX_STATES = 1 << 12


class FfgCoalgebra:
    """Coalgebra on ``TX`` given by ``step: X -> F(TX)`` on generators."""

    def __init__(self, functor, generators: Sequence, step: Mapping, name: str = "",
                 validate: bool = True):
        self.functor = functor
        self.generators = tuple(generators)
        self.step = dict(step)
        self.name = name
        self.carrier = FreeAlgebra(functor.variety, self.generators)
        if set(self.step) != set(self.generators):
            extra = set(self.step) ^ set(self.generators)
            raise ValueError(f"step must be defined exactly on the generators: {extra!r}")
        target = functor.apply(self.carrier)
        for x, value in self.step.items() if validate else ():
            if not target.contains(value):
                raise ValueError(f"step({x!r}) = {value!r} is not an element of F(TX)")
        self._structure = extend_hom(self.step, target, source=self.carrier)
        self._memo: dict = {}

    @property
    def variety(self):
        return self.functor.variety

    def structure(self, t):
        try:
            return self._memo[t]
        except KeyError:
            value = self._memo[t] = self._structure(t)
            return value

    __call__ = structure

    def eta(self, x):
        return self.variety.eta(x)

    def check_points(self) -> list:
        # homomorphisms out of TX are determined by generators
        return [self.eta(x) for x in self.generators]

    def __repr__(self):
        return self.name or f"FfgCoalgebra({list(self.generators)!r})"


class FiniteCoalgebra:
    """Coalgebra on an explicit finite algebra; ``table`` covers every element."""

    def __init__(self, functor, carrier: Algebra, table: Mapping | Callable, name: str = ""):
        if carrier.variety is not functor.variety:
            raise VarietyMismatch("carrier and functor live in different varieties")
        self.functor = functor
        self.carrier = carrier
        self.name = name
        els = carrier.elements()
        lookup = table if callable(table) else table.__getitem__
        self.table = {a: lookup(a) for a in els}
        target = functor.apply(carrier)
        for a, value in self.table.items():
            if not target.contains(value):
                raise ValueError(f"structure({a!r}) = {value!r} is not in F(carrier)")
        ok, why = is_hom(self.structure, carrier, target)
        if not ok:
            raise ValueError(f"structure map is not a homomorphism: {why}")

    @property
    def variety(self):
        return self.functor.variety

    def structure(self, a):
        return self.table[a]

    __call__ = structure

    def check_points(self) -> list:
        return list(self.table)

    def __repr__(self):
        return self.name or f"FiniteCoalgebra({self.carrier!r})"


def determinize(c0: Mapping, law: DistLaw, name: str = "") -> FfgCoalgebra:
    """Extend ``c0: X -> F0(TX)`` to the homomorphism ``TX -> F(TX)``.

    For JSL over ``{0,1} x X^S`` this is the subset construction of an NFA.
    """
    return FfgCoalgebra(Lifting(law), tuple(c0), c0, name=name)


@dataclass
class HomCheck:
    ok: bool
    counterexample: Any = None

    def __bool__(self):
        return self.ok


def _as_map(h, source, target) -> Callable:
    if isinstance(h, Mapping):
        if isinstance(source, FfgCoalgebra):
            return extend_hom(h, target.carrier, source=source.carrier)
        return h.__getitem__
    return h


def is_coalg_hom(source, target, h) -> HomCheck:
    """Check ``F h . c = d . h`` on the generators (or all elements) of ``source``.

    ``h`` is a mapping on generators of an ffg source (extended
    homomorphically) or a callable on source elements.
    """
    if source.functor != target.functor:
        raise VarietyMismatch(f"{source.functor!r} vs {target.functor!r}")
    hf = _as_map(h, source, target)
    for p in source.check_points():
        lhs = target.structure(hf(p))
        rhs = source.functor.fmap(hf, source.structure(p))
        if lhs != rhs:
            return HomCheck(False, (p, lhs, rhs))
    return HomCheck(True)


# ---------------------------------------------------------------------------
# behavioural equivalence


def _require_finite(coalgebra):
    if coalgebra.variety is UNARY and coalgebra.carrier.generators:
        raise InfiniteCarrierError(
            "UNARY carriers are infinite; use the stream backend in effiter.phi")


def reachable(structure: Callable, functor, start, limit: int = MAX_STATES) -> list:
    """States reachable from ``start`` in breadth-first, child order."""
    seen = {start: None}
    order = [start]
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for child in functor.children(structure(s)):
            if child not in seen:
                if len(order) >= limit:
                    raise InfiniteCarrierError(f"more than {limit} reachable states")
                seen[child] = None
                order.append(child)
                queue.append(child)
    return order


def refine(states: Sequence, structure: Callable, functor) -> dict:
    """Coarsest partition stable under ``s -> F(block)(structure(s))``.

    Returns ``state -> block number``.  ``states`` must be closed under
    successors.
    """
    block = {s: 0 for s in states}
    count = 1
    while True:
        sigs: dict = {}
        new = {}
        for s in states:
            sig = (block[s], functor.fmap(block.__getitem__, structure(s)))
            new[s] = sigs.setdefault(sig, len(sigs))
        if len(sigs) == count:
            return new
        block, count = new, len(sigs)


def behavioral_equiv(a, b, coalgebra, other=None) -> bool:
    """Decide behavioural equivalence of ``a`` (in ``coalgebra``) and ``b``.

    Runs partition refinement on the part of the disjoint union reachable
    from the two states.  Carriers must be finite.
    """
    other = coalgebra if other is None else other
    if coalgebra.functor != other.functor:
        raise VarietyMismatch(f"{coalgebra.functor!r} vs {other.functor!r}")
    _require_finite(coalgebra)
    _require_finite(other)
    functor = coalgebra.functor
    parts = (coalgebra, other)

    def structure(tagged):
        i, s = tagged
        return functor.fmap(lambda t: (i, t), parts[i].structure(s))

    states = reachable(structure, functor, (0, a))
    states += [s for s in reachable(structure, functor, (1, b)) if s not in set(states)]
    block = refine(states, structure, functor)
    return block[0, a] == block[1, b]


@dataclass(frozen=True)
class MinimalMachine:
    """Minimal reachable quotient from one state, numbered canonically.

    ``transitions[i]`` is the F-value of state ``i`` with children replaced
    by state numbers; state 0 is the start.  Two states are behaviourally
    equivalent iff their machines are equal.
    """

    transitions: tuple

    @property
    def size(self):
        return len(self.transitions)


def minimize(coalgebra, start) -> MinimalMachine:
    return minimize_many(coalgebra, [start])[0]


def minimize_many(coalgebra, starts: Sequence) -> list[MinimalMachine]:
    """:func:`minimize` for several start states sharing one refinement."""
    _require_finite(coalgebra)
    functor = coalgebra.functor
    states: list = []
    known: set = set()
    for start in starts:
        if start not in known:
            new = [s for s in reachable(coalgebra.structure, functor, start) if s not in known]
            states.extend(new)
            known.update(new)
    block = refine(states, coalgebra.structure, functor)
    rep: dict = {}
    for s in states:
        rep.setdefault(block[s], s)
    return [_canonical(coalgebra, functor, block, rep, start) for start in starts]


def _canonical(coalgebra, functor, block, rep, start) -> MinimalMachine:
    # renumber blocks by first visit from the start, following child order
    number = {block[start]: 0}
    order = [block[start]]
    i = 0
    while i < len(order):
        value = coalgebra.structure(rep[order[i]])
        for child in functor.children(value):
            b = block[child]
            if b not in number:
                number[b] = len(order)
                order.append(b)
        i += 1
    transitions = tuple(functor.fmap(lambda s: number[block[s]], coalgebra.structure(rep[b]))
                        for b in order)
    return MinimalMachine(transitions)


# ---------------------------------------------------------------------------
# coproducts of ffg-coalgebras


def _tagger(v, i):
    return lambda t: v.tmap(lambda g: (i, g), t)


def coproduct_coalgebras(coalgebras: Sequence[FfgCoalgebra], functor=None):
    """Coproduct of ffg-coalgebras on the tagged generators ``(i, x)``.

    Returns ``(coalgebra, injections)`` where ``injections[i]`` maps the
    carrier of the i-th summand into the coproduct carrier.
    """
    if not coalgebras and functor is None:
        raise ValueError("empty coproduct needs an explicit functor")
    functor = functor if functor is not None else coalgebras[0].functor
    for c in coalgebras:
        if c.functor != functor:
            raise VarietyMismatch(f"{c.functor!r} vs {functor!r}")
    v = functor.variety
    injections = [_tagger(v, i) for i in range(len(coalgebras))]
    gens, step = [], {}
    for i, c in enumerate(coalgebras):
        inj = injections[i]
        for x in c.generators:
            gens.append((i, x))
            step[i, x] = functor.fmap(inj, c.step[x])
    return FfgCoalgebra(functor, gens, step, validate=False), injections


def coproduct_coalg(c: FfgCoalgebra, d: FfgCoalgebra):
    """Binary coproduct ``c + d`` with its two injections."""
    total, (inl, inr) = coproduct_coalgebras([c, d])
    return total, inl, inr


def empty_coalgebra(functor) -> FfgCoalgebra:
    return FfgCoalgebra(functor, (), {}, name="0")


# ---------------------------------------------------------------------------
# split quotients and zig-zags


@dataclass
class SplitQuotient:
    """``(W, w)`` built from ``(X, c)`` and a splitting ``e . m = id``."""

    coalgebra: FfgCoalgebra
    quotient: FiniteCoalgebra
    e: Callable
    m: Callable


def split_quotient_to_ffg(c: FiniteCoalgebra, generators: Sequence, e: Mapping,
                          m: Callable) -> SplitQuotient:
    """Put ``w = F m . c . e`` on ``W = T(generators)``.

    ``e`` sends generators of ``W`` into the carrier of ``c``; ``m`` maps
    the carrier of ``c`` into ``W`` and must satisfy ``e . m = id``.  Both
    ``m: (X,c) -> (W,w)`` and ``e: (W,w) -> (X,c)`` are checked to be
    coalgebra homomorphisms.
    """
    W = FreeAlgebra(c.variety, tuple(generators))
    e_hom = extend_hom(e, c.carrier, source=W)
    for x in c.carrier.elements():
        if e_hom(m(x)) != x:
            raise ValueError(f"e(m({x!r})) = {e_hom(m(x))!r} != {x!r}")
    ok, why = is_hom(m, c.carrier, W)
    if not ok:
        raise ValueError(f"section is not a homomorphism: {why}")
    step = {s: c.functor.fmap(m, c.structure(e_hom(W.eta(s)))) for s in W.generators}
    w = FfgCoalgebra(c.functor, W.generators, step)
    check = is_coalg_hom(c, w, m)
    assert check, f"m is not a coalgebra homomorphism: {check.counterexample!r}"
    back = is_coalg_hom(w, c, e_hom)
    assert back, f"e is not a coalgebra homomorphism: {back.counterexample!r}"
    return SplitQuotient(w, c, e_hom, m)


@dataclass
class Span:
    """``left_target <- apex -> right_target`` given on apex generators."""

    apex: FfgCoalgebra
    left: dict
    right: dict
    left_target: Any
    right_target: Any


def zigzag_from_span(split: SplitQuotient, f: Callable, left_target, g: Callable,
                     right_target) -> Span:
    """Turn homomorphisms ``f, g`` out of ``(X, c)`` into a span out of ``(W, w)``."""
    for h, target in ((f, left_target), (g, right_target)):
        check = is_coalg_hom(split.quotient, target, h)
        if not check:
            raise ValueError(f"input is not a coalgebra homomorphism: {check.counterexample!r}")
    w = split.coalgebra
    left = {s: f(split.e(w.eta(s))) for s in w.generators}
    right = {s: g(split.e(w.eta(s))) for s in w.generators}
    span = Span(w, left, right, left_target, right_target)
    for leg, target in ((left, left_target), (right, right_target)):
        check = is_coalg_hom(w, target, leg)
        assert check, f"zig-zag leg is not a homomorphism: {check.counterexample!r}"
    return span


def gen_sorted(xs) -> list:
    return sorted(xs, key=sort_key)
