"""Behaviour functors, distributive laws and liftings to algebras.

A shape describes a set functor ``F0``:

* ``MooreShape(O, S)``: ``F0 X = O x X^S`` (deterministic Moore automata),
* ``PolyShape(ops)``: the polynomial functor of a finite signature,
* ``IdShape()``: the identity functor.

Elements of ``F0 X`` are :class:`FNode` values.  A distributive law
``lam: T F0 -> F0 T`` lifts ``F0`` to the algebras of the monad: ``F A`` is
``F0 A`` with structure ``F0 alpha . lam_A`` (:func:`lift_apply`).
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Iterable, Sequence

from .errors import InvalidAlgebra, UnsupportedInstance, VarietyMismatch
from .report import LawReport
from .variety import (JSL, SET, UNARY, Algebra, CoproductAlgebra, FreeAlgebra, Inl, Inr, Pair,
                      Variety, coprod_map, left_parts, variety)


@dataclass(frozen=True)
class FNode:
    """One layer of behaviour: an output/operation label and children."""

    label: Hashable
    children: tuple

    def __repr__(self):
        kids = ", ".join(map(repr, self.children))
        return f"F[{self.label!r}; {kids}]"


class Shape:
    kind: str

    def arity(self, label) -> int:
        raise NotImplementedError

    def labels(self) -> tuple:
        raise NotImplementedError

    def fmap(self, f: Callable, node: FNode) -> FNode:
        return FNode(node.label, tuple(f(c) for c in node.children))

    def nodes(self, elements: Sequence) -> list[FNode]:
        """Enumerate ``F0`` applied to a finite set."""
        out = []
        for label in self.labels():
            for kids in itertools.product(elements, repeat=self.arity(label)):
                out.append(FNode(label, kids))
        return out

    def validate(self, node) -> bool:
        if not isinstance(node, FNode):
            return False
        try:
            return node.label in self.labels() and len(node.children) == self.arity(node.label)
        except TypeError:
            return False


def _default_join(a, b):
    return max(a, b)


@dataclass(frozen=True)
class MooreShape(Shape):
    outputs: tuple
    alphabet: tuple
    join: Callable | None = field(default=None, repr=False)
    kind = "moore"

    def __post_init__(self):
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        if not self.alphabet and not self.outputs:
            raise ValueError("empty Moore shape")

    def arity(self, label):
        return len(self.alphabet)

    def labels(self):
        return self.outputs

    def child(self, node: FNode, letter):
        return node.children[self.alphabet.index(letter)]

    # outputs as a join-semilattice, needed by the JSL determinisation law

    def output_join(self, a, b):
        return (self.join or _default_join)(a, b)

    def output_bottom(self):
        if self.join is None:
            return min(self.outputs)
        units = [b for b in self.outputs
                 if all(self.output_join(b, a) == a for a in self.outputs)]
        if not units:
            raise InvalidAlgebra("output join has no bottom")
        return units[0]

    def join_outputs(self, labels: Iterable):
        return functools.reduce(self.output_join, labels, self.output_bottom())

    def check_output_lattice(self):
        os = self.outputs
        try:
            bottom = self.output_bottom()
            for a in os:
                if self.output_join(a, a) != a:
                    raise InvalidAlgebra(f"output join not idempotent at {a!r}")
                for b in os:
                    ab = self.output_join(a, b)
                    if ab not in os or ab != self.output_join(b, a):
                        raise InvalidAlgebra(f"output join broken at {a!r}, {b!r}")
                    for c in os:
                        if self.output_join(ab, c) != self.output_join(a, self.output_join(b, c)):
                            raise InvalidAlgebra("output join not associative")
        except TypeError as exc:
            raise InvalidAlgebra(f"outputs are not a join-semilattice: {exc}") from None
        return bottom


@dataclass(frozen=True)
class PolyShape(Shape):
    ops: tuple
    kind = "poly"

    def __post_init__(self):
        ops = tuple((sym, int(n)) for sym, n in self.ops)
        if len({s for s, _ in ops}) != len(ops):
            raise ValueError("duplicate operation symbols")
        object.__setattr__(self, "ops", ops)

    def arity(self, label):
        return dict(self.ops)[label]

    def labels(self):
        return tuple(s for s, _ in self.ops)


@dataclass(frozen=True)
class IdShape(Shape):
    kind = "id"

    def arity(self, label):
        return 1

    def labels(self):
        return (None,)


def boolean_moore(alphabet: Sequence = ("a",)) -> MooreShape:
    """``{0,1} x X^alphabet``, outputs ordered ``0 < 1``."""
    return MooreShape((0, 1), tuple(alphabet))


def id_node(child) -> FNode:
    return FNode(None, (child,))


def shape_to_json(shape: Shape) -> dict:
    if isinstance(shape, MooreShape):
        return {"moore": {"outputs": list(shape.outputs), "alphabet": list(shape.alphabet)}}
    if isinstance(shape, PolyShape):
        return {"poly": [[s, n] for s, n in shape.ops]}
    return {"id": True}


def shape_from_json(d: dict) -> Shape:
    if "moore" in d:
        m = d["moore"]
        return MooreShape(tuple(m["outputs"]), tuple(m["alphabet"]))
    if "poly" in d:
        return PolyShape(tuple((s, n) for s, n in d["poly"]))
    if d.get("id"):
        return IdShape()
    raise ValueError(f"unrecognised shape {d!r}")


# ---------------------------------------------------------------------------
# distributive laws


@dataclass(frozen=True, eq=False)
class DistLaw:
    """A natural transformation ``T F0 -> F0 T`` given pointwise."""

    variety: Variety
    shape: Shape
    apply: Callable
    name: str = ""

    def __call__(self, t):
        return self.apply(t)

    def __repr__(self):
        return self.name or f"DistLaw({self.variety!r}, {self.shape!r})"


@functools.lru_cache(maxsize=None)
def builtin_law(v: Variety | str, shape: Shape) -> DistLaw:
    """The evident distributive law for the supported (variety, shape) pairs.

    SET: identity.  UNARY over Moore/Id: push the counter into every child.
    JSL over Moore: the subset construction, joining outputs and taking
    unions of successors letter by letter.
    """
    v = variety(v)
    if v is SET:
        return DistLaw(v, shape, lambda node: node, f"id[{shape.kind}]")
    if v is UNARY and isinstance(shape, (MooreShape, IdShape)):
        def push(t):
            n, node = t
            return FNode(node.label, tuple((n, c) for c in node.children))
        return DistLaw(v, shape, push, f"unary[{shape.kind}]")
    if v is JSL and isinstance(shape, MooreShape):
        shape.check_output_lattice()
        k = len(shape.alphabet)

        def subset(t):
            return FNode(shape.join_outputs(node.label for node in t),
                         tuple(frozenset(node.children[i] for node in t) for i in range(k)))
        return DistLaw(v, shape, subset, "jsl[moore]")
    raise UnsupportedInstance(f"no builtin law for {v!r} over {shape.kind}")


def _tf0_elements(law: DistLaw, elements: Sequence, counter_bound: int,
                  max_set_size: int | None = None) -> list:
    nodes = law.shape.nodes(elements)
    return law.variety.free_elements(nodes, counter_bound, max_set_size)


def check_dist_law(law: DistLaw, sample_bound: int = 2, counter_bound: int | None = None,
                   outer_limit: int | None = None) -> LawReport:
    """Evaluate the unit and multiplication axioms (and naturality) pointwise.

    Generator sets of every size up to ``sample_bound`` are used; UNARY
    counters range up to ``counter_bound`` (default ``sample_bound``).  For
    JSL, ``TT F0 X`` is enumerated in full when ``T F0 X`` has at most 16
    elements and otherwise restricted to outer sets of size
    ``outer_limit`` (default 2); both sides of the multiplication axiom are
    join-preserving in the outer set, so pairs already cover every join.
    """
    v, shape = law.variety, law.shape
    cb = sample_bound if counter_bound is None else counter_bound
    report = LawReport(axiom=f"distributive-law {law!r}")
    for size in range(sample_bound + 1):
        gens = tuple(f"x{i}" for i in range(size))
        for node in shape.nodes(gens):
            report.instances += 1
            lhs, rhs = law(v.eta(node)), shape.fmap(v.eta, node)
            if lhs != rhs:
                report.fail(f"unit axiom at {node!r}: {lhs!r} != {rhs!r}")
        tf0 = _tf0_elements(law, gens, cb)
        if v is JSL and len(tf0) > 16:
            ttf0 = v.free_elements(tf0, cb, outer_limit or 2)
            report.exhaustive = False
        else:
            ttf0 = v.free_elements(tf0, cb, len(tf0) if v is JSL else None)
        lam = {t: law(t) for t in tf0}
        for tt in ttf0:
            report.instances += 1
            lhs = law(v.mu(tt))
            rhs = shape.fmap(v.mu, law(v.tmap(lam.__getitem__, tt)))
            if lhs != rhs:
                report.fail(f"multiplication axiom at {tt!r}: {lhs!r} != {rhs!r}")
        for images in itertools.product(gens, repeat=size):
            f = dict(zip(gens, images)).__getitem__
            for t in tf0:
                report.instances += 1
                lhs = shape.fmap(lambda s: v.tmap(f, s), law(t))
                rhs = law(v.tmap(lambda n: shape.fmap(f, n), t))
                if lhs != rhs:
                    report.fail(f"naturality at {t!r} under {dict(zip(gens, images))}: "
                                f"{lhs!r} != {rhs!r}")
    if report.exhaustive is False:
        report.notes = f"JSL outer sets limited to size {outer_limit or 2}"
    return report


# ---------------------------------------------------------------------------
# liftings


class LiftedAlgebra(Algebra):
    """``F A = (F0 A, F0 alpha . lam_A)``."""

    def __init__(self, law: DistLaw, base: Algebra):
        if base.variety is not law.variety:
            raise VarietyMismatch(f"{base.variety!r} vs {law.variety!r}")
        self.variety = law.variety
        self.law = law
        self.base = base
        self.finite = base.finite

    def alpha(self, t):
        return self.law.shape.fmap(self.base.alpha, self.law(t))

    def elements(self, bound=None):
        return self.law.shape.nodes(self.base.elements(bound))

    def contains(self, node):
        return self.law.shape.validate(node) and all(self.base.contains(c) for c in node.children)

    def __repr__(self):
        return f"F({self.base!r})"


def lift_apply(law: DistLaw, algebra: Algebra) -> LiftedAlgebra:
    return LiftedAlgebra(law, algebra)


@dataclass(frozen=True)
class Lifting:
    """The lifted endofunctor ``F`` on algebras of ``law.variety``."""

    law: DistLaw

    @property
    def variety(self):
        return self.law.variety

    @property
    def shape(self):
        return self.law.shape

    def apply(self, algebra: Algebra) -> Algebra:
        return LiftedAlgebra(self.law, algebra)

    def fmap(self, f: Callable, value: FNode) -> FNode:
        return self.law.shape.fmap(f, value)

    def children(self, value: FNode) -> tuple:
        return value.children

    def values(self, elements: Sequence, bound: int | None = None) -> list:
        return self.law.shape.nodes(elements)

    def __repr__(self):
        return f"Lifting({self.law!r})"


@dataclass(frozen=True)
class WithConstant:
    """The functor ``F(-) + Y`` for a free algebra ``Y`` (variety coproduct)."""

    base: Any
    constant: FreeAlgebra

    def __post_init__(self):
        if self.base.variety is not self.constant.variety:
            raise VarietyMismatch("constant summand lives in another variety")

    @property
    def variety(self):
        return self.base.variety

    @property
    def shape(self):
        return self.base.shape

    def apply(self, algebra: Algebra) -> Algebra:
        return CoproductAlgebra(self.base.apply(algebra), self.constant)

    def fmap(self, f, value):
        return coprod_map(lambda node: self.base.fmap(f, node), lambda y: y, value)

    def children(self, value) -> tuple:
        return tuple(c for part in left_parts(value) for c in self.base.children(part))

    def values(self, elements, bound=None):
        left = self.base.values(elements, bound)
        right = self.constant.elements(bound)
        if self.variety is JSL:
            return [Pair(b, y) for b in left for y in right]
        return [Inl(b) for b in left] + [Inr(y) for y in right]

    def __repr__(self):
        return f"{self.base!r} + T{list(self.constant.generators)}"


def lifting(v: Variety | str, shape: Shape) -> Lifting:
    return Lifting(builtin_law(variety(v), shape))
