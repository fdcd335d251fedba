"""Seeded equation corpora over the implemented backends."""

from __future__ import annotations

from fractions import Fraction

from effiter.coalgebra import FfgCoalgebra, determinize
from effiter.equation import FfgEquation
from effiter.functor import FNode, WithConstant, id_node
from effiter.instances import moore_pool, stream_pool
from effiter.phi import STREAM_FUNCTOR
from effiter.variety import Inl, Inr, Pair

from oracles import random_nfa


def _subset(rng, items, p=0.4):
    return frozenset(i for i in items if rng.random() < p)


def stream_params(b, rng, extra: int = 4) -> list:
    pool = stream_pool(b)
    for _ in range(extra):
        pool.append(b.class_of_rational(Fraction(rng.randint(0, 6), rng.randint(1, 4))))
    return pool


def stream_system(b, rng, pool, n_vars=None) -> FfgEquation:
    xs = [f"x{i}" for i in range(n_vars or rng.randint(1, 3))]
    step = {}
    for x in xs:
        if rng.random() < 0.3:
            step[x] = Inr(rng.choice(pool))
        else:
            step[x] = Inl(id_node((rng.randint(0, 3), rng.choice(xs))))
    return FfgEquation(STREAM_FUNCTOR, xs, b.carrier, step)


def moore_params(b, rng, nfas: int = 3) -> list:
    """Pool classes plus states of a few random NFAs."""
    functor = b.functor.base if isinstance(b.functor, WithConstant) else b.functor
    pool = list(moore_pool(b)) if not isinstance(b.functor, WithConstant) else []
    alphabet = functor.shape.alphabet
    for _ in range(nfas):
        c = determinize(random_nfa(rng, rng.randint(1, 3), alphabet)[1], functor.law)
        if isinstance(b.functor, WithConstant):
            c = _lift_to_constant(c, b.functor, rng)
        pool += [b.class_of(c, c.eta(x)) for x in c.generators]
    return pool


def _lift_to_constant(c, functor, rng):
    Y = functor.constant.generators
    step = {x: Pair(c.step[x], _subset(rng, Y)) for x in c.generators}
    return FfgCoalgebra(functor, c.generators, step)


def random_node(functor, xs, rng) -> FNode:
    shape = functor.shape
    return FNode(rng.choice(shape.outputs), tuple(_subset(rng, xs) for _ in shape.alphabet))


def moore_system(b, rng, pool, n_vars=None) -> FfgEquation:
    """``x = node | join of pool classes`` over the backend's functor."""
    functor = b.functor
    base = functor.base if isinstance(functor, WithConstant) else functor
    xs = [f"x{i}" for i in range(n_vars or rng.randint(1, 3))]
    step = {}
    for x in xs:
        node = random_node(base, xs, rng)
        if isinstance(functor, WithConstant):
            node = Pair(node, _subset(rng, functor.constant.generators))
        step[x] = Pair(node, b.alpha(_subset(rng, pool, 0.3)))
    return FfgEquation(functor, xs, b.carrier, step)


def params_system(functor, carrier, values, rng, n_vars=None) -> FfgEquation:
    """A system over ``F(-) + TY`` (``functor`` is a ``WithConstant``) with
    parameters drawn from ``values`` in ``carrier``."""
    base = functor.base
    Y = functor.constant.generators
    xs = [f"x{i}" for i in range(n_vars or rng.randint(1, 3))]
    step = {}
    for x in xs:
        inner = Pair(random_node(base, xs, rng), _subset(rng, Y))
        step[x] = Pair(inner, carrier.join(*_subset(rng, values, 0.3)))
    return FfgEquation(functor, xs, carrier, step)


def plain_system(functor, carrier, values, rng, n_vars=None) -> FfgEquation:
    """A JSL/Moore system with parameters joined from ``values``."""
    xs = [f"x{i}" for i in range(n_vars or rng.randint(1, 3))]
    step = {x: Pair(random_node(functor, xs, rng), carrier.join(*_subset(rng, values, 0.3)))
            for x in xs}
    return FfgEquation(functor, xs, carrier, step)


def poset_system(P, rng, n_vars=None) -> FfgEquation:
    """SET systems with parameters in a pointed poset ``P`` (Kleene corpus)."""
    functor, elements = P.functor, P.elements
    xs = [f"x{i}" for i in range(n_vars or rng.randint(1, 2))]
    shape = functor.shape
    step = {}
    for x in xs:
        if rng.random() < 0.25:
            step[x] = Inr(rng.choice(elements))
        else:
            label = rng.choice(shape.labels())
            step[x] = Inl(FNode(label, tuple(rng.choice(xs) for _ in range(shape.arity(label)))))
    return FfgEquation(functor, xs, P.carrier, step)
