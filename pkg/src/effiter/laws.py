"""Randomised checks of the three laws relating ``aft`` and ``box``.

1. ``t . (s . e) = (t s) . e``
2. ``s . (e box f) = e box (s . f)``
3. ``(e box f) box g = (inl . e) box (f box g)`` up to reassociating variables

Systems are drawn with a seeded generator; parameters live in free
algebras so that the homomorphisms ``s, t`` are generator maps.
"""

from __future__ import annotations

import random
from typing import Sequence

from .equation import FfgEquation, aft, associator, box, rename
from .functor import FNode, IdShape, MooreShape, Shape, lifting
from .report import LawReport
from .variety import (JSL, SET, UNARY, Coproduct, FreeAlgebra, Pair, Variety, extend_hom, free,
                      variety)


def default_shape(v: Variety) -> Shape:
    if v is UNARY:
        return IdShape()
    return MooreShape((0, 1), ("a", "b"))


def random_element(v: Variety, gens: Sequence, rng: random.Random, counter: int = 3):
    if v is SET:
        return rng.choice(gens)
    if v is UNARY:
        return (rng.randint(0, counter), rng.choice(gens))
    return frozenset(g for g in gens if rng.random() < 0.5)


def random_rhs(functor, variables: Sequence, params: FreeAlgebra, rng: random.Random,
               counter: int = 3):
    """A random element of ``F(TX) + TZ``."""
    v, shape = functor.variety, functor.shape
    label = rng.choice(shape.labels())
    make_node = lambda: FNode(label, tuple(random_element(v, variables, rng, counter)
                                           for _ in range(shape.arity(label))))
    can_node = bool(variables) or shape.arity(label) == 0
    if v is JSL:
        return (make_node(), random_element(v, params.generators, rng, counter))
    if params.generators and (not can_node or rng.random() < 0.3):
        return ("param", random_element(v, params.generators, rng, counter))
    return ("node", make_node())


def random_equation(functor, variables: Sequence, params: FreeAlgebra, rng: random.Random,
                    counter: int = 3) -> FfgEquation:
    carrier = FreeAlgebra(functor.variety, tuple(variables))
    summand = Coproduct(functor.apply(carrier), params)
    step = {}
    for x in variables:
        drawn = random_rhs(functor, variables, params, rng, counter)
        if functor.variety is JSL:
            step[x] = Pair(*drawn)
        elif drawn[0] == "node":
            step[x] = summand.inl(drawn[1])
        else:
            step[x] = summand.inr(drawn[1])
    return FfgEquation(functor, variables, params, step)


def _names(prefix: str, n: int) -> tuple:
    return tuple(f"{prefix}{i}" for i in range(n))


def _random_hom(source: FreeAlgebra, target: FreeAlgebra, rng, counter):
    images = {g: random_element(source.variety, target.generators, rng, counter)
              for g in source.generators}
    return extend_hom(images, target, source=source), images


def check_combinator_laws(v: Variety | str, shape: Shape | None = None, instances: int = 500,
                          seed: int = 0, max_size: int = 3, counter: int = 3) -> list[LawReport]:
    """Run each law on ``instances`` random cases; sizes of X, Y, Z are at most ``max_size``."""
    v = variety(v)
    functor = lifting(v, shape or default_shape(v))
    rng = random.Random(seed)
    size = lambda low=1: rng.randint(low, max_size)
    reports = [LawReport(axiom=f"{name} [{v!r}]", seed=seed, exhaustive=False)
               for name in ("aft-composition", "aft-box", "box-associativity")]
    law1, law2, law3 = reports

    # SET parameters must be nonempty for homomorphisms out of them to exist
    low = 1 if v is SET else 0
    for _ in range(instances):
        X, Z = _names("x", size()), _names("z", size(low))
        TZ = free(v, Z)
        TZ1, TZ2 = free(v, _names("u", size(1))), free(v, _names("w", size(1)))
        e = random_equation(functor, X, TZ, rng, counter)
        s, s_map = _random_hom(TZ, TZ1, rng, counter)
        t, t_map = _random_hom(TZ1, TZ2, rng, counter)
        law1.instances += 1
        lhs = aft(t, aft(s, e, TZ1), TZ2)
        rhs = aft(lambda a: t(s(a)), e, TZ2)
        if lhs != rhs:
            law1.fail(f"e={e!r}, s={s_map}, t={t_map}: {lhs!r} != {rhs!r}")

    for _ in range(instances):
        X, Y, Z = _names("x", size()), _names("y", size()), _names("z", size(low))
        TY, TZ = free(v, Y), free(v, Z)
        TW = free(v, _names("w", size(1)))
        e = random_equation(functor, X, TY, rng, counter)
        f = random_equation(functor, Y, TZ, rng, counter)
        s, s_map = _random_hom(TZ, TW, rng, counter)
        law2.instances += 1
        lhs = aft(s, box(e, f), TW)
        rhs = box(e, aft(s, f, TW))
        if lhs != rhs:
            law2.fail(f"e={e!r}, f={f!r}, s={s_map}: {lhs!r} != {rhs!r}")

    for _ in range(instances):
        X, Y, Z = _names("x", size()), _names("y", size()), _names("z", size())
        W = _names("w", size(low))
        TY, TZ, TW = free(v, Y), free(v, Z), free(v, W)
        e = random_equation(functor, X, TY, rng, counter)
        f = random_equation(functor, Y, TZ, rng, counter)
        g = random_equation(functor, Z, TW, rng, counter)
        fg = box(f, g)
        inl = lambda t: v.tmap(lambda y: (0, y), t)
        law3.instances += 1
        left = box(box(e, f), g)
        lhs = rename(left, associator(left))
        rhs = box(aft(inl, e, free(v, fg.variables)), fg)
        if lhs != rhs:
            law3.fail(f"e={e!r}, f={f!r}, g={g!r}: {lhs!r} != {rhs!r}")
    return reports


__all__ = ["check_combinator_laws", "default_shape", "random_element", "random_equation",
           "random_rhs"]
