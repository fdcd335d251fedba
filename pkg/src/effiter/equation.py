"""Finite equation systems ``e: X -> F(TX) + A`` and their combinators.

Variables ``X`` are generators of a free algebra; the right-hand side of
a variable is an element of the variety coproduct ``F(TX) + A``
(a tagged ``Inl``/``Inr`` for SET and UNARY, a :class:`Pair` for JSL).

``aft(h, e)`` re-parameterises along ``h: A -> B``; ``box(e, f)`` plugs
the system ``f`` for the parameters of ``e``.  ``solve_in_phi`` solves a
system in a φ backend by gluing it to representative coalgebras of its
parameters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Mapping, Sequence

from .coalgebra import FfgCoalgebra, coproduct_coalgebras
from .errors import VarietyMismatch
from .functor import FNode, Lifting, lifting, shape_from_json, shape_to_json
from .variety import (JSL, SET, UNARY, Algebra, Coproduct, FreeAlgebra, FiniteAlgebra, Inl, Inr,
                      Pair, algebra_from_json, algebra_to_json, coprod_map, elem_from_json,
                      elem_to_json, extend_hom, free, gen_from_json, gen_to_json, is_hom,
                      right_parts, sort_key, variety)


class FfgEquation:
    """A generator map ``X -> F(TX) + params``."""

    def __init__(self, functor, variables: Sequence, params: Algebra, step: Mapping,
                 name: str = "", validate: bool = True):
        if params.variety is not functor.variety:
            raise VarietyMismatch(f"parameters in {params.variety!r}, functor over "
                                  f"{functor.variety!r}")
        self.functor = functor
        self.variables = tuple(variables)
        self.params = params
        self.step = dict(step)
        self.name = name
        self.carrier = FreeAlgebra(functor.variety, self.variables)
        self.sum = Coproduct(functor.apply(self.carrier), params)
        if set(self.step) != set(self.variables):
            raise ValueError("step must be defined exactly on the variables")
        if not validate:
            return
        for x, value in self.step.items():
            if not self.sum.algebra.contains(value):
                raise ValueError(f"right-hand side of {x!r} is not in F(TX) + A: {value!r}")

    @property
    def variety(self):
        return self.functor.variety

    def extended(self) -> Callable:
        """``e*: TX -> F(TX) + A``."""
        return extend_hom(self.step, self.sum.algebra, source=self.carrier)

    def parameters_used(self) -> list:
        """Parameter values occurring in right-hand sides, in order of variables."""
        return [a for x in self.variables for a in right_parts(self.step[x])]

    def key(self) -> tuple:
        """Hashable identity of the generator map (variables in order)."""
        return (self.variables, tuple(self.step[x] for x in self.variables))

    def __eq__(self, other):
        if not isinstance(other, FfgEquation):
            return NotImplemented
        return (self.functor == other.functor and self.params == other.params
                and set(self.variables) == set(other.variables) and self.step == other.step)

    def __hash__(self):
        return hash((self.functor, frozenset(self.step.items())))

    def __repr__(self):
        if self.name:
            return self.name
        body = "; ".join(f"{x!r} = {self.step[x]!r}" for x in self.variables)
        return f"FfgEquation({body})"


@dataclass
class Solution:
    """An assignment of parameter-algebra elements to the variables."""

    equation: FfgEquation
    assignment: dict
    carrier: Algebra

    def __call__(self, x):
        return self.assignment[x]

    def extended(self) -> Callable:
        return extend_hom(self.assignment, self.carrier, source=self.equation.carrier)


def equation(functor, variables: Sequence, params: Algebra, step: Mapping, name: str = ""):
    return FfgEquation(functor, variables, params, step, name)


def lhs(e: FfgEquation, node) -> Any:
    """Right-hand side ``inl(node)`` in ``F(TX) + A``."""
    return e.sum.inl(node)


def rhs(e: FfgEquation, a) -> Any:
    return e.sum.inr(a)


# ---------------------------------------------------------------------------
# combinators


def aft(h: Callable, e: FfgEquation, target: Algebra | None = None,
        check: bool = True) -> FfgEquation:
    """``h . e = (F(TX) + h) . e`` for a homomorphism ``h: params -> target``."""
    target = e.params if target is None else target
    if target.variety is not e.variety:
        raise VarietyMismatch(f"{target.variety!r} vs {e.variety!r}")
    if check and e.params.finite:
        ok, why = is_hom(h, e.params, target)
        if not ok:
            raise ValueError(f"not a homomorphism: {why}")
    step = {x: coprod_map(lambda b: b, h, e.step[x]) for x in e.variables}
    return FfgEquation(e.functor, e.variables, target, step, validate=check)


def _tag(v, i):
    return lambda t: v.tmap(lambda g: (i, g), t)


def box(e: FfgEquation, f: FfgEquation) -> FfgEquation:
    """Combine ``e: X -> F(TX) + TY`` with ``f: Y -> F(TY) + Z``.

    Variables of the result are ``(0, x)`` for ``x`` in ``X`` and
    ``(1, y)`` for ``y`` in ``Y``; parameters are those of ``f``.
    """
    if e.functor != f.functor:
        raise VarietyMismatch(f"{e.functor!r} vs {f.functor!r}")
    if not (isinstance(e.params, FreeAlgebra)
            and set(e.params.generators) == set(f.variables)):
        raise ValueError("parameters of the first system must be free on the "
                         "variables of the second")
    functor, v = e.functor, e.variety
    variables = [(0, x) for x in e.variables] + [(1, y) for y in f.variables]
    total = FreeAlgebra(v, tuple(variables))
    out = Coproduct(functor.apply(total), f.params)
    left = lambda node: functor.fmap(_tag(v, 0), node)
    right = lambda node: functor.fmap(_tag(v, 1), node)
    f_star = f.extended()
    through_f = lambda t: coprod_map(right, lambda z: z, f_star(t))
    glue = e.sum.copair(lambda node: out.inl(left(node)), through_f, out.algebra)
    step = {(0, x): glue(e.step[x]) for x in e.variables}
    step.update({(1, y): coprod_map(right, lambda z: z, f.step[y]) for y in f.variables})
    return FfgEquation(functor, variables, f.params, step, validate=False)


def rename(e: FfgEquation, r: Mapping) -> FfgEquation:
    """Rename variables along the bijection ``r`` (inside right-hand sides too)."""
    if len(set(r.values())) != len(r) or set(r) != set(e.variables):
        raise ValueError("renaming must be a bijection on the variables")
    v = e.variety
    move = lambda node: e.functor.fmap(lambda t: v.tmap(r.__getitem__, t), node)
    step = {r[x]: coprod_map(move, lambda a: a, e.step[x]) for x in e.variables}
    return FfgEquation(e.functor, [r[x] for x in e.variables], e.params, step)


def associator(e: FfgEquation) -> dict:
    """Variable renaming ``(X+Y)+Z -> X+(Y+Z)`` for nested ``box`` results."""
    out = {}
    for var in e.variables:
        i, rest = var
        if i == 0:
            j, x = rest
            out[var] = (0, x) if j == 0 else (1, (0, x))
        else:
            out[var] = (1, (1, rest))
    return out


# ---------------------------------------------------------------------------
# effectful systems


def from_effectful(e0: Mapping, functor, params: Algebra) -> FfgEquation:
    """Turn ``e0: X -> T(F0 X + A)`` into an equation ``X -> F(TX) + A``.

    Values of ``e0`` are elements of ``T`` over tagged ``Inl(node)`` /
    ``Inr(a)``: a single tagged value for SET, ``(n, tagged)`` for UNARY and
    a frozenset of tagged values for JSL.  The value is split into its
    ``T F0 X`` and ``TA`` parts, the first is sent through the distributive
    law and the second through the structure of ``A``.
    """
    if not isinstance(functor, Lifting):
        raise ValueError("effectful systems need a lifted functor")
    v, law = functor.variety, functor.law
    variables = tuple(e0)
    carrier = FreeAlgebra(v, variables)
    summand = Coproduct(functor.apply(carrier), params)
    step = {}
    for x, t in e0.items():
        if v is SET:
            step[x] = summand.inl(t.value) if isinstance(t, Inl) else summand.inr(t.value)
        elif v is UNARY:
            n, tagged = t
            if isinstance(tagged, Inl):
                step[x] = summand.inl(law((n, tagged.value)))
            else:
                step[x] = summand.inr(params.alpha((n, tagged.value)))
        else:
            nodes = frozenset(s.value for s in t if isinstance(s, Inl))
            values = frozenset(s.value for s in t if isinstance(s, Inr))
            if len(nodes) + len(values) != len(t):
                raise ValueError(f"value of {x!r} mixes untagged elements: {t!r}")
            step[x] = Pair(law(nodes), params.alpha(values))
    return FfgEquation(functor, variables, params, step)


# ---------------------------------------------------------------------------
# coalgebras as equations and back


def coalgebra_as_equation(c: FfgCoalgebra, params: Algebra | None = None,
                          fill=None) -> FfgEquation:
    """``inl . c`` as a system with parameters in ``params``.

    By default the parameters are the initial algebra ``T(empty)``; for
    JSL the parameter component is the bottom (or ``fill``).
    """
    params = free(c.variety, ()) if params is None else params
    summand = Coproduct(c.functor.apply(c.carrier), params)
    step = {}
    for x in c.generators:
        value = summand.inl(c.step[x])
        if fill is not None and c.variety is JSL:
            value = Pair(value.left, fill)
        step[x] = value
    return FfgEquation(c.functor, c.generators, params, step)


def equation_as_coalgebra(e: FfgEquation) -> FfgCoalgebra:
    """Strip an unused parameter summand (parameters must be ``T(empty)``)."""
    if not (isinstance(e.params, FreeAlgebra) and not e.params.generators):
        raise ValueError("only systems over the initial algebra are coalgebras")
    step = {}
    for x in e.variables:
        value = e.step[x]
        if isinstance(value, Pair):
            step[x] = value.left
        elif isinstance(value, Inl):
            step[x] = value.value
        else:
            raise ValueError(f"{x!r} refers to a parameter of the initial algebra")
    return FfgCoalgebra(e.functor, e.variables, step, validate=False)


# ---------------------------------------------------------------------------
# solving in a φ backend


def solve_in_phi(e: FfgEquation, backend) -> Solution:
    """Solve ``e`` in a φ backend through representatives of its parameters.

    Parameter classes are replaced by their representatives in the
    coproduct ``C`` of the representative coalgebras; the resulting system
    is combined with ``C`` into a coalgebra on ``X + C`` whose states at the
    ``X``-generators give the solution.
    """
    if e.functor != backend.functor:
        raise VarietyMismatch(f"{e.functor!r} vs {backend.functor!r}")
    v, functor = e.variety, e.functor
    classes = e.parameters_used()
    reps: list = []
    index: dict = {}
    for cls in classes:
        coalg = backend.representative(cls).coalgebra
        if id(coalg) not in index:
            index[id(coalg)] = len(reps)
            reps.append(coalg)
    C, injections = coproduct_coalgebras(reps, functor=functor)

    def embed(cls):
        rep = backend.representative(cls)
        return injections[index[id(rep.coalgebra)]](rep.element)

    w = FfgEquation(functor, e.variables, C.carrier,
                    {x: coprod_map(lambda b: b, embed, e.step[x]) for x in e.variables})
    glued = equation_as_coalgebra(box(w, coalgebra_as_equation(C)))
    classes = backend.classes_of(glued, [v.eta((0, x)) for x in e.variables])
    assignment = dict(zip(e.variables, classes))
    return Solution(e, assignment, backend.carrier)


# ---------------------------------------------------------------------------
# JSON


def _node_to_json(v, node: FNode) -> dict:
    return {"label": gen_to_json(node.label),
            "children": [elem_to_json(v, c) for c in node.children]}


def _node_from_json(v, d) -> FNode:
    return FNode(gen_from_json(d["label"]), tuple(elem_from_json(v, c) for c in d["children"]))


def _param_to_json(params: Algebra, a):
    if isinstance(params, FreeAlgebra):
        return elem_to_json(params.variety, a)
    if isinstance(params, FiniteAlgebra):
        return {"elem": gen_to_json(a)}
    raise TypeError(f"parameters in {params!r} do not serialise")


def _param_from_json(params: Algebra, d):
    if isinstance(params, FreeAlgebra):
        return elem_from_json(params.variety, d)
    return gen_from_json(d["elem"])


def equation_to_json(e: FfgEquation) -> dict:
    if not isinstance(e.functor, Lifting):
        raise TypeError("only systems over a lifted functor serialise")
    v = e.variety
    if isinstance(e.params, FreeAlgebra):
        params = {"free": [gen_to_json(g) for g in e.params.generators]}
    else:
        params = {"finite": algebra_to_json(e.params)}
    step = []
    for x in e.variables:
        value = e.step[x]
        entry: dict = {"var": gen_to_json(x)}
        if isinstance(value, Pair):
            entry["node"] = _node_to_json(v, value.left)
            entry["param"] = _param_to_json(e.params, value.right)
        elif isinstance(value, Inl):
            entry["node"] = _node_to_json(v, value.value)
        else:
            entry["param"] = _param_to_json(e.params, value.value)
        step.append(entry)
    return {"variety": v.tag.value, "shape": shape_to_json(e.functor.shape),
            "params": params, "equations": step}


def equation_from_json(d: Mapping) -> FfgEquation:
    v = variety(d["variety"])
    functor = lifting(v, shape_from_json(d["shape"]))
    if "free" in d["params"]:
        params: Algebra = free(v, [gen_from_json(g) for g in d["params"]["free"]])
    else:
        params = algebra_from_json(d["params"]["finite"])
    variables, step = [], {}
    for entry in d["equations"]:
        x = gen_from_json(entry["var"])
        variables.append(x)
        if v is JSL:
            step[x] = Pair(_node_from_json(v, entry["node"]),
                           _param_from_json(params, entry["param"]))
        elif "node" in entry:
            step[x] = Inl(_node_from_json(v, entry["node"]))
        else:
            step[x] = Inr(_param_from_json(params, entry["param"]))
    return FfgEquation(functor, variables, params, step)


def sorted_vars(e: FfgEquation) -> list:
    return sorted(e.variables, key=sort_key)
