"""Algebras with a solution operator for finite equation systems.

An :class:`ElgotAlgebra` bundles an ``F``-algebra ``a: F A -> A`` with a
solver ``e -> e†``.  The two axioms (weak functoriality and
compositionality) are semantic, so they are checked by the harness in
this module rather than enforced at construction.
"""

from __future__ import annotations

import functools
import itertools
import random
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .coalgebra import FfgCoalgebra, HomCheck
from .equation import (FfgEquation, Solution, aft, box, coalgebra_as_equation)
from .errors import NonMonotoneError, UnsupportedInstance, VarietyMismatch
from .functor import WithConstant
from .report import LawReport
from .variety import (JSL, SET, Algebra, Coproduct, FiniteAlgebra, FreeAlgebra, Pair,
                      extend_hom, free, is_hom)


class ElgotAlgebra:
    """``(A, a, †)``: carrier, structure on ``F A`` and a solver."""

    def __init__(self, functor, carrier: Algebra, structure: Callable, solver: Callable,
                 name: str = "", check: bool = True):
        if carrier.variety is not functor.variety:
            raise VarietyMismatch(f"{carrier.variety!r} vs {functor.variety!r}")
        self.functor = functor
        self.carrier = carrier
        self.structure = structure
        self._solver = solver
        self.name = name
        if check and carrier.finite:
            ok, why = is_hom(structure, functor.apply(carrier), carrier)
            if not ok:
                raise ValueError(f"structure of {name or 'algebra'} is not a homomorphism: {why}")

    @property
    def variety(self):
        return self.functor.variety

    def solve(self, e: FfgEquation) -> Solution:
        if e.functor != self.functor:
            raise VarietyMismatch(f"system over {e.functor!r}, algebra over {self.functor!r}")
        out = self._solver(e)
        if isinstance(out, Solution):
            return out
        return Solution(e, dict(out), self.carrier)

    def __repr__(self):
        return self.name or "ElgotAlgebra"


def backend_algebra(backend) -> ElgotAlgebra:
    """A φ backend as an algebra with ``solve_in_phi`` as solver."""
    return ElgotAlgebra(backend.functor, backend.carrier, backend.algebra_structure,
                        backend.solve, name=f"phi[{backend.name}]", check=False)


def evaluate(A, e: FfgEquation, assignment: Mapping) -> dict:
    """One unfolding ``[a, id] . (F s + id) . e`` of an assignment."""
    s_star = extend_hom(dict(assignment), A.carrier, source=e.carrier)
    glue = e.sum.copair(lambda node: A.structure(A.functor.fmap(s_star, node)),
                        lambda a: a, A.carrier)
    return {x: glue(e.step[x]) for x in e.variables}


def check_solution(A: ElgotAlgebra, e: FfgEquation, s: Solution | Mapping) -> HomCheck:
    """Does ``s`` satisfy ``s = [a, id] . (F s + id) . e`` on every variable?"""
    assignment = s.assignment if isinstance(s, Solution) else dict(s)
    if set(assignment) != set(e.variables):
        return HomCheck(False, ("variables", sorted(map(repr, assignment))))
    unfolded = evaluate(A, e, assignment)
    for x in e.variables:
        if unfolded[x] != assignment[x]:
            return HomCheck(False, (x, assignment[x], unfolded[x]))
    return HomCheck(True)


# ---------------------------------------------------------------------------
# least solutions on finite posets


class PointedPosetAlgebra:
    """A finite poset with least element and a monotone structure (SET variety)."""

    def __init__(self, functor, elements: Sequence, leq, structure: Callable, name: str = ""):
        if functor.variety is not SET:
            raise VarietyMismatch("pointed posets are algebras of the identity monad")
        self.functor = functor
        self.elements = list(elements)
        self.carrier = FiniteAlgebra(SET, self.elements, name=name)
        self._leq = leq if callable(leq) else (lambda a, b, rel=frozenset(leq): (a, b) in rel)
        self.structure = structure
        self.name = name
        for a in self.elements:
            if not self.leq(a, a):
                raise ValueError(f"order not reflexive at {a!r}")
            for b in self.elements:
                if a != b and self.leq(a, b) and self.leq(b, a):
                    raise ValueError(f"order not antisymmetric at {a!r}, {b!r}")
                for c in self.elements:
                    if self.leq(a, b) and self.leq(b, c) and not self.leq(a, c):
                        raise ValueError("order not transitive")
        least = [b for b in self.elements if all(self.leq(b, a) for a in self.elements)]
        if not least:
            raise ValueError("no least element")
        self.bottom = least[0]

    def leq(self, a, b) -> bool:
        return self._leq(a, b)

    def is_monotone(self) -> bool:
        nodes = self.functor.values(self.elements)
        for n1 in nodes:
            for n2 in nodes:
                if (n1.label == n2.label
                        and all(self.leq(a, b) for a, b in zip(n1.children, n2.children))
                        and not self.leq(self.structure(n1), self.structure(n2))):
                    return False
        return True

    def elgot(self) -> ElgotAlgebra:
        return ElgotAlgebra(self.functor, self.carrier, self.structure,
                            lambda e: kleene_solve(self, e), name=self.name or "kleene")

    def __repr__(self):
        return self.name or "PointedPosetAlgebra"


def kleene_solve(P: PointedPosetAlgebra, e: FfgEquation) -> Solution:
    """Least solution by iterating from the constant-bottom assignment."""
    if e.variety is not SET:
        raise VarietyMismatch("Kleene iteration runs on the identity monad")
    current = {x: P.bottom for x in e.variables}
    for _ in range(len(P.elements) * max(1, len(e.variables)) + 1):
        nxt = evaluate(P, e, current)
        for x in e.variables:
            if not P.leq(current[x], nxt[x]):
                raise NonMonotoneError(f"iteration decreased at {x!r}: "
                                       f"{current[x]!r} -> {nxt[x]!r}")
        if nxt == current:
            return Solution(e, current, P.carrier)
        current = nxt
    raise NonMonotoneError("iteration did not stabilise")


# ---------------------------------------------------------------------------
# parameters as a constant summand


def collapse_params(e: FfgEquation, h_star: Callable, base_functor) -> FfgEquation:
    """``e_h``: send the constant summand ``TY`` of ``F(TX) + TY + A`` into ``A``."""
    if not isinstance(e.functor, WithConstant):
        raise ValueError("system has no constant summand")
    target = Coproduct(base_functor.apply(e.carrier), e.params)
    inner = Coproduct(base_functor.apply(e.carrier), e.functor.constant)
    collapse = inner.copair(target.inl, lambda ys: target.inr(h_star(ys)), target.algebra)
    glue = e.sum.copair(collapse, target.inr, target.algebra)
    return FfgEquation(base_functor, e.variables, e.params,
                       {x: glue(e.step[x]) for x in e.variables})


def embed_params(e: FfgEquation, functor: WithConstant) -> FfgEquation:
    """``ē``: view ``X -> F(TX) + A`` as ``X -> F(TX) + TY + A``."""
    if functor.base != e.functor:
        raise VarietyMismatch(f"{functor!r} does not extend {e.functor!r}")
    carrier = e.carrier
    target = Coproduct(functor.apply(carrier), e.params)
    inner = Coproduct(functor.base.apply(carrier), functor.constant)
    move = e.sum.copair(lambda node: target.inl(inner.inl(node)), target.inr, target.algebra)
    return FfgEquation(functor, e.variables, e.params, {x: move(e.step[x]) for x in e.variables})


def passage_to_param(A: ElgotAlgebra, h: Mapping, Y: FreeAlgebra) -> ElgotAlgebra:
    """Algebra for ``F(-) + Y`` with structure ``[a, h*]`` and solver ``e -> (e_h)†``."""
    if not isinstance(Y, FreeAlgebra):
        raise ValueError("the constant summand must be a free algebra")
    functor = WithConstant(A.functor, Y)
    h_star = extend_hom(dict(h), A.carrier, source=Y)
    summand = Coproduct(A.functor.apply(A.carrier), Y)
    structure = summand.copair(A.structure, h_star, A.carrier)

    def solver(e):
        return A.solve(collapse_params(e, h_star, A.functor)).assignment

    return ElgotAlgebra(functor, A.carrier, structure, solver,
                        name=f"{A!r} + h", check=False)


def split_structure(B: ElgotAlgebra) -> tuple[Callable, Callable]:
    """``(a, h)`` with ``B``'s structure equal to ``[a, h]``."""
    if not isinstance(B.functor, WithConstant):
        raise ValueError("structure does not split: no constant summand")
    summand = Coproduct(B.functor.base.apply(B.carrier), B.functor.constant)
    a = lambda node: B.structure(summand.inl(node))
    h = lambda ys: B.structure(summand.inr(ys))
    return a, h


def passage_from_param(B: ElgotAlgebra) -> ElgotAlgebra:
    """Algebra for ``F`` with structure ``a`` and solver ``e -> ē‡``."""
    a, _ = split_structure(B)
    functor = B.functor

    def solver(e):
        return B.solve(embed_params(e, functor)).assignment

    return ElgotAlgebra(functor.base, B.carrier, a, solver, name=f"{B!r} restricted",
                        check=False)


def param_unit(B: ElgotAlgebra) -> dict:
    """``h`` on the generators of ``Y`` recovered from ``B``'s structure."""
    _, h = split_structure(B)
    Y = B.functor.constant
    return {y: h(Y.eta(y)) for y in Y.generators}


# ---------------------------------------------------------------------------
# initiality and free algebras


class InitialMorphism:
    """``phi -> A`` sending the class of ``(C, z)`` to ``(i_A . c)‡`` at ``z``."""

    def __init__(self, backend, A: ElgotAlgebra):
        if backend.functor != A.functor:
            raise VarietyMismatch(f"{backend.functor!r} vs {A.functor!r}")
        self.backend = backend
        self.algebra = A
        self._solutions: dict = {}

    def solution_on(self, coalgebra: FfgCoalgebra) -> Callable:
        entry = self._solutions.get(id(coalgebra))
        if entry is None or entry[0] is not coalgebra:
            e = coalgebra_as_equation(coalgebra, params=self.algebra.carrier)
            entry = (coalgebra, self.algebra.solve(e).extended())
            self._solutions[id(coalgebra)] = entry
        return entry[1]

    def __call__(self, cls):
        rep = self.backend.representative(cls)
        return self.solution_on(rep.coalgebra)(rep.element)


def initial_morphism(backend, A: ElgotAlgebra) -> InitialMorphism:
    return InitialMorphism(backend, A)


def free_unit(backend, y):
    """``eta_Y(y)``: class of ``z`` with ``z -> (bottom, {y})``."""
    functor = backend.functor
    if not (isinstance(functor, WithConstant) and functor.variety is JSL):
        raise UnsupportedInstance("free algebras are provided for the JSL bisimulation "
                                  "backend with a constant summand")
    if y not in functor.constant.generators:
        raise ValueError(f"{y!r} is not a generator of the constant summand")
    carrier = free(JSL, ("z",))
    node = functor.base.apply(carrier).bottom()
    c = FfgCoalgebra(functor, ("z",), {"z": Pair(node, frozenset((y,)))}, name=f"eta({y})")
    return backend.class_of(c, frozenset(("z",)))


# ---------------------------------------------------------------------------
# axiom harness


@dataclass(frozen=True)
class Bounds:
    """Enumeration bounds: ``|X|, |Y| <= vars``, ``|Z| <= params``, counters ``<= counter``."""

    vars: int = 2
    params: int = 1
    counter: int = 2
    limit: int = 20000


def rhs_values(functor, variables: Sequence, params: Algebra, counter: int) -> list:
    """Every right-hand side in ``F(TX) + params`` within the counter bound."""
    carrier = FreeAlgebra(functor.variety, tuple(variables))
    nodes = functor.values(carrier.elements(counter), counter)
    right = params.elements(counter)
    summand = Coproduct(functor.apply(carrier), params)
    if functor.variety is JSL:
        return [Pair(b, a) for b in nodes for a in right]
    return [summand.inl(b) for b in nodes] + [summand.inr(a) for a in right]


def _var_names(prefix: str, n: int) -> tuple:
    return tuple(f"{prefix}{i}" for i in range(n))


def _systems(functor, variables, params, counter, limit, rng) -> tuple[list, bool]:
    values = rhs_values(functor, variables, params, counter)
    total = len(values) ** len(variables)
    if total <= limit:
        combos = itertools.product(values, repeat=len(variables))
        exhaustive = True
    else:
        combos = (tuple(rng.choice(values) for _ in variables) for _ in range(limit))
        exhaustive = False
    out = [FfgEquation(functor, variables, params, dict(zip(variables, rhs)), validate=False)
           for rhs in combos]
    return out, exhaustive


class _Solver:
    """Memoised solutions keyed by the system's generator map."""

    def __init__(self, A: ElgotAlgebra):
        self.A = A
        self.cache: dict = {}

    def __call__(self, e: FfgEquation) -> Callable:
        k = (e.variables, tuple(e.step[x] for x in e.variables))
        if k not in self.cache:
            self.cache[k] = functools.lru_cache(maxsize=None)(self.A.solve(e).extended())
        return self.cache[k]


def check_weak_functoriality(A: ElgotAlgebra, bounds: Bounds = Bounds(),
                             pool: Sequence | None = None, seed: int = 0) -> LawReport:
    """``(h . f)† . m = (h . e)†`` for homomorphisms ``m: (X, e) -> (Y, f)``.

    Systems ``e, f`` range over ``F(-) + TZ`` within the bounds and
    ``h: Z -> A`` over ``pool``; ``m`` is a homomorphism ``TX -> TY`` with
    ``(F m + TZ) . e = f* . m`` on generators.
    """
    rng = random.Random(seed)
    report = LawReport(axiom="weak-functoriality", seed=seed)
    functor, v = A.functor, A.variety
    pool = list(pool) if pool is not None else A.carrier.elements(bounds.counter)
    solve = _Solver(A)
    for nz in range(bounds.params + 1):
        Z = free(v, _var_names("z", nz))
        hs = [dict(zip(Z.generators, images)) for images in itertools.product(pool, repeat=nz)]
        h_stars = [extend_hom(h, A.carrier, source=Z) for h in hs]
        for ny in range(1, bounds.vars + 1):
            Y = _var_names("y", ny)
            fs, ex = _systems(functor, Y, Z, bounds.counter, bounds.limit, rng)
            report.exhaustive &= ex
            f_stars = [f.extended() for f in fs]
            TY = FreeAlgebra(v, Y)
            targets = TY.elements(bounds.counter)
            for nx in range(1, bounds.vars + 1):
                X = _var_names("x", nx)
                TX = FreeAlgebra(v, X)
                values = rhs_values(functor, X, Z, bounds.counter)
                summand = Coproduct(functor.apply(TX), Z)
                triples = []
                for images in itertools.product(targets, repeat=nx):
                    m = dict(zip(X, images))
                    m_star = extend_hom(m, TY, source=TX)
                    push = summand.map(lambda node: functor.fmap(m_star, node), lambda z: z)
                    preimage: dict = {}
                    for val in values:
                        preimage.setdefault(push(val), []).append(val)
                    for f, f_star in zip(fs, f_stars):
                        choices = [preimage.get(f_star(m[x]), ()) for x in X]
                        triples.extend((m, f, rhs) for rhs in itertools.product(*choices))
                budget = max(1, bounds.limit // max(1, len(hs)))
                if len(triples) > budget:
                    triples = rng.sample(triples, budget)
                    report.exhaustive = False
                for m, f, rhs in triples:
                    e = FfgEquation(functor, X, Z, dict(zip(X, rhs)), validate=False)
                    for h, h_star in zip(hs, h_stars):
                        report.instances += 1
                        sol_e = solve(aft(h_star, e, A.carrier, check=False))
                        sol_f = solve(aft(h_star, f, A.carrier, check=False))
                        for x in X:
                            lhs, rhs_ = sol_f(m[x]), sol_e(v.eta(x))
                            if lhs != rhs_:
                                report.fail(f"e={e!r}, f={f!r}, m={m!r}, h={h!r}: "
                                            f"(h.f)+(m({x!r})) = {lhs!r} but "
                                            f"(h.e)+({x!r}) = {rhs_!r}")
                                break
    return report


def check_compositionality(A: ElgotAlgebra, bounds: Bounds = Bounds(),
                           pool: Sequence | None = None, seed: int = 0) -> LawReport:
    """``(f† . e)† = (e box f)† . inl`` for ``e: X -> F(TX) + TY``, ``f: Y -> F(TY) + A``.

    ``f`` ranges over ``h . f0`` with ``f0: Y -> F(TY) + TZ`` and
    ``h: Z -> A`` drawn from ``pool``.
    """
    rng = random.Random(seed)
    report = LawReport(axiom="compositionality", seed=seed)
    functor, v = A.functor, A.variety
    pool = list(pool) if pool is not None else A.carrier.elements(bounds.counter)
    solve = _Solver(A)
    for nz in range(bounds.params + 1):
        Z = free(v, _var_names("z", nz))
        hs = [dict(zip(Z.generators, images)) for images in itertools.product(pool, repeat=nz)]
        h_stars = [extend_hom(h, A.carrier, source=Z) for h in hs]
        for ny in range(1, bounds.vars + 1):
            Y = _var_names("y", ny)
            TY = FreeAlgebra(v, Y)
            f0s, ex_f = _systems(functor, Y, Z, bounds.counter, bounds.limit, rng)
            for nx in range(1, bounds.vars + 1):
                X = _var_names("x", nx)
                es, ex_e = _systems(functor, X, TY, bounds.counter, bounds.limit, rng)
                total = len(es) * len(f0s)
                budget = max(1, bounds.limit // max(1, len(hs)))
                if total > budget:
                    picks = sorted(rng.sample(range(total), budget))
                    report.exhaustive = False
                else:
                    picks = range(total)
                pairs = [(es[i // len(f0s)], f0s[i % len(f0s)]) for i in picks]
                report.exhaustive &= ex_e and ex_f
                for e, f0 in pairs:
                    for h, h_star in zip(hs, h_stars):
                        report.instances += 1
                        f = aft(h_star, f0, A.carrier, check=False)
                        f_dagger = solve(f)
                        lhs = solve(aft(f_dagger, e, A.carrier, check=False))
                        rhs_ = solve(box(e, f))
                        for x in X:
                            a, b = lhs(v.eta(x)), rhs_(v.eta((0, x)))
                            if a != b:
                                report.fail(f"e={e!r}, f={f0!r}, h={h!r}: "
                                            f"(f+.e)+({x!r}) = {a!r} but "
                                            f"(e box f)+(inl {x!r}) = {b!r}")
                                break
    return report
