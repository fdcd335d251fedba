"""Ready-made algebras with solvers, used by the harness, the tests and the CLI.

Stream instances (unary variety, identity functor): the rational mean
of a cycle, a zero test on it, and the one-point algebra.  Moore/JSL
instances: nonemptiness by least solutions, languages truncated to words
of bounded length, and the one-point algebra.  ``broken_nonemptiness`` is
a deliberately wrong solver kept as a negative control for the harness.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .elgot import ElgotAlgebra, evaluate
from .equation import FfgEquation
from .functor import FNode, Lifting, MooreShape
from .phi import STREAM_FUNCTOR, BisimBackend, StreamBackend, cycle_coalgebra
from .coalgebra import FfgCoalgebra
from .variety import JSL, UNARY, FiniteAlgebra, Inr, OpaqueAlgebra, terminal

# ---------------------------------------------------------------------------
# stream instances


def _path_solver(cycle_value: Callable) -> Callable:
    # u is the identity on these carriers, so counters only matter on cycles
    def solve(e: FfgEquation) -> dict:
        out = {}
        for x in e.variables:
            order, counts, y = {}, [], x
            while True:
                value = e.step[y]
                if isinstance(value, Inr):
                    out[x] = value.value
                    break
                order[y] = len(counts)
                n, y = value.value.children[0]
                counts.append(n)
                if y in order:
                    out[x] = cycle_value(counts[order[y]:])
                    break
        return out
    return solve


def _first_child(node: FNode):
    return node.children[0]


def mean_algebra() -> ElgotAlgebra:
    """Nonnegative rationals; a cycle evaluates to the mean of its increments."""
    carrier = OpaqueAlgebra(
        UNARY, alpha=lambda t: t[1],
        contains=lambda a: isinstance(a, (int, Fraction)) and a >= 0,
        elements=lambda bound=None: [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2)],
        name="Q+")
    carrier.finite = False
    return ElgotAlgebra(STREAM_FUNCTOR, carrier, _first_child,
                        _path_solver(lambda cs: Fraction(sum(cs), len(cs))), name="mean")


def zero_test_algebra() -> ElgotAlgebra:
    """Booleans; a cycle evaluates to whether all its increments vanish."""
    carrier = FiniteAlgebra(UNARY, [False, True], u=lambda a: a, name="Bool")
    return ElgotAlgebra(STREAM_FUNCTOR, carrier, _first_child,
                        _path_solver(lambda cs: sum(cs) == 0), name="zero-test")


def point_algebra(functor) -> ElgotAlgebra:
    one = terminal(functor.variety)
    return ElgotAlgebra(functor, one, lambda node: (),
                        lambda e: {x: () for x in e.variables}, name="1")


def stream_algebras() -> list[ElgotAlgebra]:
    return [mean_algebra(), zero_test_algebra(), point_algebra(STREAM_FUNCTOR)]


def stream_pool(backend: StreamBackend) -> list:
    return [backend.class_of_rational(q) for q in (0, Fraction(1, 2), 1, 2)]


# ---------------------------------------------------------------------------
# Moore / JSL instances


def _moore(functor) -> MooreShape:
    if not (isinstance(functor, Lifting) and functor.variety is JSL
            and isinstance(functor.shape, MooreShape)):
        raise ValueError("expected JSL over a Moore shape")
    return functor.shape


def _iterate(A, e: FfgEquation, start, rounds: int) -> dict:
    current = {x: start for x in e.variables}
    for _ in range(rounds):
        nxt = evaluate(A, e, current)
        if nxt == current:
            break
        current = nxt
    return current


class _Nonempty:
    def __init__(self, functor):
        self.functor = functor
        self.carrier = FiniteAlgebra(JSL, [0, 1], join=max, name="{0,1}")

    def structure(self, node: FNode):
        return max((node.label, *node.children))


def nonemptiness_algebra(functor) -> ElgotAlgebra:
    """``{0,1}``: does some reachable state output 1 (least solution)?"""
    _moore(functor)
    A = _Nonempty(functor)
    solver = lambda e: _iterate(A, e, 0, len(e.variables) + 1)
    return ElgotAlgebra(functor, A.carrier, A.structure, solver, name="nonempty")


def broken_nonemptiness(functor) -> ElgotAlgebra:
    """Like :func:`nonemptiness_algebra`, but picks the greatest solution when
    the number of variables is even.  Each answer is a solution; the choice
    is not compositional."""
    _moore(functor)
    A = _Nonempty(functor)

    def solver(e):
        start = 1 if len(e.variables) % 2 == 0 else 0
        return _iterate(A, e, start, len(e.variables) + 1)

    return ElgotAlgebra(functor, A.carrier, A.structure, solver, name="broken-nonempty")


class _Truncated:
    def __init__(self, functor, k: int):
        shape = _moore(functor)
        if set(shape.outputs) != {0, 1}:
            raise ValueError("truncated languages need outputs {0, 1}")
        self.functor = functor
        self.k = k
        self.alphabet = shape.alphabet
        sample = [frozenset(), frozenset({()})]
        sample += [frozenset({(s,)}) for s in self.alphabet[:1]]
        self.carrier = OpaqueAlgebra(
            JSL, alpha=lambda t: frozenset().union(*t),
            contains=lambda a: isinstance(a, frozenset) and all(
                isinstance(w, tuple) and len(w) <= k for w in a),
            elements=lambda bound=None: list(sample),
            name=f"L<={k}")
        self.carrier.finite = False

    def structure(self, node: FNode):
        words = {()} if node.label == 1 else set()
        for s, child in zip(self.alphabet, node.children):
            words.update((s,) + w for w in child if len(w) < self.k)
        return frozenset(words)


def truncated_language_algebra(functor, k: int = 3) -> ElgotAlgebra:
    """Languages restricted to words of length at most ``k``; solutions are unique."""
    A = _Truncated(functor, k)
    solver = lambda e: _iterate(A, e, frozenset(), k + 2)
    return ElgotAlgebra(functor, A.carrier, A.structure, solver, name=f"lang<={k}")


def moore_algebras(functor) -> list[ElgotAlgebra]:
    return [truncated_language_algebra(functor), nonemptiness_algebra(functor),
            point_algebra(functor)]


def moore_pool(backend: BisimBackend) -> list:
    """Classes of: the empty language, ``{eps}``, all words, words of length >= 1."""
    functor = backend.functor
    shape = _moore(functor)
    k = len(shape.alphabet)
    loop = lambda g: tuple(frozenset({g}) for _ in range(k))
    none = tuple(frozenset() for _ in range(k))
    c = FfgCoalgebra(functor, ("all", "eps", "plus"), {
        "all": FNode(1, loop("all")),
        "eps": FNode(1, none),
        "plus": FNode(0, loop("all")),
    }, name="pool")
    return [backend.bottom()] + [backend.class_of(c, frozenset({g}))
                                 for g in ("eps", "all", "plus")]


def counting_cycle(a: int, b: int) -> FfgCoalgebra:
    """A ``b``-cycle emitting ``a`` in total."""
    return cycle_coalgebra([a] + [0] * (b - 1))
