"""Independent brute-force oracles shared by the test modules.

Nothing here goes through the library's determinisation, refinement or
solvers; each function recomputes its answer from definitions.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from effiter.coalgebra import FiniteCoalgebra, is_coalg_hom
from effiter.functor import FNode, lifting
from effiter.variety import JSL, FiniteAlgebra, extend_hom, free, is_hom


# ---------------------------------------------------------------------------
# automata


def nfa_accepts(step: dict, start: set, word) -> bool:
    """Existential acceptance by direct simulation of the state sets."""
    current = set(start)
    for letter in word:
        current = {y for x in current for y in step[x][1][letter]}
    return any(step[x][0] == 1 for x in current)


def random_nfa(rng: random.Random, n_states: int, alphabet: tuple):
    """``{state: (output, {letter: successors})}`` plus the library's step map."""
    states = [f"s{i}" for i in range(n_states)]
    raw, step = {}, {}
    for s in states:
        out = rng.randint(0, 1)
        succ = {a: frozenset(t for t in states if rng.random() < 0.35) for a in alphabet}
        raw[s] = (out, succ)
        step[s] = FNode(out, tuple(succ[a] for a in alphabet))
    return raw, step


def words(alphabet, max_length: int):
    for n in range(max_length + 1):
        yield from itertools.product(alphabet, repeat=n)


# ---------------------------------------------------------------------------
# streams


def simulate(increments: dict, start, steps: int) -> list:
    """Emitted increments of ``x -> (k, x')`` by plain iteration."""
    out, x = [], start
    for _ in range(steps):
        k, x = increments[x]
        out.append(k)
    return out


def orbit_mean(increments: dict, start) -> Fraction:
    """Mean over the cycle the orbit falls into, by Floyd-free bookkeeping."""
    seen, seq, x = {}, [], start
    while x not in seen:
        seen[x] = len(seq)
        k, x = increments[x]
        seq.append(k)
    cycle = seq[seen[x]:]
    return Fraction(sum(cycle), len(cycle))


# ---------------------------------------------------------------------------
# finite join-semilattices


def all_homs(source, target) -> list:
    """Every homomorphism between finite algebras, as dicts."""
    src, tgt = source.elements(), target.elements()
    out = []
    for images in itertools.product(tgt, repeat=len(src)):
        h = dict(zip(src, images))
        if is_hom(h.__getitem__, source, target)[0]:
            out.append(h)
    return out


def chain(n: int) -> FiniteAlgebra:
    return FiniteAlgebra(JSL, list(range(n)), join=max, name=f"chain{n}")


def free_as_finite(gens) -> FiniteAlgebra:
    els = free(JSL, gens).elements()
    return FiniteAlgebra(JSL, els, join=lambda a, b: a | b, name=f"T{set(gens)}")


def quotients_of_free_pq() -> list:
    """``(X, e)`` with ``e: {p, q} -> X`` inducing a surjection ``T{p,q} -> X``."""
    out = []
    for X in (free_as_finite("pq"), chain(3), chain(2)):
        for images in itertools.product(X.elements(), repeat=2):
            e = dict(zip("pq", images))
            e_star = extend_hom(e, X, source=free(JSL, "pq"))
            if {e_star(t) for t in free(JSL, "pq").elements()} == set(X.elements()):
                out.append((X, e))
    return out


def sections(X, e) -> list:
    """Homomorphisms ``m: X -> T{p,q}`` with ``e* . m = id``."""
    TW = free_as_finite("pq")
    e_star = extend_hom(e, X, source=free(JSL, "pq"))
    return [m for m in all_homs(X, TW) if all(e_star(m[x]) == x for x in X.elements())]


def coalgebra_structures(X, e, functor) -> list:
    """All homomorphisms ``X -> F X`` for a quotient ``e: T{p,q} -> X``.

    Such a map is fixed by its values on ``e(p), e(q)``; candidates are
    extended from ``T{p,q}`` and kept when constant on the fibres of ``e``.
    """
    FX = functor.apply(X)
    T = free(JSL, "pq")
    e_star = extend_hom(e, X, source=T)
    out = []
    for vp, vq in itertools.product(FX.elements(), repeat=2):
        k = extend_hom({"p": vp, "q": vq}, FX, source=T)
        table = {}
        if all(table.setdefault(e_star(t), k(t)) == k(t) for t in T.elements()):
            assert is_hom(table.__getitem__, X, FX)[0]
            out.append(table)
    return out


def coalgebra_endomorphisms(c: FiniteCoalgebra) -> list:
    return [h for h in all_homs(c.carrier, c.carrier)
            if is_coalg_hom(c, c, h.__getitem__)]


def random_split_quotient(rng: random.Random, shape, quotients=None, cache={}):
    """A sampled ``(c, e, m)`` with ``c`` a coalgebra on a quotient of ``T{p,q}``."""
    functor = lifting(JSL, shape)
    quotients = quotients or quotients_of_free_pq()
    X, e = rng.choice([(X, e) for X, e in quotients if len(X.elements()) >= 2])
    key = (X.name, tuple(sorted(e.items())), shape)
    if key not in cache:
        cache[key] = coalgebra_structures(X, e, functor)
    table = rng.choice(cache[key])
    c = FiniteCoalgebra(functor, X, table, name=f"{X.name}-coalgebra")
    m = rng.choice(sections(X, e))
    return c, e, m


# ---------------------------------------------------------------------------
# finite posets


def poset_leq(elements, relation) -> dict:
    """Reflexive-transitive closure as a dict of pairs."""
    leq = {(a, b): a == b or (a, b) in relation for a in elements for b in elements}
    for k in elements:
        for a in elements:
            for b in elements:
                if leq[a, k] and leq[k, b]:
                    leq[a, b] = True
    return leq


def pointed_posets(max_size: int = 4):
    """Every partial order on ``{0..n-1}`` with least element 0, up to n = max_size.

    Orders are drawn as subsets of the strict pairs ``i < j`` (a linear
    extension), closed transitively and deduplicated.
    """
    seen = set()
    for n in range(1, max_size + 1):
        els = list(range(n))
        pairs = [(i, j) for i in els for j in els if 0 < i < j]
        for k in range(len(pairs) + 1):
            for rel in itertools.combinations(pairs, k):
                leq = poset_leq(els, set(rel) | {(0, j) for j in els})
                key = (n, frozenset(p for p, v in leq.items() if v))
                if key not in seen:
                    seen.add(key)
                    yield els, leq
