"""Executable models of the locally ffg fixed point.

Two backends are provided.

:class:`StreamBackend` handles the unary variety with the identity
functor.  A coalgebra ``x -> (k, x')`` generates from a state ``(m, x)``
the eventually periodic stream of increments ``k``; two states are
identified iff the periods of their streams have the same arithmetic
mean, so a class is keyed by that mean.

:class:`BisimBackend` handles join-semilattices over Moore shapes (and
the same shapes with a constant summand).  There the colimit is computed by
behavioural equivalence, and a class is keyed by the canonically numbered
minimal machine of its representative.

Every class keeps a representative ``(coalgebra, element)``; the algebra
and coalgebra structure of the backend are computed from representatives.
"""

from __future__ import annotations

import re
import threading
import weakref
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Any, Iterator, Sequence

from .coalgebra import (FfgCoalgebra, HomCheck, MinimalMachine, coproduct_coalgebras,
                        empty_coalgebra, is_coalg_hom, minimize, minimize_many)
from .errors import ParseError, UnsupportedInstance, VarietyMismatch
from .functor import IdShape, Lifting, MooreShape, WithConstant, id_node, lifting
from .variety import JSL, UNARY, FreeAlgebra, OpaqueAlgebra, free

# ---------------------------------------------------------------------------
# eventually periodic streams


def _primitive_root(period: tuple) -> tuple:
    n = len(period)
    for d in range(1, n + 1):
        if n % d == 0 and period[:d] * (n // d) == period:
            return period[:d]
    return period


@dataclass(frozen=True)
class EpStream:
    """The stream ``prefix period period ...``, kept normalised.

    The period is reduced to its primitive root and the prefix is shortened
    while its last entry equals the last entry of the period (rotating the
    period accordingly); the denoted stream is unchanged.
    """

    prefix: tuple
    period: tuple

    def __post_init__(self):
        prefix, period = tuple(self.prefix), tuple(self.period)
        if not period:
            raise ValueError("period must be nonempty")
        if any(not isinstance(v, int) or v < 0 for v in prefix + period):
            raise ValueError("stream entries must be natural numbers")
        period = _primitive_root(period)
        while prefix and prefix[-1] == period[-1]:
            prefix = prefix[:-1]
            period = period[-1:] + period[:-1]
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "period", period)

    @property
    def mean(self) -> Fraction:
        return Fraction(sum(self.period), len(self.period))

    def take(self, n: int) -> list:
        out = list(self.prefix[:n])
        while len(out) < n:
            out.extend(self.period)
        return out[:n]

    def __iter__(self) -> Iterator[int]:
        yield from self.prefix
        while True:
            yield from self.period

    def __str__(self):
        body = lambda xs: "(" + ",".join(map(str, xs)) + ")"
        return (body(self.prefix) if self.prefix else "") + body(self.period) + "^w"


_EP = re.compile(r"\s*(?:\(([\d,\s]*)\))?\s*\(([\d,\s]+)\)\s*\^\s*(?:w|ω|omega)\s*$")


def parse_ep(text: str) -> EpStream:
    """Parse ``(1,2,7,4)(1,3,2)^w``; the prefix group is optional."""
    m = _EP.match(text)
    if not m:
        raise ParseError(f"not an eventually periodic stream literal: {text!r}", 1, 1)
    nums = lambda s: tuple(int(v) for v in s.split(",") if v.strip()) if s else ()
    period = nums(m.group(2))
    if not period:
        raise ParseError("empty period", 1, m.start(2) + 1)
    return EpStream(nums(m.group(1)), period)


def mean_cross_products(s: EpStream, t: EpStream) -> tuple[int, int]:
    """``(q * sum(s.period), p * sum(t.period))`` with ``p, q`` the period lengths."""
    return len(t.period) * sum(s.period), len(s.period) * sum(t.period)


def ep_equiv(s: EpStream, t: EpStream) -> bool:
    left, right = mean_cross_products(s, t)
    return left == right


# ---------------------------------------------------------------------------
# stream coalgebras

STREAM_FUNCTOR = lifting(UNARY, IdShape())


def _require_stream(c):
    if c.functor != STREAM_FUNCTOR:
        raise UnsupportedInstance("stream operations need the unary variety with the "
                                  "identity functor")


def _move(c: FfgCoalgebra, x):
    k, nxt = c.step[x].children[0]
    return k, nxt


def stream_coalgebra(increments: dict, name: str = "") -> FfgCoalgebra:
    """Coalgebra from ``x -> (k, x')`` given as ``{x: (k, x')}``."""
    return FfgCoalgebra(STREAM_FUNCTOR, tuple(increments),
                        {x: id_node(kx) for x, kx in increments.items()}, name=name)


def cycle_coalgebra(increments: Sequence[int], name: str = "") -> FfgCoalgebra:
    """Generators ``0..n-1`` in a cycle; generator ``i`` emits ``increments[i]``."""
    n = len(increments)
    return stream_coalgebra({i: (k, (i + 1) % n) for i, k in enumerate(increments)}, name)


def lasso_coalgebra(s: EpStream, name: str = "") -> FfgCoalgebra:
    """Generators ``0..|prefix|+|period|-1`` realising ``s`` from state ``(0, 0)``."""
    values = s.prefix + s.period
    n, start = len(values), len(s.prefix)
    step = {i: (k, i + 1 if i + 1 < n else start) for i, k in enumerate(values)}
    return stream_coalgebra(step, name or str(s))


def stream_of(c: FfgCoalgebra, state) -> EpStream:
    """Increments emitted from ``state = (m, x)``; the offset ``m`` is dropped."""
    _require_stream(c)
    _, x = state
    seen: dict = {}
    outs: list = []
    while x not in seen:
        seen[x] = len(outs)
        k, x = _move(c, x)
        outs.append(k)
    i = seen[x]
    return EpStream(tuple(outs[:i]), tuple(outs[i:]))


@dataclass
class ZigZag:
    """Coalgebra ``Z`` with homomorphisms ``g`` and ``h`` out of it."""

    coalgebra: FfgCoalgebra
    g: dict
    h: dict
    k: int
    p: int
    left: FfgCoalgebra
    right: FfgCoalgebra

    def verify(self) -> tuple[HomCheck, HomCheck]:
        return (is_coalg_hom(self.coalgebra, self.left, self.g),
                is_coalg_hom(self.coalgebra, self.right, self.h))


def zigzag_witness(cx: FfgCoalgebra, state_x, cy: FfgCoalgebra, state_y) -> ZigZag | None:
    """Span of homomorphisms relating the two states, or ``None``.

    The joint orbit ``(x_j, y_j)`` is run until its first repetition
    ``(x_k, y_k) = (x_{k+p}, y_{k+p})``; ``Z`` has generators
    ``z_0 .. z_{k+p-1}`` stepping ``z_j -> (0, z_{j+1})`` and closing with
    the increment ``m_{k+p} - m_k``.  Such a span exists iff the two
    period means agree.
    """
    _require_stream(cx)
    _require_stream(cy)
    (m, x), (n, y) = state_x, state_y
    ms, ns, xs, ys = [m], [n], [x], [y]
    seen = {(x, y): 0}
    while True:
        dm, x = _move(cx, x)
        dn, y = _move(cy, y)
        ms.append(ms[-1] + dm)
        ns.append(ns[-1] + dn)
        xs.append(x)
        ys.append(y)
        if (x, y) in seen:
            k = seen[x, y]
            p = len(xs) - 1 - k
            break
        seen[x, y] = len(xs) - 1
    if ms[k + p] - ms[k] != ns[k + p] - ns[k]:
        return None
    size = k + p
    step = {f"z{j}": (0, f"z{j + 1}") for j in range(size - 1)}
    step[f"z{size - 1}"] = (ms[k + p] - ms[k], f"z{k}")
    z = stream_coalgebra(step, name="Z")
    g = {f"z{j}": (ms[j], xs[j]) for j in range(size)}
    h = {f"z{j}": (ns[j], ys[j]) for j in range(size)}
    return ZigZag(z, g, h, k, p, cx, cy)


# ---------------------------------------------------------------------------
# classes and backends


@dataclass(frozen=True)
class PhiClass:
    """A class of the fixed point, compared by ``key`` only."""

    key: Any
    coalgebra: Any = field(default=None, compare=False, repr=False)
    element: Any = field(default=None, compare=False, repr=False)

    def __repr__(self):
        if isinstance(self.key, Fraction):
            return f"[{self.key}]"
        return f"[{self.element!r} in {self.coalgebra!r}]"


class PhiBackend:
    """Common machinery: algebra and coalgebra structure via representatives."""

    functor: Any
    name = "phi"

    def __init__(self):
        self._cache: weakref.WeakKeyDictionary = weakref.WeakKeyDictionary()
        self._lock = threading.Lock()
        self.carrier = OpaqueAlgebra(self.functor.variety, self.alpha,
                                     contains=lambda a: isinstance(a, PhiClass),
                                     name=f"phi[{self.name}]")

    @property
    def variety(self):
        return self.functor.variety

    def compute_key(self, coalgebra, element):
        raise NotImplementedError

    def compute_keys(self, coalgebra, elements) -> list:
        return [self.compute_key(coalgebra, a) for a in elements]

    def keys(self, coalgebra, elements) -> list:
        with self._lock:
            per = self._cache.setdefault(coalgebra, {})
            missing = [a for a in dict.fromkeys(elements) if a not in per]
        if missing:
            values = self.compute_keys(coalgebra, missing)
            with self._lock:
                per.update(zip(missing, values))
        return [per[a] for a in elements]

    def key(self, coalgebra, element):
        return self.keys(coalgebra, [element])[0]

    def classes_of(self, coalgebra, elements) -> list[PhiClass]:
        if coalgebra.functor != self.functor:
            raise VarietyMismatch(f"coalgebra over {coalgebra.functor!r}, backend over "
                                  f"{self.functor!r}")
        for a in elements:
            if not coalgebra.carrier.contains(a):
                raise ValueError(f"{a!r} is not a state of {coalgebra!r}")
        return [PhiClass(k, coalgebra, a)
                for k, a in zip(self.keys(coalgebra, elements), elements)]

    def class_of(self, coalgebra, element) -> PhiClass:
        return self.classes_of(coalgebra, [element])[0]

    def representative(self, cls: PhiClass) -> PhiClass:
        if not isinstance(cls, PhiClass) or cls.coalgebra is None:
            raise ValueError(f"class without a representative: {cls!r}")
        return cls

    def _glue(self, classes, extra: dict | None = None):
        # coproduct of the representatives' coalgebras (plus optional fresh generators)
        reps, index = [], {}
        for cls in classes:
            c = self.representative(cls).coalgebra
            if id(c) not in index:
                index[id(c)] = len(reps)
                reps.append(c)
        if len(reps) == 1 and not extra:
            return reps[0], lambda cls: cls.element
        total, injections = coproduct_coalgebras(reps, functor=self.functor)
        embed = lambda cls: injections[index[id(cls.coalgebra)]](cls.element)
        if extra:
            step = dict(total.step)
            step.update({g: self.functor.fmap(embed, v) for g, v in extra.items()})
            total = FfgCoalgebra(self.functor, tuple(total.generators) + tuple(extra), step,
                                 validate=False)
        return total, embed

    def alpha(self, t) -> PhiClass:
        """Structure ``T(phi) -> phi``."""
        v = self.variety
        total, embed = self._glue(v.support(t))
        return self.class_of(total, v.mu(v.tmap(embed, t)))

    def algebra_structure(self, value) -> PhiClass:
        """Inverse of the coalgebra structure: ``F(phi) -> phi``."""
        classes = self.functor.children(value)
        total, _ = self._glue(classes, extra={"*": value})
        return self.class_of(total, self.variety.eta("*"))

    def structure(self, cls: PhiClass):
        """Coalgebra structure ``phi -> F(phi)``."""
        rep = self.representative(cls)
        c = rep.coalgebra
        return self.functor.fmap(lambda s: self.class_of(c, s), c.structure(rep.element))

    def solve(self, e):
        from .equation import solve_in_phi
        return solve_in_phi(e, self)

    def bottom(self) -> PhiClass:
        return self.alpha(frozenset())


class StreamBackend(PhiBackend):
    """Classes of eventually periodic streams up to equal period mean."""

    name = "stream"

    def __init__(self):
        self.functor = STREAM_FUNCTOR
        super().__init__()

    def compute_key(self, coalgebra, element) -> Fraction:
        return stream_of(coalgebra, element).mean

    def class_of_rational(self, q) -> PhiClass:
        """A representative for the mean ``q = a/b``: a ``b``-cycle emitting ``a``."""
        q = Fraction(q)
        if q < 0:
            raise ValueError("means are nonnegative")
        a, b = q.numerator, q.denominator
        c = cycle_coalgebra([a] + [0] * (b - 1), name=f"cycle[{q}]")
        return self.class_of(c, (0, 0))

    def class_of_stream(self, s: EpStream) -> PhiClass:
        return self.class_of(lasso_coalgebra(s), (0, 0))

    def bottom(self):
        raise ValueError("unary algebras have no bottom")


def _check_bisim_functor(functor):
    base = functor.base if isinstance(functor, WithConstant) else functor
    if not (isinstance(base, Lifting) and base.variety is JSL
            and isinstance(base.shape, MooreShape)):
        raise UnsupportedInstance("the bisimulation backend needs JSL over a Moore shape")
    if isinstance(functor, WithConstant) and not isinstance(functor.constant, FreeAlgebra):
        raise UnsupportedInstance("constant summand must be free")


class BisimBackend(PhiBackend):
    """Classes of JSL/Moore states up to behavioural equivalence."""

    name = "bisim"

    def __init__(self, functor):
        _check_bisim_functor(functor)
        self.functor = functor
        super().__init__()

    def compute_key(self, coalgebra, element) -> tuple:
        return minimize(coalgebra, element).transitions

    def compute_keys(self, coalgebra, elements) -> list:
        return [m.transitions for m in minimize_many(coalgebra, elements)]

    def machine(self, cls: PhiClass) -> MinimalMachine:
        return MinimalMachine(cls.key)

    def bottom(self) -> PhiClass:
        return self.class_of(empty_coalgebra(self.functor), frozenset())


def backend_for(v, shape=None, backend: str | None = None, constant: Sequence | None = None):
    """Pick the backend for a (variety, shape) pair."""
    if v is UNARY:
        if backend not in (None, "stream") or (shape is not None
                                               and not isinstance(shape, IdShape)):
            raise UnsupportedInstance("the unary variety is supported with the identity "
                                      "functor and the stream backend")
        if constant:
            raise UnsupportedInstance("no backend for unary systems with a constant summand")
        return StreamBackend()
    if v is JSL and backend in (None, "bisim") and isinstance(shape, MooreShape):
        functor = lifting(v, shape)
        if constant is not None:
            functor = WithConstant(functor, free(v, constant))
        return BisimBackend(functor)
    raise UnsupportedInstance(f"no {backend or 'default'} backend for {v!r}")


# ---------------------------------------------------------------------------
# languages


@dataclass
class Language:
    machine: MinimalMachine
    alphabet: tuple

    def accepts(self, word: Sequence) -> bool:
        state = 0
        for letter in word:
            try:
                i = self.alphabet.index(letter)
            except ValueError:
                raise ValueError(f"letter {letter!r} not in the alphabet") from None
            state = self.machine.transitions[state].children[i]
        return self.machine.transitions[state].label == 1

    __call__ = accepts

    def words(self, max_length: int) -> list:
        out = []
        for n in range(max_length + 1):
            out.extend(w for w in product(self.alphabet, repeat=n) if self.accepts(w))
        return out

    def is_empty(self) -> bool:
        return not any(node.label == 1 for node in self.machine.transitions)


def language_of(backend: BisimBackend, cls: PhiClass) -> Language:
    """Word predicate and minimal machine of a class over ``{0,1} x X^S``."""
    functor = backend.functor
    if not isinstance(functor, Lifting) or set(functor.shape.outputs) != {0, 1}:
        raise ValueError("languages need Moore outputs {0, 1}")
    return Language(backend.machine(cls), functor.shape.alphabet)


def rationals(max_num: int, max_den: int) -> list:
    return sorted({Fraction(a, b) for b in range(1, max_den + 1)
                   for a in range(max_num + 1) if gcd(a, b) == 1})
