"""Acceptance criteria, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line past pytest's output
capture and then asserts.  Run
directly with ``python3 tests/test_acceptance.py``.
"""

import itertools
import random
import sys
import time
from fractions import Fraction
from statistics import median

import pytest

from effiter import (JSL, SET, UNARY, Bounds, FNode, IdShape, Inl, Inr, PointedPosetAlgebra,
                     PolyShape, WithConstant, aft, backend_algebra, backend_for, behavioral_equiv,
                     boolean_moore, builtin_law, check_combinator_laws, check_compositionality,
                     check_dist_law, check_solution, check_weak_functoriality, collapse_params,
                     cycle_coalgebra, determinize, embed_params, ep_equiv, equation, extend_hom,
                     free, free_unit, initial_morphism, is_coalg_hom, kleene_solve, lifting,
                     mean_cross_products, minimize, param_unit, parse_ep, passage_from_param,
                     passage_to_param, solve_in_phi, split_quotient_to_ffg, zigzag_from_span,
                     zigzag_witness)
from effiter.functor import id_node
from effiter.instances import (broken_nonemptiness, moore_algebras, moore_pool, nonemptiness_algebra,
                               stream_algebras, stream_pool, truncated_language_algebra)
from effiter.phi import StreamBackend, rationals, stream_of

import corpus
from oracles import (coalgebra_endomorphisms, nfa_accepts, orbit_mean, pointed_posets,
                     random_nfa, random_split_quotient, words)

MOORE = lifting(JSL, boolean_moore("ab"))
Y = free(JSL, ("y0", "y1"))
FY = WithConstant(MOORE, Y)


_capture = []


@pytest.fixture(autouse=True)
def _uncaptured(capsys):
    _capture.append(capsys)
    yield
    _capture.pop()


def emit(text: str):
    with _capture[-1].disabled():
        print(text, flush=True)


def verdict(number: int, title: str, ok: bool, detail: str = "", seconds: float | None = None):
    timing = f" [{seconds:.3f} s]" if seconds is not None else ""
    line = f"{'PASS' if ok else 'FAIL'} C{number} {title}: {detail}{timing}"
    emit("\n" + line)
    assert ok, line


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


@pytest.fixture(scope="module")
def bisim():
    return backend_for(JSL, boolean_moore("ab"))


@pytest.fixture(scope="module")
def bisim_y():
    return backend_for(JSL, boolean_moore("ab"), constant=Y.generators)


# ---------------------------------------------------------------------------


def test_c01_worked_example():
    s, t = parse_ep("(1,2,7,4)(1,3,2)^w"), parse_ep("(5,6)(0,4)^w")
    cross = mean_cross_products(s, t)
    same = ep_equiv(s, t)
    runs = []
    for _ in range(25):
        t0 = time.perf_counter()
        ep_equiv(s, t)
        runs.append(time.perf_counter() - t0)
    elapsed = median(runs)
    ok = same is True and cross == (12, 12) and elapsed < 1e-3
    verdict(1, "worked stream example", ok,
            f"equivalent={same}, cross products {cross[0]} = {cross[1]}, "
            f"median of 25 calls {elapsed * 1e6:.1f} us")


def test_c02_distributive_laws():
    cases = [(SET, boolean_moore("a"), {}), (SET, boolean_moore("ab"), {}),
             (SET, PolyShape((("nil", 0), ("cons", 2))), {}),
             (JSL, boolean_moore("a"), {}), (JSL, boolean_moore("ab"), {}),
             (UNARY, IdShape(), {"counter_bound": 4}),
             (UNARY, boolean_moore("ab"), {"counter_bound": 4})]
    with Clock() as clock:
        reports = [check_dist_law(builtin_law(v, shape), sample_bound=2, **kw)
                   for v, shape, kw in cases]
    ok = all(reports) and clock.seconds < 5
    total = sum(r.instances for r in reports)
    modes = sorted({"exhaustive" if r.exhaustive else "restricted" for r in reports})
    verdict(2, "distributive-law axioms", ok,
            f"{len(cases)} laws, {total} instances ({'/'.join(modes)}), "
            f"{sum(r.failed for r in reports)} failures", clock.seconds)


def test_c03_combinator_laws():
    with Clock() as clock:
        reports = [r for v in (SET, UNARY, JSL)
                   for r in check_combinator_laws(v, instances=500, seed=0)]
    ok = all(reports) and all(r.instances >= 500 for r in reports) and clock.seconds < 10
    verdict(3, "combinator laws", ok,
            f"{len(reports)} laws x 3 varieties, min {min(r.instances for r in reports)} "
            f"instances each, {sum(r.failed for r in reports)} failures", clock.seconds)


def _kleene_corpus(rng, n):
    shape = PolyShape((("bot", 0), ("max", 2), ("succ", 1)))
    functor = lifting(SET, shape)
    out = []
    for size in (2, 3, 4):
        els = list(range(size))
        leq = {(a, b) for a in els for b in els if a <= b}
        P = PointedPosetAlgebra(functor, els, leq, lambda node, top=size - 1: (
            0 if node.label == "bot" else max(node.children) if node.label == "max"
            else min(node.children[0] + 1, top)))
        out += [(P, corpus.poset_system(P, rng)) for _ in range(n // 3 + 1)]
    return out


def test_c04_solution_square(bisim, bisim_y):
    rng = random.Random(404)
    checks = []  # (solver name, algebra, equation, solution)
    sb = StreamBackend()
    pool = corpus.stream_params(sb, rng)
    for _ in range(50):
        e = corpus.stream_system(sb, rng, pool)
        checks.append(("solve_in_phi/stream", backend_algebra(sb), e, solve_in_phi(e, sb)))
    mpool = corpus.moore_params(bisim, rng)
    for _ in range(50):
        e = corpus.moore_system(bisim, rng, mpool)
        checks.append(("solve_in_phi/bisim", backend_algebra(bisim), e, solve_in_phi(e, bisim)))
    for P, e in _kleene_corpus(rng, 50):
        checks.append(("kleene_solve", P.elgot(), e, kleene_solve(P, e)))
    for make in (nonemptiness_algebra, truncated_language_algebra):
        A = make(MOORE)
        vals = A.carrier.elements(2)
        B = passage_to_param(A, {"y0": vals[-1], "y1": vals[0]}, Y)
        for _ in range(25):
            e = corpus.params_system(FY, A.carrier, vals, rng)
            checks.append(("passage_to_param", B, e, B.solve(e)))
    B = backend_algebra(bisim_y)
    A = passage_from_param(B)
    ypool = corpus.moore_params(bisim_y, rng, nfas=2) + [free_unit(bisim_y, y)
                                                         for y in Y.generators]
    for _ in range(50):
        e = corpus.plain_system(MOORE, A.carrier, ypool, rng)
        checks.append(("passage_from_param", A, e, A.solve(e)))
    failures = [(name, e) for name, A, e, s in checks if not check_solution(A, e, s)]
    by_solver = {}
    for name, *_ in checks:
        by_solver[name] = by_solver.get(name, 0) + 1
    ok = not failures and len(checks) >= 200
    verdict(4, "solution square", ok,
            f"{len(checks)} equations ({', '.join(f'{k} {v}' for k, v in by_solver.items())}), "
            f"{len(failures)} failures")


def test_c05_elgot_axioms():
    lines, reports = [], []
    with Clock() as clock:
        sb = StreamBackend()
        A = backend_algebra(sb)
        full = Bounds(vars=2, params=1, counter=2, limit=10**6)
        reports.append(check_weak_functoriality(A, full, pool=stream_pool(sb)))
        reports.append(check_compositionality(A, full, pool=stream_pool(sb)))
        b1 = backend_for(JSL, boolean_moore("a"))
        A1 = backend_algebra(b1)
        reports.append(check_weak_functoriality(A1, full, pool=moore_pool(b1)))
        reports.append(check_compositionality(A1, Bounds(2, 1, 2, 1000), pool=moore_pool(b1),
                                              seed=5))
        b2 = backend_for(JSL, boolean_moore("ab"))
        A2 = backend_algebra(b2)
        reports.append(check_weak_functoriality(A2, Bounds(2, 1, 2, 400), pool=moore_pool(b2),
                                                seed=5))
        reports.append(check_compositionality(A2, Bounds(2, 1, 2, 400), pool=moore_pool(b2),
                                              seed=5))
        broken = check_compositionality(broken_nonemptiness(lifting(JSL, boolean_moore("a"))),
                                        Bounds(2, 1, 2, 2000))
    names = ["stream", "stream", "bisim |S|=1", "bisim |S|=1", "bisim |S|=2", "bisim |S|=2"]
    for name, r in zip(names, reports):
        lines.append(f"  {name}: {r.line()}")
    lines.append(f"  broken solver: {broken.line()}")
    emit("\n" + "\n".join(lines))
    ok = all(reports) and not broken and broken.counterexample and clock.seconds < 60
    verdict(5, "Elgot axioms on the fixed-point backends", ok,
            f"{sum(r.instances for r in reports)} instances, "
            f"{sum(r.failed for r in reports)} failures; broken solver caught with "
            f"{broken.failed} failures", clock.seconds)


def test_c06_parameter_passages(bisim, bisim_y):
    rng = random.Random(606)
    syntactic = pointwise = 0
    failures = []
    algebras = [nonemptiness_algebra(MOORE), truncated_language_algebra(MOORE)]
    bpool = corpus.moore_params(bisim, rng)
    for A in algebras + [backend_algebra(bisim)]:
        vals = bpool if A.carrier is bisim.carrier else A.carrier.elements(2)
        h = {"y0": vals[-1], "y1": vals[0]}
        h_star = extend_hom(h, A.carrier, source=Y)
        roundtrip = passage_from_param(passage_to_param(A, h, Y))
        for _ in range(40):
            e = corpus.plain_system(MOORE, A.carrier, vals, rng)
            syntactic += 1
            if collapse_params(embed_params(e, FY), h_star, MOORE) != e:
                failures.append(("3a", A, e))
            pointwise += 1
            if roundtrip.solve(e).assignment != A.solve(e).assignment:
                failures.append(("3b A", A, e))
    B = backend_algebra(bisim_y)
    h = param_unit(B)
    if h != {y: free_unit(bisim_y, y) for y in Y.generators}:
        failures.append(("unit", B, None))
    B2 = passage_to_param(passage_from_param(B), h, Y)
    ypool = corpus.moore_params(bisim_y, rng, nfas=2)
    for _ in range(40):
        e = corpus.params_system(FY, B.carrier, ypool, rng)
        pointwise += 1
        if B2.solve(e).assignment != B.solve(e).assignment:
            failures.append(("3b B", B, e))
    verdict(6, "parameter passages round-trip", not failures,
            f"{syntactic} syntactic and {pointwise} pointwise round-trips, "
            f"{len(failures)} failures")


def _doubled_nfa(rng, raw):
    """Copy every state; each successor picks the original or the copy."""
    step = {}
    for s, (out, succ) in raw.items():
        kids = tuple(frozenset(rng.choice((t, t + "~")) for t in succ[a]) for a in sorted(succ))
        step[s] = step[s + "~"] = FNode(out, kids)
    return step


def test_c07_initiality(bisim):
    rng = random.Random(707)
    sb = StreamBackend()
    failures = []
    counts = {"preserving": 0, "representatives": 0, "identity": 0}
    spool = corpus.stream_params(sb, rng)
    mpool = corpus.moore_params(bisim, rng)
    for b, algebras, pool, gen in ((sb, stream_algebras(), spool, corpus.stream_system),
                                   (bisim, moore_algebras(MOORE), mpool, corpus.moore_system)):
        for A in algebras:
            h = initial_morphism(b, A)
            for _ in range(100):
                e = gen(b, rng, pool)
                s = solve_in_phi(e, b)
                t = A.solve(aft(h, e, target=A.carrier, check=False))
                counts["preserving"] += 1
                if {x: h(s(x)) for x in e.variables} != t.assignment:
                    failures.append(("preserving", A, e))
    morphisms = [initial_morphism(bisim, A) for A in moore_algebras(MOORE)]
    for _ in range(50):
        raw, step = random_nfa(rng, rng.randint(1, 4), ("a", "b"))
        c1 = determinize(step, MOORE.law)
        c2 = determinize(_doubled_nfa(rng, raw), MOORE.law)
        s = rng.choice(sorted(raw))
        k1, k2 = bisim.class_of(c1, frozenset({s})), bisim.class_of(c2, frozenset({s + "~"}))
        counts["representatives"] += 1
        if k1 != k2 or any(h(k1) != h(k2) for h in morphisms):
            failures.append(("representatives", s, raw))
    stream_ms = [initial_morphism(sb, A) for A in stream_algebras()]
    for _ in range(50):
        q = Fraction(rng.randint(0, 6), rng.randint(1, 4))
        n = q.denominator * rng.randint(1, 2)
        cyc = [0] * n
        for _ in range(q.numerator * n // q.denominator):
            cyc[rng.randrange(n)] += 1
        prefix = ",".join(str(rng.randint(0, 9)) for _ in range(rng.randint(1, 3)))
        k1 = sb.class_of_rational(q)
        k2 = sb.class_of_stream(parse_ep(f"({prefix})({','.join(map(str, cyc))})^w"))
        counts["representatives"] += 1
        if k1 != k2 or any(h(k1) != h(k2) for h in stream_ms):
            failures.append(("representatives", q, cyc))
    for b, pool in ((sb, spool), (bisim, mpool)):
        ident = initial_morphism(b, backend_algebra(b))
        for _ in range(50):
            cls = b.algebra_structure(b.structure(rng.choice(pool)))
            counts["identity"] += 1
            if ident(cls) != cls:
                failures.append(("identity", cls))
    verdict(7, "initial morphism", not failures,
            ", ".join(f"{k} {v}" for k, v in counts.items()) + f", {len(failures)} failures")


def test_c08_stream_characterisation():
    failures, pairs = [], 0
    with Clock() as clock:
        grid = [g for n in range(1, 4) for g in itertools.product(range(4), repeat=n)]
        for a, b in itertools.product(grid, repeat=2):
            ca, cb = cycle_coalgebra(list(a)), cycle_coalgebra(list(b))
            mean_a = orbit_mean({i: (k, (i + 1) % len(a)) for i, k in enumerate(a)}, 0)
            mean_b = orbit_mean({i: (k, (i + 1) % len(b)) for i, k in enumerate(b)}, 0)
            for j in range(len(b)):
                pairs += 1
                z = zigzag_witness(ca, (0, 0), cb, (0, j))
                if (z is not None) != (mean_a == mean_b) or (z is not None and not all(z.verify())):
                    failures.append((a, b, j))
        sb = StreamBackend()
        qs = rationals(6, 4)
        for q in qs:
            cls = sb.class_of_rational(q)
            if cls.key != q or stream_of(cls.coalgebra, cls.element).mean != q:
                failures.append(q)
    ok = not failures and clock.seconds < 30
    verdict(8, "zig-zags iff equal means", ok,
            f"{pairs} cycle pairs, {len(qs)} rationals realised, {len(failures)} failures",
            clock.seconds)


def test_c09_determinisation():
    rng = random.Random(909)
    failures, word_checks, pair_checks = [], 0, 0
    for _ in range(50):
        alphabet = ("a", "b")[:rng.randint(1, 2)]
        raw, step = random_nfa(rng, rng.randint(1, 4), alphabet)
        c = determinize(step, lifting(JSL, boolean_moore(alphabet)).law)
        subsets = c.carrier.elements()
        for start in subsets:
            for w in words(alphabet, 6):
                state = start
                for letter in w:
                    state = c.structure(state).children[alphabet.index(letter)]
                word_checks += 1
                if (c.structure(state).label == 1) != nfa_accepts(raw, start, w):
                    failures.append((raw, start, w))
        machines = {s: minimize(c, s) for s in subsets}
        for s, t in itertools.combinations(subsets, 2):
            pair_checks += 1
            if behavioral_equiv(s, t, c) != (machines[s] == machines[t]):
                failures.append((raw, s, t))
    verdict(9, "determinisation", not failures,
            f"50 NFAs, {word_checks} word checks, {pair_checks} state pairs, "
            f"{len(failures)} failures")


def test_c10_kleene_minimality():
    functor = lifting(SET, IdShape())
    failures, instances = [], 0
    for els, leq in pointed_posets(4):
        for images in itertools.product(els, repeat=len(els)):
            f = dict(zip(els, images))
            if not all(leq[f[a], f[b]] for a in els for b in els if leq[a, b]):
                continue
            P = PointedPosetAlgebra(functor, els, lambda a, b, leq=leq: leq[a, b],
                                    lambda node, f=f: f[node.children[0]])
            for n in (1, 2):
                xs = ("x0", "x1")[:n]
                rhs = [Inl(id_node(x)) for x in xs] + [Inr(a) for a in els]
                for combo in itertools.product(rhs, repeat=n):
                    e = equation(functor, xs, P.carrier, dict(zip(xs, combo)))
                    least = kleene_solve(P, e).assignment
                    # solutions by direct search, not via check_solution
                    value = lambda r, s: f[s[r.value.children[0]]] if isinstance(r, Inl) else r.value
                    sols = [dict(zip(xs, vs)) for vs in itertools.product(els, repeat=n)]
                    sols = [s for s in sols if all(value(e.step[x], s) == s[x] for x in xs)]
                    instances += 1
                    if least not in sols or not all(leq[least[x], s[x]] for s in sols for x in xs):
                        failures.append((els, f, e))
    verdict(10, "Kleene minimality", not failures,
            f"{instances} monotone instances on posets of size <= 4, {len(failures)} failures")


def test_c11_split_quotients():
    rng = random.Random(1111)
    failures = []
    for _ in range(50):
        c, e, m = random_split_quotient(rng, boolean_moore("ab"))
        sq = split_quotient_to_ffg(c, ["p", "q"], e, m.__getitem__)
        if not (is_coalg_hom(c, sq.coalgebra, m.__getitem__) and is_coalg_hom(sq.coalgebra, c, sq.e)):
            failures.append(("split", c))
        endos = coalgebra_endomorphisms(c)
        f, g = rng.choice(endos), rng.choice(endos)
        span = zigzag_from_span(sq, f.__getitem__, c, g.__getitem__, c)
        if not (is_coalg_hom(span.apex, c, span.left) and is_coalg_hom(span.apex, c, span.right)):
            failures.append(("span", c))
    verdict(11, "split quotients and spans", not failures,
            f"50 sampled quotients, {len(failures)} failures")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
