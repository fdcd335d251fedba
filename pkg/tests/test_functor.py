
import pytest
from hypothesis import given, strategies as st

from effiter.errors import InvalidAlgebra, UnsupportedInstance
from effiter.functor import (DistLaw, FNode, IdShape, MooreShape, PolyShape, WithConstant,
                             boolean_moore, builtin_law, check_dist_law, id_node, lift_apply,
                             lifting, shape_from_json, shape_to_json)
from effiter.variety import JSL, SET, UNARY, FiniteAlgebra, Pair, free

MOORE_A = boolean_moore(("a",))
MOORE_AB = boolean_moore(("a", "b"))


def test_set_law_is_identity():
    law = builtin_law(SET, MOORE_AB)
    node = FNode(1, ("x", "y"))
    assert law(node) is node


def test_jsl_law_is_subset_construction():
    law = builtin_law(JSL, MOORE_A)
    t = frozenset({FNode(0, ("p",)), FNode(1, ("q",))})
    assert law(t) == FNode(1, (frozenset({"p", "q"}),))
    assert law(frozenset()) == FNode(0, (frozenset(),))


def test_unary_law_pushes_counter():
    law = builtin_law(UNARY, IdShape())
    assert law((3, id_node("x"))) == id_node((3, "x"))


def test_no_builtin_law_for_jsl_poly():
    with pytest.raises(UnsupportedInstance):
        builtin_law(JSL, PolyShape((("c", 0),)))


def test_moore_outputs_must_form_a_semilattice():
    bad = MooreShape(("a", "b", "c"), ("x",), join=lambda a, b: a if a == b else "c")
    with pytest.raises(InvalidAlgebra):
        builtin_law(JSL, bad)


@pytest.mark.parametrize("v,shape", [
    (SET, MOORE_AB), (SET, PolyShape((("*", 2), ("c", 0)))),
    (JSL, MOORE_A), (JSL, MOORE_AB), (JSL, MooreShape((0, 1, 2), ("a",))),
    (UNARY, IdShape()), (UNARY, MOORE_A),
])
def test_builtin_laws_pass_the_axioms(v, shape):
    report = check_dist_law(builtin_law(v, shape), sample_bound=2, counter_bound=3)
    assert report.ok, report.line()
    assert report.instances > 0


def test_swapped_children_law_fails():
    good = builtin_law(JSL, MOORE_AB)
    swap = lambda node: FNode(node.label, node.children[::-1])
    bad = DistLaw(JSL, MOORE_AB, lambda t: swap(good(t)), "swapped")
    # one generator cannot tell the children apart
    assert check_dist_law(bad, sample_bound=1).ok
    report = check_dist_law(bad, sample_bound=2)
    assert not report.ok
    assert "unit axiom" in report.counterexample


def test_constant_output_law_fails_multiplication():
    # ignores outputs: unit holds only where all labels are 0
    law = builtin_law(JSL, MOORE_A)
    bad = DistLaw(JSL, MOORE_A, lambda t: FNode(0, law(t).children), "zero-out")
    assert not check_dist_law(bad, sample_bound=1).ok


def test_lifted_join_on_free_algebra():
    F = lift_apply(builtin_law(JSL, MOORE_A), free(JSL, ["p"]))
    a = FNode(0, (frozenset({"p"}),))
    b = FNode(1, (frozenset(),))
    assert F.join(a, b) == FNode(1, (frozenset({"p"}),))


def test_lifted_unary_operation():
    F = lift_apply(builtin_law(UNARY, IdShape()), free(UNARY, ["x"]))
    assert F.u(id_node((0, "x"))) == id_node((1, "x"))


def test_lifted_algebra_is_a_finite_jsl():
    # tabulating the lifted join passes the semilattice validation
    F = lift_apply(builtin_law(JSL, MOORE_A), FiniteAlgebra(JSL, [0, 1], join=max))
    els = F.elements()
    table = FiniteAlgebra(JSL, els, join=lambda a, b: F.join(a, b))
    assert table.bottom() == FNode(0, (0,))


def test_set_lifting_has_no_structure():
    F = lifting(SET, MOORE_A).apply(free(SET, ["x"]))
    assert F.alpha(FNode(1, ("x",))) == FNode(1, ("x",))


def test_poly_cardinality():
    shape = PolyShape((("*", 2), ("c", 0)))
    assert len(shape.nodes(["x", "y"])) == 5


maps = st.dictionaries(st.sampled_from("xy"), st.sampled_from("uv"), min_size=2)


@given(maps, st.frozensets(st.sampled_from(MOORE_AB.nodes(["x", "y"])), max_size=4))
def test_jsl_law_naturality(f, t):
    law = builtin_law(JSL, MOORE_AB)
    Tf = lambda s: frozenset(f[x] for x in s)
    lhs = MOORE_AB.fmap(Tf, law(t))
    rhs = law(frozenset(MOORE_AB.fmap(f.__getitem__, n) for n in t))
    assert lhs == rhs


def test_with_constant_functor():
    F = WithConstant(lifting(JSL, MOORE_A), free(JSL, ["y"]))
    v = Pair(FNode(0, (frozenset({"x"}),)), frozenset({"y"}))
    assert F.children(v) == (frozenset({"x"}),)
    assert F.fmap(len, v) == Pair(FNode(0, (1,)), frozenset({"y"}))
    assert len(F.values(free(JSL, ["x"]).elements())) == 2 * 2 * 2


@pytest.mark.parametrize("shape", [MOORE_AB, IdShape(), PolyShape((("nil", 0), ("cons", 2)))])
def test_shape_json_round_trip(shape):
    assert shape_from_json(shape_to_json(shape)) == shape
