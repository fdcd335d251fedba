import pytest

from effiter.coalgebra import determinize
from effiter.functor import FNode, boolean_moore, builtin_law
from effiter.variety import JSL


@pytest.fixture
def nfa_step():
    """p --a--> {p, q}, q accepting with no successors."""
    return {"p": FNode(0, (frozenset({"p", "q"}),)), "q": FNode(1, (frozenset(),))}


@pytest.fixture
def nfa(nfa_step):
    return determinize(nfa_step, builtin_law(JSL, boolean_moore(("a",))), name="nfa")
