"""Effectful iteration over ffg-coalgebras.

Finitary monads on sets (``SET``, ``UNARY``, ``JSL``), liftings of
polynomial functors along distributive laws, generalized determinization,
ffg-equation systems with their combinators, ffg-Elgot algebras with an
axiom harness, and decidable fixed-point backends for streams and
Moore automata.
"""

from .coalgebra import (FfgCoalgebra, FiniteCoalgebra, HomCheck, MinimalMachine, SplitQuotient,
                        Span, behavioral_equiv, coproduct_coalg, determinize, is_coalg_hom,
                        minimize, split_quotient_to_ffg, zigzag_from_span)
from .elgot import (Bounds, ElgotAlgebra, InitialMorphism, PointedPosetAlgebra, backend_algebra,
                    check_compositionality, check_solution, check_weak_functoriality,
                    collapse_params, embed_params, evaluate, free_unit, initial_morphism,
                    kleene_solve, param_unit, passage_from_param, passage_to_param)
from .equation import (FfgEquation, Solution, aft, associator, box, coalgebra_as_equation,
                       equation, equation_as_coalgebra, equation_from_json, equation_to_json,
                       from_effectful, rename, solve_in_phi)
from .errors import (EffiterError, InfiniteCarrierError, InvalidAlgebra, NonMonotoneError,
                     ParseError, UnsupportedInstance, VarietyMismatch)
from .functor import (DistLaw, FNode, IdShape, Lifting, MooreShape, PolyShape, WithConstant,
                      boolean_moore, builtin_law, check_dist_law, lifting)
from .laws import check_combinator_laws
from .phi import (BisimBackend, EpStream, PhiClass, StreamBackend, ZigZag, backend_for,
                  cycle_coalgebra, ep_equiv, language_of, lasso_coalgebra, mean_cross_products,
                  parse_ep, stream_coalgebra, stream_of, zigzag_witness)
from .report import LawReport
from .variety import (JSL, SET, UNARY, FiniteAlgebra, FreeAlgebra, Inl, Inr, Pair, extend_hom,
                      free, is_hom, terminal, variety)

__version__ = "0.1.0"

__all__ = [
    'FfgCoalgebra', 'FiniteCoalgebra', 'HomCheck', 'MinimalMachine', 'SplitQuotient', 'Span',
    'behavioral_equiv', 'coproduct_coalg', 'determinize', 'is_coalg_hom', 'minimize',
    'split_quotient_to_ffg', 'zigzag_from_span', 'Bounds', 'ElgotAlgebra', 'InitialMorphism',
    'PointedPosetAlgebra', 'backend_algebra', 'check_compositionality', 'check_solution',
    'check_weak_functoriality', 'collapse_params', 'embed_params', 'evaluate', 'free_unit',
    'initial_morphism', 'kleene_solve', 'param_unit', 'passage_from_param', 'passage_to_param',
    'FfgEquation', 'Solution', 'aft', 'associator', 'box', 'coalgebra_as_equation', 'equation',
    'equation_as_coalgebra', 'equation_from_json', 'equation_to_json', 'from_effectful',
    'rename', 'solve_in_phi', 'EffiterError', 'InfiniteCarrierError', 'InvalidAlgebra',
    'NonMonotoneError', 'ParseError', 'UnsupportedInstance', 'VarietyMismatch', 'DistLaw',
    'FNode', 'IdShape', 'Lifting', 'MooreShape', 'PolyShape', 'WithConstant', 'boolean_moore',
    'builtin_law', 'check_dist_law', 'lifting', 'check_combinator_laws', 'BisimBackend',
    'EpStream', 'PhiClass', 'StreamBackend', 'ZigZag', 'backend_for', 'cycle_coalgebra',
    'ep_equiv', 'language_of', 'lasso_coalgebra', 'mean_cross_products', 'parse_ep',
    'stream_coalgebra', 'stream_of', 'zigzag_witness', 'LawReport', 'JSL', 'SET', 'UNARY',
    'FiniteAlgebra', 'FreeAlgebra', 'Inl', 'Inr', 'Pair', 'extend_hom', 'free', 'is_hom',
    'terminal', 'variety',
]
