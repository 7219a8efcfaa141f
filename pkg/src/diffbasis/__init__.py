"""Janet-like Groebner bases for linear difference systems, plus nonlinear standard bases.

Typical use::

    from diffbasis import RingSignature, Ranking, parse_system, janet_like_basis

    sig = RingSignature(("x", "y"), ("u",))
    polys, K = parse_system(["u[x+1,y] - u[x,y]", "u[x,y+1] - u[x,y]"], sig)
    B = janet_like_basis(polys, Ranking.for_signature(sig))
"""

from .applications import (ConeDecomposition, HilbertSeries, QuotientRelation, RelationStore,
                           add_relation, comp_cond, hilbert_series, inv_reduce, list_relations,
                           parse_relation, residue_class_basis)
from .coeffs import FunctionField, RationalField
from .division import JANET, JANET_LIKE, DivisionMeta, JanetTree, compute_division_meta, j_reductor
from .engine import (Basis, Options, buchberger_oracle, characterization_violations,
                     extract_reduced_gb, j_normal_form, janet_basis, janet_like_basis)
from .errors import (DiffBasisError, DuplicateLeadError,
                     InconsistentSystemError, OptionError, ParseError, ProblemFileError,
                     SignatureMismatchError)
from .linear import LinearPoly, plain_reduce
from .nonlinear import (BUDGET_EXHAUSTED, COMPLETE, DifferenceMonomial, DiffPoly, MonomialOrder,
                        interreduce, normal_form, s_polynomials, standard_basis)
from .parsing import (format_poly, parse_diffpoly, parse_equation, parse_system, pol2shift,
                      shift2pol)
from .problem import ProblemFile
from .ring import DEGREVLEX, LEX, POT, TOP, Ranking, RingSignature, Term

__version__ = "0.1.0"

__all__ = [
    "BUDGET_EXHAUSTED", "Basis", "COMPLETE", "ConeDecomposition", "DEGREVLEX", "DiffBasisError",
    "DiffPoly", "DifferenceMonomial", "DivisionMeta", "DuplicateLeadError", "FunctionField",
    "HilbertSeries", "InconsistentSystemError", "JANET", "JANET_LIKE", "JanetTree", "LEX",
    "LinearPoly", "MonomialOrder", "OptionError", "Options", "POT", "ParseError", "ProblemFile",
    "ProblemFileError", "QuotientRelation", "Ranking", "RationalField", "RelationStore",
    "RingSignature", "SignatureMismatchError", "TOP", "Term", "add_relation",
    "buchberger_oracle", "characterization_violations", "comp_cond", "compute_division_meta",
    "extract_reduced_gb", "format_poly", "hilbert_series", "interreduce", "inv_reduce",
    "j_normal_form", "j_reductor", "janet_basis", "janet_like_basis", "list_relations",
    "normal_form", "parse_diffpoly", "parse_equation", "parse_relation", "parse_system",
    "plain_reduce", "pol2shift", "residue_class_basis", "s_polynomials", "shift2pol",
    "standard_basis",
]
