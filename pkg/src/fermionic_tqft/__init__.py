"""Exact Grassmann-valued invariants of triangulated 3-manifolds with boundary."""

from .chain_complex import BasedComplex, build_complex, verify_all_marked_sets, verify_complex
from .genfun import (InvariantFunction, generating_function, genfun_inner, genfun_matrix,
                     state_sum, tetrahedron_function)
from .grassmann import GrassmannElement, berezin, berezin_multi, eq_up_to_sign, identify_generators
from .library import EXAMPLES, example
from .torsion import invariant_I_D, standard_tau_chain, torsion_D
from .triangulation import Triangulation, TriangulationError, from_dict, load, to_dict

__all__ = [
    "BasedComplex", "build_complex", "verify_complex", "verify_all_marked_sets",
    "InvariantFunction", "generating_function", "genfun_inner", "genfun_matrix", "state_sum",
    "tetrahedron_function", "GrassmannElement", "berezin", "berezin_multi", "eq_up_to_sign",
    "identify_generators", "EXAMPLES", "example", "invariant_I_D", "standard_tau_chain",
    "torsion_D", "Triangulation", "TriangulationError", "from_dict", "load", "to_dict",
]
