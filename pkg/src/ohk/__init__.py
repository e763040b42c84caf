"""Exact linear-algebra tools for cocommutative coalgebras modelling Lawvere theories."""

from .adjunction import SetModel, check_set_model, equalizer_preservation_check, hom_bijection_check, lift
from .birkhoff import birkhoff_closure_check, radicalator_coideal, reflect
from .cat import factorize, hopf_kernel, is_normal, newman_check, proto_terms_for, ssfl_reconstruct
from .coalgebra import Coalgebra, check_coalgebra, grouplikes
from .errors import OhkError
from .exactlin import GF, QQ, Field, Matrix, Subspace
from .ideals import coequalizer, cokernel, is_coideal, is_t_ideal, quotient_model, saturate_t_ideal
from .model import ModelHom, TCoalgebraModel, check_hom, check_model, linearize
from .theory import TheoryMorphism, TheoryPresentation, builtin, parse_theory

__version__ = "0.1.0"

__all__ = [
    "Coalgebra", "Field", "GF", "Matrix", "ModelHom", "OhkError", "QQ", "SetModel", "Subspace",
    "TCoalgebraModel", "TheoryMorphism", "TheoryPresentation", "birkhoff_closure_check", "builtin",
    "check_coalgebra", "check_hom", "check_model", "check_set_model", "coequalizer", "cokernel",
    "equalizer_preservation_check", "factorize", "grouplikes", "hom_bijection_check", "hopf_kernel",
    "is_coideal", "is_normal", "is_t_ideal", "lift", "linearize", "newman_check", "parse_theory",
    "proto_terms_for", "quotient_model", "radicalator_coideal", "reflect", "saturate_t_ideal",
    "ssfl_reconstruct",
]
