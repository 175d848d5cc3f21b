"""Exact symbolic engine for double Poisson brackets, double Poisson vertex
algebras, double Courant-Dorfman algebras, their equivalence, and their
commutative shadows on matrix representations."""

from .ncpoly import (
    A_SORT,
    E_SORT,
    GenSym,
    NCPoly,
    TensorPoly,
    Word,
    a_gen,
    apply_sigma,
    e_gen,
    nc_mul,
    otimes1,
    star_i,
)
from .diffalg import LAM, MU, DerivationTable, LambdaPoly, d, d_tensor
from .double_bracket import DoubleBracketTable, eval_bb
from .dpva import LambdaBracketTable, eval_lb
from .dcd import CDBracketTable, DCDStructure, PairingTable, eval_cd, eval_pairing
from .equivalence import cd_to_dpva, dpva_to_cd
from .rep_kr import CPoly, IndexedSym, rep_entry, rep_module_entry
from .reports import Report

__version__ = "0.1.0"

__all__ = [
    "A_SORT",
    "E_SORT",
    "GenSym",
    "NCPoly",
    "TensorPoly",
    "Word",
    "a_gen",
    "apply_sigma",
    "e_gen",
    "nc_mul",
    "otimes1",
    "star_i",
    "LAM",
    "MU",
    "DerivationTable",
    "LambdaPoly",
    "d",
    "d_tensor",
    "DoubleBracketTable",
    "eval_bb",
    "LambdaBracketTable",
    "eval_lb",
    "CDBracketTable",
    "DCDStructure",
    "PairingTable",
    "eval_cd",
    "eval_pairing",
    "cd_to_dpva",
    "dpva_to_cd",
    "CPoly",
    "IndexedSym",
    "rep_entry",
    "rep_module_entry",
    "Report",
    "__version__",
]
