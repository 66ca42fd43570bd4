"""Exact computations with a filtration on zero-cycles of C_1 x ... x C_d x A.

Curves and abelian varieties are finite combinatorial models; field
extensions are positive integer levels ordered by divisibility.  The
package builds the maps ``Phi_r`` (cycles to symbols) and ``Psi'_r``
(symbols to cycles) and checks the identities relating them.
"""
from .checks import run_scenario
from .cycles import Variety, ZeroCycle, cyc_degree, cyc_res, pontryagin, pushforward_base
from .errors import (ChowFiltError, LevelMismatch, NotATower, ParseError, UnsupportedModel,
                     ValidationError)
from .filtration import (SymbolDatum, albanese, albanese_via_phi, certify_membership, phi_r,
                         psi_r_closed, psi_r_product, q_of, roundtrip_report)
from .genus2 import genus2_example
from .models import (AbElement, ConstantAbModel, CurveModel, Divisor, TableAbModel, div_res, div_tr,
                     iota, jacobian_ab_model, pic0_equal, pic0_reduce, validate_models)
from .scenario import load_scenario, parse_scenario
from .symbols import Atom, PureSymbol, SymbolSum, sym_normalize

__version__ = "0.1.0"

__all__ = [
    "AbElement", "Atom", "ChowFiltError", "ConstantAbModel", "CurveModel", "Divisor",
    "LevelMismatch", "NotATower", "ParseError", "PureSymbol", "SymbolDatum", "SymbolSum",
    "TableAbModel", "UnsupportedModel", "ValidationError", "Variety", "ZeroCycle", "albanese",
    "albanese_via_phi", "certify_membership", "cyc_degree", "cyc_res", "div_res", "div_tr",
    "genus2_example", "iota", "jacobian_ab_model", "load_scenario", "parse_scenario", "phi_r",
    "pic0_equal", "pic0_reduce", "pontryagin", "psi_r_closed", "psi_r_product", "pushforward_base",
    "q_of", "roundtrip_report", "run_scenario", "sym_normalize", "validate_models",
]
