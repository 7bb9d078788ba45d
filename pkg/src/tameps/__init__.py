"""Exact local constants for tame local Galois data.

Everything is computed in exact arithmetic: cyclotomic integers with an
explicit square-root normalization on the analytic side, truncated
discrete valuation rings on the arithmetic side.  The headline
operations are Gauss sums and abelian local constants, lambda factors
of tame extensions, and the local constants and conductors of induced
representations built from bicyclic tame data, each checkable along
independent routes.
"""

from .abelian import (
    davenport_hasse_check,
    deligne_twist_check,
    gauss_sum,
    lambda_closed_form,
    lambda_product,
    lamprecht_tate_epsilon,
    tate_epsilon,
)
from .characters import AdditiveChar, TableChar, TameChar, char_conductor, psi_standard
from .cyclotomic import (
    CyclotomicNumber,
    EpsilonValue,
    RootOfUnity,
    epsilon_text,
    is_root_of_unity,
    parse_root,
    serialize_epsilon,
)
from .errors import ConfigError, ContractError, PrecisionError
from .heisenberg import (
    HeisenbergDatum,
    HeisenbergRep,
    conductors,
    det_char,
    solve_theta,
)
from .localring import make_ring
from .residue import fq_make
from .suites import SUITE_NAMES, run_suite, summarize, table_rows
from .wformulas import (
    root_of_unity_analysis,
    w_congruence,
    w_direct,
    w_invariant_minimal,
    w_large_conductor,
    w_nonminimal,
)

__version__ = "0.1.0"

__all__ = [
    "AdditiveChar",
    "ConfigError",
    "ContractError",
    "CyclotomicNumber",
    "EpsilonValue",
    "HeisenbergDatum",
    "HeisenbergRep",
    "PrecisionError",
    "RootOfUnity",
    "SUITE_NAMES",
    "TableChar",
    "TameChar",
    "char_conductor",
    "conductors",
    "davenport_hasse_check",
    "deligne_twist_check",
    "det_char",
    "epsilon_text",
    "fq_make",
    "gauss_sum",
    "is_root_of_unity",
    "lambda_closed_form",
    "lambda_product",
    "lamprecht_tate_epsilon",
    "make_ring",
    "parse_root",
    "psi_standard",
    "root_of_unity_analysis",
    "run_suite",
    "serialize_epsilon",
    "solve_theta",
    "summarize",
    "table_rows",
    "tate_epsilon",
    "w_congruence",
    "w_direct",
    "w_invariant_minimal",
    "w_large_conductor",
    "w_nonminimal",
]
