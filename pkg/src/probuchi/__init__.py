"""probuchi: exact-arithmetic toolkit for probabilistic automata on infinite words."""

from .core import (
    Automaton,
    AutomatonError,
    BuchiAcceptance,
    ConstructionError,
    InvalidAutomatonError,
    LassoWord,
    RabinAcceptance,
    RankFunction,
    ResourceLimitError,
    UnknownSymbolError,
    ValidationReport,
    infer_hierarchy,
    lasso,
    post,
    validate,
)
from .markov import (
    Distribution,
    RationalMatrix,
    binary_value_lasso,
    final_passage_matrix,
    lasso_acceptance,
    word_matrix,
)
from .construct import (
    almost_sure_intersection,
    almost_sure_union,
    complement_to_fpm,
    dra_to_hpba,
    fpm_product,
    gen_m_id,
    gen_m_id_squared,
    gen_m_id_swapped,
    gen_p3,
    gen_succinct,
    generate_example,
    hpba_to_nba,
    rabin_decomposition,
    reject_pba,
    rename_states,
    safety_closure,
)
from . import decide, sim, textio

__version__ = "0.1.0"
