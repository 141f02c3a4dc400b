"""Exact conjugacy solvers and conjugator-length measurement for
ascending HNN extensions of Z^d and split extensions Z^d x| Z^k.

The package is organised in layers:

* ``intlinalg``  exact integer/rational linear algebra (Smith normal form,
                 integer linear systems, finite quotients of Z^d);
* ``groups``     group configurations, canonical element forms, words;
* ``metrics``    BFS Cayley balls (the ground-truth length oracle),
                 closed-form length brackets, subgroup distortion;
* ``solvers``    exact conjugacy decision procedures with verified
                 witnesses, twisted and restricted variants, centralizer
                 projection lattices;
* ``harness``    empirical conjugator-length tables and bound fitting;
* ``cli``        the ``conjlen`` command.
"""

from .errors import (
    BeyondRadius,
    CapExceeded,
    ConfigError,
    ConjlenError,
    DomainError,
    EmptyTable,
    HypothesisViolated,
    LatticeNotInvariant,
    NonInvertibleAction,
    SearchExhausted,
    SingularMatrix,
    WordParseError,
)
from .groups import (
    GmElement,
    GroupConfig,
    SdElement,
    bs_config,
    canonical_str,
    conj,
    eval_word,
    gamma_m_config,
    gm_inv,
    gm_mul,
    gm_normalize,
    identity,
    inv,
    load_config,
    mul,
    parse_word,
    sd_inv,
    sd_mul,
    semidirect_config,
    to_word,
    word_str,
)
from .intlinalg import (
    FinQuotient,
    IntMatrix,
    RatMatrix,
    SNFDecomposition,
    det,
    inverse_rat,
    mat_pow,
    orbit_order,
    project,
    quotient,
    snf,
    solve_integer,
)
from .metrics import (
    Ball,
    bfs_ball,
    bs_length_bounds,
    distortion_table,
    dl_distance,
    word_length,
)
from .solvers import (
    ConjReport,
    SolverCaps,
    StabilizerLattice,
    TwistedWitness,
    conj_gamma_m,
    conj_semidirect,
    conjugacy_report,
    membership_in_ascending_union,
    min_conjugator,
    minimize_twisted_witness,
    restricted_conj_semidirect,
    rho,
    stabilizer_lattice,
    twisted_conj_abelian,
)
from .harness import (
    ClfTable,
    FitResult,
    conjugacy_partition,
    empirical_clf,
    empirical_rclf_bs,
    empirical_tclf,
    fit_bound,
)

__version__ = "0.1.0"
