"""latcal: finite lattices, valuations and the rules that constrain them."""
__version__ = "0.1.0"

from .bivaluation import (
    BiValuation,
    bayes,
    bival,
    check_bayes,
    check_chain_rule,
    check_context_product_rule,
    check_contextual_sum_rule,
    check_product_spaces,
    run_checks,
)
from .builders import (
    downset_lattice,
    find_isomorphism,
    is_isomorphic,
    lattice_product,
    partition_poset,
    powerset_lattice,
    question_lattice,
)
from .errors import *  # noqa: F401,F403
from .number_theory import (
    DivisorLattice,
    divisibility_bayes,
    divisibility_degree,
    divisor_lattice,
    log_valuation,
)
from .poset import (
    Lattice,
    LatticeDiagnostic,
    Poset,
    certify_lattice,
    classify,
    diagnose,
    from_covers,
    is_distributive,
    join_irreducibles,
)
from .valuation import (
    RuleReport,
    Valuation,
    check_lattice_product_rule,
    check_monotone,
    check_sum_rule,
    extend_from_irreducibles,
    from_values,
    product_valuation,
)
