"""Combinatorial choice functions: axioms, lattices, priority rules,
revealed preference, quasilinear demand and one-to-many matching."""
from .core import (
    Bundle, ChoiceFunction, ChoiceKitError, CycleError, GroundSet, InputError, InternalError,
    LinearOrder, NotPathIndependent, Relation, ScaleError, choice_eval, szpilrajn_extend, top,
    transitive_closure,
)
from .axioms import (
    AxiomReport, CHECKS, check_capacity_filling, check_idempotence, check_ire,
    check_path_independence, check_pi_variants, check_respects_priorities,
    check_size_monotonicity, check_subs_equivalents, check_substitutability, check_warsprio,
    replay, revealed_strict_priority,
)
from .lattice import (
    HasseDiagram, MaximalFamily, am_eval, chain_orders, hasse, maximal_family,
    mc_rationalization, min_mc_size, sharp, verify_lattice,
)
from .rules import (
    check_q_responsive, mc_rule, move_to_top, priority_max, reserves_rule,
    responsive_rationalize, seq_prio_rivalry, two_stage,
)
from .revealed import (
    PureModel, check_rationalizable, check_transitive_rationalizable, check_warp,
    domain_predicates, faithful_F, faithful_G, revealed_relations,
)
from .demand import (
    DemandObservation, Infeasible, PriceVector, Valuation, check_demand_warp,
    check_law_of_demand, derived_demand, quasilinear_rationalize,
)
from .matching import (
    Matching, MatchingProblem, check_stability, check_stability_implications,
    enumerate_stable, run_ak_da, run_ck_da, run_da,
)
from .search import search_counterexample

__version__ = "0.1.0"
