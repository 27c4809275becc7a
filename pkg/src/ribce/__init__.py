"""Exact robust predictions for finite games with flexibly acquired
information: obedience and separation checks, worst-case welfare under
exogenous vs. acquired information, dense/nowhere-dense classification of the
separated equilibria, canonical representations with cost certificates, and
vanishing-cost equilibrium tests.  All arithmetic is exact rational."""

from .games import BaseGame, Outcome, make_outcome, validate_game
from .bce import is_bce, max_support_point, minimize_linear_over_bce, obedience_slack
from .separation import conditional_belief, is_sbce, is_separated, is_strict_bce
from .welfare import (
    binary_symmetric_gap_test,
    value_interval,
    welfare_report,
    worst_case_exogenous,
    worst_case_rational_inattention,
)
from .structure import (
    classify_density,
    equal_beliefs_in_all_bce,
    find_minimally_mixed,
    jeopardization_set,
    jeopardizes,
    separating_perturbation,
)
from .representation import (
    belief_partition,
    blackwell_dominates,
    build_canonical,
    cost_certificate,
    induced_outcome,
)
from .vanishing import check_vce, is_complete_info_nash, is_decomposable, is_measurable
from .regime import (
    RegimeParams,
    build_regime_game,
    gap_closed_form,
    reduced_symmetric_lp,
    wlower_closed_form,
)

__version__ = "0.1.0"
