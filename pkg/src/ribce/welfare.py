"""Per-outcome value intervals and worst-case welfare under both knowledge
regimes.

Exogenous information hands players the gross value of an outcome; acquired
information pins each player between her uninformed value (ignore every
recommendation, play the best constant action) and the gross value.  The two
worst cases over the obedience polytope are a plain LP and an epigraph LP;
the gap between them is what separates the two regimes for a planner.
"""

from dataclasses import dataclass
from . import lp as _lp
from .bce import BcePolytope, is_bce, minimize_linear_over_bce
from .errors import InternalInvariantError, NotABce, NotBinaryAction, NotSymmetric
from .games import (
    BaseGame,
    Outcome,
    gross_value,
    is_symmetric_game,
    uninformed_value,
)
from .rational import ONE, ZERO

RATIONAL_INATTENTION = "rational_inattention"
ARBITRARY_TECHNOLOGY = "arbitrary_technology"

POINT_ONLY = "point_only"
HALF_OPEN = "half_open"
CLOSED = "closed"


@dataclass(frozen=True)
class PlayerInterval:
    lower: object  # uninformed value
    upper: object  # gross value
    attainability: str


@dataclass(frozen=True)
class ValueInterval:
    mode: str
    per_player: dict  # player -> PlayerInterval


@dataclass(frozen=True)
class WelfareReport:
    w_exogenous: object
    exogenous_minimizer: Outcome
    w_inattention: object
    inattention_minimizer: Outcome

    @property
    def gap(self):
        return self.w_exogenous - self.w_inattention


def value_interval(game: BaseGame, outcome: Outcome, mode=RATIONAL_INATTENTION) -> ValueInterval:
    """Attainable net payoffs per player from this equilibrium outcome.

    Requires a BCE.  Under flexible costly acquisition the interval is
    [uninformed, gross) unless the endpoints coincide; if arbitrary (possibly
    non-monotone) technologies are allowed, the interval closes.
    """
    if mode not in (RATIONAL_INATTENTION, ARBITRARY_TECHNOLOGY):
        raise ValueError(f"unknown mode {mode!r}")
    check = is_bce(game, outcome)
    if not check:
        raise NotABce(f"value intervals require obedience; violated at {check.witness}")
    per_player = {}
    for i in game.players:
        lo, _ = uninformed_value(game, outcome, i)
        hi = gross_value(game, outcome, i)
        if mode == ARBITRARY_TECHNOLOGY:
            kind = CLOSED
        else:
            kind = POINT_ONLY if lo == hi else HALF_OPEN
        per_player[i] = PlayerInterval(lower=lo, upper=hi, attainability=kind)
    return ValueInterval(mode=mode, per_player=per_player)


def worst_case_exogenous(game: BaseGame):
    """min over the BCE set of total gross value; returns (value, minimizer)."""
    objective = {}
    for cell in game.cells():
        profile, state = cell
        total = sum((game.u(i, profile, state) for i in game.players), ZERO)
        if total:
            objective[cell] = total
    outcome, value = minimize_linear_over_bce(game, objective)
    return value, outcome


def _deviation_row(game: BaseGame, player, action):
    """Coefficients of the linear functional p -> payoff of constantly playing
    ``action`` against p."""
    k = game.player_index(player)
    coeffs = {}
    for cell in game.cells():
        profile, state = cell
        dev = profile[:k] + (action,) + profile[k + 1 :]
        val = game.u(player, dev, state)
        if val:
            coeffs[cell] = val
    return coeffs


def _epigraph_lp(game: BaseGame, poly: BcePolytope):
    tvars = tuple(("t", i) for i in game.players)
    variables = poly.variables + tvars
    constraints = list(poly.constraints)
    for i in game.players:
        for action in game.actions[i]:
            coeffs = dict(_deviation_row(game, i, action))
            for key in coeffs:
                coeffs[key] = -coeffs[key]
            coeffs[("t", i)] = ONE
            constraints.append((coeffs, _lp.GREATER, ZERO))
    objective = {("t", i): ONE for i in game.players}
    return _lp.LinearProgram(
        variables=variables,
        objective=objective,
        sense="min",
        constraints=constraints,
        bounds=dict(poly.bounds),
    )


def worst_case_rational_inattention(game: BaseGame):
    """min over the BCE set of total uninformed value, via epigraph variables
    t_i >= every constant-action deviation payoff; returns (value, minimizer)."""
    poly = BcePolytope.of(game)
    lp = _epigraph_lp(game, poly)
    sol = _lp.solve(lp)
    if not sol.is_optimal:
        raise InternalInvariantError(f"uninformed-welfare LP is {sol.status}")
    outcome = poly.outcome_from_point({v: sol.point[v] for v in poly.variables})
    check = is_bce(game, outcome)
    if not check:
        raise InternalInvariantError(f"optimizer left the BCE set: {check.witness}")
    # Tightness: at the optimum each t_i equals the max deviation payoff.
    total = sum((uninformed_value(game, outcome, i)[0] for i in game.players), ZERO)
    if total != sol.value:
        raise InternalInvariantError("epigraph variables not tight at optimum")
    return sol.value, outcome


def welfare_report(game: BaseGame) -> WelfareReport:
    w_ex, p_ex = worst_case_exogenous(game)
    w_ri, p_ri = worst_case_rational_inattention(game)
    if w_ri > w_ex:
        raise InternalInvariantError("uninformed worst case exceeded gross worst case")
    return WelfareReport(
        w_exogenous=w_ex,
        exogenous_minimizer=p_ex,
        w_inattention=w_ri,
        inattention_minimizer=p_ri,
    )


def _symmetry_rows(game: BaseGame):
    """Equalities tying each cell to its orbit representative under player
    permutations (generated by adjacent transpositions)."""
    n = len(game.players)
    rows = []
    for t in range(n - 1):
        phi = list(range(n))
        phi[t], phi[t + 1] = phi[t + 1], phi[t]
        for cell in game.cells():
            profile, state = cell
            moved = tuple(profile[phi[j]] for j in range(n))
            if moved == profile:
                continue
            if (profile, state) < ((moved, state)):
                rows.append(({cell: ONE, (moved, state): -ONE}, _lp.EQUAL, ZERO))
    return rows


def binary_symmetric_gap_test(game: BaseGame):
    """Decides w_inattention < w_exogenous for symmetric binary-action games
    without computing either worst case.

    Solves the relaxed program: minimize total uninformed value over all
    symmetric outcomes, ignoring obedience.  The gap is strict iff every
    relaxed minimizer supports both actions and gives each recommendation a
    strictly unique best response; both "for all minimizers" conditions
    reduce to strict positivity of per-quantity minima over the optimal face.

    Returns (gap_strict, diagnostic dict).
    """
    if not is_symmetric_game(game):
        raise NotSymmetric("gap test requires a symmetric game")
    if any(len(game.actions[i]) != 2 for i in game.players):
        raise NotBinaryAction("gap test requires binary actions")

    variables = tuple(game.cells())
    bounds = {v: (ZERO, None) for v in variables}
    constraints = []
    for state in game.states:
        coeffs = {(profile, state): ONE for profile in game.profiles()}
        constraints.append((coeffs, _lp.EQUAL, game.prior[state]))
    constraints.extend(_symmetry_rows(game))

    tvars = tuple(("t", i) for i in game.players)
    epi_rows = []
    for i in game.players:
        for action in game.actions[i]:
            coeffs = {k: -c for k, c in _deviation_row(game, i, action).items()}
            coeffs[("t", i)] = ONE
            epi_rows.append((coeffs, _lp.GREATER, ZERO))
    relaxed = _lp.LinearProgram(
        variables=variables + tvars,
        objective={("t", i): ONE for i in game.players},
        sense="min",
        constraints=constraints + epi_rows,
        bounds=bounds,
    )
    sol = _lp.solve(relaxed)
    if not sol.is_optimal:
        raise InternalInvariantError(f"relaxed symmetric LP is {sol.status}")
    face_rows = constraints + epi_rows + [
        ({("t", i): ONE for i in game.players}, _lp.EQUAL, sol.value)
    ]

    def face_min(objective):
        lp = _lp.LinearProgram(
            variables=variables + tvars,
            objective=objective,
            sense="min",
            constraints=face_rows,
            bounds=bounds,
        )
        s = _lp.solve(lp)
        if not s.is_optimal:
            raise InternalInvariantError(f"optimal-face LP is {s.status}")
        return s.value

    # Symmetric outcomes make every player's conditions identical; testing the
    # first player covers them all.
    i = game.players[0]
    k = game.player_index(i)
    diagnostics = {"relaxed_value": sol.value, "per_action": {}}
    gap = True
    a0, a1 = game.actions[i]
    for rec, dev in ((a0, a1), (a1, a0)):
        marg = {}
        slack = {}
        for cell in variables:
            profile, state = cell
            if profile[k] != rec:
                continue
            marg[cell] = ONE
            swapped = profile[:k] + (dev,) + profile[k + 1 :]
            diff = game.u(i, profile, state) - game.u(i, swapped, state)
            if diff:
                slack[cell] = diff
        min_mass = face_min(marg)
        min_slack = face_min(slack)
        diagnostics["per_action"][rec] = {
            "min_probability": min_mass,
            "min_strict_br_slack": min_slack,
        }
        if min_mass <= 0 or min_slack <= 0:
            gap = False
    return gap, diagnostics
