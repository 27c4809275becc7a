"""Regime-change application: n investors decide whether to attack a
distressed institution whose failure threshold is the payoff state.

Attacking costs k and pays 1 when the attack succeeds (at least theta
attackers); passive investors absorb an externality -x on success.  Symmetric
outcomes are equivalent to kernels over attacker counts, which keeps the
worst-case welfare programs tractable for large n, and the worst case under
acquired information has the closed form -n*x*k/(1+x) regardless of the
threshold distribution.
"""

from dataclasses import dataclass
from itertools import product

from . import lp as _lp
from .errors import InternalInvariantError, InvalidParams, NotSymmetricOutcome
from .games import BaseGame, Outcome, is_symmetric_outcome, validate_game
from .rational import ONE, ZERO, Rat

ATTACK = "1"
STAY = "0"

GROSS_WELFARE = "gross_welfare"
UNINFORMED_WELFARE = "uninformed_welfare"


@dataclass(frozen=True)
class RegimeParams:
    n: int
    k: object  # speculation cost, in (0,1)
    x: object  # externality on passive investors, > 0
    thresholds: tuple  # states, a subset of {2, ..., n-2}
    prior: dict  # threshold -> Rat

    def __post_init__(self):
        object.__setattr__(self, "k", Rat(self.k))
        object.__setattr__(self, "x", Rat(self.x))
        object.__setattr__(self, "thresholds", tuple(sorted(int(t) for t in self.thresholds)))
        object.__setattr__(
            self, "prior", {int(t): Rat(q) for t, q in self.prior.items()}
        )
        if self.n <= 3:
            raise InvalidParams("need n > 3 so that 1 < min(theta) <= max(theta) < n - 1")
        if not self.thresholds:
            raise InvalidParams("empty threshold set")
        if min(self.thresholds) <= 1 or max(self.thresholds) >= self.n - 1:
            raise InvalidParams("thresholds must satisfy 1 < theta < n - 1")
        if not (0 < self.k < 1):
            raise InvalidParams("k must lie in (0,1)")
        if self.x <= 0:
            raise InvalidParams("x must be positive")
        if set(self.prior) != set(self.thresholds):
            raise InvalidParams("prior support must equal the threshold set")
        if any(q <= 0 for q in self.prior.values()):
            raise InvalidParams("prior must have full support")
        if sum(self.prior.values(), ZERO) != ONE:
            raise InvalidParams("prior must sum to one")

    @property
    def kappa(self):
        """k/(1+x): both the worst-case attack probability and the belief
        threshold at which an investor is indifferent."""
        return self.k / (ONE + self.x)


@dataclass(frozen=True)
class CountKernel:
    """Per-state distribution over the number of attackers."""

    n: int
    q: dict  # (count m, theta) -> Rat

    def mass(self, m, theta):
        return self.q.get((m, theta), ZERO)


def _attacker_payoff(params: RegimeParams, total_attackers: int, theta: int):
    return (ONE - params.k) if total_attackers >= theta else -params.k


def _passive_payoff(params: RegimeParams, total_attackers: int, theta: int):
    return -params.x if total_attackers >= theta else ZERO


def build_regime_game(params: RegimeParams) -> BaseGame:
    players = tuple(f"i{j + 1}" for j in range(params.n))
    actions = {i: (STAY, ATTACK) for i in players}
    utilities = {i: {} for i in players}
    for profile in product((STAY, ATTACK), repeat=params.n):
        m = sum(1 for a in profile if a == ATTACK)
        for theta in params.thresholds:
            att = _attacker_payoff(params, m, theta)
            pas = _passive_payoff(params, m, theta)
            for j, i in enumerate(players):
                utilities[i][(profile, theta)] = att if profile[j] == ATTACK else pas
    game = BaseGame(
        players=players,
        states=params.thresholds,
        prior=dict(params.prior),
        actions=actions,
        utilities=utilities,
    )
    validate_game(game)
    return game


def wlower_closed_form(params: RegimeParams):
    """Worst-case welfare under acquired information: -n*x*k/(1+x).  It does
    not depend on the threshold distribution."""
    return -params.n * params.x * params.kappa


def _cutoff_state(params: RegimeParams):
    cdf = ZERO
    for theta in params.thresholds:
        cdf += params.prior[theta]
        if cdf >= params.kappa:
            return theta, cdf
    raise InternalInvariantError("CDF never reached kappa <= 1")  # pragma: no cover


def gap_closed_form(params: RegimeParams) -> bool:
    """True iff the worst case under acquired information is strictly below
    the worst case under exogenous information.

    Evaluates the cutoff inequality
        F(t*)*(t* - E[theta | theta <= t*]) < kappa*(3 - 3*kappa + t* - E[theta]),
    with t* the smallest threshold whose CDF reaches kappa = k/(1+x).  For a
    binary threshold set the equivalent two-sided test (gap vanishes iff the
    thresholds are >= 3 apart and kappa sits between the two state-weighted
    bounds) is evaluated as well and must agree.
    """
    kappa = params.kappa
    theta_star, cdf_star = _cutoff_state(params)
    mean = sum((params.prior[t] * t for t in params.thresholds), ZERO)
    mean_below = sum(
        (params.prior[t] * t for t in params.thresholds if t <= theta_star), ZERO
    )  # unnormalized: equals F(t*) * E[theta | theta <= t*]
    lhs = cdf_star * theta_star - mean_below
    rhs = kappa * (3 - 3 * kappa + theta_star - mean)
    gap = lhs < rhs

    if len(params.thresholds) == 2:
        lo, hi = params.thresholds
        spread = hi - lo
        no_gap_binary = (
            spread >= 3
            and ONE - Rat(spread, 3) * params.prior[hi] <= kappa
            and kappa <= Rat(spread, 3) * (ONE - params.prior[hi])
        )
        if no_gap_binary == gap:
            raise InternalInvariantError(
                "binary cutoff test disagrees with the general inequality"
            )
    return gap


def _count_weights(params: RegimeParams):
    """Count-space conditioning identities: given m total attackers, a given
    investor attacks with weight m/n and stays with weight (n-m)/n."""
    n = params.n
    return {m: Rat(m, n) for m in range(n + 1)}, {m: Rat(n - m, n) for m in range(n + 1)}


def _reduced_polytope(params: RegimeParams):
    n = params.n
    variables = tuple((m, theta) for theta in params.thresholds for m in range(n + 1))
    bounds = {v: (ZERO, None) for v in variables}
    constraints = []
    for theta in params.thresholds:
        coeffs = {(m, theta): ONE for m in range(n + 1)}
        constraints.append((coeffs, _lp.EQUAL, ONE))
    w_att, w_stay = _count_weights(params)

    # Obedience for "attack": opponents hold m-1 attackers; deviating to stay
    # drops the total to m-1.
    coeffs = {}
    for theta in params.thresholds:
        pi = params.prior[theta]
        for m in range(1, n + 1):
            diff = _attacker_payoff(params, m, theta) - _passive_payoff(params, m - 1, theta)
            val = pi * w_att[m] * diff
            if val:
                coeffs[(m, theta)] = val
    constraints.append((coeffs, _lp.GREATER, ZERO))

    # Obedience for "stay": opponents hold all m attackers; deviating to attack
    # lifts the total to m+1.
    coeffs = {}
    for theta in params.thresholds:
        pi = params.prior[theta]
        for m in range(n):
            diff = _passive_payoff(params, m, theta) - _attacker_payoff(params, m + 1, theta)
            val = pi * w_stay[m] * diff
            if val:
                coeffs[(m, theta)] = val
    constraints.append((coeffs, _lp.GREATER, ZERO))
    return variables, constraints, bounds


def reduced_symmetric_lp(params: RegimeParams, objective: str):
    """Exact worst-case welfare over symmetric BCEs in count space.

    Symmetric outcomes are exactly the count kernels, and the symmetric
    optimum equals the full-game optimum because both worst-case programs
    admit symmetric minimizers.  Returns (value, CountKernel).
    """
    n = params.n
    variables, constraints, bounds = _reduced_polytope(params)
    w_att, w_stay = _count_weights(params)

    if objective == GROSS_WELFARE:
        obj = {}
        for theta in params.thresholds:
            pi = params.prior[theta]
            for m in range(n + 1):
                total = m * _attacker_payoff(params, m, theta) + (n - m) * _passive_payoff(
                    params, m, theta
                )
                val = pi * total
                if val:
                    obj[(m, theta)] = val
        lp = _lp.LinearProgram(
            variables=variables,
            objective=obj,
            sense="min",
            constraints=constraints,
            bounds=bounds,
        )
        sol = _lp.solve(lp)
        if not sol.is_optimal:
            raise InternalInvariantError(f"reduced LP is {sol.status}")
        kernel = CountKernel(n=n, q={v: sol.point[v] for v in variables if sol.point[v]})
        return sol.value, kernel

    if objective != UNINFORMED_WELFARE:
        raise InvalidParams(f"unknown objective {objective!r}")

    # Always-attack / always-stay deviation payoffs, conditional on the count.
    u_attack = {}
    u_stay = {}
    for theta in params.thresholds:
        pi = params.prior[theta]
        for m in range(n + 1):
            att = w_att[m] * _attacker_payoff(params, m, theta) + w_stay[m] * _attacker_payoff(
                params, m + 1, theta
            )
            sty = w_att[m] * _passive_payoff(params, m - 1, theta) + w_stay[m] * _passive_payoff(
                params, m, theta
            )
            if pi * att:
                u_attack[(m, theta)] = pi * att
            if pi * sty:
                u_stay[(m, theta)] = pi * sty
    tvar = ("t",)
    rows = list(constraints)
    for dev in (u_stay, u_attack):
        coeffs = {key: -val for key, val in dev.items()}
        coeffs[tvar] = ONE
        rows.append((coeffs, _lp.GREATER, ZERO))
    lp = _lp.LinearProgram(
        variables=variables + (tvar,),
        objective={tvar: Rat(n)},
        sense="min",
        constraints=rows,
        bounds=bounds,
    )
    sol = _lp.solve(lp)
    if not sol.is_optimal:
        raise InternalInvariantError(f"reduced LP is {sol.status}")
    kernel = CountKernel(n=n, q={v: sol.point[v] for v in variables if sol.point[v]})
    return sol.value, kernel


def kernel_to_outcome(params: RegimeParams, kernel: CountKernel, game: BaseGame) -> Outcome:
    """Spread each count mass uniformly over the profiles with that many
    attackers; the result is the symmetric outcome the kernel represents."""
    from math import comb

    p = {}
    for (m, theta), q in kernel.q.items():
        if not q:
            continue
        share = q * params.prior[theta] / comb(params.n, m)
        for profile in product((STAY, ATTACK), repeat=params.n):
            if sum(1 for a in profile if a == ATTACK) == m:
                p[(profile, theta)] = share
    return Outcome(p=p)


def check_optimality_conditions(params: RegimeParams, outcome: Outcome, game: BaseGame = None) -> bool:
    """The two conditions pinning down worst-case minimizers under acquired
    information: zero mass on near-pivotal counts (theta-1 <= attackers <=
    theta) and success probability exactly k/(1+x)."""
    game = game or build_regime_game(params)
    if not is_symmetric_outcome(game, outcome):
        raise NotSymmetricOutcome("optimality conditions apply to symmetric outcomes")
    pivotal = ZERO
    success = ZERO
    for (profile, theta), q in outcome.p.items():
        if not q:
            continue
        m = sum(1 for a in profile if a == ATTACK)
        if theta - 1 <= m <= theta:
            pivotal += q
        if m > theta:
            success += q
    return pivotal == ZERO and success == params.kappa


def kernel_satisfies_optimality(params: RegimeParams, kernel: CountKernel) -> bool:
    """Count-space version of check_optimality_conditions."""
    pivotal = ZERO
    success = ZERO
    for (m, theta), q in kernel.q.items():
        if not q:
            continue
        mass = q * params.prior[theta]
        if theta - 1 <= m <= theta:
            pivotal += mass
        if m > theta:
            success += mass
    return pivotal == ZERO and success == params.kappa
