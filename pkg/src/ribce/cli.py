"""Command-line interface.

JSON reports are the canonical output (byte-stable for fixed inputs and
seed); ``--table`` renders the same data as aligned key/value lines.  Exit
codes: 0 success, 2 for input or validation problems, 1 for internal
invariant failures.
"""

import argparse
import json
import sys

from .errors import InternalInvariantError, RibceError, ValidationError
from .games import gross_value, is_symmetric_game, uninformed_value
from .bce import is_bce
from .io import (
    game_to_dict,
    load_game,
    load_json,
    load_outcome,
    outcome_from_dict,
    outcome_to_dict,
)
from .rational import Rat, parse_rational, rational_to_json
from .representation import build_canonical, cost_certificate, induced_outcome
from .separation import is_sbce, is_separated, is_strict_bce
from .structure import (
    EXACT,
    RANDOMIZED,
    classify_density,
    separating_perturbation,
)
from .vanishing import VceCertificate, check_vce
from .welfare import value_interval, welfare_report
from . import regime as _regime


def _json_report(data) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def _flatten(prefix, data, rows):
    if isinstance(data, dict):
        for key in sorted(data, key=str):
            _flatten(f"{prefix}{key}." if prefix else f"{key}.", data[key], rows)
    elif isinstance(data, list):
        for idx, item in enumerate(data):
            _flatten(f"{prefix}{idx}.", item, rows)
    else:
        rows.append((prefix[:-1], data))


def _table_report(data) -> str:
    rows = []
    _flatten("", data, rows)
    width = max((len(k) for k, _ in rows), default=0)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)


def _emit(args, report) -> None:
    text = _table_report(report) if args.table else _json_report(report)
    sys.stdout.write(text)


def _outcome_block(outcome) -> dict:
    return outcome_to_dict(outcome)["outcome"]


def _check_outcome_report(game, outcome) -> dict:
    bce = is_bce(game, outcome)
    sep = is_separated(game, outcome)
    values = {}
    for i in game.players:
        lo, action = uninformed_value(game, outcome, i)
        values[str(i)] = {
            "gross": rational_to_json(gross_value(game, outcome, i)),
            "uninformed": rational_to_json(lo),
            "best_constant_action": str(action),
        }
    report = {
        "is_bce": bool(bce),
        "is_separated": bool(sep),
        "is_sbce": bool(bce) and bool(sep),
        "is_strict_bce": is_strict_bce(game, outcome),
        "values": values,
    }
    if not bce:
        i, rec, dev, slack = bce.witness
        report["obedience_violation"] = {
            "player": str(i),
            "recommendation": str(rec),
            "deviation": str(dev),
            "slack": rational_to_json(slack),
        }
    if not sep:
        i, a, b, shared = sep.witness
        report["separation_violation"] = {
            "player": str(i),
            "pair": [str(a), str(b)],
            "shared_best_response": str(shared),
        }
    if bool(bce):
        vi = value_interval(game, outcome)
        report["value_intervals"] = {
            str(i): {
                "lower": rational_to_json(pi.lower),
                "upper": rational_to_json(pi.upper),
                "attainability": pi.attainability,
            }
            for i, pi in vi.per_player.items()
        }
    return report


def _welfare_block(game) -> dict:
    rep = welfare_report(game)
    return {
        "worst_case": {
            "exogenous_information": rational_to_json(rep.w_exogenous),
            "rational_inattention": rational_to_json(rep.w_inattention),
            "gap": rational_to_json(rep.gap),
        },
        "minimizers": {
            "exogenous_information": _outcome_block(rep.exogenous_minimizer),
            "rational_inattention": _outcome_block(rep.inattention_minimizer),
        },
    }


def _density_block(game, args) -> dict:
    verdict = classify_density(game, mode=args.mode, seed=args.seed, retries=args.retries)
    block = {"verdict": verdict.verdict, "mode": verdict.mode}
    if verdict.certificate is not None:
        block["certificate"] = _outcome_block(verdict.certificate)
    if verdict.witness is not None:
        outcome, player, a, b, shared = verdict.witness
        block["witness"] = {
            "outcome": _outcome_block(outcome),
            "player": str(player),
            "pair": [str(a), str(b)],
            "shared_jeopardizing_action": str(shared),
        }
    return block


def cmd_check_outcome(args) -> dict:
    game = load_game(args.game)
    outcome = load_outcome(args.outcome, game)
    return _check_outcome_report(game, outcome)


def cmd_welfare(args) -> dict:
    game = load_game(args.game)
    return _welfare_block(game)


def cmd_density(args) -> dict:
    game = load_game(args.game)
    return _density_block(game, args)


def cmd_analyze(args) -> dict:
    game = load_game(args.game)
    report = {
        "players": [str(i) for i in game.players],
        "states": [str(s) for s in game.states],
        "symmetric": is_symmetric_game(game),
        "welfare": _welfare_block(game),
        "density": _density_block(game, args),
    }
    if args.outcome:
        outcome = load_outcome(args.outcome, game)
        report["outcome_check"] = _check_outcome_report(game, outcome)
    return report


def cmd_regime(args) -> dict:
    thresholds = tuple(int(tok) for tok in args.states.split(","))
    priors = [parse_rational(tok) for tok in args.prior.split(",")]
    if len(priors) != len(thresholds):
        raise ValidationError("--prior must list one weight per state")
    params = _regime.RegimeParams(
        n=args.n,
        k=parse_rational(args.k),
        x=parse_rational(args.x),
        thresholds=thresholds,
        prior=dict(zip(thresholds, priors)),
    )
    w_lower = _regime.wlower_closed_form(params)
    red_u, kernel_u = _regime.reduced_symmetric_lp(params, _regime.UNINFORMED_WELFARE)
    red_g, _ = _regime.reduced_symmetric_lp(params, _regime.GROSS_WELFARE)
    if red_u != w_lower:
        raise InternalInvariantError("reduced LP disagrees with the closed form")
    report = {
        "params": {
            "n": args.n,
            "k": rational_to_json(params.k),
            "x": rational_to_json(params.x),
            "states": list(params.thresholds),
            "prior": {str(t): rational_to_json(params.prior[t]) for t in params.thresholds},
        },
        "w_lower_closed_form": rational_to_json(w_lower),
        "worst_case": {
            "rational_inattention": rational_to_json(red_u),
            "exogenous_information": rational_to_json(red_g),
        },
        "gap": _regime.gap_closed_form(params),
        "kernel_optimality_conditions": _regime.kernel_satisfies_optimality(params, kernel_u),
    }
    if args.full_check:
        game = _regime.build_regime_game(params)
        from .welfare import worst_case_exogenous, worst_case_rational_inattention

        w_ex, _ = worst_case_exogenous(game)
        w_ri, _ = worst_case_rational_inattention(game)
        report["full_game"] = {
            "exogenous_information": rational_to_json(w_ex),
            "rational_inattention": rational_to_json(w_ri),
        }
    return report


def cmd_perturb(args) -> dict:
    game = load_game(args.game)
    outcome = load_outcome(args.outcome, game)
    epsilon = parse_rational(args.epsilon)
    perturbed = separating_perturbation(game, outcome, epsilon)
    dist = max(
        abs(perturbed.u(i, profile, state) - game.u(i, profile, state))
        for i in game.players
        for (profile, state) in game.cells()
    )
    payload = game_to_dict(perturbed)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(_json_report(payload))
    return {
        "epsilon": rational_to_json(epsilon),
        "max_utility_change": rational_to_json(dist),
        "outcome_is_sbce_in_perturbed_game": is_sbce(perturbed, outcome),
        "perturbed_game": payload,
    }


def cmd_canonical(args) -> dict:
    game = load_game(args.game)
    outcome = load_outcome(args.outcome, game)
    rep = build_canonical(game, outcome)
    round_trip = induced_outcome(rep, game)
    partition = {
        str(i): [sorted(str(a) for a in cell) for cell in rep.partition.cells[i]]
        for i in game.players
    }
    states_block = []
    for z in rep.correlation_states:
        states_block.append([sorted(str(a) for a in cell) for cell in z])
    kernel_block = {}
    for state in game.states:
        kernel_block[str(state)] = [
            rational_to_json(rep.kernel[(state, z)]) for z in rep.correlation_states
        ]
    plans_block = {}
    for k, i in enumerate(game.players):
        rows = {}
        for cell in rep.partition.cells[i]:
            label = ",".join(sorted(str(a) for a in cell))
            rows[label] = {
                str(a): rational_to_json(rep.action_plans[i][(a, cell)])
                for a in game.actions[i]
            }
        plans_block[str(i)] = rows
    experiments_block = {}
    for k, i in enumerate(game.players):
        rows = []
        for z in rep.correlation_states:
            rows.append(
                [
                    rational_to_json(Rat(1) if signal == z[k] else Rat(0))
                    for signal in rep.signals[i]
                ]
            )
        experiments_block[str(i)] = rows
    report = {
        "partition": partition,
        "correlation_states": states_block,
        "kernel": kernel_block,
        "experiments": experiments_block,
        "action_plans": plans_block,
        "signal_counts": {str(i): len(rep.signals[i]) for i in game.players},
        "round_trip_exact": round_trip.p == outcome.p,
    }
    if is_sbce(game, outcome):
        lam = parse_rational(args.lam)
        cert = cost_certificate(game, outcome, lam)
        report["cost_certificate"] = {
            str(i): {key: rational_to_json(val) for key, val in entry.items()}
            for i, entry in cert.per_player.items()
        }
    else:
        report["cost_certificate"] = None
    return report


def _certificate_from_file(path, game):
    data = load_json(path)
    from .representation import PartitionProfile

    cells = {}
    for i in game.players:
        raw = data["partition"][str(i)]
        resolved = []
        for cell in raw:
            amap = {str(a): a for a in game.actions[i]}
            resolved.append(frozenset(amap[a] for a in cell))
        cells[i] = tuple(resolved)
    components = tuple(
        outcome_from_dict(game, {"outcome": comp}) for comp in data["components"]
    )
    witness = outcome_from_dict(game, {"outcome": data["sbce_witness"]})
    return VceCertificate(
        partition=PartitionProfile(cells=cells),
        weights=tuple(parse_rational(w) for w in data["weights"]),
        components=components,
        sbce_witness=witness,
        witness_distance=parse_rational(data["witness_distance"]),
    )


def cmd_vce(args) -> dict:
    game = load_game(args.game)
    outcome = load_outcome(args.outcome, game)
    certificate = None
    if args.certificate:
        certificate = _certificate_from_file(args.certificate, game)
    verdict = check_vce(
        game,
        outcome,
        epsilon=parse_rational(args.epsilon),
        certificate=certificate,
        mode=args.mode,
        seed=args.seed,
        retries=args.retries,
    )
    report = {"verdict": verdict.kind, "reason": verdict.reason}
    if verdict.witness is not None:
        report["witness"] = [str(x) for x in verdict.witness]
    if verdict.certificate is not None:
        cert = verdict.certificate
        report["certificate"] = {
            "partition": {
                str(i): [sorted(str(a) for a in cell) for cell in cert.partition.cells[i]]
                for i in game.players
            },
            "weights": [rational_to_json(Rat(w)) for w in cert.weights],
            "components": [_outcome_block(c) for c in cert.components],
            "sbce_witness": _outcome_block(cert.sbce_witness),
            "witness_distance": rational_to_json(Rat(cert.witness_distance)),
        }
    if args.mode == RANDOMIZED and not args.certificate:
        report["mode"] = {"kind": args.mode, "seed": args.seed, "retries": args.retries}
    return report


def _add_density_flags(sub):
    sub.add_argument("--mode", choices=(RANDOMIZED, EXACT), default=RANDOMIZED)
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--retries", type=int, default=64)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ribce",
        description=(
            "Exact robust predictions for games with flexibly acquired "
            "information: obedience/separation checks, worst-case welfare, "
            "density classification, perturbations, and vanishing-cost tests."
        ),
    )
    parser.add_argument("--table", action="store_true", help="aligned table output")
    subs = parser.add_subparsers(dest="command", required=True)

    sub = subs.add_parser("check-outcome", help="validate an outcome against a game")
    sub.add_argument("game")
    sub.add_argument("outcome")
    sub.set_defaults(func=cmd_check_outcome)

    sub = subs.add_parser("welfare", help="worst-case welfare under both regimes")
    sub.add_argument("game")
    sub.set_defaults(func=cmd_welfare)

    sub = subs.add_parser("density", help="dense / nowhere-dense classification")
    sub.add_argument("game")
    _add_density_flags(sub)
    sub.set_defaults(func=cmd_density)

    sub = subs.add_parser("analyze", help="full report for a game (and outcome)")
    sub.add_argument("game")
    sub.add_argument("outcome", nargs="?", default=None)
    _add_density_flags(sub)
    sub.set_defaults(func=cmd_analyze)

    sub = subs.add_parser("regime", help="regime-change analysis from parameters")
    sub.add_argument("--n", type=int, required=True)
    sub.add_argument("--k", required=True)
    sub.add_argument("--x", required=True)
    sub.add_argument("--states", required=True, help='comma list, e.g. "2,5"')
    sub.add_argument("--prior", required=True, help='comma list, e.g. "1/2,1/2"')
    sub.add_argument(
        "--full-check",
        action="store_true",
        help="also solve the full-profile LPs (exponential in n)",
    )
    sub.set_defaults(func=cmd_regime)

    sub = subs.add_parser("perturb", help="make an outcome separated in a nearby game")
    sub.add_argument("game")
    sub.add_argument("outcome")
    sub.add_argument("--epsilon", required=True)
    sub.add_argument("--output", default=None, help="write the perturbed game here")
    sub.set_defaults(func=cmd_perturb)

    sub = subs.add_parser("canonical", help="canonical representation of an outcome")
    sub.add_argument("game")
    sub.add_argument("outcome")
    sub.add_argument("--lam", default="1", help="cost scale in (0,1], default 1")
    sub.set_defaults(func=cmd_canonical)

    sub = subs.add_parser("vce", help="vanishing-cost equilibrium check")
    sub.add_argument("game")
    sub.add_argument("outcome")
    sub.add_argument("--epsilon", default="1/1000")
    sub.add_argument("--certificate", default=None)
    _add_density_flags(sub)
    sub.set_defaults(func=cmd_vce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except FileNotFoundError as exc:
        sys.stderr.write(f"error[file_not_found]: {exc}\n")
        return 2
    except ValidationError as exc:
        sys.stderr.write(f"error[{exc.code}]: {exc}\n")
        return 2
    except InternalInvariantError as exc:
        sys.stderr.write(f"error[{exc.code}]: {exc}\n")
        return 1
    except RibceError as exc:
        sys.stderr.write(f"error[{exc.code}]: {exc}\n")
        return 1
    _emit(args, report)
    return 0


if __name__ == "__main__":
    sys.exit(main())
