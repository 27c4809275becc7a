"""Benchmark: compiled row kernels vs. the pure-Python fallback.

Runs the same exact-arithmetic workload twice, once per kernel
implementation (selected at import via RIBCE_PURE_ROWS), and reports wall
times.  The workload mirrors the package's hot paths: the large regime-change
welfare LPs, a batch of small obedience-polytope optimizations, and one
vertex enumeration.

Usage: python benchmarks/bench_rows.py [--repeats N]
"""

import argparse
import json
import os
import subprocess
import sys
import time

WORKLOAD = r"""
import json, random, time
import ribce.rows
from ribce import lp as _lp
from ribce.bce import BcePolytope
from ribce.rational import Rat
from ribce.regime import RegimeParams, build_regime_game
from ribce.vertices import enumerate_vertices
from ribce.welfare import _epigraph_lp, worst_case_exogenous

timings = {"impl": ribce.rows.IMPL}

params = RegimeParams(
    n=8, k=Rat(3, 5), x=Rat(1, 5), thresholds=(2, 5),
    prior={2: Rat(1, 2), 5: Rat(1, 2)},
)
game = build_regime_game(params)
poly = BcePolytope.of(game)

t0 = time.perf_counter()
lp = _epigraph_lp(game, poly)
sol = _lp.solve(lp)
assert sol.value == Rat(-4, 5)
timings["regime_n8_uninformed_lp"] = time.perf_counter() - t0

t0 = time.perf_counter()
value, _ = worst_case_exogenous(game)
assert value == Rat(-4, 5)
timings["regime_n8_gross_lp"] = time.perf_counter() - t0

rng = random.Random(0)
import sys
sys.path.insert(0, "tests")
from sample_games import random_game, coordination_game_3x3

t0 = time.perf_counter()
for _ in range(40):
    g = random_game(rng)
    p = BcePolytope.of(g)
    objective = {cell: Rat(rng.randint(-4, 4)) for cell in p.variables}
    assert _lp.solve(p.lp(objective, "min")).is_optimal
timings["small_bce_lps_x40"] = time.perf_counter() - t0

g3 = coordination_game_3x3()
p3 = BcePolytope.of(g3)
t0 = time.perf_counter()
for _ in range(10):
    assert len(enumerate_vertices(p3.variables, p3.constraints, p3.bounds)) == 2
timings["vertex_enum_3x3_x10"] = time.perf_counter() - t0

print(json.dumps(timings))
"""


def run_once(pure: bool) -> dict:
    env = dict(os.environ)
    env["RIBCE_PURE_ROWS"] = "1" if pure else "0"
    out = subprocess.run(
        [sys.executable, "-c", WORKLOAD],
        capture_output=True,
        text=True,
        env=env,
        cwd=os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
    )
    if out.returncode != 0:
        sys.stderr.write(out.stderr)
        raise SystemExit(1)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main() -> int:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    best = {}
    for pure in (False, True):
        for _ in range(args.repeats):
            result = run_once(pure)
            impl = result.pop("impl")
            for key, val in result.items():
                slot = best.setdefault(key, {})
                slot[impl] = min(slot.get(impl, float("inf")), val)
    impls = sorted({impl for slot in best.values() for impl in slot})
    if len(impls) < 2:
        print("compiled kernels unavailable; only the python fallback ran")
    header = f"{'workload':34}" + "".join(f"{impl:>12}" for impl in impls) + f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for key in sorted(best):
        row = f"{key:34}"
        for impl in impls:
            row += f"{best[key].get(impl, float('nan')):12.4f}"
        if "cython" in best[key] and "python" in best[key] and best[key]["cython"] > 0:
            row += f"{best[key]['python'] / best[key]['cython']:9.2f}x"
        print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
