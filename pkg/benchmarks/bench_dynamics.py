"""Time the dynamics step loop on each available backend.

    python benchmarks/bench_dynamics.py [--steps N] [--repeat R]
"""

import argparse
import math
import timeit

import numpy as np

from faradayjam.dynamics import CountermeasureModel, FieldSchedule, available_backends, simulate


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--steps", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    dt = 1e-5
    sched = FieldSchedule.square_wave(0.3, -0.3, 1e-3, args.steps * dt)
    counters = {
        "triggered": CountermeasureModel.triggered(realign_duration=0.05),
        "tracker": CountermeasureModel.tracker(40 * math.pi),
    }
    backends = list(available_backends())
    print(f"{args.steps} steps, best of {args.repeat}")
    print(f"{'countermeasure':<15}" + "".join(f"{b:>14}" for b in backends) + f"{'speedup':>10}")
    for name, counter in counters.items():
        best = {}
        results = {}
        for b in backends:
            best[b] = min(timeit.repeat(lambda: simulate(sched, counter, dt, backend=b), number=1, repeat=args.repeat))
            results[b] = simulate(sched, counter, dt, backend=b)
        if len(results) == 2:
            np.testing.assert_array_equal(results["python"].state, results["compiled"].state)
        speedup = best["python"] / best["compiled"] if "compiled" in best else float("nan")
        print(f"{name:<15}" + "".join(f"{best[b]:>12.4f} s" for b in backends) + f"{speedup:>9.1f}x")


if __name__ == "__main__":
    main()
