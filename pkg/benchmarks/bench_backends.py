"""Time the compiled kernels against the pure-Python reference.

Runs the hot numeric routines through both backends on identical inputs
and prints per-call times with the speedup.  The rollout benchmarks use
the limit-free stop rule so every call integrates the full action
sequence and the two backends do the same amount of work.

Usage: python benchmarks/bench_backends.py [--number N] [--repeats R]
"""

import argparse
import timeit
from array import array

from modelmend import _reference

try:
    from modelmend import _kernels
except ImportError:
    _kernels = None

NOMINAL = (1.0, 0.1, 0.5, 10.0, 9.8, 0.2095, 2.4)
DT = 0.02
WEIGHTS = (1.0, 1.0, 1.0, 1.0)
COST_WEIGHTS = (1.0, 0.25, 0.1, 0.05)


def make_cases():
    """(name, args builder) pairs; both backends get the same arguments."""
    actions = bytes(i % 2 for i in range(200))
    # a slightly-off model supplies an observed sequence that never
    # matches, so the score loop always runs its full length
    shifted = (1.0, 0.1, 0.5, 10.0, 10.3, 0.2095, 2.4)
    observed = array("d", [v for state in _reference.simulate(
        shifted, 0.0, 0.0, 0.05, 0.0, actions, DT, respect_limits=False)
        for v in state])
    expected = array("d", [v for state in _reference.simulate(
        NOMINAL, 0.0, 0.0, 0.05, 0.0, actions, DT, respect_limits=False)
        for v in state])

    return [
        ("derivatives", lambda mod: mod.derivatives(
            1.0, 0.1, 0.5, 9.8, 0.05, 0.0, 10.0)),
        ("euler_step", lambda mod: mod.euler_step(
            1.0, 0.1, 0.5, 9.8, 0.0, 0.0, 0.05, 0.0, 10.0, DT)),
        ("simulate/200", lambda mod: mod.simulate(
            NOMINAL, 0.0, 0.0, 0.05, 0.0, actions, DT,
            respect_limits=False)),
        ("deviation/201", lambda mod: mod.discounted_deviation(
            expected, observed, 0.95, *WEIGHTS)),
        ("score/200", lambda mod: mod.trajectory_score(
            NOMINAL, 0.0, 0.0, 0.05, 0.0, actions, observed, DT, 0.95,
            *WEIGHTS, respect_limits=False)),
        ("beam d20 w100", lambda mod: mod.beam_plan(
            NOMINAL, 0.0, 0.0, 0.05, 0.0, DT, 20, 100,
            *COST_WEIGHTS, 1e6)),
    ]


def best_per_call(fn, number, repeats):
    times = timeit.repeat(fn, number=number, repeat=repeats)
    return min(times) / number


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--number", type=int, default=200,
                        help="calls per timing sample (default 200)")
    parser.add_argument("--repeats", type=int, default=5,
                        help="timing samples per case (default 5)")
    args = parser.parse_args()

    cases = make_cases()
    print(f"{'case':<16}{'python':>12}{'compiled':>12}{'speedup':>10}")
    for name, call in cases:
        py = best_per_call(lambda: call(_reference), args.number,
                           args.repeats)
        if _kernels is None:
            print(f"{name:<16}{py * 1e6:>10.2f}us{'n/a':>12}{'n/a':>10}")
            continue
        cy = best_per_call(lambda: call(_kernels), args.number, args.repeats)
        assert call(_reference) == call(_kernels), name
        print(f"{name:<16}{py * 1e6:>10.2f}us{cy * 1e6:>10.2f}us"
              f"{py / cy:>9.1f}x")
    if _kernels is None:
        print("\ncompiled backend not importable; showing reference only")


if __name__ == "__main__":
    main()
