"""Certify a few sampled 2-cores and show what the certificate looked at.

    python3 demos/certify_cores.py [lambda] [n] [trials]
"""

import sys

from cospectra.certify import certify
from cospectra.experiments import core_of
from cospectra.graph import trial_seed


def main(lam: float = 5.0, n: int = 50, trials: int = 5) -> None:
    for i in range(trials):
        s = trial_seed(0, i)
        core = core_of(n, lam, s)
        rep = certify(core, seed=s)
        d = rep.details
        print(f"trial {i}: core {core.n:3d} vertices -> {rep.outcome.value:14s} "
              f"class={d.get('class')} primes={d.get('candidate_primes', [])} "
              f"reason={d.get('reason', '')!r} ({rep.wall_time:.2f}s)")


if __name__ == "__main__":
    args = sys.argv[1:]
    main(float(args[0]) if args else 5.0, int(args[1]) if len(args) > 1 else 50, int(args[2]) if len(args) > 2 else 5)
