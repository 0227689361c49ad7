"""Compare hafnian-based densities with the truncated Fock simulator on random circuits.

Covers core-state inputs, interleaved add/sub events and marginals; prints the
error distribution and the convergence of the oracle with the cutoff.

Example: python3 scripts/oracle_crosscheck.py --circuits 30 --cutoffs 15,20,25,30
"""

import argparse

import numpy as np

from gcore.circuit import Circuit, Ladder
from gcore.corestate import ZeroStateError
from gcore.density import core_density, marginal_density
from gcore.ipag import compile_circuit
from gcore.oracle import CutoffError, OracleConfig, density_from_state, simulate
from gcore.randomize import random_core, random_gates, random_outcome


def random_circuit(rng):
    m = int(rng.integers(1, 4))
    C = random_core(m, int(rng.integers(0, 4)), int(rng.integers(1, 5)), rng)
    ops = list(random_gates(m, rng, max_r=0.4, max_beta=0.8))
    for _ in range(int(rng.integers(0, 3))):
        ops.insert(int(rng.integers(0, len(ops) + 1)), Ladder(int(rng.integers(m)), str(rng.choice(["add", "sub"]))))
    return Circuit(m, C, ops)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--circuits", type=int, default=30)
    ap.add_argument("--cutoffs", default="15,20,25,30")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    cutoffs = [int(x) for x in args.cutoffs.split(",")]
    rng = np.random.default_rng(args.seed)
    errors = {L: [] for L in cutoffs}
    skipped = 0
    for _ in range(args.circuits):
        c = random_circuit(rng)
        try:
            comp = compile_circuit(c)
        except ZeroStateError:
            skipped += 1
            continue
        a = random_outcome(c.modes, rng, 1.2)
        fast = core_density(comp.unitary, comp.core, a)
        fast_marg = marginal_density(comp.unitary, comp.core, a[:1], [0]) if c.modes > 1 else None
        for L in cutoffs:
            try:
                st = simulate(c, OracleConfig(cutoff=L, leakage_tol=1.0))
            except CutoffError:
                continue
            err = abs(fast - density_from_state(st, a).density)
            if fast_marg is not None:
                err = max(err, abs(fast_marg - density_from_state(st, a[:1], [0]).density))
            errors[L].append(err)
    print(f"circuits: {args.circuits} (zero-state skipped: {skipped})")
    print(f"{'cutoff':>6} {'n':>4} {'median':>10} {'max':>10}")
    for L in cutoffs:
        e = np.array(errors[L])
        if e.size:
            print(f"{L:>6} {e.size:>4} {np.median(e):>10.2e} {e.max():>10.2e}")


if __name__ == "__main__":
    main()
