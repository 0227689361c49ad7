"""Search random two-addition, two-mode circuits for the state (|20> + |01>)/sqrt 2.

Example: python3 scripts/unreachable_state_witness.py --samples 5000 --seed 1
"""

import argparse

from gcore.ipag import unreachable_state_witness


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--samples", type=int, default=1000)
    ap.add_argument("--draws", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rep = unreachable_state_witness(args.samples, args.seed, args.draws)
    print(f"samples: {rep.samples}")
    print(f"max fidelity with target: {rep.max_fidelity:.6f} (< 1 - 1e-6: {rep.probabilistic_pass})")
    print(f"algebraic obstruction on {rep.draws} draws: {bool(rep.obstruction_pass)}")
    print(f"summed-premise check: {bool(rep.sum_form_pass)}")
    return 0 if rep.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())
