"""Random gates, unitaries and core states for tests, scripts and benchmarks."""

from __future__ import annotations

import itertools

import numpy as np

from gcore.corestate import CoreState, new_core
from gcore.gaussian import Gate, GaussianUnitary, from_gates


def random_gates(
    m: int,
    rng: np.random.Generator,
    depth: int | None = None,
    max_r: float = 0.5,
    max_beta: float = 1.0,
) -> list[Gate]:
    """``depth`` layers of single-mode gates on every mode, each followed by a random two-mode gate.

    Squeezing magnitudes stay below ``max_r`` and displacements below ``max_beta``.
    """
    depth = 1 if depth is None else depth

    def phase():
        return float(rng.uniform(0, 2 * np.pi))

    gates: list[Gate] = []
    for _ in range(depth):
        for k in range(m):
            gates.append(Gate.rot(phase(), k))
            gates.append(Gate.sqz(rng.uniform(0, max_r) * np.exp(1j * phase()), k))
        if m > 1:
            j, k = (int(x) for x in rng.choice(m, size=2, replace=False))
            if rng.random() < 0.7:
                gates.append(Gate.bs(float(rng.uniform(0, np.pi)), phase(), j, k))
            else:
                gates.append(Gate.tms(rng.uniform(0, max_r) * np.exp(1j * phase()), j, k))
    for k in range(m):
        gates.append(Gate.disp(rng.uniform(0, max_beta) * np.exp(1j * phase()), k))
    return gates


def random_gaussian(m: int, rng: np.random.Generator, **kwargs) -> GaussianUnitary:
    return from_gates(random_gates(m, rng, **kwargs), m)


def random_core(m: int, degree: int, support: int, rng: np.random.Generator) -> CoreState:
    """Random normalised core state with the given degree and support size."""
    pool = [p for p in itertools.product(range(degree + 1), repeat=m) if sum(p) <= degree]
    top = [p for p in pool if sum(p) == degree]
    support = min(support, len(pool))
    first = top[rng.integers(len(top))]
    rest = [p for p in pool if p != first]
    chosen = [first] + [rest[i] for i in rng.choice(len(rest), size=support - 1, replace=False)]
    amps = rng.normal(size=support) + 1j * rng.normal(size=support)
    return new_core(zip(chosen, amps))


def random_outcome(m: int, rng: np.random.Generator, max_abs: float = 1.5) -> np.ndarray:
    r = max_abs * np.sqrt(rng.uniform(0, 1, size=m))
    return r * np.exp(1j * rng.uniform(0, 2 * np.pi, size=m))
