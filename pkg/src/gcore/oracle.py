"""Brute-force truncated-Fock simulator used to cross-check the hafnian path.

Every gate is built from its quadratic generator in a per-mode cutoff, padded
by a few extra levels, exponentiated and cropped. The generator graph splits
into small invariant blocks (total photon number for beam splitters, photon
difference for two-mode squeezing) and each block is exponentiated on its own.
Nothing here imports the hafnian or density modules.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy import linalg, sparse
from scipy.sparse import csgraph

from gcore.circuit import Circuit, Ladder
from gcore.corestate import CoreState, ZeroStateError
from gcore.gaussian import Gate

DEFAULT_CUTOFF = 25
MAX_MODES = 3


class CutoffError(ValueError):
    """The requested cutoff cannot represent the query to the required accuracy."""


@dataclass(frozen=True)
class OracleConfig:
    cutoff: int = DEFAULT_CUTOFF
    pad: int = 12
    coherent_tol: float = 1e-8
    leakage_tol: float = 1e-5


@dataclass(frozen=True, eq=False)
class TruncatedState:
    """Dense amplitudes of shape ``(cutoff + 1,) * modes``; ``leakage = 1 - norm^2`` before renormalisation."""

    amps: np.ndarray
    leakage: float = 0.0
    ladder_norm: float = 1.0

    @property
    def modes(self) -> int:
        return self.amps.ndim

    @property
    def cutoff(self) -> int:
        return self.amps.shape[0] - 1

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))


@dataclass(frozen=True)
class OracleResult:
    density: float
    error_bound: float
    leakage: float
    coherent_tail: float
    ladder_norm: float = field(default=1.0)


@lru_cache(maxsize=None)
def _ladder(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)


def _block_expm(gen: sparse.spmatrix) -> np.ndarray:
    n = gen.shape[0]
    ncomp, labels = csgraph.connected_components(abs(gen) + sparse.eye(n), directed=False)
    out = np.zeros((n, n), dtype=complex)
    gen = gen.tocsr()
    for c in range(ncomp):
        idx = np.flatnonzero(labels == c)
        out[np.ix_(idx, idx)] = linalg.expm(gen[idx][:, idx].toarray())
    return out


def _generator(g: Gate, dim: int) -> sparse.csr_matrix:
    a = sparse.csr_matrix(_ladder(dim))
    ad = a.conj().T
    if g.kind == "disp":
        beta = complex(g.params[0])
        return beta * ad - beta.conjugate() * a
    if g.kind == "rot":
        return 1j * float(g.params[0].real) * (ad @ a)
    if g.kind == "sqz":
        xi = complex(g.params[0])
        return 0.5 * (xi.conjugate() * (a @ a) - xi * (ad @ ad))
    eye = sparse.identity(dim, format="csr")
    a1, a2 = sparse.kron(a, eye, "csr"), sparse.kron(eye, a, "csr")
    a1d, a2d = a1.conj().T, a2.conj().T
    if g.kind == "bs":
        theta, phi = g.params[0].real, g.params[1].real
        return theta * (np.exp(1j * phi) * (a1 @ a2d) - np.exp(-1j * phi) * (a1d @ a2))
    if g.kind == "tms":
        xi = complex(g.params[0])
        return xi.conjugate() * (a1 @ a2) - xi * (a1d @ a2d)
    raise ValueError(f"no generator for gate kind {g.kind!r}")


def truncated_gate(g: Gate, cutoff: int, pad: int = 12) -> np.ndarray:
    """Operator on the gate's own mode(s), shape ``(cutoff+1)^k x (cutoff+1)^k`` for ``k`` modes.

    Rotations are diagonal and exact. Beam splitters conserve photon number and
    need no padding; other gates are exponentiated with ``pad`` extra levels.
    """
    if cutoff < 1:
        raise CutoffError(f"cutoff must be >= 1, got {cutoff}")
    dim = cutoff + 1
    if g.kind == "rot":
        return np.diag(np.exp(1j * float(g.params[0].real) * np.arange(dim)))
    if g.kind == "swap":
        P = np.zeros((dim * dim, dim * dim))
        for i in range(dim):
            for j in range(dim):
                P[j * dim + i, i * dim + j] = 1
        return P.astype(complex)
    big = dim if g.kind == "bs" else dim + pad
    U = _block_expm(_generator(g, big))
    if len(g.modes) == 1:
        return U[:dim, :dim]
    keep = (np.arange(big)[:, None] * big + np.arange(big)[None, :])[:dim, :dim].reshape(-1)
    return U[np.ix_(keep, keep)]


def _apply(amps: np.ndarray, op: np.ndarray, modes: Sequence[int]) -> np.ndarray:
    k = len(modes)
    dim = amps.shape[0]
    moved = np.moveaxis(amps, list(modes), list(range(k)))
    shape = moved.shape
    out = (op @ moved.reshape(dim**k, -1)).reshape(shape)
    return np.moveaxis(out, list(range(k)), list(modes))


def _apply_ladder(amps: np.ndarray, ev: Ladder) -> np.ndarray:
    a = _ladder(amps.shape[0])
    op = a.conj().T if ev.kind == "add" else a
    return _apply(amps, op, [ev.mode])


def embed(C: CoreState, cutoff: int) -> np.ndarray:
    if C.degree > cutoff:
        raise CutoffError(f"core degree {C.degree} exceeds cutoff {cutoff}")
    if C.modes > MAX_MODES:
        raise ValueError(f"oracle supports at most {MAX_MODES} modes, got {C.modes}")
    amps = np.zeros((cutoff + 1,) * C.modes, dtype=complex)
    for p, c in C.terms:
        amps[p] = c
    return amps


def simulate(c: Circuit, config: OracleConfig = OracleConfig()) -> TruncatedState:
    """Run the circuit in the truncated space.

    Ladder events apply truncated creation/annihilation operators; the final
    state is renormalised and the accumulated ladder norm is reported, matching
    the compiled core's recorded norm.
    """
    L = config.cutoff
    if c.input.degree + c.n_additions >= L:
        raise CutoffError(f"cutoff {L} too small for input degree {c.input.degree} plus {c.n_additions} additions")
    if not c.input.normalized:
        raise ValueError(f"input core state is not normalized (norm {c.input.norm:.12g})")
    amps = embed(c.input, L)
    ladder_norm = 1.0
    lost = 0.0
    for op in c.ops:
        if isinstance(op, Gate):
            before = np.linalg.norm(amps)
            amps = _apply(amps, truncated_gate(op, L, config.pad), op.modes)
            lost += before**2 - np.linalg.norm(amps) ** 2
        elif isinstance(op, Ladder):
            before = np.linalg.norm(amps)
            amps = _apply_ladder(amps, op)
            after = np.linalg.norm(amps)
            if after == 0:
                raise ZeroStateError("ladder operator annihilated the state")
            ladder_norm *= after / before
            amps = amps / after
        else:
            raise TypeError(f"oracle cannot simulate {type(op).__name__}; pass elementary gates")
    leakage = max(0.0, 1.0 - float(np.linalg.norm(amps)) ** 2, lost)
    if leakage > config.leakage_tol:
        raise CutoffError(f"truncation leakage {leakage:.2e} exceeds {config.leakage_tol:.0e} at cutoff {L}")
    amps = amps / np.linalg.norm(amps)
    return TruncatedState(amps, leakage, ladder_norm)


def coherent_tail(alpha: complex, cutoff: int) -> float:
    """Probability mass of ``|alpha>`` above the cutoff."""
    x = abs(alpha) ** 2
    head = math.fsum(math.exp(-x + n * math.log(x) - math.lgamma(n + 1)) if x > 0 else float(n == 0) for n in range(cutoff + 1))
    return max(0.0, 1.0 - head)


def coherent_bra(alpha: complex, cutoff: int) -> np.ndarray:
    n = np.arange(cutoff + 1)
    logfact = np.array([math.lgamma(k + 1) for k in n])
    return np.exp(-0.5 * abs(alpha) ** 2 - 0.5 * logfact) * np.conj(alpha) ** n


def density_from_state(
    st: TruncatedState, alpha: Sequence[complex], measured: Sequence[int] | None = None, config: OracleConfig = OracleConfig()
) -> OracleResult:
    r"""``|<alpha|psi>|^2 / pi^k`` for a simulated state; unmeasured modes are traced out."""
    m = st.modes
    measured = list(range(m)) if measured is None else list(measured)
    alpha = [complex(a) for a in alpha]
    if len(alpha) != len(measured):
        raise ValueError(f"{len(alpha)} outcomes for {len(measured)} measured modes")
    if len(set(measured)) != len(measured) or any(not 0 <= k < m for k in measured):
        raise ValueError(f"invalid measured modes {measured} for {m} modes")
    tail = max((coherent_tail(a, st.cutoff) for a in alpha), default=0.0)
    if tail > config.coherent_tol:
        raise CutoffError(f"coherent tail {tail:.2e} exceeds {config.coherent_tol:.0e} at cutoff {st.cutoff}")
    amps = st.amps
    # contract measured axes with coherent bras, highest axis first
    for k, a in sorted(zip(measured, alpha), key=lambda t: -t[0]):
        amps = np.tensordot(amps, coherent_bra(a, st.cutoff), axes=([k], [0]))
    k = len(measured)
    prob = float(np.sum(np.abs(amps) ** 2)) / math.pi**k
    bound = (st.leakage + 2 * math.sqrt(tail * k)) / math.pi**k
    return OracleResult(prob, bound, st.leakage, tail, st.ladder_norm)


def oracle_density(
    c: Circuit, alpha: Sequence[complex], config: OracleConfig = OracleConfig(), measured: Sequence[int] | None = None
) -> OracleResult:
    r"""Simulate ``c`` and evaluate the heterodyne density at ``alpha`` on ``measured`` modes (default all)."""
    return density_from_state(simulate(c, config), alpha, measured, config)
