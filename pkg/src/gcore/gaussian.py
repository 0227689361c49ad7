r"""Multimode Gaussian unitaries in the complex (Bogoliubov) representation.

A Gaussian unitary :math:`\hat U` on ``m`` modes is stored as the affine
Heisenberg action on the ladder vector :math:`\xi = (\hat a_1, \dots, \hat a_m,
\hat a_1^\dagger, \dots, \hat a_m^\dagger)`:

.. math::

    \hat U^\dagger \xi \hat U = S \xi + \tilde d, \qquad \tilde d = (d, d^*).

Equivalently, ``S`` and ``d`` map the doubled mean vector :math:`(\mu, \mu^*)`
of any input state to that of :math:`\hat U|\psi\rangle`, and the covariance
matrix transforms as :math:`V \mapsto S V S^\dagger`. The matrix has the block
form ``[[A, B], [B*, A*]]``. Conjugating row ``k`` of ``S`` gives the action on
:math:`\hat a_k^\dagger`, i.e. the same matrix read in the ordering
:math:`(\hat a^\dagger, \hat a)` is ``conj(S)``.

Gate conventions (the only place they are fixed):

* ``disp(beta)``: :math:`\exp(\beta \hat a^\dagger - \beta^* \hat a)`,
  :math:`\hat a \mapsto \hat a + \beta`.
* ``rot(phi)``: :math:`\exp(i\varphi \hat n)`, :math:`\hat a \mapsto e^{i\varphi}\hat a`.
* ``sqz(xi)``, :math:`\xi = r e^{i\theta}`:
  :math:`\exp[\tfrac12(\xi^* \hat a^2 - \xi \hat a^{\dagger 2})]`,
  :math:`\hat a \mapsto \cosh r\,\hat a - e^{i\theta}\sinh r\,\hat a^\dagger`.
  The squeezed vacuum then has stellar function
  :math:`\propto \exp(-\tfrac12 e^{i\theta}\tanh(r) z^2)`.
* ``bs(theta, phi)`` on ``(j, k)``:
  :math:`\exp[\theta(e^{i\varphi}\hat a_j \hat a_k^\dagger - e^{-i\varphi}\hat a_j^\dagger \hat a_k)]`,
  :math:`\hat a_j \mapsto \cos\theta\,\hat a_j - e^{-i\varphi}\sin\theta\,\hat a_k`,
  :math:`\hat a_k \mapsto e^{i\varphi}\sin\theta\,\hat a_j + \cos\theta\,\hat a_k`.
* ``tms(xi)`` on ``(j, k)``:
  :math:`\exp(\xi^* \hat a_j \hat a_k - \xi \hat a_j^\dagger \hat a_k^\dagger)`,
  :math:`\hat a_j \mapsto \cosh r\,\hat a_j - e^{i\theta}\sinh r\,\hat a_k^\dagger`.
* ``swap`` on ``(j, k)``: exchanges the two modes.

Global phases are never tracked.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import linalg

STRUCTURE_TOL = 1e-10

GATE_ARITY = {"disp": 1, "rot": 1, "sqz": 1, "bs": 2, "tms": 2, "swap": 2}
GATE_NPARAMS = {"disp": 1, "rot": 1, "sqz": 1, "bs": 2, "tms": 1, "swap": 0}


@dataclass(frozen=True)
class Gate:
    """An elementary Gaussian gate.

    ``params`` per kind: ``disp`` (beta,), ``rot`` (phi,), ``sqz`` (xi,),
    ``bs`` (theta, phi), ``tms`` (xi,), ``swap`` ().
    """

    kind: str
    modes: tuple[int, ...]
    params: tuple[complex, ...] = ()

    def __post_init__(self):
        if self.kind not in GATE_ARITY:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "modes", tuple(int(k) for k in self.modes))
        object.__setattr__(self, "params", tuple(self.params))
        if len(self.modes) != GATE_ARITY[self.kind]:
            raise ValueError(f"{self.kind} acts on {GATE_ARITY[self.kind]} mode(s), got {self.modes}")
        if len(set(self.modes)) != len(self.modes):
            raise ValueError(f"{self.kind} needs distinct modes, got {self.modes}")
        if any(k < 0 for k in self.modes):
            raise ValueError(f"negative mode index in {self.modes}")
        if len(self.params) != GATE_NPARAMS[self.kind]:
            raise ValueError(f"{self.kind} takes {GATE_NPARAMS[self.kind]} parameter(s), got {len(self.params)}")
        for p in self.params:
            if not cmath.isfinite(complex(p)):
                raise ValueError(f"non-finite parameter in {self.kind}: {p!r}")
        if self.kind in ("rot", "bs"):
            for p in self.params:
                if complex(p).imag != 0:
                    raise ValueError(f"{self.kind} parameters must be real, got {p!r}")

    @classmethod
    def disp(cls, beta: complex, mode: int) -> Gate:
        return cls("disp", (mode,), (complex(beta),))

    @classmethod
    def rot(cls, phi: float, mode: int) -> Gate:
        return cls("rot", (mode,), (float(phi),))

    @classmethod
    def sqz(cls, xi: complex, mode: int) -> Gate:
        return cls("sqz", (mode,), (complex(xi),))

    @classmethod
    def bs(cls, theta: float, phi: float, j: int, k: int) -> Gate:
        return cls("bs", (j, k), (float(theta), float(phi)))

    @classmethod
    def tms(cls, xi: complex, j: int, k: int) -> Gate:
        return cls("tms", (j, k), (complex(xi),))

    @classmethod
    def swap(cls, j: int, k: int) -> Gate:
        return cls("swap", (j, k))


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GaussianUnitary:
    """Affine symplectic action ``(S, d)`` of a Gaussian unitary (see module docstring)."""

    S: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        S = _frozen(self.S)
        d = _frozen(self.d).reshape(-1)
        if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2 or S.shape[0] == 0:
            raise ValueError(f"S must be a nonempty 2m x 2m matrix, got shape {S.shape}")
        if d.shape[0] != S.shape[0] // 2:
            raise ValueError(f"displacement has length {d.shape[0]}, expected {S.shape[0] // 2}")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "d", d)

    @property
    def modes(self) -> int:
        return self.S.shape[0] // 2

    @property
    def d_tilde(self) -> np.ndarray:
        return np.concatenate([self.d, self.d.conj()])

    def allclose(self, other: GaussianUnitary, atol: float = 1e-9) -> bool:
        return (
            self.modes == other.modes
            and np.allclose(self.S, other.S, rtol=0, atol=atol)
            and np.allclose(self.d, other.d, rtol=0, atol=atol)
        )


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Pure Gaussian state: complex covariance ``cov`` and doubled mean ``disp = (d, d*)``."""

    cov: np.ndarray
    disp: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "cov", _frozen(self.cov))
        object.__setattr__(self, "disp", _frozen(self.disp).reshape(-1))

    @property
    def modes(self) -> int:
        return self.cov.shape[0] // 2


def _blocks(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.block([[A, B], [B.conj(), A.conj()]])


def identity(m: int) -> GaussianUnitary:
    if m < 1:
        raise ValueError(f"number of modes must be positive, got {m}")
    return GaussianUnitary(np.eye(2 * m), np.zeros(m))


def from_gate(g: Gate, m: int) -> GaussianUnitary:
    """Symplectic representation of an elementary gate embedded in ``m`` modes."""
    if m < 1:
        raise ValueError(f"number of modes must be positive, got {m}")
    if max(g.modes) >= m:
        raise ValueError(f"gate {g.kind} on modes {g.modes} does not fit in {m} modes")
    A = np.eye(m, dtype=complex)
    B = np.zeros((m, m), dtype=complex)
    d = np.zeros(m, dtype=complex)
    idx = np.ix_(g.modes, g.modes)

    if g.kind == "disp":
        d[g.modes[0]] = g.params[0]
    elif g.kind == "rot":
        A[idx] = cmath.exp(1j * g.params[0].real)
    elif g.kind == "sqz":
        r, theta = abs(g.params[0]), cmath.phase(g.params[0])
        A[idx] = math.cosh(r)
        B[idx] = -cmath.exp(1j * theta) * math.sinh(r)
    elif g.kind == "bs":
        theta, phi = g.params[0].real, g.params[1].real
        c, s = math.cos(theta), math.sin(theta)
        A[idx] = [[c, -cmath.exp(-1j * phi) * s], [cmath.exp(1j * phi) * s, c]]
    elif g.kind == "tms":
        r, theta = abs(g.params[0]), cmath.phase(g.params[0])
        A[idx] = math.cosh(r) * np.eye(2)
        B[idx] = -cmath.exp(1j * theta) * math.sinh(r) * np.array([[0, 1], [1, 0]])
    elif g.kind == "swap":
        A[idx] = [[0, 1], [1, 0]]
    return GaussianUnitary(_blocks(A, B), d)


def from_gates(gates: Sequence[Gate], m: int) -> GaussianUnitary:
    """Compose a gate list applied left to right (first element acts first)."""
    G = identity(m)
    for g in gates:
        G = compose(from_gate(g, m), G)
    return G


def permutation(perm: Sequence[int]) -> GaussianUnitary:
    """Passive mode permutation sending the state of mode ``perm[i]`` to mode ``i``."""
    m = len(perm)
    if sorted(perm) != list(range(m)):
        raise ValueError(f"not a permutation: {perm}")
    A = np.zeros((m, m), dtype=complex)
    A[np.arange(m), list(perm)] = 1
    return GaussianUnitary(_blocks(A, np.zeros((m, m))), np.zeros(m))


def compose(G2: GaussianUnitary, G1: GaussianUnitary) -> GaussianUnitary:
    """Apply ``G1`` then ``G2``."""
    if G1.modes != G2.modes:
        raise ValueError(f"mode-count mismatch: {G2.modes} vs {G1.modes}")
    m = G1.modes
    S = G2.S @ G1.S
    d = (G2.S @ G1.d_tilde)[:m] + G2.d
    return GaussianUnitary(S, d)


def _metric(m: int) -> np.ndarray:
    return np.diag(np.concatenate([np.ones(m), -np.ones(m)]))


def dagger(G: GaussianUnitary) -> GaussianUnitary:
    m = G.modes
    K = _metric(m)
    S_inv = K @ G.S.conj().T @ K
    return GaussianUnitary(S_inv, -(S_inv @ G.d_tilde)[:m])


def validate_symplectic(S: np.ndarray, tol: float = STRUCTURE_TOL) -> bool:
    """Check block-conjugate structure and the Bogoliubov conditions."""
    S = np.asarray(S, dtype=complex)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {S.shape}")
    if S.shape[0] % 2:
        raise ValueError(f"expected even dimension, got {S.shape[0]}")
    m = S.shape[0] // 2
    A, B = S[:m, :m], S[:m, m:]
    if not np.allclose(S[m:, :m], B.conj(), rtol=0, atol=tol):
        return False
    if not np.allclose(S[m:, m:], A.conj(), rtol=0, atol=tol):
        return False
    if not np.allclose(A @ A.conj().T - B @ B.conj().T, np.eye(m), rtol=0, atol=tol):
        return False
    return bool(np.allclose(A @ B.T, B @ A.T, rtol=0, atol=tol))


def doubled(alpha: Sequence[complex]) -> np.ndarray:
    a = np.asarray(alpha, dtype=complex).reshape(-1)
    return np.concatenate([a, a.conj()])


def heterodyne_pullback(G: GaussianUnitary, alpha: Sequence[complex]) -> GaussianState:
    r"""Covariance and mean of the Gaussian state :math:`\hat G^\dagger|\alpha\rangle`."""
    a = np.asarray(alpha, dtype=complex).reshape(-1)
    if a.shape[0] != G.modes:
        raise ValueError(f"outcome has {a.shape[0]} entries, circuit has {G.modes} modes")
    Gd = dagger(G)
    cov = 0.5 * Gd.S @ Gd.S.conj().T
    return GaussianState(cov, Gd.S @ doubled(a) + Gd.d_tilde)


@dataclass(frozen=True, eq=False)
class QForm:
    """Cholesky factorisation of ``cov + 1/2`` with its log-determinant."""

    chol: tuple = field(repr=False)
    logdet: float

    @classmethod
    def of(cls, cov: np.ndarray) -> QForm:
        n = cov.shape[0]
        shifted = cov + 0.5 * np.eye(n)
        if not np.allclose(shifted, shifted.conj().T, rtol=0, atol=1e-9):
            raise np.linalg.LinAlgError("covariance matrix is not Hermitian")
        c = linalg.cho_factor(0.5 * (shifted + shifted.conj().T), lower=True)
        return cls(c, float(2 * np.sum(np.log(np.abs(np.diag(c[0]))))))

    def solve(self, b: np.ndarray) -> np.ndarray:
        return linalg.cho_solve(self.chol, b)

    def inverse(self) -> np.ndarray:
        n = self.chol[0].shape[0]
        M = self.solve(np.eye(n, dtype=complex))
        return 0.5 * (M + M.conj().T)


def q_function(st: GaussianState, beta: Sequence[complex]) -> float:
    """Husimi Q function of a pure Gaussian state, density w.r.t. dRe dIm per mode."""
    m = st.modes
    diff = doubled(beta) - st.disp
    qf = QForm.of(st.cov)
    quad = diff.conj() @ qf.solve(diff)
    if abs(quad.imag) > 1e-9 * max(1.0, abs(quad.real)):
        raise ArithmeticError(f"quadratic form has imaginary part {quad.imag:.3e}")
    return float(math.exp(-0.5 * quad.real - 0.5 * qf.logdet) / math.pi**m)
