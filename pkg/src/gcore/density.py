r"""Heterodyne output densities of Gaussian circuits with core-state inputs.

For a core state :math:`|C\rangle = \sum_p c_p |p\rangle` and Gaussian unitary
:math:`\hat G`, the density at outcome :math:`\alpha` is

.. math::

    \Pr[\alpha] = \kappa \sum_{p, q} \frac{c_p c_q^*}{\sqrt{p!\,q!}}\,
    \mathrm{lHaf}(A_{p,q}(V, D)),

where :math:`\kappa`, ``V`` and ``D`` come from the covariance and mean of
:math:`\hat G^\dagger|\alpha\rangle` (see :func:`kernel_matrices`). The sign
:math:`(-1)^{|p|+|q|}` produced by integrating against derivatives of the
delta function cancels the one carried by the P function of
:math:`|p\rangle\langle q|`, so no sign survives.

Densities are with respect to :math:`d^2\alpha = d\mathrm{Re}\,\alpha\, d\mathrm{Im}\,\alpha`
per measured mode.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from gcore._threads import thread_count
from gcore.corestate import CoreState
from gcore.gaussian import (
    GaussianUnitary,
    QForm,
    compose,
    doubled,
    heterodyne_pullback,
    permutation,
)
from gcore.hafnian import loop_hafnian_of

NEGATIVE_TOL = 1e-9
IMAG_TOL = 1e-9
SYMMETRY_TOL = 1e-9


class NumericalError(ArithmeticError):
    """A density came out negative or complex beyond roundoff."""


@dataclass(frozen=True, eq=False)
class GaussianKernel:
    """Per-outcome data shared by every ``(p, q)`` pair: prefactor, ``V`` and ``D``."""

    kappa: float
    V: np.ndarray
    D: np.ndarray

    @property
    def modes(self) -> int:
        return self.V.shape[0] // 2


@dataclass(frozen=True)
class DensityQuery:
    unitary: GaussianUnitary
    input: CoreState
    outcome: tuple[complex, ...]
    measured_modes: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "outcome", tuple(complex(a) for a in self.outcome))
        m = self.unitary.modes
        if self.input.modes != m:
            raise ValueError(f"input has {self.input.modes} modes, unitary has {m}")
        measured = tuple(range(m)) if self.measured_modes is None else tuple(self.measured_modes)
        if len(set(measured)) != len(measured) or not measured or any(not 0 <= k < m for k in measured):
            raise ValueError(f"invalid measured modes {measured} for {m} modes")
        if len(self.outcome) != len(measured):
            raise ValueError(f"{len(self.outcome)} outcomes for {len(measured)} measured modes")
        for a in self.outcome:
            if not (math.isfinite(a.real) and math.isfinite(a.imag)):
                raise ValueError(f"non-finite outcome {a}")
        object.__setattr__(self, "measured_modes", measured)


@dataclass(frozen=True)
class DensityResult:
    """``n_terms`` counts the ``s^2`` terms of the double sum; ``n_hafnians`` the ones evaluated."""

    density: float
    kappa: float
    n_terms: int
    n_hafnians: int


def _swap_blocks(m: int) -> np.ndarray:
    return np.block([[np.zeros((m, m)), np.eye(m)], [np.eye(m), np.zeros((m, m))]])


def _kernel(quad_cov: np.ndarray, L: np.ndarray, r: np.ndarray) -> GaussianKernel:
    r"""Kernel of ``exp[-1/2 (r - L b)^† (cov + 1/2)^{-1} (r - L b)] / (pi^k sqrt det)`` times ``e^{|b|^2}``."""
    k = quad_cov.shape[0] // 2
    m = L.shape[1] // 2
    qf = QForm.of(quad_cov)
    Nr = qf.solve(r)
    NL = qf.solve(L)
    quad = r.conj() @ Nr
    W = L.conj().T @ NL
    W = 0.5 * (W + W.conj().T)
    V = _swap_blocks(m) @ (np.eye(2 * m) - W)
    if not np.allclose(V, V.T, rtol=0, atol=SYMMETRY_TOL * max(1.0, np.abs(V).max())):
        raise NumericalError("reduced quadratic form is not symmetric; convention mismatch")
    V = 0.5 * (V + V.T)
    D = r.conj() @ NL
    if abs(quad.imag) > IMAG_TOL * max(1.0, abs(quad.real)):
        raise NumericalError(f"Gaussian exponent has imaginary part {quad.imag:.3e}")
    kappa = math.exp(-0.5 * quad.real - 0.5 * qf.logdet) / math.pi**k
    return GaussianKernel(kappa, V, D)


def kernel_matrices(G: GaussianUnitary, alpha: Sequence[complex]) -> tuple[np.ndarray, np.ndarray]:
    r"""``V = X [1 - (cov + 1/2)^{-1}]`` and ``D = [d^† (cov + 1/2)^{-1}]^T`` for :math:`\hat G^\dagger|\alpha\rangle`."""
    K = full_kernel(G, alpha)
    return K.V, K.D


# interface name kept for callers that use it
theorem1_matrices = kernel_matrices


def full_kernel(G: GaussianUnitary, alpha: Sequence[complex]) -> GaussianKernel:
    st = heterodyne_pullback(G, alpha)
    m = G.modes
    # cov = S S^†/2 with S the pullback; identity "L" keeps the displacement as is
    return _kernel(st.cov, np.eye(2 * m, dtype=complex), st.disp)


def prefactor_kappa(G: GaussianUnitary, alpha: Sequence[complex]) -> float:
    return full_kernel(G, alpha).kappa


def marginal_kernel(G: GaussianUnitary, alpha: Sequence[complex], measured: Sequence[int]) -> GaussianKernel:
    r"""Kernel for heterodyne detection of ``measured`` modes only, the rest traced out.

    The measured modes are first brought to the front by a mode permutation
    composed after ``G``. The Husimi function of
    :math:`\hat G^\dagger(|\alpha\rangle\langle\alpha| \otimes \mathbb 1)\hat G` at
    :math:`\beta` equals the reduced Q function of the Gaussian state
    :math:`\hat G|\beta\rangle` on the measured modes: its mean is
    ``(S beta~ + d~)`` restricted to those modes and its covariance is the
    matching block of ``S S^†/2``. Integrating the unmeasured outcomes is
    therefore the closed-form marginal of a Gaussian.
    """
    m = G.modes
    measured = list(measured)
    rest = [k for k in range(m) if k not in measured]
    Gp = compose(permutation(measured + rest), G)
    k = len(measured)
    sel = list(range(k)) + [m + i for i in range(k)]
    L = Gp.S[sel, :]
    cov = 0.5 * L @ L.conj().T
    r = doubled(alpha) - Gp.d_tilde[sel]
    return _kernel(cov, L, r)


def _indices(p: Sequence[int], offset: int) -> list[int]:
    return [offset + k for k, n in enumerate(p) for _ in range(n)]


def _pair_sum(C: CoreState, K: GaussianKernel) -> tuple[float, float]:
    """Sum over stored support pairs, using term(q, p) = conj(term(p, q)).

    Returns the real sum and the absolute scale used for tolerance checks.
    """
    m = C.modes
    terms = [(c / math.sqrt(math.prod(math.factorial(n) for n in p)), _indices(p, 0), _indices(p, m)) for p, c in C.terms]
    diag = 0j
    off = 0.0
    scale = 0.0
    for i, (ci, pi_, _) in enumerate(terms):
        for j in range(i, len(terms)):
            cj, _, qj = terms[j]
            t = ci * cj.conjugate() * loop_hafnian_of(K.V, K.D, pi_ + qj)
            scale += abs(t) * (1 if i == j else 2)
            if i == j:
                diag += t
            else:
                off += 2 * t.real
    if abs(diag.imag) > IMAG_TOL * max(1.0, scale):
        raise NumericalError(f"density has imaginary part {diag.imag:.3e}")
    return diag.real + off, scale


def _finalize(value: float) -> float:
    if value < -NEGATIVE_TOL:
        raise NumericalError(f"density {value:.3e} is negative beyond roundoff")
    return max(value, 0.0)


def _require_normalized(C: CoreState) -> None:
    if not C.normalized:
        raise ValueError(f"input core state is not normalized (norm {C.norm:.12g})")


def density_from_kernel(C: CoreState, K: GaussianKernel) -> float:
    total, _ = _pair_sum(C, K)
    return _finalize(K.kappa * total)


def core_density(G: GaussianUnitary, C: CoreState, alpha: Sequence[complex]) -> float:
    """Density of heterodyne outcome ``alpha`` on all modes of ``G|C>``."""
    _require_normalized(C)
    if C.modes != G.modes:
        raise ValueError(f"input has {C.modes} modes, unitary has {G.modes}")
    return density_from_kernel(C, full_kernel(G, alpha))


def fock_density(G: GaussianUnitary, n: Sequence[int], alpha: Sequence[complex]) -> float:
    """Single-term case: ``kappa / n! * lHaf(A_{n,n})``."""
    n = tuple(int(k) for k in n)
    if len(n) != G.modes:
        raise ValueError(f"occupation has {len(n)} modes, unitary has {G.modes}")
    K = full_kernel(G, alpha)
    value = loop_hafnian_of(K.V, K.D, _indices(n, 0) + _indices(n, G.modes))
    if abs(value.imag) > IMAG_TOL * max(1.0, abs(value.real)):
        raise NumericalError(f"density has imaginary part {value.imag:.3e}")
    return _finalize(K.kappa * value.real / math.prod(math.factorial(k) for k in n))


def marginal_density(
    G: GaussianUnitary, C: CoreState, alpha: Sequence[complex], measured: Sequence[int]
) -> float:
    """Density of heterodyne outcomes ``alpha`` on ``measured`` modes, others unobserved."""
    q = DensityQuery(G, C, tuple(alpha), tuple(measured))
    _require_normalized(C)
    return density_from_kernel(C, marginal_kernel(G, q.outcome, q.measured_modes))


def evaluate(query: DensityQuery) -> DensityResult:
    """Dispatch a query to the full or marginal evaluator."""
    _require_normalized(query.input)
    m = query.unitary.modes
    if query.measured_modes == tuple(range(m)):
        K = full_kernel(query.unitary, query.outcome)
    else:
        K = marginal_kernel(query.unitary, query.outcome, query.measured_modes)
    s = query.input.support_size
    return DensityResult(density_from_kernel(query.input, K), K.kappa, s * s, s * (s + 1) // 2)


def evaluate_many(queries: Sequence[DensityQuery]) -> list[DensityResult]:
    """Evaluate independent queries, preserving input order."""
    threads = thread_count()
    if threads > 1 and len(queries) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(evaluate, queries))
    return [evaluate(q) for q in queries]

