r"""Permanent, hafnian and loop hafnian kernels, plus the reduced matrices they are fed.

The fast loop hafnian is the power-trace inclusion-exclusion over the ``2^{r/2}``
subsets of a fixed pairing of the vertices. For a subset ``Z`` of pairs let
``B`` be the zero-diagonal submatrix on those vertices, ``v`` its loop weights
and ``X`` the involution swapping the two vertices of every pair. Alternating
cycles and loop-terminated paths are generated by

.. math::

    f_Z(x) = \exp\Big(\sum_{j\ge1} \Big[\frac{\mathrm{tr}((XB)^j)}{2j}
             + \frac12 v^T (XB)^{j-1} X v\Big] x^j\Big),

and :math:`\mathrm{lHaf}(R) = \sum_Z (-1)^{k-|Z|} [x^k] f_Z(x)` with ``k`` pairs.
Odd sizes are padded with an isolated vertex of loop weight 1.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from gcore._threads import thread_count

SYMMETRY_TOL = 1e-10
_CHUNK = 2048


def _as_square(M, name: str) -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} requires a square matrix, got shape {M.shape}")
    return M


def _check_symmetric(M: np.ndarray, name: str) -> None:
    if M.size and not np.allclose(M, M.T, rtol=0, atol=SYMMETRY_TOL * max(1.0, np.abs(M).max())):
        raise ValueError(f"{name} requires a symmetric matrix")


def single_pair_matchings(n: int) -> Iterator[list[tuple[int, ...]]]:
    """Partitions of ``range(n)`` into blocks of size 1 and 2, in lexicographic order."""

    def rec(rest: tuple[int, ...]):
        if not rest:
            yield []
            return
        i, tail = rest[0], rest[1:]
        for sub in rec(tail):
            yield [(i,)] + sub
        for t, j in enumerate(tail):
            for sub in rec(tail[:t] + tail[t + 1 :]):
                yield [(i, j)] + sub

    yield from rec(tuple(range(n)))


def perfect_matchings(n: int) -> Iterator[list[tuple[int, int]]]:
    """Perfect matchings of ``range(n)`` in lexicographic order (none for odd ``n``)."""

    def rec(rest: tuple[int, ...]):
        if not rest:
            yield []
            return
        i, tail = rest[0], rest[1:]
        for t, j in enumerate(tail):
            for sub in rec(tail[:t] + tail[t + 1 :]):
                yield [(i, j)] + sub

    if n % 2 == 0:
        yield from rec(tuple(range(n)))


def loop_hafnian_enum(R) -> complex:
    """Reference loop hafnian by explicit enumeration of single-pair matchings."""
    R = _as_square(R, "loop_hafnian")
    _check_symmetric(R, "loop_hafnian")
    total = 0j
    for partition in single_pair_matchings(R.shape[0]):
        term = 1 + 0j
        for block in partition:
            term *= R[block[0], block[-1]]
        total += term
    return total


def hafnian_enum(A) -> complex:
    A = _as_square(A, "hafnian")
    _check_symmetric(A, "hafnian")
    total = 0j
    for matching in perfect_matchings(A.shape[0]):
        term = 1 + 0j
        for i, j in matching:
            term *= A[i, j]
        total += term
    return total


def _pair_swap(z: int) -> np.ndarray:
    return np.arange(2 * z).reshape(z, 2)[:, ::-1].reshape(-1)


def _subset_terms(A0: np.ndarray, D: np.ndarray, k: int, subsets: np.ndarray) -> complex:
    """Sum of ``[x^k] f_Z`` over a batch of equal-size subsets (without the sign)."""
    z = subsets.shape[1]
    idx = np.stack([2 * subsets, 2 * subsets + 1], axis=-1).reshape(len(subsets), 2 * z)
    swap = _pair_swap(z)
    XB = A0[idx[:, swap, None], idx[:, None, :]]
    v = D[idx]
    eig = np.linalg.eigvals(XB)

    c = np.empty((len(subsets), k + 1), dtype=complex)
    c[:, 0] = 0
    power = np.ones_like(eig)
    u = v[:, swap]
    for j in range(1, k + 1):
        power = power * eig
        c[:, j] = power.sum(axis=1) / (2 * j) + 0.5 * np.einsum("bi,bi->b", v, u)
        u = np.einsum("bij,bj->bi", XB, u)

    # coefficients of exp(sum_j c_j x^j): g_n = (1/n) sum_j j c_j g_{n-j}
    g = np.zeros((len(subsets), k + 1), dtype=complex)
    g[:, 0] = 1
    jc = c * np.arange(k + 1)
    for n in range(1, k + 1):
        g[:, n] = np.einsum("bj,bj->b", jc[:, 1 : n + 1], g[:, n - 1 :: -1][:, :n]) / n
    return complex(g[:, k].sum())


def _batches(k: int) -> list[tuple[int, np.ndarray]]:
    out = []
    for z in range(1, k + 1):
        combos = np.array(list(itertools.combinations(range(k), z)), dtype=np.intp)
        for start in range(0, len(combos), _CHUNK):
            out.append((z, combos[start : start + _CHUNK]))
    return out


def loop_hafnian_fast(R) -> complex:
    """Loop hafnian in ``O(r^3 2^{r/2})`` by power traces (see module docstring)."""
    R = _as_square(R, "loop_hafnian").astype(complex)
    _check_symmetric(R, "loop_hafnian")
    n = R.shape[0]
    if n == 0:
        return 1 + 0j
    D = np.diag(R).copy()
    A0 = R.copy()
    np.fill_diagonal(A0, 0)
    if n % 2:
        A0 = np.pad(A0, ((0, 1), (0, 1)))
        D = np.append(D, 1)
        n += 1
    k = n // 2
    batches = _batches(k)

    def work(item):
        z, subsets = item
        return (-1) ** (k - z) * _subset_terms(A0, D, k, subsets)

    threads = thread_count()
    if threads > 1 and len(batches) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, batches))
    else:
        parts = [work(b) for b in batches]
    # fixed reduction order, independent of the schedule
    return complex(math.fsum(p.real for p in parts) + 1j * math.fsum(p.imag for p in parts))


def loop_hafnian(R, method: str = "fast") -> complex:
    if method == "fast":
        return loop_hafnian_fast(R)
    if method == "enum":
        return loop_hafnian_enum(R)
    raise ValueError(f"unknown method {method!r}")


def hafnian(A, method: str = "fast") -> complex:
    """Hafnian (diagonal ignored); ``1`` for the empty matrix, ``0`` for odd sizes."""
    A = _as_square(A, "hafnian")
    _check_symmetric(A, "hafnian")
    if A.shape[0] % 2:
        return 0j
    if method == "enum":
        return hafnian_enum(A)
    A0 = A.astype(complex)
    np.fill_diagonal(A0, 0)
    return loop_hafnian(A0, method)


def permanent_enum(B) -> complex:
    B = _as_square(B, "permanent")
    n = B.shape[0]
    return sum((complex(np.prod(B[np.arange(n), list(s)])) for s in itertools.permutations(range(n))), 0j)


def permanent(B) -> complex:
    """Ryser's formula with Gray-code row sums, ``O(2^n n)``."""
    B = _as_square(B, "permanent").astype(complex)
    n = B.shape[0]
    if n == 0:
        return 1 + 0j
    row_sums = np.zeros(n, dtype=complex)
    total = 0j
    gray_prev = 0
    for i in range(1, 2**n):
        gray = i ^ (i >> 1)
        bit = (gray ^ gray_prev).bit_length() - 1
        if gray & (1 << bit):
            row_sums += B[:, bit]
        else:
            row_sums -= B[:, bit]
        gray_prev = gray
        sign = -1 if bin(gray).count("1") % 2 else 1
        total += sign * np.prod(row_sums)
    return (-1) ** n * total


@dataclass(frozen=True, eq=False)
class ReducedMatrixSpec:
    """Inputs of the reduced-matrix construction: ``V`` (2m x 2m), ``D`` (2m), ``p``, ``q``."""

    V: np.ndarray
    D: np.ndarray
    p: tuple[int, ...]
    q: tuple[int, ...]

    def __post_init__(self):
        V = np.asarray(self.V)
        D = np.asarray(self.D).reshape(-1)
        p, q = tuple(int(k) for k in self.p), tuple(int(k) for k in self.q)
        if V.ndim != 2 or V.shape[0] != V.shape[1] or V.shape[0] % 2:
            raise ValueError(f"V must be 2m x 2m, got shape {V.shape}")
        m = V.shape[0] // 2
        if D.shape[0] != 2 * m or len(p) != m or len(q) != m:
            raise ValueError(f"dimension mismatch: V is {V.shape}, D has {D.shape[0]}, p {len(p)}, q {len(q)}")
        if min(p + q, default=0) < 0:
            raise ValueError("occupations must be nonnegative")
        if V.dtype != object:
            _check_symmetric(V, "reduced matrix")
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "D", D)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def repeats(self) -> list[int]:
        """Index multiset: ``k`` repeated ``p_k`` times, then ``m + k`` repeated ``q_k`` times."""
        m = len(self.p)
        idx = [k for k in range(m) for _ in range(self.p[k])]
        return idx + [m + k for k in range(m) for _ in range(self.q[k])]


def build_reduced_matrix(spec: ReducedMatrixSpec) -> np.ndarray:
    """Repeat rows/columns of ``V`` per ``(p, q)``, then overwrite the diagonal with repeated ``D``.

    The order matters when an index repeats: the off-diagonal copies keep
    ``V[k, k]``. Works on object arrays (symbolic entries) as well.
    """
    idx = spec.repeats
    A = spec.V[np.ix_(idx, idx)].copy()
    for i, k in enumerate(idx):
        A[i, i] = spec.D[k]
    return A


def t_integral(spec: ReducedMatrixSpec, method: str = "fast") -> complex:
    r"""Gaussian integral against derivatives of the delta: ``(-1)^{|p|+|q|} lHaf(A_{p,q})``."""
    sign = (-1) ** (sum(spec.p) + sum(spec.q))
    return sign * loop_hafnian(build_reduced_matrix(spec), method)


def loop_hafnian_of(V: np.ndarray, D: np.ndarray, idx: Sequence[int]) -> complex:
    """``lHaf`` of the reduced matrix for an explicit index multiset (density hot path)."""
    A = V[np.ix_(idx, idx)].copy()
    A[np.arange(len(idx)), np.arange(len(idx))] = D[list(idx)]
    return loop_hafnian_fast(A)
