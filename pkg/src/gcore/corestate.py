"""Sparse multimode core states (finite support over the Fock basis)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

NORM_TOL = 1e-9

FockIndex = tuple[int, ...]


class ZeroStateError(ValueError):
    """A ladder operation annihilated the state (e.g. subtraction from vacuum)."""


@dataclass(frozen=True, eq=False)
class CoreState:
    """Map from occupation tuples to nonzero amplitudes, sorted lexicographically.

    Build instances with :func:`new_core`; the constructor does not prune or
    sort its input.
    """

    modes: int
    terms: tuple[tuple[FockIndex, complex], ...]
    normalized: bool

    @property
    def degree(self) -> int:
        return max(sum(p) for p, _ in self.terms)

    @property
    def support_size(self) -> int:
        return len(self.terms)

    @property
    def norm(self) -> float:
        return math.sqrt(sum(abs(c) ** 2 for _, c in self.terms))

    def amplitude(self, occ: Sequence[int]) -> complex:
        return self.as_dict().get(tuple(occ), 0j)

    def as_dict(self) -> dict[FockIndex, complex]:
        return dict(self.terms)

    def __repr__(self) -> str:
        body = ", ".join(f"{p}: {c:.6g}" for p, c in self.terms)
        return f"CoreState(modes={self.modes}, {{{body}}})"


def new_core(
    terms: Iterable[tuple[Sequence[int], complex]] | Mapping[Sequence[int], complex],
    normalize: bool = True,
) -> CoreState:
    """Build a core state, summing duplicate indices and pruning exact zeros.

    With ``normalize=False`` the amplitudes are kept as given and the state is
    flagged normalized only if its norm is 1 within tolerance.
    """
    items = terms.items() if isinstance(terms, Mapping) else terms
    acc: dict[FockIndex, complex] = {}
    m = None
    for occ, amp in items:
        occ = tuple(int(k) for k in occ)
        if m is None:
            m = len(occ)
        elif len(occ) != m:
            raise ValueError(f"inconsistent index lengths: {len(occ)} vs {m}")
        if any(k < 0 for k in occ):
            raise ValueError(f"negative occupation in {occ}")
        amp = complex(amp)
        if not (math.isfinite(amp.real) and math.isfinite(amp.imag)):
            raise ValueError(f"non-finite amplitude for {occ}")
        acc[occ] = acc.get(occ, 0j) + amp
    if m is None or m == 0:
        raise ValueError("core state needs at least one mode and one term")
    kept = sorted((p, c) for p, c in acc.items() if c != 0)
    if not kept:
        raise ValueError("all amplitudes are zero")
    norm = math.sqrt(sum(abs(c) ** 2 for _, c in kept))
    if normalize:
        kept = [(p, c / norm) for p, c in kept]
        norm = 1.0
    return CoreState(m, tuple(kept), abs(norm - 1) <= NORM_TOL)


def vacuum(m: int) -> CoreState:
    return new_core([((0,) * m, 1.0)])


def fock(occ: Sequence[int]) -> CoreState:
    return new_core([(tuple(occ), 1.0)])


def degree(C: CoreState) -> int:
    return C.degree


def support_size(C: CoreState) -> int:
    return C.support_size


def stellar_eval(C: CoreState, z: Sequence[complex]) -> complex:
    r"""Stellar polynomial :math:`\sum_p c_p z^p / \sqrt{p!}`."""
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.shape[0] != C.modes:
        raise ValueError(f"expected {C.modes} variables, got {z.shape[0]}")
    total = 0j
    for p, c in C.terms:
        mono = complex(np.prod(z ** np.array(p)))
        total += c * mono / math.sqrt(math.prod(math.factorial(k) for k in p))
    return total


def apply_affine_ladder(
    C: CoreState, d: complex, create: Sequence[complex], annih: Sequence[complex]
) -> CoreState:
    r"""Apply :math:`d + \sum_l s_l \hat a_l^\dagger + t_l \hat a_l` exactly; result unnormalized.

    Raises :class:`ZeroStateError` if every amplitude cancels.
    """
    m = C.modes
    create = np.asarray(create, dtype=complex).reshape(-1)
    annih = np.asarray(annih, dtype=complex).reshape(-1)
    if create.shape[0] != m or annih.shape[0] != m:
        raise ValueError(f"coefficient vectors must have length {m}")
    out: dict[FockIndex, complex] = {}

    def add(occ: FockIndex, amp: complex):
        out[occ] = out.get(occ, 0j) + amp

    for p, c in C.terms:
        if d != 0:
            add(p, d * c)
        for l in range(m):
            if create[l] != 0:
                q = p[:l] + (p[l] + 1,) + p[l + 1 :]
                add(q, create[l] * math.sqrt(p[l] + 1) * c)
            if annih[l] != 0 and p[l] > 0:
                q = p[:l] + (p[l] - 1,) + p[l + 1 :]
                add(q, annih[l] * math.sqrt(p[l]) * c)
    if not any(v != 0 for v in out.values()):
        raise ZeroStateError("ladder operator annihilated the state")
    return new_core(out.items(), normalize=False)


def overlap(C1: CoreState, C2: CoreState) -> complex:
    r""":math:`\langle C_1 | C_2 \rangle`."""
    if C1.modes != C2.modes:
        raise ValueError(f"mode mismatch: {C1.modes} vs {C2.modes}")
    other = C2.as_dict()
    return sum((c.conjugate() * other[p] for p, c in C1.terms if p in other), 0j)


def normalized(C: CoreState) -> CoreState:
    return new_core(C.terms, normalize=True)
