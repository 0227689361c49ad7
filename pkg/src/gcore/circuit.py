"""Circuit descriptions shared by the compiler, the oracle and the file format."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from gcore.corestate import CoreState, vacuum
from gcore.gaussian import Gate, GaussianUnitary, compose, from_gate, identity


@dataclass(frozen=True)
class Ladder:
    """Single-mode photon addition (``add``) or subtraction (``sub``)."""

    mode: int
    kind: str = "add"

    def __post_init__(self):
        if self.kind not in ("add", "sub"):
            raise ValueError(f"ladder kind must be 'add' or 'sub', got {self.kind!r}")
        if self.mode < 0:
            raise ValueError(f"negative mode index {self.mode}")


Op = Union[Gate, GaussianUnitary, Ladder]


@dataclass(frozen=True, eq=False)
class Circuit:
    """Input core state followed by an ordered list of operations (first acts first)."""

    modes: int
    input: CoreState
    ops: tuple[Op, ...] = ()
    measured_modes: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        if self.modes < 1:
            raise ValueError(f"number of modes must be positive, got {self.modes}")
        if self.input.modes != self.modes:
            raise ValueError(f"input has {self.input.modes} modes, circuit has {self.modes}")
        for op in self.ops:
            if isinstance(op, Gate):
                if max(op.modes) >= self.modes:
                    raise ValueError(f"gate {op.kind} on modes {op.modes} out of range for {self.modes} modes")
            elif isinstance(op, Ladder):
                if op.mode >= self.modes:
                    raise ValueError(f"{op.kind} on mode {op.mode} out of range for {self.modes} modes")
            elif isinstance(op, GaussianUnitary):
                if op.modes != self.modes:
                    raise ValueError(f"Gaussian layer has {op.modes} modes, circuit has {self.modes}")
            else:
                raise TypeError(f"unsupported operation {op!r}")
        if self.measured_modes is not None:
            mm = tuple(int(k) for k in self.measured_modes)
            if not mm or len(set(mm)) != len(mm) or any(not 0 <= k < self.modes for k in mm):
                raise ValueError(f"invalid measured modes {mm}")
            object.__setattr__(self, "measured_modes", mm)

    @classmethod
    def from_vacuum(cls, modes: int, ops=(), measured_modes=None) -> Circuit:
        return cls(modes, vacuum(modes), tuple(ops), measured_modes)

    @property
    def ladder_events(self) -> list[Ladder]:
        return [op for op in self.ops if isinstance(op, Ladder)]

    @property
    def n_additions(self) -> int:
        return sum(1 for op in self.ladder_events if op.kind == "add")

    @property
    def gaussian_ops(self) -> list[Gate | GaussianUnitary]:
        return [op for op in self.ops if not isinstance(op, Ladder)]

    def unitary(self) -> GaussianUnitary:
        """Composition of every Gaussian operation, ladder events skipped."""
        G = identity(self.modes)
        for op in self.gaussian_ops:
            G = compose(op if isinstance(op, GaussianUnitary) else from_gate(op, self.modes), G)
        return G
