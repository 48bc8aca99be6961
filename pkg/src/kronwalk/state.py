from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import InvalidArgument

if TYPE_CHECKING:
    from .reduce import Partition

NORM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized amplitudes over vertices, or over partition cells when
    ``partition`` is set (coefficient of cell C multiplies the uniform
    superposition over C)."""

    amplitudes: np.ndarray
    partition: Partition | None = None

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex)
        if amps.ndim != 1:
            raise InvalidArgument("amplitudes must be a vector")
        if self.partition is not None and amps.size != self.partition.num_cells:
            raise InvalidArgument(
                f"reduced state has {amps.size} entries for {self.partition.num_cells} cells"
            )
        drift = abs(np.linalg.norm(amps) - 1.0)
        if drift > NORM_TOL:
            raise InvalidArgument(f"state norm differs from 1 by {drift:.3e}")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def reduced(self) -> bool:
        return self.partition is not None

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))
